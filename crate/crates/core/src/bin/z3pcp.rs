use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use z3pcp::commands::{
    cmd_fourier_check, cmd_reduce, cmd_solve, cmd_test_sim, cmd_verify_gadget, parse_function_spec,
    parse_test_kind, Caps, FourierLemma, Pipeline,
};
use z3pcp::error::Result;
use z3pcp::io::instance_to_json;
use z3pcp::longcode::ReductionCaps;
use z3pcp::rational::parse_rational;
use z3pcp::report::Report;

#[derive(Parser)]
#[command(
    name = "z3pcp",
    version,
    about = "Exact checks for Z3 CSP gadgets, dictator tests and reductions"
)]
struct Cli {
    /// Largest function-table arity (and K*d for test enumeration).
    #[arg(long, global = true, default_value_t = z3pcp::fourier::DEFAULT_MAX_ARITY)]
    max_arity: usize,
    /// Largest brute-force search space.
    #[arg(long, global = true, default_value_t = z3pcp::csp::DEFAULT_MAX_ASSIGNMENTS)]
    max_assignments: u128,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the report (or, for `reduce`, the instance) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify a gadget's gamma: 4nat-to-2nlin, 2nlin-to-2to1 or composed.
    VerifyGadget { name: String },
    /// Exact acceptance of a dictator test. Functions are dict:<block>[:<col>],
    /// file:<path> or random-folded:<seed>.
    TestSim {
        /// 4nat or 2nlin.
        kind: String,
        #[arg(short = 'k', long = "k")]
        k: usize,
        #[arg(short = 'd', long = "d")]
        d: usize,
        f: String,
        g: String,
        h: Option<String>,
    },
    /// folding, vanishing, fgg, bigfourier, arithmetize, expansion, real-part or coupling.
    FourierCheck {
        lemma: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(short = 'k', long = "k", default_value_t = 1)]
        k: usize,
        #[arg(short = 'd', long = "d", default_value_t = 2)]
        d: usize,
    },
    /// Pipelines: cv, longcode-4nat, 4nat-2nlin, 2nlin-2to1, full.
    Reduce {
        input: PathBuf,
        pipeline: String,
        /// Where to write the report; stderr otherwise.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact optimum by brute force, optionally deciding (c, s).
    Solve {
        input: PathBuf,
        #[arg(long, requires = "s")]
        c: Option<String>,
        #[arg(long, requires = "c")]
        s: Option<String>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Report> {
    let caps = Caps {
        max_arity: cli.max_arity,
        max_assignments: cli.max_assignments,
    };
    let report = match cli.cmd {
        Cmd::VerifyGadget { name } => cmd_verify_gadget(&name)?,
        Cmd::TestSim {
            kind,
            k,
            d,
            f,
            g,
            h,
        } => {
            let h = h.as_deref().map(parse_function_spec).transpose()?;
            cmd_test_sim(
                parse_test_kind(&kind)?,
                k,
                d,
                &parse_function_spec(&f)?,
                &parse_function_spec(&g)?,
                h.as_ref(),
                caps,
            )?
        }
        Cmd::FourierCheck {
            lemma,
            trials,
            k,
            d,
        } => cmd_fourier_check(
            FourierLemma::from_name(&lemma)?,
            trials,
            cli.seed,
            k,
            d,
            caps,
        )?,
        Cmd::Reduce {
            input,
            pipeline,
            report,
        } => {
            let (inst, rep) = cmd_reduce(
                &input,
                Pipeline::from_name(&pipeline)?,
                ReductionCaps::default(),
            )?;
            emit(&instance_to_json(&inst)?, cli.out.as_ref())?;
            match report {
                Some(p) => std::fs::write(p, rep.to_json()? + "\n")?,
                None => eprintln!("{}", rep.to_json()?),
            }
            return Ok(rep);
        }
        Cmd::Solve { input, c, s } => {
            let cs = match (c, s) {
                (Some(c), Some(s)) => Some((parse_rational(&c)?, parse_rational(&s)?)),
                _ => None,
            };
            cmd_solve(&input, cs, caps)?.2
        }
    };
    emit(&report.to_json()?, cli.out.as_ref())?;
    Ok(report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(r) if r.all_pass => ExitCode::SUCCESS,
        Ok(r) => {
            if let Some(c) = r.first_failure() {
                eprintln!(
                    "failed: {} (expected {}, computed {})",
                    c.name, c.expected, c.computed
                );
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
