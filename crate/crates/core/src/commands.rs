//! The command layer behind the `z3pcp` binary. Every command returns a
//! [`Report`]; a run passes iff every claim in it passes.

use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::csp::{Assignment, ConstraintKind, CspInstance, DEFAULT_MAX_ASSIGNMENTS};
use crate::dictator::{
    bigfourier_bound, classify_dictators, coupling_check, expansion_terms, expected_dictator_pass,
    pass_probability, verify_coupling_bound, verify_fgg_formula, verify_real_part_floor,
    verify_vanishing, DictatorRelation, DictatorSpec, Side, TestKind, TestSpec,
    DEFAULT_MAX_SUPPORT,
};
use crate::error::{Error, Result};
use crate::fourier::{
    fourier_transform_capped, is_unit_parseval, support_on_sum_one, FunctionTable,
    DEFAULT_MAX_ARITY,
};
use crate::gadgets::{apply_to_instance, certify_gamma, threshold_map, Gadget};
use crate::io::{read_input, read_table, table_to_json, InputFile};
use crate::longcode::{constraint_variable_reduction, longcode_4nat_reduction, ReductionCaps};
use crate::predicates::{all_quads, arithmetize_4nat_exact, nat4};
use crate::rational::{fmt_rational, int, pow3, rat, Rational};
use crate::report::{Report, NO_REFERENCE};
use crate::z3::Z3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Bound on function-table arity, and on `K * d` for test enumeration.
    pub max_arity: usize,
    pub max_assignments: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_arity: DEFAULT_MAX_ARITY,
            max_assignments: DEFAULT_MAX_ASSIGNMENTS,
        }
    }
}

impl Caps {
    fn test_spec(&self, kind: TestKind, k: usize, d: usize) -> Result<TestSpec> {
        TestSpec::with_caps(
            kind,
            k,
            d,
            self.max_arity.min(crate::dictator::DEFAULT_MAX_KD),
            DEFAULT_MAX_SUPPORT,
        )
    }
}

fn gadget_by_name(name: &str) -> Result<(Gadget, Rational)> {
    match name {
        "4nat-to-2nlin" => Ok((Gadget::four_nat_to_two_nlin(), rat(3, 4))),
        "2nlin-to-2to1" => Ok((Gadget::two_nlin_to_two_to_one(), rat(1, 2))),
        "composed" => Ok((
            Gadget::compose(
                &Gadget::four_nat_to_two_nlin(),
                &Gadget::two_nlin_to_two_to_one(),
            )?,
            rat(7, 8),
        )),
        _ => Err(Error::Unsupported(format!(
            "gadget {name:?}; expected 4nat-to-2nlin, 2nlin-to-2to1 or composed"
        ))),
    }
}

/// Certifies a gadget's gamma and the resulting hardness thresholds from
/// `(1, 2/3)`.
pub fn cmd_verify_gadget(name: &str) -> Result<Report> {
    let (gadget, expected) = gadget_by_name(name)?;
    let mut report = Report::new("verify-gadget", &[name.as_bytes()]);
    let cert = certify_gamma(&gadget)?;
    let anchor = format!("{name} gadget gamma");
    report.claim_eq("gamma", &anchor, &expected, &cert.gamma);
    report.claim_count(
        "satisfying assignments extend to value 1",
        &anchor,
        cert.satisfying().filter(|e| e.best_value.is_one()).count(),
        cert.satisfying().count(),
    );
    let (c, s) = threshold_map(&int(1), &rat(2, 3), &cert.gamma)?;
    let (ce, se) = threshold_map(&int(1), &rat(2, 3), &expected)?;
    report.claim_eq(
        "completeness threshold",
        "hardness thresholds from (1, 2/3)",
        &ce,
        &c,
    );
    report.claim_eq(
        "soundness threshold",
        "hardness thresholds from (1, 2/3)",
        &se,
        &s,
    );
    report.detail("source", gadget.source_kind().name());
    report.detail("target", gadget.target_kind().name());
    report.detail("aux_variables", gadget.aux_spec().len().to_string());
    report.detail("certificate_rows", cert.entries.len().to_string());
    Ok(report)
}

/// A function argument to `test-sim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    /// 0-based block and column.
    Dictator {
        block: usize,
        column: usize,
    },
    File(PathBuf),
    RandomFolded(u64),
}

/// Parses `dict:<block>[:<col>]` (1-based), `file:<path>` or
/// `random-folded:<seed>`.
pub fn parse_function_spec(s: &str) -> Result<FunctionSpec> {
    let bad = || Error::Parse(format!("function spec {s:?}"));
    let one_based = |v: &str| -> Result<usize> {
        let n: usize = v.parse().map_err(|_| bad())?;
        n.checked_sub(1).ok_or_else(bad)
    };
    let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
    match tag {
        "dict" => {
            let mut parts = rest.split(':');
            let block = one_based(parts.next().ok_or_else(bad)?)?;
            let column = parts.next().map(one_based).transpose()?.unwrap_or(0);
            if parts.next().is_some() {
                return Err(bad());
            }
            Ok(FunctionSpec::Dictator { block, column })
        }
        "file" => Ok(FunctionSpec::File(PathBuf::from(rest))),
        "random-folded" => Ok(FunctionSpec::RandomFolded(rest.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

impl FunctionSpec {
    fn dictator(&self, side: Side) -> Option<DictatorSpec> {
        match *self {
            FunctionSpec::Dictator { block, column } => Some(DictatorSpec {
                side,
                block,
                column,
            }),
            _ => None,
        }
    }

    fn table(&self, side: Side, k: usize, d: usize) -> Result<FunctionTable> {
        let arity = if side == Side::F { k } else { d * k };
        let t = match self {
            FunctionSpec::Dictator { .. } => self.dictator(side).expect("dictator").table(k, d)?,
            FunctionSpec::File(p) => read_table(p)?,
            FunctionSpec::RandomFolded(seed) => {
                FunctionTable::random_folded(arity, &mut ChaCha8Rng::seed_from_u64(*seed))?
            }
        };
        if t.arity() != arity {
            return Err(Error::LengthMismatch {
                expected: arity,
                actual: t.arity(),
            });
        }
        Ok(t)
    }

    fn digest_bytes(&self) -> Result<Vec<u8>> {
        Ok(match self {
            FunctionSpec::File(p) => std::fs::read(p)?,
            other => format!("{other:?}").into_bytes(),
        })
    }
}

pub fn parse_test_kind(s: &str) -> Result<TestKind> {
    match s {
        "4nat" => Ok(TestKind::FourNat),
        "2nlin" => Ok(TestKind::TwoNLin),
        _ => Err(Error::Parse(format!(
            "test kind {s:?}; expected 4nat or 2nlin"
        ))),
    }
}

/// Exact acceptance probability of a dictator test, with reference values
/// for matching and cross-block dictators.
pub fn cmd_test_sim(
    kind: TestKind,
    k: usize,
    d: usize,
    f: &FunctionSpec,
    g: &FunctionSpec,
    h: Option<&FunctionSpec>,
    caps: Caps,
) -> Result<Report> {
    let spec = caps.test_spec(kind, k, d)?;
    let mut inputs = vec![
        format!("{kind:?} K={k} d={d}").into_bytes(),
        f.digest_bytes()?,
        g.digest_bytes()?,
    ];
    if let Some(h) = h {
        inputs.push(h.digest_bytes()?);
    }
    let refs: Vec<&[u8]> = inputs.iter().map(Vec::as_slice).collect();
    let mut report = Report::new("test-sim", &refs);

    let ft = f.table(Side::F, k, d)?;
    let gt = g.table(Side::G, k, d)?;
    let ht = match (kind, h) {
        (TestKind::TwoNLin, Some(h)) => Some(h.table(Side::H, k, d)?),
        (TestKind::TwoNLin, None) => return Err(Error::OutOfRange("2-NLin test needs h".into())),
        (TestKind::FourNat, _) => None,
    };
    let p = pass_probability(&spec, &ft, &gt, ht.as_ref())?;
    report.detail("pass_probability", fmt_rational(&p));

    let test_name = match kind {
        TestKind::FourNat => "4NAT test",
        TestKind::TwoNLin => "2-NLin test",
    };
    let dicts = (
        f.dictator(Side::F),
        g.dictator(Side::G),
        h.map(|h| h.dictator(Side::H)),
    );
    let relation = match dicts {
        (Some(fd), Some(gd), None) => Some(classify_dictators(&fd, &gd, None)),
        (Some(fd), Some(gd), Some(Some(hd))) => Some(classify_dictators(&fd, &gd, Some(&hd))),
        _ => None,
    };
    match relation.and_then(|r| expected_dictator_pass(kind, r).map(|e| (r, e))) {
        Some((rel, expected)) => {
            let label = match rel {
                DictatorRelation::Matching => "matching dictators",
                _ => "cross-block dictators",
            };
            report.detail("relation", label);
            report.claim_eq(
                "pass probability",
                &format!("{test_name}, {label}"),
                &expected,
                &p,
            );
        }
        None => {
            if relation == Some(DictatorRelation::Unrelated) {
                report.detail("relation", "g and h read different coordinates");
            }
            report.claim(
                "pass probability",
                &format!("{test_name} acceptance"),
                NO_REFERENCE.into(),
                fmt_rational(&p),
                true,
            );
        }
    }

    if let Some(ht) = &ht {
        let (lhs, rhs) = verify_coupling_bound(k, d, &ft, &gt, ht)?;
        report.claim(
            "2-NLin acceptance <= 3/4 + 1/4 E[4NAT]",
            "coupling bound",
            format!("<= {}", fmt_rational(&rhs)),
            fmt_rational(&lhs),
            lhs <= rhs,
        );
    } else if ft.is_folded() && gt.is_folded() {
        let b = bigfourier_bound(&ft, &gt, d, k)?;
        report.claim(
            "E[4NAT] <= 2/3 + 2/3 sum |f^| |g^|^2 2^-#alpha",
            "Fourier upper bound on 4NAT acceptance",
            format!("<= {}", fmt_rational(&b.rhs_lower)),
            fmt_rational(&b.lhs),
            b.gap() >= Rational::zero(),
        );
    }
    for (name, spec) in [("f", Some(f)), ("g", Some(g)), ("h", h)] {
        if let Some(FunctionSpec::RandomFolded(seed)) = spec {
            report.detail(&format!("{name}_seed"), seed.to_string());
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierLemma {
    Folding,
    Vanishing,
    Fgg,
    BigFourier,
    Arithmetize,
    Expansion,
    RealPart,
    Coupling,
}

impl FourierLemma {
    pub const ALL: [FourierLemma; 8] = [
        FourierLemma::Folding,
        FourierLemma::Vanishing,
        FourierLemma::Fgg,
        FourierLemma::BigFourier,
        FourierLemma::Arithmetize,
        FourierLemma::Expansion,
        FourierLemma::RealPart,
        FourierLemma::Coupling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FourierLemma::Folding => "folding",
            FourierLemma::Vanishing => "vanishing",
            FourierLemma::Fgg => "fgg",
            FourierLemma::BigFourier => "bigfourier",
            FourierLemma::Arithmetize => "arithmetize",
            FourierLemma::Expansion => "expansion",
            FourierLemma::RealPart => "real-part",
            FourierLemma::Coupling => "coupling",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

fn counterexample(what: &str, tables: &[&FunctionTable]) -> Error {
    let dump: Vec<String> = tables
        .iter()
        .map(|t| table_to_json(t).unwrap_or_else(|e| e.to_string()))
        .collect();
    Error::CertificationFailure(format!("{what}; tables: {}", dump.join(" ")))
}

/// All folded tables of arity `n` (there are `3^(3^(n-1))`).
fn all_folded(n: usize) -> impl Iterator<Item = FunctionTable> {
    let reps = pow3(n - 1) as usize;
    (0..pow3(reps)).map(move |i| {
        let vals: Vec<Z3> = crate::z3::Z3String::from_index(i, reps).coords().to_vec();
        FunctionTable::folded_from_representatives(n, &vals)
    })
}

/// Runs one family of exact identities over exhaustive small cases and
/// `trials` seeded random folded functions with `f: Z3^K`, `g: Z3^(dK)`.
/// Any exact failure is returned as an error carrying the offending tables.
pub fn cmd_fourier_check(
    lemma: FourierLemma,
    trials: usize,
    seed: u64,
    k: usize,
    d: usize,
    caps: Caps,
) -> Result<Report> {
    let dims = format!("{} trials={trials} K={k} d={d}", lemma.name());
    let mut report = Report::new("fourier-check", &[dims.as_bytes()]).with_seed(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = k * d;
    if l > caps.max_arity {
        return Err(Error::ArityCap {
            arity: l,
            cap: caps.max_arity,
        });
    }
    let mut pairs = || -> Result<Vec<(FunctionTable, FunctionTable)>> {
        (0..trials)
            .map(|_| {
                Ok((
                    FunctionTable::random_folded(k, &mut rng)?,
                    FunctionTable::random_folded(l, &mut rng)?,
                ))
            })
            .collect()
    };
    match lemma {
        FourierLemma::Folding => {
            let mut tables: Vec<FunctionTable> = (1..=2).flat_map(all_folded).collect();
            let exhaustive = tables.len();
            for _ in 0..trials {
                tables.push(FunctionTable::random_folded(l, &mut rng)?);
            }
            for t in &tables {
                let hat = fourier_transform_capped(t, caps.max_arity)?;
                if !support_on_sum_one(&hat) || !is_unit_parseval(&hat) || !hat.at(0).is_zero() {
                    return Err(counterexample(
                        "folded table with support off |alpha| = 1 mod 3",
                        &[t],
                    ));
                }
            }
            report.claim_count(
                "folded tables supported on |alpha| = 1 mod 3 with Parseval sum 1",
                "folding and Fourier support",
                tables.len(),
                tables.len(),
            );
            report.detail("exhaustive_tables", exhaustive.to_string());
        }
        FourierLemma::Arithmetize => {
            let mut hits = 0;
            for t in all_quads() {
                let v = arithmetize_4nat_exact(t);
                let want = if nat4(t) { int(1) } else { int(0) };
                if !v.is_real() || v.re() != want {
                    return Err(Error::CertificationFailure(format!(
                        "arithmetization fails at {t:?}"
                    )));
                }
                hits += 1;
            }
            report.claim_count(
                "arithmetization equals 4NAT indicator",
                "4NAT arithmetization",
                hits,
                81,
            );
        }
        FourierLemma::Vanishing => {
            let spec = caps.test_spec(TestKind::FourNat, k, d)?;
            let ps = pairs()?;
            for (f, g) in &ps {
                let (a, b) = verify_vanishing(f, g, &spec)?;
                if !a.is_zero() || !b.is_zero() {
                    return Err(counterexample(
                        &format!("nonzero correlation ({a}, {b})"),
                        &[f, g],
                    ));
                }
            }
            report.claim_count(
                "E[f conj g(y)] = E[g(y) conj g(z)] = 0",
                "vanishing terms for folded functions",
                ps.len(),
                ps.len(),
            );
        }
        FourierLemma::Fgg => {
            let ps = pairs()?;
            for (f, g) in &ps {
                let (direct, fourier) = verify_fgg_formula(f, g, d, k)?;
                if direct != fourier {
                    return Err(counterexample(
                        &format!("direct {direct} != fourier {fourier}"),
                        &[f, g],
                    ));
                }
            }
            report.claim_count(
                "E[f g g] equals its Fourier expansion",
                "E[fgg] Fourier formula",
                ps.len(),
                ps.len(),
            );
        }
        FourierLemma::BigFourier => {
            caps.test_spec(TestKind::FourNat, k, d)?;
            let ps = pairs()?;
            let mut min_gap: Option<Rational> = None;
            for (f, g) in &ps {
                let gap = bigfourier_bound(f, g, d, k)?.gap();
                if gap < Rational::zero() {
                    return Err(counterexample(
                        &format!("negative gap {}", fmt_rational(&gap)),
                        &[f, g],
                    ));
                }
                min_gap = Some(min_gap.map_or(gap.clone(), |m| m.min(gap)));
            }
            report.claim_count(
                "gap >= 0",
                "Fourier upper bound on 4NAT acceptance",
                ps.len(),
                ps.len(),
            );
            if let Some(m) = min_gap {
                report.detail("min_gap_lower_bound", fmt_rational(&m));
            }
        }
        FourierLemma::Expansion => {
            let spec = caps.test_spec(TestKind::FourNat, k, d)?;
            let ps = pairs()?;
            for (f, g) in &ps {
                let t = expansion_terms(&spec, f, g)?;
                if t.full_expansion() != t.nat4 || t.reduced_expansion() != t.nat4 {
                    return Err(counterexample(
                        &format!(
                            "E[4NAT] = {} but expansion gives {}",
                            fmt_rational(&t.nat4),
                            fmt_rational(&t.full_expansion())
                        ),
                        &[f, g],
                    ));
                }
            }
            report.claim_count(
                "five-term expansion equals E[4NAT]",
                "4NAT acceptance expansion",
                ps.len(),
                ps.len(),
            );
        }
        FourierLemma::RealPart => {
            let spec = caps.test_spec(TestKind::FourNat, k, d)?;
            let floor = rat(-1, 2);
            let mut min: Option<Rational> = None;
            for _ in 0..trials {
                let g = FunctionTable::random_folded(l, &mut rng)?;
                let v = verify_real_part_floor(&g, &spec)?;
                if v < floor {
                    return Err(counterexample(
                        &format!("Re E[ggg] = {}", fmt_rational(&v)),
                        &[&g],
                    ));
                }
                min = Some(min.map_or(v.clone(), |m| m.min(v)));
            }
            report.claim_count(
                "Re E[g(y) g(z) g(w)] >= -1/2",
                "real-part floor",
                trials,
                trials,
            );
            if let Some(m) = min {
                report.detail("min_real_part", fmt_rational(&m));
            }
        }
        FourierLemma::Coupling => {
            let mut n = 0;
            for _ in 0..trials {
                let f = FunctionTable::random_folded(k, &mut rng)?;
                let g = FunctionTable::random_folded(l, &mut rng)?;
                let h = FunctionTable::random_folded(l, &mut rng)?;
                let (lhs, rhs) = verify_coupling_bound(k, d, &f, &g, &h)?;
                if lhs > rhs {
                    return Err(counterexample(
                        "2-NLin acceptance exceeds coupling bound",
                        &[&f, &g, &h],
                    ));
                }
                n += 1;
            }
            report.claim_count(
                "2-NLin acceptance <= 3/4 + 1/4 E[4NAT]",
                "coupling bound",
                n,
                trials,
            );
            if l <= 3 {
                let c = coupling_check(k, d)?;
                report.claim(
                    "coupled (x, y, y', y'') is the 4NAT test distribution",
                    "y', y'' construction",
                    "true".into(),
                    c.joint_matches().to_string(),
                    c.joint_matches() && c.columns_twopair && c.conditionals_match,
                );
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Cv,
    LongCode4Nat,
    FourNatToTwoNLin,
    TwoNLinToTwoToOne,
    Full,
}

impl Pipeline {
    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "cv" => Pipeline::Cv,
            "longcode-4nat" => Pipeline::LongCode4Nat,
            "4nat-2nlin" => Pipeline::FourNatToTwoNLin,
            "2nlin-2to1" => Pipeline::TwoNLinToTwoToOne,
            "full" => Pipeline::Full,
            _ => return Err(Error::Parse(format!("unknown pipeline {s:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Cv => "cv",
            Pipeline::LongCode4Nat => "longcode-4nat",
            Pipeline::FourNatToTwoNLin => "4nat-2nlin",
            Pipeline::TwoNLinToTwoToOne => "2nlin-2to1",
            Pipeline::Full => "full",
        }
    }
}

fn expect_csp(input: InputFile) -> Result<CspInstance> {
    match input {
        InputFile::Csp(i) => Ok(i),
        InputFile::LabelCover(_) => Err(Error::KindMismatch {
            expected: "CSP instance".into(),
            actual: "Label Cover instance".into(),
        }),
    }
}

fn check_kinds(inst: &CspInstance, kind: ConstraintKind) -> Result<()> {
    match inst.constraints().iter().find(|c| c.kind != kind) {
        Some(c) => Err(Error::KindMismatch {
            expected: kind.name().into(),
            actual: c.kind.name().into(),
        }),
        None => Ok(()),
    }
}

/// Runs a reduction pipeline on the instance at `path`.
pub fn cmd_reduce(
    path: &Path,
    pipeline: Pipeline,
    reduction_caps: ReductionCaps,
) -> Result<(CspInstance, Report)> {
    let bytes = std::fs::read(path)?;
    let mut report = Report::new("reduce", &[pipeline.name().as_bytes(), &bytes]);
    let input = read_input(path)?;
    let out = match pipeline {
        Pipeline::Cv | Pipeline::TwoNLinToTwoToOne => {
            constraint_variable_reduction(&expect_csp(input)?)?
        }
        Pipeline::FourNatToTwoNLin => {
            let inst = expect_csp(input)?;
            check_kinds(&inst, ConstraintKind::FourNat)?;
            apply_to_instance(&Gadget::four_nat_to_two_nlin(), &inst)?
        }
        Pipeline::LongCode4Nat | Pipeline::Full => {
            let lc = match input {
                InputFile::LabelCover(lc) => lc,
                InputFile::Csp(_) => {
                    return Err(Error::KindMismatch {
                        expected: "Label Cover instance".into(),
                        actual: "CSP instance".into(),
                    })
                }
            };
            let nat = longcode_4nat_reduction(&lc, reduction_caps)?;
            if pipeline == Pipeline::LongCode4Nat {
                nat
            } else {
                let nlin = apply_to_instance(&Gadget::four_nat_to_two_nlin(), &nat)?;
                constraint_variable_reduction(&nlin)?
            }
        }
    };
    report.claim_eq(
        "weights sum to 1",
        "normalized instance",
        &int(1),
        &out.total_weight(),
    );
    report.detail("variables", out.variables().len().to_string());
    report.detail("constraints", out.constraints().len().to_string());
    Ok((out, report))
}

/// Exact optimum by brute force, with an optional `(c, s)` decision.
pub fn cmd_solve(
    path: &Path,
    cs: Option<(Rational, Rational)>,
    caps: Caps,
) -> Result<(Rational, Assignment, Report)> {
    let bytes = std::fs::read(path)?;
    let mut report = Report::new("solve", &[&bytes]);
    let inst = expect_csp(read_input(path)?)?;
    let (opt, witness) = inst.brute_force_optimum_capped(caps.max_assignments)?;
    report.claim_eq(
        "witness attains the optimum",
        "exhaustive optimum",
        &opt,
        &inst.value(&witness)?,
    );
    report.detail("optimum", fmt_rational(&opt));
    report.detail("witness", serde_json::to_string(&witness.to_map(&inst))?);
    if let Some((c, s)) = cs {
        let decision = inst.decide_capped(&c, &s, caps.max_assignments)?;
        report.detail("decision", decision.to_string());
    }
    Ok((opt, witness, report))
}
