//! Acceptance suite: one PASS/FAIL line per criterion. All values are exact
//! (zero tolerance) except the sampling checks, which use 5 sigma binomial
//! bounds.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use z3pcp::csp::CspInstance;
use z3pcp::dictator::{
    bigfourier_bound, expansion_terms, monte_carlo_accepts, pass_probability,
    verify_coupling_bound, verify_fgg_formula, verify_real_part_floor, verify_vanishing,
    DictatorSpec, TestSpec,
};
use z3pcp::fourier::{
    fourier_transform, fourier_transform_naive, is_unit_parseval, support_on_sum_one, FunctionTable,
};
use z3pcp::gadgets::{
    apply_to_instance, certify_gamma, extend_instance_assignment, threshold_map, Gadget,
};
use z3pcp::longcode::{
    constraint_variable_reduction, dictator_assignment, fourier_decode, lc_value,
    longcode_4nat_reduction, LabelCoverInstance, Labeling, ReductionCaps,
};
use z3pcp::predicates::{all_quads, arithmetize_4nat_exact, eval_twopair, nat4};
use z3pcp::rational::{fmt_rational, int, pow3, rat, Rational};
use z3pcp::z3::Z3String;

type Outcome = Result<String, String>;
type Generator = Box<dyn Fn(&mut ChaCha8Rng) -> CspInstance>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq(what: &str, want: &Rational, got: &Rational) -> Result<(), String> {
    ensure(want == got, || {
        format!(
            "{what}: expected {}, got {}",
            fmt_rational(want),
            fmt_rational(got)
        )
    })
}

fn gadget_certificates() -> Outcome {
    let g1 = Gadget::four_nat_to_two_nlin();
    let g2 = Gadget::two_nlin_to_two_to_one();
    let g12 = Gadget::compose(&g1, &g2).map_err(|e| e.to_string())?;
    let mut got = Vec::new();
    for (g, want) in [(&g1, rat(3, 4)), (&g2, rat(1, 2)), (&g12, rat(7, 8))] {
        let cert = certify_gamma(g).map_err(|e| e.to_string())?;
        eq(g.name(), &want, &cert.gamma)?;
        got.push(fmt_rational(&cert.gamma));
    }
    Ok(format!("gamma = {}", got.join(", ")))
}

fn threshold_calculus() -> Outcome {
    let (c, s) = threshold_map(&int(1), &rat(2, 3), &rat(7, 8)).map_err(|e| e.to_string())?;
    eq("c", &int(1), &c)?;
    eq("s (7/8)", &rat(23, 24), &s)?;
    let (c, s) = threshold_map(&int(1), &rat(2, 3), &rat(3, 4)).map_err(|e| e.to_string())?;
    eq("c", &int(1), &c)?;
    eq("s (3/4)", &rat(11, 12), &s)?;
    Ok("(1, 23/24) and (1, 11/12)".into())
}

fn dictator_pass() -> Outcome {
    let k = 2;
    for d in [1, 2] {
        let f = DictatorSpec::f(0).table(k, d).unwrap();
        let matching = DictatorSpec::g(0, d - 1).table(k, d).unwrap();
        let cross = DictatorSpec::g(1, 0).table(k, d).unwrap();
        let nat = TestSpec::four_nat(k, d).unwrap();
        let nlin = TestSpec::two_nlin(k, d).unwrap();
        let p = |s: &TestSpec, g: &FunctionTable, h: Option<&FunctionTable>| {
            pass_probability(s, &f, g, h).unwrap()
        };
        eq(
            &format!("4NAT matching d={d}"),
            &int(1),
            &p(&nat, &matching, None),
        )?;
        eq(
            &format!("2-NLin matching d={d}"),
            &int(1),
            &p(&nlin, &matching, Some(&matching)),
        )?;
        eq(
            &format!("4NAT cross-block d={d}"),
            &rat(2, 3),
            &p(&nat, &cross, None),
        )?;
        eq(
            &format!("2-NLin cross-block d={d}"),
            &rat(11, 12),
            &p(&nlin, &cross, Some(&cross)),
        )?;
    }
    Ok("K=2, d in {1,2}: matching 1/1, cross-block 2/3 (4NAT) and 11/12 (2-NLin)".into())
}

fn predicate_densities() -> Outcome {
    let nat = all_quads().filter(|&t| nat4(t)).count();
    let tp = all_quads().filter(|&t| eval_twopair(t)).count();
    ensure(nat == 45, || format!("4NAT count {nat}"))?;
    ensure(tp == 18, || format!("TwoPair count {tp}"))?;
    ensure(all_quads().all(|t| !eval_twopair(t) || nat4(t)), || {
        "TwoPair does not imply 4NAT".into()
    })?;
    for t in all_quads() {
        let v = arithmetize_4nat_exact(t);
        let want = if nat4(t) { int(1) } else { int(0) };
        ensure(v.is_real() && v.re() == want, || {
            format!("arithmetization at {t:?} gives {v}")
        })?;
    }
    Ok("45/81 4NAT, 18/81 TwoPair, implication and arithmetization on 81/81".into())
}

fn folded_tables(n: usize) -> Vec<FunctionTable> {
    let reps = pow3(n - 1) as usize;
    (0..pow3(reps))
        .map(|i| {
            FunctionTable::folded_from_representatives(n, Z3String::from_index(i, reps).coords())
        })
        .collect()
}

/// Every exact identity for one folded pair `(f, g)` at shape `(K, d)`.
fn identities(k: usize, d: usize, f: &FunctionTable, g: &FunctionTable) -> Result<(), String> {
    let spec = TestSpec::four_nat(k, d).unwrap();
    let tag = || format!("K={k} d={d} f={:?} g={:?}", f.entries(), g.entries());
    let (a, b) = verify_vanishing(f, g, &spec).map_err(|e| e.to_string())?;
    ensure(a.is_zero() && b.is_zero(), || {
        format!("vanishing ({a}, {b}) at {}", tag())
    })?;
    let (direct, fourier) = verify_fgg_formula(f, g, d, k).map_err(|e| e.to_string())?;
    ensure(direct == fourier, || {
        format!("fgg {direct} vs {fourier} at {}", tag())
    })?;
    let t = expansion_terms(&spec, f, g).map_err(|e| e.to_string())?;
    ensure(
        t.full_expansion() == t.nat4 && t.reduced_expansion() == t.nat4,
        || format!("expansion at {}", tag()),
    )?;
    let floor = verify_real_part_floor(g, &spec).map_err(|e| e.to_string())?;
    ensure(floor >= rat(-1, 2), || {
        format!("Re E[ggg] = {floor} at {}", tag())
    })?;
    let b = bigfourier_bound(f, g, d, k).map_err(|e| e.to_string())?;
    ensure(b.gap() >= Rational::zero(), || {
        format!("bigfourier gap {} at {}", b.gap(), tag())
    })?;
    ensure(b.lhs == t.nat4, || format!("E[4NAT] mismatch at {}", tag()))?;
    Ok(())
}

fn fourier_suite() -> Outcome {
    // Parseval and fast = naive on every table with n <= 2.
    let mut tables = 0;
    for n in 1..=2 {
        for i in 0..pow3(pow3(n) as usize) {
            let f = FunctionTable::new(
                n,
                Z3String::from_index(i, pow3(n) as usize).coords().to_vec(),
            )
            .unwrap();
            let hat = fourier_transform(&f).unwrap();
            ensure(is_unit_parseval(&hat), || {
                format!("Parseval fails on {:?}", f.entries())
            })?;
            ensure(hat == fourier_transform_naive(&f).unwrap(), || {
                "fast != naive".into()
            })?;
            ensure(!f.is_folded() || support_on_sum_one(&hat), || {
                format!("folded support off |alpha| = 1: {:?}", f.entries())
            })?;
            tables += 1;
        }
    }
    // Exhaustive folded pairs at dK = 2.
    let mut pairs = 0;
    for (k, d) in [(1, 2), (2, 1), (1, 1)] {
        for f in folded_tables(k) {
            for g in folded_tables(k * d) {
                identities(k, d, &f, &g)?;
                pairs += 1;
            }
        }
    }
    // 100 seeded random folded pairs at each shape with dK <= 4.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random = 0;
    for (k, d) in [(1, 4), (2, 2), (4, 1), (1, 3)] {
        for _ in 0..100 {
            let f = FunctionTable::random_folded(k, &mut rng).unwrap();
            let g = FunctionTable::random_folded(k * d, &mut rng).unwrap();
            ensure(support_on_sum_one(&fourier_transform(&g).unwrap()), || {
                "random folded support".into()
            })?;
            identities(k, d, &f, &g)?;
            random += 1;
        }
    }
    // Coupling bound on 50 seeded triples.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..50 {
        let (k, d) = [(1, 2), (2, 2), (1, 4), (2, 1), (1, 3)][i % 5];
        let f = FunctionTable::random_folded(k, &mut rng).unwrap();
        let g = FunctionTable::random_folded(k * d, &mut rng).unwrap();
        let h = FunctionTable::random_folded(k * d, &mut rng).unwrap();
        let (lhs, rhs) = verify_coupling_bound(k, d, &f, &g, &h).unwrap();
        ensure(lhs <= rhs, || format!("coupling {lhs} > {rhs}"))?;
    }
    Ok(format!(
        "{tables} tables (n <= 2), {pairs} exhaustive folded pairs, {random} random folded pairs, 50 coupling triples"
    ))
}

fn gadget_transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g1 = Gadget::four_nat_to_two_nlin();
    let g2 = Gadget::two_nlin_to_two_to_one();
    let g12 = Gadget::compose(&g1, &g2).unwrap();
    let cases: [(&Gadget, Rational, Generator); 3] = [
        (
            &g1,
            rat(3, 4),
            Box::new(|r| common::random_four_nat(4, 4, r)),
        ),
        (
            &g2,
            rat(1, 2),
            Box::new(|r| common::random_two_nlin(3, 4, r)),
        ),
        (
            &g12,
            rat(7, 8),
            Box::new(|r| common::random_four_nat(3, 1, r)),
        ),
    ];
    let mut non_trivial = 0;
    for (g, gamma, gen) in &cases {
        for _ in 0..20 {
            let src = gen(&mut rng);
            let (s, t, want) = common::transfer(g, gamma, &src);
            eq(g.name(), &want, &t)?;
            non_trivial += (s < int(1)) as usize;
        }
    }
    ensure(non_trivial > 0, || {
        "every random instance was satisfiable".into()
    })?;
    let cv = constraint_variable_reduction(&common::three_nlin()).unwrap();
    eq("cv", &rat(5, 6), &cv.brute_force_optimum().unwrap().0)?;
    Ok(format!(
        "60 random instances ({non_trivial} unsatisfiable), cv 2/3 -> 5/6"
    ))
}

fn push_through(lc: &LabelCoverInstance, lab: &Labeling) -> Result<[Rational; 3], String> {
    let nat = longcode_4nat_reduction(lc, ReductionCaps::default()).map_err(|e| e.to_string())?;
    let asg = dictator_assignment(lc, lab).map_err(|e| e.to_string())?;
    let v0 = nat.value(&asg).unwrap();
    let g1 = Gadget::four_nat_to_two_nlin();
    let nlin = apply_to_instance(&g1, &nat).unwrap();
    let asg1 = extend_instance_assignment(&g1, &nat, &nlin, &asg).unwrap();
    let v1 = nlin.value(&asg1).unwrap();
    let g2 = Gadget::two_nlin_to_two_to_one();
    let two = constraint_variable_reduction(&nlin).unwrap();
    let asg2 = extend_instance_assignment(&g2, &nlin, &two, &asg1).unwrap();
    let v2 = two.value(&asg2).unwrap();
    Ok([v0, v1, v2])
}

fn end_to_end() -> Outcome {
    let mut sizes = Vec::new();
    for (lc, lab) in [
        (common::lc_k1_d2(), Labeling::new([("u", 0), ("v", 1)])),
        (
            common::lc_k2_d2(),
            Labeling::new([("u0", 1), ("v0", 2), ("v1", 0)]),
        ),
    ] {
        eq("label cover value", &int(1), &lc_value(&lc, &lab).unwrap())?;
        let vals = push_through(&lc, &lab)?;
        for (stage, v) in ["4NAT", "2-NLin", "2-to-1"].iter().zip(&vals) {
            eq(&format!("K={} d={} {stage}", lc.k(), lc.d()), &int(1), v)?;
        }
        sizes.push(format!("K={} d={}", lc.k(), lc.d()));
    }
    Ok(format!(
        "value 1 through 4NAT, 2-NLin, 2-to-1 for {}",
        sizes.join(" and ")
    ))
}

fn within_sigmas(hits: u64, n: u64, p: f64, sigmas: f64) -> bool {
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    (hits as f64 - mean).abs() <= sigmas * sd
}

fn decoder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, c) in [(1, 0), (3, 2), (4, 1)] {
        let hat = fourier_transform(&FunctionTable::dictator(n, c).unwrap()).unwrap();
        for _ in 0..200 {
            let got = fourier_decode(&hat, &mut rng).unwrap();
            ensure(got == c, || {
                format!("dictator {c} of arity {n} decoded to {got}")
            })?;
        }
    }
    let sum = FunctionTable::from_fn(2, |x| x.get(0) + x.get(1));
    let hat = fourier_transform(&sum).unwrap();
    let draws = 10_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut first = 0u64;
    for _ in 0..draws {
        first += (fourier_decode(&hat, &mut rng).unwrap() == 0) as u64;
    }
    ensure(within_sigmas(first, draws, 0.5, 5.0), || {
        format!("coordinate 1 drawn {first}/{draws}")
    })?;
    Ok(format!(
        "dictators exact; x1+x2 split {first}/{}",
        draws - first
    ))
}

fn monte_carlo() -> Outcome {
    let draws = 1_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let f2 = DictatorSpec::f(0).table(2, 1).unwrap();
    let g2 = DictatorSpec::g(1, 0).table(2, 1).unwrap();
    let f1 = FunctionTable::random_folded(1, &mut rng).unwrap();
    let g4 = FunctionTable::random_folded(2, &mut rng).unwrap();
    let configs: [(
        &str,
        TestSpec,
        &FunctionTable,
        &FunctionTable,
        Option<&FunctionTable>,
    ); 3] = [
        (
            "4NAT cross-block K=2 d=1",
            TestSpec::four_nat(2, 1).unwrap(),
            &f2,
            &g2,
            None,
        ),
        (
            "2-NLin cross-block K=2 d=1",
            TestSpec::two_nlin(2, 1).unwrap(),
            &f2,
            &g2,
            Some(&g2),
        ),
        (
            "4NAT random folded K=1 d=2",
            TestSpec::four_nat(1, 2).unwrap(),
            &f1,
            &g4,
            None,
        ),
    ];
    let mut lines = Vec::new();
    for (name, spec, f, g, h) in configs {
        let exact = pass_probability(&spec, f, g, h).unwrap();
        let p = exact.to_f64().unwrap();
        let hits = monte_carlo_accepts(&spec, f, g, h, draws, &mut rng).unwrap();
        ensure(within_sigmas(hits, draws, p, 5.0), || {
            format!("{name}: {hits}/{draws} vs exact {}", fmt_rational(&exact))
        })?;
        lines.push(format!(
            "{name} {:.4} vs {}",
            hits as f64 / draws as f64,
            fmt_rational(&exact)
        ));
    }
    Ok(lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("gadget certificates", gadget_certificates),
        ("threshold calculus", threshold_calculus),
        ("dictator pass probabilities", dictator_pass),
        ("predicate densities", predicate_densities),
        ("Fourier identity suite", fourier_suite),
        ("instance-level gadget transfer", gadget_transfer),
        ("end-to-end completeness", end_to_end),
        ("decoder sanity", decoder),
        ("Monte Carlo consistency", monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
