#![allow(dead_code)]

use rand::Rng;
use z3pcp::csp::{Constraint, CspInstance, VariableId};
use z3pcp::gadgets::{apply_to_instance, Gadget};
use z3pcp::longcode::{LabelCoverInstance, LcEdge};
use z3pcp::rational::{int, rat, Rational};
use z3pcp::z3::Z3;

fn z3<R: Rng>(rng: &mut R) -> Z3 {
    Z3::reduce(rng.random_range(0..3))
}

fn name(i: usize) -> String {
    format!("x{i}")
}

/// Random FourNAT instance; variables may repeat inside a constraint.
pub fn random_four_nat<R: Rng>(n_vars: usize, n_cons: usize, rng: &mut R) -> CspInstance {
    let vars = (0..n_vars).map(|i| VariableId::z3(name(i))).collect();
    let cons = (0..n_cons)
        .map(|_| {
            let v: Vec<String> = (0..4).map(|_| name(rng.random_range(0..n_vars))).collect();
            let shifts = [z3(rng), z3(rng), z3(rng), z3(rng)];
            Constraint::four_nat(
                [&v[0], &v[1], &v[2], &v[3]],
                shifts,
                int(rng.random_range(1..4)),
            )
        })
        .collect();
    CspInstance::new(vars, cons).unwrap()
}

/// Random TwoNLin instance over distinct variable pairs.
pub fn random_two_nlin<R: Rng>(n_vars: usize, n_cons: usize, rng: &mut R) -> CspInstance {
    let vars = (0..n_vars).map(|i| VariableId::z3(name(i))).collect();
    let cons = (0..n_cons)
        .map(|_| {
            let a = rng.random_range(0..n_vars);
            let b = (a + rng.random_range(1..n_vars)) % n_vars;
            Constraint::two_nlin(&name(a), &name(b), z3(rng), int(rng.random_range(1..4)))
        })
        .collect();
    CspInstance::new(vars, cons).unwrap()
}

/// `v1 - v2 != a` for a = 0, 1, 2, weight 1/3 each; optimum 2/3.
pub fn three_nlin() -> CspInstance {
    let cons = Z3::ALL
        .iter()
        .map(|&a| Constraint::two_nlin("v1", "v2", a, rat(1, 3)))
        .collect();
    CspInstance::new(vec![VariableId::z3("v1"), VariableId::z3("v2")], cons).unwrap()
}

/// `(opt(source), opt(target), gamma + (1 - gamma) opt(source))`.
pub fn transfer(g: &Gadget, gamma: &Rational, src: &CspInstance) -> (Rational, Rational, Rational) {
    let tgt = apply_to_instance(g, src).unwrap();
    let (s, _) = src.brute_force_optimum().unwrap();
    let (t, _) = tgt.brute_force_optimum().unwrap();
    let want = gamma + (int(1) - gamma) * &s;
    (s, t, want)
}

pub fn edge(u: &str, v: &str, projection: Vec<u32>) -> LcEdge {
    LcEdge {
        u: u.into(),
        v: v.into(),
        projection,
        weight: int(1),
    }
}

/// Single edge, K=1, d=2.
pub fn lc_k1_d2() -> LabelCoverInstance {
    LabelCoverInstance::new(
        1,
        2,
        vec!["u".into()],
        vec!["v".into()],
        vec![edge("u", "v", vec![0, 0])],
    )
    .unwrap()
}

/// K=2, d=2: u0 joined to v0 and v1 with different projections; satisfied
/// by u0=1, v0=2, v1=0.
pub fn lc_k2_d2() -> LabelCoverInstance {
    LabelCoverInstance::new(
        2,
        2,
        vec!["u0".into()],
        vec!["v0".into(), "v1".into()],
        vec![
            edge("u0", "v0", vec![0, 0, 1, 1]),
            edge("u0", "v1", vec![1, 0, 0, 1]),
        ],
    )
    .unwrap()
}
