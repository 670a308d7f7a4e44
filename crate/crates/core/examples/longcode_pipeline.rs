//! Label Cover -> 4NAT (folded long codes) -> 2-NLin -> 2-to-1, following a
//! satisfying labeling through every stage.

use z3pcp::gadgets::{apply_to_instance, extend_instance_assignment, Gadget};
use z3pcp::longcode::{
    constraint_variable_reduction, dictator_assignment, lc_brute_force, longcode_4nat_reduction,
    LabelCoverInstance, LcEdge, ReductionCaps,
};
use z3pcp::rational::{fmt_rational, int};

fn main() -> z3pcp::error::Result<()> {
    let edge = |u: &str, v: &str, projection: Vec<u32>| LcEdge {
        u: u.into(),
        v: v.into(),
        projection,
        weight: int(1),
    };
    let lc = LabelCoverInstance::new(
        2,
        2,
        vec!["u0".into()],
        vec!["v0".into(), "v1".into()],
        vec![
            edge("u0", "v0", vec![0, 0, 1, 1]),
            edge("u0", "v1", vec![1, 0, 0, 1]),
        ],
    )?;
    let (opt, lab) = lc_brute_force(&lc, 1_000)?;
    println!(
        "label cover optimum {} with {:?}",
        fmt_rational(&opt),
        lab.labels
    );

    let nat = longcode_4nat_reduction(&lc, ReductionCaps::default())?;
    let a0 = dictator_assignment(&lc, &lab)?;
    report(
        "4NAT",
        nat.variables().len(),
        nat.constraints().len(),
        &nat.value(&a0)?,
    );

    let g1 = Gadget::four_nat_to_two_nlin();
    let nlin = apply_to_instance(&g1, &nat)?;
    let a1 = extend_instance_assignment(&g1, &nat, &nlin, &a0)?;
    report(
        "2-NLin",
        nlin.variables().len(),
        nlin.constraints().len(),
        &nlin.value(&a1)?,
    );

    let two = constraint_variable_reduction(&nlin)?;
    let a2 = extend_instance_assignment(&Gadget::two_nlin_to_two_to_one(), &nlin, &two, &a1)?;
    report(
        "2-to-1",
        two.variables().len(),
        two.constraints().len(),
        &two.value(&a2)?,
    );
    Ok(())
}

fn report(stage: &str, vars: usize, cons: usize, value: &z3pcp::rational::Rational) {
    println!(
        "{stage:<8} {vars:>7} variables {cons:>7} constraints  value {}",
        fmt_rational(value)
    );
}
