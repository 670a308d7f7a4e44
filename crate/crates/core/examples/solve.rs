//! Build, serialize and brute-force a small CSP, then decide (c, s).

use z3pcp::csp::{Constraint, CspInstance, VariableId};
use z3pcp::io::{instance_from_json, instance_to_json};
use z3pcp::rational::{fmt_rational, int, rat};
use z3pcp::z3::Z3;

fn main() -> z3pcp::error::Result<()> {
    // A triangle of "not equal" constraints plus one 4NAT constraint.
    let vars: Vec<_> = ["a", "b", "c"].iter().map(|n| VariableId::z3(*n)).collect();
    let cons = vec![
        Constraint::two_nlin("a", "b", Z3::ZERO, int(1)),
        Constraint::two_nlin("b", "c", Z3::ZERO, int(1)),
        Constraint::two_nlin("a", "c", Z3::ZERO, int(1)),
        Constraint::four_nat(
            ["a", "b", "c", "a"],
            [Z3::ZERO, Z3::ONE, Z3::TWO, Z3::ZERO],
            int(3),
        ),
    ];
    let inst = CspInstance::new(vars, cons)?;

    let json = instance_to_json(&inst)?;
    println!("{json}");
    assert_eq!(instance_from_json(&json)?, inst);

    let (opt, witness) = inst.brute_force_optimum()?;
    println!(
        "optimum {} at {:?}",
        fmt_rational(&opt),
        witness.to_map(&inst)
    );
    for (c, s) in [
        (int(1), rat(5, 6)),
        (int(1), rat(1, 2)),
        (rat(1, 2), rat(1, 3)),
    ] {
        println!(
            "decide(c={}, s={}) = {}",
            fmt_rational(&c),
            fmt_rational(&s),
            inst.decide(&c, &s)?
        );
    }
    Ok(())
}
