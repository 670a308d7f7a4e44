//! Rebuilding the 4NAT test from the 2-NLin test via the y', y'' coupling,
//! and the resulting bound on 2-NLin acceptance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z3pcp::dictator::{coupling_check, verify_coupling_bound};
use z3pcp::fourier::FunctionTable;
use z3pcp::rational::fmt_rational;

fn main() -> z3pcp::error::Result<()> {
    for (k, d) in [(1, 1), (1, 2), (2, 1)] {
        let c = coupling_check(k, d)?;
        println!(
            "K={k} d={d}: {} coupled points, joint = 4NAT test: {}, columns TwoPair: {}, y'|(x,z) ~ y|(x,z): {}",
            c.coupled.len(),
            c.joint_matches(),
            c.columns_twopair,
            c.conditionals_match
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (k, d) = (2, 2);
    for _ in 0..5 {
        let f = FunctionTable::random_folded(k, &mut rng)?;
        let g = FunctionTable::random_folded(k * d, &mut rng)?;
        let h = FunctionTable::random_folded(k * d, &mut rng)?;
        let (lhs, rhs) = verify_coupling_bound(k, d, &f, &g, &h)?;
        println!(
            "2-NLin acceptance {:>9} <= {:>9}",
            fmt_rational(&lhs),
            fmt_rational(&rhs)
        );
    }
    Ok(())
}
