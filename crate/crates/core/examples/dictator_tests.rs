//! Exact acceptance of the 2-NLin and 4NAT dictator tests, checked against a
//! seeded sampler.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z3pcp::dictator::{
    enumerate_test, monte_carlo_accepts, pass_probability, z_determines_x_probability,
    DictatorSpec, TestKind, TestSpec,
};
use z3pcp::rational::fmt_rational;

fn main() -> z3pcp::error::Result<()> {
    let (k, d) = (2, 2);
    let f = DictatorSpec::f(0).table(k, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("K={k} d={d}, f = x_1");
    println!(
        "{:<8} {:<14} {:>8} {:>10}",
        "test", "g = h", "exact", "sampled"
    );
    for kind in [TestKind::FourNat, TestKind::TwoNLin] {
        let spec = TestSpec::new(kind, k, d)?;
        for (block, col) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let g = DictatorSpec::g(block, col).table(k, d)?;
            let h = (kind == TestKind::TwoNLin).then_some(&g);
            let exact = pass_probability(&spec, &f, &g, h)?;
            let hits = monte_carlo_accepts(&spec, &f, &g, h, 100_000, &mut rng)?;
            println!(
                "{:<8} {:<14} {:>8} {:>10.4}",
                format!("{kind:?}"),
                format!("(y[{}])_{}", block + 1, col + 1),
                fmt_rational(&exact),
                hits as f64 / 100_000.0
            );
        }
    }

    // Same block, different columns for g and h: no reference value.
    let spec = TestSpec::two_nlin(k, d)?;
    let g = DictatorSpec::g(0, 0).table(k, d)?;
    let h = DictatorSpec::h(0, 1).table(k, d)?;
    println!(
        "\n2-NLin with g = (y[1])_1, h = (z[1])_2: {}",
        fmt_rational(&pass_probability(&spec, &f, &g, Some(&h))?)
    );

    let dist = enumerate_test(&TestSpec::two_nlin(1, 1)?)?;
    println!(
        "\n2-NLin test, K=d=1: {} support points",
        dist.support.len()
    );
    for (pt, p) in dist.support.iter().zip(&dist.probs).take(4) {
        println!("  x={} y={} z={}  p={}", pt.x, pt.y, pt.z, fmt_rational(p));
    }

    println!("\nP[z[1] pins down x_1] in the 2-NLin test:");
    for d in 1..=5 {
        println!(
            "  d={d}: {}",
            fmt_rational(&z_determines_x_probability(1, d)?)
        );
    }
    Ok(())
}
