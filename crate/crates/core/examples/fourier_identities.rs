//! The exact Fourier identities behind the 4NAT soundness analysis, on
//! random folded functions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z3pcp::dictator::{
    bigfourier_bound, expansion_terms, verify_fgg_formula, verify_vanishing, TestSpec,
};
use z3pcp::fourier::{fourier_transform, support_on_sum_one, FunctionTable};
use z3pcp::rational::fmt_rational;

fn main() -> z3pcp::error::Result<()> {
    let (k, d) = (2, 2);
    let spec = TestSpec::four_nat(k, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    for trial in 0..5 {
        let f = FunctionTable::random_folded(k, &mut rng)?;
        let g = FunctionTable::random_folded(k * d, &mut rng)?;
        let ghat = fourier_transform(&g)?;
        assert!(support_on_sum_one(&ghat));

        let (a, b) = verify_vanishing(&f, &g, &spec)?;
        let (direct, fourier) = verify_fgg_formula(&f, &g, d, k)?;
        let terms = expansion_terms(&spec, &f, &g)?;
        let bound = bigfourier_bound(&f, &g, d, k)?;
        println!("trial {trial}: |supp g^| = {}", ghat.support().count());
        println!("  E[f conj g(y)] = {a}, E[g(y) conj g(z)] = {b}");
        println!("  E[f g g] = {direct} (Fourier side {fourier})");
        println!(
            "  E[4NAT] = {} = expansion {} ; Re E[ggg] = {}",
            fmt_rational(&terms.nat4),
            fmt_rational(&terms.reduced_expansion()),
            fmt_rational(&terms.gy_gz_gw.re())
        );
        println!(
            "  Fourier bound in [{:.6}, {:.6}], gap >= {:.6}",
            to_f64(&bound.rhs_lower),
            to_f64(&bound.rhs_upper),
            to_f64(&bound.gap())
        );
    }
    Ok(())
}

fn to_f64(q: &z3pcp::rational::Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}
