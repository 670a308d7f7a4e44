//! Decoding labels from long-code tables through their Fourier spectra.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z3pcp::fourier::{fourier_transform, FunctionTable};
use z3pcp::longcode::fourier_decode;

fn histogram(
    f: &FunctionTable,
    draws: usize,
    seed: u64,
) -> z3pcp::error::Result<BTreeMap<usize, usize>> {
    let hat = fourier_transform(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = BTreeMap::new();
    for _ in 0..draws {
        *h.entry(fourier_decode(&hat, &mut rng)? + 1).or_insert(0) += 1;
    }
    Ok(h)
}

fn main() -> z3pcp::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = [
        ("dictator x_3", FunctionTable::dictator(4, 2)?),
        (
            "x_1 + x_2",
            FunctionTable::from_fn(2, |x| x.get(0) + x.get(1)),
        ),
        (
            "2x_1 + 2x_2 + 2x_3 + x_4",
            FunctionTable::from_fn(4, |x| {
                (x.get(0) + x.get(1) + x.get(2)) * z3pcp::z3::Z3::TWO + x.get(3)
            }),
        ),
        (
            "random folded, n=3",
            FunctionTable::random_folded(3, &mut rng)?,
        ),
    ];
    for (name, f) in cases {
        println!("{name:<26} {:?}", histogram(&f, 10_000, 7)?);
    }
    let unfolded = fourier_transform(&FunctionTable::constant(2, z3pcp::z3::Z3::ZERO))?;
    println!(
        "constant table: {}",
        fourier_decode(&unfolded, &mut rng).unwrap_err()
    );
    Ok(())
}
