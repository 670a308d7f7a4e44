//! Truth tables `Z3^n -> Z3`, their Fourier transforms (of `omega^f`),
//! characters and folding.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::cyclo::{CycloRational, Eisenstein};
use crate::error::{Error, Result};
use crate::rational::{pow3, Rational};
use crate::z3::{Z3String, Z3};

/// Default largest arity accepted by the transforms.
pub const DEFAULT_MAX_ARITY: usize = 12;

/// `chi_alpha(x) = omega^(alpha . x)`.
pub fn chi(alpha: &Z3String, x: &Z3String) -> Result<CycloRational> {
    Ok(CycloRational::omega_pow(alpha.dot(x)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    arity: usize,
    entries: Vec<Z3>,
}

impl FunctionTable {
    pub fn new(arity: usize, entries: Vec<Z3>) -> Result<Self> {
        let expected = pow3(arity) as usize;
        if entries.len() != expected {
            return Err(Error::TableSize {
                arity,
                expected,
                actual: entries.len(),
            });
        }
        Ok(FunctionTable { arity, entries })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&Z3String) -> Z3) -> Self {
        let entries = Z3String::all(arity).map(|x| f(&x)).collect();
        FunctionTable { arity, entries }
    }

    pub fn constant(arity: usize, c: Z3) -> Self {
        FunctionTable {
            arity,
            entries: vec![c; pow3(arity) as usize],
        }
    }

    /// `x -> x_coord` (0-based coordinate).
    pub fn dictator(arity: usize, coord: usize) -> Result<Self> {
        if coord >= arity {
            return Err(Error::OutOfRange(format!(
                "dictator coordinate {coord} for arity {arity}"
            )));
        }
        Ok(Self::from_fn(arity, |x| x.get(coord)))
    }

    /// Uniformly random folded table: free values on the `3^(n-1)` strings
    /// with first coordinate 0, extended by `f(x + c) = f(x) + c`.
    pub fn random_folded<R: Rng + ?Sized>(arity: usize, rng: &mut R) -> Result<Self> {
        if arity == 0 {
            return Err(Error::OutOfRange("folded tables need arity >= 1".into()));
        }
        let reps: Vec<Z3> = (0..pow3(arity - 1))
            .map(|_| Z3::reduce(rng.random_range(0..3)))
            .collect();
        Ok(Self::folded_from_representatives(arity, &reps))
    }

    /// Extends values on first-coordinate-0 representatives (in index order)
    /// to the unique folded table.
    pub fn folded_from_representatives(arity: usize, reps: &[Z3]) -> Self {
        debug_assert_eq!(reps.len() as u64, pow3(arity - 1));
        Self::from_fn(arity, |x| {
            let (rep, c) = folded_class(x);
            reps[rep as usize] + c
        })
    }

    pub fn random<R: Rng + ?Sized>(arity: usize, rng: &mut R) -> Self {
        let entries = (0..pow3(arity))
            .map(|_| Z3::reduce(rng.random_range(0..3)))
            .collect();
        FunctionTable { arity, entries }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[Z3] {
        &self.entries
    }

    pub fn at(&self, idx: usize) -> Z3 {
        self.entries[idx]
    }

    pub fn eval(&self, x: &Z3String) -> Result<Z3> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        Ok(self.entries[x.index() as usize])
    }

    /// `f(x + c) = f(x) + c` for every `x` and `c in {1, 2}`.
    pub fn is_folded(&self) -> bool {
        if self.arity == 0 {
            return false;
        }
        Z3String::all(self.arity).all(|x| {
            let fx = self.entries[x.index() as usize];
            [Z3::ONE, Z3::TWO]
                .iter()
                .all(|&c| self.entries[x.shift(c).index() as usize] == fx + c)
        })
    }

    /// Values `omega^f(x)` in index order.
    pub fn to_unit_values(&self) -> Vec<CycloRational> {
        self.entries
            .iter()
            .map(|&v| CycloRational::omega_pow(v))
            .collect()
    }
}

/// Splits `x` into its first-coordinate-0 representative index (in `Z3^(n-1)`
/// index order) and the shift `c = x_0`, so that `x = rep + c`.
pub fn folded_class(x: &Z3String) -> (u64, Z3) {
    let c = x.get(0);
    let rep = x.shift(-c);
    // First coordinate of rep is 0, so its index is < 3^(n-1).
    (rep.index(), c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    arity: usize,
    coeffs: Vec<CycloRational>,
}

impl FourierTable {
    pub fn new(arity: usize, coeffs: Vec<CycloRational>) -> Result<Self> {
        let expected = pow3(arity) as usize;
        if coeffs.len() != expected {
            return Err(Error::TableSize {
                arity,
                expected,
                actual: coeffs.len(),
            });
        }
        Ok(FourierTable { arity, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coeffs(&self) -> &[CycloRational] {
        &self.coeffs
    }

    pub fn get(&self, alpha: &Z3String) -> Result<&CycloRational> {
        if alpha.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: alpha.len(),
            });
        }
        Ok(&self.coeffs[alpha.index() as usize])
    }

    pub fn at(&self, idx: usize) -> &CycloRational {
        &self.coeffs[idx]
    }

    /// Nonzero coefficients in index order.
    pub fn support(&self) -> impl Iterator<Item = (Z3String, &CycloRational)> {
        let n = self.arity;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (Z3String::from_index(i as u64, n), c))
    }

    /// `sum_alpha |f^(alpha)|^2`.
    pub fn parseval_sum(&self) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, c| acc + c.norm_sq())
    }
}

fn check_arity(arity: usize, cap: usize) -> Result<()> {
    if arity > cap {
        Err(Error::ArityCap { arity, cap })
    } else {
        Ok(())
    }
}

/// Transform of `omega^f` via the radix-3 fast algorithm, exact in `Z[omega]`
/// until the final division by `3^n`.
pub fn fourier_transform(f: &FunctionTable) -> Result<FourierTable> {
    fourier_transform_capped(f, DEFAULT_MAX_ARITY)
}

pub fn fourier_transform_capped(f: &FunctionTable, max_arity: usize) -> Result<FourierTable> {
    check_arity(f.arity, max_arity)?;
    let n = f.arity;
    let mut v: Vec<Eisenstein> = f
        .entries
        .iter()
        .map(|&e| Eisenstein::omega_pow(e))
        .collect();
    // One butterfly pass per coordinate. new[alpha_p] = sum_t v[t] omega^(-alpha_p t).
    let mut stride = 1usize;
    for _ in 0..n {
        let span = stride * 3;
        for base in (0..v.len()).step_by(span) {
            for off in 0..stride {
                let i0 = base + off;
                let (a, b, c) = (v[i0], v[i0 + stride], v[i0 + 2 * stride]);
                v[i0] = a + b + c;
                v[i0 + stride] = a + b.rotate(Z3::TWO) + c.rotate(Z3::ONE);
                v[i0 + 2 * stride] = a + b.rotate(Z3::ONE) + c.rotate(Z3::TWO);
            }
        }
        stride = span;
    }
    let den = pow3(n) as i128;
    let coeffs = v.into_iter().map(|e| e.over(den)).collect();
    Ok(FourierTable { arity: n, coeffs })
}

/// Direct `O(9^n)` transform: for each `alpha`, counts the residues of
/// `f(x) - alpha . x`. Independent of the fast path; used to cross-check it.
pub fn fourier_transform_naive(f: &FunctionTable) -> Result<FourierTable> {
    fourier_transform_naive_capped(f, DEFAULT_MAX_ARITY)
}

pub fn fourier_transform_naive_capped(f: &FunctionTable, max_arity: usize) -> Result<FourierTable> {
    check_arity(f.arity, max_arity)?;
    let n = f.arity;
    let points: Vec<Z3String> = Z3String::all(n).collect();
    let den = pow3(n) as i128;
    let coeffs = points
        .par_iter()
        .map(|alpha| {
            let mut counts = [0i128; 3];
            for (x, &fx) in points.iter().zip(&f.entries) {
                let r = fx - alpha.dot(x).expect("equal lengths");
                counts[r.value() as usize] += 1;
            }
            Eisenstein::from_counts(counts).over(den)
        })
        .collect();
    Ok(FourierTable { arity: n, coeffs })
}

/// `F(x) = sum_alpha F^(alpha) chi_alpha(x)` for every `x` in index order.
pub fn inverse_transform(t: &FourierTable) -> Vec<CycloRational> {
    let n = t.arity;
    let support: Vec<(Z3String, CycloRational)> =
        t.support().map(|(a, c)| (a, c.clone())).collect();
    Z3String::all(n)
        .map(|x| {
            support
                .iter()
                .fold(CycloRational::zero(), |acc, (alpha, c)| {
                    let w = alpha.dot(&x).expect("equal lengths");
                    acc + c * &CycloRational::omega_pow(w)
                })
        })
        .collect()
}

/// `E[chi_alpha(x) conj(chi_beta(x))]` over uniform `x`, exactly.
pub fn character_inner_product(alpha: &Z3String, beta: &Z3String) -> Result<CycloRational> {
    if alpha.len() != beta.len() {
        return Err(Error::LengthMismatch {
            expected: alpha.len(),
            actual: beta.len(),
        });
    }
    let n = alpha.len();
    let mut counts = [0i128; 3];
    for x in Z3String::all(n) {
        let r = alpha.dot(&x)? - beta.dot(&x)?;
        counts[r.value() as usize] += 1;
    }
    Ok(Eisenstein::from_counts(counts).over(pow3(n) as i128))
}

/// True when every nonzero coefficient sits on an `alpha` with `|alpha| = 1 mod 3`.
pub fn support_on_sum_one(t: &FourierTable) -> bool {
    t.support().all(|(alpha, _)| alpha.abs_sum() == Z3::ONE)
}

pub fn is_unit_parseval(t: &FourierTable) -> bool {
    t.parseval_sum().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(v: &[i64]) -> Z3String {
        Z3String::from_values(v).unwrap()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&s(&[1, 2]), &s(&[1, 1])).unwrap(), CycloRational::one());
        assert_eq!(
            chi(&s(&[0, 0, 0]), &s(&[2, 1, 0])).unwrap(),
            CycloRational::one()
        );
        assert_eq!(chi(&s(&[2]), &s(&[2])).unwrap(), CycloRational::omega());
        assert!(chi(&s(&[1]), &s(&[1, 1])).is_err());
    }

    #[test]
    fn transform_examples() {
        let dict = FunctionTable::dictator(1, 0).unwrap();
        let t = fourier_transform(&dict).unwrap();
        assert_eq!(t.at(1), &CycloRational::one());
        assert!(t.at(0).is_zero() && t.at(2).is_zero());

        let zero = FunctionTable::constant(1, Z3::ZERO);
        let t = fourier_transform(&zero).unwrap();
        assert_eq!(t.at(0), &CycloRational::one());
        assert!(t.at(1).is_zero() && t.at(2).is_zero());

        // f(x) = 2x + 1: omega^(2x+1) = omega * chi_(2)(x)
        let f = FunctionTable::from_fn(1, |x| x.get(0) * Z3::TWO + Z3::ONE);
        let t = fourier_transform(&f).unwrap();
        assert_eq!(t.at(2), &CycloRational::omega());
        assert!(t.at(0).is_zero() && t.at(1).is_zero());
    }

    #[test]
    fn arity_cap_enforced() {
        let f = FunctionTable::constant(3, Z3::ZERO);
        assert!(matches!(
            fourier_transform_capped(&f, 2),
            Err(Error::ArityCap { arity: 3, cap: 2 })
        ));
    }

    #[test]
    fn folding_examples() {
        assert!(FunctionTable::dictator(3, 1).unwrap().is_folded());
        assert!(!FunctionTable::constant(2, Z3::ZERO).is_folded());
        // x1 + 2 x2 shifts by 3c = 0
        let f = FunctionTable::from_fn(2, |x| x.get(0) + Z3::TWO * x.get(1));
        assert!(!f.is_folded());
    }

    #[test]
    fn fast_matches_naive_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=5 {
            for _ in 0..4 {
                let f = FunctionTable::random(n, &mut rng);
                assert_eq!(
                    fourier_transform(&f).unwrap(),
                    fourier_transform_naive(&f).unwrap()
                );
            }
        }
    }

    #[test]
    fn random_folded_is_folded_and_reps_are_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=5 {
            let f = FunctionTable::random_folded(n, &mut rng).unwrap();
            assert!(f.is_folded());
        }
        // n = 2: 3 free representatives -> 27 distinct tables, all folded.
        let mut all = std::collections::HashSet::new();
        for i in 0..27u64 {
            let reps = Z3String::from_index(i, 3);
            let f = FunctionTable::folded_from_representatives(2, reps.coords());
            assert!(f.is_folded());
            all.insert(f);
        }
        assert_eq!(all.len(), 27);
    }

    #[test]
    fn round_trip_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            let f = FunctionTable::random(n, &mut rng);
            let t = fourier_transform(&f).unwrap();
            assert_eq!(inverse_transform(&t), f.to_unit_values());
            assert_eq!(t.parseval_sum(), int(1));
        }
    }

    #[test]
    fn orthonormal_characters_n_le_3() {
        for n in 0..=3 {
            let all: Vec<_> = Z3String::all(n).collect();
            for a in &all {
                for b in &all {
                    let ip = character_inner_product(a, b).unwrap();
                    let want = if a == b {
                        CycloRational::one()
                    } else {
                        CycloRational::zero()
                    };
                    assert_eq!(ip, want, "alpha={a} beta={b}");
                }
            }
        }
    }
}
