//! Exact arithmetic in `Q(omega)`, `omega` a primitive cube root of unity.
//!
//! Elements are stored as `a + b*omega` in the basis `{1, omega}` of
//! `Q[x]/(x^2 + x + 1)`, so `omega^2 = -1 - omega`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_rational, Rational};
use crate::z3::Z3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRational {
    pub a: Rational,
    pub b: Rational,
}

impl CycloRational {
    pub fn new(a: Rational, b: Rational) -> Self {
        CycloRational { a, b }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn omega() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::new(q, Rational::zero())
    }

    /// `omega^k` for `k` mod 3.
    pub fn omega_pow(k: Z3) -> Self {
        Self::from(Eisenstein::omega_pow(k))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Complex conjugation, `omega -> omega^2`.
    pub fn conj(&self) -> Self {
        Self::new(&self.a - &self.b, -&self.b)
    }

    /// `|z|^2 = a^2 - ab + b^2`.
    pub fn norm_sq(&self) -> Rational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Real part `a - b/2`.
    pub fn re(&self) -> Rational {
        &self.a - &self.b / BigInt::from(2)
    }

    /// The imaginary part is `b * sqrt(3)/2`; it vanishes iff `b == 0`.
    pub fn is_real(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.a * q, &self.b * q)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Default for CycloRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (fmt_rational(&self.a), fmt_rational(&self.b));
        if self.b.is_zero() {
            f.write_str(&a)
        } else if self.b.is_negative() {
            write!(f, "{a} - {}ω", fmt_rational(&-&self.b))
        } else {
            write!(f, "{a} + {b}ω")
        }
    }
}

impl<'a> Add<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn add(self, o: &CycloRational) -> CycloRational {
        CycloRational::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Add for CycloRational {
    type Output = CycloRational;
    fn add(self, o: CycloRational) -> CycloRational {
        &self + &o
    }
}

impl AddAssign<&CycloRational> for CycloRational {
    fn add_assign(&mut self, o: &CycloRational) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl<'a> Sub<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn sub(self, o: &CycloRational) -> CycloRational {
        CycloRational::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Sub for CycloRational {
    type Output = CycloRational;
    fn sub(self, o: CycloRational) -> CycloRational {
        &self - &o
    }
}

impl<'a> Mul<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn mul(self, o: &CycloRational) -> CycloRational {
        let bd = &self.b * &o.b;
        CycloRational::new(&self.a * &o.a - &bd, &self.a * &o.b + &self.b * &o.a - bd)
    }
}

impl Mul for CycloRational {
    type Output = CycloRational;
    fn mul(self, o: CycloRational) -> CycloRational {
        &self * &o
    }
}

impl Neg for CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational::new(-self.a, -self.b)
    }
}

/// Eisenstein integer `a + b*omega` with machine-word coefficients, used for
/// the integer-valued parts of transforms before the final division.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Eisenstein {
    pub a: i128,
    pub b: i128,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { a: 0, b: 0 };
    pub const ONE: Eisenstein = Eisenstein { a: 1, b: 0 };

    pub fn omega_pow(k: Z3) -> Self {
        match k.value() {
            0 => Eisenstein { a: 1, b: 0 },
            1 => Eisenstein { a: 0, b: 1 },
            _ => Eisenstein { a: -1, b: -1 },
        }
    }

    /// From residue counts: `c0 + c1*omega + c2*omega^2`.
    pub fn from_counts(c: [i128; 3]) -> Self {
        Eisenstein {
            a: c[0] - c[2],
            b: c[1] - c[2],
        }
    }

    /// Multiplication by `omega^k`.
    pub fn rotate(self, k: Z3) -> Self {
        match k.value() {
            0 => self,
            // (a + b w) w = -b + (a - b) w
            1 => Eisenstein {
                a: -self.b,
                b: self.a - self.b,
            },
            // (a + b w) w^2 = (b - a) - a w
            _ => Eisenstein {
                a: self.b - self.a,
                b: -self.a,
            },
        }
    }

    pub fn conj(self) -> Self {
        Eisenstein {
            a: self.a - self.b,
            b: -self.b,
        }
    }

    pub fn norm_sq(self) -> i128 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    /// Divides by a positive integer denominator into `Q(omega)`.
    pub fn over(self, den: i128) -> CycloRational {
        let d = BigInt::from(den);
        CycloRational::new(
            BigRational::new(BigInt::from(self.a), d.clone()),
            BigRational::new(BigInt::from(self.b), d),
        )
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, o: Eisenstein) -> Eisenstein {
        Eisenstein {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl AddAssign for Eisenstein {
    fn add_assign(&mut self, o: Eisenstein) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, o: Eisenstein) -> Eisenstein {
        Eisenstein {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, o: Eisenstein) -> Eisenstein {
        let bd = self.b * o.b;
        Eisenstein {
            a: self.a * o.a - bd,
            b: self.a * o.b + self.b * o.a - bd,
        }
    }
}

impl From<Eisenstein> for CycloRational {
    fn from(e: Eisenstein) -> Self {
        e.over(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn cr(a: (i64, i64), b: (i64, i64)) -> CycloRational {
        CycloRational::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn omega_is_a_cube_root_of_unity() {
        let w = CycloRational::omega();
        assert_eq!(w.pow(3), CycloRational::one());
        assert_ne!(w.pow(2), CycloRational::one());
        // 1 + w + w^2 = 0
        let s = &(&CycloRational::one() + &w) + &w.pow(2);
        assert!(s.is_zero());
        assert_eq!(w.conj(), w.pow(2));
        assert_eq!(w.norm_sq(), int(1));
        assert_eq!(w.re(), rat(-1, 2));
    }

    #[test]
    fn omega_pow_matches_repeated_product() {
        for k in Z3::ALL {
            assert_eq!(
                CycloRational::omega_pow(k),
                CycloRational::omega().pow(k.value() as u32)
            );
        }
    }

    #[test]
    fn eisenstein_rotate_is_multiplication() {
        let e = Eisenstein { a: 3, b: -7 };
        for k in Z3::ALL {
            assert_eq!(e.rotate(k), e * Eisenstein::omega_pow(k));
        }
        assert_eq!(Eisenstein::from_counts([1, 1, 1]), Eisenstein::ZERO);
    }

    proptest! {
        #[test]
        fn field_identities(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in 1i64..9) {
            let x = cr((a, d), (b, 1));
            let y = cr((c, 1), (a, d + 1));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(x.norm_sq(), (&x * &x.conj()).a);
            prop_assert!((&x * &x.conj()).is_real());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x * &y).norm_sq(), x.norm_sq() * y.norm_sq());
        }

        #[test]
        fn eisenstein_agrees_with_rational(a in -50i128..50, b in -50i128..50, c in -50i128..50, d in -50i128..50) {
            let x = Eisenstein { a, b };
            let y = Eisenstein { a: c, b: d };
            prop_assert_eq!(CycloRational::from(x * y), &CycloRational::from(x) * &CycloRational::from(y));
            prop_assert_eq!(CycloRational::from(x.conj()), CycloRational::from(x).conj());
            prop_assert_eq!(int(x.norm_sq() as i64), CycloRational::from(x).norm_sq());
        }
    }
}
