//! Exact rational helpers shared by every module.
//!
//! Rationals are always serialized as `"num/den"` strings, including
//! integers (`"1/1"`), so golden files compare byte for byte.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats as `num/den` with a positive denominator.
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn pow3(n: usize) -> u64 {
    3u64.pow(n as u32)
}

/// Rational enclosure `[lo, hi]` of `sqrt(q)` with `hi - lo <= 2^-bits`.
/// Exact (`lo == hi`) when `q` is the square of a rational.
pub fn sqrt_enclosure(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        let r = BigRational::new(rn, rd);
        return (r.clone(), r);
    }
    // floor(sqrt(n/d * 4^bits)) / 2^bits
    let scale = BigInt::one() << (2 * bits as usize);
    let floor = (n * &scale / d).sqrt();
    let unit = BigInt::one() << bits as usize;
    let lo = BigRational::new(floor.clone(), unit.clone());
    let hi = BigRational::new(floor + 1, unit);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(fmt_rational(&int(1)), "1/1");
        assert_eq!(fmt_rational(&rat(6, 8)), "3/4");
        assert_eq!(fmt_rational(&rat(-1, 2)), "-1/2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("23/24").unwrap(), rat(23, 24));
        assert_eq!(parse_rational(" 2 ").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sqrt_exact_and_bracketed() {
        let (lo, hi) = sqrt_enclosure(&rat(4, 9), 40);
        assert_eq!(lo, rat(2, 3));
        assert_eq!(hi, rat(2, 3));

        let two = int(2);
        let (lo, hi) = sqrt_enclosure(&two, 40);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert!(&hi - &lo <= BigRational::new(BigInt::one(), BigInt::one() << 40));
    }
}
