//! Elements of Z3 and (optionally blocked) strings over Z3.
//!
//! Strings of length `n` are put in bijection with `0..3^n` by reading the
//! coordinates as base-3 digits, coordinate 0 most significant. Every table
//! in the crate is indexed in this order.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(try_from = "u8", into = "u8")]
pub struct Z3(u8);

impl Z3 {
    pub const ZERO: Z3 = Z3(0);
    pub const ONE: Z3 = Z3(1);
    pub const TWO: Z3 = Z3(2);
    pub const ALL: [Z3; 3] = [Z3(0), Z3(1), Z3(2)];

    pub fn new(v: u8) -> Result<Self> {
        if v < 3 {
            Ok(Z3(v))
        } else {
            Err(Error::NotZ3(v as i64))
        }
    }

    /// Reduces any integer mod 3.
    pub fn reduce(v: i64) -> Self {
        Z3(v.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl TryFrom<u8> for Z3 {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        Z3::new(v)
    }
}

impl From<Z3> for u8 {
    fn from(z: Z3) -> u8 {
        z.0
    }
}

impl fmt::Display for Z3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Z3 {
    type Output = Z3;
    fn add(self, o: Z3) -> Z3 {
        Z3((self.0 + o.0) % 3)
    }
}

impl AddAssign for Z3 {
    fn add_assign(&mut self, o: Z3) {
        *self = *self + o;
    }
}

impl Sub for Z3 {
    type Output = Z3;
    fn sub(self, o: Z3) -> Z3 {
        Z3((self.0 + 3 - o.0) % 3)
    }
}

impl Neg for Z3 {
    type Output = Z3;
    fn neg(self) -> Z3 {
        Z3((3 - self.0) % 3)
    }
}

impl Mul for Z3 {
    type Output = Z3;
    fn mul(self, o: Z3) -> Z3 {
        Z3((self.0 * o.0) % 3)
    }
}

/// Block layout `(d, K)`: `K` blocks of `d` consecutive coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Blocks {
    pub d: usize,
    pub k: usize,
}

impl Blocks {
    pub fn len(&self) -> usize {
        self.d * self.k
    }

    /// Block index (0-based) of coordinate `pos`.
    pub fn block_of(&self, pos: usize) -> usize {
        pos / self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z3String {
    coords: Vec<Z3>,
    blocks: Option<Blocks>,
}

impl Z3String {
    pub fn new(coords: Vec<Z3>) -> Self {
        Z3String {
            coords,
            blocks: None,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![Z3::ZERO; n])
    }

    pub fn from_values(vals: &[i64]) -> Result<Self> {
        let coords = vals
            .iter()
            .map(|&v| {
                if (0..3).contains(&v) {
                    Ok(Z3(v as u8))
                } else {
                    Err(Error::NotZ3(v))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coords))
    }

    pub fn blocked(coords: Vec<Z3>, d: usize, k: usize) -> Result<Self> {
        Self::new(coords).with_blocks(d, k)
    }

    pub fn with_blocks(mut self, d: usize, k: usize) -> Result<Self> {
        if d == 0 || k == 0 || d * k != self.coords.len() {
            return Err(Error::InvalidBlocks {
                d,
                k,
                len: self.coords.len(),
            });
        }
        self.blocks = Some(Blocks { d, k });
        Ok(self)
    }

    /// Decodes a table index into a string of length `n`.
    pub fn from_index(mut idx: u64, n: usize) -> Self {
        let mut coords = vec![Z3::ZERO; n];
        for c in coords.iter_mut().rev() {
            *c = Z3((idx % 3) as u8);
            idx /= 3;
        }
        Self::new(coords)
    }

    pub fn index(&self) -> u64 {
        self.coords.iter().fold(0u64, |acc, c| acc * 3 + c.0 as u64)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Z3] {
        &self.coords
    }

    pub fn blocks(&self) -> Option<Blocks> {
        self.blocks
    }

    pub fn get(&self, i: usize) -> Z3 {
        self.coords[i]
    }

    /// Block `i` (0-based) as a slice of `d` coordinates.
    pub fn block(&self, i: usize) -> Result<&[Z3]> {
        let b = self.blocks.ok_or(Error::MissingBlocks)?;
        if i >= b.k {
            return Err(Error::OutOfRange(format!("block {i} of {}", b.k)));
        }
        Ok(&self.coords[i * b.d..(i + 1) * b.d])
    }

    /// `#alpha`: number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    /// `|alpha|` as a raw integer (not reduced).
    pub fn coord_sum(&self) -> u64 {
        self.coords.iter().map(|c| c.0 as u64).sum()
    }

    /// `|alpha|` reduced mod 3.
    pub fn abs_sum(&self) -> Z3 {
        Z3((self.coord_sum() % 3) as u8)
    }

    pub fn dot(&self, other: &Z3String) -> Result<Z3> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(Z3::ZERO, |acc, (&a, &b)| acc + a * b))
    }

    /// Adds `c` to every coordinate.
    pub fn shift(&self, c: Z3) -> Self {
        Z3String {
            coords: self.coords.iter().map(|&x| x + c).collect(),
            blocks: self.blocks,
        }
    }

    /// Per-block coordinate sums mod 3; requires block structure.
    pub fn pi3(&self) -> Result<Z3String> {
        let b = self.blocks.ok_or(Error::MissingBlocks)?;
        let coords = self
            .coords
            .chunks(b.d)
            .map(|blk| blk.iter().fold(Z3::ZERO, |a, &c| a + c))
            .collect();
        Ok(Z3String::new(coords))
    }

    /// Iterates over all of `Z3^n` in index order.
    pub fn all(n: usize) -> impl Iterator<Item = Z3String> {
        (0..3u64.pow(n as u32)).map(move |i| Z3String::from_index(i, n))
    }
}

impl fmt::Display for Z3String {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                let sep = match self.blocks {
                    Some(b) if i % b.d == 0 => "|",
                    _ => ",",
                };
                write!(f, "{sep}")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Block index of a table coordinate: `pi(k) = k / d` (0-based).
pub fn block_index(pos: usize, d: usize) -> usize {
    pos / d
}
