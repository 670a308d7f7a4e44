//! The 2-NLin and 4NAT dictator tests: exact distributions, exact acceptance
//! probabilities, and the Fourier identities behind the soundness analysis.
//!
//! Both tests draw `x` uniformly from `Z3^K` and then fill the `dK` columns of
//! `y, z (, w)` independently given `x`, column `p` seeing `x_i` for its block
//! `i = p / d`. Enumeration walks this column product directly. Every point
//! gets an integer weight over the common denominator `3^K * 6^(dK)`, so all
//! expectations are computed as exact integer counts.
//!
//! * 2-NLin test, per column with `a = x_i`: `y` uniform, `z` uniform on
//!   `Z3 \ {a, y}`. Weight 1 when `y = a` (two choices of `z`), 2 otherwise.
//! * 4NAT test, per column: `(y, z, w)` uniform over the 6 completions with
//!   `TwoPair(a, y, z, w)`. Weight 1 each.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::cyclo::{CycloRational, Eisenstein};
use crate::error::{Error, Result};
use crate::fourier::{fourier_transform, FourierTable, FunctionTable};
use crate::predicates::{eval_twopair, nat4};
use crate::rational::{pow3, rat, sqrt_enclosure, Rational};
use crate::z3::{Z3String, Z3};

/// Default bound on `K * d`.
pub const DEFAULT_MAX_KD: usize = 8;
/// Default bound on the number of enumerated support points.
pub const DEFAULT_MAX_SUPPORT: u64 = 200_000_000;
/// Largest support that [`enumerate_test`] will materialize.
pub const MAX_MATERIALIZED: u64 = 2_000_000;
/// Bits of precision in the square-root enclosures of `bigfourier_gap`.
pub const SQRT_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestKind {
    TwoNLin,
    FourNat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestSpec {
    pub kind: TestKind,
    pub k: usize,
    pub d: usize,
    pub max_support: u64,
}

impl TestSpec {
    pub fn new(kind: TestKind, k: usize, d: usize) -> Result<Self> {
        Self::with_caps(kind, k, d, DEFAULT_MAX_KD, DEFAULT_MAX_SUPPORT)
    }

    pub fn with_caps(
        kind: TestKind,
        k: usize,
        d: usize,
        max_kd: usize,
        max_support: u64,
    ) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::OutOfRange(format!(
                "need K, d >= 1, got K={k} d={d}"
            )));
        }
        if k * d > max_kd {
            return Err(Error::EnumerationCap(format!(
                "K*d = {} exceeds {max_kd}",
                k * d
            )));
        }
        let spec = TestSpec {
            kind,
            k,
            d,
            max_support,
        };
        let support = spec.support_size();
        if support > max_support as u128 {
            return Err(Error::EnumerationCap(format!(
                "{support} support points exceed {max_support}"
            )));
        }
        Ok(spec)
    }

    pub fn four_nat(k: usize, d: usize) -> Result<Self> {
        Self::new(TestKind::FourNat, k, d)
    }

    pub fn two_nlin(k: usize, d: usize) -> Result<Self> {
        Self::new(TestKind::TwoNLin, k, d)
    }

    /// `L = dK`.
    pub fn len(&self) -> usize {
        self.k * self.d
    }

    pub fn support_size(&self) -> u128 {
        let per_col: u128 = match self.kind {
            TestKind::TwoNLin => 4,
            TestKind::FourNat => 6,
        };
        (pow3(self.k) as u128) * per_col.pow(self.len() as u32)
    }

    /// Common denominator `3^K * 6^L` of all point weights.
    pub fn denominator(&self) -> u64 {
        pow3(self.k) * 6u64.pow(self.len() as u32)
    }

    fn check_tables(&self, f: &FunctionTable, g: &FunctionTable) -> Result<()> {
        if f.arity() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: f.arity(),
            });
        }
        if g.arity() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: g.arity(),
            });
        }
        Ok(())
    }
}

/// Where each test column lands in the `g` table. Position `p` of the test
/// string (block `p / d`) is written to table coordinate `coord[p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    k: usize,
    d: usize,
    place: Vec<u64>,
}

impl Layout {
    pub fn standard(k: usize, d: usize) -> Self {
        let l = k * d;
        Layout {
            k,
            d,
            place: (0..l).map(|p| pow3(l - 1 - p)).collect(),
        }
    }

    /// `coord` must be a permutation of `0..dK`.
    pub fn permuted(k: usize, d: usize, coord: &[usize]) -> Result<Self> {
        let l = k * d;
        let mut seen = vec![false; l];
        if coord.len() != l {
            return Err(Error::LengthMismatch {
                expected: l,
                actual: coord.len(),
            });
        }
        for &c in coord {
            if c >= l || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidInstance(format!(
                    "{coord:?} is not a permutation"
                )));
            }
        }
        Ok(Layout {
            k,
            d,
            place: coord.iter().map(|&c| pow3(l - 1 - c)).collect(),
        })
    }
}

/// One support point by table index: `x` into `f`, `g[0..3]` = `y, z, w`
/// into `g` (`w` is 0 for the 2-NLin test), and an integer weight over
/// [`TestSpec::denominator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointRef {
    pub x: u64,
    pub g: [u64; 3],
    pub weight: u64,
}

#[derive(Clone, Copy, Debug)]
struct ColumnOption {
    digits: [u64; 3],
    weight: u64,
}

fn column_options(kind: TestKind, a: Z3) -> Vec<ColumnOption> {
    let mut out = Vec::new();
    match kind {
        TestKind::FourNat => {
            for y in Z3::ALL {
                for z in Z3::ALL {
                    for w in Z3::ALL {
                        if eval_twopair([a, y, z, w]) {
                            out.push(ColumnOption {
                                digits: [y.value() as u64, z.value() as u64, w.value() as u64],
                                weight: 1,
                            });
                        }
                    }
                }
            }
        }
        TestKind::TwoNLin => {
            for y in Z3::ALL {
                let choices: Vec<Z3> = Z3::ALL.into_iter().filter(|&z| z != a && z != y).collect();
                // P(y) = 1/3, P(z | y) = 1/|choices|, over denominator 6.
                let weight = 2 / choices.len() as u64;
                for z in choices {
                    out.push(ColumnOption {
                        digits: [y.value() as u64, z.value() as u64, 0],
                        weight,
                    });
                }
            }
        }
    }
    out
}

fn x_digit(x: u64, i: usize, k: usize) -> usize {
    ((x / pow3(k - 1 - i)) % 3) as usize
}

fn walk(
    p: usize,
    layout: &Layout,
    x: u64,
    options: &[Vec<ColumnOption>; 3],
    g: [u64; 3],
    weight: u64,
    visit: &mut dyn FnMut(&PointRef),
) {
    if p == layout.place.len() {
        visit(&PointRef { x, g, weight });
        return;
    }
    let a = x_digit(x, p / layout.d, layout.k);
    let place = layout.place[p];
    for opt in &options[a] {
        let next = [
            g[0] + opt.digits[0] * place,
            g[1] + opt.digits[1] * place,
            g[2] + opt.digits[2] * place,
        ];
        walk(p + 1, layout, x, options, next, weight * opt.weight, visit);
    }
}

/// Folds over every support point, one accumulator per value of `x` (run in
/// parallel), merged in `x` order.
pub fn fold_points<A, I, V, M>(spec: &TestSpec, layout: &Layout, init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &PointRef) + Sync,
    M: Fn(A, A) -> A,
{
    assert_eq!(
        (layout.k, layout.d),
        (spec.k, spec.d),
        "layout does not match spec"
    );
    let options = [
        column_options(spec.kind, Z3::ZERO),
        column_options(spec.kind, Z3::ONE),
        column_options(spec.kind, Z3::TWO),
    ];
    let parts: Vec<A> = (0..pow3(spec.k))
        .into_par_iter()
        .map(|x| {
            let mut acc = init();
            walk(0, layout, x, &options, [0; 3], 1, &mut |pt| {
                visit(&mut acc, pt)
            });
            acc
        })
        .collect();
    let mut it = parts.into_iter();
    let first = it.next().expect("at least one x");
    it.fold(first, merge)
}

/// One support point with its probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestPoint {
    pub x: Z3String,
    pub y: Z3String,
    pub z: Z3String,
    pub w: Option<Z3String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestDistribution {
    pub spec: TestSpec,
    pub support: Vec<TestPoint>,
    pub probs: Vec<Rational>,
}

impl TestDistribution {
    /// Marginal of `y` as a map from table index to probability.
    pub fn y_marginal(&self) -> BTreeMap<u64, Rational> {
        let mut m = BTreeMap::new();
        for (pt, p) in self.support.iter().zip(&self.probs) {
            *m.entry(pt.y.index()).or_insert_with(Rational::zero) += p;
        }
        m
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().fold(Rational::zero(), |a, p| a + p)
    }
}

/// The exact joint distribution, materialized.
pub fn enumerate_test(spec: &TestSpec) -> Result<TestDistribution> {
    if spec.support_size() > MAX_MATERIALIZED as u128 {
        return Err(Error::EnumerationCap(format!(
            "{} points exceed materialization cap {MAX_MATERIALIZED}",
            spec.support_size()
        )));
    }
    let layout = Layout::standard(spec.k, spec.d);
    let l = spec.len();
    let den = BigInt::from(spec.denominator());
    let d = spec.d;
    let k = spec.k;
    let kind = spec.kind;
    let points = fold_points(
        spec,
        &layout,
        Vec::new,
        |acc: &mut Vec<PointRef>, pt| acc.push(*pt),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    let blocked = |idx: u64| {
        Z3String::from_index(idx, l)
            .with_blocks(d, k)
            .expect("dK coordinates")
    };
    let mut support = Vec::with_capacity(points.len());
    let mut probs = Vec::with_capacity(points.len());
    for pt in points {
        support.push(TestPoint {
            x: Z3String::from_index(pt.x, k),
            y: blocked(pt.g[0]),
            z: blocked(pt.g[1]),
            w: (kind == TestKind::FourNat).then(|| blocked(pt.g[2])),
        });
        probs.push(BigRational::new(BigInt::from(pt.weight), den.clone()));
    }
    Ok(TestDistribution {
        spec: *spec,
        support,
        probs,
    })
}

fn over(num: u128, den: u128) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn omega_expectation(counts: [u128; 3], den: u64) -> CycloRational {
    let c = counts.map(|v| v as i128);
    Eisenstein::from_counts(c).over(den as i128)
}

/// Exact acceptance probability. `h` is required for the 2-NLin test and
/// ignored otherwise.
pub fn pass_probability(
    spec: &TestSpec,
    f: &FunctionTable,
    g: &FunctionTable,
    h: Option<&FunctionTable>,
) -> Result<Rational> {
    spec.check_tables(f, g)?;
    let layout = Layout::standard(spec.k, spec.d);
    pass_probability_with_layout(spec, &layout, f, g, h)
}

pub fn pass_probability_with_layout(
    spec: &TestSpec,
    layout: &Layout,
    f: &FunctionTable,
    g: &FunctionTable,
    h: Option<&FunctionTable>,
) -> Result<Rational> {
    spec.check_tables(f, g)?;
    let den = spec.denominator() as u128;
    match spec.kind {
        TestKind::FourNat => {
            let (fe, ge) = (f.entries(), g.entries());
            let hits = fold_points(
                spec,
                layout,
                || 0u128,
                |acc, pt| {
                    let t = [
                        fe[pt.x as usize],
                        ge[pt.g[0] as usize],
                        ge[pt.g[1] as usize],
                        ge[pt.g[2] as usize],
                    ];
                    if nat4(t) {
                        *acc += pt.weight as u128;
                    }
                },
                |a, b| a + b,
            );
            Ok(over(hits, den))
        }
        TestKind::TwoNLin => {
            let h = h.ok_or_else(|| Error::OutOfRange("2-NLin test needs h".into()))?;
            if h.arity() != spec.len() {
                return Err(Error::LengthMismatch {
                    expected: spec.len(),
                    actual: h.arity(),
                });
            }
            let (fe, ge, he) = (f.entries(), g.entries(), h.entries());
            // 1/4 [f(x) != h(z)] + 3/4 [g(y) != h(z)], scaled by 4.
            let hits = fold_points(
                spec,
                layout,
                || 0u128,
                |acc, pt| {
                    let hz = he[pt.g[1] as usize];
                    let mut s = 0u128;
                    if fe[pt.x as usize] != hz {
                        s += 1;
                    }
                    if ge[pt.g[0] as usize] != hz {
                        s += 3;
                    }
                    *acc += s * pt.weight as u128;
                },
                |a, b| a + b,
            );
            Ok(over(hits, 4 * den))
        }
    }
}

/// Which side of the test a dictator sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    F,
    G,
    H,
}

/// `f(x) = x_block` or `g(y) = (y[block])_column`; 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DictatorSpec {
    pub side: Side,
    pub block: usize,
    pub column: usize,
}

impl DictatorSpec {
    pub fn f(block: usize) -> Self {
        DictatorSpec {
            side: Side::F,
            block,
            column: 0,
        }
    }

    pub fn g(block: usize, column: usize) -> Self {
        DictatorSpec {
            side: Side::G,
            block,
            column,
        }
    }

    pub fn h(block: usize, column: usize) -> Self {
        DictatorSpec {
            side: Side::H,
            block,
            column,
        }
    }

    pub fn table(&self, k: usize, d: usize) -> Result<FunctionTable> {
        if self.block >= k || (self.side != Side::F && self.column >= d) {
            return Err(Error::OutOfRange(format!(
                "dictator block {} column {} for K={k} d={d}",
                self.block, self.column
            )));
        }
        match self.side {
            Side::F => FunctionTable::dictator(k, self.block),
            Side::G | Side::H => FunctionTable::dictator(k * d, self.block * d + self.column),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DictatorRelation {
    /// `g` (and `h`) read a coordinate in the block `f` reads.
    Matching,
    /// `g` (and `h`) read a coordinate in a different block.
    CrossBlock,
    /// `g` and `h` are different dictators; no reference value.
    Unrelated,
}

pub fn classify_dictators(
    f: &DictatorSpec,
    g: &DictatorSpec,
    h: Option<&DictatorSpec>,
) -> DictatorRelation {
    if let Some(h) = h {
        if (h.block, h.column) != (g.block, g.column) {
            return DictatorRelation::Unrelated;
        }
    }
    if f.block == g.block {
        DictatorRelation::Matching
    } else {
        DictatorRelation::CrossBlock
    }
}

/// Reference acceptance for matching (1) and cross-block dictators
/// (2/3 for the 4NAT test, 11/12 for the 2-NLin test).
pub fn expected_dictator_pass(kind: TestKind, rel: DictatorRelation) -> Option<Rational> {
    match (rel, kind) {
        (DictatorRelation::Matching, _) => Some(Rational::one()),
        (DictatorRelation::CrossBlock, TestKind::FourNat) => Some(rat(2, 3)),
        (DictatorRelation::CrossBlock, TestKind::TwoNLin) => Some(rat(11, 12)),
        (DictatorRelation::Unrelated, _) => None,
    }
}

/// `(lhs, rhs)` with `lhs` the 2-NLin acceptance of `(f, g, h)` and
/// `rhs = 3/4 + 1/4 E[4NAT(f(x), g(y), g(z), g(w))]` under the 4NAT test.
pub fn verify_coupling_bound(
    k: usize,
    d: usize,
    f: &FunctionTable,
    g: &FunctionTable,
    h: &FunctionTable,
) -> Result<(Rational, Rational)> {
    let lhs = pass_probability(&TestSpec::two_nlin(k, d)?, f, g, Some(h))?;
    let nat = pass_probability(&TestSpec::four_nat(k, d)?, f, g, None)?;
    let rhs = rat(3, 4) + rat(1, 4) * nat;
    Ok((lhs, rhs))
}

/// Joint weights keyed by table indices, over a stated denominator.
pub type JointWeights = BTreeMap<(u64, u64, u64, u64), u128>;

/// Result of rebuilding the 4NAT test from the 2-NLin test via `y', y''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingCheck {
    /// Law of `(x, y, y', y'')` over denominator `3^K 6^L 2^L`.
    pub coupled: JointWeights,
    /// 4NAT test law of `(x, y, z, w)` over the same denominator.
    pub four_nat: JointWeights,
    /// Every column of every coupled point satisfies TwoPair.
    pub columns_twopair: bool,
    /// Given `(x, z)`, `y'` and `y''` are each distributed as `y`.
    pub conditionals_match: bool,
}

impl CouplingCheck {
    pub fn joint_matches(&self) -> bool {
        self.coupled == self.four_nat
    }
}

/// From each 2-NLin point `(x, y, z)`, per column: if `x_i = y_j` both `y'_j`
/// and `y''_j` take the element missing from `{x_i, z_j}`; otherwise one of
/// them is `x_i` and the other `y_j`, each way with probability 1/2.
pub fn coupling_check(k: usize, d: usize) -> Result<CouplingCheck> {
    let nlin = TestSpec::two_nlin(k, d)?;
    let nat = TestSpec::four_nat(k, d)?;
    let l = k * d;
    let dist = enumerate_test(&nlin)?;
    let nat_dist = enumerate_test(&nat)?;
    // Common denominator 3^K 6^L 2^L.
    let scale = 1u128 << l;
    let to_weight = |p: &Rational, den: u64, extra: u128| -> u128 {
        let num: u128 = (p * BigInt::from(den))
            .to_integer()
            .try_into()
            .expect("small weight");
        num * extra
    };

    let mut coupled = JointWeights::new();
    let mut by_xz_y = BTreeMap::<(u64, u64, u64), u128>::new();
    let mut by_xz_y1 = BTreeMap::<(u64, u64, u64), u128>::new();
    let mut by_xz_y2 = BTreeMap::<(u64, u64, u64), u128>::new();
    let mut columns_twopair = true;

    for (pt, p) in dist.support.iter().zip(&dist.probs) {
        let base = to_weight(p, nlin.denominator(), 1);
        let ambiguous: Vec<usize> = (0..l).filter(|&j| pt.x.get(j / d) != pt.y.get(j)).collect();
        // Split each ambiguous column both ways.
        for mask in 0..(1u64 << ambiguous.len()) {
            let mut y1 = vec![Z3::ZERO; l];
            let mut y2 = vec![Z3::ZERO; l];
            for j in 0..l {
                let (xi, yj, zj) = (pt.x.get(j / d), pt.y.get(j), pt.z.get(j));
                if xi == yj {
                    let missing = Z3::ALL
                        .into_iter()
                        .find(|&c| c != xi && c != zj)
                        .expect("|Z3| = 3");
                    y1[j] = missing;
                    y2[j] = missing;
                } else {
                    let bit = ambiguous
                        .iter()
                        .position(|&c| c == j)
                        .expect("ambiguous column");
                    if mask >> bit & 1 == 0 {
                        (y1[j], y2[j]) = (xi, yj);
                    } else {
                        (y1[j], y2[j]) = (yj, xi);
                    }
                }
                columns_twopair &= eval_twopair([xi, yj, y1[j], y2[j]]);
            }
            let w = base * (scale >> ambiguous.len());
            let (y1, y2) = (Z3String::new(y1).index(), Z3String::new(y2).index());
            let (xi, yi, zi) = (pt.x.index(), pt.y.index(), pt.z.index());
            *coupled.entry((xi, yi, y1, y2)).or_default() += w;
            *by_xz_y.entry((xi, zi, yi)).or_default() += w;
            *by_xz_y1.entry((xi, zi, y1)).or_default() += w;
            *by_xz_y2.entry((xi, zi, y2)).or_default() += w;
        }
    }

    let mut four_nat = JointWeights::new();
    for (pt, p) in nat_dist.support.iter().zip(&nat_dist.probs) {
        let w = to_weight(p, nat.denominator(), scale);
        let key = (
            pt.x.index(),
            pt.y.index(),
            pt.z.index(),
            pt.w.as_ref().expect("4NAT point").index(),
        );
        *four_nat.entry(key).or_default() += w;
    }

    Ok(CouplingCheck {
        coupled,
        four_nat,
        columns_twopair,
        conditionals_match: by_xz_y == by_xz_y1 && by_xz_y == by_xz_y2,
    })
}

fn require_folded(fs: &[&FunctionTable]) -> Result<()> {
    if fs.iter().all(|f| f.is_folded()) {
        Ok(())
    } else {
        Err(Error::NotFolded)
    }
}

fn require_four_nat(spec: &TestSpec) -> Result<()> {
    if spec.kind != TestKind::FourNat {
        return Err(Error::KindMismatch {
            expected: "4NAT test".into(),
            actual: "2-NLin test".into(),
        });
    }
    Ok(())
}

/// Every term of the expansion of `E[4NAT(f(x), g(y), g(z), g(w))]`,
/// each enumerated on its own over the 4NAT test distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerms {
    pub nat4: Rational,
    pub f_conj_gy: CycloRational,
    pub gy_conj_gz: CycloRational,
    pub f_gy_gz: CycloRational,
    pub gy_gz_gw: CycloRational,
}

impl ExpansionTerms {
    /// `5/9 + 2/3 Re E[f conj g(y)] + 2/3 Re E[g(y) conj g(z)]
    ///  - 2/3 Re E[f g(y) g(z)] - 2/9 Re E[g(y) g(z) g(w)]`.
    pub fn full_expansion(&self) -> Rational {
        rat(5, 9) + rat(2, 3) * self.f_conj_gy.re() + rat(2, 3) * self.gy_conj_gz.re()
            - rat(2, 3) * self.f_gy_gz.re()
            - rat(2, 9) * self.gy_gz_gw.re()
    }

    /// The expansion with the two vanishing terms dropped.
    pub fn reduced_expansion(&self) -> Rational {
        rat(5, 9) - rat(2, 3) * self.f_gy_gz.re() - rat(2, 9) * self.gy_gz_gw.re()
    }
}

pub fn expansion_terms(
    spec: &TestSpec,
    f: &FunctionTable,
    g: &FunctionTable,
) -> Result<ExpansionTerms> {
    require_four_nat(spec)?;
    spec.check_tables(f, g)?;
    let layout = Layout::standard(spec.k, spec.d);
    let (fe, ge) = (f.entries(), g.entries());

    #[derive(Default)]
    struct Acc {
        nat: u128,
        terms: [[u128; 3]; 4],
    }
    let acc = fold_points(
        spec,
        &layout,
        Acc::default,
        |acc, pt| {
            let w = pt.weight as u128;
            let fx = fe[pt.x as usize];
            let (gy, gz, gw) = (
                ge[pt.g[0] as usize],
                ge[pt.g[1] as usize],
                ge[pt.g[2] as usize],
            );
            if nat4([fx, gy, gz, gw]) {
                acc.nat += w;
            }
            for (t, r) in [fx - gy, gy - gz, fx + gy + gz, gy + gz + gw]
                .into_iter()
                .enumerate()
            {
                acc.terms[t][r.value() as usize] += w;
            }
        },
        |mut a, b| {
            a.nat += b.nat;
            for t in 0..4 {
                for r in 0..3 {
                    a.terms[t][r] += b.terms[t][r];
                }
            }
            a
        },
    );
    let den = spec.denominator();
    Ok(ExpansionTerms {
        nat4: over(acc.nat, den as u128),
        f_conj_gy: omega_expectation(acc.terms[0], den),
        gy_conj_gz: omega_expectation(acc.terms[1], den),
        f_gy_gz: omega_expectation(acc.terms[2], den),
        gy_gz_gw: omega_expectation(acc.terms[3], den),
    })
}

/// `(E[f(x) conj g(y)], E[g(y) conj g(z)])` under the 4NAT test; both vanish
/// for folded `f, g`.
pub fn verify_vanishing(
    f: &FunctionTable,
    g: &FunctionTable,
    spec: &TestSpec,
) -> Result<(CycloRational, CycloRational)> {
    require_four_nat(spec)?;
    require_folded(&[f, g])?;
    let t = expansion_terms(spec, f, g)?;
    Ok((t.f_conj_gy, t.gy_conj_gz))
}

/// `Re E[g(y) g(z) g(w)]` under the 4NAT test; at least `-1/2`.
pub fn verify_real_part_floor(g: &FunctionTable, spec: &TestSpec) -> Result<Rational> {
    require_four_nat(spec)?;
    if g.arity() != spec.len() {
        return Err(Error::LengthMismatch {
            expected: spec.len(),
            actual: g.arity(),
        });
    }
    let layout = Layout::standard(spec.k, spec.d);
    let ge = g.entries();
    let counts = fold_points(
        spec,
        &layout,
        || [0u128; 3],
        |acc, pt| {
            let r = ge[pt.g[0] as usize] + ge[pt.g[1] as usize] + ge[pt.g[2] as usize];
            acc[r.value() as usize] += pt.weight as u128;
        },
        |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]],
    );
    Ok(omega_expectation(counts, spec.denominator()).re())
}

/// `E[omega^(f(x) + g(y) + g(z))]` under the 4NAT test, by enumeration.
pub fn fgg_direct(spec: &TestSpec, f: &FunctionTable, g: &FunctionTable) -> Result<CycloRational> {
    require_four_nat(spec)?;
    spec.check_tables(f, g)?;
    let layout = Layout::standard(spec.k, spec.d);
    let (fe, ge) = (f.entries(), g.entries());
    let counts = fold_points(
        spec,
        &layout,
        || [0u128; 3],
        |acc, pt| {
            let r = fe[pt.x as usize] + ge[pt.g[0] as usize] + ge[pt.g[1] as usize];
            acc[r.value() as usize] += pt.weight as u128;
        },
        |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]],
    );
    Ok(omega_expectation(counts, spec.denominator()))
}

/// `sum_alpha f^(pi3(alpha)) g^(alpha)^2 (-1/2)^#alpha` over `alpha in Z3^(dK)`.
pub fn fgg_fourier(
    fhat: &FourierTable,
    ghat: &FourierTable,
    d: usize,
    k: usize,
) -> Result<CycloRational> {
    if fhat.arity() != k || ghat.arity() != d * k {
        return Err(Error::LengthMismatch {
            expected: d * k,
            actual: ghat.arity(),
        });
    }
    let mut acc = CycloRational::zero();
    for (alpha, gc) in ghat.support() {
        let alpha = alpha.with_blocks(d, k)?;
        let fc = fhat.get(&alpha.pi3()?)?;
        if fc.is_zero() {
            continue;
        }
        let sign = rat(-1, 2).pow(alpha.weight() as i32);
        acc += &(&(fc * gc) * gc).scale(&sign);
    }
    Ok(acc)
}

/// `(direct, fourier)` sides of the `E[f g g]` identity; they agree exactly.
pub fn verify_fgg_formula(
    f: &FunctionTable,
    g: &FunctionTable,
    d: usize,
    k: usize,
) -> Result<(CycloRational, CycloRational)> {
    let spec = TestSpec::four_nat(k, d)?;
    let direct = fgg_direct(&spec, f, g)?;
    let fourier = fgg_fourier(&fourier_transform(f)?, &fourier_transform(g)?, d, k)?;
    Ok((direct, fourier))
}

/// Both sides of the `E[4NAT]` upper bound, with the right-hand side
/// bracketed by rational square-root enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFourierBound {
    /// Exact `E[4NAT(f(x), g(y), g(z), g(w))]`.
    pub lhs: Rational,
    pub rhs_lower: Rational,
    pub rhs_upper: Rational,
}

impl BigFourierBound {
    /// `rhs_lower - lhs`; nonnegative certifies the bound.
    pub fn gap(&self) -> Rational {
        &self.rhs_lower - &self.lhs
    }
}

/// `2/3 + 2/3 sum_alpha |f^(pi3(alpha))| |g^(alpha)|^2 (1/2)^#alpha` against
/// the exact 4NAT acceptance.
pub fn bigfourier_bound(
    f: &FunctionTable,
    g: &FunctionTable,
    d: usize,
    k: usize,
) -> Result<BigFourierBound> {
    require_folded(&[f, g])?;
    let spec = TestSpec::four_nat(k, d)?;
    let lhs = pass_probability(&spec, f, g, None)?;
    let (fhat, ghat) = (fourier_transform(f)?, fourier_transform(g)?);

    // |f^(beta)| enclosures, one per beta.
    let moduli: Vec<(Rational, Rational)> = fhat
        .coeffs()
        .iter()
        .map(|c| sqrt_enclosure(&c.norm_sq(), SQRT_BITS))
        .collect();
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (alpha, gc) in ghat.support() {
        let alpha = alpha.with_blocks(d, k)?;
        let beta = alpha.pi3()?.index() as usize;
        let scale = gc.norm_sq() * rat(1, 2).pow(alpha.weight() as i32);
        lo += &moduli[beta].0 * &scale;
        hi += &moduli[beta].1 * &scale;
    }
    let two_thirds = rat(2, 3);
    Ok(BigFourierBound {
        lhs,
        rhs_lower: &two_thirds + &two_thirds * lo,
        rhs_upper: &two_thirds + &two_thirds * hi,
    })
}

/// `rhs_lower - lhs` of [`bigfourier_bound`].
pub fn bigfourier_gap(
    f: &FunctionTable,
    g: &FunctionTable,
    d: usize,
    k: usize,
) -> Result<Rational> {
    Ok(bigfourier_bound(f, g, d, k)?.gap())
}

/// Probability under the 2-NLin test that block 0 of `z` shows both values
/// other than `x_0`, so that `z[0]` alone pins down `x_0`.
pub fn z_determines_x_probability(k: usize, d: usize) -> Result<Rational> {
    let spec = TestSpec::two_nlin(k, d)?;
    let layout = Layout::standard(k, d);
    let l = spec.len();
    let hits = fold_points(
        &spec,
        &layout,
        || 0u128,
        |acc, pt| {
            let x0 = x_digit(pt.x, 0, k);
            let mut seen = [false; 3];
            for j in 0..d {
                seen[((pt.g[1] / pow3(l - 1 - j)) % 3) as usize] = true;
            }
            if seen.iter().enumerate().all(|(v, &s)| s == (v != x0)) {
                *acc += pt.weight as u128;
            }
        },
        |a, b| a + b,
    );
    Ok(over(hits, spec.denominator() as u128))
}

/// One draw from the test, as table indices.
pub fn sample_point<R: Rng + ?Sized>(spec: &TestSpec, rng: &mut R) -> PointRef {
    let k = spec.k;
    let l = spec.len();
    let x_digits: Vec<u8> = (0..k).map(|_| rng.random_range(0..3u8)).collect();
    let x = x_digits.iter().fold(0u64, |acc, &v| acc * 3 + v as u64);
    let mut g = [0u64; 3];
    for p in 0..l {
        let a = x_digits[p / spec.d];
        let (y, z, w) = match spec.kind {
            TestKind::FourNat => {
                let b = (a + rng.random_range(1..3u8)) % 3;
                match rng.random_range(0..3u8) {
                    0 => (a, b, b),
                    1 => (b, a, b),
                    _ => (b, b, a),
                }
            }
            TestKind::TwoNLin => {
                let y = rng.random_range(0..3u8);
                let z = if y == a {
                    (a + rng.random_range(1..3u8)) % 3
                } else {
                    3 - a - y
                };
                (y, z, 0)
            }
        };
        g[0] = g[0] * 3 + y as u64;
        g[1] = g[1] * 3 + z as u64;
        g[2] = g[2] * 3 + w as u64;
    }
    PointRef { x, g, weight: 1 }
}

/// Number of accepted runs out of `trials` seeded draws.
pub fn monte_carlo_accepts<R: Rng + ?Sized>(
    spec: &TestSpec,
    f: &FunctionTable,
    g: &FunctionTable,
    h: Option<&FunctionTable>,
    trials: u64,
    rng: &mut R,
) -> Result<u64> {
    spec.check_tables(f, g)?;
    if spec.kind == TestKind::TwoNLin && h.is_none() {
        return Err(Error::OutOfRange("2-NLin test needs h".into()));
    }
    let (fe, ge) = (f.entries(), g.entries());
    let mut accepted = 0;
    for _ in 0..trials {
        let pt = sample_point(spec, rng);
        let ok = match spec.kind {
            TestKind::FourNat => nat4([
                fe[pt.x as usize],
                ge[pt.g[0] as usize],
                ge[pt.g[1] as usize],
                ge[pt.g[2] as usize],
            ]),
            TestKind::TwoNLin => {
                let hz = h.expect("checked").entries()[pt.g[1] as usize];
                if rng.random_range(0..4u8) == 0 {
                    fe[pt.x as usize] != hz
                } else {
                    ge[pt.g[0] as usize] != hz
                }
            }
        };
        accepted += ok as u64;
    }
    Ok(accepted)
}
