//! d-to-1 Label Cover, the constraint-variable reduction, the folded
//! long-code reduction to 4NAT, and Fourier decoding of long codes.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::csp::{
    check_d_to_one, Assignment, Constraint, ConstraintKind, CspInstance, Params, VariableId,
};
use crate::dictator::{fold_points, Layout, TestSpec};
use crate::error::{Error, Result};
use crate::fourier::{folded_class, FourierTable};
use crate::gadgets::{apply_to_instance, Gadget};
use crate::rational::{pow3, Rational};
use crate::z3::{Z3String, Z3};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcEdge {
    pub u: String,
    pub v: String,
    /// `projection[label(v)]` for `label(v) in [dK]`, values in `[K]`.
    pub projection: Vec<u32>,
    pub weight: Rational,
}

/// Bipartite d-to-1 Label Cover. `U` vertices take labels in `[K]`, `V`
/// vertices in `[dK]`; weights are normalized to sum to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCoverInstance {
    k: usize,
    d: usize,
    u: Vec<String>,
    v: Vec<String>,
    edges: Vec<LcEdge>,
}

impl LabelCoverInstance {
    pub fn new(
        k: usize,
        d: usize,
        u: Vec<String>,
        v: Vec<String>,
        edges: Vec<LcEdge>,
    ) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::InvalidInstance(format!(
                "need K, d >= 1, got K={k} d={d}"
            )));
        }
        if edges.is_empty() {
            return Err(Error::InvalidInstance("no edges".into()));
        }
        let mut names = HashSet::new();
        for n in u.iter().chain(&v) {
            if !names.insert(n.as_str()) {
                return Err(Error::InvalidInstance(format!("duplicate vertex {n}")));
            }
        }
        let us: HashSet<&str> = u.iter().map(String::as_str).collect();
        let vs: HashSet<&str> = v.iter().map(String::as_str).collect();
        let mut total = Rational::zero();
        for e in &edges {
            if !us.contains(e.u.as_str()) || !vs.contains(e.v.as_str()) {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) must join a U vertex to a V vertex",
                    e.u, e.v
                )));
            }
            if e.projection.len() != d * k {
                return Err(Error::InvalidInstance(format!(
                    "projection on edge ({}, {}) has {} entries, expected {}",
                    e.u,
                    e.v,
                    e.projection.len(),
                    d * k
                )));
            }
            if check_d_to_one(&e.projection, k as u32)? != d as u32 {
                return Err(Error::InvalidInstance(format!(
                    "projection is not {d}-to-1"
                )));
            }
            if e.weight <= Rational::zero() {
                return Err(Error::InvalidInstance(
                    "edge weights must be positive".into(),
                ));
            }
            total += &e.weight;
        }
        let edges = edges
            .into_iter()
            .map(|e| LcEdge {
                weight: &e.weight / &total,
                ..e
            })
            .collect();
        Ok(LabelCoverInstance { k, d, u, v, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn u(&self) -> &[String] {
        &self.u
    }

    pub fn v(&self) -> &[String] {
        &self.v
    }

    pub fn edges(&self) -> &[LcEdge] {
        &self.edges
    }

    /// The same instance as a CSP over `DtoOneEdge` constraints.
    pub fn to_csp(&self) -> Result<CspInstance> {
        let vars = self
            .u
            .iter()
            .map(|n| VariableId::new(n.clone(), self.k as u32))
            .chain(
                self.v
                    .iter()
                    .map(|n| VariableId::new(n.clone(), (self.d * self.k) as u32)),
            )
            .collect();
        let constraints = self
            .edges
            .iter()
            .map(|e| {
                Constraint::new(
                    ConstraintKind::DtoOneEdge,
                    vec![e.u.clone(), e.v.clone()],
                    Params::Projection(e.projection.clone()),
                    e.weight.clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        CspInstance::new(vars, constraints)
    }
}

/// Labels for every vertex of a Label Cover instance, 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labeling {
    pub labels: BTreeMap<String, u32>,
}

impl Labeling {
    pub fn new(pairs: impl IntoIterator<Item = (impl Into<String>, u32)>) -> Self {
        Labeling {
            labels: pairs.into_iter().map(|(n, l)| (n.into(), l)).collect(),
        }
    }

    fn get(&self, lc: &LabelCoverInstance, name: &str, u_side: bool) -> Result<u32> {
        let l = *self
            .labels
            .get(name)
            .ok_or_else(|| Error::InvalidAssignment(format!("no label for {name}")))?;
        let range = if u_side { lc.k } else { lc.d * lc.k };
        if l as usize >= range {
            return Err(Error::InvalidAssignment(format!(
                "label {l} of {name} outside [0, {range})"
            )));
        }
        Ok(l)
    }

    fn check(&self, lc: &LabelCoverInstance) -> Result<()> {
        for n in &lc.u {
            self.get(lc, n, true)?;
        }
        for n in &lc.v {
            self.get(lc, n, false)?;
        }
        Ok(())
    }
}

/// Weight of the edges with `projection[label(v)] == label(u)`.
pub fn lc_value(lc: &LabelCoverInstance, lab: &Labeling) -> Result<Rational> {
    lab.check(lc)?;
    let mut acc = Rational::zero();
    for e in &lc.edges {
        let (lu, lv) = (lab.get(lc, &e.u, true)?, lab.get(lc, &e.v, false)?);
        if e.projection[lv as usize] == lu {
            acc += &e.weight;
        }
    }
    Ok(acc)
}

/// Exact optimum by exhausting labelings, with the lexicographically first
/// optimal labeling.
pub fn lc_brute_force(lc: &LabelCoverInstance, cap: u128) -> Result<(Rational, Labeling)> {
    let csp = lc.to_csp()?;
    let (opt, asg) = csp.brute_force_optimum_capped(cap)?;
    Ok((
        opt,
        Labeling {
            labels: asg.to_map(&csp),
        },
    ))
}

/// Rewrites every TwoNLin constraint with a 6-label constraint variable and
/// two 2-to-1 edges.
pub fn constraint_variable_reduction(inst: &CspInstance) -> Result<CspInstance> {
    if let Some(c) = inst
        .constraints()
        .iter()
        .find(|c| c.kind != ConstraintKind::TwoNLin)
    {
        return Err(Error::KindMismatch {
            expected: ConstraintKind::TwoNLin.name().into(),
            actual: c.kind.name().into(),
        });
    }
    apply_to_instance(&Gadget::two_nlin_to_two_to_one(), inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcSide {
    U,
    V,
}

/// A long code folded down to its `3^(n-1)` first-coordinate-0
/// representatives, one CSP variable per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedLongCode {
    pub vertex: String,
    pub side: LcSide,
    pub arity: usize,
}

impl FoldedLongCode {
    pub fn rep_count(&self) -> u64 {
        pow3(self.arity - 1)
    }

    pub fn var_name(&self, rep: u64) -> String {
        let tag = match self.side {
            LcSide::U => "f",
            LcSide::V => "g",
        };
        format!("{tag}:{}:{rep}", self.vertex)
    }

    /// The class variable and shift that a query at `x` resolves to.
    pub fn resolve(&self, x: &Z3String) -> Result<(String, Z3)> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                actual: x.len(),
            });
        }
        let (rep, c) = folded_class(x);
        Ok((self.var_name(rep), c))
    }

    /// Representative strings in variable order.
    pub fn representatives(&self) -> impl Iterator<Item = (u64, Z3String)> + '_ {
        (0..self.rep_count()).map(move |r| (r, Z3String::from_index(r, self.arity)))
    }
}

/// Long codes in the reduced instance's variable order: `U` then `V`.
pub fn folded_long_codes(lc: &LabelCoverInstance) -> Vec<FoldedLongCode> {
    let us = lc.u.iter().map(|n| FoldedLongCode {
        vertex: n.clone(),
        side: LcSide::U,
        arity: lc.k,
    });
    let vs = lc.v.iter().map(|n| FoldedLongCode {
        vertex: n.clone(),
        side: LcSide::V,
        arity: lc.d * lc.k,
    });
    us.chain(vs).collect()
}

/// For test position `p` (block `p / d`, column `p % d`), the original
/// `V`-side coordinate it reads: the `(p % d)`-th smallest element of
/// `projection^-1(p / d)`.
pub fn reindex(projection: &[u32], k: usize, d: usize) -> Result<Vec<usize>> {
    if projection.len() != d * k || check_d_to_one(projection, k as u32)? != d as u32 {
        return Err(Error::InvalidInstance(format!(
            "projection is not a {d}-to-1 map onto [{k}]"
        )));
    }
    let mut order = Vec::with_capacity(d * k);
    for i in 0..k as u32 {
        order.extend((0..d * k).filter(|&c| projection[c] == i));
    }
    Ok(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionCaps {
    pub max_variables: u64,
    pub max_constraints: u64,
}

impl Default for ReductionCaps {
    fn default() -> Self {
        ReductionCaps {
            max_variables: 1_000_000,
            max_constraints: 2_000_000,
        }
    }
}

/// `(rep, shift)` for every index of `Z3^n`.
fn class_table(n: usize) -> Vec<(u64, Z3)> {
    (0..pow3(n))
        .map(|i| folded_class(&Z3String::from_index(i, n)))
        .collect()
}

/// One FourNAT constraint per support point of the 4NAT test on every edge,
/// querying folded long codes through shifts. Constraint order is edge index,
/// then support order.
pub fn longcode_4nat_reduction(
    lc: &LabelCoverInstance,
    caps: ReductionCaps,
) -> Result<CspInstance> {
    let (k, d) = (lc.k, lc.d);
    let codes = folded_long_codes(lc);
    let n_vars: u64 = codes.iter().map(FoldedLongCode::rep_count).sum();
    if n_vars > caps.max_variables {
        return Err(Error::EnumerationCap(format!(
            "{n_vars} folded classes exceed {}",
            caps.max_variables
        )));
    }
    let spec = TestSpec::new(crate::dictator::TestKind::FourNat, k, d)?;
    let per_edge = spec.support_size();
    let n_cons = per_edge * lc.edges.len() as u128;
    if n_cons > caps.max_constraints as u128 {
        return Err(Error::EnumerationCap(format!(
            "{n_cons} constraints exceed {}",
            caps.max_constraints
        )));
    }

    let f_classes = class_table(k);
    let g_classes = class_table(d * k);
    let den = BigInt::from(spec.denominator());
    let mut constraints = Vec::with_capacity(n_cons as usize);
    for e in &lc.edges {
        let layout = Layout::permuted(k, d, &reindex(&e.projection, k, d)?)?;
        let points = fold_points(
            &spec,
            &layout,
            Vec::new,
            |acc: &mut Vec<_>, pt| acc.push(*pt),
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        let f = FoldedLongCode {
            vertex: e.u.clone(),
            side: LcSide::U,
            arity: k,
        };
        let g = FoldedLongCode {
            vertex: e.v.clone(),
            side: LcSide::V,
            arity: d * k,
        };
        for pt in points {
            let (fx, fs) = f_classes[pt.x as usize];
            let [gy, gz, gw] = pt.g.map(|i| g_classes[i as usize]);
            let weight = &e.weight * BigRational::new(BigInt::from(pt.weight), den.clone());
            constraints.push(Constraint::new(
                ConstraintKind::FourNat,
                vec![
                    f.var_name(fx),
                    g.var_name(gy.0),
                    g.var_name(gz.0),
                    g.var_name(gw.0),
                ],
                Params::Shifts([fs, gy.1, gz.1, gw.1]),
                weight,
            )?);
        }
    }
    let vars = codes
        .iter()
        .flat_map(|c| (0..c.rep_count()).map(move |r| VariableId::z3(c.var_name(r))))
        .collect();
    CspInstance::new(vars, constraints)
}

/// Every long code set to the dictator of its vertex's label, in the
/// variable order of [`longcode_4nat_reduction`].
pub fn dictator_assignment(lc: &LabelCoverInstance, lab: &Labeling) -> Result<Assignment> {
    lab.check(lc)?;
    let mut labels = Vec::new();
    for code in folded_long_codes(lc) {
        let l = lab.get(lc, &code.vertex, code.side == LcSide::U)? as usize;
        labels.extend(code.representatives().map(|(_, x)| x.get(l).value() as u32));
    }
    Ok(Assignment::new(labels))
}

/// Draws `alpha` with probability `|ghat(alpha)|^2`, then a uniform nonzero
/// coordinate of `alpha` (0-based). Fails when `ghat(0) != 0`, i.e. the
/// function was not folded and the zero index could be drawn.
pub fn fourier_decode<R: Rng + ?Sized>(ghat: &FourierTable, rng: &mut R) -> Result<usize> {
    let n = ghat.arity();
    if !ghat.at(0).is_zero() {
        return Err(Error::NotFolded);
    }
    // |c|^2 has denominator dividing 9^n.
    let scale = BigInt::from(pow3(2 * n));
    let weights: Vec<u128> = ghat
        .coeffs()
        .iter()
        .map(|c| {
            let w = c.norm_sq() * &scale;
            debug_assert!(w.is_integer());
            w.to_integer().to_u128().expect("weight fits u128")
        })
        .collect();
    let total: u128 = weights.iter().sum();
    if total == 0 {
        return Err(Error::OutOfRange("empty spectrum".into()));
    }
    let mut r = rng.random_range(0..total);
    let idx = weights
        .iter()
        .position(|&w| {
            if r < w {
                true
            } else {
                r -= w;
                false
            }
        })
        .expect("r < total");
    let alpha = Z3String::from_index(idx as u64, n);
    let nonzero: Vec<usize> = (0..n).filter(|&i| !alpha.get(i).is_zero()).collect();
    Ok(nonzero[rng.random_range(0..nonzero.len())])
}

pub fn fourier_decode_seeded(ghat: &FourierTable, seed: u64) -> Result<usize> {
    fourier_decode(ghat, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::tests::three_nlin;
    use crate::fourier::{fourier_transform, FunctionTable};
    use crate::rational::{int, rat};

    fn edge(u: &str, v: &str, projection: Vec<u32>) -> LcEdge {
        LcEdge {
            u: u.into(),
            v: v.into(),
            projection,
            weight: int(1),
        }
    }

    fn single(k: usize, d: usize, projection: Vec<u32>) -> LabelCoverInstance {
        LabelCoverInstance::new(
            k,
            d,
            vec!["u".into()],
            vec!["v".into()],
            vec![edge("u", "v", projection)],
        )
        .unwrap()
    }

    #[test]
    fn lc_value_examples() {
        let lc = single(1, 2, vec![0, 0]);
        for l in 0..2 {
            assert_eq!(
                lc_value(&lc, &Labeling::new([("u", 0), ("v", l)])).unwrap(),
                int(1)
            );
        }
        assert!(lc_value(&lc, &Labeling::new([("u", 0), ("v", 2)])).is_err());
        assert!(lc_value(&lc, &Labeling::new([("u", 0)])).is_err());

        // Two parallel edges whose projections disagree everywhere.
        let lc = LabelCoverInstance::new(
            2,
            1,
            vec!["u".into()],
            vec!["v".into()],
            vec![edge("u", "v", vec![0, 1]), edge("u", "v", vec![1, 0])],
        )
        .unwrap();
        assert_eq!(lc_brute_force(&lc, 1000).unwrap().0, rat(1, 2));
    }

    #[test]
    fn invalid_label_cover() {
        let mk = |p: Vec<u32>| {
            LabelCoverInstance::new(
                2,
                2,
                vec!["u".into()],
                vec!["v".into()],
                vec![edge("u", "v", p)],
            )
        };
        assert!(mk(vec![0, 0, 0, 1]).is_err());
        assert!(mk(vec![0, 1, 1]).is_err());
        assert!(mk(vec![0, 1, 2, 1]).is_err());
        assert!(mk(vec![1, 0, 0, 1]).is_ok());
        assert!(LabelCoverInstance::new(
            1,
            2,
            vec!["u".into()],
            vec!["v".into()],
            vec![edge("v", "u", vec![0, 0])]
        )
        .is_err());
    }

    #[test]
    fn cv_reduction() {
        let single = CspInstance::new(
            vec![VariableId::z3("v1"), VariableId::z3("v2")],
            vec![Constraint::two_nlin("v1", "v2", Z3::ZERO, int(1))],
        )
        .unwrap();
        let r = constraint_variable_reduction(&single).unwrap();
        assert_eq!(r.variables().len(), 3);
        assert_eq!(r.variables()[2].domain_size, 6);
        assert_eq!(r.constraints().len(), 2);
        assert_eq!(r.brute_force_optimum().unwrap().0, int(1));

        let r = constraint_variable_reduction(&three_nlin()).unwrap();
        assert_eq!(r.brute_force_optimum().unwrap().0, rat(5, 6));

        let lc = single_lc_csp();
        assert!(matches!(
            constraint_variable_reduction(&lc),
            Err(Error::KindMismatch { .. })
        ));
    }

    fn single_lc_csp() -> CspInstance {
        single(1, 2, vec![0, 0]).to_csp().unwrap()
    }

    #[test]
    fn reindex_inverts_projection() {
        let p = vec![1, 0, 2, 0, 1, 2];
        let order = reindex(&p, 3, 2).unwrap();
        assert_eq!(order, vec![1, 3, 0, 4, 2, 5]);
        for (pos, &orig) in order.iter().enumerate() {
            assert_eq!(p[orig] as usize, pos / 2);
        }
    }

    #[test]
    fn reduction_shape_and_completeness() {
        let lc = single(1, 2, vec![0, 0]);
        let inst = longcode_4nat_reduction(&lc, ReductionCaps::default()).unwrap();
        assert_eq!(inst.variables().len(), 4);
        assert_eq!(inst.constraints().len(), 3 * 36);
        assert_eq!(inst.total_weight(), int(1));
        for l in 0..2 {
            let asg = dictator_assignment(&lc, &Labeling::new([("u", 0), ("v", l)])).unwrap();
            assert_eq!(inst.value(&asg).unwrap(), int(1));
        }
    }

    #[test]
    fn nonmatching_labels_score_like_nonmatching_dictators() {
        let lc = single(2, 1, vec![1, 0]);
        let inst = longcode_4nat_reduction(&lc, ReductionCaps::default()).unwrap();
        let good = dictator_assignment(&lc, &Labeling::new([("u", 0), ("v", 1)])).unwrap();
        assert_eq!(inst.value(&good).unwrap(), int(1));
        let bad = dictator_assignment(&lc, &Labeling::new([("u", 0), ("v", 0)])).unwrap();
        assert_eq!(inst.value(&bad).unwrap(), rat(2, 3));
    }

    #[test]
    fn reduction_cap() {
        let lc = single(1, 2, vec![0, 0]);
        let caps = ReductionCaps {
            max_variables: 3,
            max_constraints: 1000,
        };
        assert!(matches!(
            longcode_4nat_reduction(&lc, caps),
            Err(Error::EnumerationCap(_))
        ));
    }

    #[test]
    fn decode_examples() {
        let dict = fourier_transform(&FunctionTable::dictator(3, 1).unwrap()).unwrap();
        for seed in 0..20 {
            assert_eq!(fourier_decode_seeded(&dict, seed).unwrap(), 1);
        }
        let sum = FunctionTable::from_fn(2, |x| x.get(0) + x.get(1));
        let t = fourier_transform(&sum).unwrap();
        let picks: HashSet<usize> = (0..50)
            .map(|s| fourier_decode_seeded(&t, s).unwrap())
            .collect();
        assert_eq!(picks, HashSet::from([0, 1]));
        assert_eq!(
            fourier_decode_seeded(&t, 7).unwrap(),
            fourier_decode_seeded(&t, 7).unwrap()
        );

        let unfolded = fourier_transform(&FunctionTable::constant(2, Z3::ZERO)).unwrap();
        assert!(matches!(
            fourier_decode_seeded(&unfolded, 0),
            Err(Error::NotFolded)
        ));
    }
}
