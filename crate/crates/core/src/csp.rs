//! Weighted CSP instances, exact valuation, and the brute-force optimum.
//!
//! Assignments are enumerated in lexicographic order with the first declared
//! variable most significant; the brute-force search returns the first
//! maximizer in that order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::predicates::{eval_2nlin, eval_4nat, eval_twopair};
use crate::rational::{fmt_rational, Rational};
use crate::z3::Z3;

/// Default cap on the number of assignments brute force may evaluate.
pub const DEFAULT_MAX_ASSIGNMENTS: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableId {
    pub name: String,
    pub domain_size: u32,
}

impl VariableId {
    pub fn new(name: impl Into<String>, domain_size: u32) -> Self {
        VariableId {
            name: name.into(),
            domain_size,
        }
    }

    pub fn z3(name: impl Into<String>) -> Self {
        Self::new(name, 3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    FourNat,
    TwoPair,
    TwoNLin,
    TwoToOneEdge,
    DtoOneEdge,
}

impl ConstraintKind {
    pub fn arity(self) -> usize {
        match self {
            ConstraintKind::FourNat | ConstraintKind::TwoPair => 4,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstraintKind::FourNat => "FourNAT",
            ConstraintKind::TwoPair => "TwoPair",
            ConstraintKind::TwoNLin => "TwoNLin",
            ConstraintKind::TwoToOneEdge => "TwoToOneEdge",
            ConstraintKind::DtoOneEdge => "DtoOneEdge",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "FourNAT" => ConstraintKind::FourNat,
            "TwoPair" => ConstraintKind::TwoPair,
            "TwoNLin" => ConstraintKind::TwoNLin,
            "TwoToOneEdge" => ConstraintKind::TwoToOneEdge,
            "DtoOneEdge" => ConstraintKind::DtoOneEdge,
            other => return Err(Error::Parse(format!("unknown constraint kind {other:?}"))),
        })
    }

    fn is_edge(self) -> bool {
        matches!(
            self,
            ConstraintKind::TwoToOneEdge | ConstraintKind::DtoOneEdge
        )
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Params {
    /// `k_1..k_4` for FourNAT and TwoPair.
    Shifts([Z3; 4]),
    /// Right-hand side `a` of `v1 - v2 != a`.
    Rhs(Z3),
    /// `projection[label(v)] = label(u)` for an edge over `[u, v]`.
    Projection(Vec<u32>),
}

/// A single weighted constraint. Variables are referenced by name.
///
/// Edge constraints order their variables `[u, v]` where `u` carries the
/// small label set; the edge is satisfied when `projection[v] == u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub vars: Vec<String>,
    pub params: Params,
    pub weight: Rational,
}

impl Constraint {
    pub fn new(
        kind: ConstraintKind,
        vars: Vec<String>,
        params: Params,
        weight: Rational,
    ) -> Result<Self> {
        if vars.len() != kind.arity() {
            return Err(Error::InvalidInstance(format!(
                "{kind} expects {} variables, got {}",
                kind.arity(),
                vars.len()
            )));
        }
        let ok = matches!(
            (kind, &params),
            (
                ConstraintKind::FourNat | ConstraintKind::TwoPair,
                Params::Shifts(_)
            ) | (ConstraintKind::TwoNLin, Params::Rhs(_))
                | (
                    ConstraintKind::TwoToOneEdge | ConstraintKind::DtoOneEdge,
                    Params::Projection(_)
                )
        );
        if !ok {
            return Err(Error::InvalidInstance(format!(
                "parameters {params:?} do not match kind {kind}"
            )));
        }
        if !weight.is_positive() {
            return Err(Error::InvalidInstance(format!(
                "weight must be positive, got {}",
                fmt_rational(&weight)
            )));
        }
        Ok(Constraint {
            kind,
            vars,
            params,
            weight,
        })
    }

    pub fn four_nat(vars: [&str; 4], shifts: [Z3; 4], weight: Rational) -> Self {
        Self::new(
            ConstraintKind::FourNat,
            vars.iter().map(|s| s.to_string()).collect(),
            Params::Shifts(shifts),
            weight,
        )
        .expect("well-formed FourNAT")
    }

    pub fn two_nlin(v1: &str, v2: &str, a: Z3, weight: Rational) -> Self {
        Self::new(
            ConstraintKind::TwoNLin,
            vec![v1.to_string(), v2.to_string()],
            Params::Rhs(a),
            weight,
        )
        .expect("well-formed TwoNLin")
    }

    /// Whether the constraint holds for `labels`, one per entry of `vars`.
    pub fn satisfied(&self, labels: &[u32]) -> bool {
        let z = |i: usize| Z3::reduce(labels[i] as i64);
        match &self.params {
            Params::Shifts(k) => {
                let t = [z(0), z(1), z(2), z(3)];
                match self.kind {
                    ConstraintKind::FourNat => eval_4nat(t, *k),
                    _ => eval_twopair([t[0] + k[0], t[1] + k[1], t[2] + k[2], t[3] + k[3]]),
                }
            }
            Params::Rhs(a) => eval_2nlin(z(0), z(1), *a),
            Params::Projection(p) => p.get(labels[1] as usize) == Some(&labels[0]),
        }
    }

    pub fn with_weight(&self, weight: Rational) -> Self {
        Constraint {
            weight,
            ..self.clone()
        }
    }
}

/// Checks that `projection: [big] -> [small]` hits every image label exactly
/// `big / small` times; returns that `d`.
pub fn check_d_to_one(projection: &[u32], small: u32) -> Result<u32> {
    let big = projection.len() as u32;
    if small == 0 || big == 0 || !big.is_multiple_of(small) {
        return Err(Error::InvalidInstance(format!(
            "projection of size {big} cannot be d-to-1 onto {small} labels"
        )));
    }
    let d = big / small;
    let mut counts = vec![0u32; small as usize];
    for &l in projection {
        let slot = counts.get_mut(l as usize).ok_or_else(|| {
            Error::InvalidInstance(format!("projection label {l} out of range {small}"))
        })?;
        *slot += 1;
    }
    if let Some((label, c)) = counts.iter().enumerate().find(|(_, &c)| c != d) {
        return Err(Error::InvalidInstance(format!(
            "projection is not {d}-to-1: label {label} has {c} preimages"
        )));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    variables: Vec<VariableId>,
    constraints: Vec<Constraint>,
    resolved: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    normalization: Rational,
}

impl CspInstance {
    /// Validates and normalizes the weights to sum to exactly 1. The original
    /// total is kept as [`CspInstance::normalization`].
    pub fn new(variables: Vec<VariableId>, constraints: Vec<Constraint>) -> Result<Self> {
        let mut index = HashMap::with_capacity(variables.len());
        for (i, v) in variables.iter().enumerate() {
            if v.domain_size == 0 {
                return Err(Error::InvalidInstance(format!(
                    "variable {} has empty domain",
                    v.name
                )));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!(
                    "duplicate variable {}",
                    v.name
                )));
            }
        }
        if constraints.is_empty() {
            return Err(Error::InvalidInstance("no constraints".into()));
        }
        let mut resolved = Vec::with_capacity(constraints.len());
        for c in &constraints {
            let ids =
                c.vars
                    .iter()
                    .map(|n| {
                        index.get(n).copied().ok_or_else(|| {
                            Error::InvalidInstance(format!("undeclared variable {n}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
            check_domains(c, &ids, &variables)?;
            resolved.push(ids);
        }
        let total = constraints
            .iter()
            .fold(Rational::zero(), |acc, c| acc + &c.weight);
        let constraints = if total.is_one() {
            constraints
        } else {
            constraints
                .into_iter()
                .map(|c| {
                    let w = &c.weight / &total;
                    c.with_weight(w)
                })
                .collect()
        };
        Ok(CspInstance {
            variables,
            constraints,
            resolved,
            index,
            normalization: total,
        })
    }

    pub fn variables(&self) -> &[VariableId] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Sum of the weights as given, before normalization.
    pub fn normalization(&self) -> &Rational {
        &self.normalization
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn total_weight(&self) -> Rational {
        self.constraints
            .iter()
            .fold(Rational::zero(), |acc, c| acc + &c.weight)
    }

    /// Number of total assignments, saturating.
    pub fn search_space(&self) -> u128 {
        self.variables
            .iter()
            .try_fold(1u128, |acc, v| acc.checked_mul(v.domain_size as u128))
            .unwrap_or(u128::MAX)
    }

    fn labels_for(&self, ci: usize, asg: &[u32], buf: &mut Vec<u32>) {
        buf.clear();
        buf.extend(self.resolved[ci].iter().map(|&i| asg[i]));
    }

    pub fn constraint_satisfied(&self, ci: usize, asg: &Assignment) -> bool {
        let mut buf = Vec::with_capacity(4);
        self.labels_for(ci, &asg.labels, &mut buf);
        self.constraints[ci].satisfied(&buf)
    }

    /// Exact weighted fraction of constraints satisfied by `asg`.
    pub fn value(&self, asg: &Assignment) -> Result<Rational> {
        asg.check(self)?;
        let mut buf = Vec::with_capacity(4);
        let mut acc = Rational::zero();
        for (ci, c) in self.constraints.iter().enumerate() {
            self.labels_for(ci, &asg.labels, &mut buf);
            if c.satisfied(&buf) {
                acc += &c.weight;
            }
        }
        Ok(acc)
    }

    pub fn brute_force_optimum(&self) -> Result<(Rational, Assignment)> {
        self.brute_force_optimum_capped(DEFAULT_MAX_ASSIGNMENTS)
    }

    /// Exhaustive optimum and the lexicographically first maximizer.
    pub fn brute_force_optimum_capped(&self, cap: u128) -> Result<(Rational, Assignment)> {
        let size = self.search_space();
        if size > cap {
            return Err(Error::SearchCap { size, cap });
        }
        let size = size as u64;
        let scorer = self.scorer();
        let radices: Vec<u32> = self.variables.iter().map(|v| v.domain_size).collect();

        // Split the index range into chunks; merge keeps the smallest index on ties.
        let chunks = 64u64.min(size.max(1));
        let chunk_len = size.div_ceil(chunks);
        let best = (0..chunks)
            .into_par_iter()
            .filter_map(|ci| {
                let start = ci * chunk_len;
                let end = (start + chunk_len).min(size);
                (start < end).then(|| scan(&scorer, &radices, start, end))
            })
            .reduce_with(|a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            })
            .expect("non-empty search space");

        let labels = decode_mixed(best.1, &radices);
        Ok((scorer.to_value(best.0), Assignment { labels }))
    }

    /// Integer scoring over the common denominator of the weights.
    pub fn scorer(&self) -> Scorer<'_> {
        let (scores, den) = integer_weights(&self.constraints);
        Scorer {
            inst: self,
            scores,
            den,
        }
    }

    /// Classifies the exact optimum against `(c, s)`.
    pub fn decide(&self, c: &Rational, s: &Rational) -> Result<Decision> {
        self.decide_capped(c, s, DEFAULT_MAX_ASSIGNMENTS)
    }

    pub fn decide_capped(&self, c: &Rational, s: &Rational, cap: u128) -> Result<Decision> {
        if s > c {
            return Err(Error::OutOfRange(format!(
                "need s <= c, got c={} s={}",
                fmt_rational(c),
                fmt_rational(s)
            )));
        }
        let (opt, _) = self.brute_force_optimum_capped(cap)?;
        Ok(classify(&opt, c, s))
    }
}

pub fn classify(opt: &Rational, c: &Rational, s: &Rational) -> Decision {
    if opt >= c {
        Decision::AtLeastC
    } else if opt < s {
        Decision::BelowS
    } else {
        Decision::Between
    }
}

/// Weighted satisfaction counts as integers: `value = score / den`.
pub struct Scorer<'a> {
    inst: &'a CspInstance,
    scores: Vec<u128>,
    den: BigInt,
}

impl Scorer<'_> {
    /// Score of full labels in variable order (not range-checked).
    pub fn score(&self, labels: &[u32]) -> u128 {
        let mut buf = Vec::with_capacity(4);
        let mut score = 0u128;
        for (ci, c) in self.inst.constraints.iter().enumerate() {
            self.inst.labels_for(ci, labels, &mut buf);
            if c.satisfied(&buf) {
                score += self.scores[ci];
            }
        }
        score
    }

    /// Score of a perfect assignment.
    pub fn full(&self) -> u128 {
        self.scores.iter().sum()
    }

    pub fn to_value(&self, score: u128) -> Rational {
        BigRational::new(score.into(), self.den.clone())
    }
}

fn scan(scorer: &Scorer<'_>, radices: &[u32], start: u64, end: u64) -> (u128, u64) {
    let mut labels = decode_mixed(start, radices);
    let mut best = (0u128, start);
    for idx in start..end {
        let score = scorer.score(&labels);
        if idx == start || score > best.0 {
            best = (score, idx);
        }
        odometer(&mut labels, radices);
    }
    best
}

/// Advances mixed-radix labels, last position fastest. Returns false on wrap.
pub fn odometer(labels: &mut [u32], radices: &[u32]) -> bool {
    for p in (0..labels.len()).rev() {
        labels[p] += 1;
        if labels[p] < radices[p] {
            return true;
        }
        labels[p] = 0;
    }
    false
}

fn check_domains(c: &Constraint, ids: &[usize], vars: &[VariableId]) -> Result<()> {
    if c.kind.is_edge() {
        let (u, v) = (&vars[ids[0]], &vars[ids[1]]);
        let Params::Projection(p) = &c.params else {
            unreachable!("checked in Constraint::new")
        };
        if p.len() != v.domain_size as usize {
            return Err(Error::InvalidInstance(format!(
                "projection has {} entries but {} has {} labels",
                p.len(),
                v.name,
                v.domain_size
            )));
        }
        let d = check_d_to_one(p, u.domain_size)?;
        if c.kind == ConstraintKind::TwoToOneEdge && d != 2 {
            return Err(Error::InvalidInstance(format!(
                "TwoToOneEdge projection is {d}-to-1"
            )));
        }
    } else {
        for &i in ids {
            if vars[i].domain_size != 3 {
                return Err(Error::InvalidInstance(format!(
                    "{} needs Z3 variables; {} has {} labels",
                    c.kind, vars[i].name, vars[i].domain_size
                )));
            }
        }
    }
    Ok(())
}

/// Integer numerators over the common denominator of the weights.
fn integer_weights(cs: &[Constraint]) -> (Vec<u128>, BigInt) {
    let den = cs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.weight.denom()));
    let scores = cs
        .iter()
        .map(|c| {
            (c.weight.numer() * (&den / c.weight.denom()))
                .to_u128()
                .expect("weights over a u128 common denominator")
        })
        .collect();
    (scores, den)
}

pub fn decode_mixed(mut idx: u64, radices: &[u32]) -> Vec<u32> {
    let mut labels = vec![0u32; radices.len()];
    for p in (0..radices.len()).rev() {
        let r = radices[p] as u64;
        labels[p] = (idx % r) as u32;
        idx /= r;
    }
    labels
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    AtLeastC,
    BelowS,
    Between,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::AtLeastC => "AtLeastC",
            Decision::BelowS => "BelowS",
            Decision::Between => "Between",
        })
    }
}

/// Labels aligned with an instance's variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub labels: Vec<u32>,
}

impl Assignment {
    pub fn new(labels: Vec<u32>) -> Self {
        Assignment { labels }
    }

    pub fn from_map(inst: &CspInstance, map: &BTreeMap<String, u32>) -> Result<Self> {
        for name in map.keys() {
            if inst.var_index(name).is_none() {
                return Err(Error::InvalidAssignment(format!(
                    "undeclared variable {name}"
                )));
            }
        }
        let labels = inst
            .variables
            .iter()
            .map(|v| {
                map.get(&v.name)
                    .copied()
                    .ok_or_else(|| Error::InvalidAssignment(format!("no label for {}", v.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        let asg = Assignment { labels };
        asg.check(inst)?;
        Ok(asg)
    }

    pub fn to_map(&self, inst: &CspInstance) -> BTreeMap<String, u32> {
        inst.variables
            .iter()
            .zip(&self.labels)
            .map(|(v, &l)| (v.name.clone(), l))
            .collect()
    }

    pub fn get(&self, inst: &CspInstance, name: &str) -> Option<u32> {
        inst.var_index(name).map(|i| self.labels[i])
    }

    fn check(&self, inst: &CspInstance) -> Result<()> {
        if self.labels.len() != inst.variables.len() {
            return Err(Error::InvalidAssignment(format!(
                "partial assignment: {} labels for {} variables",
                self.labels.len(),
                inst.variables.len()
            )));
        }
        for (v, &l) in inst.variables.iter().zip(&self.labels) {
            if l >= v.domain_size {
                return Err(Error::InvalidAssignment(format!(
                    "label {l} out of range for {} ({} labels)",
                    v.name, v.domain_size
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn z(v: u8) -> Z3 {
        Z3::new(v).unwrap()
    }

    pub(crate) fn three_nlin() -> CspInstance {
        let vars = vec![VariableId::z3("v1"), VariableId::z3("v2")];
        let cs = (0..3)
            .map(|a| Constraint::two_nlin("v1", "v2", z(a), rat(1, 3)))
            .collect();
        CspInstance::new(vars, cs).unwrap()
    }

    fn single(c: Constraint, n: usize) -> CspInstance {
        let vars = (1..=n).map(|i| VariableId::z3(format!("v{i}"))).collect();
        CspInstance::new(vars, vec![c]).unwrap()
    }

    #[test]
    fn value_examples() {
        let inst = single(Constraint::two_nlin("v1", "v2", z(0), int(1)), 2);
        assert_eq!(inst.value(&Assignment::new(vec![0, 1])).unwrap(), int(1));

        let inst = three_nlin();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(inst.value(&Assignment::new(vec![a, b])).unwrap(), rat(2, 3));
            }
        }

        let inst = single(
            Constraint::four_nat(["v1", "v2", "v3", "v4"], [Z3::ZERO; 4], int(1)),
            4,
        );
        assert_eq!(
            inst.value(&Assignment::new(vec![0, 1, 2, 0])).unwrap(),
            int(0)
        );
    }

    #[test]
    fn value_errors() {
        let inst = three_nlin();
        assert!(matches!(
            inst.value(&Assignment::new(vec![0])),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(inst.value(&Assignment::new(vec![0, 3])).is_err());
        let mut m = BTreeMap::new();
        m.insert("v1".to_string(), 0);
        m.insert("v2".to_string(), 0);
        m.insert("ghost".to_string(), 0);
        assert!(Assignment::from_map(&inst, &m).is_err());
        m.remove("ghost");
        assert!(Assignment::from_map(&inst, &m).is_ok());
    }

    #[test]
    fn brute_force_examples() {
        let (opt, w) = three_nlin().brute_force_optimum().unwrap();
        assert_eq!((opt, w.labels), (rat(2, 3), vec![0, 0]));

        let inst = single(Constraint::two_nlin("v1", "v2", z(0), int(1)), 2);
        let (opt, w) = inst.brute_force_optimum().unwrap();
        assert_eq!((opt, w.labels), (int(1), vec![0, 1]));

        let inst = single(
            Constraint::four_nat(["v1", "v2", "v3", "v4"], [Z3::ZERO; 4], int(1)),
            4,
        );
        let (opt, w) = inst.brute_force_optimum().unwrap();
        assert_eq!((opt, w.labels), (int(1), vec![0, 0, 0, 0]));
    }

    #[test]
    fn brute_force_cap() {
        let inst = three_nlin();
        assert!(matches!(
            inst.brute_force_optimum_capped(8),
            Err(Error::SearchCap { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn decide_examples() {
        let inst = three_nlin();
        assert_eq!(inst.decide(&int(1), &rat(3, 4)).unwrap(), Decision::BelowS);
        assert_eq!(inst.decide(&int(1), &rat(1, 2)).unwrap(), Decision::Between);
        let sat = single(Constraint::two_nlin("v1", "v2", z(0), int(1)), 2);
        assert_eq!(sat.decide(&int(1), &rat(3, 4)).unwrap(), Decision::AtLeastC);
        assert!(inst.decide(&rat(1, 2), &int(1)).is_err());
    }

    #[test]
    fn weights_normalize() {
        let vars = vec![VariableId::z3("a"), VariableId::z3("b")];
        let cs = vec![
            Constraint::two_nlin("a", "b", z(0), int(3)),
            Constraint::two_nlin("a", "b", z(1), int(1)),
        ];
        let inst = CspInstance::new(vars, cs).unwrap();
        assert_eq!(inst.total_weight(), int(1));
        assert_eq!(inst.normalization(), &int(4));
        assert_eq!(inst.constraints()[0].weight, rat(3, 4));
    }

    #[test]
    fn invalid_instances() {
        let vars = vec![VariableId::z3("a"), VariableId::z3("a")];
        assert!(
            CspInstance::new(vars, vec![Constraint::two_nlin("a", "a", z(0), int(1))]).is_err()
        );

        let vars = vec![VariableId::z3("a")];
        assert!(
            CspInstance::new(vars, vec![Constraint::two_nlin("a", "b", z(0), int(1))]).is_err()
        );

        assert!(Constraint::new(
            ConstraintKind::TwoNLin,
            vec!["a".into()],
            Params::Rhs(z(0)),
            int(1)
        )
        .is_err());
        assert!(Constraint::new(
            ConstraintKind::TwoNLin,
            vec!["a".into(), "b".into()],
            Params::Shifts([Z3::ZERO; 4]),
            int(1)
        )
        .is_err());
        assert!(Constraint::new(
            ConstraintKind::TwoNLin,
            vec!["a".into(), "b".into()],
            Params::Rhs(z(0)),
            int(0)
        )
        .is_err());
    }

    #[test]
    fn edge_constraints_validate_projection() {
        let vars = vec![VariableId::new("u", 3), VariableId::new("v", 6)];
        let edge = |p: Vec<u32>| {
            Constraint::new(
                ConstraintKind::TwoToOneEdge,
                vec!["u".into(), "v".into()],
                Params::Projection(p),
                int(1),
            )
            .unwrap()
        };
        assert!(CspInstance::new(vars.clone(), vec![edge(vec![0, 0, 1, 1, 2, 2])]).is_ok());
        assert!(CspInstance::new(vars.clone(), vec![edge(vec![0, 0, 0, 1, 2, 2])]).is_err());
        assert!(CspInstance::new(vars.clone(), vec![edge(vec![0, 0, 1, 1, 2])]).is_err());
        assert!(check_d_to_one(&[0, 1, 2, 0, 1, 3], 3).is_err());

        let inst = CspInstance::new(vars, vec![edge(vec![0, 0, 1, 1, 2, 2])]).unwrap();
        assert_eq!(inst.value(&Assignment::new(vec![1, 3])).unwrap(), int(1));
        assert_eq!(inst.value(&Assignment::new(vec![1, 4])).unwrap(), int(0));
    }

    #[test]
    fn heterogeneous_domains_brute_force() {
        let vars = vec![VariableId::new("u", 3), VariableId::new("v", 6)];
        let cs = vec![Constraint::new(
            ConstraintKind::TwoToOneEdge,
            vec!["u".into(), "v".into()],
            Params::Projection(vec![0, 0, 1, 1, 2, 2]),
            int(1),
        )
        .unwrap()];
        let inst = CspInstance::new(vars, cs).unwrap();
        let (opt, w) = inst.brute_force_optimum().unwrap();
        assert_eq!((opt, w.labels), (int(1), vec![0, 0]));
    }
}
