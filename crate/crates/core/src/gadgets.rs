//! Gadget reductions: per-constraint rewrites with fresh auxiliary variables,
//! exhaustive certification of their `gamma` parameter, composition, and the
//! threshold map `(c, s) -> (c + (1-c) gamma, s + (1-s) gamma)`.
//!
//! Two concrete gadgets are provided:
//!
//! * [`Gadget::four_nat_to_two_nlin`]: `4NAT(v_i + k_i)` becomes the four
//!   constraints `v_i + k_i != y` over one fresh Z3 variable `y`.
//! * [`Gadget::two_nlin_to_two_to_one`]: `v1 - v2 != a` becomes two 2-to-1
//!   edges to a fresh 6-label variable whose labels are the satisfying local
//!   assignments `(g(v1), g(v2))`, in lexicographic order.
//!
//! Auxiliary variables are named `<prefix>::<source-constraint-index>::<slot>`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::csp::{
    odometer, Assignment, Constraint, ConstraintKind, CspInstance, Params, VariableId,
};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, Rational};
use crate::z3::Z3;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Rule {
    FourNatToTwoNLin,
    TwoNLinToTwoToOne,
    Identity,
    Composite(Box<Gadget>, Box<Gadget>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    name: String,
    source: ConstraintKind,
    target: ConstraintKind,
    /// `(role, domain size)` of the auxiliary variables, in slot order.
    aux_spec: Vec<(String, u32)>,
    rule: Rule,
}

/// Hands out fresh auxiliary names `<prefix>::<slot>`.
#[derive(Clone, Debug)]
pub struct AuxNamer {
    prefix: String,
    next: usize,
}

impl AuxNamer {
    pub fn new(prefix: impl Into<String>) -> Self {
        AuxNamer {
            prefix: prefix.into(),
            next: 0,
        }
    }

    /// Namer for source constraint `index` under the instance-level prefix.
    pub fn for_constraint(base: &str, index: usize) -> Self {
        Self::new(format!("{base}::{index}"))
    }

    pub fn fresh(&mut self, domain_size: u32) -> VariableId {
        let v = VariableId::new(format!("{}::{}", self.prefix, self.next), domain_size);
        self.next += 1;
        v
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GadgetOutput {
    pub aux: Vec<VariableId>,
    pub constraints: Vec<Constraint>,
}

/// Satisfying local assignments `(g(v1), g(v2))` of `v1 - v2 != a`, in
/// lexicographic order. Label `i` of the 6-label aux variable is entry `i`.
pub fn nlin_satisfying_pairs(a: Z3) -> Vec<(Z3, Z3)> {
    let mut out = Vec::with_capacity(6);
    for g1 in Z3::ALL {
        for g2 in Z3::ALL {
            if g1 - g2 != a {
                out.push((g1, g2));
            }
        }
    }
    out
}

impl Gadget {
    pub fn four_nat_to_two_nlin() -> Self {
        Gadget {
            name: "4nat-to-2nlin".into(),
            source: ConstraintKind::FourNat,
            target: ConstraintKind::TwoNLin,
            aux_spec: vec![("y_C".into(), 3)],
            rule: Rule::FourNatToTwoNLin,
        }
    }

    pub fn two_nlin_to_two_to_one() -> Self {
        Gadget {
            name: "2nlin-to-2to1".into(),
            source: ConstraintKind::TwoNLin,
            target: ConstraintKind::TwoToOneEdge,
            aux_spec: vec![("y_C".into(), 6)],
            rule: Rule::TwoNLinToTwoToOne,
        }
    }

    pub fn identity(kind: ConstraintKind) -> Self {
        Gadget {
            name: format!("identity-{}", kind.name()),
            source: kind,
            target: kind,
            aux_spec: Vec::new(),
            rule: Rule::Identity,
        }
    }

    /// `g2` applied to every constraint emitted by `g1`.
    pub fn compose(g1: &Gadget, g2: &Gadget) -> Result<Self> {
        if g1.target != g2.source {
            return Err(Error::KindMismatch {
                expected: g2.source.name().into(),
                actual: g1.target.name().into(),
            });
        }
        let per_emitted = g1.emitted_per_source();
        let mut aux_spec = g1.aux_spec.clone();
        for _ in 0..per_emitted {
            aux_spec.extend(g2.aux_spec.iter().cloned());
        }
        Ok(Gadget {
            name: format!("{}+{}", g1.name, g2.name),
            source: g1.source,
            target: g2.target,
            aux_spec,
            rule: Rule::Composite(Box::new(g1.clone()), Box::new(g2.clone())),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source_kind(&self) -> ConstraintKind {
        self.source
    }

    pub fn target_kind(&self) -> ConstraintKind {
        self.target
    }

    pub fn aux_spec(&self) -> &[(String, u32)] {
        &self.aux_spec
    }

    fn emitted_per_source(&self) -> usize {
        match &self.rule {
            Rule::FourNatToTwoNLin => 4,
            Rule::TwoNLinToTwoToOne => 2,
            Rule::Identity => 1,
            Rule::Composite(g1, g2) => g1.emitted_per_source() * g2.emitted_per_source(),
        }
    }

    /// Rewrites one source constraint. Emitted weights sum to `c.weight`.
    pub fn apply(&self, c: &Constraint, fresh: &mut AuxNamer) -> Result<GadgetOutput> {
        if c.kind != self.source {
            return Err(Error::KindMismatch {
                expected: self.source.name().into(),
                actual: c.kind.name().into(),
            });
        }
        match &self.rule {
            Rule::FourNatToTwoNLin => {
                let Params::Shifts(k) = &c.params else {
                    unreachable!("validated by Constraint::new")
                };
                let y = fresh.fresh(3);
                let w = &c.weight / int(4);
                // v_i + k_i != y  <=>  v_i - y != -k_i
                let constraints = (0..4)
                    .map(|i| Constraint::two_nlin(&c.vars[i], &y.name, -k[i], w.clone()))
                    .collect();
                Ok(GadgetOutput {
                    aux: vec![y],
                    constraints,
                })
            }
            Rule::TwoNLinToTwoToOne => {
                let Params::Rhs(a) = &c.params else {
                    unreachable!("validated by Constraint::new")
                };
                let y = fresh.fresh(6);
                let pairs = nlin_satisfying_pairs(*a);
                let w = &c.weight / int(2);
                let edge = |var: &str, proj: Vec<u32>| {
                    Constraint::new(
                        ConstraintKind::TwoToOneEdge,
                        vec![var.to_string(), y.name.clone()],
                        Params::Projection(proj),
                        w.clone(),
                    )
                };
                let p1 = pairs.iter().map(|p| p.0.value() as u32).collect();
                let p2 = pairs.iter().map(|p| p.1.value() as u32).collect();
                let constraints = vec![edge(&c.vars[0], p1)?, edge(&c.vars[1], p2)?];
                Ok(GadgetOutput {
                    aux: vec![y],
                    constraints,
                })
            }
            Rule::Identity => Ok(GadgetOutput {
                aux: Vec::new(),
                constraints: vec![c.clone()],
            }),
            Rule::Composite(g1, g2) => {
                let first = g1.apply(c, fresh)?;
                let mut out = GadgetOutput {
                    aux: first.aux,
                    constraints: Vec::new(),
                };
                for e in &first.constraints {
                    let inner = g2.apply(e, fresh)?;
                    out.aux.extend(inner.aux);
                    out.constraints.extend(inner.constraints);
                }
                Ok(out)
            }
        }
    }

    /// The source variables, their domains, and the gadget output for `c`
    /// packaged as a standalone instance (source variables first).
    fn local_instance(&self, c: &Constraint) -> Result<(CspInstance, usize)> {
        let mut source_vars: Vec<String> = Vec::new();
        for v in &c.vars {
            if !source_vars.contains(v) {
                source_vars.push(v.clone());
            }
        }
        let out = self.apply(c, &mut AuxNamer::new("aux"))?;
        let n_source = source_vars.len();
        let mut vars: Vec<VariableId> = source_vars
            .into_iter()
            .map(|n| VariableId::new(n, source_domain(self.source)))
            .collect();
        vars.extend(out.aux);
        Ok((CspInstance::new(vars, out.constraints)?, n_source))
    }

    /// Best auxiliary labels for fixed source labels (one per distinct source
    /// variable in first-occurrence order), returning `(score, full labels)`.
    fn best_extension(
        inst: &CspInstance,
        n_source: usize,
        source_labels: &[u32],
    ) -> (u128, Vec<u32>) {
        let scorer = inst.scorer();
        let radices: Vec<u32> = inst.variables().iter().map(|v| v.domain_size).collect();
        let mut labels: Vec<u32> = source_labels.to_vec();
        labels.resize(radices.len(), 0);
        let mut best = (scorer.score(&labels), labels.clone());
        let full = scorer.full();
        if best.0 == full {
            return best;
        }
        while odometer(&mut labels[n_source..], &radices[n_source..]) {
            let s = scorer.score(&labels);
            if s > best.0 {
                best = (s, labels.clone());
                if s == full {
                    break;
                }
            }
        }
        best
    }

    /// Optimal aux labels for source constraint `c` under `source_labels`
    /// (aligned with `c.vars`). Returns aux labels in emission order and the
    /// best achievable local value.
    pub fn extend_assignment(
        &self,
        c: &Constraint,
        source_labels: &[u32],
    ) -> Result<(Vec<u32>, Rational)> {
        let (inst, n_source) = self.local_instance(c)?;
        let mut distinct = vec![0u32; n_source];
        for (name, &l) in c.vars.iter().zip(source_labels) {
            let i = inst.var_index(name).expect("source var present");
            distinct[i] = l;
        }
        let (score, labels) = Self::best_extension(&inst, n_source, &distinct);
        Ok((labels[n_source..].to_vec(), inst.scorer().to_value(score)))
    }
}

fn source_domain(kind: ConstraintKind) -> u32 {
    match kind {
        ConstraintKind::FourNat | ConstraintKind::TwoPair | ConstraintKind::TwoNLin => 3,
        _ => 0,
    }
}

/// Every parameter value for a certifiable source kind.
fn all_params(kind: ConstraintKind) -> Result<Vec<Params>> {
    match kind {
        ConstraintKind::FourNat | ConstraintKind::TwoPair => Ok((0..81u8)
            .map(|i| {
                Params::Shifts([
                    Z3::reduce((i / 27) as i64),
                    Z3::reduce((i / 9) as i64),
                    Z3::reduce((i / 3) as i64),
                    Z3::reduce(i as i64),
                ])
            })
            .collect()),
        ConstraintKind::TwoNLin => Ok(Z3::ALL.iter().map(|&a| Params::Rhs(a)).collect()),
        other => Err(Error::Unsupported(format!(
            "certification over {other} sources"
        ))),
    }
}

/// One row of a certificate: a source assignment and its best extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub params: Params,
    pub source: Vec<u32>,
    pub satisfied: bool,
    pub best_value: Rational,
    /// First optimal aux labeling found, in emission order.
    pub witness_aux: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCertificate {
    pub gadget: String,
    pub gamma: Rational,
    pub entries: Vec<CertificateEntry>,
}

impl GammaCertificate {
    pub fn satisfying(&self) -> impl Iterator<Item = &CertificateEntry> {
        self.entries.iter().filter(|e| e.satisfied)
    }

    pub fn violating(&self) -> impl Iterator<Item = &CertificateEntry> {
        self.entries.iter().filter(|e| !e.satisfied)
    }
}

/// Exhausts every parameter choice and every assignment to the source
/// constraint's variables, optimizing the aux labels each time. Satisfying
/// assignments must reach value 1; all others must share one value `gamma`.
pub fn certify_gamma(g: &Gadget) -> Result<GammaCertificate> {
    let arity = g.source.arity();
    let vars: Vec<String> = (0..arity).map(|i| format!("s{i}")).collect();
    let params = all_params(g.source)?;

    let rows: Vec<Vec<CertificateEntry>> = params
        .into_par_iter()
        .map(|p| -> Result<Vec<CertificateEntry>> {
            let c = Constraint::new(g.source, vars.clone(), p.clone(), Rational::one())?;
            let (inst, n_source) = g.local_instance(&c)?;
            let scorer = inst.scorer();
            let mut rows = Vec::new();
            let mut src = vec![0u32; n_source];
            let radices = vec![3u32; n_source];
            loop {
                let (score, labels) = Gadget::best_extension(&inst, n_source, &src);
                rows.push(CertificateEntry {
                    params: p.clone(),
                    source: src.clone(),
                    satisfied: c.satisfied(&src),
                    best_value: scorer.to_value(score),
                    witness_aux: labels[n_source..].to_vec(),
                });
                if !odometer(&mut src, &radices) {
                    break;
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let entries: Vec<CertificateEntry> = rows.into_iter().flatten().collect();
    let gamma = gamma_from_entries(&entries)?;
    Ok(GammaCertificate {
        gadget: g.name.clone(),
        gamma,
        entries,
    })
}

/// Checks the certificate conditions over exhausted entries and returns the
/// common value of the non-satisfying ones.
pub fn gamma_from_entries(entries: &[CertificateEntry]) -> Result<Rational> {
    let describe =
        |e: &CertificateEntry| format!("params {:?}, source labels {:?}", e.params, e.source);
    if let Some(e) = entries
        .iter()
        .find(|e| e.satisfied && !e.best_value.is_one())
    {
        return Err(Error::CertificationFailure(format!(
            "satisfying assignment only reaches {} ({})",
            fmt_rational(&e.best_value),
            describe(e)
        )));
    }
    let mut violating = entries.iter().filter(|e| !e.satisfied);
    let first = violating
        .next()
        .ok_or_else(|| Error::CertificationFailure("no non-satisfying source assignment".into()))?;
    if let Some(e) = violating.find(|e| e.best_value != first.best_value) {
        return Err(Error::CertificationFailure(format!(
            "non-uniform value {} vs {} ({})",
            fmt_rational(&e.best_value),
            fmt_rational(&first.best_value),
            describe(e)
        )));
    }
    Ok(first.best_value.clone())
}

/// `gamma_1 + (1 - gamma_1) gamma_2`: the parameter of the composite gadget.
pub fn compose_gamma(g1: &Rational, g2: &Rational) -> Rational {
    g1 + (Rational::one() - g1) * g2
}

/// `(c + (1-c) gamma, s + (1-s) gamma)`.
pub fn threshold_map(c: &Rational, s: &Rational, gamma: &Rational) -> Result<(Rational, Rational)> {
    let zero = Rational::zero();
    let one = Rational::one();
    if !(&zero <= s && s <= c && c <= &one) {
        return Err(Error::OutOfRange(format!(
            "need 0 <= s <= c <= 1, got c={} s={}",
            fmt_rational(c),
            fmt_rational(s)
        )));
    }
    if !(&zero < gamma && gamma < &one) {
        return Err(Error::OutOfRange(format!(
            "need 0 < gamma < 1, got {}",
            fmt_rational(gamma)
        )));
    }
    Ok((c + (&one - c) * gamma, s + (&one - s) * gamma))
}

/// Picks the first prefix among `aux`, `aux2`, `aux3`, ... that no existing
/// variable name starts with.
fn free_prefix(inst: &CspInstance) -> String {
    let taken = |p: &str| {
        let pat = format!("{p}::");
        inst.variables().iter().any(|v| v.name.starts_with(&pat))
    };
    if !taken("aux") {
        return "aux".into();
    }
    (2..)
        .map(|i| format!("aux{i}"))
        .find(|p| !taken(p))
        .expect("unbounded search")
}

/// Applies `g` to every constraint of `inst`. Constraints of other kinds are
/// rejected.
pub fn apply_to_instance(g: &Gadget, inst: &CspInstance) -> Result<CspInstance> {
    let prefix = free_prefix(inst);
    let mut vars = inst.variables().to_vec();
    let mut constraints = Vec::new();
    for (i, c) in inst.constraints().iter().enumerate() {
        let out = g.apply(c, &mut AuxNamer::for_constraint(&prefix, i))?;
        vars.extend(out.aux);
        constraints.extend(out.constraints);
    }
    CspInstance::new(vars, constraints)
}

/// Extends a source assignment to `target = apply_to_instance(g, source)`
/// with optimal aux labels per source constraint.
pub fn extend_instance_assignment(
    g: &Gadget,
    source: &CspInstance,
    target: &CspInstance,
    asg: &Assignment,
) -> Result<Assignment> {
    source.value(asg)?;
    let prefix = free_prefix(source);
    let mut labels = vec![0u32; target.variables().len()];
    for (i, v) in source.variables().iter().enumerate() {
        let t = target
            .var_index(&v.name)
            .ok_or_else(|| Error::InvalidInstance(format!("{} missing from target", v.name)))?;
        labels[t] = asg.labels[i];
    }
    for (i, c) in source.constraints().iter().enumerate() {
        let out = g.apply(c, &mut AuxNamer::for_constraint(&prefix, i))?;
        let src_labels: Vec<u32> = c
            .vars
            .iter()
            .map(|n| asg.labels[source.var_index(n).expect("validated")])
            .collect();
        let (aux_labels, _) = g.extend_assignment(c, &src_labels)?;
        for (v, l) in out.aux.iter().zip(aux_labels) {
            let t = target
                .var_index(&v.name)
                .ok_or_else(|| Error::InvalidInstance(format!("{} missing from target", v.name)))?;
            labels[t] = l;
        }
    }
    Ok(Assignment::new(labels))
}
