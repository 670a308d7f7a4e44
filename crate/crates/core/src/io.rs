//! JSON formats for CSP instances, Label Cover instances and function tables.
//! Rationals are always written as `"num/den"` strings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::csp::{Constraint, ConstraintKind, CspInstance, Params, VariableId};
use crate::cyclo::CycloRational;
use crate::error::{Error, Result};
use crate::fourier::{FourierTable, FunctionTable};
use crate::longcode::{LabelCoverInstance, Labeling, LcEdge};
use crate::rational::{fmt_rational, parse_rational};
use crate::z3::Z3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableFile {
    pub name: String,
    pub domain_size: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamsFile {
    Shifts { shifts: [Z3; 4] },
    Rhs { a: Z3 },
    Projection { projection: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub kind: String,
    pub vars: Vec<String>,
    pub params: ParamsFile,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub variables: Vec<VariableFile>,
    pub constraints: Vec<ConstraintFile>,
}

impl From<&CspInstance> for InstanceFile {
    fn from(inst: &CspInstance) -> Self {
        InstanceFile {
            variables: inst
                .variables()
                .iter()
                .map(|v| VariableFile {
                    name: v.name.clone(),
                    domain_size: v.domain_size,
                })
                .collect(),
            constraints: inst
                .constraints()
                .iter()
                .map(|c| ConstraintFile {
                    kind: c.kind.name().into(),
                    vars: c.vars.clone(),
                    params: match &c.params {
                        Params::Shifts(s) => ParamsFile::Shifts { shifts: *s },
                        Params::Rhs(a) => ParamsFile::Rhs { a: *a },
                        Params::Projection(p) => ParamsFile::Projection {
                            projection: p.clone(),
                        },
                    },
                    weight: fmt_rational(&c.weight),
                })
                .collect(),
        }
    }
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<CspInstance> {
        let vars = self
            .variables
            .iter()
            .map(|v| VariableId::new(v.name.clone(), v.domain_size))
            .collect();
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let params = match &c.params {
                    ParamsFile::Shifts { shifts } => Params::Shifts(*shifts),
                    ParamsFile::Rhs { a } => Params::Rhs(*a),
                    ParamsFile::Projection { projection } => Params::Projection(projection.clone()),
                };
                Constraint::new(
                    ConstraintKind::from_name(&c.kind)?,
                    c.vars.clone(),
                    params,
                    parse_rational(&c.weight)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        CspInstance::new(vars, constraints)
    }
}

pub fn instance_to_json(inst: &CspInstance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&InstanceFile::from(inst))?)
}

pub fn instance_from_json(s: &str) -> Result<CspInstance> {
    serde_json::from_str::<InstanceFile>(s)?.to_instance()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcEdgeFile {
    pub u: String,
    pub v: String,
    pub projection: Vec<u32>,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCoverFile {
    pub k: usize,
    pub d: usize,
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub edges: Vec<LcEdgeFile>,
}

impl From<&LabelCoverInstance> for LabelCoverFile {
    fn from(lc: &LabelCoverInstance) -> Self {
        LabelCoverFile {
            k: lc.k(),
            d: lc.d(),
            u: lc.u().to_vec(),
            v: lc.v().to_vec(),
            edges: lc
                .edges()
                .iter()
                .map(|e| LcEdgeFile {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    projection: e.projection.clone(),
                    weight: fmt_rational(&e.weight),
                })
                .collect(),
        }
    }
}

impl LabelCoverFile {
    pub fn to_instance(&self) -> Result<LabelCoverInstance> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(LcEdge {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    projection: e.projection.clone(),
                    weight: parse_rational(&e.weight)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LabelCoverInstance::new(self.k, self.d, self.u.clone(), self.v.clone(), edges)
    }
}

pub fn label_cover_to_json(lc: &LabelCoverInstance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&LabelCoverFile::from(lc))?)
}

pub fn label_cover_from_json(s: &str) -> Result<LabelCoverInstance> {
    serde_json::from_str::<LabelCoverFile>(s)?.to_instance()
}

/// `{"labels": {"vertex": label, ...}}`, 0-based labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingFile {
    pub labels: std::collections::BTreeMap<String, u32>,
}

pub fn labeling_from_json(s: &str) -> Result<Labeling> {
    let f: LabelingFile = serde_json::from_str(s)?;
    Ok(Labeling { labels: f.labels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTableFile {
    pub arity: usize,
    pub entries: Vec<Z3>,
}

pub fn table_to_json(f: &FunctionTable) -> Result<String> {
    Ok(serde_json::to_string(&FunctionTableFile {
        arity: f.arity(),
        entries: f.entries().to_vec(),
    })?)
}

pub fn table_from_json(s: &str) -> Result<FunctionTable> {
    let f: FunctionTableFile = serde_json::from_str(s)?;
    FunctionTable::new(f.arity, f.entries)
}

/// A coefficient `a + b*omega`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffFile {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierTableFile {
    pub arity: usize,
    pub coeffs: Vec<CoeffFile>,
}

pub fn fourier_to_json(t: &FourierTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(&FourierTableFile {
        arity: t.arity(),
        coeffs: t
            .coeffs()
            .iter()
            .map(|c| CoeffFile {
                a: fmt_rational(&c.a),
                b: fmt_rational(&c.b),
            })
            .collect(),
    })?)
}

pub fn fourier_from_json(s: &str) -> Result<FourierTable> {
    let f: FourierTableFile = serde_json::from_str(s)?;
    let coeffs = f
        .coeffs
        .iter()
        .map(|c| {
            Ok(CycloRational::new(
                parse_rational(&c.a)?,
                parse_rational(&c.b)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    FourierTable::new(f.arity, coeffs)
}

/// What a JSON input file holds.
#[derive(Clone, Debug)]
pub enum InputFile {
    Csp(CspInstance),
    LabelCover(LabelCoverInstance),
}

/// Reads a CSP instance or a Label Cover instance, told apart by the
/// presence of `"edges"`.
pub fn read_input(path: &Path) -> Result<InputFile> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("edges").is_some() {
        Ok(InputFile::LabelCover(
            serde_json::from_value::<LabelCoverFile>(value)?.to_instance()?,
        ))
    } else if value.get("constraints").is_some() {
        Ok(InputFile::Csp(
            serde_json::from_value::<InstanceFile>(value)?.to_instance()?,
        ))
    } else {
        Err(Error::Parse(format!(
            "{}: neither an instance nor a Label Cover file",
            path.display()
        )))
    }
}

pub fn read_instance(path: &Path) -> Result<CspInstance> {
    match read_input(path)? {
        InputFile::Csp(inst) => Ok(inst),
        InputFile::LabelCover(_) => Err(Error::KindMismatch {
            expected: "CSP instance".into(),
            actual: "Label Cover instance".into(),
        }),
    }
}

pub fn read_table(path: &Path) -> Result<FunctionTable> {
    table_from_json(&std::fs::read_to_string(path)?)
}
