//! JSON documents for complexes, varifolds, chains and group descriptors.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::Chain;
use crate::complex::{BoundaryRegion, EmbeddedComplex};
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::groups::{CoefficientGroup, ExteriorPower, Integers, RealLine, Subgroup, SubgroupElement};
use crate::solver::{SolveResult, SolveStatus};
use crate::varifolds::PolyhedralVarifold;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<f64>>,
    /// Maximal simplices; faces are implied.
    pub simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_faces: Option<Vec<Vec<usize>>>,
}

impl ComplexJson {
    pub fn from_complex(complex: &EmbeddedComplex, gamma: Option<&BoundaryRegion>) -> Self {
        Self {
            ambient_dim: complex.ambient_dim(),
            vertices: complex.vertices().to_vec(),
            simplices: complex
                .maximal_simplices()
                .into_iter()
                .map(|(d, id)| complex.simplex(d, id).to_vec())
                .collect(),
            gamma_faces: gamma.map(|g| g.tuples(complex)),
        }
    }

    pub fn build(&self) -> Result<Arc<EmbeddedComplex>> {
        Ok(Arc::new(EmbeddedComplex::build(
            self.ambient_dim,
            self.vertices.clone(),
            &self.simplices,
        )?))
    }

    /// Γ for m-dimensional objects: the listed faces, or the frontier of
    /// the m-skeleton when the document lists none.
    pub fn gamma(&self, complex: &EmbeddedComplex, m: usize) -> Result<BoundaryRegion> {
        if m == 0 {
            return Err(Error::InvalidInput("Γ needs dimension at least 1".into()));
        }
        match &self.gamma_faces {
            Some(faces) => {
                if let Some(f) = faces.iter().find(|f| f.len() != m) {
                    return Err(Error::NotASimplex(f.clone()));
                }
                BoundaryRegion::from_tuples(complex, m - 1, faces)
            }
            None => BoundaryRegion::frontier(complex, m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightJson {
    pub simplex: Vec<usize>,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarifoldJson {
    pub dimension: usize,
    pub weights: Vec<WeightJson>,
}

impl VarifoldJson {
    pub fn from_varifold(v: &PolyhedralVarifold) -> Self {
        Self {
            dimension: v.dim(),
            weights: v
                .weights()
                .map(|(id, c)| WeightJson {
                    simplex: v.complex().simplex(v.dim(), id).to_vec(),
                    c,
                })
                .collect(),
        }
    }

    pub fn build(&self, complex: &Arc<EmbeddedComplex>) -> Result<PolyhedralVarifold> {
        PolyhedralVarifold::new(
            complex.clone(),
            self.dimension,
            self.weights.iter().map(|w| (w.simplex.clone(), w.c)),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Multivector,
    Real,
    Integer,
    Subgroup,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<usize>,
    /// Subgroup generators: coefficient vectors in `Λ_m ℝᴺ` when
    /// `ambient_dim`/`grade` are present, real numbers otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_norms: Option<Vec<f64>>,
}

impl GroupDescriptor {
    fn plain(kind: GroupKind) -> Self {
        Self {
            kind,
            ambient_dim: None,
            grade: None,
            generators: None,
            generator_norms: None,
        }
    }

    fn shape(&self) -> Result<(usize, usize)> {
        match (self.ambient_dim, self.grade) {
            (Some(n), Some(m)) => Ok((n, m)),
            _ => Err(Error::InvalidInput(
                "multivector group needs ambient_dim and grade".into(),
            )),
        }
    }

    fn generator_values(&self) -> Result<&[Value]> {
        self.generators
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("subgroup descriptor needs generators".into()))
    }
}

/// Groups with a JSON descriptor and element encoding.
pub trait JsonGroup: CoefficientGroup {
    fn descriptor(&self) -> GroupDescriptor;
    fn encode(&self, a: &Self::Element) -> Value;
    fn decode(&self, v: &Value) -> Result<Self::Element>;
}

fn as_f64(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::InvalidInput(format!("expected a number, found {v}")))
}

fn as_f64_vec(v: &Value) -> Result<Vec<f64>> {
    match v {
        Value::Array(xs) => xs.iter().map(as_f64).collect(),
        other => Err(Error::InvalidInput(format!(
            "expected an array of numbers, found {other}"
        ))),
    }
}

impl JsonGroup for RealLine {
    fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor::plain(GroupKind::Real)
    }
    fn encode(&self, a: &f64) -> Value {
        Value::from(*a)
    }
    fn decode(&self, v: &Value) -> Result<f64> {
        as_f64(v)
    }
}

impl JsonGroup for Integers {
    fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor::plain(GroupKind::Integer)
    }
    fn encode(&self, a: &i64) -> Value {
        Value::from(*a)
    }
    fn decode(&self, v: &Value) -> Result<i64> {
        v.as_i64()
            .ok_or_else(|| Error::InvalidInput(format!("expected an integer, found {v}")))
    }
}

impl JsonGroup for ExteriorPower {
    fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            ambient_dim: Some(self.ambient_dim),
            grade: Some(self.grade),
            ..GroupDescriptor::plain(GroupKind::Multivector)
        }
    }
    fn encode(&self, a: &Multivector) -> Value {
        Value::from(a.coeffs().to_vec())
    }
    fn decode(&self, v: &Value) -> Result<Multivector> {
        Multivector::from_coeffs(self.ambient_dim, self.grade, as_f64_vec(v)?)
    }
}

/// Subgroup elements are encoded by their integer generator coordinates.
impl<G: JsonGroup> JsonGroup for Subgroup<G> {
    fn descriptor(&self) -> GroupDescriptor {
        let inner = self.ambient().descriptor();
        GroupDescriptor {
            kind: GroupKind::Subgroup,
            ambient_dim: inner.ambient_dim,
            grade: inner.grade,
            generators: Some(self.generators().iter().map(|g| self.ambient().encode(g)).collect()),
            generator_norms: Some(self.generator_norms().to_vec()),
        }
    }
    fn encode(&self, a: &SubgroupElement<G::Element>) -> Value {
        Value::from(a.coords.clone())
    }
    fn decode(&self, v: &Value) -> Result<SubgroupElement<G::Element>> {
        let coords = match v {
            Value::Array(xs) => xs
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::InvalidInput(format!("expected an integer, found {x}")))
                })
                .collect::<Result<Vec<_>>>()?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "expected integer coordinates, found {other}"
                )))
            }
        };
        self.element(coords)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub simplex: Vec<usize>,
    pub coeff: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainJson {
    pub dimension: usize,
    pub group: GroupDescriptor,
    pub terms: Vec<TermJson>,
}

impl ChainJson {
    pub fn from_chain<G: JsonGroup>(chain: &Chain<G>) -> Self {
        let k = chain.complex();
        Self {
            dimension: chain.dim(),
            group: chain.group().descriptor(),
            terms: chain
                .terms()
                .map(|(id, g)| TermJson {
                    simplex: k.simplex(chain.dim(), id).to_vec(),
                    coeff: chain.group().encode(g),
                })
                .collect(),
        }
    }

    pub fn build_with<G: JsonGroup>(&self, complex: &Arc<EmbeddedComplex>, group: G) -> Result<Chain<G>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.simplex.clone(), group.decode(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Chain::new(complex.clone(), self.dimension, group, terms)
    }

    pub fn build(&self, complex: &Arc<EmbeddedComplex>) -> Result<AnyChain> {
        Ok(match self.group.build()? {
            AnyGroup::Real(g) => AnyChain::Real(self.build_with(complex, g)?),
            AnyGroup::Integer(g) => AnyChain::Integer(self.build_with(complex, g)?),
            AnyGroup::Multivector(g) => AnyChain::Multivector(self.build_with(complex, g)?),
            AnyGroup::SubgroupMultivector(g) => AnyChain::SubgroupMultivector(self.build_with(complex, g)?),
            AnyGroup::SubgroupReal(g) => AnyChain::SubgroupReal(self.build_with(complex, g)?),
        })
    }
}

/// Any group expressible in a descriptor.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGroup {
    Multivector(ExteriorPower),
    Real(RealLine),
    Integer(Integers),
    SubgroupMultivector(Subgroup<ExteriorPower>),
    SubgroupReal(Subgroup<RealLine>),
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<AnyGroup> {
        Ok(match self.kind {
            GroupKind::Real => AnyGroup::Real(RealLine::default()),
            GroupKind::Integer => AnyGroup::Integer(Integers),
            GroupKind::Multivector => {
                let (n, m) = self.shape()?;
                AnyGroup::Multivector(ExteriorPower::new(n, m)?)
            }
            // generators live in Λ_m ℝᴺ when the shape is given, in ℝ otherwise
            GroupKind::Subgroup => match (self.ambient_dim, self.grade) {
                (Some(n), Some(m)) => {
                    let ambient = ExteriorPower::new(n, m)?;
                    let gens = self
                        .generator_values()?
                        .iter()
                        .map(|v| ambient.decode(v))
                        .collect::<Result<Vec<_>>>()?;
                    AnyGroup::SubgroupMultivector(Subgroup::new(ambient, gens)?)
                }
                _ => {
                    let gens = self
                        .generator_values()?
                        .iter()
                        .map(as_f64)
                        .collect::<Result<Vec<_>>>()?;
                    AnyGroup::SubgroupReal(Subgroup::new(RealLine::default(), gens)?)
                }
            },
        })
    }
}

/// A chain over any group expressible in a descriptor.
#[derive(Clone, Debug)]
pub enum AnyChain {
    Multivector(Chain<ExteriorPower>),
    Real(Chain<RealLine>),
    Integer(Chain<Integers>),
    SubgroupMultivector(Chain<Subgroup<ExteriorPower>>),
    SubgroupReal(Chain<Subgroup<RealLine>>),
}

macro_rules! each_chain {
    ($self:expr, $c:ident => $body:expr) => {
        match $self {
            AnyChain::Multivector($c) => $body,
            AnyChain::Real($c) => $body,
            AnyChain::Integer($c) => $body,
            AnyChain::SubgroupMultivector($c) => $body,
            AnyChain::SubgroupReal($c) => $body,
        }
    };
}

impl AnyChain {
    pub fn dim(&self) -> usize {
        each_chain!(self, c => c.dim())
    }

    pub fn mass(&self) -> f64 {
        each_chain!(self, c => c.mass())
    }

    pub fn to_json(&self) -> ChainJson {
        each_chain!(self, c => ChainJson::from_chain(c))
    }

    pub fn boundary(&self) -> Result<AnyChain> {
        Ok(match self {
            AnyChain::Multivector(c) => AnyChain::Multivector(c.boundary()?),
            AnyChain::Real(c) => AnyChain::Real(c.boundary()?),
            AnyChain::Integer(c) => AnyChain::Integer(c.boundary()?),
            AnyChain::SubgroupMultivector(c) => AnyChain::SubgroupMultivector(c.boundary()?),
            AnyChain::SubgroupReal(c) => AnyChain::SubgroupReal(c.boundary()?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResultJson {
    pub chain: ChainJson,
    pub objective: f64,
    pub primal_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
}

impl SolveResultJson {
    pub fn from_result<G: JsonGroup + crate::groups::VectorGroup>(r: &SolveResult<G>) -> Self {
        Self {
            chain: ChainJson::from_chain(&r.chain),
            objective: r.objective,
            primal_residual: r.primal_residual,
            iterations: r.iterations,
            status: r.status,
            lower_bound: r.lower_bound,
        }
    }
}

/// A self-contained document: a complex with an optional varifold or chain
/// on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub complex: ComplexJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varifold: Option<VarifoldJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl Bundle {
    pub fn from_example(ex: &crate::catalog::Example) -> Self {
        Self {
            complex: ComplexJson::from_complex(&ex.complex, Some(&ex.gamma)),
            varifold: Some(VarifoldJson::from_varifold(&ex.varifold)),
            chain: None,
            radius: Some(ex.radius),
        }
    }
}
