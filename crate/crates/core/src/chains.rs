//! Polyhedral m-chains on a host complex.
//!
//! A chain stores one coefficient per m-simplex against the canonical
//! (sorted) orientation. Orientation reversal is absorbed into the sign of
//! the coefficient, and subdivision is handled by [`Chain::transport`], so
//! the stored sparse map is a canonical representative of the class.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::complex::{BoundaryRegion, Correspondence, EmbeddedComplex};
use crate::error::{Error, Result};
use crate::groups::{CoefficientGroup, Subgroup};
use crate::DEFAULT_TOL;

#[derive(Clone, Debug)]
pub struct Chain<G: CoefficientGroup> {
    complex: Arc<EmbeddedComplex>,
    dim: usize,
    group: G,
    coeffs: BTreeMap<usize, G::Element>,
}

pub(crate) fn same_complex(a: &Arc<EmbeddedComplex>, b: &Arc<EmbeddedComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<G: CoefficientGroup> Chain<G> {
    pub fn zero(complex: Arc<EmbeddedComplex>, dim: usize, group: G) -> Self {
        Self {
            complex,
            dim,
            group,
            coeffs: BTreeMap::new(),
        }
    }

    /// Canonicalizes a formal sum of oriented simplices: each tuple is
    /// sorted, the coefficient is negated for odd permutations, repeated
    /// simplices are summed and zeros dropped.
    pub fn new(
        complex: Arc<EmbeddedComplex>,
        dim: usize,
        group: G,
        terms: impl IntoIterator<Item = (Vec<usize>, G::Element)>,
    ) -> Result<Self> {
        let mut chain = Self::zero(complex, dim, group);
        for (tuple, g) in terms {
            if tuple.len() != dim + 1 {
                return Err(Error::NotASimplex(tuple));
            }
            chain.group.validate(&g)?;
            let (id, sign) = chain.complex.find_oriented(&tuple)?;
            let g = if sign < 0 { chain.group.neg(&g) } else { g };
            chain.accumulate(id, &g);
        }
        chain.prune();
        Ok(chain)
    }

    /// Coefficients given directly against canonical simplex ids.
    pub fn from_ids(
        complex: Arc<EmbeddedComplex>,
        dim: usize,
        group: G,
        terms: impl IntoIterator<Item = (usize, G::Element)>,
    ) -> Result<Self> {
        let mut chain = Self::zero(complex, dim, group);
        for (id, g) in terms {
            if id >= chain.complex.count(dim) {
                return Err(Error::InvalidInput(format!("no {dim}-simplex with id {id}")));
            }
            chain.group.validate(&g)?;
            chain.accumulate(id, &g);
        }
        chain.prune();
        Ok(chain)
    }

    fn accumulate(&mut self, id: usize, g: &G::Element) {
        let entry = self.coeffs.entry(id).or_insert_with(|| self.group.zero());
        *entry = self.group.add(entry, g);
    }

    fn prune(&mut self) {
        let group = &self.group;
        self.coeffs.retain(|_, g| !group.is_zero(g));
    }

    pub fn complex(&self) -> &Arc<EmbeddedComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn coefficient(&self, id: usize) -> Option<&G::Element> {
        self.coeffs.get(&id)
    }

    /// Nonzero terms in increasing simplex id.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &G::Element)> {
        self.coeffs.iter().map(|(&id, g)| (id, g))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs.keys().copied().collect()
    }

    /// Whether every simplex carrying a coefficient lies in Γ.
    pub fn is_supported_in(&self, gamma: &BoundaryRegion) -> bool {
        self.is_zero() || (gamma.face_dim() == self.dim && self.coeffs.keys().all(|&id| gamma.contains(id)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || !same_complex(&self.complex, &other.complex) {
            return Err(Error::Incompatible);
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!(
                "{} vs {}",
                self.group.describe(),
                other.group.describe()
            )));
        }
        Ok(())
    }

    /// `self + sign · other`.
    pub fn combine(&self, other: &Self, sign: i8) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&id, g) in &other.coeffs {
            let g = if sign < 0 { self.group.neg(g) } else { g.clone() };
            out.accumulate(id, &g);
        }
        out.prune();
        Ok(out)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let mut out = self.clone();
        for g in out.coeffs.values_mut() {
            *g = self.group.scale_int(g, n);
        }
        out.prune();
        out
    }

    /// `∂(Σ g_σ σ) = Σ_σ Σ_i (−1)^i g_σ face_i(σ)`.
    pub fn boundary(&self) -> Result<Self> {
        let dim = self
            .dim
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("boundary of a 0-chain".into()))?;
        let mut out = Self::zero(self.complex.clone(), dim, self.group.clone());
        for (&id, g) in &self.coeffs {
            let neg = self.group.neg(g);
            for &(face, sign) in self.complex.faces(self.dim, id) {
                out.accumulate(face, if sign > 0 { g } else { &neg });
            }
        }
        out.prune();
        Ok(out)
    }

    /// `Σ_σ |g_σ| Hᵐ(σ)`.
    pub fn mass(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&id, g)| self.group.norm(g) * self.complex.volume(self.dim, id))
            .sum()
    }

    /// Re-expresses the chain on a refinement: each child inherits the
    /// coefficient, negated where its canonical orientation disagrees with
    /// the parent's.
    pub fn transport(&self, refined: &Arc<EmbeddedComplex>, corr: &Correspondence) -> Result<Self> {
        let mut out = Self::zero(refined.clone(), self.dim, self.group.clone());
        for (&id, g) in &self.coeffs {
            let parent = if self.dim > 0 {
                Some(self.complex.orientation(self.dim, id)?)
            } else {
                None
            };
            for &child in corr.children(self.dim, id) {
                let agree = match &parent {
                    Some(eta) => refined.orientation(self.dim, child)?.inner(eta)? > 0.0,
                    None => true,
                };
                let c = if agree { g.clone() } else { self.group.neg(g) };
                out.accumulate(child, &c);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Pushforward under a simplexwise-affine map; coefficients are carried
    /// unchanged and terms on collapsed simplices are dropped.
    pub fn pushforward(&self, map: &PlMap) -> Result<Pushforward<Self>> {
        if !same_complex(&self.complex, &map.source) {
            return Err(Error::Incompatible);
        }
        let mut out = Self::zero(map.image.clone(), self.dim, self.group.clone());
        let (kept, dropped, flips) = map.classify(self.dim, self.coeffs.keys().copied())?;
        for id in kept {
            out.coeffs.insert(id, self.coeffs[&id].clone());
        }
        Ok(Pushforward {
            value: out,
            dropped,
            orientation_flips: flips,
        })
    }

    /// The same chain regarded over the subgroup `H` generated by `S`.
    pub fn retag(&self, subgroup: &Subgroup<G>) -> Result<Chain<Subgroup<G>>> {
        if *subgroup.ambient() != self.group {
            return Err(Error::GroupMismatch(format!(
                "chain over {} retagged into a subgroup of {}",
                self.group.describe(),
                subgroup.ambient().describe()
            )));
        }
        let mut coeffs = BTreeMap::new();
        for (&id, g) in &self.coeffs {
            coeffs.insert(id, subgroup.represent(g)?);
        }
        Ok(Chain {
            complex: self.complex.clone(),
            dim: self.dim,
            group: subgroup.clone(),
            coeffs,
        })
    }
}

/// Result of a pushforward together with what it dropped.
#[derive(Clone, Debug)]
pub struct Pushforward<T> {
    pub value: T,
    /// Source tuples whose image is degenerate.
    pub dropped: Vec<Vec<usize>>,
    /// Image simplices whose orientation is opposite to the source one.
    pub orientation_flips: usize,
}

/// A piecewise-linear map subordinate to a complex, given by vertex images.
#[derive(Clone, Debug)]
pub struct PlMap {
    source: Arc<EmbeddedComplex>,
    image: Arc<EmbeddedComplex>,
}

impl PlMap {
    /// Validates the vertex images: `frozen` vertices must be fixed and no
    /// two vertices may share an image.
    pub fn new(source: &Arc<EmbeddedComplex>, images: Vec<Vec<f64>>, frozen: &BTreeSet<usize>) -> Result<Self> {
        let image = source.with_vertices(images)?;
        if image.ambient_dim() != source.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: source.ambient_dim(),
                found: image.ambient_dim(),
            });
        }
        for &v in frozen {
            let moved = source.vertices()[v]
                .iter()
                .zip(&image.vertices()[v])
                .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0));
            if moved {
                return Err(Error::FrozenVertexMoved(v));
            }
        }
        if let Some((a, b)) = first_collision(image.vertices(), 1e-12) {
            return Err(Error::VertexCollision(a, b));
        }
        Ok(Self {
            source: source.clone(),
            image: Arc::new(image),
        })
    }

    pub fn identity(source: &Arc<EmbeddedComplex>) -> Self {
        Self {
            source: source.clone(),
            image: source.clone(),
        }
    }

    pub fn source(&self) -> &Arc<EmbeddedComplex> {
        &self.source
    }

    pub fn image(&self) -> &Arc<EmbeddedComplex> {
        &self.image
    }

    /// Splits `ids` into kept and collapsed simplices and counts
    /// orientation flips among the kept ones.
    pub(crate) fn classify(
        &self,
        dim: usize,
        ids: impl Iterator<Item = usize>,
    ) -> Result<(Vec<usize>, Vec<Vec<usize>>, usize)> {
        let (mut kept, mut dropped, mut flips) = (Vec::new(), Vec::new(), 0);
        for id in ids {
            if dim > 0 && self.image.oriented_simplex(dim, id).is_degenerate(DEFAULT_TOL) {
                dropped.push(self.source.simplex(dim, id).to_vec());
                continue;
            }
            if dim > 0
                && self
                    .image
                    .orientation(dim, id)?
                    .inner(&self.source.orientation(dim, id)?)?
                    < 0.0
            {
                flips += 1;
            }
            kept.push(id);
        }
        Ok((kept, dropped, flips))
    }
}

/// First pair of points closer than `tol`, found by a sweep along the
/// first coordinate.
fn first_collision(points: &[Vec<f64>], tol: f64) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]));
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if points[b][0] - points[a][0] > tol {
                break;
            }
            let close = points[a].iter().zip(&points[b]).all(|(x, y)| (x - y).abs() <= tol);
            if close {
                return Some((a.min(b), a.max(b)));
            }
        }
    }
    None
}
