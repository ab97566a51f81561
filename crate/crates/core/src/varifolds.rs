//! Polyhedral varifolds `V = Σ cᵢ var(σᵢ)` on a host complex.
//!
//! Stationarity away from Γ is conormal balance `Σ cᵢ νᵢ = 0` at every
//! interior (m−1)-face. The report also evaluates the coefficient of
//! `∂⟨V⟩` on each face independently and compares the two through
//! `s(σ,τ) η(σ) = (−1)^{m−1} η(τ) ∧ ν`, where `s(σ,τ)` is the simplicial
//! incidence sign.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chains::{same_complex, Chain, PlMap, Pushforward};
use crate::complex::{interior_faces, BoundaryRegion, Correspondence, EmbeddedComplex};
use crate::error::{Error, Result};
use crate::exterior::{dot, norm, Multivector, OrientedSimplex};
use crate::groups::{CoefficientGroup, ExteriorPower};
use crate::DEFAULT_TOL;

#[derive(Clone, Debug)]
pub struct PolyhedralVarifold {
    complex: Arc<EmbeddedComplex>,
    dim: usize,
    weights: BTreeMap<usize, f64>,
}

impl PolyhedralVarifold {
    /// Weighted unoriented simplices; repeated simplices add up.
    pub fn new(
        complex: Arc<EmbeddedComplex>,
        dim: usize,
        weighted: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        let mut ids = Vec::new();
        for (tuple, c) in weighted {
            if tuple.len() != dim + 1 {
                return Err(Error::NotASimplex(tuple));
            }
            let (id, _) = complex.find_oriented(&tuple)?;
            ids.push((id, c));
        }
        Self::from_ids(complex, dim, ids)
    }

    pub fn from_ids(
        complex: Arc<EmbeddedComplex>,
        dim: usize,
        weighted: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("varifolds must have dimension ≥ 1".into()));
        }
        let mut weights = BTreeMap::new();
        for (id, c) in weighted {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::NegativeWeight(c));
            }
            if id >= complex.count(dim) {
                return Err(Error::InvalidInput(format!("no {dim}-simplex with id {id}")));
            }
            *weights.entry(id).or_insert(0.0) += c;
        }
        weights.retain(|_, c| *c > 0.0);
        Ok(Self { complex, dim, weights })
    }

    /// Weight 1 on every m-simplex of the complex.
    pub fn uniform(complex: Arc<EmbeddedComplex>, dim: usize) -> Result<Self> {
        let n = complex.count(dim);
        Self::from_ids(complex, dim, (0..n).map(|id| (id, 1.0)))
    }

    pub fn complex(&self) -> &Arc<EmbeddedComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&id, &c)| (id, c))
    }

    pub fn weight(&self, id: usize) -> f64 {
        self.weights.get(&id).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ cᵢ Hᵐ(σᵢ)`.
    pub fn mass(&self) -> f64 {
        self.weights
            .iter()
            .map(|(&id, c)| c * self.complex.volume(self.dim, id))
            .sum()
    }

    /// Same support with weights rewritten by `f(id, c)`.
    pub fn reweighted(&self, mut f: impl FnMut(usize, f64) -> f64) -> Result<Self> {
        let weighted: Vec<(usize, f64)> = self.weights.iter().map(|(&id, &c)| (id, f(id, c))).collect();
        Self::from_ids(self.complex.clone(), self.dim, weighted)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || !same_complex(&self.complex, &other.complex) {
            return Err(Error::Incompatible);
        }
        Self::from_ids(self.complex.clone(), self.dim, self.weights().chain(other.weights()))
    }

    /// `⟨V⟩ = Σ cᵢ η(σᵢ) [σᵢ]` against the canonical orientations.
    pub fn chainify(&self) -> Result<Chain<ExteriorPower>> {
        let group = ExteriorPower::new(self.complex.ambient_dim(), self.dim)?;
        let mut terms = Vec::with_capacity(self.weights.len());
        for (&id, &c) in &self.weights {
            terms.push((id, self.complex.orientation(self.dim, id)?.scale(c)));
        }
        Chain::from_ids(self.complex.clone(), self.dim, group, terms)
    }

    /// Conormal balance at every (m−1)-face outside Γ.
    pub fn stationarity(&self, gamma: &BoundaryRegion, tol: f64) -> Result<StationarityReport> {
        let m = self.dim;
        if gamma.face_dim() != m - 1 {
            return Err(Error::InvalidInput(format!(
                "Γ has dimension {} but the varifold needs ({})-faces",
                gamma.face_dim(),
                m - 1
            )));
        }
        let n = self.complex.ambient_dim();
        let boundary = self.chainify()?.boundary()?;
        let parity = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let mut faces = Vec::new();
        for tau in interior_faces(&self.complex, m, gamma) {
            let mut residual = vec![0.0; n];
            let mut incident = Vec::new();
            for &(sigma, _) in self.complex.cofaces(m - 1, tau) {
                let c = self.weight(sigma);
                if c == 0.0 {
                    continue;
                }
                let nu = conormal_in(&self.complex, m, sigma, tau)?;
                for (r, v) in residual.iter_mut().zip(&nu) {
                    *r += c * v;
                }
                incident.push(Incidence {
                    simplex: self.complex.simplex(m, sigma).to_vec(),
                    weight: c,
                    conormal: nu,
                });
            }
            if incident.is_empty() {
                continue;
            }
            let predicted = self
                .complex
                .orientation(m - 1, tau)?
                .wedge(&Multivector::vector(&residual)?)?
                .scale(parity);
            let actual = boundary
                .coefficient(tau)
                .cloned()
                .unwrap_or_else(|| boundary.group().zero());
            faces.push(FaceBalance {
                face: self.complex.simplex(m - 1, tau).to_vec(),
                residual_norm: norm(&residual),
                residual,
                free_face: incident.len() == 1,
                boundary_coefficient_norm: actual.norm(),
                wedge_identity_residual: actual.sub(&predicted)?.norm(),
                incident,
            });
        }
        let max_residual = faces.iter().map(|f| f.residual_norm).fold(0.0, f64::max);
        let max_wedge_identity_residual = faces.iter().map(|f| f.wedge_identity_residual).fold(0.0, f64::max);
        let stationary = max_residual <= tol && !faces.iter().any(|f| f.free_face);
        Ok(StationarityReport {
            dimension: m,
            tol,
            stationary,
            max_residual,
            max_wedge_identity_residual,
            faces,
        })
    }

    /// `f_# V`: weights carried to the image simplices, collapsed ones
    /// dropped.
    pub fn pushforward(&self, map: &PlMap) -> Result<Pushforward<Self>> {
        if !same_complex(&self.complex, map.source()) {
            return Err(Error::Incompatible);
        }
        let (kept, dropped, flips) = map.classify(self.dim, self.weights.keys().copied())?;
        let weights = kept.into_iter().map(|id| (id, self.weights[&id])).collect();
        Ok(Pushforward {
            value: Self {
                complex: map.image().clone(),
                dim: self.dim,
                weights,
            },
            dropped,
            orientation_flips: flips,
        })
    }

    pub fn transport(&self, refined: &Arc<EmbeddedComplex>, corr: &Correspondence) -> Result<Self> {
        let weighted: Vec<(usize, f64)> = self
            .weights
            .iter()
            .flat_map(|(&id, &c)| corr.children(self.dim, id).iter().map(move |&k| (k, c)))
            .collect();
        Self::from_ids(refined.clone(), self.dim, weighted)
    }
}

/// Outward unit conormal of `simplex` along the face opposite vertex
/// `opposite`: tangent to the simplex, orthogonal to the face, pointing
/// away from the simplex.
pub fn conormal(simplex: &OrientedSimplex, opposite: usize) -> Result<Vec<f64>> {
    let vs = simplex.vertices();
    if opposite >= vs.len() || vs.len() < 2 {
        return Err(Error::InvalidInput(format!("no face opposite vertex {opposite}")));
    }
    let face: Vec<&Vec<f64>> = vs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != opposite)
        .map(|(_, v)| v)
        .collect();
    let base = face[0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in &face[1..] {
        let mut e: Vec<f64> = v.iter().zip(base).map(|(a, b)| a - b).collect();
        orthogonalize(&mut e, &basis);
        let len = norm(&e);
        if len <= DEFAULT_TOL {
            return Err(Error::DegenerateSimplex(simplex.dim()));
        }
        e.iter_mut().for_each(|x| *x /= len);
        basis.push(e);
    }
    let mut w: Vec<f64> = vs[opposite].iter().zip(base).map(|(a, b)| a - b).collect();
    let scale = norm(&w);
    orthogonalize(&mut w, &basis);
    let len = norm(&w);
    if len <= DEFAULT_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSimplex(simplex.dim()));
    }
    Ok(w.iter().map(|x| -x / len).collect())
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes for stability
    for _ in 0..2 {
        for b in basis {
            let p = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
    }
}

/// Conormal of the m-simplex `sigma` along its (m−1)-face `tau`.
pub fn conormal_in(complex: &EmbeddedComplex, m: usize, sigma: usize, tau: usize) -> Result<Vec<f64>> {
    let s = complex.simplex(m, sigma);
    let t = complex.simplex(m - 1, tau);
    let opposite = s.iter().position(|v| !t.contains(v));
    match opposite {
        Some(k) if t.iter().all(|v| s.contains(v)) => conormal(&complex.oriented_simplex(m, sigma), k),
        _ => Err(Error::NotAFace {
            face: t.to_vec(),
            simplex: s.to_vec(),
        }),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StationarityReport {
    pub dimension: usize,
    pub tol: f64,
    pub stationary: bool,
    pub max_residual: f64,
    /// Largest disagreement between `∂⟨V⟩` on a face and `± η(τ) ∧ Σ cᵢνᵢ`.
    pub max_wedge_identity_residual: f64,
    pub faces: Vec<FaceBalance>,
}

impl StationarityReport {
    pub fn face(&self, tuple: &[usize]) -> Option<&FaceBalance> {
        self.faces.iter().find(|f| f.face == tuple)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceBalance {
    pub face: Vec<usize>,
    /// `Σ cᵢ νᵢ`.
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    /// Exactly one weighted simplex meets this face.
    pub free_face: bool,
    pub boundary_coefficient_norm: f64,
    pub wedge_identity_residual: f64,
    pub incident: Vec<Incidence>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Incidence {
    pub simplex: Vec<usize>,
    pub weight: f64,
    pub conormal: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(points: &[[f64; 2]]) -> (Arc<EmbeddedComplex>, BoundaryRegion) {
        let mut vs = vec![vec![0.0, 0.0]];
        vs.extend(points.iter().map(|p| p.to_vec()));
        let segs: Vec<Vec<usize>> = (1..vs.len()).map(|i| vec![0, i]).collect();
        let k = Arc::new(EmbeddedComplex::build(2, vs, &segs).unwrap());
        let gamma = BoundaryRegion::frontier(&k, 1).unwrap();
        (k, gamma)
    }

    fn simplex(vs: &[&[f64]]) -> OrientedSimplex {
        OrientedSimplex::new(vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn conormals_of_axis_simplices() {
        let seg = simplex(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(conormal(&seg, 1).unwrap(), vec![-1.0, 0.0]);
        let tri = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let nu = conormal(&tri, 2).unwrap();
        assert!(nu[0].abs() < 1e-15 && (nu[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn conormal_of_tetrahedral_cone_triangle() {
        let s3 = 3f64.sqrt();
        let va = [1.0 / s3, 1.0 / s3, 1.0 / s3];
        let vb = [1.0 / s3, -1.0 / s3, -1.0 / s3];
        let tri = simplex(&[&[0.0, 0.0, 0.0], &va, &vb]);
        let nu = conormal(&tri, 2).unwrap();
        // Gram–Schmidt oracle: ν = −(v_b − (v_b·v_a) v_a)/|…|
        let p = dot(&vb, &va);
        let mut w: Vec<f64> = vb.iter().zip(&va).map(|(b, a)| -(b - p * a)).collect();
        let l = norm(&w);
        w.iter_mut().for_each(|x| *x /= l);
        for (a, b) in nu.iter().zip(&w) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(dot(&nu, &va).abs() < 1e-12);
        assert!((norm(&nu) - 1.0).abs() < 1e-12);
        // in span(v_a, v_b): the component along v_a × v_b vanishes
        let cross = [
            va[1] * vb[2] - va[2] * vb[1],
            va[2] * vb[0] - va[0] * vb[2],
            va[0] * vb[1] - va[1] * vb[0],
        ];
        assert!(dot(&nu, &cross).abs() < 1e-12);
    }

    #[test]
    fn wedge_identity_with_incidence_sign() {
        // s(σ,τ) η(σ) = (−1)^{m−1} η(τ) ∧ ν for every face of a tetrahedron in ℝ⁴
        let k = EmbeddedComplex::build(
            4,
            vec![
                vec![0.1, 0.0, 0.2, 0.0],
                vec![1.0, 0.3, 0.0, 0.1],
                vec![0.2, 1.1, 0.4, -0.3],
                vec![0.0, 0.2, 1.3, 0.5],
            ],
            &[vec![0, 1, 2, 3]],
        )
        .unwrap();
        for m in 1..=3 {
            let parity = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
            for sigma in 0..k.count(m) {
                let eta = k.orientation(m, sigma).unwrap();
                for &(tau, sign) in k.faces(m, sigma) {
                    let nu = conormal_in(&k, m, sigma, tau).unwrap();
                    let rhs = k
                        .orientation(m - 1, tau)
                        .unwrap()
                        .wedge(&Multivector::vector(&nu).unwrap())
                        .unwrap()
                        .scale(parity);
                    assert!(eta.scale(sign as f64).sub(&rhs).unwrap().norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn make_varifold_sums_and_rejects() {
        let k = Arc::new(
            EmbeddedComplex::build(
                2,
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                &[vec![0, 1, 2]],
            )
            .unwrap(),
        );
        let v = PolyhedralVarifold::new(k.clone(), 2, vec![(vec![0, 1, 2], 1.0)]).unwrap();
        assert_eq!(v.mass(), 0.5);
        let v = PolyhedralVarifold::new(k.clone(), 2, vec![(vec![0, 1, 2], 1.0), (vec![2, 1, 0], 1.0)]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.mass(), 1.0);
        assert!(matches!(
            PolyhedralVarifold::new(k.clone(), 2, vec![(vec![0, 1, 2], -1.0)]),
            Err(Error::NegativeWeight(_))
        ));
        assert!(PolyhedralVarifold::new(k, 2, vec![(vec![0, 1, 3], 1.0)]).is_err());
    }

    #[test]
    fn collinear_pair_is_stationary() {
        let (k, gamma) = star(&[[1.0, 0.0], [-1.0, 0.0]]);
        let v = PolyhedralVarifold::uniform(k, 1).unwrap();
        let r = v.stationarity(&gamma, 1e-9).unwrap();
        assert!(r.stationary);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn y_junction_is_stationary() {
        let h = 0.75f64.sqrt();
        let (k, gamma) = star(&[[0.0, 1.0], [-h, -0.5], [h, -0.5]]);
        let v = PolyhedralVarifold::uniform(k, 1).unwrap();
        assert_eq!(v.mass(), 3.0);
        let r = v.stationarity(&gamma, 1e-9).unwrap();
        assert!(r.stationary);
        assert!(r.max_residual < 1e-15);
        assert!(v.chainify().unwrap().boundary().unwrap().is_supported_in(&gamma));
    }

    #[test]
    fn l_shape_is_not_stationary() {
        let (k, gamma) = star(&[[1.0, 0.0], [0.0, 1.0]]);
        let v = PolyhedralVarifold::uniform(k, 1).unwrap();
        let r = v.stationarity(&gamma, 1e-9).unwrap();
        assert!(!r.stationary);
        assert!((r.max_residual - 2f64.sqrt()).abs() < 1e-15);
        let corner = r.face(&[0]).unwrap();
        assert!((corner.boundary_coefficient_norm - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.max_wedge_identity_residual < 1e-15);
        assert!(!v.chainify().unwrap().boundary().unwrap().is_supported_in(&gamma));
    }

    #[test]
    fn unbalanced_free_edge_fails() {
        let k = Arc::new(
            EmbeddedComplex::build(
                2,
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                &[vec![0, 1, 2]],
            )
            .unwrap(),
        );
        let v = PolyhedralVarifold::uniform(k.clone(), 2).unwrap();
        let r = v.stationarity(&BoundaryRegion::empty(1), 1e-9).unwrap();
        assert!(!r.stationary);
        assert_eq!(r.faces.len(), 3);
        assert!(r.faces.iter().all(|f| f.free_face));
        let all = BoundaryRegion::frontier(&k, 2).unwrap();
        assert!(v.stationarity(&all, 1e-9).unwrap().stationary);
    }

    #[test]
    fn chainify_coefficients() {
        let (k, _) = star(&[[1.0, 0.0]]);
        let v = PolyhedralVarifold::new(k, 1, vec![(vec![1, 0], 2.0)]).unwrap();
        let a = v.chainify().unwrap();
        let (_, g) = a.terms().next().unwrap();
        assert_eq!(g.coeffs(), &[2.0, 0.0]);
        assert_eq!(a.mass(), 2.0);
    }
}
