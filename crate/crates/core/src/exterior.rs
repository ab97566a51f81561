//! m-vectors in ℝᴺ with the Euclidean structure in which the lexicographic
//! basis `e_{i₁} ∧ … ∧ e_{i_m}` (i₁ < … < i_m) is orthonormal.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::MAX_AMBIENT_DIM;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic rank of a strictly increasing index set among the
/// `grade`-subsets of `0..n`.
pub fn index_rank(n: usize, set: &[usize]) -> usize {
    let m = set.len();
    let mut rank = 0;
    let mut next = 0;
    for (j, &s) in set.iter().enumerate() {
        for v in next..s {
            rank += binomial(n - 1 - v, m - 1 - j);
        }
        next = s + 1;
    }
    rank
}

/// All `grade`-subsets of `0..n` in lexicographic order.
pub fn basis_sets(n: usize, grade: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, grade));
    let mut current = Vec::with_capacity(grade);
    fn rec(start: usize, n: usize, grade: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == grade {
            out.push(cur.clone());
            return;
        }
        let needed = grade - cur.len();
        for i in start..=(n - needed) {
            cur.push(i);
            rec(i + 1, n, grade, cur, out);
            cur.pop();
        }
    }
    if grade <= n {
        rec(0, n, grade, &mut current, &mut out);
    }
    out
}

/// Element of Λ_m ℝᴺ stored densely over the lexicographic basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multivector {
    ambient_dim: usize,
    grade: usize,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(ambient_dim: usize, grade: usize) -> Result<Self> {
        check_dims(ambient_dim, grade)?;
        Ok(Self {
            ambient_dim,
            grade,
            coeffs: vec![0.0; binomial(ambient_dim, grade)],
        })
    }

    pub fn from_coeffs(ambient_dim: usize, grade: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dims(ambient_dim, grade)?;
        let expected = binomial(ambient_dim, grade);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            ambient_dim,
            grade,
            coeffs,
        })
    }

    pub fn scalar(ambient_dim: usize, value: f64) -> Result<Self> {
        Self::from_coeffs(ambient_dim, 0, vec![value])
    }

    /// The grade-1 element with the given components.
    pub fn vector(components: &[f64]) -> Result<Self> {
        Self::from_coeffs(components.len(), 1, components.to_vec())
    }

    /// Basis blade `e_{set}`; `set` must be strictly increasing.
    pub fn basis(ambient_dim: usize, set: &[usize]) -> Result<Self> {
        let mut v = Self::zero(ambient_dim, set.len())?;
        if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i >= ambient_dim) {
            return Err(Error::InvalidInput(format!(
                "basis index set {set:?} is not strictly increasing in 0..{ambient_dim}"
            )));
        }
        let r = index_rank(ambient_dim, set);
        v.coeffs[r] = 1.0;
        Ok(v)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient on the basis blade with the given increasing index set.
    pub fn component(&self, set: &[usize]) -> f64 {
        self.coeffs[index_rank(self.ambient_dim, set)]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            grade: self.grade,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self {
            ambient_dim: self.ambient_dim,
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Euclidean inner product in the orthonormal lexicographic basis.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum())
    }

    /// Exterior product; the result has grade `p + q`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let n = self.ambient_dim;
        let grade = self.grade + other.grade;
        if grade > n {
            return Err(Error::GradeOverflow { grade, ambient_dim: n });
        }
        let left = basis_sets(n, self.grade);
        let right = basis_sets(n, other.grade);
        let mut out = Self::zero(n, grade)?;
        let mut merged = Vec::with_capacity(grade);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0.0) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| **b != 0.0) {
                let (li, rj) = (&left[i], &right[j]);
                if let Some(sign) = merge_sign(li, rj, &mut merged) {
                    out.coeffs[index_rank(n, &merged)] += sign * a * b;
                }
            }
        }
        Ok(out)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        Ok(())
    }
}

/// Sorted union of two disjoint increasing sets and the sign of the
/// shuffle permutation; `None` when the sets overlap.
fn merge_sign(a: &[usize], b: &[usize], merged: &mut Vec<usize>) -> Option<f64> {
    merged.clear();
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            merged.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining elements of a
            inversions += a.len() - i;
            merged.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some(if inversions % 2 == 0 { 1.0 } else { -1.0 })
}

fn check_dims(ambient_dim: usize, grade: usize) -> Result<()> {
    if ambient_dim == 0 || ambient_dim > MAX_AMBIENT_DIM {
        return Err(Error::UnsupportedDimension(ambient_dim));
    }
    if grade > ambient_dim {
        return Err(Error::GradeOverflow { grade, ambient_dim });
    }
    Ok(())
}

/// An m-simplex in ℝᴺ given by an ordered vertex list; the order carries
/// the orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedSimplex {
    vertices: Vec<Vec<f64>>,
}

impl OrientedSimplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidInput("simplex without vertices".into()));
        };
        let n = first.len();
        if n == 0 || n > MAX_AMBIENT_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if let Some(bad) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        if vertices.len() > n + 1 {
            return Err(Error::GradeOverflow {
                grade: vertices.len() - 1,
                ambient_dim: n,
            });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn edge_vectors(&self) -> Vec<Vec<f64>> {
        let v0 = &self.vertices[0];
        self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// `(v₁−v₀) ∧ … ∧ (v_m−v₀)`, whose norm is `m!` times the volume.
    pub fn edge_wedge(&self) -> Multivector {
        let n = self.ambient_dim();
        let mut acc = Multivector::scalar(n, 1.0).expect("ambient dimension checked in new");
        for e in self.edge_vectors() {
            let v = Multivector::vector(&e).expect("edge has ambient length");
            acc = acc.wedge(&v).expect("grade bounded in new");
        }
        acc
    }

    /// Scale-free degeneracy test: the wedge of the edges is compared with
    /// the product of the edge lengths.
    pub fn is_degenerate(&self, tol: f64) -> bool {
        let edges = self.edge_vectors();
        let lengths: f64 = edges.iter().map(|e| norm(e)).product();
        if lengths == 0.0 {
            return true;
        }
        self.edge_wedge().norm() <= tol * lengths
    }

    /// Transposition of two vertices, which reverses the orientation.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.swap(i, j);
        Self { vertices }
    }
}

/// Unit simple m-vector η(σ) of an oriented simplex.
///
/// A 0-simplex carries the scalar `1`.
pub fn unit_simple_vector(s: &OrientedSimplex, tol: f64) -> Result<Multivector> {
    if s.is_degenerate(tol) && s.dim() > 0 {
        return Err(Error::DegenerateSimplex(s.dim()));
    }
    let w = s.edge_wedge();
    let n = w.norm();
    Ok(w.scale(1.0 / n))
}

/// m-dimensional Hausdorff measure `sqrt(det(EᵀE)) / m!`; zero for
/// degenerate input.
pub fn simplex_volume(s: &OrientedSimplex) -> f64 {
    let m = s.dim();
    if m == 0 {
        return 1.0;
    }
    let edges = s.edge_vectors();
    let gram = DMatrix::from_fn(m, m, |i, j| dot(&edges[i], &edges[j]));
    let det = gram.determinant();
    if det <= 0.0 {
        return 0.0;
    }
    det.sqrt() / factorial(m)
}

pub(crate) fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, set: &[usize]) -> Multivector {
        Multivector::basis(n, set).unwrap()
    }

    /// Coefficients of v₁ ∧ … ∧ v_k as k×k minors, via the Leibniz formula.
    fn minors_oracle(vectors: &[Vec<f64>]) -> Vec<f64> {
        let n = vectors[0].len();
        let k = vectors.len();
        let perms = permutations(k);
        basis_sets(n, k)
            .iter()
            .map(|set| {
                perms
                    .iter()
                    .map(|(p, sign)| sign * (0..k).map(|r| vectors[r][set[p[r]]]).product::<f64>())
                    .sum()
            })
            .collect()
    }

    fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
        fn rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<(Vec<usize>, f64)>) {
            if cur.len() == k {
                let mut inv = 0;
                for i in 0..k {
                    for j in i + 1..k {
                        if cur[i] > cur[j] {
                            inv += 1;
                        }
                    }
                }
                out.push((cur.clone(), if inv % 2 == 0 { 1.0 } else { -1.0 }));
                return;
            }
            for i in 0..k {
                if !cur.contains(&i) {
                    cur.push(i);
                    rec(cur, k, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), k, &mut out);
        out
    }

    #[test]
    fn basis_ranks_are_lexicographic() {
        let sets = basis_sets(5, 3);
        assert_eq!(sets.len(), 10);
        for (i, s) in sets.iter().enumerate() {
            assert_eq!(index_rank(5, s), i);
        }
        assert_eq!(binomial(12, 6), 924);
    }

    #[test]
    fn wedge_of_basis_vectors() {
        let e12 = e(3, &[0]).wedge(&e(3, &[1])).unwrap();
        assert_eq!(e12, e(3, &[0, 1]));
        let zero = e(3, &[0]).wedge(&e(3, &[0])).unwrap();
        assert!(zero.is_zero(0.0));
    }

    #[test]
    fn wedge_expands_bilinearly() {
        // (e₁+e₂) ∧ e₂ = e₁₂, checked against the minor expansion
        let a = Multivector::vector(&[1.0, 1.0]).unwrap();
        let b = e(2, &[1]);
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.coeffs(), minors_oracle(&[vec![1.0, 1.0], vec![0.0, 1.0]]).as_slice());
        assert_eq!(w, e(2, &[0, 1]));
    }

    #[test]
    fn wedge_of_vectors_matches_minors() {
        let vs = vec![
            vec![0.3, -1.2, 0.5, 2.0],
            vec![1.1, 0.4, -0.7, 0.2],
            vec![-0.6, 0.9, 1.3, -0.4],
        ];
        let mut acc = Multivector::scalar(4, 1.0).unwrap();
        for v in &vs {
            acc = acc.wedge(&Multivector::vector(v).unwrap()).unwrap();
        }
        for (a, b) in acc.coeffs().iter().zip(minors_oracle(&vs)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn wedge_errors() {
        let a = e(3, &[0, 1]);
        assert!(matches!(a.wedge(&e(3, &[0, 2])), Err(Error::GradeOverflow { .. })));
        assert!(matches!(a.wedge(&e(4, &[0])), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(Multivector::zero(13, 1), Err(Error::UnsupportedDimension(13))));
    }

    #[test]
    fn inner_products() {
        let e12 = e(3, &[0, 1]);
        let e13 = e(3, &[0, 2]);
        assert_eq!(e12.inner(&e12).unwrap(), 1.0);
        assert_eq!(e12.inner(&e13).unwrap(), 0.0);
        let v = e12.scale(2.0).add(&e13).unwrap();
        assert_eq!(v.inner(&e13).unwrap(), 1.0);
        assert!(matches!(e12.inner(&e(3, &[0])), Err(Error::GradeMismatch { .. })));
    }

    fn simplex(vs: &[&[f64]]) -> OrientedSimplex {
        OrientedSimplex::new(vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn unit_vectors_of_axis_simplices() {
        let seg = simplex(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(unit_simple_vector(&seg, 1e-9).unwrap(), e(2, &[0]));
        let tri = simplex(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(unit_simple_vector(&tri, 1e-9).unwrap(), e(3, &[0, 1]));
        let rev = simplex(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert_eq!(unit_simple_vector(&rev, 1e-9).unwrap(), e(3, &[0, 1]).scale(-1.0));
    }

    #[test]
    fn degenerate_simplex_is_rejected() {
        let flat = simplex(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]);
        assert!(matches!(
            unit_simple_vector(&flat, 1e-9),
            Err(Error::DegenerateSimplex(2))
        ));
        assert_eq!(simplex_volume(&flat), 0.0);
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex_volume(&simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])), 0.5);
        let seg = simplex(&[&[0.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]);
        assert!((simplex_volume(&seg) - 2f64.sqrt()).abs() < 1e-15);
    }

    /// Cayley–Menger: 288 V² = det of the bordered squared-distance matrix.
    fn cayley_menger_volume(points: &[Vec<f64>]) -> f64 {
        let mut m = DMatrix::<f64>::zeros(5, 5);
        for i in 0..5 {
            for j in 0..5 {
                m[(i, j)] = match (i, j) {
                    (0, 0) => 0.0,
                    (0, _) | (_, 0) => 1.0,
                    _ => {
                        let d: f64 = points[i - 1]
                            .iter()
                            .zip(&points[j - 1])
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        d
                    }
                };
            }
        }
        (m.determinant() / 288.0).sqrt()
    }

    #[test]
    fn regular_tetrahedron_volume() {
        let h = 0.5f64.sqrt();
        let pts = vec![
            vec![0.5, 0.0, -0.5 * h],
            vec![-0.5, 0.0, -0.5 * h],
            vec![0.0, 0.5, 0.5 * h],
            vec![0.0, -0.5, 0.5 * h],
        ];
        let oracle = cayley_menger_volume(&pts);
        assert!((oracle - 1.0 / (6.0 * 2f64.sqrt())).abs() < 1e-12);
        let vol = simplex_volume(&OrientedSimplex::new(pts).unwrap());
        assert!((vol - oracle).abs() < 1e-12);
        assert!((vol - 0.11785).abs() < 1e-5);
    }

    #[test]
    fn permutation_parity_of_unit_vector() {
        let base = vec![
            vec![0.1, 0.2, -0.3, 0.0],
            vec![1.0, 0.4, 0.2, -0.5],
            vec![-0.2, 1.1, 0.3, 0.7],
            vec![0.3, -0.4, 1.2, 0.1],
        ];
        let eta = unit_simple_vector(&OrientedSimplex::new(base.clone()).unwrap(), 1e-9).unwrap();
        for (p, sign) in permutations(4) {
            let s = OrientedSimplex::new(p.iter().map(|&i| base[i].clone()).collect()).unwrap();
            let eta_p = unit_simple_vector(&s, 1e-9).unwrap();
            let diff = eta_p.sub(&eta.scale(sign)).unwrap();
            assert!(diff.norm() < 1e-12, "permutation {p:?}");
            assert!((eta_p.norm() - 1.0).abs() < 1e-12);
        }
    }
}
