//! Finite simplicial complexes embedded in ℝᴺ.
//!
//! Simplices are stored per dimension as strictly increasing vertex tuples;
//! the sorted tuple is the canonical orientation and its position in the
//! sorted list is the simplex id. Vertex `i` is the 0-simplex with id `i`.

use std::collections::{BTreeSet, HashMap};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exterior::{simplex_volume, unit_simple_vector, Multivector, OrientedSimplex};
use crate::{DEFAULT_TOL, MAX_AMBIENT_DIM};

#[derive(Clone, Debug)]
pub struct EmbeddedComplex {
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
    simplices: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    /// `faces[d][id]`: the (d−1)-faces of a d-simplex with incidence
    /// signs `(−1)^i`, `i` the index of the removed vertex.
    faces: Vec<Vec<Vec<(usize, i8)>>>,
    cofaces: Vec<Vec<Vec<(usize, i8)>>>,
    volumes: Vec<Vec<f64>>,
}

impl PartialEq for EmbeddedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices && self.simplices == other.simplices
    }
}

impl EmbeddedComplex {
    /// Closes `simplices` (of any dimensions) under the face relation.
    ///
    /// Every input simplex must be geometrically nondegenerate.
    pub fn build(ambient_dim: usize, vertices: Vec<Vec<f64>>, simplices: &[Vec<usize>]) -> Result<Self> {
        Self::build_with(ambient_dim, vertices, simplices, true)
    }

    fn build_with(
        ambient_dim: usize,
        vertices: Vec<Vec<f64>>,
        simplices: &[Vec<usize>],
        check_geometry: bool,
    ) -> Result<Self> {
        if ambient_dim == 0 || ambient_dim > MAX_AMBIENT_DIM {
            return Err(Error::UnsupportedDimension(ambient_dim));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        let count = vertices.len();
        let mut seen = BTreeSet::new();
        let mut top = 0;
        for s in simplices {
            if s.is_empty() {
                return Err(Error::InvalidInput("empty simplex".into()));
            }
            if let Some(&index) = s.iter().find(|&&i| i >= count) {
                return Err(Error::IndexOutOfRange { index, count });
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("repeated vertex in simplex {s:?}")));
            }
            if sorted.len() > ambient_dim + 1 {
                return Err(Error::GradeOverflow {
                    grade: sorted.len() - 1,
                    ambient_dim,
                });
            }
            if !seen.insert(sorted.clone()) {
                return Err(Error::DuplicateSimplex(sorted));
            }
            if check_geometry && sorted.len() > 1 {
                let simplex = OrientedSimplex::new(sorted.iter().map(|&i| vertices[i].clone()).collect())?;
                if simplex.is_degenerate(DEFAULT_TOL) {
                    return Err(Error::DegenerateSimplex(sorted.len() - 1));
                }
            }
            top = top.max(sorted.len() - 1);
        }

        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        by_dim[0].extend((0..count).map(|i| vec![i]));
        for s in seen {
            close_faces(s, &mut by_dim);
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|set| set.into_iter().collect()).collect();
        Ok(Self::assemble(ambient_dim, vertices, simplices))
    }

    fn assemble(ambient_dim: usize, vertices: Vec<Vec<f64>>, simplices: Vec<Vec<Vec<usize>>>) -> Self {
        let lookup: Vec<HashMap<Vec<usize>, usize>> = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut faces = vec![Vec::new()];
        let mut cofaces: Vec<Vec<Vec<(usize, i8)>>> =
            simplices.iter().map(|list| vec![Vec::new(); list.len()]).collect();
        for d in 1..simplices.len() {
            let mut level = Vec::with_capacity(simplices[d].len());
            for (id, s) in simplices[d].iter().enumerate() {
                let fs: Vec<(usize, i8)> = (0..s.len())
                    .map(|i| {
                        let face = remove_index(s, i);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        (lookup[d - 1][&face], sign)
                    })
                    .collect();
                for &(f, sign) in &fs {
                    cofaces[d - 1][f].push((id, sign));
                }
                level.push(fs);
            }
            faces.push(level);
        }
        let volumes = simplices
            .iter()
            .map(|list| {
                list.iter()
                    .map(|s| {
                        let pts = s.iter().map(|&i| vertices[i].clone()).collect();
                        simplex_volume(&OrientedSimplex::new(pts).expect("validated vertices"))
                    })
                    .collect()
            })
            .collect();
        Self {
            ambient_dim,
            vertices,
            simplices,
            lookup,
            faces,
            cofaces,
            volumes,
        }
    }

    /// Same combinatorics with new vertex positions; image simplices may be
    /// degenerate (volume 0).
    pub fn with_vertices(&self, vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::MapSize {
                expected: self.vertices.len(),
                found: vertices.len(),
            });
        }
        let n = vertices.first().map_or(self.ambient_dim, Vec::len);
        if n == 0 || n > MAX_AMBIENT_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        Ok(Self::assemble(n, vertices, self.simplices.clone()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Highest simplex dimension present.
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, Vec::len)
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, d: usize, id: usize) -> &[usize] {
        &self.simplices[d][id]
    }

    /// Id of a sorted vertex tuple.
    pub fn find(&self, tuple: &[usize]) -> Option<usize> {
        let d = tuple.len().checked_sub(1)?;
        self.lookup.get(d)?.get(tuple).copied()
    }

    /// Id of an arbitrarily ordered vertex tuple together with the sign of
    /// the permutation that sorts it.
    pub fn find_oriented(&self, tuple: &[usize]) -> Result<(usize, i8)> {
        let (sorted, sign) = sort_with_sign(tuple);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotASimplex(tuple.to_vec()));
        }
        self.find(&sorted)
            .map(|id| (id, sign))
            .ok_or_else(|| Error::NotASimplex(tuple.to_vec()))
    }

    pub fn faces(&self, d: usize, id: usize) -> &[(usize, i8)] {
        &self.faces[d][id]
    }

    pub fn cofaces(&self, d: usize, id: usize) -> &[(usize, i8)] {
        &self.cofaces[d][id]
    }

    pub fn volume(&self, d: usize, id: usize) -> f64 {
        self.volumes[d][id]
    }

    pub fn oriented_simplex(&self, d: usize, id: usize) -> OrientedSimplex {
        let pts = self.simplices[d][id]
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect();
        OrientedSimplex::new(pts).expect("complex vertices are validated")
    }

    /// η of the canonically oriented simplex.
    pub fn orientation(&self, d: usize, id: usize) -> Result<Multivector> {
        unit_simple_vector(&self.oriented_simplex(d, id), DEFAULT_TOL)
    }

    /// Simplices that are not a face of any other simplex.
    pub fn maximal_simplices(&self) -> Vec<(usize, usize)> {
        (0..self.simplices.len())
            .flat_map(|d| (0..self.count(d)).map(move |id| (d, id)))
            .filter(|&(d, id)| d + 1 >= self.simplices.len() || self.cofaces[d][id].is_empty())
            .collect()
    }

    /// `dim`-faces with exactly one `(dim+1)`-dimensional coface.
    pub fn frontier_faces(&self, dim: usize) -> BTreeSet<usize> {
        if dim + 1 >= self.simplices.len() {
            return BTreeSet::new();
        }
        (0..self.count(dim))
            .filter(|&id| self.cofaces[dim][id].len() == 1)
            .collect()
    }

    /// SHA-256 over coordinates and tuples, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.ambient_dim as u64).to_le_bytes());
        for v in &self.vertices {
            for x in v {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        for (d, list) in self.simplices.iter().enumerate() {
            h.update((d as u64).to_le_bytes());
            for s in list {
                for &i in s {
                    h.update((i as u64).to_le_bytes());
                }
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks that maximal simplices pairwise intersect only in their
    /// common face.
    pub fn validate_geometry(&self, tol: f64) -> GeometryReport {
        let maximal = self.maximal_simplices();
        let boxes: Vec<(Vec<f64>, Vec<f64>)> = maximal
            .iter()
            .map(|&(d, id)| bounding_box(self.simplices[d][id].iter().map(|&i| &self.vertices[i])))
            .collect();
        let mut report = GeometryReport::default();
        for a in 0..maximal.len() {
            for b in a + 1..maximal.len() {
                if !boxes_overlap(&boxes[a], &boxes[b], tol) {
                    continue;
                }
                report.checked_pairs += 1;
                let sa = &self.simplices[maximal[a].0][maximal[a].1];
                let sb = &self.simplices[maximal[b].0][maximal[b].1];
                let excess = self.improper_overlap(sa, sb);
                if excess > tol {
                    report.violations.push(GeometryViolation {
                        first: sa.clone(),
                        second: sb.clone(),
                        excess,
                    });
                }
            }
        }
        report.valid = report.violations.is_empty();
        report
    }

    /// Largest barycentric weight that a common point of the two simplices
    /// puts on vertices outside their shared face; 0 when the intersection
    /// is the shared face (or empty).
    fn improper_overlap(&self, a: &[usize], b: &[usize]) -> f64 {
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let la: Vec<_> = a
            .iter()
            .map(|i| lp.add_var(if b.contains(i) { 0.0 } else { 1.0 }, (0.0, 1.0)))
            .collect();
        let lb: Vec<_> = b
            .iter()
            .map(|i| lp.add_var(if a.contains(i) { 0.0 } else { 1.0 }, (0.0, 1.0)))
            .collect();
        let ones_a: Vec<_> = la.iter().map(|&v| (v, 1.0)).collect();
        let ones_b: Vec<_> = lb.iter().map(|&v| (v, 1.0)).collect();
        lp.add_constraint(ones_a.as_slice(), ComparisonOp::Eq, 1.0);
        lp.add_constraint(ones_b.as_slice(), ComparisonOp::Eq, 1.0);
        for k in 0..self.ambient_dim {
            let mut row: Vec<_> = la.iter().zip(a).map(|(&v, &i)| (v, self.vertices[i][k])).collect();
            row.extend(lb.iter().zip(b).map(|(&v, &i)| (v, -self.vertices[i][k])));
            lp.add_constraint(row.as_slice(), ComparisonOp::Eq, 0.0);
        }
        match lp.solve() {
            Ok(sol) => sol.objective().max(0.0),
            Err(_) => 0.0,
        }
    }

    /// Refines the complex; the correspondence sends every original simplex
    /// to the same-dimensional simplices that tile it.
    pub fn subdivide(&self, rule: &SubdivisionRule) -> Result<(EmbeddedComplex, Correspondence)> {
        match rule {
            SubdivisionRule::Barycentric => Ok(self.barycentric()),
            SubdivisionRule::EdgeMidpoint(edge) => self.split_edge(*edge),
        }
    }

    fn barycentric(&self) -> (EmbeddedComplex, Correspondence) {
        let mut vertices = self.vertices.clone();
        let mut centre: Vec<Vec<usize>> = vec![(0..self.vertices.len()).collect()];
        for d in 1..self.simplices.len() {
            let ids = self.simplices[d]
                .iter()
                .map(|s| {
                    let mut c = vec![0.0; self.ambient_dim];
                    for &i in s {
                        for (ck, vk) in c.iter_mut().zip(&self.vertices[i]) {
                            *ck += vk;
                        }
                    }
                    c.iter_mut().for_each(|x| *x /= s.len() as f64);
                    vertices.push(c);
                    vertices.len() - 1
                })
                .collect();
            centre.push(ids);
        }
        // a full flag σ₀ ⊂ … ⊂ σ_d = σ is an ordering of σ's vertices
        let flags = |s: &[usize]| -> Vec<Vec<usize>> {
            permutations(s)
                .into_iter()
                .map(|p| {
                    let mut tuple: Vec<usize> = (0..p.len())
                        .map(|k| {
                            let mut prefix = p[..=k].to_vec();
                            prefix.sort_unstable();
                            centre[k][self.lookup[k][&prefix]]
                        })
                        .collect();
                    tuple.sort_unstable();
                    tuple
                })
                .collect()
        };
        let mut tops = Vec::new();
        for (d, id) in self.maximal_simplices() {
            tops.extend(flags(&self.simplices[d][id]));
        }
        let refined = Self::build_with(self.ambient_dim, vertices, &tops, false)
            .expect("barycentric subdivision of a valid complex is valid");
        let children = self
            .simplices
            .iter()
            .map(|list| {
                list.iter()
                    .map(|s| {
                        flags(s)
                            .iter()
                            .map(|t| refined.find(t).expect("flag simplex"))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        (refined, Correspondence { children })
    }

    fn split_edge(&self, edge: [usize; 2]) -> Result<(EmbeddedComplex, Correspondence)> {
        let [a, b] = if edge[0] < edge[1] { edge } else { [edge[1], edge[0]] };
        if self.find(&[a, b]).is_none() {
            return Err(Error::EdgeNotFound(edge));
        }
        let mut vertices = self.vertices.clone();
        let mid: Vec<f64> = self.vertices[a]
            .iter()
            .zip(&self.vertices[b])
            .map(|(x, y)| 0.5 * (x + y))
            .collect();
        vertices.push(mid);
        let m = vertices.len() - 1;
        let split = |s: &[usize]| -> Vec<Vec<usize>> {
            if s.contains(&a) && s.contains(&b) {
                [a, b]
                    .iter()
                    .map(|&drop| {
                        let mut t: Vec<usize> = s.iter().map(|&v| if v == drop { m } else { v }).collect();
                        t.sort_unstable();
                        t
                    })
                    .collect()
            } else {
                vec![s.to_vec()]
            }
        };
        let mut tops = Vec::new();
        for (d, id) in self.maximal_simplices() {
            tops.extend(split(&self.simplices[d][id]));
        }
        let refined = Self::build_with(self.ambient_dim, vertices, &tops, false)?;
        let children = self
            .simplices
            .iter()
            .map(|list| {
                list.iter()
                    .map(|s| {
                        split(s)
                            .iter()
                            .map(|t| refined.find(t).expect("split simplex"))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok((refined, Correspondence { children }))
    }
}

fn close_faces(s: Vec<usize>, by_dim: &mut [BTreeSet<Vec<usize>>]) {
    let d = s.len() - 1;
    if d == 0 || by_dim[d].contains(&s) {
        by_dim[d].insert(s);
        return;
    }
    for i in 0..s.len() {
        close_faces(remove_index(&s, i), by_dim);
    }
    by_dim[d].insert(s);
}

fn remove_index(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()
}

/// Sorted copy and the parity of the sorting permutation.
pub fn sort_with_sign(tuple: &[usize]) -> (Vec<usize>, i8) {
    let mut inversions = 0;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i] > tuple[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = tuple.to_vec();
    sorted.sort_unstable();
    (sorted, if inversions % 2 == 0 { 1 } else { -1 })
}

fn permutations(s: &[usize]) -> Vec<Vec<usize>> {
    if s.len() <= 1 {
        return vec![s.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..s.len() {
        let rest = remove_index(s, i);
        for mut p in permutations(&rest) {
            p.insert(0, s[i]);
            out.push(p);
        }
    }
    out
}

fn bounding_box<'a>(points: impl Iterator<Item = &'a Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for p in points {
        if lo.is_empty() {
            lo = p.clone();
            hi = p.clone();
        } else {
            for k in 0..p.len() {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    (lo, hi)
}

fn boxes_overlap(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>), tol: f64) -> bool {
    (0..a.0.len()).all(|k| a.0[k] <= b.1[k] + tol && b.0[k] <= a.1[k] + tol)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubdivisionRule {
    Barycentric,
    EdgeMidpoint([usize; 2]),
}

impl std::str::FromStr for SubdivisionRule {
    type Err = Error;

    /// `barycentric` or `midpoint:i,j`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "barycentric" {
            return Ok(Self::Barycentric);
        }
        if let Some(rest) = s.strip_prefix("midpoint:") {
            let ids: Vec<usize> = rest
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::UnknownRule(s.to_string()))?;
            if let [a, b] = ids[..] {
                return Ok(Self::EdgeMidpoint([a, b]));
            }
        }
        Err(Error::UnknownRule(s.to_string()))
    }
}

/// `children[d][id]`: ids of the refined d-simplices tiling original
/// d-simplex `id`.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub children: Vec<Vec<Vec<usize>>>,
}

impl Correspondence {
    pub fn children(&self, d: usize, id: usize) -> &[usize] {
        &self.children[d][id]
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GeometryReport {
    pub valid: bool,
    pub checked_pairs: usize,
    pub violations: Vec<GeometryViolation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryViolation {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// Barycentric weight of a common point outside the shared face.
    pub excess: f64,
}

/// The (m−1)-faces Γ on which boundary is permitted and deformations are
/// frozen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRegion {
    face_dim: usize,
    face_ids: BTreeSet<usize>,
}

impl BoundaryRegion {
    pub fn new(complex: &EmbeddedComplex, face_dim: usize, face_ids: BTreeSet<usize>) -> Result<Self> {
        if let Some(&bad) = face_ids.iter().find(|&&id| id >= complex.count(face_dim)) {
            return Err(Error::InvalidInput(format!(
                "Γ face id {bad} is not a {face_dim}-simplex of the complex"
            )));
        }
        Ok(Self { face_dim, face_ids })
    }

    pub fn from_tuples(complex: &EmbeddedComplex, face_dim: usize, tuples: &[Vec<usize>]) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for t in tuples {
            if t.len() != face_dim + 1 {
                return Err(Error::InvalidInput(format!(
                    "Γ face {t:?} is not {face_dim}-dimensional"
                )));
            }
            ids.insert(complex.find_oriented(t)?.0);
        }
        Self::new(complex, face_dim, ids)
    }

    /// The frontier of the `top_dim`-skeleton.
    pub fn frontier(complex: &EmbeddedComplex, top_dim: usize) -> Result<Self> {
        let face_dim = top_dim
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("frontier of a 0-dimensional complex".into()))?;
        Ok(Self {
            face_dim,
            face_ids: complex.frontier_faces(face_dim),
        })
    }

    pub fn empty(face_dim: usize) -> Self {
        Self {
            face_dim,
            face_ids: BTreeSet::new(),
        }
    }

    pub fn face_dim(&self) -> usize {
        self.face_dim
    }

    pub fn face_ids(&self) -> &BTreeSet<usize> {
        &self.face_ids
    }

    pub fn contains(&self, face_id: usize) -> bool {
        self.face_ids.contains(&face_id)
    }

    /// All vertices of faces in Γ.
    pub fn vertices(&self, complex: &EmbeddedComplex) -> BTreeSet<usize> {
        self.face_ids
            .iter()
            .flat_map(|&id| complex.simplex(self.face_dim, id).iter().copied())
            .collect()
    }

    pub fn tuples(&self, complex: &EmbeddedComplex) -> Vec<Vec<usize>> {
        self.face_ids
            .iter()
            .map(|&id| complex.simplex(self.face_dim, id).to_vec())
            .collect()
    }

    /// Image region after transporting through a subdivision.
    pub fn refine(&self, corr: &Correspondence) -> Self {
        Self {
            face_dim: self.face_dim,
            face_ids: self
                .face_ids
                .iter()
                .flat_map(|&id| corr.children(self.face_dim, id).iter().copied())
                .collect(),
        }
    }
}

/// All (m−1)-simplices of `complex` that are not in Γ.
pub fn interior_faces(complex: &EmbeddedComplex, m: usize, gamma: &BoundaryRegion) -> Vec<usize> {
    let Some(d) = m.checked_sub(1) else {
        return Vec::new();
    };
    (0..complex.count(d))
        .filter(|&id| d != gamma.face_dim() || !gamma.contains(id))
        .collect()
}
