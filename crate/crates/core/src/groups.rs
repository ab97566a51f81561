//! Normed abelian coefficient groups.
//!
//! Concrete groups: [`RealLine`], [`Integers`], [`ExteriorPower`]
//! (`Λ_m ℝᴺ` with the Euclidean norm) and [`Subgroup`], the subgroup `H`
//! generated by a finite set `S = {g₁,…,g_k}` with the norm
//! `|g|_H = min { Σ |nᵢ| |gᵢ|_G : g = Σ nᵢ gᵢ, nᵢ ∈ ℤ }`.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, Multivector};
use crate::DEFAULT_TOL;

pub trait CoefficientGroup: Clone + Debug + PartialEq {
    type Element: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Element;
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn neg(&self, a: &Self::Element) -> Self::Element;
    fn norm(&self, a: &Self::Element) -> f64;
    /// Zero test used for canonical sparsity of chains.
    fn is_zero(&self, a: &Self::Element) -> bool;
    fn scale_int(&self, a: &Self::Element, n: i64) -> Self::Element;

    /// Rejects elements that do not belong to this group (wrong shape).
    fn validate(&self, _a: &Self::Element) -> Result<()> {
        Ok(())
    }

    fn sub(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        self.add(a, &self.neg(b))
    }

    fn approx_eq(&self, a: &Self::Element, b: &Self::Element) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn describe(&self) -> String;
}

/// Groups whose elements are real vectors of fixed length with the
/// Euclidean norm; the convex solver works over these.
pub trait VectorGroup: CoefficientGroup {
    fn block_dim(&self) -> usize;
    fn to_block(&self, a: &Self::Element) -> Vec<f64>;
    fn from_block(&self, block: &[f64]) -> Self::Element;
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealLine {
    pub tol: f64,
}

impl Default for RealLine {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL }
    }
}

impl CoefficientGroup for RealLine {
    type Element = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn norm(&self, a: &f64) -> f64 {
        a.abs()
    }
    fn is_zero(&self, a: &f64) -> bool {
        a.abs() <= self.tol
    }
    fn scale_int(&self, a: &f64, n: i64) -> f64 {
        a * n as f64
    }
    fn validate(&self, a: &f64) -> Result<()> {
        if a.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("non-finite coefficient {a}")))
        }
    }
    fn describe(&self) -> String {
        "ℝ".into()
    }
}

impl VectorGroup for RealLine {
    fn block_dim(&self) -> usize {
        1
    }
    fn to_block(&self, a: &f64) -> Vec<f64> {
        vec![*a]
    }
    fn from_block(&self, block: &[f64]) -> f64 {
        block[0]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl CoefficientGroup for Integers {
    type Element = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn norm(&self, a: &i64) -> f64 {
        a.unsigned_abs() as f64
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn scale_int(&self, a: &i64, n: i64) -> i64 {
        a * n
    }
    fn describe(&self) -> String {
        "ℤ".into()
    }
}

/// `Λ_m ℝᴺ` with the Euclidean norm.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorPower {
    pub ambient_dim: usize,
    pub grade: usize,
    pub tol: f64,
}

impl ExteriorPower {
    pub fn new(ambient_dim: usize, grade: usize) -> Result<Self> {
        Multivector::zero(ambient_dim, grade)?;
        Ok(Self {
            ambient_dim,
            grade,
            tol: DEFAULT_TOL,
        })
    }
}

impl CoefficientGroup for ExteriorPower {
    type Element = Multivector;

    fn zero(&self) -> Multivector {
        Multivector::zero(self.ambient_dim, self.grade).expect("dimensions checked in new")
    }
    fn add(&self, a: &Multivector, b: &Multivector) -> Multivector {
        a.add(b).expect("elements validated against the group")
    }
    fn neg(&self, a: &Multivector) -> Multivector {
        a.scale(-1.0)
    }
    fn norm(&self, a: &Multivector) -> f64 {
        a.norm()
    }
    fn is_zero(&self, a: &Multivector) -> bool {
        a.is_zero(self.tol)
    }
    fn scale_int(&self, a: &Multivector, n: i64) -> Multivector {
        a.scale(n as f64)
    }
    fn validate(&self, a: &Multivector) -> Result<()> {
        if a.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: a.ambient_dim(),
            });
        }
        if a.grade() != self.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: a.grade(),
            });
        }
        if a.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite multivector coefficient".into()));
        }
        Ok(())
    }
    fn describe(&self) -> String {
        format!("Λ_{}ℝ^{}", self.grade, self.ambient_dim)
    }
}

impl VectorGroup for ExteriorPower {
    fn block_dim(&self) -> usize {
        binomial(self.ambient_dim, self.grade)
    }
    fn to_block(&self, a: &Multivector) -> Vec<f64> {
        a.coeffs().to_vec()
    }
    fn from_block(&self, block: &[f64]) -> Multivector {
        Multivector::from_coeffs(self.ambient_dim, self.grade, block.to_vec()).expect("block has C(N,m) entries")
    }
}

/// An element of a finitely generated subgroup: one integer coordinate
/// vector together with the ambient value it resolves to.
#[derive(Clone, Debug)]
pub struct SubgroupElement<E> {
    pub coords: Vec<i64>,
    pub value: E,
}

impl<E: PartialEq> PartialEq for SubgroupElement<E> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.value == other.value
    }
}

/// The subgroup `H ⊆ G` generated by `S` with norm `|·|_H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subgroup<G: CoefficientGroup> {
    ambient: G,
    generators: Vec<G::Element>,
    generator_norms: Vec<f64>,
}

/// A norm-ball member: distinct ambient value, one cheapest representation
/// and its `|·|_H` norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallElement<E> {
    pub coords: Vec<i64>,
    pub value: E,
    pub norm: f64,
}

impl<G: CoefficientGroup> Subgroup<G> {
    pub fn new(ambient: G, generators: Vec<G::Element>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::IllPosedSubgroup("no generators".into()));
        }
        for g in &generators {
            ambient.validate(g)?;
        }
        let generator_norms: Vec<f64> = generators.iter().map(|g| ambient.norm(g)).collect();
        if generator_norms.iter().all(|&w| w <= DEFAULT_TOL) {
            return Err(Error::IllPosedSubgroup("all generator norms are zero".into()));
        }
        Ok(Self {
            ambient,
            generators,
            generator_norms,
        })
    }

    pub fn ambient(&self) -> &G {
        &self.ambient
    }

    pub fn generators(&self) -> &[G::Element] {
        &self.generators
    }

    pub fn generator_norms(&self) -> &[f64] {
        &self.generator_norms
    }

    /// Element with coordinates `coords` (length k).
    pub fn element(&self, coords: Vec<i64>) -> Result<SubgroupElement<G::Element>> {
        if coords.len() != self.generators.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generators.len(),
                found: coords.len(),
            });
        }
        let value = self.resolve(&coords);
        Ok(SubgroupElement { coords, value })
    }

    pub fn generator(&self, i: usize) -> SubgroupElement<G::Element> {
        let mut coords = vec![0; self.generators.len()];
        coords[i] = 1;
        SubgroupElement {
            coords,
            value: self.generators[i].clone(),
        }
    }

    fn resolve(&self, coords: &[i64]) -> G::Element {
        coords
            .iter()
            .zip(&self.generators)
            .filter(|(&n, _)| n != 0)
            .fold(self.ambient.zero(), |acc, (&n, g)| {
                self.ambient.add(&acc, &self.ambient.scale_int(g, n))
            })
    }

    /// Cost `Σ |nᵢ| |gᵢ|_G` of a coordinate vector.
    pub fn representation_cost(&self, coords: &[i64]) -> f64 {
        coords
            .iter()
            .zip(&self.generator_norms)
            .map(|(&n, &w)| n.unsigned_abs() as f64 * w)
            .sum()
    }

    /// `|g|_H` for the element with coordinates `coords`.
    pub fn subgroup_norm(&self, coords: &[i64]) -> Result<f64> {
        let el = self.element(coords.to_vec())?;
        let bound = self.representation_cost(coords);
        Ok(self
            .cheapest_representation(&el.value, bound)
            .map_or(bound, |(_, cost)| cost))
    }

    /// Minimum-cost integer representation of `target` among those with
    /// cost at most `budget`, by branch and bound over the generators in
    /// order of decreasing norm.
    pub fn cheapest_representation(&self, target: &G::Element, budget: f64) -> Option<(Vec<i64>, f64)> {
        let mut order: Vec<usize> = (0..self.generators.len())
            .filter(|&i| self.generator_norms[i] > DEFAULT_TOL)
            .collect();
        order.sort_by(|&a, &b| self.generator_norms[b].total_cmp(&self.generator_norms[a]));
        let slack = 1e-12 * budget.max(1.0);
        let mut search = Search {
            group: self,
            order: &order,
            target,
            best: None,
            bound: budget + slack,
            coords: vec![0; self.generators.len()],
        };
        let start = self.ambient.zero();
        search.descend(0, &start, 0.0);
        search.best
    }

    /// All distinct elements with `|g|_H ≤ λ`.
    pub fn norm_ball(&self, lambda: f64) -> Result<Vec<BallElement<G::Element>>> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(Error::NegativeRadius(lambda));
        }
        if self.generator_norms.iter().any(|&w| w <= DEFAULT_TOL) {
            return Err(Error::IllPosedSubgroup(
                "norm balls need every generator norm to be positive".into(),
            ));
        }
        let mut found: Vec<BallElement<G::Element>> = Vec::new();
        let mut coords = vec![0i64; self.generators.len()];
        let limit = lambda + 1e-12 * lambda.max(1.0);
        self.enumerate_ball(0, 0.0, limit, &mut coords, &mut found);
        found.sort_by(|a, b| a.norm.total_cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
        Ok(found)
    }

    fn enumerate_ball(
        &self,
        level: usize,
        cost: f64,
        limit: f64,
        coords: &mut Vec<i64>,
        found: &mut Vec<BallElement<G::Element>>,
    ) {
        if level == coords.len() {
            let value = self.resolve(coords);
            match found.iter_mut().find(|b| self.ambient.approx_eq(&b.value, &value)) {
                Some(existing) => {
                    if cost < existing.norm - 1e-12 {
                        existing.norm = cost;
                        existing.coords = coords.clone();
                    }
                }
                None => found.push(BallElement {
                    coords: coords.clone(),
                    value,
                    norm: cost,
                }),
            }
            return;
        }
        let w = self.generator_norms[level];
        let reach = ((limit - cost) / w).floor() as i64;
        for n in -reach..=reach {
            coords[level] = n;
            self.enumerate_ball(level + 1, cost + n.unsigned_abs() as f64 * w, limit, coords, found);
        }
        coords[level] = 0;
    }

    /// True iff every generator norm is a positive integer, so that every
    /// `|g|_H` is an integer.
    pub fn integrality_check(&self) -> bool {
        self.generator_norms
            .iter()
            .all(|&w| w >= 1.0 - 1e-9 && (w - w.round()).abs() <= 1e-9)
    }

    /// Finds integer coordinates for an ambient element, preferring an
    /// exact generator match; the search budget scales with the element and
    /// generator norms.
    pub fn represent(&self, value: &G::Element) -> Result<SubgroupElement<G::Element>> {
        self.ambient.validate(value)?;
        let k = self.generators.len();
        if self.ambient.is_zero(value) {
            return Ok(SubgroupElement {
                coords: vec![0; k],
                value: self.ambient.zero(),
            });
        }
        for (i, g) in self.generators.iter().enumerate() {
            for sign in [1i64, -1] {
                if self.ambient.approx_eq(&self.ambient.scale_int(g, sign), value) {
                    let mut coords = vec![0; k];
                    coords[i] = sign;
                    return Ok(SubgroupElement {
                        coords,
                        value: value.clone(),
                    });
                }
            }
        }
        let max_gen = self.generator_norms.iter().copied().fold(0.0, f64::max);
        let budget = 4.0 * (self.ambient.norm(value) + max_gen);
        let (coords, _) = self
            .cheapest_representation(value, budget)
            .ok_or(Error::NotRepresentable)?;
        Ok(SubgroupElement {
            coords,
            value: value.clone(),
        })
    }
}

struct Search<'a, G: CoefficientGroup> {
    group: &'a Subgroup<G>,
    order: &'a [usize],
    target: &'a G::Element,
    best: Option<(Vec<i64>, f64)>,
    bound: f64,
    coords: Vec<i64>,
}

impl<G: CoefficientGroup> Search<'_, G> {
    fn descend(&mut self, level: usize, partial: &G::Element, cost: f64) {
        let ambient = &self.group.ambient;
        let gap = ambient.norm(&ambient.sub(self.target, partial));
        // the remaining generators can move the value by at most their cost
        if gap > self.bound - cost + DEFAULT_TOL {
            return;
        }
        if level == self.order.len() {
            if ambient.approx_eq(partial, self.target) && cost <= self.bound {
                self.bound = cost;
                self.best = Some((self.coords.clone(), cost));
            }
            return;
        }
        let i = self.order[level];
        let w = self.group.generator_norms[i];
        let reach = ((self.bound - cost) / w).floor() as i64;
        let g = &self.group.generators[i];
        // visit n = 0, 1, −1, 2, −2, … so cheap candidates tighten the bound first
        for step in 0..=(2 * reach) {
            let n = if step % 2 == 0 { -(step / 2) } else { step / 2 + 1 };
            let next_cost = cost + n.unsigned_abs() as f64 * w;
            if next_cost > self.bound {
                continue;
            }
            self.coords[i] = n;
            let next = if n == 0 {
                partial.clone()
            } else {
                ambient.add(partial, &ambient.scale_int(g, n))
            };
            self.descend(level + 1, &next, next_cost);
        }
        self.coords[i] = 0;
    }
}

impl<G: CoefficientGroup> CoefficientGroup for Subgroup<G> {
    type Element = SubgroupElement<G::Element>;

    fn zero(&self) -> Self::Element {
        SubgroupElement {
            coords: vec![0; self.generators.len()],
            value: self.ambient.zero(),
        }
    }
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        SubgroupElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
            value: self.ambient.add(&a.value, &b.value),
        }
    }
    fn neg(&self, a: &Self::Element) -> Self::Element {
        SubgroupElement {
            coords: a.coords.iter().map(|x| -x).collect(),
            value: self.ambient.neg(&a.value),
        }
    }
    fn norm(&self, a: &Self::Element) -> f64 {
        if self.ambient.is_zero(&a.value) {
            return 0.0;
        }
        let bound = self.representation_cost(&a.coords);
        self.cheapest_representation(&a.value, bound)
            .map_or(bound, |(_, cost)| cost)
    }
    fn is_zero(&self, a: &Self::Element) -> bool {
        self.ambient.is_zero(&a.value)
    }
    fn scale_int(&self, a: &Self::Element, n: i64) -> Self::Element {
        SubgroupElement {
            coords: a.coords.iter().map(|x| x * n).collect(),
            value: self.ambient.scale_int(&a.value, n),
        }
    }
    fn validate(&self, a: &Self::Element) -> Result<()> {
        if a.coords.len() != self.generators.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generators.len(),
                found: a.coords.len(),
            });
        }
        if !self.ambient.approx_eq(&self.resolve(&a.coords), &a.value) {
            return Err(Error::InvalidInput(
                "subgroup coordinates do not resolve to the stored value".into(),
            ));
        }
        Ok(())
    }
    fn approx_eq(&self, a: &Self::Element, b: &Self::Element) -> bool {
        self.ambient.approx_eq(&a.value, &b.value)
    }
    fn describe(&self) -> String {
        format!("⟨S⟩ ⊆ {} with |S| = {}", self.ambient.describe(), self.generators.len())
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub passed: bool,
    pub violations: Vec<String>,
}

/// Checks positivity, symmetry and the triangle inequality on `samples`.
pub fn verify_group_axioms<G: CoefficientGroup>(group: &G, samples: &[G::Element]) -> AxiomReport {
    let mut violations = Vec::new();
    let zero_norm = group.norm(&group.zero());
    if zero_norm.abs() > 1e-12 || zero_norm.is_nan() {
        violations.push(format!("positivity: |0| = {zero_norm}"));
    }
    for (i, g) in samples.iter().enumerate() {
        let n = group.norm(g);
        if n.is_nan() || n < 0.0 {
            violations.push(format!("positivity: |g{i}| = {n}"));
        } else if !group.is_zero(g) && n == 0.0 {
            violations.push(format!("definiteness: g{i} is nonzero with norm 0"));
        }
        let m = group.norm(&group.neg(g));
        if (m - n).abs() > 1e-12 * n.abs().max(1.0) {
            violations.push(format!("symmetry: |−g{i}| = {m} ≠ |g{i}| = {n}"));
        }
    }
    for (i, g) in samples.iter().enumerate() {
        for (j, h) in samples.iter().enumerate().skip(i) {
            let (ng, nh) = (group.norm(g), group.norm(h));
            let s = group.norm(&group.add(g, h));
            if !(s <= ng + nh + 1e-12 * (ng + nh).abs().max(1.0)) {
                violations.push(format!("triangle: |g{i} + g{j}| = {s} > {ng} + {nh}"));
            }
        }
    }
    AxiomReport {
        samples: samples.len(),
        passed: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reals(gens: &[f64]) -> Subgroup<RealLine> {
        Subgroup::new(RealLine::default(), gens.to_vec()).unwrap()
    }

    /// min 2|a| + 3|b| subject to 2a + 3b = target, over |a|, |b| ≤ 10.
    fn two_three_oracle(target: i64) -> f64 {
        let mut best = f64::INFINITY;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if 2 * a + 3 * b == target {
                    best = best.min((2 * a.abs() + 3 * b.abs()) as f64);
                }
            }
        }
        best
    }

    #[test]
    fn single_generator() {
        assert_eq!(reals(&[1.0]).subgroup_norm(&[5]).unwrap(), 5.0);
    }

    #[test]
    fn two_and_three() {
        let h = reals(&[2.0, 3.0]);
        let oracle = two_three_oracle(1);
        assert_eq!(oracle, 5.0);
        assert_eq!(h.subgroup_norm(&[-1, 1]).unwrap(), oracle);
        // a non-minimal representation of 1: 2·2 − 1·3
        assert_eq!(h.subgroup_norm(&[2, -1]).unwrap(), oracle);
        for t in -8..=8 {
            let coords = [-t, t]; // −2t + 3t = t
            assert_eq!(h.subgroup_norm(&coords).unwrap(), two_three_oracle(t), "target {t}");
        }
    }

    #[test]
    fn orthogonal_vectors_have_l1_norm() {
        let g = ExteriorPower::new(2, 1).unwrap();
        let h = Subgroup::new(
            g.clone(),
            vec![
                Multivector::vector(&[1.0, 0.0]).unwrap(),
                Multivector::vector(&[0.0, 1.0]).unwrap(),
            ],
        )
        .unwrap();
        let el = h.element(vec![1, 1]).unwrap();
        assert!((g.norm(&el.value) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.subgroup_norm(&[1, 1]).unwrap(), 2.0);
    }

    #[test]
    fn ill_posed_subgroups() {
        assert!(matches!(
            Subgroup::new(RealLine::default(), vec![0.0, 0.0]),
            Err(Error::IllPosedSubgroup(_))
        ));
        assert!(matches!(reals(&[1.0]).norm_ball(-1.0), Err(Error::NegativeRadius(_))));
        assert!(matches!(
            reals(&[1.0, 0.0]).norm_ball(1.0),
            Err(Error::IllPosedSubgroup(_))
        ));
    }

    #[test]
    fn norm_balls() {
        let ball = reals(&[1.0]).norm_ball(2.5).unwrap();
        let mut values: Vec<f64> = ball.iter().map(|b| b.value).collect();
        values.sort_by(f64::total_cmp);
        assert_eq!(values, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);

        // S = {2,3}, λ = 4: enumeration oracle over |a|,|b| ≤ 2
        let ball = reals(&[2.0, 3.0]).norm_ball(4.0).unwrap();
        let mut oracle: Vec<(i64, f64)> = Vec::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let cost = (2 * a.abs() + 3 * b.abs()) as f64;
                if cost <= 4.0 {
                    let v = 2 * a + 3 * b;
                    match oracle.iter_mut().find(|(x, _)| *x == v) {
                        Some(e) => e.1 = e.1.min(cost),
                        None => oracle.push((v, cost)),
                    }
                }
            }
        }
        oracle.sort_by_key(|e| e.0);
        let mut got: Vec<(i64, f64)> = ball.iter().map(|b| (b.value as i64, b.norm)).collect();
        got.sort_by_key(|e| e.0);
        assert_eq!(got, oracle);
        assert_eq!(
            got,
            vec![(-4, 4.0), (-3, 3.0), (-2, 2.0), (0, 0.0), (2, 2.0), (3, 3.0), (4, 4.0)]
        );

        let zero_ball = reals(&[2.0, 3.0]).norm_ball(0.0).unwrap();
        assert_eq!(zero_ball.len(), 1);
        assert_eq!(zero_ball[0].value, 0.0);
    }

    #[test]
    fn integrality() {
        assert!(reals(&[1.0, 1.0, 1.0]).integrality_check());
        assert!(!reals(&[2f64.sqrt()]).integrality_check());
        assert!(reals(&[2.0, 3.0]).integrality_check());
    }

    #[test]
    fn represent_multiples_and_failures() {
        let h = reals(&[1.5]);
        let el = h.represent(&3.0).unwrap();
        assert_eq!(el.coords, vec![2]);
        assert!(matches!(h.represent(&1.0), Err(Error::NotRepresentable)));
    }

    #[test]
    fn axioms_hold_for_standard_groups() {
        let g = ExteriorPower::new(3, 2).unwrap();
        let samples: Vec<Multivector> = (0..12)
            .map(|i| {
                let t = i as f64;
                Multivector::from_coeffs(3, 2, vec![t.sin(), (2.0 * t).cos(), 0.3 * t - 1.0]).unwrap()
            })
            .collect();
        assert!(verify_group_axioms(&g, &samples).passed);
        assert!(verify_group_axioms(&Integers, &[-4, 0, 3, 7, -11]).passed);
    }

    #[derive(Clone, Debug, PartialEq)]
    struct BrokenNorm;

    impl CoefficientGroup for BrokenNorm {
        type Element = f64;
        fn zero(&self) -> f64 {
            0.0
        }
        fn add(&self, a: &f64, b: &f64) -> f64 {
            a + b
        }
        fn neg(&self, a: &f64) -> f64 {
            -a
        }
        fn norm(&self, _a: &f64) -> f64 {
            -1.0
        }
        fn is_zero(&self, a: &f64) -> bool {
            *a == 0.0
        }
        fn scale_int(&self, a: &f64, n: i64) -> f64 {
            a * n as f64
        }
        fn describe(&self) -> String {
            "broken".into()
        }
    }

    #[test]
    fn broken_norm_is_reported() {
        let report = verify_group_axioms(&BrokenNorm, &[1.0, 2.0]);
        assert!(!report.passed);
        assert!(report.violations.iter().any(|v| v.starts_with("positivity")));
        assert!(report.violations.iter().any(|v| v.starts_with("triangle")));
    }

    proptest! {
        #[test]
        fn subgroup_norm_dominates_ambient(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4) {
            let g = ExteriorPower::new(2, 1).unwrap();
            let gens = vec![
                Multivector::vector(&[1.0, 0.0]).unwrap(),
                Multivector::vector(&[0.6, 0.8]).unwrap(),
                Multivector::vector(&[-0.5, 1.2]).unwrap(),
            ];
            let h = Subgroup::new(g.clone(), gens).unwrap();
            let el = h.element(vec![a, b, c]).unwrap();
            let nh = h.subgroup_norm(&el.coords).unwrap();
            prop_assert!(nh + 1e-9 >= g.norm(&el.value));
            prop_assert!(nh <= h.representation_cost(&el.coords) + 1e-12);
        }

        #[test]
        fn generators_keep_their_norm(w1 in 0.1f64..5.0, w2 in 0.1f64..5.0) {
            let h = reals(&[w1, w2]);
            prop_assert!((h.subgroup_norm(&[1, 0]).unwrap() - w1).abs() <= 1e-9);
            prop_assert!((h.subgroup_norm(&[0, 1]).unwrap() - w2).abs() <= 1e-9);
        }

        #[test]
        fn balls_are_symmetric_and_monotone(w1 in 0.5f64..3.0, w2 in 0.5f64..3.0, lambda in 0.0f64..6.0) {
            let h = reals(&[w1, w2]);
            let small = h.norm_ball(lambda).unwrap();
            let large = h.norm_ball(lambda + 0.5).unwrap();
            prop_assert!(small.len() <= large.len());
            for b in &small {
                prop_assert!(small.iter().any(|c| (c.value + b.value).abs() <= 1e-9));
            }
        }
    }
}
