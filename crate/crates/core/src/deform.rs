//! Randomized PL deformations of a stationary varifold.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::chains::PlMap;
use crate::complex::BoundaryRegion;
use crate::error::{Error, Result};
use crate::varifolds::PolyhedralVarifold;

/// Ratios below `1 - RATIO_TOL` count as a mass decrease.
pub const RATIO_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformReport {
    pub trials: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub base_mass: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub seed: u64,
    pub magnitude: f64,
    pub movable_vertices: Vec<usize>,
    pub passed: bool,
}

/// Moves every vertex of V's support outside Γ by an independent uniform
/// sample from the ball of radius `magnitude` and compares masses.
///
/// Only vertices of the host complex move, so every competitor is a PL map
/// subordinate to K. That is a dense subclass of Lipschitz deformations,
/// not all of them.
pub fn deform_experiment(
    v: &PolyhedralVarifold,
    gamma: &BoundaryRegion,
    trials: usize,
    magnitude: f64,
    seed: u64,
) -> Result<DeformReport> {
    if !(magnitude >= 0.0) || !magnitude.is_finite() {
        return Err(Error::InvalidInput(format!(
            "magnitude must be nonnegative, got {magnitude}"
        )));
    }
    let report = v.stationarity(gamma, crate::DEFAULT_TOL)?;
    if !report.stationary {
        return Err(Error::Precondition(format!(
            "varifold is not stationary (residual {:.3e})",
            report.max_residual
        )));
    }
    let complex = v.complex();
    let n = complex.ambient_dim();
    let m = v.dim();
    let fixed = gamma.vertices(complex);
    let support: BTreeSet<usize> = v
        .weights()
        .flat_map(|(id, _)| complex.simplex(m, id).to_vec())
        .collect();
    let movable: Vec<usize> = support.difference(&fixed).copied().collect();
    let frozen: BTreeSet<usize> = (0..complex.vertices().len())
        .filter(|i| movable.binary_search(i).is_err())
        .collect();

    let base = v.mass();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut accepted, mut min_ratio, mut max_ratio) = (0, f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..trials {
        let mut images = complex.vertices().to_vec();
        for &i in &movable {
            let offset = ball_sample(&mut rng, n, magnitude);
            for (x, d) in images[i].iter_mut().zip(offset) {
                *x += d;
            }
        }
        let map = match PlMap::new(complex, images, &frozen) {
            Ok(map) => map,
            Err(Error::VertexCollision(..)) => continue,
            Err(e) => return Err(e),
        };
        let pushed = v.pushforward(&map)?;
        if !pushed.dropped.is_empty() || pushed.orientation_flips > 0 {
            continue;
        }
        let ratio = pushed.value.mass() / base;
        accepted += 1;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    if trials > 0 && accepted == 0 {
        return Err(Error::Precondition("every trial degenerated a simplex".into()));
    }
    Ok(DeformReport {
        trials,
        accepted,
        rejected: trials - accepted,
        base_mass: base,
        min_ratio,
        max_ratio,
        seed,
        magnitude,
        movable_vertices: movable,
        passed: accepted == 0 || min_ratio >= 1.0 - RATIO_TOL,
    })
}

/// Uniform sample from the closed ball of radius `r` in ℝⁿ.
fn ball_sample(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let len = crate::exterior::norm(&dir);
    let radius = r * rng.gen::<f64>().powf(1.0 / n as f64);
    if len == 0.0 {
        return vec![0.0; n];
    }
    dir.into_iter().map(|x| x * radius / len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{generate_example, ExampleName, ExampleParams};

    #[test]
    fn zero_magnitude_gives_unit_ratios() {
        let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
        let r = deform_experiment(&ex.varifold, &ex.gamma, 10, 0.0, 3).unwrap();
        assert_eq!(r.accepted, 10);
        assert_eq!(r.min_ratio, 1.0);
        assert_eq!(r.max_ratio, 1.0);
    }

    #[test]
    fn y_line_only_center_moves() {
        let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
        let r = deform_experiment(&ex.varifold, &ex.gamma, 100, 0.1, 7).unwrap();
        assert_eq!(r.movable_vertices, vec![0]);
        assert!(r.passed && r.min_ratio > 1.0);
    }

    #[test]
    fn reproducible() {
        let ex = generate_example(ExampleName::TetrahedralCone, &ExampleParams::default()).unwrap();
        let a = deform_experiment(&ex.varifold, &ex.gamma, 20, 0.05, 11).unwrap();
        let b = deform_experiment(&ex.varifold, &ex.gamma, 20, 0.05, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tetrahedral_cone_small_moves() {
        let ex = generate_example(ExampleName::TetrahedralCone, &ExampleParams::default()).unwrap();
        let r = deform_experiment(&ex.varifold, &ex.gamma, 100, 0.05, 0).unwrap();
        assert_eq!(r.accepted + r.rejected, 100);
        assert!(r.passed && r.min_ratio >= 1.0 - RATIO_TOL);
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let x = ball_sample(&mut rng, 3, 0.5);
            assert!(crate::exterior::norm(&x) <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn rejects_non_stationary() {
        use crate::complex::EmbeddedComplex;
        use std::sync::Arc;
        let k = Arc::new(
            EmbeddedComplex::build(
                2,
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                &[vec![0, 1], vec![0, 2]],
            )
            .unwrap(),
        );
        let v = PolyhedralVarifold::uniform(k.clone(), 1).unwrap();
        let gamma = BoundaryRegion::frontier(&k, 1).unwrap();
        assert!(matches!(
            deform_experiment(&v, &gamma, 5, 0.1, 0),
            Err(Error::Precondition(_))
        ));
    }
}
