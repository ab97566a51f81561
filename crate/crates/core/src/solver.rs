//! Complex-restricted convex programs over vector coefficient groups:
//! minimum mass with prescribed boundary, and the flat norm.
//!
//! Both reduce to `min Σ wⱼ ‖xⱼ‖ subject to (D ⊗ I_d) x = b` with a sparse
//! signed matrix `D`. The solver is over-relaxed Douglas–Rachford splitting
//! between block soft-thresholding and the exact projection onto the affine
//! constraint set; the projection uses a pseudo-inverse of `D Dᵀ`, so every
//! iterate it produces is feasible to rounding.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::complex::EmbeddedComplex;
use crate::error::{Error, Result};
use crate::exterior::norm;
use crate::groups::VectorGroup;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Absolute bound on ‖∂A − b‖.
    pub primal_tol: f64,
    /// Relative objective change between checks that counts as stagnation.
    pub obj_tol: f64,
    pub seed: u64,
    /// Douglas–Rachford relaxation in (0, 2).
    pub relaxation: f64,
    pub check_every: usize,
    /// Relative gap to a supplied lower bound that ends the solve early.
    pub gap_tol: f64,
    /// Fixed prox step; chosen from the data when absent.
    pub step: Option<f64>,
    /// Scale of a seeded random perturbation of the starting point.
    pub init_noise: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 200_000,
            primal_tol: 1e-8,
            obj_tol: 1e-10,
            seed: 0,
            relaxation: 1.8,
            check_every: 100,
            gap_tol: 1e-9,
            step: None,
            init_noise: 0.0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return Err(Error::InvalidInput(format!(
                "relaxation {} outside (0, 2)",
                self.relaxation
            )));
        }
        if self.check_every == 0 {
            return Err(Error::InvalidInput("check_every must be positive".into()));
        }
        if let Some(s) = self.step {
            if !(s > 0.0) {
                return Err(Error::InvalidInput(format!("step {s} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    IterationCap,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct SolveResult<G: VectorGroup> {
    pub chain: Chain<G>,
    pub objective: f64,
    pub primal_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    pub lower_bound: Option<f64>,
}

/// `F_K(A) = min_Q M(A + ∂Q) + M(Q)` with `R = A + ∂Q`.
#[derive(Clone, Debug)]
pub struct FlatNormResult<G: VectorGroup> {
    pub value: f64,
    pub filling: Chain<G>,
    pub remainder: Chain<G>,
    pub iterations: usize,
    pub status: SolveStatus,
}

/// Minimizes `M(A)` over m-chains on the boundary's complex subject to
/// `∂A = b`. A supplied `lower_bound` (e.g. Φ of any feasible chain) lets
/// the solve stop once the gap closes.
pub fn min_mass_fixed_boundary<G: VectorGroup>(
    boundary: &Chain<G>,
    config: &SolverConfig,
    lower_bound: Option<f64>,
) -> Result<SolveResult<G>> {
    config.validate()?;
    let complex = boundary.complex().clone();
    let group = boundary.group().clone();
    let m = boundary.dim() + 1;
    let d = group.block_dim();
    let n = complex.count(m);
    let cols: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| complex.faces(m, j).iter().map(|&(f, s)| (f, s as f64)).collect())
        .collect();
    let program = Program {
        d,
        rows: complex.count(m - 1),
        weights: (0..n).map(|j| complex.volume(m, j)).collect(),
        b: to_vector(boundary, complex.count(m - 1)),
        cols,
    };
    let out = program.solve(config, lower_bound, None);
    let chain = from_vector(&complex, m, &group, &out.x, 0..n)?;
    // measured on the stored coefficients, before any pruning of ∂A
    let primal_residual = program.residual(&to_vector(&chain, n));
    let status = match out.status {
        SolveStatus::Converged if primal_residual > config.primal_tol => SolveStatus::IterationCap,
        s => s,
    };
    Ok(SolveResult {
        objective: chain.mass(),
        chain,
        primal_residual,
        iterations: out.iterations,
        status,
        lower_bound,
    })
}

/// Complex-restricted flat norm. Without (m+1)-simplices the only
/// competitor is `Q = 0` and the value is `M(A)`.
pub fn flat_norm_solve<G: VectorGroup>(a: &Chain<G>, config: &SolverConfig) -> Result<FlatNormResult<G>> {
    config.validate()?;
    let complex = a.complex().clone();
    let group = a.group().clone();
    let m = a.dim();
    let d = group.block_dim();
    let nr = complex.count(m);
    let nq = if m < complex.dim() { complex.count(m + 1) } else { 0 };
    if nq == 0 || a.is_zero() {
        return Ok(FlatNormResult {
            value: a.mass(),
            filling: Chain::zero(complex, m + 1, group),
            remainder: a.clone(),
            iterations: 0,
            status: SolveStatus::Converged,
        });
    }
    // variables (R, Q) with R − ∂Q = A
    let mut cols: Vec<Vec<(usize, f64)>> = (0..nr).map(|j| vec![(j, 1.0)]).collect();
    cols.extend((0..nq).map(|j| complex.faces(m + 1, j).iter().map(|&(f, s)| (f, -(s as f64))).collect()));
    let mut weights: Vec<f64> = (0..nr).map(|j| complex.volume(m, j)).collect();
    weights.extend((0..nq).map(|j| complex.volume(m + 1, j)));
    let b = to_vector(a, nr);
    let mut incumbent = b.clone();
    incumbent.resize((nr + nq) * d, 0.0);
    let program = Program {
        d,
        rows: nr,
        cols,
        weights,
        b,
    };
    let out = program.solve(config, None, Some(incumbent));
    let remainder = from_vector(&complex, m, &group, &out.x[..nr * d], 0..nr)?;
    let filling = from_vector(&complex, m + 1, &group, &out.x[nr * d..], 0..nq)?;
    Ok(FlatNormResult {
        value: remainder.mass() + filling.mass(),
        filling,
        remainder,
        iterations: out.iterations,
        status: out.status,
    })
}

fn to_vector<G: VectorGroup>(chain: &Chain<G>, count: usize) -> Vec<f64> {
    let d = chain.group().block_dim();
    let mut v = vec![0.0; count * d];
    for (id, g) in chain.terms() {
        v[id * d..(id + 1) * d].copy_from_slice(&chain.group().to_block(g));
    }
    v
}

fn from_vector<G: VectorGroup>(
    complex: &Arc<EmbeddedComplex>,
    dim: usize,
    group: &G,
    x: &[f64],
    ids: std::ops::Range<usize>,
) -> Result<Chain<G>> {
    let d = group.block_dim();
    let terms: Vec<(usize, G::Element)> = ids.map(|j| (j, group.from_block(&x[j * d..(j + 1) * d]))).collect();
    Chain::from_ids(complex.clone(), dim, group.clone(), terms)
}

struct Program {
    d: usize,
    rows: usize,
    /// Column j of D as (row, entry) pairs.
    cols: Vec<Vec<(usize, f64)>>,
    weights: Vec<f64>,
    b: Vec<f64>,
}

struct Outcome {
    x: Vec<f64>,
    iterations: usize,
    status: SolveStatus,
}

impl Program {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut out = vec![0.0; self.rows * d];
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, s) in col {
                for k in 0..d {
                    out[r * d + k] += s * x[j * d + k];
                }
            }
        }
        out
    }

    fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut out = vec![0.0; self.cols.len() * d];
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, s) in col {
                for k in 0..d {
                    out[j * d + k] += s * y[r * d + k];
                }
            }
        }
        out
    }

    /// Pseudo-inverse of `D Dᵀ`.
    fn gram_pinv(&self) -> DMatrix<f64> {
        let mut g = DMatrix::<f64>::zeros(self.rows, self.rows);
        for col in &self.cols {
            for &(r1, s1) in col {
                for &(r2, s2) in col {
                    g[(r1, r2)] += s1 * s2;
                }
            }
        }
        let eig = SymmetricEigen::new(g);
        let top = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let cutoff = top * 1e-12 * self.rows.max(1) as f64;
        let inv = eig.eigenvalues.map(|l| if l > cutoff { 1.0 / l } else { 0.0 });
        &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose()
    }

    fn project(&self, z: &[f64], pinv: &DMatrix<f64>) -> Vec<f64> {
        if self.rows == 0 {
            return z.to_vec();
        }
        let r: Vec<f64> = self.apply(z).iter().zip(&self.b).map(|(a, b)| a - b).collect();
        let y = pinv * DMatrix::from_row_slice(self.rows, self.d, &r);
        let mut flat = vec![0.0; self.rows * self.d];
        for i in 0..self.rows {
            for k in 0..self.d {
                flat[i * self.d + k] = y[(i, k)];
            }
        }
        let correction = self.apply_t(&flat);
        z.iter().zip(correction).map(|(a, c)| a - c).collect()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(j, w)| w * norm(&x[j * self.d..(j + 1) * self.d]))
            .sum()
    }

    fn residual(&self, x: &[f64]) -> f64 {
        let r = self.apply(x);
        r.iter().zip(&self.b).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    /// Block soft-thresholding: the prox of `γ Σ wⱼ ‖xⱼ‖`.
    fn shrink(&self, v: &[f64], gamma: f64) -> Vec<f64> {
        let d = self.d;
        let mut out = vec![0.0; v.len()];
        for (j, w) in self.weights.iter().enumerate() {
            let block = &v[j * d..(j + 1) * d];
            let len = norm(block);
            let t = gamma * w;
            if len > t {
                let scale = 1.0 - t / len;
                for k in 0..d {
                    out[j * d + k] = scale * block[k];
                }
            }
        }
        out
    }

    fn solve(&self, cfg: &SolverConfig, lower_bound: Option<f64>, incumbent: Option<Vec<f64>>) -> Outcome {
        let n = self.cols.len() * self.d;
        let pinv = self.gram_pinv();
        let x0 = self.project(&vec![0.0; n], &pinv);
        let b_norm = norm(&self.b);
        if self.residual(&x0) > cfg.primal_tol.max(1e-10 * b_norm) {
            return Outcome {
                x: x0,
                iterations: 0,
                status: SolveStatus::Infeasible,
            };
        }
        let blocks = x0
            .chunks(self.d.max(1))
            .map(norm)
            .filter(|&l| l > 0.0)
            .collect::<Vec<_>>();
        if blocks.is_empty() {
            return Outcome {
                x: x0,
                iterations: 0,
                status: SolveStatus::Converged,
            };
        }
        let gamma = cfg.step.unwrap_or_else(|| {
            let mean_block = blocks.iter().sum::<f64>() / blocks.len() as f64;
            let mean_weight = self.weights.iter().sum::<f64>() / self.weights.len() as f64;
            mean_block / mean_weight
        });

        let mut z = x0.clone();
        if cfg.init_noise > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for v in z.iter_mut() {
                let e: f64 = StandardNormal.sample(&mut rng);
                *v += cfg.init_noise * e;
            }
        }
        let (mut best, mut best_obj) = (x0.clone(), self.objective(&x0));
        if let Some(inc) = incumbent {
            let f = self.objective(&inc);
            if f < best_obj {
                best_obj = f;
                best = inc;
            }
        }
        let mut last_check = f64::INFINITY;
        for it in 1..=cfg.max_iter {
            let x = self.project(&z, &pinv);
            let reflected: Vec<f64> = x.iter().zip(&z).map(|(a, b)| 2.0 * a - b).collect();
            let y = self.shrink(&reflected, gamma);
            let mut step_sq = 0.0;
            for i in 0..n {
                let delta = y[i] - x[i];
                step_sq += delta * delta;
                z[i] += cfg.relaxation * delta;
            }
            let f = self.objective(&x);
            if f < best_obj {
                best_obj = f;
                best.copy_from_slice(&x);
            }
            if it % cfg.check_every != 0 {
                continue;
            }
            let scale = best_obj.abs().max(1.0);
            let gap_closed = lower_bound.is_some_and(|lb| best_obj - lb <= cfg.gap_tol * lb.abs().max(1.0));
            let stalled = (last_check - best_obj).abs() <= cfg.obj_tol * scale
                && step_sq.sqrt() <= cfg.primal_tol * norm(&x).max(1.0);
            if gap_closed || stalled {
                return Outcome {
                    x: best,
                    iterations: it,
                    status: SolveStatus::Converged,
                };
            }
            last_check = best_obj;
        }
        Outcome {
            x: best,
            iterations: cfg.max_iter,
            status: SolveStatus::IterationCap,
        }
    }
}
