//! The constant calibration `Φ(Σ gᵢ[σᵢ]) = Σ ⟨gᵢ, η(σᵢ)⟩ Hᵐ(σᵢ)` and the
//! certificates built on it.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::complex::{BoundaryRegion, EmbeddedComplex, SubdivisionRule};
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::groups::{CoefficientGroup, ExteriorPower};
use crate::solver::{flat_norm_solve, min_mass_fixed_boundary, SolveStatus, SolverConfig};
use crate::varifolds::PolyhedralVarifold;

pub const COMPETITOR_CLASS: &str =
    "all polyhedral chains over Λ_m ℝ^N with the same boundary (ℝ^N is homologically trivial)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    #[serde(rename = "calibrated-minimizer")]
    CalibratedMinimizer,
    #[serde(rename = "not-calibrated")]
    NotCalibrated,
    #[serde(rename = "boundary-not-in-Γ")]
    BoundaryNotInGamma,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tol: f64,
}

impl Check {
    fn new(name: &str, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            pass: residual <= tol,
            residual,
            tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub complex_hash: String,
    pub group: String,
    pub tolerances: BTreeMap<String, f64>,
    pub solver_ran: bool,
    pub solver: Option<SolverSummary>,
    pub competitor_class: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub refinement: String,
    pub objective: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub subject: String,
    pub checks: Vec<Check>,
    pub conclusion: Conclusion,
    pub provenance: Provenance,
}

impl Certificate {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn expect_top_grade(a: &Chain<ExteriorPower>) -> Result<()> {
    let g = a.group();
    if g.grade != a.dim() || g.ambient_dim != a.complex().ambient_dim() {
        return Err(Error::GroupMismatch(format!(
            "Φ needs Λ_{}ℝ^{} coefficients, found {}",
            a.dim(),
            a.complex().ambient_dim(),
            g.describe()
        )));
    }
    Ok(())
}

pub fn phi(a: &Chain<ExteriorPower>) -> Result<f64> {
    expect_top_grade(a)?;
    let k = a.complex();
    let mut total = 0.0;
    for (id, g) in a.terms() {
        total += g.inner(&k.orientation(a.dim(), id)?)? * k.volume(a.dim(), id);
    }
    Ok(total)
}

/// Checks `Φ(A) ≤ M(A)`, `Φ(A) = M(A)` and per-simplex alignment
/// `g_σ = |g_σ| η(σ)`.
pub fn certify_calibrated(a: &Chain<ExteriorPower>, tol: f64) -> Result<Certificate> {
    let checks = calibration_checks(a, tol)?;
    let conclusion = if checks.iter().all(|c| c.pass) {
        Conclusion::CalibratedMinimizer
    } else {
        Conclusion::NotCalibrated
    };
    Ok(Certificate {
        subject: format!("{}-chain with {} terms", a.dim(), a.len()),
        checks,
        conclusion,
        provenance: provenance(a.complex(), a.group(), &[("tol", tol)]),
    })
}

fn calibration_checks(a: &Chain<ExteriorPower>, tol: f64) -> Result<Vec<Check>> {
    let value = phi(a)?;
    let mass = a.mass();
    let scale = mass.max(1.0);
    let mut misalignment: f64 = 0.0;
    for (id, g) in a.terms() {
        let eta = a.complex().orientation(a.dim(), id)?;
        let n = g.norm();
        misalignment = misalignment.max(g.sub(&eta.scale(n))?.norm() / n.max(1.0));
    }
    Ok(vec![
        Check::new("phi_le_mass", (value - mass).max(0.0) / scale, tol),
        Check::new("phi_equals_mass", (value - mass).abs() / scale, tol),
        Check::new("coefficients_aligned", misalignment, tol),
    ])
}

fn provenance<G: CoefficientGroup>(complex: &EmbeddedComplex, group: &G, tolerances: &[(&str, f64)]) -> Provenance {
    Provenance {
        complex_hash: complex.content_hash(),
        group: group.describe(),
        tolerances: tolerances.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        solver_ran: false,
        solver: None,
        competitor_class: COMPETITOR_CLASS.into(),
        notes: Vec::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesReport {
    pub dimension: usize,
    pub trials: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
    pub seed: u64,
}

/// `Φ(∂Q) = 0` for random (m+1)-chains `Q` over `Λ_m ℝᴺ`, measured as
/// `|Φ(∂Q)| / (1 + M(Q))`.
pub fn check_stokes(
    complex: &std::sync::Arc<EmbeddedComplex>,
    m: usize,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<StokesReport> {
    let count = if m < complex.dim() { complex.count(m + 1) } else { 0 };
    if count == 0 {
        return Err(Error::NoSimplices(m + 1));
    }
    let group = ExteriorPower::new(complex.ambient_dim(), m)?;
    let d = crate::exterior::binomial(complex.ambient_dim(), m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let terms = (0..count)
            .map(|id| {
                let c = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                Multivector::from_coeffs(complex.ambient_dim(), m, c).map(|g| (id, g))
            })
            .collect::<Result<Vec<_>>>()?;
        let q = Chain::from_ids(complex.clone(), m + 1, group.clone(), terms)?;
        let residual = phi(&q.boundary()?)?.abs() / (1.0 + q.mass());
        worst = worst.max(residual);
    }
    Ok(StokesReport {
        dimension: m,
        trials,
        max_residual: worst,
        tol,
        passed: worst <= tol,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatBoundReport {
    pub phi: f64,
    /// Complex-restricted flat norm, an upper bound for the true one.
    pub flat: f64,
    pub mass: f64,
    pub phi_le_flat: bool,
    pub flat_le_mass: bool,
    pub status: SolveStatus,
    pub iterations: usize,
    pub tol: f64,
}

/// `Φ(A) ≤ F_K(A) ≤ M(A)`.
pub fn phi_flat_bound(a: &Chain<ExteriorPower>, config: &SolverConfig, tol: f64) -> Result<FlatBoundReport> {
    let value = phi(a)?;
    let mass = a.mass();
    let flat = flat_norm_solve(a, config)?;
    Ok(FlatBoundReport {
        phi: value,
        flat: flat.value,
        mass,
        phi_le_flat: value <= flat.value + tol,
        flat_le_mass: flat.value <= mass + tol,
        status: flat.status,
        iterations: flat.iterations,
        tol,
    })
}

/// Stationarity, boundary support, calibration and optionally a solver
/// cross-check on one barycentric refinement.
pub fn minimality_certificate(
    v: &PolyhedralVarifold,
    gamma: &BoundaryRegion,
    tol: f64,
    solver: Option<&SolverConfig>,
) -> Result<Certificate> {
    let complex = v.complex();
    let m = v.dim();
    let chain = v.chainify()?;
    let mut prov = provenance(complex, chain.group(), &[("tol", tol)]);

    let report = v.stationarity(gamma, tol)?;
    let mut stationarity = Check::new("stationarity", report.max_residual, tol);
    stationarity.pass = report.stationary;

    let boundary = chain.boundary()?;
    let mut off_gamma: f64 = 0.0;
    for (id, g) in boundary.terms() {
        if !gamma.contains(id) {
            let n = g.norm();
            if n > tol {
                prov.notes.push(format!(
                    "boundary coefficient of norm {n:.6e} on face {:?}",
                    complex.simplex(m - 1, id)
                ));
            }
            off_gamma = off_gamma.max(n);
        }
    }
    let support = Check::new("boundary_supported_in_gamma", off_gamma, tol);

    let mut checks = vec![stationarity, support];
    checks.extend(calibration_checks(&chain, tol)?);

    let mut solver_ok = true;
    if let Some(cfg) = solver {
        let (refined, corr) = complex.subdivide(&SubdivisionRule::Barycentric)?;
        let refined = std::sync::Arc::new(refined);
        let fine = chain.transport(&refined, &corr)?;
        let lower = phi(&fine)?;
        let res = min_mass_fixed_boundary(&fine.boundary()?, cfg, Some(lower))?;
        let mass = chain.mass();
        checks.push(Check::new(
            "solver_cross_check",
            (mass - res.objective).max(0.0) / mass.max(1.0),
            tol,
        ));
        solver_ok = res.status == SolveStatus::Converged;
        if !solver_ok {
            prov.notes.push(format!("solver stopped with status {:?}", res.status));
        }
        prov.solver_ran = true;
        prov.tolerances.insert("solver_primal_tol".into(), cfg.primal_tol);
        prov.tolerances.insert("solver_obj_tol".into(), cfg.obj_tol);
        prov.solver = Some(SolverSummary {
            refinement: "barycentric".into(),
            objective: res.objective,
            lower_bound: lower,
            iterations: res.iterations,
            status: res.status,
            seed: cfg.seed,
        });
    }

    let passed = |name: &str| checks.iter().find(|c| c.name == name).is_some_and(|c| c.pass);
    let (stat, supp) = (passed("stationarity"), passed("boundary_supported_in_gamma"));
    let calibrated = ["phi_le_mass", "phi_equals_mass", "coefficients_aligned"]
        .iter()
        .all(|n| passed(n));
    let conclusion = if stat != supp {
        prov.notes.push("stationarity and boundary support disagree".into());
        Conclusion::Inconclusive
    } else if !stat {
        Conclusion::BoundaryNotInGamma
    } else if !calibrated {
        Conclusion::NotCalibrated
    } else if solver.is_some() && !(solver_ok && passed("solver_cross_check")) {
        Conclusion::Inconclusive
    } else {
        Conclusion::CalibratedMinimizer
    };
    Ok(Certificate {
        subject: format!("varifold of dimension {m} with {} weighted simplices", v.len()),
        checks,
        conclusion,
        provenance: prov,
    })
}
