//! Triangulated truncations of classical stationary cones.
//!
//! Every entry comes with Γ equal to the frontier of its top-dimensional
//! skeleton, i.e. the faces cut by the truncation.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{BoundaryRegion, EmbeddedComplex};
use crate::error::{Error, Result};
use crate::exterior::norm;
use crate::varifolds::PolyhedralVarifold;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    PlaneDisk,
    YLine,
    YTimesR,
    TetrahedralCone,
    CustomNetCone,
}

impl ExampleName {
    pub const CATALOG: [ExampleName; 4] = [
        ExampleName::PlaneDisk,
        ExampleName::YLine,
        ExampleName::YTimesR,
        ExampleName::TetrahedralCone,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PlaneDisk => "plane_disk",
            Self::YLine => "y_line",
            Self::YTimesR => "y_times_r",
            Self::TetrahedralCone => "tetrahedral_cone",
            Self::CustomNetCone => "custom_net_cone",
        }
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane_disk" => Ok(Self::PlaneDisk),
            "y_line" => Ok(Self::YLine),
            "y_times_r" => Ok(Self::YTimesR),
            "tetrahedral_cone" => Ok(Self::TetrahedralCone),
            "custom_net_cone" => Ok(Self::CustomNetCone),
            other => Err(Error::UnknownExample(other.to_string())),
        }
    }
}

/// A geodesic net on the unit sphere: ray directions and the great-circle
/// arcs joining them. Without arcs the cone is the 1-dimensional union of
/// the rays.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeodesicNet {
    pub rays: Vec<Vec<f64>>,
    #[serde(default)]
    pub arcs: Vec<[usize; 2]>,
    /// One weight per arc (per ray when there are no arcs); default 1.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExampleParams {
    pub radius: f64,
    /// Number of subdivisions along each radial direction.
    pub refinement: usize,
    pub net: Option<GeodesicNet>,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            radius: 1.0,
            refinement: 1,
            net: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: ExampleName,
    pub radius: f64,
    pub complex: Arc<EmbeddedComplex>,
    pub varifold: PolyhedralVarifold,
    pub gamma: BoundaryRegion,
}

pub fn generate_example(name: ExampleName, params: &ExampleParams) -> Result<Example> {
    if !(params.radius > 0.0) || !params.radius.is_finite() {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {}",
            params.radius
        )));
    }
    if params.refinement == 0 {
        return Err(Error::InvalidInput("refinement must be at least 1".into()));
    }
    let (r, l) = (params.radius, params.refinement);
    let (complex, dim, weights) = match name {
        ExampleName::PlaneDisk => plane_disk(r, l)?,
        ExampleName::YLine => net_cone(&y_net(), r, l)?,
        ExampleName::YTimesR => y_times_r(r, l)?,
        ExampleName::TetrahedralCone => net_cone(&tetrahedral_net(), r, l)?,
        ExampleName::CustomNetCone => {
            let net = params
                .net
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("custom_net_cone needs a geodesic net".into()))?;
            net_cone(net, r, l)?
        }
    };
    let complex = Arc::new(complex);
    let varifold = match weights {
        Some(w) => PolyhedralVarifold::from_ids(complex.clone(), dim, w)?,
        None => PolyhedralVarifold::uniform(complex.clone(), dim)?,
    };
    let gamma = BoundaryRegion::frontier(&complex, dim)?;
    Ok(Example {
        name,
        radius: r,
        complex,
        varifold,
        gamma,
    })
}

/// Three unit vectors at mutual angles of 120° in the plane.
pub fn y_net() -> GeodesicNet {
    let rays = [90.0f64, 210.0, 330.0]
        .iter()
        .map(|deg| vec![deg.to_radians().cos(), deg.to_radians().sin()])
        .collect();
    GeodesicNet {
        rays,
        ..GeodesicNet::default()
    }
}

/// The vertices of a regular tetrahedron inscribed in S² joined by all six
/// edges.
pub fn tetrahedral_net() -> GeodesicNet {
    let rays = vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ];
    let arcs = vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    GeodesicNet {
        rays,
        arcs,
        weights: None,
    }
}

type Built = (EmbeddedComplex, usize, Option<Vec<(usize, f64)>>);

/// Cone over a geodesic net, each ray cut into `layers` pieces.
fn net_cone(net: &GeodesicNet, radius: f64, layers: usize) -> Result<Built> {
    let n = net.rays.first().map(Vec::len).unwrap_or(0);
    if net.rays.is_empty() || n < 2 {
        return Err(Error::InvalidInput("a net needs rays in dimension ≥ 2".into()));
    }
    let mut vertices = vec![vec![0.0; n]];
    // ray_points[a][j] is the vertex at distance (j+1)·radius/layers on ray a
    let mut ray_points = Vec::with_capacity(net.rays.len());
    for ray in &net.rays {
        if ray.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ray.len(),
            });
        }
        let len = norm(ray);
        if !(len > 0.0) {
            return Err(Error::InvalidInput("zero ray direction".into()));
        }
        let ids = (1..=layers)
            .map(|j| {
                let t = radius * j as f64 / layers as f64 / len;
                vertices.push(ray.iter().map(|x| x * t).collect());
                vertices.len() - 1
            })
            .collect::<Vec<_>>();
        ray_points.push(ids);
    }
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    if net.arcs.is_empty() {
        for (a, pts) in ray_points.iter().enumerate() {
            let mut prev = 0;
            for &p in pts {
                simplices.push(vec![prev, p]);
                owner.push(a);
                prev = p;
            }
        }
    } else {
        for (k, &[a, b]) in net.arcs.iter().enumerate() {
            if a >= ray_points.len() || b >= ray_points.len() || a == b {
                return Err(Error::InvalidInput(format!("invalid arc [{a}, {b}]")));
            }
            let (pa, pb) = (&ray_points[a], &ray_points[b]);
            simplices.push(vec![0, pa[0], pb[0]]);
            owner.push(k);
            for j in 0..layers - 1 {
                simplices.push(vec![pa[j], pb[j], pb[j + 1]]);
                simplices.push(vec![pa[j], pb[j + 1], pa[j + 1]]);
                owner.extend([k, k]);
            }
        }
    }
    let dim = if net.arcs.is_empty() { 1 } else { 2 };
    let complex = EmbeddedComplex::build(n, vertices, &simplices)?;
    let weights = match &net.weights {
        None => None,
        Some(w) => {
            let expected = if net.arcs.is_empty() {
                net.rays.len()
            } else {
                net.arcs.len()
            };
            if w.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: w.len(),
                });
            }
            let mut sorted = Vec::with_capacity(simplices.len());
            for (s, &k) in simplices.iter().zip(&owner) {
                let (id, _) = complex.find_oriented(s)?;
                sorted.push((id, w[k]));
            }
            Some(sorted)
        }
    };
    Ok((complex, dim, weights))
}

/// A flat polygonal disk in the plane z = 0 of ℝ³.
fn plane_disk(radius: f64, rings: usize) -> Result<Built> {
    const SECTORS: usize = 8;
    let mut vertices = vec![vec![0.0, 0.0, 0.0]];
    let ring = |j: usize, i: usize| 1 + (j - 1) * SECTORS + i % SECTORS;
    for j in 1..=rings {
        let rho = radius * j as f64 / rings as f64;
        for i in 0..SECTORS {
            let theta = 2.0 * PI * i as f64 / SECTORS as f64;
            vertices.push(vec![rho * theta.cos(), rho * theta.sin(), 0.0]);
        }
    }
    let mut simplices = Vec::new();
    for i in 0..SECTORS {
        simplices.push(vec![0, ring(1, i), ring(1, i + 1)]);
        for j in 1..rings {
            let (a, b, c, d) = (ring(j, i), ring(j, i + 1), ring(j + 1, i), ring(j + 1, i + 1));
            simplices.push(vec![a, b, d]);
            simplices.push(vec![a, d, c]);
        }
    }
    Ok((EmbeddedComplex::build(3, vertices, &simplices)?, 2, None))
}

/// Three half-strips of width `radius` and height `2·radius` meeting at
/// 120° along the z axis.
fn y_times_r(radius: f64, refinement: usize) -> Result<Built> {
    let arms = y_net().rays;
    let (nt, nz) = (refinement, 2 * refinement);
    let z = |k: usize| -radius + 2.0 * radius * k as f64 / nz as f64;
    let mut vertices: Vec<Vec<f64>> = (0..=nz).map(|k| vec![0.0, 0.0, z(k)]).collect();
    let mut simplices = Vec::new();
    for u in &arms {
        // grid[t][k]; t = 0 is the shared spine
        let mut grid: Vec<Vec<usize>> = vec![(0..=nz).collect()];
        for t in 1..=nt {
            let s = radius * t as f64 / nt as f64;
            grid.push(
                (0..=nz)
                    .map(|k| {
                        vertices.push(vec![s * u[0], s * u[1], z(k)]);
                        vertices.len() - 1
                    })
                    .collect(),
            );
        }
        for t in 0..nt {
            for k in 0..nz {
                let (a, b, c, d) = (grid[t][k], grid[t + 1][k], grid[t][k + 1], grid[t + 1][k + 1]);
                simplices.push(vec![a, b, d]);
                simplices.push(vec![a, d, c]);
            }
        }
    }
    Ok((EmbeddedComplex::build(3, vertices, &simplices)?, 2, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_line_shape() {
        let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
        assert_eq!(ex.complex.count(1), 3);
        assert_eq!(ex.gamma.face_ids().len(), 3);
        assert!((ex.varifold.mass() - 3.0).abs() < 1e-15);
        for v in &ex.complex.vertices()[1..] {
            assert!((norm(v) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tetrahedral_cone_shape() {
        let ex = generate_example(ExampleName::TetrahedralCone, &ExampleParams::default()).unwrap();
        assert_eq!(ex.complex.count(2), 6);
        assert_eq!(ex.gamma.face_ids().len(), 6);
        let refined = ExampleParams {
            refinement: 3,
            ..ExampleParams::default()
        };
        let ex3 = generate_example(ExampleName::TetrahedralCone, &refined).unwrap();
        assert_eq!(ex3.complex.count(2), 6 * 5);
        assert!((ex3.varifold.mass() - ex.varifold.mass()).abs() < 1e-12);
    }

    #[test]
    fn y_times_r_shape() {
        let p = ExampleParams {
            refinement: 2,
            ..ExampleParams::default()
        };
        let ex = generate_example(ExampleName::YTimesR, &p).unwrap();
        assert_eq!(ex.complex.count(2), 3 * 2 * 4 * 2);
        // three strips of width 1 and height 2
        assert!((ex.varifold.mass() - 6.0).abs() < 1e-12);
        assert!(ex.complex.validate_geometry(1e-9).valid);
    }

    #[test]
    fn plane_disk_is_flat() {
        let ex = generate_example(ExampleName::PlaneDisk, &ExampleParams::default()).unwrap();
        assert!(ex.complex.vertices().iter().all(|v| v[2] == 0.0));
        // regular octagon of circumradius 1
        assert!((ex.varifold.mass() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parameter_errors() {
        let bad = ExampleParams {
            radius: -1.0,
            ..ExampleParams::default()
        };
        assert!(generate_example(ExampleName::YLine, &bad).is_err());
        assert!(generate_example(ExampleName::CustomNetCone, &ExampleParams::default()).is_err());
        assert!(matches!(
            "hexagon".parse::<ExampleName>(),
            Err(Error::UnknownExample(_))
        ));
    }

    #[test]
    fn weighted_custom_net() {
        let net = GeodesicNet {
            rays: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]],
            arcs: vec![],
            weights: Some(vec![1.0, 1.0, 2f64.sqrt()]),
        };
        let p = ExampleParams {
            net: Some(net),
            ..ExampleParams::default()
        };
        let ex = generate_example(ExampleName::CustomNetCone, &p).unwrap();
        let r = ex.varifold.stationarity(&ex.gamma, 1e-12).unwrap();
        assert!(r.stationary, "{}", r.max_residual);
    }
}
