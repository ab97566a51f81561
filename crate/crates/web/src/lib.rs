//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page never has to catch.

use std::collections::BTreeSet;

use polycal::chains::PlMap;
use polycal::{
    generate_example, minimality_certificate, BoundaryRegion, ExampleName, ExampleParams, ExteriorPower, Multivector,
    Subgroup,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Drag the junction of the three-ray cone in the unit disk to `(x, y)`.
#[wasm_bindgen]
pub fn y_junction(x: f64, y: f64) -> String {
    respond(y_junction_value(x, y))
}

pub fn y_junction_value(x: f64, y: f64) -> Result<Value, String> {
    let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).map_err(err)?;
    let k = &ex.complex;
    let frozen = ex.gamma.vertices(k);
    let images = k
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, p)| if frozen.contains(&i) { p.clone() } else { vec![x, y] })
        .collect();
    let map = PlMap::new(k, images, &frozen).map_err(err)?;
    let pushed = ex.varifold.pushforward(&map).map_err(err)?;
    let v = pushed.value;
    let gamma = BoundaryRegion::frontier(v.complex(), 1).map_err(err)?;
    let report = v.stationarity(&gamma, polycal::DEFAULT_TOL).map_err(err)?;
    let moved = v.complex();
    let segments: Vec<[f64; 4]> = (0..moved.count(1))
        .map(|id| {
            let s = moved.simplex(1, id);
            let (a, b) = (&moved.vertices()[s[0]], &moved.vertices()[s[1]]);
            [a[0], a[1], b[0], b[1]]
        })
        .collect();
    Ok(json!({
        "mass": v.mass(),
        "base_mass": ex.varifold.mass(),
        "stationary": report.stationary,
        "residual": report.max_residual,
        "dropped": pushed.dropped.len(),
        "segments": segments,
    }))
}

/// Certificate for a catalog entry, plus its edges for a wireframe.
#[wasm_bindgen]
pub fn certify_example(name: &str, radius: f64, refinement: usize) -> String {
    respond(certify_example_value(name, radius, refinement))
}

pub fn certify_example_value(name: &str, radius: f64, refinement: usize) -> Result<Value, String> {
    let name: ExampleName = name.parse().map_err(err)?;
    let params = ExampleParams {
        radius,
        refinement,
        net: None,
    };
    let ex = generate_example(name, &params).map_err(err)?;
    let cert = minimality_certificate(&ex.varifold, &ex.gamma, polycal::DEFAULT_TOL, None).map_err(err)?;
    let k = &ex.complex;
    let gamma: BTreeSet<Vec<usize>> = ex.gamma.tuples(k).into_iter().collect();
    let edges: Vec<Value> = (0..k.count(1))
        .map(|id| {
            let s = k.simplex(1, id);
            json!({ "ends": [k.vertices()[s[0]], k.vertices()[s[1]]], "gamma": gamma.contains(s) })
        })
        .collect();
    Ok(json!({
        "ambient_dim": k.ambient_dim(),
        "mass": ex.varifold.mass(),
        "certificate": cert,
        "edges": edges,
    }))
}

/// Elements of the lattice spanned by `generators` (a JSON list of planar
/// vectors) whose cheapest integer representation costs at most `lambda`.
#[wasm_bindgen]
pub fn norm_ball(generators: &str, lambda: f64) -> String {
    respond(norm_ball_value(generators, lambda))
}

pub fn norm_ball_value(generators: &str, lambda: f64) -> Result<Value, String> {
    let raw: Vec<[f64; 2]> = serde_json::from_str(generators).map_err(err)?;
    let gens = raw
        .iter()
        .map(|g| Multivector::from_coeffs(2, 1, g.to_vec()))
        .collect::<polycal::Result<Vec<_>>>()
        .map_err(err)?;
    let h = Subgroup::new(ExteriorPower::new(2, 1).map_err(err)?, gens).map_err(err)?;
    let ball = h.norm_ball(lambda).map_err(err)?;
    let points: Vec<Value> = ball
        .iter()
        .map(|b| json!({ "point": b.value.coeffs(), "coords": b.coords, "norm": b.norm }))
        .collect();
    Ok(json!({
        "generator_norms": h.generator_norms(),
        "integral": h.integrality_check(),
        "points": points,
    }))
}
