use polycal_web::{certify_example, norm_ball, norm_ball_value, y_junction, y_junction_value};
use serde_json::Value;

fn ray_ends() -> Vec<[f64; 2]> {
    [90f64, 210.0, 330.0]
        .iter()
        .map(|d| [d.to_radians().cos(), d.to_radians().sin()])
        .collect()
}

#[test]
fn junction_mass_is_the_sum_of_distances() {
    for (x, y) in [(0.0, 0.0), (0.2, -0.1), (-0.3, 0.25)] {
        let v = y_junction_value(x, y).unwrap();
        let oracle: f64 = ray_ends().iter().map(|p| (p[0] - x).hypot(p[1] - y)).sum();
        assert!((v["mass"].as_f64().unwrap() - oracle).abs() < 1e-12);
        assert_eq!(v["segments"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn only_the_centered_junction_is_stationary() {
    let centered = y_junction_value(0.0, 0.0).unwrap();
    assert_eq!(centered["stationary"], true);
    assert!((centered["mass"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    let moved = y_junction_value(0.1, 0.0).unwrap();
    assert_eq!(moved["stationary"], false);
    assert!(moved["mass"].as_f64().unwrap() > 3.0);
}

#[test]
fn every_catalog_entry_certifies() {
    for name in ["plane_disk", "y_line", "y_times_r", "tetrahedral_cone"] {
        let v: Value = serde_json::from_str(&certify_example(name, 1.0, 1)).unwrap();
        assert_eq!(v["certificate"]["conclusion"], "calibrated-minimizer", "{name}");
        assert!(!v["edges"].as_array().unwrap().is_empty());
    }
}

#[test]
fn errors_are_reported_as_json() {
    for text in [
        certify_example("nope", 1.0, 1),
        norm_ball("[[1,0]", 1.0),
        norm_ball("[[1,0]]", -1.0),
    ] {
        let v: Value = serde_json::from_str(&text).unwrap();
        assert!(v["error"].is_string(), "{text}");
    }
    // dragging past the rim is a valid (if silly) competitor
    let v: Value = serde_json::from_str(&y_junction(5.0, 0.0)).unwrap();
    assert!(v.get("error").is_none());
    assert_eq!(v["stationary"], false);
}

#[test]
fn unit_square_lattice_ball_is_a_taxicab_ball() {
    for lambda in [0.0, 1.0, 2.5, 4.0] {
        let v = norm_ball_value("[[1,0],[0,1]]", lambda).unwrap();
        let r = lambda.floor() as i64;
        let oracle = (-r..=r)
            .flat_map(|a| (-r..=r).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= r)
            .count();
        assert_eq!(v["points"].as_array().unwrap().len(), oracle, "λ = {lambda}");
        assert_eq!(v["integral"], true);
    }
}
