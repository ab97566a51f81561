use std::sync::Arc;

use polycal::{
    generate_example, minimality_certificate, BoundaryRegion, Conclusion, EmbeddedComplex, ExampleName, ExampleParams,
    PolyhedralVarifold, SolverConfig,
};

#[test]
fn tetrahedral_cone_is_a_calibrated_minimizer() {
    let ex = generate_example(ExampleName::TetrahedralCone, &ExampleParams::default()).unwrap();
    let cert = minimality_certificate(&ex.varifold, &ex.gamma, 1e-9, Some(&SolverConfig::default())).unwrap();
    assert_eq!(cert.conclusion, Conclusion::CalibratedMinimizer);
    assert!(cert.all_passed());
    let solver = cert.provenance.solver.as_ref().unwrap();
    let mass = ex.varifold.mass();
    assert!((solver.objective - mass).abs() <= 1e-5 * mass);
    assert!(cert.provenance.solver_ran);
    assert_eq!(cert.provenance.complex_hash, ex.complex.content_hash());
}

#[test]
fn plane_disk_is_a_calibrated_minimizer() {
    let ex = generate_example(ExampleName::PlaneDisk, &ExampleParams::default()).unwrap();
    let cert = minimality_certificate(&ex.varifold, &ex.gamma, 1e-9, None).unwrap();
    assert_eq!(cert.conclusion, Conclusion::CalibratedMinimizer);
    assert!(!cert.provenance.solver_ran);
}

#[test]
fn l_shape_fails_with_corner_boundary() {
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
    let cert = minimality_certificate(&v, &gamma, 1e-9, None).unwrap();
    assert_eq!(cert.conclusion, Conclusion::BoundaryNotInGamma);
    let stat = cert.check("stationarity").unwrap();
    assert!(!stat.pass);
    assert!((stat.residual - 2f64.sqrt()).abs() < 1e-12);
    let support = cert.check("boundary_supported_in_gamma").unwrap();
    assert!((support.residual - 2f64.sqrt()).abs() < 1e-12);
    assert!(cert.provenance.notes.iter().any(|n| n.contains("[0]")));
    // ⟨V⟩ itself is still calibrated; only its boundary is misplaced
    assert!(cert.check("phi_equals_mass").unwrap().pass);
}

#[test]
fn certificate_round_trips_through_json() {
    let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
    let cert = minimality_certificate(&ex.varifold, &ex.gamma, 1e-9, None).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: polycal::Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["subject", "checks", "conclusion", "provenance"] {
        assert!(value.get(key).is_some(), "{key}");
    }
}

#[test]
fn calibrated_only_if_every_check_passes() {
    for name in ExampleName::CATALOG {
        let ex = generate_example(name, &ExampleParams::default()).unwrap();
        let perturbed = ex
            .varifold
            .reweighted(|id, c| if id == 0 { 2.0 * c } else { c })
            .unwrap();
        for v in [&ex.varifold, &perturbed] {
            let cert = minimality_certificate(v, &ex.gamma, 1e-9, None).unwrap();
            if cert.conclusion == Conclusion::CalibratedMinimizer {
                assert!(cert.all_passed());
            }
        }
    }
}
