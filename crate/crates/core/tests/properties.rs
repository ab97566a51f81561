use std::sync::Arc;

use polycal::chains::PlMap;
use polycal::varifolds::conormal;
use polycal::{
    flat_norm_solve, generate_example, min_mass_fixed_boundary, phi, Chain, EmbeddedComplex, ExampleName,
    ExampleParams, ExteriorPower, Multivector, OrientedSimplex, PolyhedralVarifold, SolverConfig, SubdivisionRule,
};
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn catalog() -> Vec<polycal::Example> {
    ExampleName::CATALOG
        .iter()
        .map(|&n| generate_example(n, &ExampleParams::default()).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chainify_preserves_mass(which in 0usize..4, weights in prop::collection::vec(0.01f64..10.0, 64)) {
        let ex = &catalog()[which];
        let v = ex.varifold.reweighted(|id, _| weights[id % weights.len()]).unwrap();
        let a = v.chainify().unwrap();
        prop_assert!((a.mass() - v.mass()).abs() <= 1e-12 * v.mass());
        for (id, g) in a.terms() {
            let eta = ex.complex.orientation(v.dim(), id).unwrap();
            prop_assert!(g.sub(&eta.scale(v.weight(id))).unwrap().norm() <= 1e-12 * v.weight(id).max(1.0));
        }
    }

    #[test]
    fn conormal_is_unit_tangent_and_orthogonal(
        pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 3..=4),
        opposite in 0usize..4,
    ) {
        let s = OrientedSimplex::new(pts.clone()).unwrap();
        prop_assume!(!s.is_degenerate(1e-3));
        let opposite = opposite % pts.len();
        let nu = conormal(&s, opposite).unwrap();
        prop_assert!((dot(&nu, &nu).sqrt() - 1.0).abs() <= 1e-12);
        let face: Vec<&Vec<f64>> = pts.iter().enumerate().filter(|&(i, _)| i != opposite).map(|(_, p)| p).collect();
        for p in &face[1..] {
            let e: Vec<f64> = p.iter().zip(face[0]).map(|(a, b)| a - b).collect();
            prop_assert!(dot(&nu, &e).abs() <= 1e-12 * dot(&e, &e).sqrt().max(1.0));
        }
        // ν lies in the span of σ: ν ∧ η(σ) = 0
        let wedge = Multivector::vector(&nu).unwrap().wedge(&s.edge_wedge()).unwrap();
        prop_assert!(wedge.norm() <= 1e-12 * s.edge_wedge().norm().max(1.0));
        // and points away from the opposite vertex
        let to_opp: Vec<f64> = pts[opposite].iter().zip(face[0]).map(|(a, b)| a - b).collect();
        prop_assert!(dot(&nu, &to_opp) < 0.0);
    }

    #[test]
    fn phi_is_orientation_invariant(c in prop::collection::vec(-3.0f64..3.0, 3)) {
        let k = Arc::new(EmbeddedComplex::build(
            3,
            vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.2, 0.0], vec![0.1, 1.0, 0.3]],
            &[vec![0, 1, 2]],
        ).unwrap());
        let g = ExteriorPower::new(3, 2).unwrap();
        let m = Multivector::from_coeffs(3, 2, c).unwrap();
        let direct = Chain::new(k.clone(), 2, g.clone(), [(vec![0, 1, 2], m.clone())]).unwrap();
        let reversed = Chain::new(k, 2, g, [(vec![1, 0, 2], m.scale(-1.0))]).unwrap();
        prop_assert!((phi(&direct).unwrap() - phi(&reversed).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn varifold_sum_matches_chain_sum(a in 0.1f64..5.0, b in 0.1f64..5.0) {
        let ex = generate_example(ExampleName::YTimesR, &ExampleParams::default()).unwrap();
        let v = ex.varifold.reweighted(|_, c| c * a).unwrap();
        let w = ex.varifold.reweighted(|id, c| c * b * (1.0 + (id % 3) as f64)).unwrap();
        let lhs = v.add(&w).unwrap().chainify().unwrap();
        let rhs = v.chainify().unwrap().combine(&w.chainify().unwrap(), 1).unwrap();
        prop_assert!((lhs.combine(&rhs, -1).unwrap().mass()) <= 1e-12 * lhs.mass());
    }
}

#[test]
fn moved_y_center_gains_length() {
    let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
    let mut images = ex.complex.vertices().to_vec();
    images[0] = vec![0.1, 0.0];
    let frozen = ex.gamma.vertices(&ex.complex);
    let map = PlMap::new(&ex.complex, images.clone(), &frozen).unwrap();
    let pushed = ex.varifold.pushforward(&map).unwrap();
    let oracle: f64 = images[1..]
        .iter()
        .map(|p| ((p[0] - 0.1).powi(2) + p[1].powi(2)).sqrt())
        .sum();
    assert!((pushed.value.mass() - oracle).abs() < 1e-12);
    assert!(pushed.value.mass() > 3.0);
    // injective map: chain and varifold pushforwards agree in mass
    let chain = ex.varifold.chainify().unwrap().pushforward(&map).unwrap();
    assert!((chain.value.mass() - pushed.value.mass()).abs() < 1e-12);
}

#[test]
fn rigid_rotation_moves_frozen_vertices() {
    let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
    let images = ex.complex.vertices().iter().map(|p| vec![-p[1], p[0]]).collect();
    let frozen = ex.gamma.vertices(&ex.complex);
    assert!(matches!(
        PlMap::new(&ex.complex, images, &frozen),
        Err(polycal::Error::FrozenVertexMoved(_))
    ));
}

#[test]
fn identity_pushforward_keeps_mass() {
    for ex in catalog() {
        let pushed = ex.varifold.pushforward(&PlMap::identity(&ex.complex)).unwrap();
        assert_eq!(pushed.value.mass(), ex.varifold.mass());
        assert!(pushed.dropped.is_empty());
    }
}

fn square() -> Arc<EmbeddedComplex> {
    Arc::new(
        EmbeddedComplex::build(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
            &[vec![0, 1, 2], vec![0, 2, 3]],
        )
        .unwrap(),
    )
}

#[test]
fn flat_norm_does_not_increase_under_refinement() {
    let k = square();
    let g = ExteriorPower::new(2, 1).unwrap();
    let a = Chain::new(
        k.clone(),
        1,
        g,
        [
            (vec![0, 1], Multivector::vector(&[1.0, 0.0]).unwrap()),
            (vec![1, 2], Multivector::vector(&[0.0, 1.0]).unwrap()),
            (vec![2, 3], Multivector::vector(&[-0.5, 0.0]).unwrap()),
        ],
    )
    .unwrap();
    let cfg = SolverConfig::default();
    let coarse = flat_norm_solve(&a, &cfg).unwrap();
    let (fine, corr) = k.subdivide(&SubdivisionRule::Barycentric).unwrap();
    let fine_a = a.transport(&Arc::new(fine), &corr).unwrap();
    let refined = flat_norm_solve(&fine_a, &cfg).unwrap();
    assert!(
        refined.value <= coarse.value + 1e-8,
        "{} > {}",
        refined.value,
        coarse.value
    );
    assert!(coarse.value <= a.mass() + 1e-12);
}

#[test]
fn solver_is_deterministic() {
    let ex = generate_example(ExampleName::TetrahedralCone, &ExampleParams::default()).unwrap();
    let (fine, corr) = ex.complex.subdivide(&SubdivisionRule::Barycentric).unwrap();
    let a = ex
        .varifold
        .transport(&Arc::new(fine), &corr)
        .unwrap()
        .chainify()
        .unwrap();
    let b = a.boundary().unwrap();
    let cfg = SolverConfig {
        init_noise: 1e-3,
        seed: 9,
        ..SolverConfig::default()
    };
    let r1 = min_mass_fixed_boundary(&b, &cfg, None).unwrap();
    let r2 = min_mass_fixed_boundary(&b, &cfg, None).unwrap();
    assert_eq!(r1.objective.to_bits(), r2.objective.to_bits());
    assert_eq!(r1.iterations, r2.iterations);
}

#[test]
fn solver_objective_respects_calibration_bound() {
    let ex = generate_example(ExampleName::YLine, &ExampleParams::default()).unwrap();
    let v: PolyhedralVarifold = ex.varifold.clone();
    let a = v.chainify().unwrap();
    let res = min_mass_fixed_boundary(&a.boundary().unwrap(), &SolverConfig::default(), None).unwrap();
    assert!(res.objective >= phi(&a).unwrap() - 1e-8);
    assert!(res.primal_residual <= 1e-8);
}
