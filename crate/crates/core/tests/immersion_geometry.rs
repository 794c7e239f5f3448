//! First/second fundamental data of the analytic families against frozen
//! oracles: exact volumes, minimality of the known minimal Legendrians, the
//! Clifford-torus metric and scalar second fundamental form, closure
//! behaviour of the Heisenberg lifts, and the deformation generator.

use lmcf_core::ambient::{ModelKind, SasakianModel};
use lmcf_core::fft::GridShape;
use lmcf_core::immersion::{
    build_immersion, legendrian_deform, project_legendrian, DiscreteLegendrian, FamilySpec,
    PotentialSpec,
};
use std::f64::consts::TAU;

fn great_circle(n: usize) -> DiscreteLegendrian {
    let model = SasakianModel::new(ModelKind::SphereS3);
    build_immersion(
        &model,
        &FamilySpec::named("great_circle"),
        GridShape::Curve { n },
        None,
    )
    .unwrap()
}

fn hyperbolic_circle(n: usize) -> DiscreteLegendrian {
    let model = SasakianModel::new(ModelKind::HyperbolicCylinder3);
    build_immersion(
        &model,
        &FamilySpec::named("geodesic_lift"),
        GridShape::Curve { n },
        None,
    )
    .unwrap()
}

fn clifford(n1: usize, n2: usize) -> DiscreteLegendrian {
    let model = SasakianModel::new(ModelKind::SphereS5);
    build_immersion(
        &model,
        &FamilySpec::named("clifford_torus"),
        GridShape::Torus { n1, n2 },
        None,
    )
    .unwrap()
}

#[test]
fn great_circle_is_minimal_unit_speed() {
    let l = great_circle(256);
    assert!(l.first.max_leg_residual < 1e-12, "leg residual {}", l.first.max_leg_residual);
    assert!((l.first.vol - TAU).abs() < 1e-10, "vol {}", l.first.vol);
    assert!(l.second.max_h < 1e-8, "max H {}", l.second.max_h);
    // unit speed: g_11 = 1
    for node in 0..l.node_count() {
        assert!((l.first.metric[node] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn hyperbolic_minimal_circle() {
    let l = hyperbolic_circle(256);
    assert!(l.first.max_leg_residual < 1e-13);
    assert!((l.first.vol - TAU).abs() < 1e-12);
    assert!(l.second.max_h < 1e-8);
    for node in 0..l.node_count() {
        assert!((l.first.metric[node] - 1.0).abs() < 1e-14);
    }
}

#[test]
fn clifford_torus_metric_and_h() {
    let l = clifford(32, 32);
    assert!(l.first.max_leg_residual < 1e-10);
    assert!(l.second.max_h < 1e-6, "max H {}", l.second.max_h);
    // flat metric [[2/3,1/3],[1/3,2/3]]
    for node in 0..l.node_count() {
        let g = &l.first.metric[node * 4..(node + 1) * 4];
        assert!((g[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!((g[1] - 1.0 / 3.0).abs() < 1e-10);
        assert!((g[3] - 2.0 / 3.0).abs() < 1e-10);
    }
    // h_{111} = 0, h_{112} = 1/3 (and total symmetry)
    for node in [0, 17, 700] {
        let h = |i: usize, j: usize, k: usize| l.second.h[node * 8 + (i * 2 + j) * 2 + k];
        assert!(h(0, 0, 0).abs() < 1e-9, "h111 = {}", h(0, 0, 0));
        assert!((h(0, 0, 1) - 1.0 / 3.0).abs() < 1e-9, "h112 = {}", h(0, 0, 1));
        assert!((h(0, 1, 0) - 1.0 / 3.0).abs() < 1e-9);
        assert!((h(1, 1, 0) - 1.0 / 3.0).abs() < 1e-9);
        assert!(h(1, 1, 1).abs() < 1e-9);
    }
    assert!(l.second.h_sym_residual < 1e-9);
    assert!(l.second.lambda_a_residual < 1e-9);
    // volume = 4 pi^2 / sqrt(3)
    let expect = TAU * TAU / 3.0f64.sqrt();
    assert!((l.first.vol - expect).abs() < 1e-9);
}

#[test]
fn clifford_volume_is_resolution_converged() {
    let v32 = clifford(32, 32).first.vol;
    let v64 = clifford(64, 64).first.vol;
    assert!((v32 - v64).abs() < 1e-8);
}

#[test]
fn lemniscate_lift_closes_exactly() {
    let model = SasakianModel::new(ModelKind::HeisenbergR3);
    let l = build_immersion(
        &model,
        &FamilySpec::named("lemniscate_lift"),
        GridShape::Curve { n: 256 },
        None,
    )
    .unwrap();
    assert!(l.first.max_leg_residual < 1e-10, "leg {}", l.first.max_leg_residual);
    // the symmetric lemniscate bounds zero signed area, so z is periodic;
    // an immersed figure-eight lift is not minimal
    assert!(l.second.max_h > 0.1);
    assert!(l.second.h_sym_residual < 1e-8);
}

#[test]
fn offset_geodesic_lift_is_rejected() {
    let model = SasakianModel::new(ModelKind::HyperbolicCylinder3);
    let err = build_immersion(
        &model,
        &FamilySpec {
            name: "geodesic_lift".into(),
            amplitude: None,
            rho0: Some(0.3),
            wobble: None,
        },
        GridShape::Curve { n: 64 },
        None,
    )
    .unwrap_err();
    assert!(matches!(err, lmcf_core::Error::NotClosable { .. }), "{err}");
}

#[test]
fn resolution_gate() {
    let model = SasakianModel::new(ModelKind::SphereS3);
    let err = build_immersion(
        &model,
        &FamilySpec::named("great_circle"),
        GridShape::Curve { n: 8 },
        None,
    )
    .unwrap_err();
    assert!(matches!(err, lmcf_core::Error::ResolutionTooLow { .. }));
}

#[test]
fn winding_one_loop_total_mean_curvature() {
    // the closed zero-area loop with rotation index one: the cycle integral
    // of H equals minus the total Euclidean turning of the projection,
    // which is 2 pi by construction; oracle by direct quadrature of the
    // projected curvature
    let model = SasakianModel::new(ModelKind::HeisenbergR3);
    let n = 512;
    let l = build_immersion(
        &model,
        &FamilySpec::named("winding_one_loop"),
        GridShape::Curve { n },
        None,
    )
    .unwrap();
    assert!(l.first.max_leg_residual < 1e-10);
    let cycle: f64 =
        l.second.mean_form.iter().sum::<f64>() * TAU / n as f64;

    // quadrature oracle: total turning of (x(theta), y(theta))
    let dx = l.position_derivative(0);
    let d = l.chart_dim();
    let fft = lmcf_core::fft::GridFft::new(l.shape);
    let xs: Vec<f64> = (0..n).map(|j| l.positions[j * d]).collect();
    let ys: Vec<f64> = (0..n).map(|j| l.positions[j * d + 1]).collect();
    let xpp = fft.deriv_order(&xs, 0, 2);
    let ypp = fft.deriv_order(&ys, 0, 2);
    let mut turning = 0.0;
    for j in 0..n {
        let xp = dx[j * d];
        let yp = dx[j * d + 1];
        let v2 = xp * xp + yp * yp;
        turning += (xp * ypp[j] - yp * xpp[j]) / v2 * TAU / n as f64;
    }
    assert!((turning - TAU).abs() < 1e-8, "turning {turning}");
    assert!((cycle + turning).abs() < 1e-6, "cycle {cycle} vs -turning {}", -turning);
}

#[test]
fn spectral_convergence_of_mean_curvature() {
    // a reparametrised great circle has full Fourier content; the measured
    // max |H| is pure discretisation error and must drop by >= 10x per
    // doubling until the floor
    let model = SasakianModel::new(ModelKind::SphereS3);
    let spec = FamilySpec::with_wobble("great_circle", 0.35);
    let errs: Vec<f64> = [24usize, 48, 96]
        .iter()
        .map(|&n| {
            build_immersion(&model, &spec, GridShape::Curve { n }, None)
                .unwrap()
                .second
                .max_h
        })
        .collect();
    for w in errs.windows(2) {
        assert!(
            w[1] < w[0] / 10.0 || w[1] < 1e-10,
            "insufficient spectral decay: {:?}",
            errs
        );
    }
}

#[test]
fn deform_identity_at_zero_amplitude() {
    let l = great_circle(64);
    let f = PotentialSpec::named("cos_u").evaluate(l.shape).unwrap();
    let l2 = legendrian_deform(&l, &f, 0.0).unwrap();
    assert_eq!(l.positions, l2.positions);
}

#[test]
fn deform_volume_second_variation_signs() {
    // K+2 = 4 on S^3 and lambda_1 = 1 for the great circle: the circle is
    // Legendrian unstable and f = cos theta is a destabilising direction,
    // so the volume drops at second order with d2 Vol/ds2 = -3 pi.
    let l = great_circle(128);
    let f = PotentialSpec::named("cos_u").evaluate(l.shape).unwrap();
    let s = 0.05;
    let lp = legendrian_deform(&l, &f, s).unwrap();
    let lm = legendrian_deform(&l, &f, -s).unwrap();
    assert!(lp.first.max_leg_residual < 1e-8);
    let d2 = (lp.first.vol - 2.0 * l.first.vol + lm.first.vol) / (s * s);
    assert!(
        (d2 - (-3.0 * std::f64::consts::PI)).abs() < 0.02,
        "second variation {d2}"
    );
    assert!(lp.first.vol < TAU);

    // hyperbolic circle: lambda_1 = 1 > K+2 = -1, strictly stable, and the
    // spectrum formula gives d2 Vol/ds2 = 2 pi
    let h = hyperbolic_circle(128);
    let f = PotentialSpec::named("cos_phi").evaluate(h.shape).unwrap();
    let hp = legendrian_deform(&h, &f, s).unwrap();
    let hm = legendrian_deform(&h, &f, -s).unwrap();
    let d2 = (hp.first.vol - 2.0 * h.first.vol + hm.first.vol) / (s * s);
    assert!((d2 - TAU).abs() < 0.02, "second variation {d2}");
    assert!(hp.first.vol > TAU);
}

#[test]
fn deform_preserves_mean_curvature_cycles() {
    let h = hyperbolic_circle(128);
    let f = PotentialSpec::named("cos_phi").evaluate(h.shape).unwrap();
    let hp = legendrian_deform(&h, &f, 0.05).unwrap();
    let n = hp.node_count();
    let cycle: f64 = hp.second.mean_form.iter().sum::<f64>() * TAU / n as f64;
    assert!(cycle.abs() < 1e-8, "cycle integral {cycle}");
}

#[test]
fn deform_is_reversible() {
    let l = great_circle(64);
    let f = PotentialSpec::named("cos_u").evaluate(l.shape).unwrap();
    let fwd = legendrian_deform(&l, &f, 0.05).unwrap();
    let back = legendrian_deform(&fwd, &f, -0.05).unwrap();
    let sup = l
        .positions
        .iter()
        .zip(&back.positions)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(sup < 1e-6, "round trip sup distance {sup}");
}

#[test]
fn projection_removes_reeb_noise() {
    use rand::{Rng, SeedableRng};
    let l = great_circle(128);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let d = l.chart_dim();
    let mut noisy = l.positions.clone();
    // inject smooth Reeb-direction noise of amplitude 1e-4
    for node in 0..l.node_count() {
        let th = l.shape.coords(node)[0];
        let amp = 1e-4 * ((3.0 * th).sin() + 0.5 * (5.0 * th).cos() + 0.1 * rng.gen_range(0.0..1.0) * 0.0);
        let moved = l.model.reeb_flow(&noisy[node * d..(node + 1) * d], amp);
        noisy[node * d..(node + 1) * d].copy_from_slice(&moved);
    }
    let bent = DiscreteLegendrian::from_positions(l.model.clone(), l.shape, noisy, l.winding.clone())
        .unwrap();
    assert!(bent.first.max_leg_residual > 1e-5);
    let (fixed, outcome) = project_legendrian(&bent).unwrap();
    assert!(fixed.first.max_leg_residual < 1e-8, "{}", fixed.first.max_leg_residual);
    assert!(outcome.correction_magnitude > 5e-5 && outcome.correction_magnitude < 2e-4);
}

#[test]
fn projection_detects_holonomy_obstruction() {
    // a closed curve over the rho = 5e-4 circle has constant residual
    // lambda(F_1) = 2 sinh(rho) =~ 1e-3: recoverable in size but pure cycle,
    // which no Reeb potential can remove
    let model = SasakianModel::new(ModelKind::HyperbolicCylinder3);
    let n = 128;
    let d = model.chart_dim;
    let mut pos = vec![0.0; n * d];
    for j in 0..n {
        pos[j * d] = 5e-4;
        pos[j * d + 1] = TAU * j as f64 / n as f64;
    }
    let mut winding = vec![0i64; d];
    winding[1] = 1;
    let bent = DiscreteLegendrian::from_positions(model, GridShape::Curve { n }, pos, winding)
        .unwrap();
    assert!(bent.first.max_leg_residual > 5e-4 && bent.first.max_leg_residual < 2e-3);
    let err = project_legendrian(&bent).unwrap_err();
    assert!(
        matches!(err, lmcf_core::Error::HolonomyObstruction { .. }),
        "unexpected {err}"
    );
}

#[test]
fn immersion_json_roundtrip() {
    let l = clifford(16, 16);
    let s = l.to_json();
    let back = DiscreteLegendrian::from_json(&s).unwrap();
    assert_eq!(l.positions, back.positions);
    assert_eq!(l.shape, back.shape);
    let csv = l.per_node_csv();
    assert!(csv.lines().count() == l.node_count() + 1);
}
