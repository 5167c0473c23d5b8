mod common;

use approx::assert_abs_diff_eq;
use common::gauss::*;
use common::*;
use dib_core::discrete::{f_s, solve, SolverConfig};
use dib_core::gaussian::GaussianSource;
use dib_core::gaussian_dib::{self, GaussianSolverConfig};
use dib_core::info::{entropy, mutual_information, ConditionalPmf, DiscreteSource, EncoderSet, PairPmf, Pmf};
use dib_core::oracles::*;
use dib_core::DibError;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bsc_source(eps: f64) -> DiscreteSource {
    DiscreteSource::new(Pmf::uniform(2), vec![bsc(eps)]).unwrap()
}

#[test]
fn reference_ib_recovers_a_noiseless_source() {
    let source = DiscreteSource::new(
        Pmf::new(vec![0.2, 0.3, 0.5]).unwrap(),
        vec![ConditionalPmf::identity(3)],
    )
    .unwrap();
    let cfg = IbReferenceConfig { u_size: Some(5), ..Default::default() };
    let p = ib_reference_k1(&source, 0.01, &cfg).unwrap();
    assert_abs_diff_eq!(p.delta, entropy(source.px()), epsilon = 1e-9);
}

#[test]
fn reference_ib_stays_in_range() {
    let source = bsc_source(0.1);
    let i_xy = mutual_information(&PairPmf::from_marginal_and_channel(source.px(), source.channel(0)).unwrap());
    for s in [0.01, 0.3, 1.0, 3.0, 30.0] {
        let p = ib_reference_k1(&source, s, &IbReferenceConfig::default()).unwrap();
        assert!(p.delta >= 0.0 && p.delta <= i_xy + 1e-12);
    }
    let far = ib_reference_k1(&source, 30.0, &IbReferenceConfig::default()).unwrap();
    assert!(far.delta < 1e-9);
    assert!(ib_reference_k1(&source, 0.0, &IbReferenceConfig::default()).is_err());
}

#[test]
fn reference_ib_agrees_with_distributed_solver_at_one_encoder() {
    let source = bsc_source(0.1);
    for s in [0.05, 0.2, 0.5, 1.0, 1.5] {
        let r = ib_reference_k1(&source, s, &IbReferenceConfig::default()).unwrap();
        let d = solve(&source, &SolverConfig { tol: 1e-12, ..SolverConfig::new(s) }).unwrap().point;
        assert_abs_diff_eq!(r.delta, d.delta, epsilon = 1e-4);
        assert_abs_diff_eq!(r.r_sum, d.r_sum, epsilon = 1e-4);
    }
}

#[test]
fn grid_search_counts_and_trivial_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let source = random_source(&mut rng, 2, &[2, 2]);
    let res = discrete_grid_search(&source, &[2, 2], 1.0).unwrap();
    assert_eq!(res.candidates, 16);

    let ones = discrete_grid_search(&source, &[1, 1], 0.7).unwrap();
    assert_eq!(ones.candidates, 1);
    assert_abs_diff_eq!(ones.f_s, (1.0 + 2.0 * 0.7) * entropy(source.px()), epsilon = 1e-14);

    let big = random_source(&mut rng, 2, &[8, 8]);
    assert!(matches!(discrete_grid_search(&big, &[4, 4], 1.0), Err(DibError::SearchTooLarge { .. })));
}

#[test]
fn grid_search_agrees_with_crate_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let source = random_source(&mut rng, 3, &[3, 2]);
    let res = discrete_grid_search(&source, &[2, 2], 0.4).unwrap();
    let enc = EncoderSet::new(
        res.maps.iter().map(|m| ConditionalPmf::deterministic(m, 2)).collect(),
    )
    .unwrap();
    assert_abs_diff_eq!(f_s(&source, &enc, 0.4).unwrap(), res.f_s, epsilon = 1e-12);
}

#[test]
fn solver_beats_grid_on_random_binary_instances() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let source = random_source(&mut rng, 2, &[2, 2]);
        let floor = discrete_grid_search(&source, &[2, 2], 1.0).unwrap().f_s;
        let cfg = SolverConfig { tol: 1e-12, restarts: 8, seed, ..SolverConfig::new(1.0) };
        let got = solve(&source, &cfg).unwrap().point.f_s_value;
        assert!(got <= floor + 1e-6, "seed {seed}: {got} > {floor}");
    }
}

/// Closed form of the single scalar encoder: equalizing the two terms gives
/// `b = (e^{2R} - 1) / (e^{2R} + g)`.
fn scalar_k1_closed_form(g: f64, r: f64) -> f64 {
    let e = (2.0 * r).exp();
    0.5 * ((1.0 + g) * e / (e + g)).ln()
}

#[test]
fn scalar_curve_single_encoder_closed_form() {
    let source = scalar_source(1.0, &[1.0], &[0.25]);
    let rates: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1).collect();
    let curve = gaussian_scalar_curve(&source, &rates, &ScalarCurveConfig::default()).unwrap();
    assert_eq!(curve.provenance, Provenance::Grid);
    assert!(curve.is_monotone(0.0));
    for s in &curve.samples {
        assert_abs_diff_eq!(s.delta, scalar_k1_closed_form(4.0, s.r_sum), epsilon = 1e-9);
    }
    assert_eq!(curve.samples[0].delta, 0.0);
}

#[test]
fn scalar_curve_limits_for_two_encoders() {
    let source = scalar_source(1.0, &[1.0, 0.7], &[0.3, 0.5]);
    let ceiling = source.i_x_yall().unwrap();
    let curve = gaussian_scalar_curve(&source, &[0.0, 1.0, 5.0, 40.0], &ScalarCurveConfig::default()).unwrap();
    assert_eq!(curve.samples[0].delta, 0.0);
    assert!(curve.is_monotone(0.0));
    assert!(curve.samples.iter().all(|s| s.delta <= ceiling + 1e-12));
    assert_abs_diff_eq!(curve.samples[3].delta, ceiling, epsilon = 1e-6);
}

#[test]
fn scalar_curve_rejects_unsupported_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let vector: GaussianSource = rand_source(&mut rng, 2, &[1]);
    assert!(gaussian_scalar_curve(&vector, &[0.1], &ScalarCurveConfig::default()).is_err());
    let scalar = scalar_source(1.0, &[1.0], &[1.0]);
    assert!(gaussian_scalar_curve(&scalar, &[0.2, 0.1], &ScalarCurveConfig::default()).is_err());
    let fine = ScalarCurveConfig { step: 1e-8, ..Default::default() };
    assert!(matches!(gaussian_scalar_curve(&scalar, &[0.1], &fine), Err(DibError::SearchTooLarge { .. })));
}

#[test]
fn centralized_bounds_vanish_without_signal() {
    let source: GaussianSource = GaussianSource::new(
        DMatrix::identity(2, 2),
        vec![DMatrix::zeros(1, 2); 2],
        vec![DMatrix::identity(1, 1); 2],
    )
    .unwrap();
    let b = centralized_bounds(&source, &[0.1, 1.0], &GaussianSolverConfig::default()).unwrap();
    assert_eq!(b.ceiling, 0.0);
    assert!(b.curve.samples.iter().all(|s| s.delta.abs() < 1e-9));
}

#[test]
fn centralized_curve_of_a_single_encoder_is_the_solver_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let source: GaussianSource = rand_source(&mut rng, 3, &[2]);
    let grid = [0.1, 0.4, 1.0];
    let b = centralized_bounds(&source, &grid, &GaussianSolverConfig::default()).unwrap();
    for (p, &s) in b.points.iter().zip(&grid) {
        let d = gaussian_dib::solve(&source, &GaussianSolverConfig::new(s)).unwrap().point;
        assert_abs_diff_eq!(p.delta, d.delta, epsilon = 1e-5);
        assert_abs_diff_eq!(p.r_sum, d.r_sum, epsilon = 1e-5);
    }
    assert!(b.curve.samples.iter().all(|s| s.delta <= b.ceiling + 1e-12));
}

#[test]
fn centralized_bisection_hits_the_target_rate() {
    let source = scalar_source(1.0, &[1.0], &[0.25]);
    for r in [0.1, 0.5, 1.2] {
        let d = centralized_delta_at(&source, r, &GaussianSolverConfig::default()).unwrap();
        assert_abs_diff_eq!(d, scalar_k1_closed_form(4.0, r), epsilon = 1e-6);
    }
}

#[test]
fn curve_interpolation() {
    let c = CurveOracle::new(
        vec![CurveSample { r_sum: 1.0, delta: 0.5 }, CurveSample { r_sum: 0.0, delta: 0.0 }],
        Provenance::ClosedForm,
        0.0,
    );
    assert_eq!(c.samples[0].r_sum, 0.0);
    assert_eq!(c.interpolate(0.5), Some(0.25));
    assert_eq!(c.interpolate(3.0), Some(0.5));
}
