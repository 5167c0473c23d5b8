mod common;

use approx::assert_abs_diff_eq;
use common::*;
use dib_core::discrete::{
    evaluate_point, f_bar_s, f_s, region_min, region_rhs, solve, solve_traced, update_decoders,
    update_encoders, SolverConfig,
};
use dib_core::info::{entropy, ConditionalPmf, DecoderSet, DiscreteSource, EncoderSet, InducedJoint};
use dib_core::{DibError, Subset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, nx: usize, ny: &[usize], nu: &[usize]) -> (DiscreteSource, EncoderSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = random_source(&mut rng, nx, ny);
    let enc = random_encoders(&mut rng, &source, nu);
    (source, enc)
}

fn config(s: f64, tol: f64, restarts: usize, seed: u64) -> SolverConfig {
    SolverConfig { tol, restarts, seed, ..SolverConfig::new(s) }
}

#[test]
fn f_s_of_uniform_encoders() {
    let (source, _) = instance(10, 3, &[2, 3], &[2, 2]);
    let enc = EncoderSet::uniform(&source, &[2, 3]).unwrap();
    let hx = entropy(source.px());
    for s in [0.0, 0.5, 2.0] {
        assert_abs_diff_eq!(f_s(&source, &enc, s).unwrap(), (1.0 + 2.0 * s) * hx, epsilon = 1e-12);
    }
}

#[test]
fn f_s_of_identity_encoders_at_zero() {
    let (source, _) = instance(11, 3, &[2, 3], &[2, 3]);
    let enc = EncoderSet::identity(&source);
    let b = Brute::new(&source, &enc);
    assert_abs_diff_eq!(f_s(&source, &enc, 0.0).unwrap(), b.h_cond(&[b.x()], &b.ys()), epsilon = 1e-12);
}

#[test]
fn f_s_matches_term_by_term_enumeration() {
    let (source, enc) = instance(12, 2, &[2, 2], &[2, 2]);
    let b = Brute::new(&source, &enc);
    let s = 1.0;
    let mut expected = b.h_cond(&[b.x()], &b.us());
    for k in 0..2 {
        expected += s * (b.mi(&[b.y(k)], &[b.u(k)], &[]) + b.h_cond(&[b.x()], &[b.u(k)]));
    }
    assert_abs_diff_eq!(f_s(&source, &enc, s).unwrap(), expected, epsilon = 1e-12);
    assert!(matches!(f_s(&source, &enc, -1.0), Err(DibError::InvalidParameter(_))));
}

#[test]
fn f_bar_s_at_exact_and_perturbed_decoders() {
    let (source, enc) = instance(13, 3, &[2, 3], &[3, 2]);
    let s = 0.7;
    let exact = update_decoders(&source, &enc).unwrap();
    let f = f_s(&source, &enc, s).unwrap();
    assert_abs_diff_eq!(f_bar_s(&source, &enc, &exact, s).unwrap(), f, epsilon = 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let perturb = |q: &ConditionalPmf, rng: &mut ChaCha8Rng| {
        let rows = q
            .rows()
            .map(|row| {
                let noise = random_row(rng, row.len());
                row.iter().zip(noise).map(|(a, b)| 0.9 * a + 0.1 * b).collect()
            })
            .collect();
        ConditionalPmf::new(rows).unwrap()
    };
    let per_encoder = exact.per_encoder.iter().map(|q| perturb(q, &mut rng)).collect();
    let joint = perturb(&exact.joint, &mut rng);
    let perturbed = DecoderSet::new(per_encoder, joint).unwrap();
    assert!(f_bar_s(&source, &enc, &perturbed, s).unwrap() > f + 1e-6);
}

#[test]
fn f_bar_s_with_prior_decoders_for_uniform_encoders() {
    let (source, _) = instance(14, 3, &[2, 2], &[2, 2]);
    let enc = EncoderSet::uniform(&source, &[2, 2]).unwrap();
    let prior = source.px().probs().to_vec();
    let dec = DecoderSet::new(
        vec![ConditionalPmf::new(vec![prior.clone(); 2]).unwrap(); 2],
        ConditionalPmf::new(vec![prior; 4]).unwrap(),
    )
    .unwrap();
    let s = 1.5;
    assert_abs_diff_eq!(
        f_bar_s(&source, &enc, &dec, s).unwrap(),
        (1.0 + 2.0 * s) * entropy(source.px()),
        epsilon = 1e-12
    );
}

#[test]
fn f_bar_s_support_violation_is_infinite() {
    let (source, enc) = instance(15, 2, &[2], &[2]);
    let dec = DecoderSet::new(
        vec![ConditionalPmf::new(vec![vec![1.0, 0.0]; 2]).unwrap()],
        ConditionalPmf::new(vec![vec![0.5, 0.5]; 2]).unwrap(),
    )
    .unwrap();
    assert_eq!(f_bar_s(&source, &enc, &dec, 1.0).unwrap(), f64::INFINITY);
}

#[test]
fn decoders_of_uniform_and_identity_encoders() {
    let (source, _) = instance(16, 3, &[3, 2], &[2, 2]);
    let uniform = EncoderSet::uniform(&source, &[2, 4]).unwrap();
    let dec = update_decoders(&source, &uniform).unwrap();
    for q in dec.per_encoder.iter().chain(std::iter::once(&dec.joint)) {
        for row in q.rows() {
            for (a, b) in row.iter().zip(source.px().probs()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-14);
            }
        }
    }

    let identity = EncoderSet::identity(&source);
    let dec = update_decoders(&source, &identity).unwrap();
    for k in 0..2 {
        let post = source.posterior(k);
        for (a, b) in dec.per_encoder[k].as_flat().iter().zip(post.as_flat()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }
}

#[test]
fn decoders_match_enumerated_posteriors() {
    let (source, enc) = instance(17, 3, &[2, 2], &[2, 3]);
    let dec = update_decoders(&source, &enc).unwrap();
    let b = Brute::new(&source, &enc);
    for k in 0..2 {
        for (cond, row) in b.conditional(b.x(), &[b.u(k)]) {
            for (x, p) in row.iter().enumerate() {
                assert_abs_diff_eq!(dec.per_encoder[k].get(cond[0], x), *p, epsilon = 1e-12);
            }
        }
    }
    for (cond, row) in b.conditional(b.x(), &b.us()) {
        let t = cond[0] * 3 + cond[1];
        for (x, p) in row.iter().enumerate() {
            assert_abs_diff_eq!(dec.joint.get(t, x), *p, epsilon = 1e-12);
        }
    }
}

#[test]
fn zero_mass_symbols_decode_to_prior() {
    let (source, _) = instance(18, 2, &[2], &[2]);
    let enc = EncoderSet::new(vec![ConditionalPmf::new(vec![vec![1.0, 0.0, 0.0]; 2]).unwrap()]).unwrap();
    let dec = update_decoders(&source, &enc).unwrap();
    for u in 1..3 {
        assert_eq!(dec.per_encoder[0].row(u), source.px().probs());
    }
}

#[test]
fn uniform_encoders_are_a_fixed_point() {
    let (source, _) = instance(19, 3, &[2, 3], &[2, 2]);
    let enc = EncoderSet::uniform(&source, &[3, 2]).unwrap();
    let dec = update_decoders(&source, &enc).unwrap();
    let next = update_encoders(&source, &enc, &dec, 0.8).unwrap();
    assert!(enc.max_row_distance(&next) < 1e-14);
}

#[test]
fn encoder_update_rejects_zero_s() {
    let (source, enc) = instance(20, 2, &[2], &[2]);
    let dec = update_decoders(&source, &enc).unwrap();
    assert!(matches!(update_encoders(&source, &enc, &dec, 0.0), Err(DibError::InvalidParameter(_))));
}

#[test]
fn single_encoder_update_is_the_classical_self_consistent_step() {
    let (source, enc) = instance(21, 3, &[4], &[3]);
    let s = 0.6;
    let beta = 1.0 + 1.0 / s;
    let dec = update_decoders(&source, &enc).unwrap();
    let next = update_encoders(&source, &enc, &dec, s).unwrap();

    let b = Brute::new(&source, &enc);
    let pu = b.marginal(&[b.u(0)]);
    let post_y = b.conditional(b.x(), &[b.y(0)]);
    let post_u = b.conditional(b.x(), &[b.u(0)]);
    for y in 0..4 {
        let w: Vec<f64> = (0..3)
            .map(|u| pu[&vec![u]] * (-beta * kl(&post_y[&vec![y]], &post_u[&vec![u]])).exp())
            .collect();
        let z: f64 = w.iter().sum();
        for u in 0..3 {
            assert_abs_diff_eq!(next.encoder(0).get(y, u), w[u] / z, epsilon = 1e-12);
        }
    }
}

/// One sequential sweep written directly from the enumerated joint.
fn reference_sweep(source: &DiscreteSource, enc: &EncoderSet, dec: &DecoderSet, s: f64) -> EncoderSet {
    let nu = enc.u_sizes();
    let mut current = enc.clone();
    for k in 0..2 {
        let r = 1 - k;
        let b = Brute::new(source, &current);
        let pu = b.marginal(&[b.u(k)]);
        let post_y = b.conditional(b.x(), &[b.y(k)]);
        let p_rest = b.conditional(b.u(r), &[b.y(k)]);
        let post_rest = b.conditional(b.x(), &[b.y(k), b.u(r)]);
        let mut rows = Vec::new();
        for y in 0..source.y_size(k) {
            let w: Vec<f64> = (0..nu[k])
                .map(|u| {
                    let mut psi = kl(&post_y[&vec![y]], dec.per_encoder[k].row(u));
                    for ur in 0..nu[r] {
                        let t = if k == 0 { u * nu[1] + ur } else { ur * nu[1] + u };
                        psi += p_rest[&vec![y]][ur] * kl(&post_rest[&vec![y, ur]], dec.joint.row(t)) / s;
                    }
                    pu[&vec![u]] * (-psi).exp()
                })
                .collect();
            let z: f64 = w.iter().sum();
            rows.push(w.into_iter().map(|v| v / z).collect());
        }
        let mut encs = current.encoders().to_vec();
        encs[k] = ConditionalPmf::new(rows).unwrap();
        current = EncoderSet::new(encs).unwrap();
    }
    current
}

#[test]
fn two_encoder_update_matches_direct_transcription() {
    for (seed, ny, nu) in [(22, [2, 2], [2, 2]), (23, [3, 2], [2, 3])] {
        let (source, enc) = instance(seed, 2, &ny, &nu);
        let dec = update_decoders(&source, &enc).unwrap();
        let got = update_encoders(&source, &enc, &dec, 1.0).unwrap();
        let want = reference_sweep(&source, &enc, &dec, 1.0);
        assert!(got.max_row_distance(&want) < 1e-12);

        // stale decoders exercise the Q ≠ posterior branch
        let (_, other) = instance(seed + 100, 2, &ny, &nu);
        let stale = update_decoders(&source, &other).unwrap();
        let got = update_encoders(&source, &enc, &stale, 0.4).unwrap();
        let want = reference_sweep(&source, &enc, &stale, 0.4);
        assert!(got.max_row_distance(&want) < 1e-12);
    }
}

#[test]
fn single_symbol_descriptions_carry_nothing() {
    let (source, _) = instance(24, 3, &[2, 3], &[1, 1]);
    let cfg = SolverConfig { u_alphabet_sizes: Some(vec![1, 1]), ..SolverConfig::new(1.0) };
    let sol = solve(&source, &cfg).unwrap();
    assert_eq!(sol.point.iterations, 1);
    assert!(sol.point.converged);
    assert_abs_diff_eq!(sol.point.delta, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sol.point.r_sum, 0.0, epsilon = 1e-12);
}

/// Minimum of `F_s` over every pair of deterministic maps `Y_k -> U_k`.
fn deterministic_floor(source: &DiscreteSource, nu: usize, s: f64) -> f64 {
    let ny = [source.y_size(0), source.y_size(1)];
    let maps = |n: usize| -> Vec<Vec<usize>> {
        (0..nu.pow(n as u32))
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let d = code % nu;
                        code /= nu;
                        d
                    })
                    .collect()
            })
            .collect()
    };
    let mut best = f64::INFINITY;
    for m0 in maps(ny[0]) {
        for m1 in maps(ny[1]) {
            let enc = EncoderSet::new(vec![
                ConditionalPmf::deterministic(&m0, nu),
                ConditionalPmf::deterministic(&m1, nu),
            ])
            .unwrap();
            best = best.min(f_s(source, &enc, s).unwrap());
        }
    }
    best
}

#[test]
fn solver_reaches_the_deterministic_floor() {
    for seed in 0..5 {
        let (source, _) = instance(200 + seed, 2, &[2, 2], &[2, 2]);
        let floor = deterministic_floor(&source, 2, 1.0);
        let sol = solve(&source, &config(1.0, 1e-12, 8, seed)).unwrap();
        assert!(sol.point.f_s_value <= floor + 1e-6, "{} > {}", sol.point.f_s_value, floor);
    }
}

#[test]
fn zero_multiplier_returns_lossless_descriptions() {
    let (source, _) = instance(25, 3, &[2, 3], &[2, 2]);
    let sol = solve(&source, &SolverConfig::new(0.0)).unwrap();
    let b = Brute::new(&source, &sol.encoders);
    assert_abs_diff_eq!(sol.point.delta, b.mi(&[b.x()], &b.ys(), &[]), epsilon = 1e-12);
    let cfg = SolverConfig { u_alphabet_sizes: Some(vec![1, 3]), ..SolverConfig::new(0.0) };
    assert!(solve(&source, &cfg).is_err());
}

#[test]
fn points_for_uniform_and_identity_encoders() {
    let (source, _) = instance(26, 3, &[2, 3], &[2, 2]);
    let uniform = EncoderSet::uniform(&source, &[2, 3]).unwrap();
    let p = evaluate_point(&source, &uniform, 0.9).unwrap();
    assert_abs_diff_eq!(p.delta, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(p.r_sum, 0.0, epsilon = 1e-12);

    let identity = EncoderSet::identity(&source);
    let p = evaluate_point(&source, &identity, 0.9).unwrap();
    let b = Brute::new(&source, &identity);
    assert_abs_diff_eq!(p.diagnostics.delta_direct, b.mi(&[b.x()], &b.ys(), &[]), epsilon = 1e-12);
    // lossless descriptions cost the joint entropy of the observations
    assert_abs_diff_eq!(p.r_sum, b.h(&b.ys()), epsilon = 1e-12);
    assert_abs_diff_eq!(p.diagnostics.r_sum_direct, b.h(&b.ys()), epsilon = 1e-12);
}

#[test]
fn region_special_subsets() {
    let (source, enc) = instance(27, 3, &[2, 3], &[2, 2]);
    let rates = [0.3, 0.7];
    let joint = InducedJoint::new(&source, &enc).unwrap();
    assert_abs_diff_eq!(
        region_rhs(&source, &enc, &rates, Subset::empty()).unwrap(),
        joint.i_x_uall(),
        epsilon = 1e-14
    );
    let uniform = EncoderSet::uniform(&source, &[2, 2]).unwrap();
    assert_abs_diff_eq!(region_rhs(&source, &uniform, &rates, Subset::full(2)).unwrap(), 1.0, epsilon = 1e-14);
    assert!(region_rhs(&source, &enc, &[0.1], Subset::empty()).is_err());
    assert!(region_rhs(&source, &enc, &[-0.1, 0.2], Subset::empty()).is_err());
}

#[test]
fn region_min_matches_subset_enumeration() {
    for kk in 1..=4usize {
        let ny = vec![2; kk];
        let (source, enc) = instance(300 + kk as u64, 2, &ny, &ny);
        let b = Brute::new(&source, &enc);
        let mut rng = ChaCha8Rng::seed_from_u64(kk as u64);
        let rates: Vec<f64> = (0..kk).map(|_| rand::Rng::random_range(&mut rng, 0.0..0.8)).collect();
        let mut best = f64::INFINITY;
        for bits in 0..(1u64 << kk) {
            let (mut inside, mut outside) = (0.0, Vec::new());
            for j in 0..kk {
                if bits >> j & 1 == 1 {
                    inside += rates[j] - b.mi(&[b.y(j)], &[b.u(j)], &[b.x()]);
                } else {
                    outside.push(b.u(j));
                }
            }
            let tail = if outside.is_empty() { 0.0 } else { b.mi(&[b.x()], &outside, &[]) };
            let v = inside + tail;
            let got = region_rhs(&source, &enc, &rates, Subset::from_bits(bits)).unwrap();
            assert_abs_diff_eq!(got, v, epsilon = 1e-12);
            best = best.min(v);
        }
        assert_abs_diff_eq!(region_min(&source, &enc, &rates).unwrap().0, best, epsilon = 1e-12);
    }
}

#[test]
fn invalid_config_is_rejected() {
    let (source, _) = instance(28, 2, &[2], &[2]);
    for cfg in [
        SolverConfig { tol: 0.0, ..SolverConfig::new(1.0) },
        SolverConfig { restarts: 0, ..SolverConfig::new(1.0) },
        SolverConfig::new(-1.0),
        SolverConfig { u_alphabet_sizes: Some(vec![0]), ..SolverConfig::new(1.0) },
        SolverConfig { u_alphabet_sizes: Some(vec![2, 2]), ..SolverConfig::new(1.0) },
    ] {
        assert!(solve(&source, &cfg).is_err());
    }
}

#[test]
fn solve_is_deterministic_given_seed() {
    let (source, _) = instance(29, 3, &[2, 3], &[2, 2]);
    let cfg = config(0.5, 1e-9, 3, 42);
    let a = solve(&source, &cfg).unwrap();
    let b = solve(&source, &cfg).unwrap();
    assert_eq!(a.encoders, b.encoders);
    assert_eq!(a.point, b.point);
}

fn small_instance() -> impl Strategy<Value = (u64, usize, [usize; 2], f64)> {
    (any::<u64>(), 2usize..=3, [2usize..=3, 2usize..=3], prop::sample::select(vec![0.1, 1.0, 10.0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tightness_at_exact_decoders((seed, nx, ny, s) in small_instance()) {
        let (source, enc) = instance(seed, nx, &ny, &ny);
        let dec = update_decoders(&source, &enc).unwrap();
        let gap = f_bar_s(&source, &enc, &dec, s).unwrap() - f_s(&source, &enc, s).unwrap();
        prop_assert!(gap.abs() < 1e-9);
    }

    #[test]
    fn descent_and_stationarity((seed, nx, ny, s) in small_instance()) {
        let (source, _) = instance(seed, nx, &ny, &ny);
        let cfg = config(s, 1e-10, 2, seed);
        let (sol, traces) = solve_traced(&source, &cfg).unwrap();
        for t in &traces {
            prop_assert!(t.worst_ascent() <= 1e-9, "ascent {}", t.worst_ascent());
        }
        prop_assert!(sol.point.converged);

        let dec = update_decoders(&source, &sol.encoders).unwrap();
        let next = update_encoders(&source, &sol.encoders, &dec, s).unwrap();
        prop_assert!(sol.encoders.max_row_distance(&next) < 10.0 * cfg.tol);

        prop_assert!(sol.point.diagnostics.lagrangian_gap < 1e-6);
        prop_assert!(sol.point.delta >= -1e-9 && sol.point.delta <= entropy(source.px()) + 1e-9);
        prop_assert!(sol.point.r_sum >= -1e-9);

        let joint = InducedJoint::new(&source, &sol.encoders).unwrap();
        let rates: Vec<f64> = (0..2).map(|k| joint.i_y_u(k)).collect();
        let (bound, _) = region_min(&source, &sol.encoders, &rates).unwrap();
        prop_assert!(bound >= sol.point.diagnostics.delta_direct - 1e-6);
    }

    #[test]
    fn relevance_never_exceeds_observations((seed, nx, ny, s) in small_instance()) {
        let (source, enc) = instance(seed, nx, &ny, &[2, 3]);
        let b = Brute::new(&source, &enc);
        let p = evaluate_point(&source, &enc, s).unwrap();
        prop_assert!(p.diagnostics.delta_direct <= b.mi(&[b.x()], &b.ys(), &[]) + 1e-12);
    }
}

