use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secrecy_core::entropy::{self, aep_bounds, h_max_smooth_power, h_min_smooth_power, EntropyQuery};
use secrecy_core::linalg::{self, kron};
use secrecy_core::state::{random_state, trace_distance};
use secrecy_core::*;

const GRID: [f64; 5] = [0.0, 0.05, 0.1, 0.2, 0.4];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn correlated_bits(m: usize) -> DensityOperator {
    let mut d = DMatrix::zeros(m * m, m * m);
    for u in 0..m {
        d[(u * m + u, u * m + u)] = c(1.0 / m as f64);
    }
    DensityOperator::new(d, vec![m, m]).unwrap()
}

#[test]
fn min_entropy_examples() {
    let me = DensityOperator::maximally_entangled(2);
    assert!((entropy::h_min(&me, &[0], &[1]).unwrap() + 1.0).abs() < 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sigma = random_state(&[2], 2, &mut rng);
    let mixed = DensityOperator::maximally_mixed(2).tensor(&sigma);
    assert!((entropy::h_min(&mixed, &[0], &[1]).unwrap() - 1.0).abs() < 1e-6);
    let pure_a = DensityOperator::diagonal(&[1.0, 0.0], vec![2]).unwrap().tensor(&sigma);
    assert!(entropy::h_min(&pure_a, &[0], &[1]).unwrap().abs() < 1e-6);

    // no conditioning system: H_min(A) = −log λ_max
    let r = DensityOperator::diagonal(&[0.7, 0.2, 0.1], vec![3]).unwrap();
    assert!((entropy::h_min(&r, &[0], &[]).unwrap() + 0.7f64.log2()).abs() < 1e-6);
}

#[test]
fn max_entropy_examples() {
    let me = DensityOperator::maximally_entangled(2);
    let q = EntropyQuery::bipartite(&me, 0.0).unwrap();
    assert!((q.h_max().unwrap() + 1.0).abs() < 1e-6);
    assert!((q.h_max_direct().unwrap() + 1.0).abs() < 1e-5);

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let sigma = random_state(&[2], 2, &mut rng);
    let mixed = DensityOperator::maximally_mixed(2).tensor(&sigma);
    assert!((entropy::h_max(&mixed, &[0], &[1]).unwrap() - 1.0).abs() < 1e-6);

    let q = EntropyQuery::bipartite(&correlated_bits(2), 0.0).unwrap();
    assert!(q.h_max().unwrap().abs() < 1e-6);
    assert!(q.h_max_direct().unwrap().abs() < 1e-5);

    // H_max(A) = 2 log Σ √λ
    let r = DensityOperator::diagonal(&[0.7, 0.2, 0.1], vec![3]).unwrap();
    let want = 2.0 * (0.7f64.sqrt() + 0.2f64.sqrt() + 0.1f64.sqrt()).log2();
    assert!((entropy::h_max(&r, &[0], &[]).unwrap() - want).abs() < 1e-6);
}

#[test]
fn duality_matches_fidelity_program() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let anc = rng.random_range(1..=4);
        let r = random_state(&[2, 2], anc, &mut rng);
        let q = EntropyQuery::bipartite(&r, 0.0).unwrap();
        let a = q.h_max().unwrap();
        let b = q.h_max_direct().unwrap();
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        assert!(q.h_min().unwrap() <= a + 1e-6);
    }
}

#[test]
fn zero_smoothing_collapses() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let r = random_state(&[2, 2], 3, &mut rng);
    let q = EntropyQuery::bipartite(&r, 0.0).unwrap();
    assert!((q.h_min_smooth().unwrap() - q.h_min().unwrap()).abs() < 1e-6);
    assert!((q.h_max_smooth().unwrap() - q.h_max().unwrap()).abs() < 1e-5);
    assert!(EntropyQuery::bipartite(&r, 1.0).is_err());
    assert!(EntropyQuery::new(&r, &[], &[1], 0.1).is_err());
}

#[test]
fn smoothing_of_maximally_entangled_state_beats_random_search() {
    let me = DensityOperator::maximally_entangled(2);
    let eps = 0.1;
    let v = entropy::h_min_smooth(&me, &[0], &[1], eps).unwrap();
    assert!((-1.0 - 1e-6..=0.0).contains(&v), "{v}");

    let psi = me.matrix().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut best = f64::NEG_INFINITY;
    let mut accepted = 0;
    while accepted < 10_000 {
        let tau = random_state(&[2, 2], rng.random_range(1..=4), &mut rng);
        let w: f64 = rng.random_range(0.0..0.02);
        let s: f64 = rng.random_range(0.99..=1.0);
        let m = (&psi * c(1.0 - w) + tau.matrix() * c(w)) * c(s);
        let cand = DensityOperator::new(m, vec![2, 2]).unwrap();
        if purified_distance(&cand, &me).unwrap() > eps {
            continue;
        }
        accepted += 1;
        best = best.max(entropy::h_min(&cand, &[0], &[1]).unwrap());
    }
    assert!(best <= v + 1e-6, "search found {best} above {v}");
    assert!(best > -1.0);
}

#[test]
fn private_and_correlated_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let eve = random_state(&[2], 2, &mut rng);
    let private = DensityOperator::maximally_mixed(2).tensor(&eve);
    let corr = correlated_bits(2);
    for eps in [0.0, 0.1, 0.3] {
        assert!(entropy::h_min_smooth(&private, &[0], &[1], eps).unwrap() >= 1.0 - 1e-6);
        assert!(entropy::h_max_smooth(&corr, &[0], &[1], eps).unwrap() <= 1e-6);
    }
}

#[test]
fn monotone_in_smoothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3 {
        let r = random_state(&[2, 2], rng.random_range(1..=4), &mut rng);
        let q = EntropyQuery::bipartite(&r, 0.0).unwrap();
        let mins: Vec<f64> = GRID.iter().map(|&e| q.with_eps(e).unwrap().h_min_smooth().unwrap()).collect();
        let maxs: Vec<f64> = GRID.iter().map(|&e| q.with_eps(e).unwrap().h_max_smooth().unwrap()).collect();
        for k in 1..GRID.len() {
            assert!(mins[k] >= mins[k - 1] - 1e-6, "{mins:?}");
            assert!(maxs[k] <= maxs[k - 1] + 1e-6, "{maxs:?}");
        }
    }
}

#[test]
fn invariant_under_local_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let r = random_state(&[2, 2], 3, &mut rng);
    let mut v = DMatrix::zeros(3, 2);
    v[(0, 0)] = c(1.0);
    v[(1, 1)] = c(1.0);
    let u = secrecy_core::state::random_unitary(3, &mut rng) * v;
    let id = linalg::identity(2);
    let on_a = kron(&u, &id);
    let on_b = kron(&id, &u);
    let ra = DensityOperator::new(&on_a * r.matrix() * on_a.adjoint(), vec![3, 2]).unwrap();
    let rb = DensityOperator::new(&on_b * r.matrix() * on_b.adjoint(), vec![2, 3]).unwrap();
    for eps in [0.0, 0.1] {
        let base_min = entropy::h_min_smooth(&r, &[0], &[1], eps).unwrap();
        let base_max = entropy::h_max_smooth(&r, &[0], &[1], eps).unwrap();
        for s in [&ra, &rb] {
            assert!((entropy::h_min_smooth(s, &[0], &[1], eps).unwrap() - base_min).abs() < 1e-6);
            assert!((entropy::h_max_smooth(s, &[0], &[1], eps).unwrap() - base_max).abs() < 1e-6);
        }
    }
}

#[test]
fn tensor_power_reduction_matches_full_program() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let r = random_state(&[2, 2], 2, &mut rng);
    let full = r.tensor(&r);
    for eps in [0.0, 0.2] {
        let reduced = h_min_smooth_power(&r, 2, eps).unwrap();
        let direct = entropy::h_min_smooth(&full, &[0, 2], &[1, 3], eps).unwrap();
        assert!((reduced - direct).abs() < 1e-6, "{reduced} vs {direct}");
        let reduced = h_max_smooth_power(&r, 2, eps).unwrap();
        let direct = entropy::h_max_smooth(&full, &[0, 2], &[1, 3], eps).unwrap();
        assert!((reduced - direct).abs() < 1e-6, "{reduced} vs {direct}");
    }
}

#[test]
fn aep_examples() {
    let pure = DensityOperator::diagonal(&[1.0, 0.0, 0.0, 0.0], vec![2, 2]).unwrap();
    let b = aep_bounds(&pure, 5, 0.3).unwrap();
    assert!(b.min_lower.abs() < 1e-12 && b.max_upper.abs() < 1e-12);

    let mixed = DensityOperator::maximally_mixed(2).with_dims(vec![2, 1]).unwrap();
    let b = aep_bounds(&mixed, 4, 0.5).unwrap();
    assert!((b.mu_c - 1.0).abs() < 1e-12 && b.mu_b.abs() < 1e-12);
    assert!((b.min_lower - (4.0 - (4.0 * 4f64.ln()).sqrt())).abs() < 1e-12);
    assert!((b.min_lower - 1.6452).abs() < 1e-4);
    assert!(aep_bounds(&mixed, 4, 0.0).is_err());
}

#[test]
fn aep_bounds_hold_for_small_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let r = random_state(&[2, 2], 2, &mut rng);
    for n in 1..=2 {
        let b = aep_bounds(&r, n, 0.3).unwrap();
        assert!(h_min_smooth_power(&r, n, 0.3).unwrap() >= b.min_lower - 1e-6);
        assert!(h_max_smooth_power(&r, n, 0.3).unwrap() <= b.max_upper + 1e-6);
    }
}

#[test]
fn smoothing_stays_inside_ball() {
    // the smoothed value never exceeds what trace-distance-style slack allows:
    // a classical state's H_min^ε is at most −log(λ_max − ε²)
    let r = DensityOperator::diagonal(&[0.6, 0.4], vec![2]).unwrap();
    let v = entropy::h_min_smooth(&r, &[0], &[], 0.1).unwrap();
    assert!(v >= entropy::h_min(&r, &[0], &[]).unwrap() - 1e-6);
    assert!(v <= 1.0 + 1e-6);
    let _ = trace_distance(&r, &r);
}
