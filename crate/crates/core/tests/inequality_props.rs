//! Audit-style invariants for the correlation and moment inequalities and
//! the α(t) flow behind them.

use gauss_psh_core::alpha::{alpha_at, alpha_curve, geometric_t_grid};
use gauss_psh_core::inequality::{
    correlation_gap, lieb_check, moment_split_report, random_covariance_spec, random_log_psh,
    random_psd, GapMethod, LogPshOptions, Verdict,
};
use gauss_psh_core::permanent::wick_moment_of_covariance;
use gauss_psh_core::poly::make_field;
use gauss_psh_core::sampling::McConfig;
use gauss_psh_core::semigroup::SemigroupTime;
use gauss_psh_core::QuadratureGrid;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn correlation_audit_states_no_violation() {
    // Reduced version of the main audit: random circular-psh f against
    // random psh g; the full 200-instance run lives in the acceptance suite.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut violations = 0;
    for i in 0..40 {
        let n = 1 + (i % 3);
        let f = make_field(&random_log_psh(
            n,
            LogPshOptions { homogeneous: true, ..Default::default() },
            &mut rng,
        ));
        let g = make_field(&random_log_psh(
            n,
            LogPshOptions { homogeneous: rng.random::<bool>(), ..Default::default() },
            &mut rng,
        ));
        let method = match n {
            1 => GapMethod::Grid { m: 20 },
            2 => GapMethod::Grid { m: 10 },
            _ => GapMethod::Mc { cfg: McConfig::new(120_000, 9000 + i as u64, 20).unwrap() },
        };
        let report = correlation_gap(&f, &g, method).unwrap();
        if report.verdict == Verdict::Violated {
            violations += 1;
            eprintln!("instance {i}: margin {} ± ({}, {})", report.margin, report.stderr_lhs, report.stderr_rhs);
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn alpha_flow_is_decreasing_and_convex_for_polynomial_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let grid = QuadratureGrid::build(1, 16).unwrap();
    let ts = geometric_t_grid(0.05, 40.0, 16);
    for _ in 0..6 {
        let opts = LogPshOptions {
            homogeneous: true,
            even_alpha: true,
            max_degree: 2,
            ..Default::default()
        };
        let f = make_field(&random_log_psh(1, opts, &mut rng));
        let g = make_field(&random_log_psh(
            1,
            LogPshOptions { homogeneous: false, even_alpha: true, max_degree: 2, ..Default::default() },
            &mut rng,
        ));
        let curve = alpha_curve(&f, &g, &ts, &grid).unwrap();
        let scale = curve.alpha.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
        for w in curve.alpha.windows(2) {
            assert!(w[1] <= w[0] + 1e-8 * scale, "α increased: {} -> {}", w[0], w[1]);
        }
        for &d2 in &curve.d2 {
            assert!(d2 >= -1e-6 * scale, "α not convex: d2 = {d2}");
        }
        for &r in &curve.cross_residual {
            assert!(r < 1e-6, "semigroup paths disagree: {r}");
        }
        // α decreases towards the product of the means
        let last = *curve.alpha.last().unwrap();
        assert!((last - curve.limit).abs() < 1e-6 * scale);
    }
}

#[test]
fn alpha_limit_consistency_decays_geometrically() {
    // α(t_max) - ∫f∫g shrinks by at least a factor 2 per doubling of t_max
    // (it decays like e^{-t}); below the quadrature floor it counts as
    // converged.
    let grid = QuadratureGrid::build(1, 16).unwrap();
    let pt_grid = QuadratureGrid::build(1, 32).unwrap();
    let f = make_field(&random_log_psh(
        1,
        LogPshOptions { homogeneous: true, even_alpha: true, max_degree: 2, ..Default::default() },
        &mut ChaCha8Rng::seed_from_u64(808),
    ));
    let limit = grid.integrate(&f).unwrap().re.powi(2);
    let gap = |t: f64| -> f64 {
        let (a, _) = alpha_at(&f, &f, SemigroupTime::new(t).unwrap(), &grid, &pt_grid).unwrap();
        (a - limit).abs()
    };
    let scale = gap(0.0).max(1.0);
    let floor = 1e-12 * scale;
    let (g10, g20, g40) = (gap(10.0), gap(20.0), gap(40.0));
    assert!(g20 <= floor || g10 / g20 >= 2.0, "gap(10) = {g10}, gap(20) = {g20}");
    assert!(g40 <= floor || g20 / g40 >= 2.0, "gap(20) = {g20}, gap(40) = {g40}");
    assert!(g40 < 1e-6 * scale);
}

#[test]
fn even_moment_split_reduces_to_lieb_permanents() {
    // For α = 2p the two sides of the split-moment inequality are exactly
    // the Lieb permanents of the multiplicity-expanded covariance.
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let cfg = McConfig::new(1000, 1, 10).unwrap(); // unused by the exact route
    for _ in 0..10 {
        let spec = random_covariance_spec(3, 2, &mut rng);
        let p = [1usize, 2, 1];
        let alpha: Vec<f64> = p.iter().map(|&k| 2.0 * k as f64).collect();
        let k_split = 1usize;
        let report = moment_split_report(&spec, &alpha, k_split, &cfg).unwrap();

        // expand C by multiplicities and hand it to the Lieb check
        let c = spec.covariance();
        let mut index = Vec::new();
        for (j, &mult) in p.iter().enumerate() {
            index.extend(std::iter::repeat(j).take(mult));
        }
        let rows: Vec<Vec<num_complex::Complex64>> = index
            .iter()
            .map(|&a| index.iter().map(|&b| c.entry(a, b)).collect())
            .collect();
        let expanded = gauss_psh_core::HermitianMatrix::from_rows(&rows).unwrap();
        let split_rows: usize = p[..k_split].iter().sum();
        let lieb = lieb_check(&expanded, split_rows).unwrap();
        assert!((report.lhs - lieb.lhs).abs() <= 1e-10 * (1.0 + lieb.lhs.abs()));
        assert!((report.rhs - lieb.rhs).abs() <= 1e-10 * (1.0 + lieb.rhs.abs()));
        assert!(report.margin >= -1e-9);
    }
}

#[test]
fn lieb_audit_on_random_psd_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for _ in 0..25 {
        let dim = 2 + rng.random_range(0..7); // up to 8
        let c = random_psd(dim, &mut rng);
        for k in 1..dim {
            let r = lieb_check(&c, k).unwrap();
            assert!(r.margin >= -1e-9, "dim {dim} split {k}: margin {}", r.margin);
            assert_ne!(r.verdict, Verdict::Violated);
        }
    }
}

#[test]
fn wick_moments_match_radial_factorials_for_identity_covariance() {
    // E ∏ |G_j|^{2p_j} = ∏ p_j! for independent coordinates.
    let id = gauss_psh_core::HermitianMatrix::identity(3);
    let fact = |k: usize| (1..=k).product::<usize>() as f64;
    for p in [[1usize, 0, 0], [2, 1, 0], [3, 2, 1], [4, 0, 2]] {
        let expect: f64 = p.iter().map(|&k| fact(k)).product();
        let got = wick_moment_of_covariance(&id, &p).unwrap();
        assert!((got - expect).abs() <= 1e-10 * expect, "p = {p:?}: {got} vs {expect}");
    }
}
