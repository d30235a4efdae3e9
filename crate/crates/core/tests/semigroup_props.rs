//! Semigroup invariants: L² contraction, Hermitian symmetry, quantified
//! convergence to the Bargmann projection, strong continuity at t = 0, and
//! the L⁴ blow-up signature of the exponential family.

use gauss_psh_core::field::{Growth, ScalarField, Symmetry};
use gauss_psh_core::inequality::{random_log_psh, LogPshOptions};
use gauss_psh_core::poly::make_field;
use gauss_psh_core::semigroup::{
    bargmann_field, ou_apply, pt_apply, pt_exp_linear_closed_form, pt_field, SemigroupTime,
};
use gauss_psh_core::QuadratureGrid;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn norm_diff_sq(
    grid: &QuadratureGrid,
    a: &ScalarField,
    b: &ScalarField,
) -> f64 {
    grid.integrate_fn(|z| Complex64::new((a.eval(z) - b.eval(z)).norm_sqr(), 0.0))
        .unwrap()
        .re
}

#[test]
fn l2_contraction_on_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let outer = QuadratureGrid::build(1, 12).unwrap();
    let inner = QuadratureGrid::build(1, 24).unwrap();
    for i in 0..50 {
        // alternate polynomial (even-α) and fractional-α instances
        let opts = LogPshOptions {
            homogeneous: i % 2 == 0,
            even_alpha: i % 2 == 0,
            max_degree: 2,
            ..Default::default()
        };
        let f = make_field(&random_log_psh(1, opts, &mut rng));
        let norm_f = outer.l2_norm(&f).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let time = SemigroupTime::new(t).unwrap();
            let ptf = pt_field(&f, time, &inner);
            let norm_pt = outer.l2_norm(&ptf).unwrap();
            assert!(
                norm_pt <= norm_f * (1.0 + 1e-7) + 1e-9,
                "instance {i}: ‖P_{t} f‖ = {norm_pt} > ‖f‖ = {norm_f}"
            );
        }
    }
}

#[test]
fn pt_is_hermitian_in_l2() {
    // ⟨P_t f, g⟩ = ⟨f, P_t g⟩ on the same grids.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let outer = QuadratureGrid::build(1, 14).unwrap();
    let inner = QuadratureGrid::build(1, 28).unwrap();
    for _ in 0..5 {
        let opts = LogPshOptions { even_alpha: true, max_degree: 2, ..Default::default() };
        let f = make_field(&random_log_psh(1, opts, &mut rng));
        let g = make_field(&random_log_psh(
            1,
            LogPshOptions { homogeneous: false, even_alpha: true, max_degree: 2, ..Default::default() },
            &mut rng,
        ));
        let t = SemigroupTime::new(0.8).unwrap();
        let ptf = pt_field(&f, t, &inner);
        let ptg = pt_field(&g, t, &inner);
        let lhs = outer.pairing(&ptf, &g).unwrap();
        let rhs = outer.pairing(&f, &ptg).unwrap();
        let scale = 1.0 + lhs.norm().max(rhs.norm());
        assert!(
            (lhs - rhs).norm() <= 1e-7 * scale,
            "⟨P_t f, g⟩ = {lhs} vs ⟨f, P_t g⟩ = {rhs}"
        );
    }
}

#[test]
fn hormander_decay_towards_the_projection() {
    // ‖P_t f - Π₀ f‖² ≤ e^{-2t} ‖f - Π₀ f‖². The bound is tight when
    // f - Π₀f concentrates in the first eigenspace, so the sampled fields
    // are polynomial (even exponents) to keep every quadrature exact.
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let outer = QuadratureGrid::build(1, 18).unwrap();
    let inner = QuadratureGrid::build(1, 36).unwrap();
    for i in 0..8 {
        let opts = LogPshOptions {
            homogeneous: i % 2 == 0,
            even_alpha: true,
            max_degree: 2,
            ..Default::default()
        };
        let f = make_field(&random_log_psh(1, opts, &mut rng));
        let pi0 = bargmann_field(&f, &inner);
        let base = norm_diff_sq(&outer, &f, &pi0);
        for t in [0.5, 1.0, 2.0] {
            let time = SemigroupTime::new(t).unwrap();
            let ptf = pt_field(&f, time, &inner);
            let decayed = norm_diff_sq(&outer, &ptf, &pi0);
            let bound = (-2.0 * t).exp() * base;
            assert!(
                decayed <= bound * (1.0 + 1e-6) + 1e-10,
                "instance {i}, t={t}: ‖P_t f - Π₀f‖² = {decayed} > e^(-2t)·{base}"
            );
        }
    }
}

#[test]
fn strong_continuity_at_zero() {
    // ‖P_t f - f‖ decreases to 0 along t = 1, 0.1, 0.01 for smooth
    // compactly-cut fields.
    let outer = QuadratureGrid::build(1, 16).unwrap();
    let inner = QuadratureGrid::build(1, 32).unwrap();
    let f = ScalarField::abs_power(1, 2.0).compact_cut(3.0);
    let mut previous = f64::INFINITY;
    for t in [1.0, 0.1, 0.01] {
        let time = SemigroupTime::new(t).unwrap();
        let ptf = pt_field(&f, time, &inner);
        let dist = norm_diff_sq(&outer, &ptf, &f).sqrt();
        assert!(dist < previous, "‖P_{t} f - f‖ = {dist} did not decrease");
        previous = dist;
    }
    assert!(previous < 0.02, "‖P_0.01 f - f‖ = {previous} still large");
}

#[test]
fn circular_symmetric_fields_evolve_identically_under_both_semigroups() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let grid = QuadratureGrid::build(1, 32).unwrap();
    for _ in 0..10 {
        let f = make_field(&random_log_psh(
            1,
            LogPshOptions { homogeneous: true, even_alpha: true, ..Default::default() },
            &mut rng,
        ));
        let t = SemigroupTime::new(0.7).unwrap();
        let z = gauss_psh_core::ComplexPoint::scalar(Complex64::new(0.8, -0.4));
        let r = gauss_psh_core::equality_on_circular(&f, t, &z, &grid).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }
}

#[test]
fn rotation_commutes_with_pt() {
    // P_t(f_θ) = (P_t f)_θ at sample points.
    let grid = QuadratureGrid::build(1, 32).unwrap();
    let f = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
        let w = z.coords()[0];
        w * w + w.conj()
    });
    let theta = 0.9;
    let t = SemigroupTime::new(0.5).unwrap();
    let z = gauss_psh_core::ComplexPoint::scalar(Complex64::new(0.4, 0.7));
    let lhs = pt_apply(&f.rotated(theta), t, &z, &grid).unwrap();
    let rhs = pt_apply(&f, t, &z.rotated(theta), &grid).unwrap();
    assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
}

#[test]
fn l4_ratio_slope_matches_the_exponential_family_formula() {
    // ‖P_t f_a‖⁴/‖f_a‖⁴ = C(t,4) e^{a s_t² (4 - 16/2)}: the log-ratio is
    // affine in a with slope -4 s_t², so the ratio is unbounded as a → -∞
    // (P_t contracts no L⁴ ball). The fourth powers e^{4(a+1)x} peak at
    // x = 2(a+1); the rule needs enough nodes to reach past x = 10 at a = 4.
    let grid = QuadratureGrid::build(1, 100).unwrap();
    let t = SemigroupTime::new(1.0).unwrap();
    let s2 = t.s_t() * t.s_t();
    let log_ratio = |a: f64| -> f64 {
        let fa = ScalarField::exp_linear(a);
        let pt_fa = ScalarField::new(1, Growth::ExpLinear, Symmetry::Unknown, move |z| {
            pt_exp_linear_closed_form(a, t, z.coords()[0])
        });
        let fourth = |field: &ScalarField| {
            grid.integrate_fn(|z| Complex64::new(field.eval(z).norm_sqr().powi(2), 0.0))
                .unwrap()
                .re
        };
        (fourth(&pt_fa) / fourth(&fa)).ln()
    };
    let (r1, r2, r4) = (log_ratio(1.0), log_ratio(2.0), log_ratio(4.0));
    let expected_slope = s2 * (4.0 - 16.0 / 2.0); // p - p²/2 at p = 4
    let slope_12 = r2 - r1;
    let slope_24 = (r4 - r2) / 2.0;
    assert!(expected_slope < 0.0);
    assert!(slope_12 < 0.0 && slope_24 < 0.0);
    assert!(
        (slope_12 - expected_slope).abs() < 0.01 * expected_slope.abs(),
        "slope {slope_12} vs {expected_slope}"
    );
    assert!(
        (slope_24 - expected_slope).abs() < 0.01 * expected_slope.abs(),
        "slope {slope_24} vs {expected_slope}"
    );
    // blow-up direction: a → -∞ multiplies the ratio without bound
    assert!(log_ratio(-4.0) > 2.0);
}

#[test]
fn ou_and_pt_limits_agree_with_projection_values() {
    // t → ∞: P_t^{ou} f → ∫f dγ and P_t f → Π₀ f.
    let grid = QuadratureGrid::build(1, 32).unwrap();
    let f = ScalarField::abs_power(1, 2.0);
    let z = gauss_psh_core::ComplexPoint::scalar(Complex64::new(0.9, -0.2));
    let late = SemigroupTime::new(40.0).unwrap();
    let mean = grid.integrate(&f).unwrap();
    let ou_late = ou_apply(&f, late, &z, &grid).unwrap();
    assert!((ou_late - mean).norm() < 1e-9);
    let pt_late = pt_apply(&f, late, &z, &grid).unwrap();
    let projected = gauss_psh_core::bargmann_project(&f, &z, &grid).unwrap();
    assert!((pt_late - projected).norm() < 1e-8, "{pt_late} vs {projected}");
}
