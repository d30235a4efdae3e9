//! Reduced-size invariant suites for every numerics module, runnable as one
//! deterministic batch. Each check returns pass/fail plus a one-line detail
//! for the table.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use gauss_psh_core::alpha::{alpha_prime_two_ways, alpha_second_form, geometric_t_grid};
use gauss_psh_core::calculus::{complex_hessian, real_hessian, wirtinger_grad, FdStep};
use gauss_psh_core::field::{Growth, ScalarField, Symmetry};
use gauss_psh_core::inequality::{
    correlation_gap, hessian_discrepancy_demo, moment_split_report, random_log_psh, GapMethod,
    LogPshOptions, Verdict,
};
use gauss_psh_core::operators::{
    apply, commutation_residual, eigen_residual, ibp_residual, operator_field, split_residual,
    OperatorKind,
};
use gauss_psh_core::permanent::permanent;
use gauss_psh_core::poly::{circular_check, make_field};
use gauss_psh_core::sampling::{abs_moment_mc, CovarianceSpec, McConfig};
use gauss_psh_core::semigroup::{
    bargmann_project, circular_kernel_average, compose_check, equality_on_circular,
    hermitian_symmetry_residual, kernel, ou_apply, pt_apply, pt_exp_linear_closed_form, pt_field,
    KernelKind, SemigroupTime,
};
use gauss_psh_core::{ComplexPoint, QuadratureGrid};

use crate::audit;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Run only the suite with this name.
    pub filter: Option<String>,
    /// Deliberately corrupt a component to prove the harness catches it.
    pub inject_fault: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub const SUITES: [&str; 6] =
    ["calculus", "measure", "fields", "semigroups", "operators", "inequality"];

struct Ctx {
    seed: u64,
    corrupt_bessel: bool,
}

impl Ctx {
    /// The entire-series evaluation under test; the injected fault truncates
    /// it to two terms, which the θ-quadrature cross-check must catch.
    fn bessel(&self, x: f64) -> f64 {
        if self.corrupt_bessel {
            1.0 + x
        } else {
            gauss_psh_core::bessel_b(x).unwrap_or(f64::NAN)
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(salt);
        rng
    }
}

type Check = (&'static str, &'static str, fn(&Ctx) -> (bool, String));

fn point(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::scalar(Complex64::new(re, im))
}

fn check(pass: bool, detail: String) -> (bool, String) {
    (pass, detail)
}

// --------------------------- calculus ---------------------------

fn calculus_wirtinger(_: &Ctx) -> (bool, String) {
    let a = 0.5;
    let f = ScalarField::exp_linear(a);
    let z = point(0.3, 0.2);
    let fz = f.eval(&z);
    match wirtinger_grad(&f, &z, FdStep::for_point(&z)) {
        Ok((dz, dzbar)) => {
            let err = (dz[0] - a * fz).norm().max((dzbar[0] - fz).norm());
            check(err < 1e-8, format!("max grad error {err:.2e} (tol 1e-8)"))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn calculus_hessian_oracles(_: &Ctx) -> (bool, String) {
    let step = FdStep::default();
    let h4 = complex_hessian(&ScalarField::abs_power(1, 4.0), &point(1.0, 0.0), step)
        .map(|h| (h.entry(0, 0).re - 4.0).abs())
        .unwrap_or(f64::NAN);
    let hb = complex_hessian(&ScalarField::abs_power(1, 1.0 / 3.0), &point(1.0, 0.0), step)
        .map(|h| (h.entry(0, 0).re - 1.0 / 36.0).abs())
        .unwrap_or(f64::NAN);
    let hr = real_hessian(&ScalarField::abs_power(1, 4.0), &point(1.0, 0.0), step)
        .map(|h| {
            (h.entry(0, 0) - 12.0)
                .abs()
                .max((h.entry(1, 1) - 4.0).abs())
                .max(h.entry(0, 1).abs())
        })
        .unwrap_or(f64::NAN);
    let worst = h4.max(hb).max(hr);
    check(worst < 1e-5, format!("worst Hessian error {worst:.2e} (tol 1e-5)"))
}

fn calculus_quarter_laplacian(_: &Ctx) -> (bool, String) {
    let f = ScalarField::exp_linear(0.7);
    let z = point(0.2, -0.4);
    let step = FdStep::for_point(&z);
    let hc = complex_hessian(&f, &z, step).unwrap();
    let hr = real_hessian(&f, &z, step).unwrap();
    let gap = (hc.entry(0, 0).re - 0.25 * hr.trace()).abs();
    check(gap < 1e-8, format!("|tr D²_C - ¼ tr D²| = {gap:.2e}"))
}

fn calculus_fd_convergence(_: &Ctx) -> (bool, String) {
    let a = 0.5;
    let f = ScalarField::exp_linear(a);
    let z = point(0.4, 0.0);
    let exact = a * f.eval(&z);
    let err = |h: f64| {
        (complex_hessian(&f, &z, FdStep::new(h).unwrap()).unwrap().entry(0, 0) - exact).norm()
    };
    let factor = err(1e-2) / err(5e-3);
    check((3.5..=4.5).contains(&factor), format!("halving factor {factor:.3} in [3.5, 4.5]"))
}

fn calculus_psd_of_psh(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(1);
    let step = FdStep::default();
    let mut worst = f64::INFINITY;
    for _ in 0..10 {
        let n = 1 + rng.random_range(0..2);
        let product = random_log_psh(n, LogPshOptions::default(), &mut rng);
        for _ in 0..10 {
            let z = ComplexPoint::new(
                (0..n)
                    .map(|_| {
                        Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
                    })
                    .collect(),
            )
            .unwrap();
            if product.factors().iter().all(|(p, _)| p.eval(&z).unwrap().norm() > 0.3) {
                let h = complex_hessian(&make_field(&product), &z, step).unwrap();
                let min_eig =
                    h.eigenvalues().into_iter().fold(f64::INFINITY, f64::min) / h.frobenius().max(1.0);
                worst = worst.min(min_eig);
                break;
            }
        }
    }
    check(worst > -1e-6, format!("min relative eigenvalue {worst:.2e} (tol -1e-6)"))
}

// --------------------------- measure ---------------------------

fn measure_grid_normalization(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 20).unwrap();
    let one = (grid.integrate_fn(|_| Complex64::ONE).unwrap().re - 1.0).abs();
    let second = (grid
        .integrate_fn(|z| Complex64::new(z.norm_sqr(), 0.0))
        .unwrap()
        .re
        - 1.0)
        .abs();
    let sixth = (grid
        .integrate_fn(|z| Complex64::new(z.norm_sqr().powi(3), 0.0))
        .unwrap()
        .re
        - 6.0)
        .abs();
    let worst = one.max(second).max(sixth / 6.0);
    check(worst < 1e-10, format!("normalization error {worst:.2e} (tol 1e-10)"))
}

fn measure_grid_monomials(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(2);
    let grid = QuadratureGrid::build(2, 8).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let a: Vec<u32> = (0..2).map(|_| rng.random_range(0..4)).collect();
        let b: Vec<u32> = (0..2).map(|_| rng.random_range(0..4)).collect();
        let value = grid
            .integrate_fn(|z| {
                let c = z.coords();
                c[0].powu(a[0]) * c[1].powu(a[1]) * c[0].conj().powu(b[0]) * c[1].conj().powu(b[1])
            })
            .unwrap();
        let expected = if a == b {
            a.iter().map(|&k| (1..=k as u64).product::<u64>() as f64).product()
        } else {
            0.0
        };
        worst = worst.max((value - Complex64::new(expected, 0.0)).norm() / (1.0 + expected));
    }
    check(worst < 1e-9, format!("worst monomial error {worst:.2e} (tol 1e-9)"))
}

fn measure_laplace_identity(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 30).unwrap();
    let v = grid.integrate(&ScalarField::exp_linear(0.5)).unwrap();
    let err = (v - Complex64::new(0.5f64.exp(), 0.0)).norm();
    check(err < 1e-10, format!("∫f_a dγ error {err:.2e} (tol 1e-10)"))
}

fn measure_permanent_oracles(ctx: &Ctx) -> (bool, String) {
    let rho = std::f64::consts::FRAC_1_SQRT_2;
    let corr = vec![
        vec![Complex64::ONE, Complex64::new(rho, 0.0)],
        vec![Complex64::new(rho, 0.0), Complex64::ONE],
    ];
    let err = (permanent(&corr).unwrap().re - 1.5).abs();
    let mut rng = ctx.rng(3);
    let mut min_re = f64::INFINITY;
    let mut max_im = 0.0f64;
    for _ in 0..5 {
        let spec = gauss_psh_core::inequality::random_covariance_spec(4, 3, &mut rng);
        let per = permanent(&spec.covariance().rows()).unwrap();
        min_re = min_re.min(per.re);
        max_im = max_im.max(per.im.abs() / (1.0 + per.norm()));
    }
    check(
        err < 1e-14 && min_re >= -1e-10 && max_im < 1e-10,
        format!("ρ-case error {err:.1e}, min PSD permanent {min_re:.2e}, max rel imag {max_im:.1e}"),
    )
}

fn measure_wick_vs_mc(ctx: &Ctx) -> (bool, String) {
    let cases = audit::moment_audit(2, 100_000, 3, ctx.seed ^ 0xA5).unwrap();
    let worst = cases.iter().map(audit::MomentCase::sigma_distance).fold(0.0, f64::max);
    check(worst <= 4.0, format!("worst |wick - mc| = {worst:.2}σ over {} cases", cases.len()))
}

fn measure_seed_determinism(ctx: &Ctx) -> (bool, String) {
    let spec = CovarianceSpec::new(vec![vec![Complex64::ONE]]).unwrap();
    let cfg = McConfig::new(20_000, ctx.seed, 10).unwrap();
    let (a, sa) = abs_moment_mc(&spec, &[2.0], &cfg).unwrap();
    let (b, sb) = abs_moment_mc(&spec, &[2.0], &cfg).unwrap();
    check(
        a.to_bits() == b.to_bits() && sa.to_bits() == sb.to_bits(),
        format!("two runs: {a} and {b} (bit-identical required)"),
    )
}

// --------------------------- fields ---------------------------

fn fields_poly_eval(_: &Ctx) -> (bool, String) {
    let q = gauss_psh_core::HoloPoly::new(2, vec![(vec![1, 1], Complex64::ONE)]).unwrap();
    let v = q
        .eval(&ComplexPoint::new(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0)]).unwrap())
        .unwrap();
    let err = (v - Complex64::new(-1.0, 0.0)).norm();
    check(err < 1e-15, format!("z₁z₂ at (i,i) error {err:.1e}"))
}

fn fields_circular_tags(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(4);
    let mut all = true;
    for i in 0..10 {
        let product = random_log_psh(
            1 + (i % 2),
            LogPshOptions { homogeneous: true, ..Default::default() },
            &mut rng,
        );
        let f = make_field(&product);
        all &= f.is_circular() && circular_check(&f, 20, 1e-10, ctx.seed + i as u64);
    }
    let re_field = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
        Complex64::new(z.coords()[0].re, 0.0)
    });
    let negative = !circular_check(&re_field, 20, 1e-10, ctx.seed);
    check(all && negative, format!("10 homogeneous products circular: {all}, Re(w) caught: {negative}"))
}

fn fields_bessel_series(ctx: &Ctx) -> (bool, String) {
    let b0 = ctx.bessel(0.0);
    // θ-quadrature oracle at x = 2.5: (1/2π)∫ e^{2√x cos θ} dθ
    let x: f64 = 2.5;
    let nodes = 512;
    let mut acc = 0.0;
    for k in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (nodes as f64);
        acc += (2.0 * x.sqrt() * theta.cos()).exp();
    }
    let oracle = acc / nodes as f64;
    let err = (ctx.bessel(x) - oracle).abs() / oracle;
    check(
        (b0 - 1.0).abs() < 1e-15 && err < 1e-10,
        format!("B(0) = {b0}, θ-oracle relative error {err:.2e} (tol 1e-10)"),
    )
}

fn fields_bessel_convexity(ctx: &Ctx) -> (bool, String) {
    let xs: Vec<f64> = (0..=100).map(|i| 0.1 * i as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| ctx.bessel(x)).collect();
    let monotone = vals.windows(2).all(|w| w[1] >= w[0]);
    let convex = vals.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] >= -1e-12);
    check(monotone && convex, format!("monotone: {monotone}, convex: {convex} on [0, 10]"))
}

// --------------------------- semigroups ---------------------------

fn semigroups_ou_mehler(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 20).unwrap();
    let t = SemigroupTime::new(0.9).unwrap();
    let z = point(0.4, -1.1);
    let got = ou_apply(&ScalarField::abs_power(1, 2.0), t, &z, &grid).unwrap().re;
    let want = (-0.9f64).exp() * z.norm_sqr() + 1.0 - (-0.9f64).exp();
    let err = (got - want).abs();
    check(err < 1e-10, format!("Mehler action error {err:.2e} (tol 1e-10)"))
}

fn semigroups_pt_identities(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 40).unwrap();
    let t = SemigroupTime::new(1.0).unwrap();
    let sq = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
        z.coords()[0] * z.coords()[0]
    });
    let z = point(0.7, 0.4);
    let holo_err =
        (pt_apply(&sq, t, &z, &grid).unwrap() - z.coords()[0] * z.coords()[0]).norm();
    let a = 0.5;
    let z2 = point(0.3, 0.1);
    let fam_err = (pt_apply(&ScalarField::exp_linear(a), t, &z2, &grid).unwrap()
        - pt_exp_linear_closed_form(a, t, z2.coords()[0]))
    .norm();
    check(
        holo_err < 1e-9 && fam_err < 1e-8,
        format!("holomorphic identity {holo_err:.1e}, exp-family {fam_err:.1e} (tol 1e-9/1e-8)"),
    )
}

fn semigroups_kernel_mass(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 60).unwrap();
    let t = SemigroupTime::new(0.6).unwrap();
    let z = point(0.3, -0.2);
    let pi = std::f64::consts::PI;
    let mut worst = 0.0f64;
    for kind in [KernelKind::Ou, KernelKind::Dbar] {
        let mass = grid
            .integrate_fn(|w| {
                kernel(kind, t, &z, w).unwrap() * Complex64::new((w.norm_sqr() + pi.ln()).exp(), 0.0)
            })
            .unwrap();
        worst = worst.max((mass - Complex64::ONE).norm());
    }
    check(worst < 1e-8, format!("kernel mass error {worst:.2e} (tol 1e-8)"))
}

fn semigroups_kernel_hermitian(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(5);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let t = SemigroupTime::new(0.2 + rng.random::<f64>() * 2.0).unwrap();
        let z = point(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
        let w = point(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
        for kind in [KernelKind::Dbar, KernelKind::Ou] {
            worst = worst.max(hermitian_symmetry_residual(kind, t, &z, &w).unwrap());
        }
    }
    check(worst < 1e-12, format!("worst γ-kernel symmetry residual {worst:.2e} (tol 1e-12)"))
}

fn semigroups_compose(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 80).unwrap();
    let r = compose_check(
        SemigroupTime::new(0.5).unwrap(),
        SemigroupTime::new(0.5).unwrap(),
        &ComplexPoint::zero(1),
        &ComplexPoint::zero(1),
        &grid,
    )
    .unwrap();
    check(r < 1e-8, format!("composition residual {r:.2e} (tol 1e-8)"))
}

fn semigroups_circular_average(ctx: &Ctx) -> (bool, String) {
    let t = SemigroupTime::new(1.0).unwrap();
    let (lhs, rhs) = circular_kernel_average(t, &point(1.0, 0.0), &point(1.0, 0.0), 256).unwrap();
    // the same closed form with the B factor routed through the context,
    // so an injected series fault is caught here as well
    let s2 = t.s_t() * t.s_t();
    let c2 = t.c_t() * t.c_t();
    let prefactor = (-(std::f64::consts::PI * s2).ln() - 1.0 / s2 - c2 / s2).exp();
    let via_ctx = prefactor * ctx.bessel(c2 / (s2 * s2));
    let err = (lhs - rhs).abs().max((rhs - via_ctx).abs()) / rhs.abs().max(f64::MIN_POSITIVE);
    check(err < 1e-10, format!("θ-average vs closed form {err:.2e} (tol 1e-10)"))
}

fn semigroups_ou_pt_equality(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 40).unwrap();
    let r = equality_on_circular(
        &ScalarField::abs_power(1, 2.0),
        SemigroupTime::new(0.7).unwrap(),
        &point(1.0, 1.0),
        &grid,
    )
    .unwrap();
    check(r < 1e-8, format!("|P_t f - P_t^ou f| = {r:.2e} (tol 1e-8)"))
}

fn semigroups_contraction(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(6);
    let outer = QuadratureGrid::build(1, 12).unwrap();
    let inner = QuadratureGrid::build(1, 24).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let f = make_field(&random_log_psh(
            1,
            LogPshOptions { even_alpha: true, max_degree: 2, ..Default::default() },
            &mut rng,
        ));
        let norm_f = outer.l2_norm(&f).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let ptf = pt_field(&f, SemigroupTime::new(t).unwrap(), &inner);
            worst = worst.max(outer.l2_norm(&ptf).unwrap() / norm_f - 1.0);
        }
    }
    check(worst <= 1e-7, format!("max ‖P_t f‖/‖f‖ - 1 = {worst:.2e} (tol 1e-7)"))
}

fn semigroups_hormander(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(7);
    let outer = QuadratureGrid::build(1, 18).unwrap();
    let inner = QuadratureGrid::build(1, 36).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..2 {
        let f = make_field(&random_log_psh(
            1,
            LogPshOptions { even_alpha: true, max_degree: 2, ..Default::default() },
            &mut rng,
        ));
        for p in audit::hormander_check(&f, &outer, &inner, &[0.5, 1.0, 2.0]).unwrap() {
            worst = worst.max(p.lhs - p.bound * (1.0 + 1e-6));
        }
    }
    check(worst <= 1e-10, format!("worst ‖P_t f - Π₀f‖² excess {worst:.2e}"))
}

fn semigroups_continuity(_: &Ctx) -> (bool, String) {
    let outer = QuadratureGrid::build(1, 16).unwrap();
    let inner = QuadratureGrid::build(1, 32).unwrap();
    let f = ScalarField::abs_power(1, 2.0).compact_cut(3.0);
    let dist = |t: f64| {
        let ptf = pt_field(&f, SemigroupTime::new(t).unwrap(), &inner);
        outer
            .integrate_fn(|z| Complex64::new((ptf.eval(z) - f.eval(z)).norm_sqr(), 0.0))
            .unwrap()
            .re
            .sqrt()
    };
    let (d1, d01, d001) = (dist(1.0), dist(0.1), dist(0.01));
    check(
        d001 < d01 && d01 < d1 && d001 < 0.02,
        format!("‖P_t f - f‖ at t = 1, 0.1, 0.01: {d1:.3}, {d01:.3}, {d001:.4}"),
    )
}

// --------------------------- operators ---------------------------

fn operators_eigen_witnesses(_: &Ctx) -> (bool, String) {
    let step = FdStep::default();
    let pts: Vec<ComplexPoint> =
        vec![point(0.5, 0.0), point(1.0, 1.0), point(-0.3, 0.8), point(0.2, -1.1)];
    let conj_field =
        ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| z.coords()[0].conj());
    let radial = ScalarField::new(1, Growth::Polynomial, Symmetry::Circular, |z| {
        Complex64::new(z.coords()[0].norm_sqr() - 1.0, 0.0)
    });
    let r1 = eigen_residual(&conj_field, OperatorKind::L, Complex64::ONE, &pts, step).unwrap();
    let r2 =
        eigen_residual(&conj_field, OperatorKind::Ou, Complex64::new(0.5, 0.0), &pts, step).unwrap();
    let r3 = eigen_residual(&radial, OperatorKind::L, Complex64::ONE, &pts, step).unwrap();
    let r4 = eigen_residual(&radial, OperatorKind::Ou, Complex64::ONE, &pts, step).unwrap();
    let worst = r1.max(r2).max(r3).max(r4);
    check(worst < 1e-6, format!("worst eigen residual {worst:.2e} (tol 1e-6)"))
}

fn operators_ladder(_: &Ctx) -> (bool, String) {
    let step = FdStep::new(1e-3).unwrap();
    let pts: Vec<ComplexPoint> = vec![point(0.5, 0.0), point(-0.3, 0.8)];
    let conj_field =
        ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| z.coords()[0].conj());
    let bf = operator_field(OperatorKind::Creation(0), &conj_field, step);
    let up = eigen_residual(&bf, OperatorKind::L, Complex64::new(2.0, 0.0), &pts, step).unwrap();
    let af = operator_field(OperatorKind::Annihilation(0), &conj_field, step);
    let down = eigen_residual(&af, OperatorKind::L, Complex64::ZERO, &pts, step).unwrap();
    check(up < 1e-5 && down < 1e-5, format!("ladder residuals up {up:.1e}, down {down:.1e}"))
}

fn operators_commutator(_: &Ctx) -> (bool, String) {
    let step = FdStep::new(1e-3).unwrap();
    let f = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
        z.coords()[0] * z.coords()[0]
    });
    let ab = operator_field(
        OperatorKind::Annihilation(0),
        &operator_field(OperatorKind::Creation(0), &f, step),
        step,
    );
    let ba = operator_field(
        OperatorKind::Creation(0),
        &operator_field(OperatorKind::Annihilation(0), &f, step),
        step,
    );
    let z = point(0.4, -0.6);
    let err = ((ab.eval(&z) - ba.eval(&z)) - f.eval(&z)).norm();
    check(err < 1e-5, format!("[a,b]f - f = {err:.2e} (tol 1e-5)"))
}

fn operators_split(_: &Ctx) -> (bool, String) {
    let r1 = split_residual(&ScalarField::abs_power(1, 2.0), &point(0.7, -0.2), FdStep::default())
        .unwrap();
    let h = ScalarField::abs_power(1, 4.0);
    let z = point(0.8, 0.5);
    let lf = apply(OperatorKind::L, &h, &z, FdStep::default()).unwrap();
    let ouf = apply(OperatorKind::Ou, &h, &z, FdStep::default()).unwrap();
    let r2 = (lf - ouf).norm();
    check(
        r1 < 1e-8 && r2 < 1e-7,
        format!("split residual {r1:.1e}, circular L = Λ residual {r2:.1e}"),
    )
}

fn operators_ibp(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 20).unwrap();
    let step = FdStep::default();
    let f2 = ScalarField::abs_power(1, 2.0);
    let f4 = ScalarField::abs_power(1, 4.0);
    let r1 = ibp_residual(&f2, &f2, &grid, step).unwrap();
    let r2 = ibp_residual(&f4, &f2, &grid, step).unwrap();
    check(r1 < 1e-6 && r2 < 1e-6, format!("ibp residuals {r1:.1e}, {r2:.1e} (tol 1e-6)"))
}

fn operators_commutation(ctx: &Ctx) -> (bool, String) {
    let mut rng = ctx.rng(8);
    let grid = QuadratureGrid::build(1, 30).unwrap();
    let step = FdStep::default();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let f = make_field(&random_log_psh(
            1,
            LogPshOptions { even_alpha: true, max_degree: 2, ..Default::default() },
            &mut rng,
        ));
        let t = SemigroupTime::new(0.2 + rng.random::<f64>() * 1.5).unwrap();
        let z = point(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let (holo, anti) = commutation_residual(&f, t, &z, 0, &grid, step).unwrap();
        worst = worst.max(holo).max(anti);
    }
    check(worst < 1e-5, format!("worst commutation residual {worst:.2e} (tol 1e-5)"))
}

fn operators_nonpositivity(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 20).unwrap();
    let step = FdStep::default();
    let mut worst = f64::NEG_INFINITY;
    for f in [ScalarField::abs_power(1, 2.0), ScalarField::abs_power(1, 4.0)] {
        let lf = operator_field(OperatorKind::L, &f, step);
        let v = grid.integrate_fn(|z| lf.eval(z) * f.eval(z).conj()).unwrap();
        worst = worst.max(v.re);
    }
    check(worst <= 1e-8, format!("max ∫(Lf)f̄ dγ = {worst:.2e} (must be ≤ 0)"))
}

// --------------------------- inequality ---------------------------

fn inequality_correlation_oracle(_: &Ctx) -> (bool, String) {
    let f = ScalarField::abs_power(1, 2.0);
    let r = correlation_gap(&f, &f, GapMethod::Grid { m: 24 }).unwrap();
    let err = (r.margin - 1.0).abs();
    let c = ScalarField::constant(1, Complex64::ONE);
    let rc = correlation_gap(&c, &c, GapMethod::Grid { m: 12 }).unwrap();
    check(
        err < 1e-6 && rc.margin.abs() < 1e-10 && r.verdict == Verdict::Holds,
        format!("|margin - 1| = {err:.2e}, constant margin {:.1e}", rc.margin),
    )
}

fn inequality_correlation_audit(ctx: &Ctx) -> (bool, String) {
    let audit = audit::correlation_audit(15, ctx.seed ^ 0xC0).unwrap();
    check(
        audit.violations == 0,
        format!("{} violations over {} instances", audit.violations, audit.instances.len()),
    )
}

fn inequality_moment_split(ctx: &Ctx) -> (bool, String) {
    let rho = std::f64::consts::FRAC_1_SQRT_2;
    let spec = CovarianceSpec::new(vec![
        vec![Complex64::ONE, Complex64::ZERO],
        vec![Complex64::new(rho, 0.0), Complex64::new((1.0 - rho * rho).sqrt(), 0.0)],
    ])
    .unwrap();
    let cfg = McConfig::new(50_000, ctx.seed, 10).unwrap();
    let r = moment_split_report(&spec, &[2.0, 2.0], 1, &cfg).unwrap();
    let exact = (r.lhs - 1.5).abs() < 1e-12 && (r.margin - 0.5).abs() < 1e-12;
    let id = CovarianceSpec::new(vec![
        vec![Complex64::ONE, Complex64::ZERO],
        vec![Complex64::ZERO, Complex64::ONE],
    ])
    .unwrap();
    let tight = moment_split_report(&id, &[2.0, 4.0], 1, &cfg).unwrap().margin.abs() < 1e-10;
    check(exact && tight, format!("ρ-case margin {:.6} (want 0.5), independent tight: {tight}", r.margin))
}

fn inequality_lieb_audit(ctx: &Ctx) -> (bool, String) {
    let audit = audit::lieb_audit(10, 6, ctx.seed ^ 0xF1).unwrap();
    check(
        audit.min_margin >= -1e-9,
        format!("min margin {:.2e} over {} checks (tol -1e-9)", audit.min_margin, audit.checks),
    )
}

fn inequality_alpha_closed_form(_: &Ctx) -> (bool, String) {
    let grid = QuadratureGrid::build(1, 16).unwrap();
    let f = ScalarField::abs_power(1, 2.0);
    let ts = geometric_t_grid(0.1, 40.0, 10);
    let curve = gauss_psh_core::alpha_curve(&f, &f, &ts, &grid).unwrap();
    let worst = curve
        .t
        .iter()
        .zip(&curve.alpha)
        .map(|(t, a)| (a - (1.0 + (-t).exp())).abs())
        .fold(0.0, f64::max);
    let (fd, integral) = alpha_prime_two_ways(&f, &f, 1.0, &grid, FdStep::default()).unwrap();
    let prime_err = (fd + (-1.0f64).exp()).abs().max((integral + (-1.0f64).exp()).abs());
    let second = alpha_second_form(&f, &f, 1.0, &grid, FdStep::default()).unwrap();
    let second_err = (second - (-1.0f64).exp()).abs();
    check(
        worst < 1e-8 && prime_err < 1e-5 && second_err < 1e-5,
        format!("α error {worst:.1e}, α' error {prime_err:.1e}, α'' error {second_err:.1e}"),
    )
}

fn inequality_alpha_audit(ctx: &Ctx) -> (bool, String) {
    let mut worst_first = f64::NEG_INFINITY;
    let mut worst_d2 = f64::INFINITY;
    let mut worst_cross = 0.0f64;
    let mut tol = 0.0f64;
    for i in 0..2 {
        let a = audit::alpha_audit_instance(ctx.seed ^ 0xAA, i).unwrap();
        worst_first = worst_first.max(a.max_first_diff);
        worst_d2 = worst_d2.min(a.min_d2);
        worst_cross = worst_cross.max(a.max_cross);
        tol = tol.max(a.tol);
    }
    check(
        worst_first <= tol && worst_d2 >= -tol && worst_cross < 1e-6,
        format!("max Δα = {worst_first:.2e}, min d2 = {worst_d2:.2e} (tol {tol:.1e}), cross {worst_cross:.1e}"),
    )
}

fn inequality_discrepancy(_: &Ctx) -> (bool, String) {
    let step = FdStep::default();
    let (c1, r1) = hessian_discrepancy_demo(&point(1.0, 0.0), step).unwrap();
    let (c8, r8) = hessian_discrepancy_demo(&point(8.0, 0.0), step).unwrap();
    let e1 = (r1 + 4.0 / 3.0).abs();
    let e8 = (r8 + 8.0 / 3.0).abs();
    check(
        c1 >= 0.0 && c8 >= 0.0 && e1 < 1e-3 && e8 < 1e-3,
        format!("real traces {r1:.5}, {r8:.5} (want -4/3, -8/3); complex ≥ 0: {}", c1 >= 0.0 && c8 >= 0.0),
    )
}

fn inequality_bargmann_constant(_: &Ctx) -> (bool, String) {
    // circular field: Π₀ f is the constant ∫f dγ at every z
    let grid = QuadratureGrid::build(1, 40).unwrap();
    let f = ScalarField::abs_power(1, 2.0);
    let mut worst = 0.0f64;
    for z in [point(0.0, 0.0), point(0.8, -0.5), point(-1.2, 0.3)] {
        worst = worst.max((bargmann_project(&f, &z, &grid).unwrap() - Complex64::ONE).norm());
    }
    check(worst < 1e-9, format!("max |Π₀f - ∫f dγ| = {worst:.2e} (tol 1e-9)"))
}

const CHECKS: &[Check] = &[
    ("calculus", "wirtinger-exp-family", calculus_wirtinger),
    ("calculus", "hessian-oracles", calculus_hessian_oracles),
    ("calculus", "quarter-laplacian", calculus_quarter_laplacian),
    ("calculus", "fd-convergence", calculus_fd_convergence),
    ("calculus", "psd-of-psh", calculus_psd_of_psh),
    ("measure", "grid-normalization", measure_grid_normalization),
    ("measure", "grid-monomials", measure_grid_monomials),
    ("measure", "laplace-identity", measure_laplace_identity),
    ("measure", "permanent-oracles", measure_permanent_oracles),
    ("measure", "wick-vs-mc", measure_wick_vs_mc),
    ("measure", "seed-determinism", measure_seed_determinism),
    ("fields", "poly-eval", fields_poly_eval),
    ("fields", "circular-tags", fields_circular_tags),
    ("fields", "bessel-series", fields_bessel_series),
    ("fields", "bessel-convexity", fields_bessel_convexity),
    ("semigroups", "ou-mehler", semigroups_ou_mehler),
    ("semigroups", "pt-identities", semigroups_pt_identities),
    ("semigroups", "kernel-mass", semigroups_kernel_mass),
    ("semigroups", "kernel-hermitian", semigroups_kernel_hermitian),
    ("semigroups", "compose", semigroups_compose),
    ("semigroups", "circular-average", semigroups_circular_average),
    ("semigroups", "ou-pt-equality", semigroups_ou_pt_equality),
    ("semigroups", "contraction", semigroups_contraction),
    ("semigroups", "hormander", semigroups_hormander),
    ("semigroups", "continuity-at-zero", semigroups_continuity),
    ("operators", "eigen-witnesses", operators_eigen_witnesses),
    ("operators", "ladder", operators_ladder),
    ("operators", "commutator", operators_commutator),
    ("operators", "split-identity", operators_split),
    ("operators", "integration-by-parts", operators_ibp),
    ("operators", "commutation", operators_commutation),
    ("operators", "nonpositivity", operators_nonpositivity),
    ("inequality", "correlation-oracle", inequality_correlation_oracle),
    ("inequality", "correlation-audit", inequality_correlation_audit),
    ("inequality", "moment-split", inequality_moment_split),
    ("inequality", "lieb-audit", inequality_lieb_audit),
    ("inequality", "alpha-closed-form", inequality_alpha_closed_form),
    ("inequality", "alpha-audit", inequality_alpha_audit),
    ("inequality", "bargmann-constant", inequality_bargmann_constant),
    ("inequality", "discrepancy", inequality_discrepancy),
];

/// Runs (a filtered subset of) the suites; outcomes keep declaration order.
pub fn run(config: &SelftestConfig) -> Result<Vec<CheckOutcome>, String> {
    if let Some(filter) = &config.filter {
        if !SUITES.contains(&filter.as_str()) {
            return Err(format!(
                "unknown suite '{filter}'; available: {}",
                SUITES.join(", ")
            ));
        }
    }
    if let Some(fault) = &config.inject_fault {
        if fault != "bseries-cutoff" {
            return Err(format!("unknown fault '{fault}'; available: bseries-cutoff"));
        }
    }
    let ctx = Ctx {
        seed: config.seed,
        corrupt_bessel: config.inject_fault.as_deref() == Some("bseries-cutoff"),
    };
    let selected: Vec<&Check> = CHECKS
        .iter()
        .filter(|(suite, _, _)| config.filter.as_deref().map_or(true, |f| f == *suite))
        .collect();
    Ok(selected
        .par_iter()
        .map(|(suite, name, f)| {
            let (pass, detail) = f(&ctx);
            CheckOutcome { suite, name, pass, detail }
        })
        .collect())
}

/// Plain-text table, deterministic for a fixed seed.
pub fn render_table(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<12} {:<24} {:<6} detail\n", "suite", "check", "status"));
    out.push_str(&format!("{}\n", "-".repeat(72)));
    for o in outcomes {
        out.push_str(&format!(
            "{:<12} {:<24} {:<6} {}\n",
            o.suite,
            o.name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        ));
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    out.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        outcomes.len(),
        outcomes.len() - failed,
        failed
    ));
    out
}
