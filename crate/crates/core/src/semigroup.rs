//! The Ornstein–Uhlenbeck semigroup, the ∂̄-semigroup P_t, their explicit
//! kernels, and the Bargmann projection Π₀.
//!
//! P_t^{ou} f(z) = ∫ f(e^{-t/2} z + √(1-e^{-t}) w) dγ(w) is computed as a
//! Mehler average. P_t is computed from the shifted representation
//! P_t f(z) = ∫ f(z + s_t ξ) e^{-s_t z̄·ξ} dγ(ξ); its kernel against
//! Lebesgue measure is
//!   K_t(z,w) = π^{-n}(1-e^{-t})^{-n} exp(z·w̄ - e^{-t}|z-w|²/(1-e^{-t}) - |w|²).

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{CoreError, Result};
use crate::field::{Growth, ScalarField};
use crate::grid::QuadratureGrid;
use crate::point::{dot_conj, ComplexPoint};
use crate::series::bessel_b;

/// Semigroup time t ≥ 0 with the derived constants c_t = e^{-t/2} and
/// s_t = √(1-e^{-t}); c_t² + s_t² = 1. t = +∞ is allowed (c = 0, s = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupTime {
    t: f64,
    c: f64,
    s: f64,
}

impl SemigroupTime {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(CoreError::InvalidInput(alloc::format!("time must be >= 0, got {t}")));
        }
        let c = (-0.5 * t).exp();
        // 1 - e^{-t} via expm1 to keep precision for small t
        let s_sq = -libm::expm1(-t);
        Ok(Self { t, c, s: s_sq.sqrt() })
    }

    pub fn infinite() -> Self {
        Self { t: f64::INFINITY, c: 0.0, s: 1.0 }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// c_t = e^{-t/2}.
    pub fn c_t(&self) -> f64 {
        self.c
    }

    /// s_t = √(1-e^{-t}).
    pub fn s_t(&self) -> f64 {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.t == 0.0
    }
}

fn ensure_quadrature_growth(f: &ScalarField) -> Result<()> {
    match f.growth() {
        Growth::Polynomial | Growth::ExpLinear => Ok(()),
        Growth::Other => Err(CoreError::UnsupportedGrowth),
    }
}

fn check_dims(f: &ScalarField, z: &ComplexPoint, grid: &QuadratureGrid) -> Result<()> {
    if f.dim() != grid.dim() {
        return Err(CoreError::DimensionMismatch { expected: f.dim(), got: grid.dim() });
    }
    if z.dim() != grid.dim() {
        return Err(CoreError::DimensionMismatch { expected: grid.dim(), got: z.dim() });
    }
    Ok(())
}

/// P_t^{ou} f(z): Gaussian average of f(c_t z + s_t w).
pub fn ou_apply(
    f: &ScalarField,
    time: SemigroupTime,
    z: &ComplexPoint,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    check_dims(f, z, grid)?;
    ensure_quadrature_growth(f)?;
    if time.is_zero() {
        return Ok(f.eval(z));
    }
    let (c, s) = (time.c_t(), time.s_t());
    let n = z.dim();
    let mut shifted = ComplexPoint::zero(n);
    grid.integrate_fn(|w| {
        for j in 0..n {
            shifted.coords_mut()[j] = c * z.coords()[j] + s * w.coords()[j];
        }
        f.eval(&shifted)
    })
}

/// P_t f(z) = ∫ f(z + s_t ξ) e^{-s_t z̄·ξ} dγ(ξ).
///
/// The complex weight makes the rule less accurate than for P_t^{ou} at the
/// same node count; callers wanting matched tolerances should double the
/// per-axis nodes of `grid`.
pub fn pt_apply(
    f: &ScalarField,
    time: SemigroupTime,
    z: &ComplexPoint,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    check_dims(f, z, grid)?;
    ensure_quadrature_growth(f)?;
    if time.is_zero() {
        return Ok(f.eval(z));
    }
    let s = time.s_t();
    let n = z.dim();
    let mut shifted = ComplexPoint::zero(n);
    grid.integrate_fn(|xi| {
        for j in 0..n {
            shifted.coords_mut()[j] = z.coords()[j] + s * xi.coords()[j];
        }
        let weight = (-s * dot_conj(xi.coords(), z.coords())).exp();
        f.eval(&shifted) * weight
    })
}

/// Which of the two kernels to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// K_t, the kernel of the ∂̄-semigroup P_t.
    Dbar,
    /// K_t^{ou}, the Mehler kernel of P_t^{ou}.
    Ou,
}

/// log of the kernel against Lebesgue measure (kernels are exponentials of
/// explicit quadratics; working in log space avoids spurious overflow when
/// they appear under e^{|z|²}-type changes of measure).
fn kernel_log(kind: KernelKind, time: SemigroupTime, z: &ComplexPoint, w: &ComplexPoint) -> Complex64 {
    let n = z.dim() as f64;
    let c2 = time.c_t() * time.c_t(); // e^{-t}
    let s2 = time.s_t() * time.s_t(); // 1 - e^{-t}
    let log_prefactor = -n * (core::f64::consts::PI * s2).ln();
    match kind {
        KernelKind::Dbar => {
            let zw = dot_conj(z.coords(), w.coords()); // z·w̄
            let diff_sq: f64 = z
                .coords()
                .iter()
                .zip(w.coords())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            Complex64::new(log_prefactor - c2 * diff_sq / s2 - w.norm_sqr(), 0.0) + zw
        }
        KernelKind::Ou => {
            let dist_sq: f64 = w
                .coords()
                .iter()
                .zip(z.coords())
                .map(|(wj, zj)| (wj - time.c_t() * zj).norm_sqr())
                .sum();
            Complex64::new(log_prefactor - dist_sq / s2, 0.0)
        }
    }
}

/// Closed-form kernel value including the π^{-n}(1-e^{-t})^{-n} prefactor.
/// Errors at t = 0 where both kernels are singular.
pub fn kernel(
    kind: KernelKind,
    time: SemigroupTime,
    z: &ComplexPoint,
    w: &ComplexPoint,
) -> Result<Complex64> {
    if z.dim() != w.dim() {
        return Err(CoreError::DimensionMismatch { expected: z.dim(), got: w.dim() });
    }
    if time.is_zero() {
        return Err(CoreError::SingularKernel);
    }
    Ok(kernel_log(kind, time, z, w).exp())
}

/// Deviation from the Hermitian symmetry of the kernel taken against γ,
/// |K(z,w) e^{|w|²} - conj(K(w,z)) e^{|z|²}| relative to their magnitude.
/// (Against Lebesgue measure the kernel carries an extra e^{-|w|²} in its
/// second argument, so the symmetry holds in this γ-weighted form.)
pub fn hermitian_symmetry_residual(
    kind: KernelKind,
    time: SemigroupTime,
    z: &ComplexPoint,
    w: &ComplexPoint,
) -> Result<f64> {
    if time.is_zero() {
        return Err(CoreError::SingularKernel);
    }
    let a = kernel_log(kind, time, z, w) + Complex64::new(w.norm_sqr(), 0.0);
    let b = kernel_log(kind, time, w, z) + Complex64::new(z.norm_sqr(), 0.0);
    let (ea, eb) = (a.exp(), b.exp().conj());
    Ok((ea - eb).norm() / ea.norm().max(eb.norm()).max(f64::MIN_POSITIVE))
}

/// Relative residual of the composition identity
/// ∫ K_t(z,w) K_s(ξ,z) dℓ(z) = K_{t+s}(ξ,w), with the z-integral on `grid`.
pub fn compose_check(
    t: SemigroupTime,
    s: SemigroupTime,
    xi: &ComplexPoint,
    w: &ComplexPoint,
    grid: &QuadratureGrid,
) -> Result<f64> {
    if t.is_zero() || s.is_zero() {
        return Err(CoreError::SingularKernel);
    }
    let n = grid.dim() as f64;
    let log_pi_n = n * core::f64::consts::PI.ln();
    // dℓ(z) = π^n e^{|z|²} dγ(z); assemble the whole exponent first
    let lhs = grid.integrate_fn(|z| {
        let expo = kernel_log(KernelKind::Dbar, t, z, w)
            + kernel_log(KernelKind::Dbar, s, xi, z)
            + Complex64::new(z.norm_sqr() + log_pi_n, 0.0);
        expo.exp()
    })?;
    let rhs = kernel(KernelKind::Dbar, SemigroupTime::new(t.t() + s.t())?, xi, w)?;
    Ok((lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE))
}

/// Π₀ f(z) = ∫ f(w) e^{z·w̄} dγ(w), the projection onto the Bargmann space
/// of holomorphic functions in L²(γ).
pub fn bargmann_project(
    f: &ScalarField,
    z: &ComplexPoint,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    check_dims(f, z, grid)?;
    ensure_quadrature_growth(f)?;
    grid.integrate_fn(|w| f.eval(w) * dot_conj(z.coords(), w.coords()).exp())
}

/// Both sides of the circular kernel average identity at (t, z, w):
/// the θ-average (1/2π)∫ K_t(z, e^{iθ}w) dθ computed by the trapezoid rule,
/// and its closed form
/// π^{-n} s_t^{-2n} e^{-s_t^{-2}|w|² - s_t^{-2}c_t²|z|²} B(s_t^{-4} c_t² |w·z̄|²).
pub fn circular_kernel_average(
    time: SemigroupTime,
    z: &ComplexPoint,
    w: &ComplexPoint,
    theta_nodes: usize,
) -> Result<(f64, f64)> {
    if time.is_zero() {
        return Err(CoreError::SingularKernel);
    }
    if theta_nodes < 2 {
        return Err(CoreError::InvalidInput("need at least 2 angular nodes".into()));
    }
    let mut acc = Complex64::ZERO;
    for k in 0..theta_nodes {
        let theta = 2.0 * core::f64::consts::PI * (k as f64) / (theta_nodes as f64);
        acc += kernel(KernelKind::Dbar, time, z, &w.rotated(theta))?;
    }
    let lhs = acc / theta_nodes as f64;

    let n = z.dim() as f64;
    let s2 = time.s_t() * time.s_t();
    let c2 = time.c_t() * time.c_t();
    let prefactor =
        (-n * (core::f64::consts::PI * s2).ln() - w.norm_sqr() / s2 - c2 * z.norm_sqr() / s2).exp();
    let arg = c2 / (s2 * s2) * dot_conj(w.coords(), z.coords()).norm_sqr();
    let rhs = prefactor * bessel_b(arg)?;
    Ok((lhs.re, rhs))
}

/// |P_t f - P_t^{ou} f| / (1 + |P_t^{ou} f|) at (t, z); refuses fields not
/// tagged circular, mirroring the hypothesis under which the two agree.
pub fn equality_on_circular(
    f: &ScalarField,
    time: SemigroupTime,
    z: &ComplexPoint,
    grid: &QuadratureGrid,
) -> Result<f64> {
    if !f.is_circular() {
        return Err(CoreError::NotCircular);
    }
    let via_ou = ou_apply(f, time, z, grid)?;
    let via_pt = pt_apply(f, time, z, grid)?;
    Ok((via_pt - via_ou).norm() / (1.0 + via_ou.norm()))
}

/// The field z ↦ P_t f(z) (each evaluation is one quadrature on `grid`).
/// Evaluation errors surface as NaN for downstream rejection.
pub fn pt_field(f: &ScalarField, time: SemigroupTime, grid: &QuadratureGrid) -> ScalarField {
    let f = f.clone();
    let grid = grid.clone();
    let symmetry =
        if f.is_circular() { crate::field::Symmetry::Circular } else { crate::field::Symmetry::Unknown };
    ScalarField::new(grid.dim(), f.growth(), symmetry, move |z| {
        pt_apply(&f, time, z, &grid).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// The field z ↦ P_t^{ou} f(z).
pub fn ou_field(f: &ScalarField, time: SemigroupTime, grid: &QuadratureGrid) -> ScalarField {
    let f = f.clone();
    let grid = grid.clone();
    let symmetry =
        if f.is_circular() { crate::field::Symmetry::Circular } else { crate::field::Symmetry::Unknown };
    ScalarField::new(grid.dim(), f.growth(), symmetry, move |z| {
        ou_apply(&f, time, z, &grid).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// The field z ↦ Π₀ f(z).
pub fn bargmann_field(f: &ScalarField, grid: &QuadratureGrid) -> ScalarField {
    let f = f.clone();
    let grid = grid.clone();
    ScalarField::new(grid.dim(), f.growth(), crate::field::Symmetry::Unknown, move |z| {
        bargmann_project(&f, z, &grid).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// Closed form P_t f_a(z) = e^{s_t² a} e^{a z + (1 - s_t²) z̄} for the
/// one-dimensional exponential family f_a(w) = e^{aw + w̄}.
pub fn pt_exp_linear_closed_form(a: f64, time: SemigroupTime, z: Complex64) -> Complex64 {
    let s2 = time.s_t() * time.s_t();
    (Complex64::new(s2 * a, 0.0) + a * z + (1.0 - s2) * z.conj()).exp()
}
