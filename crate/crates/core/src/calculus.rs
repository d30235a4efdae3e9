//! Finite-difference Wirtinger derivatives and Hessians.
//!
//! All stencils are second-order central differences over the real
//! coordinates (x_1..x_n, y_1..y_n); the complex derivatives are assembled
//! from them, ∂_{z_j} = ½(∂_{x_j} - i ∂_{y_j}) and
//! ∂_{z̄_j} = ½(∂_{x_j} + i ∂_{y_j}).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::field::ScalarField;
use crate::matrix::{HermitianMatrix, RealSymMatrix};
use crate::point::ComplexPoint;

/// Central finite-difference step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdStep {
    h: f64,
}

impl FdStep {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(CoreError::InvalidStep { h });
        }
        Ok(Self { h })
    }

    /// Default step scaled to the evaluation point: h = 1e-4 · max(1, |z|).
    pub fn for_point(z: &ComplexPoint) -> Self {
        Self { h: 1e-4 * z.norm().max(1.0) }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn halved(&self) -> Self {
        Self { h: 0.5 * self.h }
    }
}

impl Default for FdStep {
    fn default() -> Self {
        Self { h: 1e-4 }
    }
}

/// Real-coordinate axis of Cⁿ ≃ R²ⁿ: axis r < n is x_r, axis r ≥ n is y_{r-n}.
fn shift(z: &ComplexPoint, axis: usize, delta: f64) -> ComplexPoint {
    let n = z.dim();
    let mut w = z.clone();
    let c = &mut w.coords_mut()[axis % n];
    if axis < n {
        *c += Complex64::new(delta, 0.0);
    } else {
        *c += Complex64::new(0.0, delta);
    }
    w
}

fn eval_checked(f: &ScalarField, z: &ComplexPoint) -> Result<Complex64> {
    let v = f.eval(z);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(CoreError::NonFiniteEval { point: z.coords().to_vec() })
    }
}

/// (f(z + h e_r) - f(z - h e_r)) / 2h.
pub(crate) fn d1(f: &ScalarField, z: &ComplexPoint, axis: usize, h: f64) -> Result<Complex64> {
    let fp = eval_checked(f, &shift(z, axis, h))?;
    let fm = eval_checked(f, &shift(z, axis, -h))?;
    Ok((fp - fm) / (2.0 * h))
}

/// (f(z + h e_r) - 2 f(z) + f(z - h e_r)) / h².
pub(crate) fn d2_pure(f: &ScalarField, z: &ComplexPoint, axis: usize, h: f64) -> Result<Complex64> {
    let fp = eval_checked(f, &shift(z, axis, h))?;
    let f0 = eval_checked(f, z)?;
    let fm = eval_checked(f, &shift(z, axis, -h))?;
    Ok((fp - 2.0 * f0 + fm) / (h * h))
}

/// Four-point cross stencil for ∂²_{rs} with r ≠ s.
fn d2_mixed(f: &ScalarField, z: &ComplexPoint, r: usize, s: usize, h: f64) -> Result<Complex64> {
    let pp = eval_checked(f, &shift(&shift(z, r, h), s, h))?;
    let pm = eval_checked(f, &shift(&shift(z, r, h), s, -h))?;
    let mp = eval_checked(f, &shift(&shift(z, r, -h), s, h))?;
    let mm = eval_checked(f, &shift(&shift(z, r, -h), s, -h))?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

pub(crate) fn d2(f: &ScalarField, z: &ComplexPoint, r: usize, s: usize, h: f64) -> Result<Complex64> {
    if r == s {
        d2_pure(f, z, r, h)
    } else {
        d2_mixed(f, z, r, s, h)
    }
}

fn guard_singularity(f: &ScalarField, z: &ComplexPoint, h: f64) -> Result<()> {
    if f.origin_singular() && z.norm() < 10.0 * h {
        return Err(CoreError::NearSingularity { point: z.coords().to_vec() });
    }
    Ok(())
}

fn check_dim(f: &ScalarField, z: &ComplexPoint) -> Result<()> {
    if f.dim() != z.dim() {
        return Err(CoreError::DimensionMismatch { expected: f.dim(), got: z.dim() });
    }
    Ok(())
}

/// Wirtinger gradient: (∂_{z_j} f, ∂_{z̄_j} f) for j = 1..n.
pub fn wirtinger_grad(
    f: &ScalarField,
    z: &ComplexPoint,
    step: FdStep,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_dim(f, z)?;
    let n = z.dim();
    let h = step.h();
    let i = Complex64::I;
    let mut dz = Vec::with_capacity(n);
    let mut dzbar = Vec::with_capacity(n);
    for j in 0..n {
        let dx = d1(f, z, j, h)?;
        let dy = d1(f, z, n + j, h)?;
        dz.push(0.5 * (dx - i * dy));
        dzbar.push(0.5 * (dx + i * dy));
    }
    Ok((dz, dzbar))
}

/// Complex Hessian (∂²_{z_j z̄_k} f)_{j,k}, symmetrized to exact Hermitian form.
///
/// The Hessian of a real-valued f is Hermitian and the symmetrization only
/// removes stencil noise. For complex-valued f the Hermitian projection
/// discards information; apply the operators from [`crate::operators`]
/// instead when the raw mixed derivatives of a complex field are needed.
pub fn complex_hessian(f: &ScalarField, z: &ComplexPoint, step: FdStep) -> Result<HermitianMatrix> {
    check_dim(f, z)?;
    guard_singularity(f, z, step.h())?;
    let n = z.dim();
    let h = step.h();
    let i = Complex64::I;
    let mut rows = alloc::vec![alloc::vec![Complex64::ZERO; n]; n];
    for j in 0..n {
        for k in j..n {
            // ∂²_{z_j z̄_k} = ¼[(∂²_{x_j x_k} + ∂²_{y_j y_k}) + i(∂²_{x_j y_k} - ∂²_{y_j x_k})]
            let xx = d2(f, z, j, k, h)?;
            let yy = d2(f, z, n + j, n + k, h)?;
            let entry = if j == k {
                0.25 * (xx + yy)
            } else {
                let xy = d2(f, z, j, n + k, h)?;
                let yx = d2(f, z, n + j, k, h)?;
                0.25 * ((xx + yy) + i * (xy - yx))
            };
            rows[j][k] = entry;
            if j != k {
                // recompute the mirrored entry would cost another stencil;
                // symmetrization below supplies it
                rows[k][j] = entry.conj();
            }
        }
    }
    HermitianMatrix::symmetrized(&rows)
}

/// Real Hessian over the coordinates (x_1..x_n, y_1..y_n), symmetrized.
pub fn real_hessian(f: &ScalarField, z: &ComplexPoint, step: FdStep) -> Result<RealSymMatrix> {
    check_dim(f, z)?;
    guard_singularity(f, z, step.h())?;
    let n2 = 2 * z.dim();
    let h = step.h();
    let mut rows = alloc::vec![alloc::vec![0.0; n2]; n2];
    for r in 0..n2 {
        for s in r..n2 {
            let v = d2(f, z, r, s, h)?;
            rows[r][s] = v.re;
            rows[s][r] = v.re;
        }
    }
    RealSymMatrix::symmetrized(&rows)
}

/// The field z ↦ ∂_{z_j} f(z), evaluated by finite differences.
///
/// Evaluation errors surface as NaN, which downstream quadrature rejects.
pub fn dz_field(f: &ScalarField, j: usize, step: FdStep) -> ScalarField {
    wirtinger_component_field(f, j, step, false)
}

/// The field z ↦ ∂_{z̄_j} f(z), evaluated by finite differences.
pub fn dzbar_field(f: &ScalarField, j: usize, step: FdStep) -> ScalarField {
    wirtinger_component_field(f, j, step, true)
}

fn wirtinger_component_field(f: &ScalarField, j: usize, step: FdStep, bar: bool) -> ScalarField {
    assert!(j < f.dim(), "coordinate index out of range");
    let inner = f.clone();
    let h = step.h();
    let n = f.dim();
    let growth = f.growth();
    ScalarField::new(n, growth, crate::field::Symmetry::Unknown, move |z| {
        let dx = match d1(&inner, z, j, h) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, f64::NAN),
        };
        let dy = match d1(&inner, z, n + j, h) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, f64::NAN),
        };
        if bar {
            0.5 * (dx + Complex64::I * dy)
        } else {
            0.5 * (dx - Complex64::I * dy)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Growth, Symmetry};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::scalar(c(re, im))
    }

    fn coordinate_field() -> ScalarField {
        ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| z.coords()[0])
    }

    fn abs_sq_field() -> ScalarField {
        ScalarField::new(1, Growth::Polynomial, Symmetry::Circular, |z| {
            Complex64::new(z.coords()[0].norm_sqr(), 0.0)
        })
    }

    #[test]
    fn holomorphic_coordinate_gradient() {
        // f(w) = w has ∂_z f = 1 and ∂_z̄ f = 0.
        let f = coordinate_field();
        let z = pt(1.0, 1.0);
        let (dz, dzbar) = wirtinger_grad(&f, &z, FdStep::for_point(&z)).unwrap();
        assert_abs_diff_eq!((dz[0] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(dzbar[0].norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn abs_square_gradient_is_conjugate_pair() {
        // ∂_z |w|² = w̄ and ∂_z̄ |w|² = w, exactly up to O(h²).
        let f = abs_sq_field();
        let z0 = c(0.4, -1.2);
        let z = ComplexPoint::scalar(z0);
        let (dz, dzbar) = wirtinger_grad(&f, &z, FdStep::for_point(&z)).unwrap();
        assert_abs_diff_eq!((dz[0] - z0.conj()).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!((dzbar[0] - z0).norm(), 0.0, epsilon = 1e-9);
        // real-valued f: dzbar = conj(dz)
        assert_abs_diff_eq!((dzbar[0] - dz[0].conj()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exp_linear_gradient_matches_closed_form() {
        // f_a = e^{aw + w̄}: ∂_z f_a = a f_a, ∂_z̄ f_a = f_a.
        let a = 0.5;
        let f = ScalarField::exp_linear(a);
        let z = pt(0.3, 0.2);
        let fz = f.eval(&z);
        let (dz, dzbar) = wirtinger_grad(&f, &z, FdStep::for_point(&z)).unwrap();
        assert_abs_diff_eq!((dz[0] - a * fz).norm(), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!((dzbar[0] - fz).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn complex_hessian_oracles() {
        let step = FdStep::default();
        // ∂²_{zz̄} |w|² = 1
        let h1 = complex_hessian(&abs_sq_field(), &pt(0.7, -0.3), step).unwrap();
        assert_abs_diff_eq!((h1.entry(0, 0) - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-7);
        // ∂²_{zz̄} |w|⁴ = 4|z|², so 4 at z = 1
        let f4 = ScalarField::abs_power(1, 4.0);
        let h4 = complex_hessian(&f4, &pt(1.0, 0.0), step).unwrap();
        assert_abs_diff_eq!(h4.entry(0, 0).re, 4.0, epsilon = 1e-6);
        // ∂²_{zz̄} |w|^β = (β²/4)|z|^{β-2}: β = 1/3 at z = 1 gives 1/36
        let fb = ScalarField::abs_power(1, 1.0 / 3.0);
        let hb = complex_hessian(&fb, &pt(1.0, 0.0), step).unwrap();
        assert_abs_diff_eq!(hb.entry(0, 0).re, 1.0 / 36.0, epsilon = 1e-7);
    }

    #[test]
    fn real_hessian_oracles() {
        let step = FdStep::default();
        // |w|² = x² + y² has Hessian diag(2, 2)
        let h = real_hessian(&abs_sq_field(), &pt(0.3, 0.4), step).unwrap();
        assert_abs_diff_eq!(h.entry(0, 0), 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(h.entry(1, 1), 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(h.entry(0, 1), 0.0, epsilon = 1e-6);
        // x² - y² has Hessian diag(2, -2)
        let g = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
            let w = z.coords()[0];
            Complex64::new(w.re * w.re - w.im * w.im, 0.0)
        });
        let hg = real_hessian(&g, &pt(0.1, 0.2), step).unwrap();
        assert_abs_diff_eq!(hg.entry(0, 0), 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(hg.entry(1, 1), -2.0, epsilon = 1e-6);
        // (x² + y²)² at z = 1: ∂xx = 12x² + 4y² = 12, ∂yy = 4x² + 12y² = 4
        let f4 = ScalarField::abs_power(1, 4.0);
        let h4 = real_hessian(&f4, &pt(1.0, 0.0), step).unwrap();
        assert_abs_diff_eq!(h4.entry(0, 0), 12.0, epsilon = 1e-5);
        assert_abs_diff_eq!(h4.entry(1, 1), 4.0, epsilon = 1e-5);
        assert_abs_diff_eq!(h4.entry(0, 1), 0.0, epsilon = 1e-5);
    }

    #[test]
    fn quarter_laplacian_relation() {
        // tr(complex Hessian) = ¼ tr(real Hessian) for any C² field.
        let f = ScalarField::exp_linear(0.7);
        let z = pt(0.2, -0.4);
        let step = FdStep::for_point(&z);
        let hc = complex_hessian(&f, &z, step).unwrap();
        let hr = real_hessian(&f, &z, step).unwrap();
        let tc: Complex64 = hc.entry(0, 0);
        assert_abs_diff_eq!(tc.re, 0.25 * hr.trace(), epsilon = 1e-8);
    }

    #[test]
    fn halving_step_divides_error_by_four() {
        // Exact Hessian of f_a is a·f_a; truncation-dominated steps show
        // the second-order convergence factor. The point is real so that
        // the Hessian entry is real and symmetrization is harmless.
        let a = 0.5;
        let f = ScalarField::exp_linear(a);
        let z = pt(0.4, 0.0);
        let exact = a * f.eval(&z);
        let coarse = FdStep::new(1e-2).unwrap();
        let err = |s: FdStep| {
            (complex_hessian(&f, &z, s).unwrap().entry(0, 0) - exact).norm()
        };
        let factor = err(coarse) / err(coarse.halved());
        assert!(
            (3.5..=4.5).contains(&factor),
            "convergence factor {factor} outside [3.5, 4.5]"
        );
    }

    #[test]
    fn singular_origin_is_refused() {
        let f = ScalarField::abs_power(1, 1.0 / 3.0);
        let near = pt(1e-6, 0.0);
        let err = complex_hessian(&f, &near, FdStep::default()).unwrap_err();
        assert!(matches!(err, CoreError::NearSingularity { .. }));
        // far away it works
        assert!(complex_hessian(&f, &pt(1.0, 0.0), FdStep::default()).is_ok());
    }

    #[test]
    fn non_finite_eval_carries_point() {
        let f = ScalarField::new(1, Growth::Other, Symmetry::Unknown, |z| {
            let w = z.coords()[0];
            if w.re > 1.0 {
                Complex64::new(f64::NAN, 0.0)
            } else {
                w
            }
        });
        let err = wirtinger_grad(&f, &pt(1.0, 0.0), FdStep::default()).unwrap_err();
        assert!(matches!(err, CoreError::NonFiniteEval { .. }));
    }
}
