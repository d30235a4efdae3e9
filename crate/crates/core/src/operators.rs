//! Pointwise application of the generators L, L̄, Λ and of the ladder
//! operators a_j = ∂_{z̄_j}, b_j = z̄_j - ∂_{z_j}, plus residual checks for
//! integration by parts, the L = Λ + rotation split, commutation with P_t,
//! and eigen-relations.
//!
//! Everything is finite differences on fields; eigen-tests use closed-form
//! fields with known derivatives so the residuals isolate stencil error.

use num_complex::Complex64;
// needed for f64 math in standalone no_std builds; feature-unified builds
// resolve these methods without it and would flag the import
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::{d1, d2_pure, dz_field, dzbar_field, FdStep};
use crate::error::{CoreError, Result};
use crate::field::ScalarField;
use crate::grid::QuadratureGrid;
use crate::point::ComplexPoint;
use crate::semigroup::{pt_apply, pt_field, SemigroupTime};

/// The differential operators of the lab. Coordinate indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// L = Σ_j (∂²_{z_j z̄_j} - z̄_j ∂_{z̄_j}); kernel = holomorphic functions.
    L,
    /// L̄ = Σ_j (∂²_{z_j z̄_j} - z_j ∂_{z_j}); kernel = anti-holomorphic.
    LBar,
    /// Λ = ¼Δ - ½⟨w,∇⟩, the Ornstein–Uhlenbeck generator; Λ = (L + L̄)/2.
    Ou,
    /// a_j = ∂_{z̄_j}.
    Annihilation(usize),
    /// b_j = z̄_j - ∂_{z_j}.
    Creation(usize),
}

fn check_index(op: OperatorKind, n: usize) -> Result<()> {
    match op {
        OperatorKind::Annihilation(j) | OperatorKind::Creation(j) if j >= n => {
            Err(CoreError::InvalidInput(alloc::format!(
                "ladder index {j} out of range for n = {n}"
            )))
        }
        _ => Ok(()),
    }
}

/// ∂_{z_j} f via the two real stencils.
fn wirtinger_dz(f: &ScalarField, z: &ComplexPoint, j: usize, h: f64) -> Result<Complex64> {
    let n = z.dim();
    let dx = d1(f, z, j, h)?;
    let dy = d1(f, z, n + j, h)?;
    Ok(0.5 * (dx - Complex64::I * dy))
}

fn wirtinger_dzbar(f: &ScalarField, z: &ComplexPoint, j: usize, h: f64) -> Result<Complex64> {
    let n = z.dim();
    let dx = d1(f, z, j, h)?;
    let dy = d1(f, z, n + j, h)?;
    Ok(0.5 * (dx + Complex64::I * dy))
}

/// ∂²_{z_j z̄_j} f = ¼(∂²_{x_j} + ∂²_{y_j}) f.
fn mixed_diag(f: &ScalarField, z: &ComplexPoint, j: usize, h: f64) -> Result<Complex64> {
    let n = z.dim();
    Ok(0.25 * (d2_pure(f, z, j, h)? + d2_pure(f, z, n + j, h)?))
}

/// Applies the operator to f at z by finite differences.
pub fn apply(
    op: OperatorKind,
    f: &ScalarField,
    z: &ComplexPoint,
    step: FdStep,
) -> Result<Complex64> {
    if f.dim() != z.dim() {
        return Err(CoreError::DimensionMismatch { expected: f.dim(), got: z.dim() });
    }
    check_index(op, z.dim())?;
    let n = z.dim();
    let h = step.h();
    match op {
        OperatorKind::L => {
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                let zbar = z.coords()[j].conj();
                acc += mixed_diag(f, z, j, h)? - zbar * wirtinger_dzbar(f, z, j, h)?;
            }
            Ok(acc)
        }
        OperatorKind::LBar => {
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                let zj = z.coords()[j];
                acc += mixed_diag(f, z, j, h)? - zj * wirtinger_dz(f, z, j, h)?;
            }
            Ok(acc)
        }
        OperatorKind::Ou => {
            // ¼Δ - ½Σ(x_j ∂_{x_j} + y_j ∂_{y_j})
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                let w = z.coords()[j];
                acc += 0.25 * (d2_pure(f, z, j, h)? + d2_pure(f, z, n + j, h)?);
                acc -= 0.5 * (w.re * d1(f, z, j, h)? + w.im * d1(f, z, n + j, h)?);
            }
            Ok(acc)
        }
        OperatorKind::Annihilation(j) => wirtinger_dzbar(f, z, j, h),
        OperatorKind::Creation(j) => {
            Ok(z.coords()[j].conj() * f.eval(z) - wirtinger_dz(f, z, j, h)?)
        }
    }
}

/// The field z ↦ (op f)(z); evaluation errors become NaN.
pub fn operator_field(op: OperatorKind, f: &ScalarField, step: FdStep) -> ScalarField {
    let f = f.clone();
    ScalarField::new(f.dim(), f.growth(), crate::field::Symmetry::Unknown, move |z| {
        apply(op, &f, z, step).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// Residual of the split L = Λ + (i/2)Σ(y_j ∂_{x_j} - x_j ∂_{y_j}).
pub fn split_residual(f: &ScalarField, z: &ComplexPoint, step: FdStep) -> Result<f64> {
    let n = z.dim();
    let h = step.h();
    let lf = apply(OperatorKind::L, f, z, step)?;
    let ouf = apply(OperatorKind::Ou, f, z, step)?;
    let mut rot = Complex64::ZERO;
    for j in 0..n {
        let w = z.coords()[j];
        rot += w.im * d1(f, z, j, h)? - w.re * d1(f, z, n + j, h)?;
    }
    Ok((lf - ouf - Complex64::new(0.0, 0.5) * rot).norm())
}

/// Residuals of both integration-by-parts identities,
/// ∫(Lf) ḡ dγ = -∫ ∂_{z̄}f · conj(∂_{z̄}g) dγ and
/// ∫(Lf) g dγ = -∫ ∂_{z̄}f · ∂_{z}g dγ; returns the larger of the two.
pub fn ibp_residual(
    f: &ScalarField,
    g: &ScalarField,
    grid: &QuadratureGrid,
    step: FdStep,
) -> Result<f64> {
    if f.dim() != g.dim() {
        return Err(CoreError::DimensionMismatch { expected: f.dim(), got: g.dim() });
    }
    let n = f.dim();
    let lf = operator_field(OperatorKind::L, f, step);
    let lhs_conj = grid.integrate_fn(|z| lf.eval(z) * g.eval(z).conj())?;
    let lhs_plain = grid.integrate_fn(|z| lf.eval(z) * g.eval(z))?;

    let mut rhs_conj = Complex64::ZERO;
    let mut rhs_plain = Complex64::ZERO;
    for j in 0..n {
        let df = dzbar_field(f, j, step);
        let dgbar = dzbar_field(g, j, step);
        let dg = dz_field(g, j, step);
        rhs_conj -= grid.integrate_fn(|z| df.eval(z) * dgbar.eval(z).conj())?;
        rhs_plain -= grid.integrate_fn(|z| df.eval(z) * dg.eval(z))?;
    }
    Ok((lhs_conj - rhs_conj).norm().max((lhs_plain - rhs_plain).norm()))
}

/// Residuals of the two commutation relations at (t, z, j):
/// holo = |∂_{z_j}(P_t f) - P_t(∂_{z_j} f)| and
/// antiholo = |∂_{z̄_j}(P_t f) - e^{-t} P_t(∂_{z̄_j} f)|.
pub fn commutation_residual(
    f: &ScalarField,
    time: SemigroupTime,
    z: &ComplexPoint,
    j: usize,
    grid: &QuadratureGrid,
    step: FdStep,
) -> Result<(f64, f64)> {
    if j >= f.dim() {
        return Err(CoreError::InvalidInput(alloc::format!(
            "coordinate {j} out of range for n = {}",
            f.dim()
        )));
    }
    let h = step.h();
    let ptf = pt_field(f, time, grid);
    let dz_ptf = wirtinger_dz(&ptf, z, j, h)?;
    let dzbar_ptf = wirtinger_dzbar(&ptf, z, j, h)?;
    let pt_dzf = pt_apply(&dz_field(f, j, step), time, z, grid)?;
    let pt_dzbarf = pt_apply(&dzbar_field(f, j, step), time, z, grid)?;
    let decay = (-time.t()).exp();
    Ok(((dz_ptf - pt_dzf).norm(), (dzbar_ptf - decay * pt_dzbarf).norm()))
}

/// max over the points of |(op f)(z) + λ f(z)| / (1 + |f(z)|); tests the
/// eigen-relation -op f = λ f.
pub fn eigen_residual(
    f: &ScalarField,
    op: OperatorKind,
    lambda: Complex64,
    points: &[ComplexPoint],
    step: FdStep,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in points {
        let v = apply(op, f, z, step)?;
        let fz = f.eval(z);
        worst = worst.max((v + lambda * fz).norm() / (1.0 + fz.norm()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Growth, Symmetry};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt_of(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::scalar(c(re, im))
    }

    fn conj_coord() -> ScalarField {
        ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| z.coords()[0].conj())
    }

    /// |z₁|² - 1 = b₁(z₁), the first nontrivial radial eigenfunction.
    fn hermite_radial() -> ScalarField {
        ScalarField::new(1, Growth::Polynomial, Symmetry::Circular, |z| {
            Complex64::new(z.coords()[0].norm_sqr() - 1.0, 0.0)
        })
    }

    fn test_points() -> alloc::vec::Vec<ComplexPoint> {
        alloc::vec![pt_of(0.5, 0.0), pt_of(1.0, 1.0), pt_of(-0.3, 0.8), pt_of(0.2, -1.1)]
    }

    #[test]
    fn l_kills_holomorphic() {
        let sq = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
            z.coords()[0] * z.coords()[0]
        });
        let v = apply(OperatorKind::L, &sq, &pt_of(1.0, 1.0), FdStep::default()).unwrap();
        assert!(v.norm() < 1e-8, "L z² = {v}");
    }

    #[test]
    fn spectrum_witnesses() {
        let step = FdStep::default();
        let pts = test_points();
        // conj z: -L eigenvalue 1, -Λ eigenvalue 1/2, -L̄ eigenvalue 0
        let f = conj_coord();
        assert!(eigen_residual(&f, OperatorKind::L, Complex64::ONE, &pts, step).unwrap() < 1e-7);
        assert!(
            eigen_residual(&f, OperatorKind::Ou, c(0.5, 0.0), &pts, step).unwrap() < 1e-7
        );
        assert!(
            eigen_residual(&f, OperatorKind::LBar, Complex64::ZERO, &pts, step).unwrap() < 1e-7
        );
        // |z|² - 1: eigenvalue 1 for both -L and -Λ
        let g = hermite_radial();
        assert!(eigen_residual(&g, OperatorKind::L, Complex64::ONE, &pts, step).unwrap() < 1e-7);
        assert!(eigen_residual(&g, OperatorKind::Ou, Complex64::ONE, &pts, step).unwrap() < 1e-7);
    }

    #[test]
    fn ladder_relations() {
        // From -Lf = λf: -L(a f) = (λ-1)(a f) and -L(b f) = (λ+1)(b f).
        let step = FdStep::new(1e-3).unwrap();
        let pts = test_points();
        let f = conj_coord(); // λ = 1
        let af = operator_field(OperatorKind::Annihilation(0), &f, step);
        let bf = operator_field(OperatorKind::Creation(0), &f, step);
        assert!(
            eigen_residual(&af, OperatorKind::L, Complex64::ZERO, &pts, step).unwrap() < 1e-5
        );
        assert!(
            eigen_residual(&bf, OperatorKind::L, c(2.0, 0.0), &pts, step).unwrap() < 1e-5
        );
    }

    #[test]
    fn ladder_commutator_is_identity() {
        // [a, b] f = f on a degree-3 witness.
        let step = FdStep::new(1e-3).unwrap();
        let f = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
            let w = z.coords()[0];
            w * w
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
        for z in test_points() {
            let comm = ab.eval(&z) - ba.eval(&z);
            let expect = f.eval(&z);
            assert!((comm - expect).norm() < 1e-5, "[a,b]f = {comm} vs {expect}");
        }
    }

    #[test]
    fn split_identity_holds() {
        let step = FdStep::default();
        let f = ScalarField::abs_power(1, 2.0);
        assert!(split_residual(&f, &pt_of(0.7, -0.2), step).unwrap() < 1e-8);
        let g = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
            let w = z.coords()[0];
            Complex64::new((w * w).re, 0.0)
        });
        assert!(split_residual(&g, &pt_of(0.4, 0.9), step).unwrap() < 1e-7);
        // circular field: additionally Lf = Λf
        let h = ScalarField::abs_power(1, 4.0);
        let z = pt_of(0.8, 0.5);
        let lf = apply(OperatorKind::L, &h, &z, step).unwrap();
        let ouf = apply(OperatorKind::Ou, &h, &z, step).unwrap();
        assert!((lf - ouf).norm() < 1e-7, "L - Λ = {}", (lf - ouf).norm());
    }

    #[test]
    fn integration_by_parts() {
        let grid = QuadratureGrid::build(1, 20).unwrap();
        let step = FdStep::default();
        // f = g = |z|²: both sides equal -1
        let f = ScalarField::abs_power(1, 2.0);
        let lf = operator_field(OperatorKind::L, &f, step);
        let lhs = grid.integrate_fn(|z| lf.eval(z) * f.eval(z).conj()).unwrap();
        assert!((lhs.re + 1.0).abs() < 1e-6, "lhs = {lhs}");
        assert!(ibp_residual(&f, &f, &grid, step).unwrap() < 1e-6);
        // f = |z|⁴, g = |z|²
        let f4 = ScalarField::abs_power(1, 4.0);
        assert!(ibp_residual(&f4, &f, &grid, step).unwrap() < 1e-6);
        // holomorphic f: Lf = 0, both sides vanish
        let sq = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
            z.coords()[0] * z.coords()[0]
        });
        assert!(ibp_residual(&sq, &f, &grid, step).unwrap() < 1e-6);
    }

    #[test]
    fn nonpositivity_of_l() {
        // ∫(Lf) f̄ dγ = -∫|∂_z̄ f|² dγ ≤ 0 for real test fields.
        let grid = QuadratureGrid::build(1, 20).unwrap();
        let step = FdStep::default();
        for f in [ScalarField::abs_power(1, 2.0), ScalarField::abs_power(1, 4.0)] {
            let lf = operator_field(OperatorKind::L, &f, step);
            let v = grid.integrate_fn(|z| lf.eval(z) * f.eval(z).conj()).unwrap();
            assert!(v.re <= 1e-8, "∫(Lf)f̄ = {v}");
            let df = dzbar_field(&f, 0, step);
            let grad_sq = grid
                .integrate_fn(|z| Complex64::new(df.eval(z).norm_sqr(), 0.0))
                .unwrap();
            assert!((v.re + grad_sq.re).abs() < 1e-6);
        }
    }

    #[test]
    fn commutation_with_pt() {
        let grid = QuadratureGrid::build(1, 30).unwrap();
        let step = FdStep::default();
        let t = SemigroupTime::new(1.0).unwrap();
        let f = ScalarField::abs_power(1, 2.0);
        let (holo, anti) = commutation_residual(&f, t, &pt_of(0.5, 0.0), 0, &grid, step).unwrap();
        assert!(holo < 1e-7, "holo residual {holo}");
        assert!(anti < 1e-7, "antiholo residual {anti}");
        // exponential family
        let fa = ScalarField::exp_linear(0.5);
        let t2 = SemigroupTime::new(0.5).unwrap();
        let (holo, anti) =
            commutation_residual(&fa, t2, &pt_of(0.2, 0.3), 0, &grid, step).unwrap();
        assert!(holo < 1e-6, "holo residual {holo}");
        assert!(anti < 1e-6, "antiholo residual {anti}");
    }
}
