//! Numerical laboratory for complex-Gaussian analysis: Wirtinger calculus,
//! Gauss–Hermite quadrature against γ_n, exact permanents and Wick moments,
//! the Ornstein–Uhlenbeck and ∂̄ semigroups with their kernels, and
//! correlation/moment inequality checks built on top of them.
//!
//! The crate is `no_std` (with `alloc`); everything with IO lives in the
//! companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alpha;
pub mod calculus;
pub mod error;
pub mod field;
pub mod grid;
pub mod hermite;
pub mod inequality;
pub mod matrix;
pub mod operators;
pub mod permanent;
pub mod point;
pub mod poly;
pub mod sampling;
pub mod semigroup;
pub mod series;

pub use alpha::{alpha_curve, alpha_prime_two_ways, alpha_second_form, AlphaCurve};
pub use calculus::{complex_hessian, real_hessian, wirtinger_grad, FdStep};
pub use error::{CoreError, Result};
pub use field::{Growth, ScalarField, Symmetry};
pub use grid::QuadratureGrid;
pub use inequality::{
    correlation_gap, hessian_discrepancy_demo, lieb_check, moment_split_report, GapMethod,
    InequalityReport, Verdict,
};
pub use matrix::{HermitianMatrix, RealSymMatrix};
pub use operators::OperatorKind;
pub use permanent::{permanent, wick_moment};
pub use point::ComplexPoint;
pub use poly::{circular_check, make_field, HoloPoly, LogPshProduct};
pub use sampling::{abs_moment_mc, integrate_mc, sample_standard, sample_vector, CovarianceSpec, McConfig};
pub use semigroup::{
    bargmann_project, compose_check, equality_on_circular, kernel, ou_apply, pt_apply,
    KernelKind, SemigroupTime,
};
pub use series::bessel_b;


