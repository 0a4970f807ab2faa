//! Self-contained numerical substrate: orthonormalization, the
//! skew-tridiagonal eigenproblem and its invariant planes, quadrature,
//! fixed-step ODE integration and finite differencing.
//!
//! Everything here is a pure function over immutable inputs; callers may
//! parallelize over independent inputs freely.

pub mod diff;
pub mod eigen;
pub mod linalg;
pub mod ode;
pub mod quad;

pub use diff::{derivatives, derivatives_strided, scalar_derivative, DerivativeSet};
pub use eigen::{PlaneBasis, SkewTridiag, Spectrum};
pub use linalg::{complete_orientation, orthonormalize, RANK_TOL};
pub use ode::rk4_solve;
pub use quad::{integrate, integrate_tol};

/// Default tolerance for geometric comparisons.
pub const GEOM_TOL: f64 = 1e-6;
