//! Numerical toolkit for curves with constant curvature ratios in R^n:
//! Frenet apparatus computation, curve synthesis from natural equations,
//! tangent-indicatrix verification on flat tori, spherical-curve criteria
//! in R^3 and R^4, and intrinsic helix analysis on the unit 3-sphere.

pub mod ccr;
pub mod error;
pub mod frenet;
pub mod intrinsic;
pub mod numkit;
pub mod sphere;

pub use ccr::{CcrSpec, K1Profile, TorusFitReport, TorusModel};
pub use error::{Error, Result};
pub use frenet::{AnalyticCurve, Apparatus, CurveSamples, FrenetData, RatioReport};
pub use intrinsic::{HelixVerdict, IntrinsicData, PropositionReport};
pub use numkit::{PlaneBasis, SkewTridiag, Spectrum};
pub use sphere::{ReducedSolution, SignConvention, SphereReport};
