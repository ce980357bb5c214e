//! Numerical toolkit for hypersurfaces of Euclidean space and round spheres:
//! higher-order mean curvatures, extrinsic radii, Minkowski-type integral
//! gaps and the pinching estimates that control how close a surface is to a
//! geodesic sphere.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod curvature;
pub mod enclosing;
pub mod error;
pub mod numeric;
pub mod shapes;
pub mod spaceform;

pub use analysis::{analyze, analyze_surface, AnalysisConfig, PinchingReport, QuasiIsometryReport};
pub use curvature::{
    mean_curvatures, newton_traces, permutation_symbol_hk, positivity_report,
    second_fundamental_form, CurvatureData, MeanCurvatures, NewtonTraces, PointCurvature,
    PositivityReport,
};
pub use enclosing::{extrinsic_radius, Ball};
pub use error::{Error, Result};
pub use shapes::{
    sample_shape, DerivativeMode, GridSpec, ParametricShape, SampledHypersurface, ShapeKind,
};
pub use spaceform::{AmbientPoint, AmbientVector, SpaceForm};
