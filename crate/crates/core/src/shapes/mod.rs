//! Shape catalog, grid sampling and point-cloud ingestion.

mod catalog;
mod cloud;
mod quadrature;
mod sampling;

pub use catalog::{
    perturbation_profile, unit_direction, AxisKind, ChartScalar, ParametricShape, ShapeKind,
};
pub use cloud::{ingest_point_cloud, read_point_cloud, CLOUD_NORM_TOL};
pub use quadrature::Rule;
pub(crate) use sampling::{fd_step, oriented_normal};
pub use sampling::{
    local_geometry, sample_shape, DerivativeMode, GridSpec, LocalGeometry, RadialData, Sample,
    SampledHypersurface, MIN_METRIC_EIGENVALUE, MIN_NODES, QUADRATURE_RULE,
};
