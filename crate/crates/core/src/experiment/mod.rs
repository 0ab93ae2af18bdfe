//! Numerical experiments: potential maps, injection-domain cross sections and
//! the Monte Carlo azimuthal distribution of detected electrons.

mod domain;
mod grid;
mod histogram;
mod sampling;
mod scatter;

pub use domain::{domain_scan, find_sampling_region, DomainCell, DomainMap, RegionSearch};
pub use grid::{potential_map, GridSpec, Rect};
pub use histogram::{angular_histogram, AngularDistribution, DEFAULT_BIN_WIDTH_DEG};
pub use sampling::{
    injection_position, plan_sampling, sample_injections, Density, Injection, PlanePlan, Region,
    SamplingConfig, SamplingPlan, DEFAULT_PLANES, DEFAULT_SAMPLE_CAP,
};
pub use scatter::{run_scatter, DetectorFilter, FailedTrajectory, ScatterRecord, ScatterRun};

/// Final kinetic energy required for detection, MeV.
pub const DEFAULT_W_THRESHOLD_MEV: f64 = 0.9;
