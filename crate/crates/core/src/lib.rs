//! Ponderomotive scattering of electrons by a focused, linearly polarized
//! Gaussian laser pulse whose transverse profile carries an asymmetry
//! parameter μ.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`]: laboratory configuration and derived dimensionless parameters.
//! * [`field`]: envelope, Gaussian focal functions and the ponderomotive potential.
//! * [`dynamics`]: averaged equations of motion, RK4 and detector flight.
//! * [`experiment`]: potential maps, injection-domain scans, Monte Carlo
//!   ensembles and azimuthal histograms.
//! * [`cli`]: configuration files, CSV output and run manifests.
//!
//! Ensembles run on rayon when the `parallel` feature is on (the default) and
//! sequentially otherwise; results are identical either way.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod field;
pub mod par;
pub mod params;

pub use dynamics::{PonderomotiveState, TrajectoryResult};
pub use error::{DynamicsError, ExperimentError, ParameterError};
pub use params::{derive_initial_state, derive_sim_params, PhysicalConfig, SimParams};
