use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParameterError {
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("detector geometry requires 0 < r1 < r2 < z, got r1={r1}, r2={r2}, z={z}")]
    DetectorGeometry { r1: f64, r2: f64, z: f64 },
    #[error("pulse too short: delta' = {delta_prime} exceeds delta = {delta}")]
    PulseTooShort { delta: f64, delta_prime: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("light-front momentum must be positive, got {0}")]
    Domain(f64),
    #[error("step {step} too coarse for omega_tau = {omega_tau} (must be below omega_tau/10)")]
    Step { step: f64, omega_tau: f64 },
    #[error("observables requested at phase {phi} inside the pulse (|phi| < {omega_tau})")]
    State { phi: f64, omega_tau: f64 },
    #[error("trajectory left the finite domain at phase {0}")]
    NonFinite(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("requested {requested} trajectories exceeds the cap of {cap}")]
    TooManySamples { requested: u64, cap: u64 },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid sampling: {0}")]
    Sampling(String),
    #[error("invalid histogram: {0}")]
    Histogram(String),
    #[error("no detected records")]
    Empty,
}
