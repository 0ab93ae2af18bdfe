use serde::{Deserialize, Serialize};

use crate::dynamics::{ballistic_hit, integrate, Flight};
use crate::error::DynamicsError;
use crate::par;
use crate::params::{derive_initial_state, SimParams};

use super::sampling::{sample_injections, Injection, SamplingPlan};

/// Injections are integrated in chunks of this size to bound memory.
const CHUNK: usize = 1 << 16;

/// Energy threshold on top of the ring geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorFilter {
    pub w_threshold_mev: f64,
}

impl Default for DetectorFilter {
    fn default() -> Self {
        Self {
            w_threshold_mev: super::DEFAULT_W_THRESHOLD_MEV,
        }
    }
}

/// Outcome of one trajectory from injection to the detector plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Shot {
    pub w_mev: f64,
    pub theta: f64,
    pub flight: Flight,
    pub detected: bool,
}

pub(crate) fn shoot(
    x0: f64,
    y0: f64,
    plane: i32,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> Result<Shot, DynamicsError> {
    let state = derive_initial_state(p, [x0, y0, plane as f64]);
    let traj = integrate(&state, p, step)?;
    let flight = ballistic_hit(&traj.exit_state, p);
    let detected = flight.is_hit() && traj.kinetic_energy_mev >= filter.w_threshold_mev;
    Ok(Shot {
        w_mev: traj.kinetic_energy_mev,
        theta: traj.polar_angle,
        flight,
        detected,
    })
}

/// One sampled electron. Angles in radians; α, X, Y are NaN when the electron
/// never reaches the detector plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterRecord {
    pub plane: i32,
    pub index: u64,
    pub x0: f64,
    pub y0: f64,
    pub w_mev: f64,
    pub theta: f64,
    pub alpha: f64,
    pub x_cm: f64,
    pub y_cm: f64,
    pub detected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedTrajectory {
    pub plane: i32,
    pub index: u64,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScatterRun {
    /// Canonical order: plane order of the plan, then sample index.
    pub records: Vec<ScatterRecord>,
    pub failed: Vec<FailedTrajectory>,
}

impl ScatterRun {
    pub fn total(&self) -> usize {
        self.records.len() + self.failed.len()
    }

    pub fn detected(&self) -> usize {
        self.records.iter().filter(|r| r.detected).count()
    }
}

fn record_for(
    inj: &Injection,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> Result<ScatterRecord, FailedTrajectory> {
    let shot = shoot(inj.x, inj.y, inj.plane, filter, step, p).map_err(|e| FailedTrajectory {
        plane: inj.plane,
        index: inj.index,
        error: e.to_string(),
    })?;
    let (alpha, x_cm, y_cm) = match shot.flight.crossing() {
        Some(c) => (c.alpha, c.x_cm, c.y_cm),
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    Ok(ScatterRecord {
        plane: inj.plane,
        index: inj.index,
        x0: inj.x,
        y0: inj.y,
        w_mev: shot.w_mev,
        theta: shot.theta,
        alpha,
        x_cm,
        y_cm,
        detected: shot.detected,
    })
}

/// Integrates every planned injection. Failed trajectories are collected, not
/// fatal. Output order is independent of the number of workers.
pub fn run_scatter(
    p: &SimParams,
    plan: &SamplingPlan,
    filter: &DetectorFilter,
    step: f64,
) -> ScatterRun {
    let mut run = ScatterRun::default();
    let mut stream = sample_injections(plan).peekable();
    let mut chunk = Vec::with_capacity(CHUNK);
    while stream.peek().is_some() {
        chunk.clear();
        chunk.extend(stream.by_ref().take(CHUNK));
        for result in par::map_ordered(&chunk, |inj| record_for(inj, filter, step, p)) {
            match result {
                Ok(rec) => run.records.push(rec),
                Err(fail) => run.failed.push(fail),
            }
        }
    }
    run
}
