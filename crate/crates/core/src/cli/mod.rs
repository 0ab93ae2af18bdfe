//! Command-line front end: configuration, subcommand dispatch, CSV output and
//! the run manifest.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{parse_config, parse_planes, ConfigError, RunConfig};
pub use output::{
    num, write_domain_maps, write_histogram, write_potential_map, write_records, write_trajectory,
    TrajectoryRow,
};

use crate::dynamics::integrate_observed;
use crate::error::{ExperimentError, ParameterError};
use crate::experiment::{
    angular_histogram, domain_scan, find_sampling_region, plan_sampling, potential_map,
    run_scatter, Density, DetectorFilter, DomainMap, GridSpec, RegionSearch, SamplingConfig,
    SamplingPlan,
};
use crate::par;
use crate::params::{derive_initial_state, derive_sim_params, SimParams};

/// Nodes per axis of a domain-map grid.
pub const DOMAIN_GRID_NODES: usize = 41;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PotentialMap,
    DomainMap,
    Scatter,
    Trajectory,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PotentialMap => "potential-map",
            Command::DomainMap => "domain-map",
            Command::Scatter => "scatter",
            Command::Trajectory => "trajectory",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Parameter(#[from] ParameterError),
    #[error("{0}")]
    Sampling(ExperimentError),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration problems, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parameter(_) | CliError::Sampling(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryCounts {
    pub total: u64,
    pub detected: u64,
    pub failed: u64,
}

/// Summary of a scatter run's azimuthal distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnisotropySummary {
    #[serde(deserialize_with = "nan_if_null")]
    pub n_at_0_deg: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub n_at_90_deg: f64,
    /// Not finite (written as `null`) when nothing reached 90°.
    #[serde(deserialize_with = "nan_if_null")]
    pub ratio_0_over_90: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub max_over_min: f64,
}

// serde_json writes non-finite floats as null
fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Everything needed to reproduce a run. `config_text` fed back through
/// `--config` regenerates every output file byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub code_version: String,
    pub command: Command,
    pub config_text: String,
    pub config: RunConfig,
    pub params: SimParams,
    pub seed: u64,
    pub workers: usize,
    pub parallel_backend: bool,
    pub outputs: Vec<OutputFile>,
    pub wall_clock_seconds: f64,
    pub trajectories: TrajectoryCounts,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingPlan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anisotropy: Option<AnisotropySummary>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

struct Outputs<'a> {
    dir: &'a Path,
    files: Vec<OutputFile>,
}

impl Outputs<'_> {
    fn write(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut buf = Vec::new();
        f(&mut buf).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        std::fs::write(&path, &buf).map_err(|source| CliError::Io { path, source })?;
        self.files.push(OutputFile {
            name: name.to_string(),
            bytes: buf.len() as u64,
            sha256: sha256_hex(&buf),
        });
        Ok(())
    }
}

fn sampling_config(cfg: &RunConfig) -> SamplingConfig {
    SamplingConfig {
        planes: cfg.plane_list(),
        density: match cfg.density_per_r2 {
            Some(d) => Density::PerArea(d),
            None => Density::PerPlane(cfg.samples_per_plane),
        },
        seed: cfg.seed,
        naive: cfg.naive_sampling,
        disc_radius: cfg.disc_radius,
        cap: cfg.sample_cap,
        search: RegionSearch {
            outer_half_width: cfg.disc_radius,
            ..RegionSearch::default()
        },
    }
}

/// Runs `command` with `workers` threads and writes its outputs plus
/// `manifest.json` into `out_dir`.
pub fn dispatch(
    command: Command,
    cfg: &RunConfig,
    workers: usize,
    out_dir: &Path,
) -> Result<RunManifest, CliError> {
    let started = Instant::now();
    let params = derive_sim_params(&cfg.physical)?;
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut out = Outputs {
        dir: out_dir,
        files: Vec::new(),
    };
    let filter = DetectorFilter {
        w_threshold_mev: cfg.w_threshold_mev,
    };
    let mut counts = TrajectoryCounts::default();
    let mut sampling = None;
    let mut anisotropy = None;

    par::with_workers(workers, || -> Result<(), CliError> {
        match command {
            Command::PotentialMap => {
                let grid =
                    GridSpec::square(cfg.map_half_width, cfg.grid_n).map_err(CliError::Sampling)?;
                let u = potential_map(&grid, 0.0, 0.0, &params);
                out.write("potential_map.csv", |w| write_potential_map(w, &grid, &u))?;
            }
            Command::DomainMap => {
                let maps = domain_maps(cfg, &filter, &params)?;
                counts.total = maps.iter().map(|m| m.cells.len() as u64).sum();
                counts.detected = maps.iter().map(|m| m.detected_count() as u64).sum();
                counts.failed = maps
                    .iter()
                    .flat_map(|m| &m.cells)
                    .filter(|c| c.w_mev.is_nan())
                    .count() as u64;
                out.write("domain_map.csv", |w| write_domain_maps(w, &maps))?;
            }
            Command::Scatter => {
                let plan = plan_sampling(&sampling_config(cfg), &filter, cfg.step, &params)
                    .map_err(CliError::Sampling)?;
                let run = run_scatter(&params, &plan, &filter, cfg.step);
                counts = TrajectoryCounts {
                    total: run.total() as u64,
                    detected: run.detected() as u64,
                    failed: run.failed.len() as u64,
                };
                out.write("records.csv", |w| write_records(w, &run.records))?;
                let hist = angular_histogram(
                    &run.records,
                    cfg.bin_deg.to_radians(),
                    params.detector_width,
                )
                .map_err(|e| CliError::Runtime(format!("histogram: {e}")))?;
                let at0 = hist.value_at(0.0);
                let at90 = hist.value_at(std::f64::consts::FRAC_PI_2);
                let min = hist.smoothed.iter().cloned().fold(f64::INFINITY, f64::min);
                anisotropy = Some(AnisotropySummary {
                    n_at_0_deg: at0,
                    n_at_90_deg: at90,
                    ratio_0_over_90: at0 / at90,
                    max_over_min: 1.0 / min,
                });
                out.write("histogram.csv", |w| write_histogram(w, &hist))?;
                sampling = Some(plan);
            }
            Command::Trajectory => {
                let rows = trajectory_rows(cfg, &params)?;
                counts.total = 1;
                out.write("trajectory.csv", |w| write_trajectory(w, &rows))?;
            }
        }
        Ok(())
    })?;

    let manifest = RunManifest {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        command,
        config_text: cfg.to_text(),
        config: cfg.clone(),
        params: params.clone(),
        seed: cfg.seed,
        workers,
        parallel_backend: cfg!(feature = "parallel"),
        outputs: out.files,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        trajectories: counts,
        warnings: params.weak_focus_warning().into_iter().collect(),
        sampling,
        anisotropy,
    };
    let path = out_dir.join(MANIFEST_NAME);
    let text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })?;
    Ok(manifest)
}

fn domain_maps(
    cfg: &RunConfig,
    filter: &DetectorFilter,
    p: &SimParams,
) -> Result<Vec<DomainMap>, CliError> {
    let search = RegionSearch {
        outer_half_width: cfg.disc_radius,
        ..RegionSearch::default()
    };
    let mut maps = Vec::new();
    for plane in cfg.plane_list() {
        let grid = if cfg.domain_half_width > 0.0 {
            GridSpec::square(cfg.domain_half_width, DOMAIN_GRID_NODES)
                .map_err(CliError::Sampling)?
        } else {
            match find_sampling_region(plane, &search, filter, cfg.step, p) {
                Some(rect) => GridSpec::new(rect, DOMAIN_GRID_NODES, DOMAIN_GRID_NODES)
                    .map_err(CliError::Sampling)?,
                None => continue,
            }
        };
        maps.push(domain_scan(plane, &grid, filter, cfg.step, p));
    }
    Ok(maps)
}

/// Start-of-step states of one trajectory, plus the final state.
pub fn trajectory_rows(cfg: &RunConfig, p: &SimParams) -> Result<Vec<TrajectoryRow>, CliError> {
    let state0 = derive_initial_state(p, cfg.injection);
    let mut rows = Vec::new();
    integrate_observed(&state0, p, cfg.step, |s| {
        if s.stage == 0 {
            rows.push(TrajectoryRow {
                phi: s.state.phi,
                rho_x: s.state.rho_x,
                rho_y: s.state.rho_y,
                zeta: s.state.zeta,
                q_x: s.state.q_x,
                q_y: s.state.q_y,
                q_z: s.q_z,
                q0: s.q0,
                u: s.u,
            });
        }
    })
    .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(rows)
}
