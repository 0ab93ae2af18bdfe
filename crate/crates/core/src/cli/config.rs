//! Flat `key = value` run configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DEFAULT_STEP;
use crate::experiment::{DEFAULT_BIN_WIDTH_DEG, DEFAULT_PLANES, DEFAULT_W_THRESHOLD_MEV};
use crate::params::{EnvelopeKind, Intensity, PhysicalConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Everything a run depends on. Serialising it back with [`RunConfig::to_text`]
/// and re-parsing yields the same configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub physical: PhysicalConfig,
    pub w_threshold_mev: f64,
    pub seed: u64,
    pub samples_per_plane: u64,
    /// Overrides `samples_per_plane` when set (electrons per R²).
    pub density_per_r2: Option<f64>,
    pub planes: (i32, i32),
    pub step: f64,
    pub naive_sampling: bool,
    pub disc_radius: f64,
    pub sample_cap: u64,
    pub bin_deg: f64,
    pub grid_n: usize,
    /// Half-width of the potential-map grid, units of R.
    pub map_half_width: f64,
    /// Fixed half-width of domain-map grids; 0 selects the searched region.
    pub domain_half_width: f64,
    pub injection: [f64; 3],
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            physical: PhysicalConfig::default(),
            w_threshold_mev: DEFAULT_W_THRESHOLD_MEV,
            seed: 0,
            samples_per_plane: 30_000,
            density_per_r2: None,
            planes: (*DEFAULT_PLANES.start(), *DEFAULT_PLANES.end()),
            step: DEFAULT_STEP,
            naive_sampling: false,
            disc_radius: 2.0,
            sample_cap: crate::experiment::DEFAULT_SAMPLE_CAP,
            bin_deg: DEFAULT_BIN_WIDTH_DEG,
            grid_n: 201,
            map_half_width: 3.0,
            domain_half_width: 0.0,
            injection: [1e-3, 0.0, -11.0],
        }
    }
}

impl RunConfig {
    pub fn plane_list(&self) -> Vec<i32> {
        (self.planes.0..=self.planes.1).collect()
    }

    /// Canonical text form, parseable by [`parse_config`].
    pub fn to_text(&self) -> String {
        let p = &self.physical;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("lambda_um", fmt(p.wavelength_um));
        put("R_um", fmt(p.focal_radius_um));
        put("omega_tau", fmt(p.omega_tau));
        match p.intensity {
            Intensity::A(a) => put("a", fmt(a)),
            Intensity::Eta0(e) => put("eta0", fmt(e)),
        }
        put("mu", fmt(p.mu));
        put("electron_keV", fmt(p.electron_kev));
        put("detector_z_cm", fmt(p.detector_z_cm));
        put("detector_r1_cm", fmt(p.detector_r1_cm));
        put("detector_r2_cm", fmt(p.detector_r2_cm));
        put(
            "envelope",
            match p.envelope {
                EnvelopeKind::Sin2 => "sin2".into(),
                EnvelopeKind::None => "none".into(),
            },
        );
        put("W_threshold_MeV", fmt(self.w_threshold_mev));
        put("smoothing_deg", fmt(p.detector_width_deg));
        put("seed", self.seed.to_string());
        put("samples_per_plane", self.samples_per_plane.to_string());
        if let Some(d) = self.density_per_r2 {
            put("density_per_R2", fmt(d));
        }
        put("planes", format!("{}..{}", self.planes.0, self.planes.1));
        put("step", fmt(self.step));
        put("naive_sampling", self.naive_sampling.to_string());
        put("disc_radius_R", fmt(self.disc_radius));
        put("sample_cap", self.sample_cap.to_string());
        put("bin_deg", fmt(self.bin_deg));
        put("grid_n", self.grid_n.to_string());
        put("map_half_width_R", fmt(self.map_half_width));
        put("domain_half_width_R", fmt(self.domain_half_width));
        put("x0_R", fmt(self.injection[0]));
        put("y0_R", fmt(self.injection[1]));
        put("z0_R", fmt(self.injection[2]));
        out
    }
}

// shortest representation that round-trips
fn fmt(v: f64) -> String {
    format!("{v:?}")
}

pub fn parse_planes(v: &str) -> Result<(i32, i32), String> {
    let (a, b) = v
        .split_once("..")
        .ok_or_else(|| format!("expected N1..N2, got '{v}'"))?;
    let a: i32 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad plane '{a}': {e}"))?;
    let b: i32 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad plane '{b}': {e}"))?;
    if a > b {
        return Err(format!("empty plane range {a}..{b}"));
    }
    Ok((a, b))
}

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors,
/// missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut a = None;
    let mut eta0 = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| ConfigError::Parse { line, msg };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let float = || {
            value
                .parse::<f64>()
                .map_err(|e| err(format!("{key}: '{value}' is not a number ({e})")))
        };
        let int = || {
            value
                .parse::<u64>()
                .map_err(|e| err(format!("{key}: '{value}' is not an integer ({e})")))
        };
        let p = &mut cfg.physical;
        match key {
            "lambda_um" => p.wavelength_um = float()?,
            "R_um" => p.focal_radius_um = float()?,
            "omega_tau" => p.omega_tau = float()?,
            "a" => a = Some(float()?),
            "eta0" => eta0 = Some(float()?),
            "mu" => p.mu = float()?,
            "electron_keV" => p.electron_kev = float()?,
            "detector_z_cm" => p.detector_z_cm = float()?,
            "detector_r1_cm" => p.detector_r1_cm = float()?,
            "detector_r2_cm" => p.detector_r2_cm = float()?,
            "smoothing_deg" => p.detector_width_deg = float()?,
            "envelope" => {
                p.envelope = match value {
                    "sin2" => EnvelopeKind::Sin2,
                    "none" => EnvelopeKind::None,
                    other => {
                        return Err(err(format!(
                            "envelope must be 'sin2' or 'none', got '{other}'"
                        )))
                    }
                }
            }
            "W_threshold_MeV" => cfg.w_threshold_mev = float()?,
            "seed" => cfg.seed = int()?,
            "samples_per_plane" => cfg.samples_per_plane = int()?,
            "density_per_R2" => cfg.density_per_r2 = Some(float()?),
            "planes" => cfg.planes = parse_planes(value).map_err(err)?,
            "step" => cfg.step = float()?,
            "naive_sampling" => {
                cfg.naive_sampling = value.parse().map_err(|_| {
                    err(format!(
                        "naive_sampling: expected true/false, got '{value}'"
                    ))
                })?
            }
            "disc_radius_R" => cfg.disc_radius = float()?,
            "sample_cap" => cfg.sample_cap = int()?,
            "bin_deg" => cfg.bin_deg = float()?,
            "grid_n" => cfg.grid_n = int()? as usize,
            "map_half_width_R" => cfg.map_half_width = float()?,
            "domain_half_width_R" => cfg.domain_half_width = float()?,
            "x0_R" => cfg.injection[0] = float()?,
            "y0_R" => cfg.injection[1] = float()?,
            "z0_R" => cfg.injection[2] = float()?,
            _ => return Err(err(format!("unknown key '{key}'"))),
        }
    }
    cfg.physical.intensity = match (a, eta0) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Invalid(
                "give either 'a' or 'eta0', not both".into(),
            ))
        }
        (Some(a), None) => Intensity::A(a),
        (None, Some(e)) => Intensity::Eta0(e),
        (None, None) => cfg.physical.intensity,
    };
    Ok(cfg)
}
