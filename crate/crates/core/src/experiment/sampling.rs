//! Counter-based sampling of injection positions: position `k` of plane `n`
//! is a pure function of (seed, n, k, region), so any partition of the work
//! reproduces the same ensemble.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::params::SimParams;

use super::domain::{find_sampling_region, RegionSearch};
use super::grid::Rect;
use super::scatter::DetectorFilter;

/// Injection planes z = nR used by the reference setup.
pub const DEFAULT_PLANES: std::ops::RangeInclusive<i32> = -27..=5;

pub const DEFAULT_SAMPLE_CAP: u64 = 100_000_000;

/// Random words consumed per sample.
const WORDS_PER_SAMPLE: u128 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    /// Budget of `n × planes` trajectories, spread at equal density.
    PerPlane(u64),
    /// Electrons per R².
    PerArea(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub planes: Vec<i32>,
    pub density: Density,
    pub seed: u64,
    /// Skip the region search and sample the full disc.
    pub naive: bool,
    pub disc_radius: f64,
    pub cap: u64,
    pub search: RegionSearch,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            planes: DEFAULT_PLANES.collect(),
            density: Density::PerPlane(30_000),
            seed: 0,
            naive: false,
            disc_radius: 2.0,
            cap: DEFAULT_SAMPLE_CAP,
            search: RegionSearch::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disc { radius: f64 },
    Rect(Rect),
}

impl Region {
    pub fn area(&self) -> f64 {
        match self {
            Region::Disc { radius } => std::f64::consts::PI * radius * radius,
            Region::Rect(r) => r.area(),
        }
    }

    fn place(&self, u: f64, v: f64) -> (f64, f64) {
        match *self {
            Region::Disc { radius } => {
                let r = radius * u.sqrt();
                let (s, c) = (TAU * v).sin_cos();
                (r * c, r * s)
            }
            Region::Rect(r) => (r.x_min + u * r.width(), r.y_min + v * r.height()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanePlan {
    pub plane: i32,
    /// `None` when the region search found no detected injections.
    pub region: Option<Region>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub seed: u64,
    pub density_per_r2: f64,
    pub planes: Vec<PlanePlan>,
}

impl SamplingPlan {
    pub fn total(&self) -> u64 {
        self.planes.iter().map(|p| p.count).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Injection {
    pub plane: i32,
    pub index: u64,
    pub x: f64,
    pub y: f64,
}

fn uniform_pair(seed: u64, plane: i32, index: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(plane as i64 as u64);
    rng.set_word_pos(index as u128 * WORDS_PER_SAMPLE);
    (rng.random::<f64>(), rng.random::<f64>())
}

/// Position of sample `index` on `plane`, units of R.
pub fn injection_position(seed: u64, plane: i32, index: u64, region: &Region) -> (f64, f64) {
    let (u, v) = uniform_pair(seed, plane, index);
    region.place(u, v)
}

/// Finds each plane's sampling region and splits the budget so that the
/// surface density is the same on every plane.
pub fn plan_sampling(
    cfg: &SamplingConfig,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> Result<SamplingPlan, ExperimentError> {
    if cfg.planes.is_empty() {
        return Err(ExperimentError::Sampling("no injection planes".into()));
    }
    if cfg.disc_radius.is_nan() || cfg.disc_radius <= 0.0 {
        return Err(ExperimentError::Sampling(format!(
            "disc radius must be positive, got {}",
            cfg.disc_radius
        )));
    }
    let regions: Vec<Option<Region>> = cfg
        .planes
        .iter()
        .map(|&n| {
            if cfg.naive {
                Some(Region::Disc {
                    radius: cfg.disc_radius,
                })
            } else {
                find_sampling_region(n, &cfg.search, filter, step, p).map(Region::Rect)
            }
        })
        .collect();
    let total_area: f64 = regions.iter().flatten().map(Region::area).sum();

    let density = match cfg.density {
        Density::PerPlane(n) => {
            if total_area > 0.0 {
                (n as f64 * cfg.planes.len() as f64) / total_area
            } else {
                0.0
            }
        }
        Density::PerArea(d) if d >= 0.0 && d.is_finite() => d,
        Density::PerArea(d) => {
            return Err(ExperimentError::Sampling(format!("invalid density {d}")))
        }
    };
    let requested = density * total_area;
    if requested > cfg.cap as f64 {
        return Err(ExperimentError::TooManySamples {
            requested: requested.min(u64::MAX as f64) as u64,
            cap: cfg.cap,
        });
    }

    // cumulative rounding keeps the total exact
    let mut acc = 0.0;
    let mut issued = 0u64;
    let planes = cfg
        .planes
        .iter()
        .zip(regions)
        .map(|(&plane, region)| {
            acc += region.map_or(0.0, |r| r.area()) * density;
            let upto = acc.round() as u64;
            let count = upto - issued;
            issued = upto;
            PlanePlan {
                plane,
                region,
                count,
            }
        })
        .collect();
    Ok(SamplingPlan {
        seed: cfg.seed,
        density_per_r2: density,
        planes,
    })
}

/// Every injection of the plan in canonical (plane, index) order.
pub fn sample_injections(plan: &SamplingPlan) -> impl Iterator<Item = Injection> + '_ {
    let seed = plan.seed;
    plan.planes
        .iter()
        .filter_map(|pp| pp.region.map(|r| (pp, r)))
        .flat_map(move |(pp, region)| {
            (0..pp.count).map(move |index| {
                let (x, y) = injection_position(seed, pp.plane, index, &region);
                Injection {
                    plane: pp.plane,
                    index,
                    x,
                    y,
                }
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc_plan(count: u64, planes: &[i32]) -> SamplingPlan {
        SamplingPlan {
            seed: 7,
            density_per_r2: 0.0,
            planes: planes
                .iter()
                .map(|&plane| PlanePlan {
                    plane,
                    region: Some(Region::Disc { radius: 2.0 }),
                    count,
                })
                .collect(),
        }
    }

    #[test]
    fn default_planes() {
        let planes: Vec<i32> = DEFAULT_PLANES.collect();
        assert_eq!(planes.len(), 33);
        assert_eq!(planes[0], -27);
        assert_eq!(*planes.last().unwrap(), 5);
    }

    #[test]
    fn positions_depend_only_on_counter() {
        let disc = Region::Disc { radius: 2.0 };
        let forward: Vec<_> = (0..100)
            .map(|k| injection_position(3, -11, k, &disc))
            .collect();
        let backward: Vec<_> = (0..100)
            .rev()
            .map(|k| injection_position(3, -11, k, &disc))
            .collect();
        assert!(forward.iter().eq(backward.iter().rev()));
        assert_ne!(
            injection_position(3, -11, 0, &disc),
            injection_position(3, -10, 0, &disc)
        );
        assert_ne!(
            injection_position(3, -11, 0, &disc),
            injection_position(4, -11, 0, &disc)
        );
        assert_ne!(
            injection_position(3, -11, 0, &disc),
            injection_position(3, -11, 1, &disc)
        );
    }

    #[test]
    fn stream_is_canonical() {
        let plan = disc_plan(5, &[-2, 3]);
        let inj: Vec<_> = sample_injections(&plan).collect();
        assert_eq!(inj.len(), 10);
        assert_eq!((inj[0].plane, inj[0].index), (-2, 0));
        assert_eq!((inj[9].plane, inj[9].index), (3, 4));
        assert!(inj.iter().all(|i| i.x.hypot(i.y) <= 2.0));
    }

    // chi-square critical values at p = 0.01
    const CHI2_19: f64 = 36.19;
    const CHI2_35: f64 = 57.34;

    #[test]
    fn disc_sampling_is_uniform() {
        let plan = disc_plan(100_000, &[0]);
        let n = 100_000f64;
        let mut radial = [0f64; 20];
        let mut angular = [0f64; 36];
        for inj in sample_injections(&plan) {
            let r2 = (inj.x * inj.x + inj.y * inj.y) / 4.0;
            radial[((r2 * 20.0) as usize).min(19)] += 1.0;
            let a = inj.y.atan2(inj.x).rem_euclid(TAU);
            angular[((a / TAU * 36.0) as usize).min(35)] += 1.0;
        }
        let chi2 = |bins: &[f64]| {
            let e = n / bins.len() as f64;
            bins.iter().map(|o| (o - e) * (o - e) / e).sum::<f64>()
        };
        assert!(chi2(&radial) < CHI2_19, "radial chi2 {}", chi2(&radial));
        assert!(chi2(&angular) < CHI2_35, "angular chi2 {}", chi2(&angular));
    }

    #[test]
    fn cap_is_enforced() {
        let p = crate::params::derive_sim_params(&Default::default()).unwrap();
        let cfg = SamplingConfig {
            planes: vec![0, 1],
            density: Density::PerArea(3e15),
            naive: true,
            ..Default::default()
        };
        let err = plan_sampling(&cfg, &DetectorFilter::default(), 0.25, &p).unwrap_err();
        assert!(matches!(err, ExperimentError::TooManySamples { .. }));
    }

    #[test]
    fn naive_budget_is_split_evenly() {
        let p = crate::params::derive_sim_params(&Default::default()).unwrap();
        let cfg = SamplingConfig {
            planes: vec![-3, 0, 4],
            density: Density::PerPlane(1000),
            naive: true,
            ..Default::default()
        };
        let plan = plan_sampling(&cfg, &DetectorFilter::default(), 0.25, &p).unwrap();
        assert_eq!(plan.total(), 3000);
        assert!(plan.planes.iter().all(|pp| pp.count == 1000));
    }
}
