//! Injection-domain cross sections and the search for the region that has to
//! be sampled on each plane.
//!
//! Detected injections sit very close to the beam axis (down to ~1e−8 R), so
//! the search walks down in scale before refining a bounding box. It relies on
//! the exact quadrant symmetry of the dynamics (x → −x, y → −y) and only
//! integrates nodes of the first quadrant.

use serde::{Deserialize, Serialize};

use crate::par;
use crate::params::SimParams;

use super::grid::{GridSpec, Rect};
use super::scatter::{shoot, DetectorFilter};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainCell {
    pub detected: bool,
    /// NaN if the trajectory failed.
    pub w_mev: f64,
    /// NaN if the electron never reaches the detector plane.
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainMap {
    pub plane: i32,
    pub grid: GridSpec,
    /// Row-major, x fastest.
    pub cells: Vec<DomainCell>,
}

impl DomainMap {
    pub fn detected_nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let nx = self.grid.nx;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.detected)
            .map(move |(k, _)| (self.grid.x(k % nx), self.grid.y(k / nx)))
    }

    pub fn detected_count(&self) -> usize {
        self.cells.iter().filter(|c| c.detected).count()
    }

    pub fn is_empty(&self) -> bool {
        self.detected_count() == 0
    }

    /// Bounding box of the detected nodes.
    pub fn bounding_box(&self) -> Option<Rect> {
        self.detected_nodes().fold(None, |acc, (x, y)| {
            Some(match acc {
                None => Rect {
                    x_min: x,
                    x_max: x,
                    y_min: y,
                    y_max: y,
                },
                Some(r) => Rect {
                    x_min: r.x_min.min(x),
                    x_max: r.x_max.max(x),
                    y_min: r.y_min.min(y),
                    y_max: r.y_max.max(y),
                },
            })
        })
    }

    /// Largest transverse size (width or height of the bounding box), units of R.
    pub fn transverse_extent(&self) -> f64 {
        self.bounding_box()
            .map_or(0.0, |r| r.width().max(r.height()))
    }
}

/// Integrates one trajectory per grid node, injected on plane z = nR.
pub fn domain_scan(
    plane: i32,
    grid: &GridSpec,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> DomainMap {
    let cells = par::map_ordered(&grid.nodes(), |&(x, y)| {
        scan_node(x, y, plane, filter, step, p)
    });
    DomainMap {
        plane,
        grid: *grid,
        cells,
    }
}

fn scan_node(
    x: f64,
    y: f64,
    plane: i32,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> DomainCell {
    match shoot(x, y, plane, filter, step, p) {
        Ok(shot) => DomainCell {
            detected: shot.detected,
            w_mev: shot.w_mev,
            alpha: shot.flight.crossing().map_or(f64::NAN, |c| c.alpha),
        },
        Err(_) => DomainCell {
            detected: false,
            w_mev: f64::NAN,
            alpha: f64::NAN,
        },
    }
}

/// Parameters of the sampling-region search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSearch {
    /// Half-width of the outermost square, units of R.
    pub outer_half_width: f64,
    /// Shrink factor between successive scales.
    pub scale_factor: f64,
    /// Smallest half-width tried before declaring the plane empty.
    pub min_half_width: f64,
    /// Nodes per half-axis (excluding 0) while descending in scale.
    pub coarse_nodes: usize,
    /// Nodes per half-axis while refining the bounding box.
    pub refine_nodes: usize,
    pub max_refinements: usize,
    /// Margin added around detected nodes, in grid cells.
    pub dilation_cells: f64,
}

impl Default for RegionSearch {
    fn default() -> Self {
        Self {
            outer_half_width: 2.0,
            scale_factor: 4.0,
            min_half_width: 1e-9,
            coarse_nodes: 5,
            refine_nodes: 10,
            max_refinements: 6,
            dilation_cells: 2.0,
        }
    }
}

/// Detected extent (max |x|, max |y|) of the symmetric grid with half-widths
/// (a, b) and `m` nodes per half-axis. Only the first quadrant is integrated.
fn quadrant_scan(
    a: f64,
    b: f64,
    m: usize,
    plane: i32,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> Option<(f64, f64)> {
    let nodes: Vec<(f64, f64)> = (0..=m)
        .flat_map(|j| (0..=m).map(move |i| (a * i as f64 / m as f64, b * j as f64 / m as f64)))
        .collect();
    let cells = par::map_ordered(&nodes, |&(x, y)| {
        scan_node(x, y, plane, filter, step, p).detected
    });
    nodes
        .iter()
        .zip(cells)
        .filter(|(_, d)| *d)
        .fold(None, |acc, (&(x, y), _)| {
            Some(acc.map_or((x, y), |(ax, ay): (f64, f64)| (ax.max(x), ay.max(y))))
        })
}

/// Rectangle, symmetric about both axes, enclosing every detected injection
/// found on `plane`, or `None` if nothing is detected at any scale.
pub fn find_sampling_region(
    plane: i32,
    search: &RegionSearch,
    filter: &DetectorFilter,
    step: f64,
    p: &SimParams,
) -> Option<Rect> {
    let outer = search.outer_half_width;
    let m = search.coarse_nodes.max(1);
    let mut half = outer;
    let (mut a, mut b) = loop {
        if half < search.min_half_width {
            return None;
        }
        if let Some((x, y)) = quadrant_scan(half, half, m, plane, filter, step, p) {
            let margin = search.dilation_cells * half / m as f64;
            break ((x + margin).min(outer), (y + margin).min(outer));
        }
        half /= search.scale_factor;
    };

    let m = search.refine_nodes.max(1);
    for _ in 0..search.max_refinements {
        let Some((x, y)) = quadrant_scan(a, b, m, plane, filter, step, p) else {
            break;
        };
        let na = (x + search.dilation_cells * a / m as f64).min(a);
        let nb = (y + search.dilation_cells * b / m as f64).min(b);
        let shrink = (na * nb) / (a * b);
        a = na;
        b = nb;
        if shrink > 0.7 {
            break;
        }
    }
    Some(Rect {
        x_min: -a,
        x_max: a,
        y_min: -b,
        y_max: b,
    })
}
