//! CSV serialisation. Every file has a header row and floats are written with
//! 17 significant digits so output is identical across platforms.

use std::io::{self, Write};

use crate::experiment::{AngularDistribution, DomainMap, GridSpec, ScatterRecord};
use crate::params::ELECTRON_REST_ENERGY_MEV;

pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_potential_map(w: &mut impl Write, grid: &GridSpec, u: &[f64]) -> io::Result<()> {
    writeln!(w, "x_over_R,y_over_R,U_MeV")?;
    for (&(x, y), &v) in grid.nodes().iter().zip(u) {
        writeln!(
            w,
            "{},{},{}",
            num(x),
            num(y),
            num(v * ELECTRON_REST_ENERGY_MEV)
        )?;
    }
    Ok(())
}

pub fn write_domain_maps(w: &mut impl Write, maps: &[DomainMap]) -> io::Result<()> {
    writeln!(w, "n,x_over_R,y_over_R,detected,W_MeV,alpha_deg")?;
    for map in maps {
        for (&(x, y), c) in map.grid.nodes().iter().zip(&map.cells) {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                map.plane,
                num(x),
                num(y),
                flag(c.detected),
                num(c.w_mev),
                num(c.alpha.to_degrees())
            )?;
        }
    }
    Ok(())
}

pub fn write_records(w: &mut impl Write, records: &[ScatterRecord]) -> io::Result<()> {
    writeln!(
        w,
        "plane_n,x0_over_R,y0_over_R,W_MeV,theta_deg,alpha_deg,X_cm,Y_cm,detected"
    )?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.plane,
            num(r.x0),
            num(r.y0),
            num(r.w_mev),
            num(r.theta.to_degrees()),
            num(r.alpha.to_degrees()),
            num(r.x_cm),
            num(r.y_cm),
            flag(r.detected)
        )?;
    }
    Ok(())
}

pub fn write_histogram(w: &mut impl Write, d: &AngularDistribution) -> io::Result<()> {
    writeln!(w, "alpha_deg,count,n_smoothed")?;
    for ((c, n), s) in d.centers.iter().zip(&d.counts).zip(&d.smoothed) {
        writeln!(w, "{},{},{}", num(c.to_degrees()), n, num(*s))?;
    }
    Ok(())
}

/// One row of a trajectory dump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub phi: f64,
    pub rho_x: f64,
    pub rho_y: f64,
    pub zeta: f64,
    pub q_x: f64,
    pub q_y: f64,
    pub q_z: f64,
    pub q0: f64,
    pub u: f64,
}

pub fn write_trajectory(w: &mut impl Write, rows: &[TrajectoryRow]) -> io::Result<()> {
    writeln!(w, "phi,rho_x,rho_y,zeta,q_x,q_y,q_z,q0,U")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            num(r.phi),
            num(r.rho_x),
            num(r.rho_y),
            num(r.zeta),
            num(r.q_x),
            num(r.q_y),
            num(r.q_z),
            num(r.q0),
            num(r.u)
        )?;
    }
    Ok(())
}
