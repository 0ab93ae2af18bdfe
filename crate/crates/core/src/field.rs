//! Gaussian-beam focal functions and the cycle-averaged ponderomotive potential.
//!
//! Coordinates: ρ⊥ = r⊥/R, ζ = z/L with L = ωR², φ the travelling-wave phase.
//! The azimuthal term is written through cos 2ψ = (ρy² − ρx²)/ρ⊥² and
//! G₂ = F₂/ρ⊥², which removes the apparent singularity on the axis.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::params::{EnvelopeKind, SimParams};

/// Sine-squared envelope g(u) = cos²(πu/2) on |u| < 1 and 0 outside.
pub fn envelope(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let c = (FRAC_PI_2 * u).cos();
        c * c
    }
}

/// Envelope of the requested kind at phase φ.
pub fn envelope_at(kind: EnvelopeKind, phi: f64, omega_tau: f64) -> f64 {
    match kind {
        EnvelopeKind::Sin2 => envelope(phi / omega_tau),
        EnvelopeKind::None => 1.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FocalFunctions {
    pub f1: Complex64,
    /// F₂/ρ⊥².
    pub g2: Complex64,
}

impl FocalFunctions {
    pub fn f2(&self, s: f64) -> Complex64 {
        self.g2 * s
    }
}

/// F₁ and G₂ = F₂/ρ⊥² at `s` = ρ⊥² and longitudinal coordinate ζ.
pub fn eval_focal_functions(s: f64, zeta: f64) -> FocalFunctions {
    focal_with_slopes(s, zeta).0
}

/// Focal functions together with their s-derivatives (dF₁/ds, dG₂/ds).
fn focal_with_slopes(s: f64, zeta: f64) -> (FocalFunctions, Complex64, Complex64) {
    let inv_w = Complex64::new(1.0, 2.0 * zeta).inv();
    let e = (-s * inv_w).exp();
    let inv_w2 = inv_w * inv_w;
    let inv_w3e = inv_w2 * inv_w * e;
    let f1 = inv_w2 * e * (1.0 - s * inv_w);
    let g2 = -inv_w3e;
    let df1 = -inv_w3e * (2.0 - s * inv_w);
    let dg2 = inv_w3e * inv_w;
    (FocalFunctions { f1, g2 }, df1, dg2)
}

/// Potential value (units of mc²) and transverse gradient at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialSample {
    pub u: f64,
    pub grad: [f64; 2],
}

/// Evaluates U and ∂U/∂ρ⊥ in one pass.
pub fn potential_sample(
    rho_x: f64,
    rho_y: f64,
    zeta: f64,
    phi: f64,
    p: &SimParams,
) -> PotentialSample {
    let g = envelope_at(p.envelope, phi, p.omega_tau);
    if g == 0.0 {
        return PotentialSample {
            u: 0.0,
            grad: [0.0, 0.0],
        };
    }
    let amp = 0.5 * p.eta0 * p.eta0 * g * g;
    let mu = p.mu;
    let (xx, yy) = (rho_x * rho_x, rho_y * rho_y);
    let s = xx + yy;
    let d = yy - xx;

    let (ff, df1, dg2) = focal_with_slopes(s, zeta);
    let (f1, g2) = (ff.f1, ff.g2);
    let g2_sq = g2.norm_sqr();
    let p_val = f1.norm_sqr() + mu * mu * s * s * g2_sq;
    let q_val = (f1 * g2.conj()).re;
    let p_s = 2.0 * (df1 * f1.conj()).re
        + mu * mu * (2.0 * s * g2_sq + 2.0 * s * s * (dg2 * g2.conj()).re);
    let q_s = (df1 * g2.conj()).re + (f1 * dg2.conj()).re;

    let two_mu = 2.0 * mu;
    let bracket = p_val + two_mu * d * q_val;
    let radial = 2.0 * (p_s + two_mu * d * q_s);
    let tangential = 2.0 * two_mu * q_val;
    PotentialSample {
        u: amp * bracket.max(0.0),
        grad: [
            amp * (radial - tangential) * rho_x,
            amp * (radial + tangential) * rho_y,
        ],
    }
}

pub fn potential(rho_x: f64, rho_y: f64, zeta: f64, phi: f64, p: &SimParams) -> f64 {
    potential_sample(rho_x, rho_y, zeta, phi, p).u
}

pub fn potential_gradient(rho_x: f64, rho_y: f64, zeta: f64, phi: f64, p: &SimParams) -> [f64; 2] {
    potential_sample(rho_x, rho_y, zeta, phi, p).grad
}
