//! Averaged (ponderomotive) equations of motion, integrated over the phase φ
//! with fixed-step RK4, and the field-free flight to the detector plane.

use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;
use crate::field::{potential_sample, PotentialSample};
use crate::params::{SimParams, ELECTRON_REST_ENERGY_MEV};

/// Default RK4 step in φ.
pub const DEFAULT_STEP: f64 = 0.25;

/// Once Re(ρ⊥²/(1 + 2iζ)) exceeds this while the electron moves outward, the
/// Gaussian factor of U is below e⁻⁸⁰ and the rest of the pulse is free flight.
pub const FIELD_EXIT_EXPONENT: f64 = 40.0;

/// One point of the averaged phase space. q₋ is carried but never integrated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PonderomotiveState {
    pub phi: f64,
    pub rho_x: f64,
    pub rho_y: f64,
    /// z/L, L = ωR² the Rayleigh length.
    pub zeta: f64,
    pub q_x: f64,
    pub q_y: f64,
    pub q_minus: f64,
}

impl PonderomotiveState {
    fn vector(&self) -> [f64; 5] {
        [self.rho_x, self.rho_y, self.zeta, self.q_x, self.q_y]
    }

    fn with_vector(&self, phi: f64, v: [f64; 5]) -> Self {
        Self {
            phi,
            rho_x: v[0],
            rho_y: v[1],
            zeta: v[2],
            q_x: v[3],
            q_y: v[4],
            q_minus: self.q_minus,
        }
    }

    pub fn q_perp_sq(&self) -> f64 {
        self.q_x * self.q_x + self.q_y * self.q_y
    }

    /// Canonical angular momentum about the beam axis.
    pub fn l_z(&self) -> f64 {
        self.rho_x * self.q_y - self.rho_y * self.q_x
    }
}

/// Dressed mass shell q₀² − q_z² − q⊥² = 1 + 2U with q₀ − q_z = q₋.
/// Returns (q_z, q₀).
pub fn close_mass_shell(q_perp_sq: f64, q_minus: f64, u: f64) -> Result<(f64, f64), DynamicsError> {
    if q_minus.is_nan() || q_minus <= 0.0 {
        return Err(DynamicsError::Domain(q_minus));
    }
    let q_z = 0.5 * ((1.0 + q_perp_sq + 2.0 * u) / q_minus - q_minus);
    Ok((q_z, q_z + q_minus))
}

/// Right-hand side of the averaged equations together with the field sample
/// it was built from. Order: (ρx, ρy, ζ, qx, qy).
pub fn eom_rhs_sampled(
    state: &PonderomotiveState,
    p: &SimParams,
) -> Result<([f64; 5], PotentialSample, f64), DynamicsError> {
    let sample = potential_sample(state.rho_x, state.rho_y, state.zeta, state.phi, p);
    let (q_z, _) = close_mass_shell(state.q_perp_sq(), state.q_minus, sample.u)?;
    let k = p.delta / state.q_minus;
    let rhs = [
        k * state.q_x,
        k * state.q_y,
        p.delta * k * q_z,
        -k * sample.grad[0],
        -k * sample.grad[1],
    ];
    Ok((rhs, sample, q_z))
}

pub fn eom_rhs(state: &PonderomotiveState, p: &SimParams) -> Result<[f64; 5], DynamicsError> {
    eom_rhs_sampled(state, p).map(|(rhs, _, _)| rhs)
}

/// Kinetic energy (MeV) and polar angle (rad) of a field-free state.
pub fn observables(state: &PonderomotiveState, p: &SimParams) -> Result<(f64, f64), DynamicsError> {
    if state.phi.abs() < p.omega_tau {
        return Err(DynamicsError::State {
            phi: state.phi,
            omega_tau: p.omega_tau,
        });
    }
    let q_perp_sq = state.q_perp_sq();
    let (q_z, q0) = close_mass_shell(q_perp_sq, state.q_minus, 0.0)?;
    Ok((
        (q0 - 1.0) * ELECTRON_REST_ENERGY_MEV,
        q_perp_sq.sqrt().atan2(q_z),
    ))
}

/// Polar angle implied by energy conservation of the light-front momentum:
/// tan θ = √(q₋(2q₀ − q₋) − 1)/(q₀ − q₋).
pub fn polar_angle_from_energy(kinetic_mev: f64, q_minus: f64) -> f64 {
    let q0 = 1.0 + kinetic_mev / ELECTRON_REST_ENERGY_MEV;
    let perp_sq = (q_minus * (2.0 * q0 - q_minus) - 1.0).max(0.0);
    perp_sq.sqrt().atan2(q0 - q_minus)
}

/// Drift of the conserved quantities over one trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub q_minus_drift: f64,
    /// Meaningful only for an azimuthally symmetric potential.
    pub l_z_drift: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryResult {
    pub exit_state: PonderomotiveState,
    pub kinetic_energy_mev: f64,
    pub polar_angle: f64,
    pub residuals: Residuals,
    pub step_count: usize,
}

/// A right-hand-side evaluation seen by an [`integrate_observed`] observer.
#[derive(Clone, Copy, Debug)]
pub struct Substep<'a> {
    /// 0 for the state at the start of a step, 1..=3 for the inner RK4 stages.
    pub stage: u8,
    pub state: &'a PonderomotiveState,
    pub u: f64,
    pub q_z: f64,
    pub q0: f64,
}

pub fn integrate(
    state0: &PonderomotiveState,
    p: &SimParams,
    step: f64,
) -> Result<TrajectoryResult, DynamicsError> {
    integrate_observed(state0, p, step, |_| {})
}

/// Classic fixed-step RK4 from `state0.phi` to φ = +ωτ, the last step
/// shortened to land on the end point. `observer` sees every stage evaluation
/// and, with `stage == 0`, the final state.
pub fn integrate_observed<F>(
    state0: &PonderomotiveState,
    p: &SimParams,
    step: f64,
    mut observer: F,
) -> Result<TrajectoryResult, DynamicsError>
where
    F: FnMut(&Substep<'_>),
{
    if !(step > 0.0 && step < p.omega_tau / 10.0) {
        return Err(DynamicsError::Step {
            step,
            omega_tau: p.omega_tau,
        });
    }
    let phi_start = state0.phi;
    let phi_end = p.omega_tau;
    let span = phi_end - phi_start;
    let n_steps = if span > 0.0 {
        (span / step).ceil() as usize
    } else {
        0
    };

    let mut state = *state0;
    let mut steps_taken = 0;
    let mut eval = |s: &PonderomotiveState, stage: u8| -> Result<[f64; 5], DynamicsError> {
        let (rhs, sample, q_z) = eom_rhs_sampled(s, p)?;
        observer(&Substep {
            stage,
            state: s,
            u: sample.u,
            q_z,
            q0: q_z + s.q_minus,
        });
        Ok(rhs)
    };

    for k in 0..n_steps {
        let phi = state.phi;
        let phi_next = if k + 1 == n_steps {
            phi_end
        } else {
            phi_start + (k + 1) as f64 * step
        };
        let h = phi_next - phi;
        let y = state.vector();

        let k1 = eval(&state, 0)?;
        let s2 = state.with_vector(phi + 0.5 * h, axpy(&y, 0.5 * h, &k1));
        let k2 = eval(&s2, 1)?;
        let s3 = state.with_vector(phi + 0.5 * h, axpy(&y, 0.5 * h, &k2));
        let k3 = eval(&s3, 2)?;
        let s4 = state.with_vector(phi_next, axpy(&y, h, &k3));
        let k4 = eval(&s4, 3)?;

        let mut next = y;
        for i in 0..5 {
            next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite(phi_next));
        }
        state = state.with_vector(phi_next, next);
        steps_taken += 1;
        if phi_next < phi_end && left_the_beam(&state) {
            state = free_flight(&state, phi_end, p)?;
            break;
        }
    }
    eval(&state, 0)?;

    let (kinetic_energy_mev, polar_angle) = observables(&state, p)?;
    Ok(TrajectoryResult {
        exit_state: state,
        kinetic_energy_mev,
        polar_angle,
        residuals: Residuals {
            q_minus_drift: state.q_minus - state0.q_minus,
            l_z_drift: state.l_z() - state0.l_z(),
        },
        step_count: steps_taken,
    })
}

fn left_the_beam(s: &PonderomotiveState) -> bool {
    let rho_sq = s.rho_x * s.rho_x + s.rho_y * s.rho_y;
    let outward = s.rho_x * s.q_x + s.rho_y * s.q_y > 0.0;
    outward && rho_sq / (1.0 + 4.0 * s.zeta * s.zeta) > FIELD_EXIT_EXPONENT
}

/// Field-free propagation to phase `phi_end`.
fn free_flight(
    s: &PonderomotiveState,
    phi_end: f64,
    p: &SimParams,
) -> Result<PonderomotiveState, DynamicsError> {
    let (q_z, _) = close_mass_shell(s.q_perp_sq(), s.q_minus, 0.0)?;
    let k = p.delta / s.q_minus * (phi_end - s.phi);
    Ok(PonderomotiveState {
        phi: phi_end,
        rho_x: s.rho_x + k * s.q_x,
        rho_y: s.rho_y + k * s.q_y,
        zeta: s.zeta + p.delta * k * q_z,
        ..*s
    })
}

fn axpy(y: &[f64; 5], a: f64, x: &[f64; 5]) -> [f64; 5] {
    std::array::from_fn(|i| y[i] + a * x[i])
}

/// Where a field-free electron crosses the detector plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub x_cm: f64,
    pub y_cm: f64,
    /// Azimuth measured from the polarization (x) axis, radians in (−π, π].
    pub alpha: f64,
}

impl Crossing {
    pub fn radius_cm(&self) -> f64 {
        self.x_cm.hypot(self.y_cm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Flight {
    /// Crossed the plane inside the ring r₁ ≤ r ≤ r₂.
    Hit(Crossing),
    /// Crossed the plane outside the ring.
    Outside(Crossing),
    /// Never reaches the plane (q_z ≤ 0).
    Backward,
}

impl Flight {
    pub fn is_hit(&self) -> bool {
        matches!(self, Flight::Hit(_))
    }

    pub fn crossing(&self) -> Option<Crossing> {
        match *self {
            Flight::Hit(c) | Flight::Outside(c) => Some(c),
            Flight::Backward => None,
        }
    }
}

/// Straight-line flight from the exit point to the detector plane.
pub fn ballistic_hit(exit: &PonderomotiveState, p: &SimParams) -> Flight {
    let (q_z, _) = match close_mass_shell(exit.q_perp_sq(), exit.q_minus, 0.0) {
        Ok(v) => v,
        Err(_) => return Flight::Backward,
    };
    if q_z <= 0.0 {
        return Flight::Backward;
    }
    let det = &p.detector;
    let z_exit = p.z_over_r_from_zeta(exit.zeta);
    let path = (det.z - z_exit) / q_z;
    let x = exit.rho_x + path * exit.q_x;
    let y = exit.rho_y + path * exit.q_y;
    let r = x.hypot(y);
    let to_cm = p.r_in_cm();
    let crossing = Crossing {
        x_cm: x * to_cm,
        y_cm: y * to_cm,
        alpha: y.atan2(x),
    };
    if r >= det.r1 && r <= det.r2 {
        Flight::Hit(crossing)
    } else {
        Flight::Outside(crossing)
    }
}
