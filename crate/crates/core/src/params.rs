//! Physical configuration and the derived dimensionless parameter set.
//!
//! Internally m = c = 1: momenta are in units of mc, energies and the
//! ponderomotive potential in units of mc², transverse lengths in units of
//! the focal radius R and the longitudinal coordinate in units of the
//! Rayleigh length L = ωR².

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::PonderomotiveState;
use crate::error::ParameterError;

/// Electron rest energy, MeV.
pub const ELECTRON_REST_ENERGY_MEV: f64 = 0.511;

/// Above this value of Δ the lowest-order averaged model is questionable.
pub const WEAK_FOCUS_WARN: f64 = 0.1;

const UM_PER_CM: f64 = 1.0e4;

/// Temporal envelope of the pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    /// cos²(πφ/2ωτ) on |φ| ≤ ωτ.
    Sin2,
    /// g ≡ 1 (stationary beam); the integration window is still [−ωτ, ωτ].
    None,
}

/// Peak intensity, given either as η₀ or as the normalized vector potential a.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Intensity {
    Eta0(f64),
    A(f64),
}

impl Intensity {
    pub fn eta0(self) -> f64 {
        match self {
            Intensity::Eta0(eta) => eta,
            Intensity::A(a) => a / 2f64.sqrt(),
        }
    }
}

/// User-facing configuration in laboratory units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    pub wavelength_um: f64,
    pub focal_radius_um: f64,
    pub omega_tau: f64,
    pub intensity: Intensity,
    pub mu: f64,
    pub electron_kev: f64,
    pub detector_z_cm: f64,
    pub detector_r1_cm: f64,
    pub detector_r2_cm: f64,
    pub detector_width_deg: f64,
    pub envelope: EnvelopeKind,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            wavelength_um: 1.0,
            focal_radius_um: 10.0,
            omega_tau: 480.0,
            intensity: Intensity::A(3.0),
            mu: -1.55,
            electron_kev: 10.0,
            detector_z_cm: 11.66,
            detector_r1_cm: 8.99,
            detector_r2_cm: 9.89,
            detector_width_deg: 5.5,
            envelope: EnvelopeKind::Sin2,
        }
    }
}

impl PhysicalConfig {
    pub fn validate(&self) -> Result<(), ParameterError> {
        let positive = [
            ("wavelength", self.wavelength_um),
            ("focal radius", self.focal_radius_um),
            ("omega_tau", self.omega_tau),
            ("electron energy", self.electron_kev),
            ("detector radius r1", self.detector_r1_cm),
            ("detector azimuthal width", self.detector_width_deg),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParameterError::NotPositive { name, value });
            }
        }
        let eta0 = self.intensity.eta0();
        if !(eta0.is_finite() && eta0 >= 0.0) {
            return Err(ParameterError::NotPositive {
                name: "intensity",
                value: eta0,
            });
        }
        if !self.mu.is_finite() {
            return Err(ParameterError::NotFinite {
                name: "mu",
                value: self.mu,
            });
        }
        let (r1, r2, z) = (self.detector_r1_cm, self.detector_r2_cm, self.detector_z_cm);
        if !(r1 < r2 && r2 < z) {
            return Err(ParameterError::DetectorGeometry { r1, r2, z });
        }
        Ok(())
    }
}

/// Detector ring placed on the plane z = `z`, all lengths in units of R.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorGeometry {
    pub z: f64,
    pub r1: f64,
    pub r2: f64,
}

impl DetectorGeometry {
    pub fn from_cm(z_cm: f64, r1_cm: f64, r2_cm: f64, focal_radius_um: f64) -> Self {
        let to_r = UM_PER_CM / focal_radius_um;
        Self {
            z: z_cm * to_r,
            r1: r1_cm * to_r,
            r2: r2_cm * to_r,
        }
    }

    pub fn to_cm(&self, focal_radius_um: f64) -> (f64, f64, f64) {
        let to_cm = focal_radius_um / UM_PER_CM;
        (self.z * to_cm, self.r1 * to_cm, self.r2 * to_cm)
    }

    /// Polar-angle window [θ₁, θ₂] seen from the focus, radians.
    pub fn polar_window(&self) -> (f64, f64) {
        (self.r1.atan2(self.z), self.r2.atan2(self.z))
    }
}

/// Dimensionless parameters shared by every module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Δ = 1/ωR.
    pub delta: f64,
    /// Δ′ = 1/ωτ.
    pub delta_prime: f64,
    pub omega_tau: f64,
    pub eta0: f64,
    pub mu: f64,
    pub gamma0: f64,
    pub beta0: f64,
    /// Conserved light-front momentum q₋ = γ₀(1 − β₀).
    pub q_minus0: f64,
    /// Rayleigh length L = ωR² in units of R (equals 1/Δ).
    pub rayleigh_over_r: f64,
    pub focal_radius_um: f64,
    pub detector: DetectorGeometry,
    /// Azimuthal width of the detector, radians.
    pub detector_width: f64,
    pub envelope: EnvelopeKind,
}

/// Derives the internal parameter set. Emits no warning itself; see
/// [`SimParams::weak_focus_warning`].
pub fn derive_sim_params(cfg: &PhysicalConfig) -> Result<SimParams, ParameterError> {
    cfg.validate()?;
    let delta = cfg.wavelength_um / (2.0 * PI * cfg.focal_radius_um);
    let delta_prime = 1.0 / cfg.omega_tau;
    if delta_prime > delta {
        return Err(ParameterError::PulseTooShort { delta, delta_prime });
    }
    let (gamma0, beta0, q_minus0) = free_electron(cfg.electron_kev);
    Ok(SimParams {
        delta,
        delta_prime,
        omega_tau: cfg.omega_tau,
        eta0: cfg.intensity.eta0(),
        mu: cfg.mu,
        gamma0,
        beta0,
        q_minus0,
        rayleigh_over_r: 1.0 / delta,
        focal_radius_um: cfg.focal_radius_um,
        detector: DetectorGeometry::from_cm(
            cfg.detector_z_cm,
            cfg.detector_r1_cm,
            cfg.detector_r2_cm,
            cfg.focal_radius_um,
        ),
        detector_width: cfg.detector_width_deg.to_radians(),
        envelope: cfg.envelope,
    })
}

/// (γ₀, β₀, q₋) of a free electron moving along +z with kinetic energy in keV.
pub fn free_electron(kinetic_kev: f64) -> (f64, f64, f64) {
    let t = kinetic_kev * 1.0e-3 / ELECTRON_REST_ENERGY_MEV;
    let gamma = 1.0 + t;
    let gamma_beta = (t * (t + 2.0)).sqrt();
    let beta = gamma_beta / gamma;
    // γ(1 − β) = 1/(γ + γβ), free of cancellation at high energy
    let q_minus = 1.0 / (gamma + gamma_beta);
    (gamma, beta, q_minus)
}

/// State of an electron at the moment the leading edge of the pulse (φ = −ωτ)
/// reaches it. `injection` is (x₀, y₀, z₀) in units of R.
pub fn derive_initial_state(p: &SimParams, injection: [f64; 3]) -> PonderomotiveState {
    PonderomotiveState {
        phi: -p.omega_tau,
        rho_x: injection[0],
        rho_y: injection[1],
        zeta: p.zeta_from_z_over_r(injection[2]),
        q_x: 0.0,
        q_y: 0.0,
        q_minus: p.q_minus0,
    }
}

impl SimParams {
    pub fn weak_focus_warning(&self) -> Option<String> {
        (self.delta > WEAK_FOCUS_WARN).then(|| {
            format!(
                "delta = {:.4} exceeds {WEAK_FOCUS_WARN}; the averaged model assumes a weakly focused beam",
                self.delta
            )
        })
    }

    /// Initial kinetic energy in MeV.
    pub fn initial_kinetic_mev(&self) -> f64 {
        (self.gamma0 - 1.0) * ELECTRON_REST_ENERGY_MEV
    }

    /// Converts z/R to the Rayleigh-normalized ζ = z/L.
    pub fn zeta_from_z_over_r(&self, z_over_r: f64) -> f64 {
        z_over_r * self.delta
    }

    pub fn z_over_r_from_zeta(&self, zeta: f64) -> f64 {
        zeta * self.rayleigh_over_r
    }

    /// Length of one R in centimetres.
    pub fn r_in_cm(&self) -> f64 {
        self.focal_radius_um / UM_PER_CM
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn vector_potential_maps_to_eta0() {
        let p = derive_sim_params(&PhysicalConfig::default()).unwrap();
        assert_relative_eq!(p.eta0, 2.1213203435596424, epsilon = 1e-15);
        assert_eq!(format!("{:.2}", p.eta0), "2.12");
    }

    #[test]
    fn default_setup_small_parameters() {
        let p = derive_sim_params(&PhysicalConfig::default()).unwrap();
        assert_relative_eq!(p.delta, 0.015915494309189534, epsilon = 1e-15);
        assert_relative_eq!(p.rayleigh_over_r, 62.83185307179586, epsilon = 1e-12);
        assert_relative_eq!(p.delta_prime, 0.0020833333333333333, epsilon = 1e-15);
        assert!(p.delta_prime <= p.delta);
        assert!(p.weak_focus_warning().is_none());
    }

    #[test]
    fn ten_kev_electron() {
        let (g, b, q) = free_electron(10.0);
        assert_relative_eq!(g, 1.019569, epsilon = 1e-6);
        assert_relative_eq!(b, 0.194977, epsilon = 1e-5);
        assert_relative_eq!(q, 0.820777, epsilon = 1e-5);
        assert_relative_eq!(b, (1.0 - g.powi(-2)).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(q, g * (1.0 - b), epsilon = 1e-14);
    }

    #[test]
    fn slow_electron_limit() {
        let (_, _, q) = free_electron(1e-12);
        assert_relative_eq!(q, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn rejects_short_pulse() {
        let cfg = PhysicalConfig {
            omega_tau: 10.0,
            ..Default::default()
        };
        assert!(matches!(
            derive_sim_params(&cfg),
            Err(ParameterError::PulseTooShort { .. })
        ));
    }

    #[test]
    fn rejects_bad_geometry() {
        let cfg = PhysicalConfig {
            detector_r2_cm: 8.0,
            ..Default::default()
        };
        assert!(matches!(
            derive_sim_params(&cfg),
            Err(ParameterError::DetectorGeometry { .. })
        ));
        let cfg = PhysicalConfig {
            wavelength_um: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            derive_sim_params(&cfg),
            Err(ParameterError::NotPositive { .. })
        ));
    }

    #[test]
    fn tight_focus_warns() {
        let cfg = PhysicalConfig {
            focal_radius_um: 1.0,
            omega_tau: 5000.0,
            ..Default::default()
        };
        let p = derive_sim_params(&cfg).unwrap();
        assert!(p.weak_focus_warning().is_some());
    }

    #[test]
    fn injection_maps_to_leading_edge() {
        let p = derive_sim_params(&PhysicalConfig::default()).unwrap();
        let s = derive_initial_state(&p, [0.0, 0.0, -6.0]);
        assert_eq!((s.rho_x, s.rho_y, s.q_x, s.q_y), (0.0, 0.0, 0.0, 0.0));
        assert_relative_eq!(p.z_over_r_from_zeta(s.zeta), -6.0, epsilon = 1e-14);
        assert_eq!(s.phi, -480.0);
        assert_eq!(s.q_minus, p.q_minus0);
    }

    #[test]
    fn rayleigh_length_is_inverse_delta() {
        let p = derive_sim_params(&PhysicalConfig::default()).unwrap();
        assert_eq!(p.rayleigh_over_r, 1.0 / p.delta);
    }

    proptest! {
        #[test]
        fn q_minus_decreases_with_energy(e in 1e-3f64..1e4, f in 1.001f64..10.0) {
            let (_, _, lo) = free_electron(e * f);
            let (_, _, hi) = free_electron(e);
            prop_assert!(lo < hi);
            prop_assert!(lo > 0.0 && hi < 1.0);
        }

        #[test]
        fn detector_units_round_trip(z in 1.0f64..100.0, r1 in 0.1f64..0.5, r2 in 0.5f64..0.9, radius in 0.5f64..100.0) {
            let (r1, r2) = (r1 * z, r2 * z);
            let geo = DetectorGeometry::from_cm(z, r1, r2, radius);
            let (z2, r12, r22) = geo.to_cm(radius);
            prop_assert!(((z2 - z) / z).abs() < 1e-12);
            prop_assert!(((r12 - r1) / r1).abs() < 1e-12);
            prop_assert!(((r22 - r2) / r2).abs() < 1e-12);
        }
    }
}
