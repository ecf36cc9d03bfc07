//! Model parameters, unit systems, and kinematic state.
//!
//! The particle is a rigid pair of like charges a fixed distance `d` apart,
//! transverse to the (single) axis of motion. Two unit modes exist:
//!
//! * dimensionless — the canonical internal system with d = c = m_e = 1, in
//!   which every kernel formula collapses to pure numbers;
//! * SI — a presentation layer in which the mass is derived from the charge
//!   separation, m_e = ħα/(4dc), with CODATA 2018 constants.

use crate::constants;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Dimensionless,
    Si,
}

/// Shared physical parameters. Immutable after construction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelParams {
    /// Charge separation (length).
    pub d: f64,
    /// Speed of light (length/time).
    pub c: f64,
    /// Total charge magnitude carried by the pair.
    pub e_charge: f64,
    /// Vacuum permittivity; present only in SI mode.
    pub eps0: Option<f64>,
    /// Electromagnetic mass, derived from `d` in SI mode.
    pub m_e: f64,
    /// Light-crossing time d/c.
    pub tau0: f64,
    /// Characteristic frequency c/d.
    pub omega0: f64,
    pub unit_mode: UnitMode,
}

/// Build parameters for a given charge separation.
///
/// In SI mode the mass follows from the separation: m_e = ħα/(4dc). In
/// dimensionless mode the canonical choice is d = 1; other values keep c and
/// m_e pinned at 1 and simply rescale tau0 and omega0.
pub fn make_params(d: f64, unit_mode: UnitMode) -> Result<ModelParams> {
    if d <= 0.0 || !d.is_finite() {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "charge separation must be positive and finite",
        });
    }
    let p = match unit_mode {
        UnitMode::Dimensionless => ModelParams {
            d,
            c: 1.0,
            e_charge: 1.0,
            eps0: None,
            m_e: 1.0,
            tau0: d,
            omega0: 1.0 / d,
            unit_mode,
        },
        UnitMode::Si => {
            let c = constants::SPEED_OF_LIGHT;
            let m_e = constants::REDUCED_PLANCK * constants::FINE_STRUCTURE / (4.0 * d * c);
            ModelParams {
                d,
                c,
                e_charge: constants::ELEMENTARY_CHARGE,
                eps0: Some(constants::VACUUM_PERMITTIVITY),
                m_e,
                tau0: d / c,
                omega0: c / d,
                unit_mode,
            }
        }
    };
    Ok(p)
}

impl ModelParams {
    /// Canonical dimensionless parameter set (d = c = m_e = 1).
    pub fn dimensionless() -> ModelParams {
        make_params(1.0, UnitMode::Dimensionless).expect("d = 1 is valid")
    }

    /// Rest energy m_e c².
    pub fn rest_energy(&self) -> f64 {
        self.m_e * self.c * self.c
    }

    /// Coulomb prefactor e²/(8πε₀) of the pair interaction.
    ///
    /// Equals 2·m_e·c²·d by the mass definition m_e c² = e²/(16πε₀ d); the
    /// dimensionless mode uses that identity directly, so the prefactor is 2.
    pub fn force_prefactor(&self) -> f64 {
        match self.eps0 {
            Some(eps0) => {
                self.e_charge * self.e_charge / (8.0 * std::f64::consts::PI * eps0)
            }
            None => 2.0 * self.m_e * self.c * self.c * self.d,
        }
    }

    /// Field prefactor e/(8πε₀): the force prefactor per unit receiving charge.
    pub fn field_prefactor(&self) -> f64 {
        self.force_prefactor() / self.e_charge
    }

    pub fn length_to_internal(&self, x: f64) -> f64 {
        x / self.d
    }

    pub fn length_from_internal(&self, xi: f64) -> f64 {
        xi * self.d
    }

    pub fn time_to_internal(&self, t: f64) -> f64 {
        t / self.tau0
    }

    pub fn time_from_internal(&self, ti: f64) -> f64 {
        ti * self.tau0
    }

    pub fn velocity_to_internal(&self, v: f64) -> f64 {
        v / self.c
    }

    pub fn velocity_from_internal(&self, beta: f64) -> f64 {
        beta * self.c
    }

    /// Dimensionless acceleration bdot = a·d/c².
    pub fn acceleration_to_internal(&self, a: f64) -> f64 {
        a * self.d / (self.c * self.c)
    }

    pub fn acceleration_from_internal(&self, bdot: f64) -> f64 {
        bdot * self.c * self.c / self.d
    }

    pub fn energy_to_internal(&self, e: f64) -> f64 {
        e / self.rest_energy()
    }

    pub fn energy_from_internal(&self, ei: f64) -> f64 {
        ei * self.rest_energy()
    }
}

/// Instantaneous state of the center of mass along the motion axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub a: f64,
}

impl KinematicState {
    pub fn new(t: f64, x: f64, v: f64, a: f64) -> KinematicState {
        KinematicState { t, x, v, a }
    }

    /// v/c.
    pub fn beta(&self, params: &ModelParams) -> f64 {
        self.v / params.c
    }

    /// a·d/c², the dimensionless acceleration.
    pub fn bdot(&self, params: &ModelParams) -> f64 {
        self.a * params.d / (params.c * params.c)
    }

    pub fn gamma(&self, params: &ModelParams) -> Result<f64> {
        lorentz_gamma(self.beta(params))
    }

    /// Enforce the strict sub-luminal requirement |v| < c.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        if self.v.abs() >= params.c || !self.v.is_finite() {
            return Err(Error::SuperluminalSpeed {
                speed: self.v,
                limit: params.c,
            });
        }
        Ok(())
    }
}

/// Lorentz factor (1 − β²)^(−1/2).
pub fn lorentz_gamma(beta: f64) -> Result<f64> {
    if beta.abs() >= 1.0 || !beta.is_finite() {
        return Err(Error::SuperluminalSpeed {
            speed: beta,
            limit: 1.0,
        });
    }
    Ok(1.0 / (1.0 - beta * beta).sqrt())
}

/// Light-crossing period 4π·radius/c of a circulation at the given radius.
pub fn characteristic_period(radius: f64, c: f64) -> Result<f64> {
    if radius <= 0.0 || radius.is_nan() {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
            reason: "radius must be positive",
        });
    }
    Ok(4.0 * std::f64::consts::PI * radius / c)
}
