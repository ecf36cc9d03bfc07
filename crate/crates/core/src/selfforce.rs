//! Retarded field of one constituent at the other, and the net self-force.
//!
//! Geometry: the emitting charge sits at the origin of the emission event,
//! the receiving charge at l·x̂ + d·ŷ, both moving along x̂. Each constituent
//! carries charge −e/2, so the single-emitter field has prefactor −e/(8πε₀)
//! and the total force on the pair is F = −e·E by symmetry. Everything
//! transverse cancels pairwise; only F_x survives.
//!
//! With u = r̂ − β the field splits into a velocity part ∝ (1 − β²)·r·u and a
//! radiation part ∝ r × ((r·u) × a)/c² = (−d²·a)·x̂ + (d·a·l)·ŷ, both over
//! (r − lβ)³.

use crate::error::{Error, Result};
use crate::model::{KinematicState, ModelParams};

/// Electric field at the receiving charge, split into its two summands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Velocity (near-zone) component, (x, y).
    pub velocity_part: [f64; 2],
    /// Radiation component, (x, y); zero when the emission acceleration is.
    pub radiation_part: [f64; 2],
}

impl FieldSample {
    pub fn e_x(&self) -> f64 {
        self.velocity_part[0] + self.radiation_part[0]
    }

    pub fn e_y(&self) -> f64 {
        self.velocity_part[1] + self.radiation_part[1]
    }

    /// Field at the partner charge: the same geometry reflected in y.
    pub fn mirrored(&self) -> FieldSample {
        FieldSample {
            velocity_part: [self.velocity_part[0], -self.velocity_part[1]],
            radiation_part: [self.radiation_part[0], -self.radiation_part[1]],
        }
    }
}

fn check_geometry(l: f64, r: f64, beta_ret: f64, params: &ModelParams) -> Result<f64> {
    if beta_ret.abs() >= 1.0 || !beta_ret.is_finite() {
        return Err(Error::SuperluminalSpeed {
            speed: beta_ret,
            limit: 1.0,
        });
    }
    if r < params.d * (1.0 - 1e-12) {
        return Err(Error::GeometryViolation {
            message: format!("retarded distance {r:e} below transverse separation {:e}", params.d),
        });
    }
    let doppler = r - l * beta_ret;
    if doppler <= 0.0 {
        return Err(Error::GeometryViolation {
            message: format!("non-positive Doppler factor r - l*beta = {doppler:e}"),
        });
    }
    Ok(doppler)
}

/// Retarded field of one constituent at the other.
///
/// Inputs are the light-cone geometry (l, r) and the emission-time kinematics
/// (beta_ret, a_ret with a in physical units).
pub fn lw_field(
    l: f64,
    r: f64,
    beta_ret: f64,
    a_ret: f64,
    params: &ModelParams,
) -> Result<FieldSample> {
    let doppler = check_geometry(l, r, beta_ret, params)?;
    let d = params.d;
    let c2 = params.c * params.c;
    // field of charge -e/2 at distance r: -e/(8πε₀) over the cubed Doppler factor
    let scale = -params.field_prefactor() / (doppler * doppler * doppler);
    let one_minus_b2 = 1.0 - beta_ret * beta_ret;
    Ok(FieldSample {
        velocity_part: [
            scale * one_minus_b2 * (l - r * beta_ret),
            scale * one_minus_b2 * d,
        ],
        radiation_part: [
            scale * (-d * d * a_ret / c2),
            scale * d * a_ret * l / c2,
        ],
    })
}

/// Net longitudinal self-force on the pair,
/// F = (e²/8πε₀)·((l − rβ)(1 − β²) − d²a/c²)/(r − lβ)³.
///
/// Equals −e·E_x of [`lw_field`] identically; kept as a direct kernel because
/// propagation evaluates it in the inner loop.
pub fn self_force(l: f64, r: f64, beta_ret: f64, a_ret: f64, params: &ModelParams) -> Result<f64> {
    let doppler = check_geometry(l, r, beta_ret, params)?;
    let d = params.d;
    let bracket = (l - r * beta_ret) * (1.0 - beta_ret * beta_ret)
        - d * d * a_ret / (params.c * params.c);
    Ok(params.force_prefactor() * bracket / (doppler * doppler * doppler))
}

/// Defect of the delayed equation of motion at one reception event:
/// (d²/c²)·a(t_r) + (r/c)(1 − β²)·v(t_r) + (1 − β²)·(x(t_r) − x_receive).
///
/// Vanishes exactly when the self-force does, so propagation drives it to
/// zero; the value is in length units.
pub fn eom_residual(
    state_emit: &KinematicState,
    x_receive: f64,
    r: f64,
    params: &ModelParams,
) -> f64 {
    let beta = state_emit.v / params.c;
    let one_minus_b2 = 1.0 - beta * beta;
    let d = params.d;
    d * d * state_emit.a / (params.c * params.c)
        + (r / params.c) * one_minus_b2 * state_emit.v
        + one_minus_b2 * (state_emit.x - x_receive)
}

/// Mass equivalent of the pair's Coulomb energy, e²/(16πε₀·d·c²).
pub fn electromagnetic_mass(params: &ModelParams) -> f64 {
    match params.eps0 {
        Some(eps0) => {
            let e = params.e_charge;
            e * e / (16.0 * std::f64::consts::PI * eps0 * params.d * params.c * params.c)
        }
        None => 1.0,
    }
}
