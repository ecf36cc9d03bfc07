//! State-dependent retardation of the pair interaction.
//!
//! The two charges sit a fixed transverse distance `d` apart, so the signal
//! one charge receives at time t was emitted by the other at the earlier time
//! t_r fixed by the light cone, c(t − t_r) = sqrt((x(t) − x(t_r))² + d²).
//! On trajectories obeying the delayed equation of motion the delay collapses
//! to a closed form in the emission-time kinematics (β, β̇):
//!
//!   r = γd·sqrt(1 + χ) + γ⁴·d·β·b,   χ = γ⁶·b²,   b = β̇·d/c,
//!
//! and the longitudinal displacement over the delay is
//!
//!   l = γβd·sqrt(1 + χ) + γ⁴·d·b,
//!
//! the positive branch of l² = γ²β²d² + γ⁸b²(1+β²)d² + 2γ⁵βb·d²·sqrt(1+χ).
//! The two satisfy r² − l² = d² identically: both descend from the same
//! light-cone quadratic.

use crate::error::{Error, Result};
use crate::history::TrajectoryHistory;
use crate::model::{lorentz_gamma, ModelParams};

/// Solution of the light-cone condition at one reception time.
#[derive(Debug, Clone, Copy)]
pub struct DelayResult {
    /// Retarded separation distance c·(t − t_r).
    pub r: f64,
    /// Emission time.
    pub t_r: f64,
    /// Longitudinal displacement x(t) − x(t_r).
    pub l: f64,
    /// Magnitude of the residual light-cone defect, in length units.
    pub residual: f64,
}

/// Retarded distance r from the kinematics at the emission event.
///
/// `bdot` is the dimensionless acceleration β̇·d/c. The returned branch is the
/// one continuous with r = γd at bdot = 0; the other root of the underlying
/// quadratic is negative and unphysical.
pub fn delay_closed_form(beta: f64, bdot: f64, params: &ModelParams) -> Result<f64> {
    let gamma = lorentz_gamma(beta)?;
    let g2 = gamma * gamma;
    let g4 = g2 * g2;
    let chi = g2 * g4 * bdot * bdot;
    Ok(params.d * (gamma * (1.0 + chi).sqrt() + g4 * beta * bdot))
}

/// Longitudinal displacement l over the delay, from emission kinematics.
///
/// Sign convention: l ≥ 0 for beta ≥ 0, bdot ≥ 0; the map x → −x flips both
/// inputs and l with them, so l is odd under (beta, bdot) → (−beta, −bdot).
/// For mixed signs the branch is the one matching the reception position of
/// the advance map, which is sign(γβ·sqrt(1+χ) + γ⁴·bdot).
pub fn separation_l(beta: f64, bdot: f64, params: &ModelParams) -> Result<f64> {
    let gamma = lorentz_gamma(beta)?;
    let g2 = gamma * gamma;
    let g4 = g2 * g2;
    let g5 = g4 * gamma;
    let g8 = g4 * g4;
    let chi = g2 * g4 * bdot * bdot;
    let root = (1.0 + chi).sqrt();
    let radicand = g2 * beta * beta
        + g8 * bdot * bdot * (1.0 + beta * beta)
        + 2.0 * g5 * beta * bdot * root;
    // algebraically a perfect square (γβ·sqrt(1+χ) + γ⁴·bdot)², so anything
    // beyond roundoff-negative indicates corrupted inputs
    if radicand < -1e-9 * (1.0 + chi) * g2 {
        return Err(Error::ModelViolation {
            message: "negative radicand in longitudinal separation".into(),
            inputs: vec![beta, bdot, radicand],
        });
    }
    let magnitude = radicand.max(0.0).sqrt();
    let sign = gamma * beta * root + g4 * bdot;
    Ok(params.d * magnitude.copysign(sign))
}

/// First-order delay change about uniform motion:
/// δr = γ⁴·β·(d/c)²·δv̇ + d·δγ.
pub fn delay_variation(
    beta: f64,
    params: &ModelParams,
    delta_vdot: f64,
    delta_gamma: f64,
) -> Result<f64> {
    let gamma = lorentz_gamma(beta)?;
    let g4 = gamma.powi(4);
    let dc = params.d / params.c;
    Ok(g4 * beta * dc * dc * delta_vdot + params.d * delta_gamma)
}

/// Solve the light-cone condition on a stored trajectory.
///
/// Finds the emission time t_r < t with c(t − t_r) = sqrt((x(t) − x(t_r))² + d²)
/// by geometric bracket expansion followed by safeguarded Newton iteration.
///
/// Uniqueness: let g(t_r) = c(t − t_r) − sqrt((x(t) − x(t_r))² + d²). Then
/// g'(t_r) = −c + Δx·v(t_r)/r with |Δx/r| < 1, so |v| < c throughout the
/// history makes g strictly decreasing; g(t) = −d < 0, and g → +∞ as
/// t_r → −∞, so exactly one root exists and any sign change brackets it.
pub fn solve_retarded_time(
    history: &TrajectoryHistory,
    t: f64,
    params: &ModelParams,
) -> Result<DelayResult> {
    let d = params.d;
    let c = params.c;
    let tol = 1e-12 * d;
    let x_t = history.position(t)?;

    let defect = |t_r: f64| -> Result<f64> {
        let x_r = history.position(t_r)?;
        let dx = x_t - x_r;
        Ok(c * (t - t_r) - (dx * dx + d * d).sqrt())
    };

    // expand left from one light-crossing time until the defect turns positive
    let mut hi = t;
    let mut offset = d / c;
    let mut lo = loop {
        let t_lo = t - offset;
        let g = defect(t_lo)?;
        if g == 0.0 {
            return finish(history, t, x_t, t_lo, params);
        }
        if g > 0.0 {
            break t_lo;
        }
        hi = t_lo;
        offset *= 2.0;
        if offset > 1e6 * d / c {
            return Err(Error::BracketFailure {
                t,
                detail: format!("no sign change within {offset:e} of light travel"),
            });
        }
    };

    let mut t_r = 0.5 * (lo + hi);
    for _ in 0..100 {
        let s = history.sample(t_r)?;
        let dx = x_t - s.x;
        let root = (dx * dx + d * d).sqrt();
        let g = c * (t - t_r) - root;
        if g.abs() <= tol {
            return finish(history, t, x_t, t_r, params);
        }
        if g > 0.0 {
            lo = t_r;
        } else {
            hi = t_r;
        }
        let slope = -c + dx * s.v / root;
        let newton = t_r - g / slope;
        t_r = if slope < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * (t.abs() + params.tau0) {
            let g = defect(t_r)?;
            if g.abs() <= tol {
                return finish(history, t, x_t, t_r, params);
            }
            break;
        }
    }
    let residual = defect(t_r)?.abs();
    Err(Error::NonConvergence {
        iterations: 100,
        residual,
    })
}

fn finish(
    history: &TrajectoryHistory,
    t: f64,
    x_t: f64,
    t_r: f64,
    params: &ModelParams,
) -> Result<DelayResult> {
    let x_r = history.position(t_r)?;
    let l = x_t - x_r;
    let r = params.c * (t - t_r);
    let residual = (r - (l * l + params.d * params.d).sqrt()).abs();
    Ok(DelayResult { r, t_r, l, residual })
}
