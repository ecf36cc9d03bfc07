//! Trajectory storage with C¹ interpolation.
//!
//! Propagation by the method of steps needs the past of the trajectory at
//! arbitrary times: the retarded-time solver evaluates position and velocity
//! between stored nodes. Position is interpolated by a cubic Hermite segment
//! built from the stored (x, v) pairs, velocity by one built from (v, a), so
//! both are C¹ and mutually consistent to the order of the scheme.

use crate::error::{Error, Result};
use crate::model::{KinematicState, ModelParams};

/// Time-ordered trajectory samples with Hermite evaluation between them.
#[derive(Debug, Clone, Default)]
pub struct TrajectoryHistory {
    states: Vec<KinematicState>,
}

impl TrajectoryHistory {
    pub fn new() -> TrajectoryHistory {
        TrajectoryHistory { states: Vec::new() }
    }

    pub fn from_states(states: Vec<KinematicState>) -> Result<TrajectoryHistory> {
        let mut h = TrajectoryHistory::new();
        for s in states {
            h.push(s)?;
        }
        Ok(h)
    }

    /// Append a sample; times must be strictly increasing.
    pub fn push(&mut self, state: KinematicState) -> Result<()> {
        if !state.t.is_finite() || !state.x.is_finite() || !state.v.is_finite()
            || !state.a.is_finite()
        {
            return Err(Error::InvalidParameter {
                name: "state",
                value: state.t,
                reason: "non-finite component in trajectory sample",
            });
        }
        if let Some(last) = self.states.last() {
            if state.t <= last.t {
                return Err(Error::InvalidParameter {
                    name: "state.t",
                    value: state.t,
                    reason: "trajectory times must be strictly increasing",
                });
            }
        }
        self.states.push(state);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[KinematicState] {
        &self.states
    }

    pub fn first(&self) -> Option<&KinematicState> {
        self.states.first()
    }

    pub fn last(&self) -> Option<&KinematicState> {
        self.states.last()
    }

    pub fn t_first(&self) -> Option<f64> {
        self.states.first().map(|s| s.t)
    }

    pub fn t_last(&self) -> Option<f64> {
        self.states.last().map(|s| s.t)
    }

    /// Drop samples older than `t_keep`, retaining one node at or before it
    /// so interpolation stays valid on [t_keep, t_last].
    pub fn truncate_before(&mut self, t_keep: f64) {
        let idx = match self.states.iter().position(|s| s.t >= t_keep) {
            Some(0) | None => return,
            Some(i) => i - 1,
        };
        self.states.drain(..idx);
    }

    fn segment_index(&self, t: f64) -> Result<usize> {
        let (first, last) = match (self.states.first(), self.states.last()) {
            (Some(f), Some(l)) if self.states.len() >= 2 => (f.t, l.t),
            _ => {
                return Err(Error::HistoryTooShort {
                    t_first: self.t_first().unwrap_or(f64::NAN),
                    t_last: self.t_last().unwrap_or(f64::NAN),
                    t,
                })
            }
        };
        if t < first || t > last {
            return Err(Error::HistoryTooShort {
                t_first: first,
                t_last: last,
                t,
            });
        }
        // partition_point: first index with states[i].t > t; the segment
        // starts one node earlier
        let i = self.states.partition_point(|s| s.t <= t);
        Ok(if i == self.states.len() { i - 2 } else { i - 1 })
    }

    /// Interpolated state at time `t` within the stored span.
    ///
    /// The acceleration is the derivative of the velocity interpolant, so the
    /// returned triple obeys x' = v and v' = a in the interpolated sense.
    pub fn sample(&self, t: f64) -> Result<KinematicState> {
        let i = self.segment_index(t)?;
        let s0 = self.states[i];
        let s1 = self.states[i + 1];
        let h = s1.t - s0.t;
        let u = (t - s0.t) / h;
        let x = hermite(u, s0.x, s0.v * h, s1.x, s1.v * h);
        let v = hermite(u, s0.v, s0.a * h, s1.v, s1.a * h);
        let a = hermite_derivative(u, s0.v, s0.a * h, s1.v, s1.a * h) / h;
        Ok(KinematicState { t, x, v, a })
    }

    /// Position only; cheaper inner loop for the retarded-time solver.
    pub fn position(&self, t: f64) -> Result<f64> {
        let i = self.segment_index(t)?;
        let s0 = self.states[i];
        let s1 = self.states[i + 1];
        let h = s1.t - s0.t;
        let u = (t - s0.t) / h;
        Ok(hermite(u, s0.x, s0.v * h, s1.x, s1.v * h))
    }

    /// Verify every stored node is strictly sub-luminal.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        for s in &self.states {
            s.validate(params)?;
        }
        Ok(())
    }
}

/// Cubic Hermite basis on u in [0, 1] with endpoint values and scaled slopes.
fn hermite(u: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * p0
        + (u3 - 2.0 * u2 + u) * m0
        + (-2.0 * u3 + 3.0 * u2) * p1
        + (u3 - u2) * m1
}

fn hermite_derivative(u: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let u2 = u * u;
    (6.0 * u2 - 6.0 * u) * p0
        + (3.0 * u2 - 4.0 * u + 1.0) * m0
        + (-6.0 * u2 + 6.0 * u) * p1
        + (3.0 * u2 - 2.0 * u) * m1
}
