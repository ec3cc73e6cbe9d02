//! Velocity-field interface, Euler sampling and evaluation accounting.

use crate::condition::ConditionBundle;
use crate::error::{Error, Result};
use crate::latent::{axpy, LatentField};
use crate::schedule::Schedule;

/// A conditional velocity field `(z, t, c) ↦ V`.
///
/// Implementations must be deterministic and safe to evaluate from several
/// threads at once. Samplers never call `evaluate` at `t = 0`.
pub trait VelocityField: Send + Sync {
    fn evaluate(&self, z: &LatentField, t: f64, c: &ConditionBundle) -> Result<LatentField>;
}

impl<F: VelocityField + ?Sized> VelocityField for &F {
    fn evaluate(&self, z: &LatentField, t: f64, c: &ConditionBundle) -> Result<LatentField> {
        (**self).evaluate(z, t, c)
    }
}

impl<F: VelocityField + ?Sized> VelocityField for Box<F> {
    fn evaluate(&self, z: &LatentField, t: f64, c: &ConditionBundle) -> Result<LatentField> {
        (**self).evaluate(z, t, c)
    }
}

/// Number of velocity-field evaluations spent by a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NfeCounter {
    count: u64,
}

impl NfeCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    fn tick(&mut self) {
        self.count += 1;
    }
}

/// Snapshots of a trajectory, ordered from `t = 1` toward `t = 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub snapshots: Vec<(f64, LatentField)>,
    pub nfe: NfeCounter,
}

impl RunTrace {
    pub(crate) fn record(&mut self, t: f64, z: &LatentField) {
        debug_assert!(self.snapshots.last().is_none_or(|(prev, _)| *prev > t));
        self.snapshots.push((t, z.clone()));
    }

    pub fn last(&self) -> Option<&LatentField> {
        self.snapshots.last().map(|(_, z)| z)
    }
}

/// Evaluates `field` once, counting it and validating the result.
pub fn evaluate_counted<F: VelocityField + ?Sized>(
    field: &F,
    z: &LatentField,
    t: f64,
    c: &ConditionBundle,
    nfe: &mut NfeCounter,
) -> Result<LatentField> {
    nfe.tick();
    let v = field.evaluate(z, t, c).map_err(|e| match e {
        Error::Field { .. } => e,
        other => Error::Field {
            t,
            reason: other.to_string(),
        },
    })?;
    if v.shape() != z.shape() {
        return Err(Error::Field {
            t,
            reason: format!("velocity has shape {}, state has {}", v.shape(), z.shape()),
        });
    }
    if v.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::Field {
            t,
            reason: "velocity is not finite".into(),
        });
    }
    Ok(v)
}

/// One Euler update `z + (t_hi − t_lo)·V`.
pub fn euler_step(z: &LatentField, t_hi: f64, t_lo: f64, v: &LatentField) -> Result<LatentField> {
    if t_hi.partial_cmp(&t_lo) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain(format!(
            "Euler step needs t_hi > t_lo, got {t_hi} and {t_lo}"
        )));
    }
    axpy(t_hi - t_lo, v, z)
}

/// Integrates `field` under condition `c` from `eps` at `t = 1` down to `t = 0`.
///
/// Costs exactly `schedule.steps()` evaluations.
pub fn generate<F: VelocityField + ?Sized>(
    field: &F,
    c: &ConditionBundle,
    eps: &LatentField,
    schedule: &Schedule,
) -> Result<(LatentField, RunTrace)> {
    let mut trace = RunTrace::default();
    let mut z = eps.clone();
    trace.record(1.0, &z);
    for (_, t_hi, t_lo) in schedule.descending() {
        let v = evaluate_counted(field, &z, t_hi, c, &mut trace.nfe)?;
        z = euler_step(&z, t_hi, t_lo, &v).map_err(|e| Error::Field {
            t: t_hi,
            reason: e.to_string(),
        })?;
        trace.record(t_lo, &z);
    }
    Ok((z, trace))
}
