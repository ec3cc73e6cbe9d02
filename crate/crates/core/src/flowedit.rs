//! Reference FlowEdit and its fixed-noise equivalence with residual-corrected flow.
//!
//! FlowEdit evolves `z_edit` from `z0` along `V_tar(z_pred) − V_src(z_t)` with
//! `z_t = (1 − t)·z0 + t·ε_t` and `z_pred = z_t + z_edit − z0`. With a single
//! noise shared by every step, `z_pred` follows exactly the residual-corrected
//! trajectory (unmasked, no detail transfer, residual refreshed every step).

use crate::condition::ConditionBundle;
use crate::error::{Error, Result};
use crate::latent::{lerp_noise, LatentField, Mask};
use crate::noise::{sample_noise, sample_noise_at};
use crate::rcf::{run_edit, EditConfig};
use crate::sampler::{euler_step, evaluate_counted, RunTrace, VelocityField};
use crate::schedule::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    /// `n_avg` new draws at every step.
    FreshPerStep,
    /// One noise for the whole run.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowEditConfig {
    pub schedule: Schedule,
    pub noise_mode: NoiseMode,
    /// Velocity samples averaged per step.
    pub n_avg: usize,
    pub seed: u64,
}

impl FlowEditConfig {
    pub fn fixed(schedule: Schedule, seed: u64) -> Self {
        FlowEditConfig {
            schedule,
            noise_mode: NoiseMode::Fixed,
            n_avg: 1,
            seed,
        }
    }

    pub fn fresh(schedule: Schedule, n_avg: usize, seed: u64) -> Self {
        FlowEditConfig {
            schedule,
            noise_mode: NoiseMode::FreshPerStep,
            n_avg,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_avg == 0 {
            return Err(Error::OutOfRange {
                name: "n_avg",
                value: 0.0,
                range: "[1, ∞)",
            });
        }
        if self.noise_mode == NoiseMode::Fixed && self.n_avg != 1 {
            return Err(Error::OutOfRange {
                name: "n_avg",
                value: self.n_avg as f64,
                range: "{1} in fixed-noise mode",
            });
        }
        Ok(())
    }

    pub fn expected_nfe(&self) -> u64 {
        (2 * self.n_avg * self.schedule.steps()) as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowEditRun {
    pub output: LatentField,
    pub edit_trace: RunTrace,
    /// `z_pred` at each knot, built from the first draw of each step; the
    /// final entry is taken at `t_0` where `z_t = z0`.
    pub pred_trace: RunTrace,
}

/// Runs FlowEdit from `z0`. Costs `2 · n_avg · N` evaluations.
pub fn flowedit_run<F: VelocityField + ?Sized>(
    field: &F,
    z0: &LatentField,
    c_src: &ConditionBundle,
    c_tar: &ConditionBundle,
    config: &FlowEditConfig,
) -> Result<FlowEditRun> {
    config.validate()?;
    let shape = z0.shape();
    let fixed_eps = match config.noise_mode {
        NoiseMode::Fixed => Some(sample_noise(config.seed, shape)),
        NoiseMode::FreshPerStep => None,
    };

    let mut edit_trace = RunTrace::default();
    let mut pred_trace = RunTrace::default();
    let mut z_edit = z0.clone();
    edit_trace.record(1.0, &z_edit);

    for (i, t_hi, t_lo) in config.schedule.descending() {
        let mut velocity: Option<Vec<f64>> = None;
        for draw in 0..config.n_avg {
            let eps = match &fixed_eps {
                Some(e) => e.clone(),
                None => sample_noise_at(config.seed, i as u32, draw as u32, shape),
            };
            let z_t = lerp_noise(z0, &eps, t_hi)?;
            // Offset first: while z_edit == z0 the offset is exactly zero, so
            // z_pred == z_t bit for bit and equal conditions cancel exactly.
            let z_pred = z_t.add(&z_edit.sub(z0)?)?;
            if draw == 0 {
                pred_trace.record(t_hi, &z_pred);
            }
            let v_tar = evaluate_counted(field, &z_pred, t_hi, c_tar, &mut edit_trace.nfe)?;
            let v_src = evaluate_counted(field, &z_t, t_hi, c_src, &mut edit_trace.nfe)?;
            let v = v_tar.sub(&v_src)?;
            match &mut velocity {
                None => velocity = Some(v.into_vec()),
                Some(acc) => acc.iter_mut().zip(v.as_slice()).for_each(|(a, b)| *a += b),
            }
        }
        let mut acc = velocity.expect("n_avg >= 1");
        if config.n_avg > 1 {
            let inv = 1.0 / config.n_avg as f64;
            acc.iter_mut().for_each(|a| *a *= inv);
        }
        let v = LatentField::checked(shape, acc, "flowedit velocity")?;
        z_edit = euler_step(&z_edit, t_hi, t_lo, &v)?;
        edit_trace.record(t_lo, &z_edit);
    }
    // z_t = z0 at t = 0, so z_pred coincides with z_edit.
    pred_trace.record(0.0, &z_edit);
    pred_trace.nfe = edit_trace.nfe;

    Ok(FlowEditRun {
        output: z_edit,
        edit_trace,
        pred_trace,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// `(t_i, relative deviation)` from `t_N` down to `t_0`.
    pub deviations: Vec<(f64, f64)>,
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
    pub flowedit_nfe: u64,
    pub rcf_nfe: u64,
}

/// Runs fixed-noise FlowEdit and the residual-corrected edit (unmasked, no
/// detail transfer, `r = 1`) on the same noise and compares `z_pred` with
/// `z_edit` at every knot.
pub fn equivalence_check<F: VelocityField + ?Sized>(
    field: &F,
    z0: &LatentField,
    c_src: &ConditionBundle,
    c_tar: &ConditionBundle,
    schedule: &Schedule,
    seed: u64,
    tol: f64,
) -> Result<EquivalenceReport> {
    let fe = flowedit_run(field, z0, c_src, c_tar, &FlowEditConfig::fixed(schedule.clone(), seed))?;
    let eps = sample_noise(seed, z0.shape());
    let cfg = EditConfig::new(schedule.clone(), Mask::ones(z0.shape()))
        .with_reuse(1)
        .without_hf();
    let rcf = run_edit(field, z0, c_src, c_tar, &eps, &cfg)?;

    let mut deviations = Vec::with_capacity(schedule.steps() + 1);
    for ((t, pred), (t_edit, edit)) in fe.pred_trace.snapshots.iter().zip(&rcf.edit_trace.snapshots) {
        debug_assert_eq!(t, t_edit);
        deviations.push((*t, pred.relative_error(edit)?));
    }
    let max_deviation = deviations.iter().fold(0.0f64, |m, (_, d)| m.max(*d));
    Ok(EquivalenceReport {
        passed: deviations.iter().all(|(_, d)| *d <= tol),
        deviations,
        max_deviation,
        tol,
        flowedit_nfe: fe.edit_trace.nfe.count(),
        rcf_nfe: rcf.nfe,
    })
}
