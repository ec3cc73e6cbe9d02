//! Residual-corrected flow editing.
//!
//! The edit latent is generated from noise under the target condition, with
//! the velocity corrected by the residual between the straight restoration
//! velocity `z0 − ε` and the source-condition prediction along the analytic
//! noising path. When the two conditions agree the corrected velocity is the
//! restoration velocity and the input comes back unchanged.

use crate::condition::ConditionBundle;
use crate::error::{Error, Result};
use crate::freq::SpectralSplitter;
use crate::latent::{lerp_noise, LatentField, Mask};
use crate::sampler::{euler_step, evaluate_counted, NfeCounter, RunTrace, VelocityField};
use crate::schedule::Schedule;

pub const DEFAULT_REUSE_INTERVAL: usize = 10;
pub const DEFAULT_HF_LAMBDA: f64 = 0.5;
pub const DEFAULT_HF_RHO: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct EditConfig {
    pub schedule: Schedule,
    /// Steps sharing one cached residual.
    pub reuse_interval: usize,
    pub hf_lambda: f64,
    pub hf_rho: f64,
    /// Foreground weight at latent resolution.
    pub mask: Mask,
    pub hf_enabled: bool,
}

impl EditConfig {
    pub fn new(schedule: Schedule, mask: Mask) -> Self {
        EditConfig {
            schedule,
            reuse_interval: DEFAULT_REUSE_INTERVAL,
            hf_lambda: DEFAULT_HF_LAMBDA,
            hf_rho: DEFAULT_HF_RHO,
            mask,
            hf_enabled: true,
        }
    }

    pub fn with_reuse(mut self, r: usize) -> Self {
        self.reuse_interval = r;
        self
    }

    pub fn with_hf(mut self, lambda: f64, rho: f64) -> Self {
        self.hf_enabled = true;
        self.hf_lambda = lambda;
        self.hf_rho = rho;
        self
    }

    pub fn without_hf(mut self) -> Self {
        self.hf_enabled = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.schedule.steps();
        if self.reuse_interval == 0 || self.reuse_interval > n {
            return Err(Error::OutOfRange {
                name: "reuse_interval",
                value: self.reuse_interval as f64,
                range: "[1, N]",
            });
        }
        Error::check_unit("hf_lambda", self.hf_lambda)?;
        Error::check_unit("hf_rho", self.hf_rho)?;
        Ok(())
    }

    /// Velocity evaluations `run_edit` will spend: `N + ⌈N / r⌉`.
    pub fn expected_nfe(&self) -> u64 {
        let n = self.schedule.steps();
        (n + n.div_ceil(self.reuse_interval)) as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EditReport {
    pub nfe: u64,
    pub residual_recomputations: usize,
    /// RMS of the residual applied at each step, in step order (`t_N` first).
    pub per_step_residual_norm: Vec<f64>,
    pub output: LatentField,
    /// Analytic source path `(1 − t)·z0 + t·ε` at each knot.
    pub src_trace: RunTrace,
    pub edit_trace: RunTrace,
}

/// `z0 − ε`: the constant velocity that carries `ε` at `t = 1` to `z0` at `t = 0`.
pub fn restoration_velocity(z0: &LatentField, eps: &LatentField) -> Result<LatentField> {
    z0.sub(eps)
}

/// Residual between the restoration velocity and the source prediction at the
/// analytic path point `z_t = (1 − t)·z0 + t·ε`. Costs one evaluation.
pub fn consistency_residual<F: VelocityField + ?Sized>(
    field: &F,
    z0: &LatentField,
    eps: &LatentField,
    t: f64,
    c_src: &ConditionBundle,
    nfe: &mut NfeCounter,
) -> Result<LatentField> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "(0, 1]",
        });
    }
    let z_t = lerp_noise(z0, eps, t)?;
    let v_src = evaluate_counted(field, &z_t, t, c_src, nfe)?;
    restoration_velocity(z0, eps)?.sub(&v_src)
}

/// `v_tar + M·v_res`, leaving `v_tar` untouched wherever `M = 0`.
pub fn residual_corrected_velocity(v_tar: &LatentField, v_res: &LatentField, mask: &Mask) -> Result<LatentField> {
    let shape = v_tar.shape();
    if v_res.shape() != shape {
        return Err(Error::ShapeMismatch {
            expected: shape,
            got: v_res.shape(),
        });
    }
    let data = v_tar
        .as_slice()
        .iter()
        .zip(v_res.as_slice())
        .zip(mask.broadcast(shape)?)
        .map(|((&v, &r), m)| if m == 0.0 { v } else { v + m * r })
        .collect();
    LatentField::checked(shape, data, "residual_corrected_velocity")
}

fn at_step<T>(t: f64, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Field { .. } => e,
        other => Error::Field {
            t,
            reason: other.to_string(),
        },
    })
}

/// Full residual-corrected edit of `z0` from source to target condition.
///
/// For `i = N … 1` the residual is refreshed on the first step of every block
/// of `r` steps and reused verbatim for the rest of the block; the edit
/// latent takes an Euler step along `v_tar + M·v_res`, and, when enabled,
/// receives masked high-frequency detail from the source path point at
/// `t_{i−1}`.
pub fn run_edit<F: VelocityField + ?Sized>(
    field: &F,
    z0: &LatentField,
    c_src: &ConditionBundle,
    c_tar: &ConditionBundle,
    eps: &LatentField,
    config: &EditConfig,
) -> Result<EditReport> {
    config.validate()?;
    let shape = z0.shape();
    if eps.shape() != shape {
        return Err(Error::ShapeMismatch {
            expected: shape,
            got: eps.shape(),
        });
    }
    config.mask.check_broadcast(shape)?;
    let splitter = if config.hf_enabled && config.hf_lambda > 0.0 {
        Some(SpectralSplitter::for_shape(shape, config.hf_rho)?)
    } else {
        None
    };

    let n = config.schedule.steps();
    let r = config.reuse_interval;
    let mut nfe = NfeCounter::new();
    let mut src_trace = RunTrace::default();
    let mut edit_trace = RunTrace::default();
    let mut residual: Option<LatentField> = None;
    let mut recomputations = 0;
    let mut norms = Vec::with_capacity(n);

    let mut z_edit = eps.clone();
    src_trace.record(1.0, &lerp_noise(z0, eps, 1.0)?);
    edit_trace.record(1.0, &z_edit);

    for (i, t_hi, t_lo) in config.schedule.descending() {
        if (n - i).is_multiple_of(r) {
            residual = Some(consistency_residual(field, z0, eps, t_hi, c_src, &mut nfe)?);
            recomputations += 1;
        }
        let v_res = residual.as_ref().expect("first step always computes the residual");
        norms.push(v_res.rms());

        let v_tar = evaluate_counted(field, &z_edit, t_hi, c_tar, &mut nfe)?;
        let v_edit = at_step(t_hi, residual_corrected_velocity(&v_tar, v_res, &config.mask))?;
        z_edit = at_step(t_hi, euler_step(&z_edit, t_hi, t_lo, &v_edit))?;

        let z_src_lo = lerp_noise(z0, eps, t_lo)?;
        if let Some(splitter) = &splitter {
            z_edit = at_step(
                t_hi,
                splitter.transfer(&z_edit, &z_src_lo, &config.mask, config.hf_lambda),
            )?;
        }
        src_trace.record(t_lo, &z_src_lo);
        edit_trace.record(t_lo, &z_edit);
    }

    src_trace.nfe = nfe;
    edit_trace.nfe = nfe;
    Ok(EditReport {
        nfe: nfe.count(),
        residual_recomputations: recomputations,
        per_step_residual_norm: norms,
        output: z_edit,
        src_trace,
        edit_trace,
    })
}
