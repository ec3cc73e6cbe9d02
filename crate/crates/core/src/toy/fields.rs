//! Analytic velocity fields standing in for a trained flow model.
//!
//! All fields use the straight-path convention: `V = (x̂ − z)/t` where `x̂` is
//! the field's estimate of the clean sample. Along `z_t = (1 − t)·x + t·ε`
//! a point target gives the constant velocity `x − ε`.

use crate::condition::ConditionBundle;
use crate::error::{Error, Result};
use crate::latent::LatentField;
use crate::sampler::VelocityField;
use crate::toy::scene::{render_target, ToyScene};

fn require_positive_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("analytic fields need t > 0, got {t}")))
    }
}

fn toward(target: &LatentField, z: &LatentField, t: f64) -> Result<LatentField> {
    require_positive_t(t)?;
    let inv = 1.0 / t;
    target.zip_map(z, "toward", |x, zv| (x - zv) * inv)
}

/// Returns `k` regardless of state, time or condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantField {
    pub value: LatentField,
}

pub fn constant_field(k: LatentField) -> ConstantField {
    ConstantField { value: k }
}

impl VelocityField for ConstantField {
    fn evaluate(&self, z: &LatentField, _t: f64, _c: &ConditionBundle) -> Result<LatentField> {
        if z.shape() != self.value.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.value.shape(),
                got: z.shape(),
            });
        }
        Ok(self.value.clone())
    }
}

/// Flows every state straight to the scene render `x(c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointField {
    pub scene: ToyScene,
}

pub fn point_field(scene: ToyScene) -> PointField {
    PointField { scene }
}

impl VelocityField for PointField {
    fn evaluate(&self, z: &LatentField, t: f64, c: &ConditionBundle) -> Result<LatentField> {
        require_positive_t(t)?;
        toward(&render_target(&self.scene, c)?, z, t)
    }
}

/// Weighted point masses `(π_k, x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDataset {
    components: Vec<(f64, LatentField)>,
}

impl MixtureDataset {
    pub fn new(components: Vec<(f64, LatentField)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::Domain("mixture needs at least one component".into()));
        };
        let shape = first.shape();
        if let Some((_, x)) = components.iter().find(|(_, x)| x.shape() != shape) {
            return Err(Error::ShapeMismatch {
                expected: shape,
                got: x.shape(),
            });
        }
        if components.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Domain("mixture weights must be finite and >= 0".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("mixture weights sum to {total}, not 1")));
        }
        Ok(MixtureDataset { components })
    }

    /// Builds a dataset, rescaling the weights to sum to one.
    pub fn normalized(components: Vec<(f64, LatentField)>) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Domain("mixture weights must have a positive sum".into()));
        }
        Self::new(components.into_iter().map(|(w, x)| (w / total, x)).collect())
    }

    pub fn components(&self) -> &[(f64, LatentField)] {
        &self.components
    }

    /// Log of the unnormalized posterior weight of each component given `z` at time `t`.
    pub fn log_weights(&self, z: &LatentField, t: f64) -> Result<Vec<f64>> {
        require_positive_t(t)?;
        let denom = 2.0 * t * t;
        self.components
            .iter()
            .map(|(pi, x)| {
                if x.shape() != z.shape() {
                    return Err(Error::ShapeMismatch {
                        expected: x.shape(),
                        got: z.shape(),
                    });
                }
                let d2: f64 = z
                    .as_slice()
                    .iter()
                    .zip(x.as_slice())
                    .map(|(zv, xv)| {
                        let d = zv - (1.0 - t) * xv;
                        d * d
                    })
                    .sum();
                Ok(pi.ln() - d2 / denom)
            })
            .collect()
    }

    /// Posterior weights; falls back to the nearest component (lowest index on
    /// ties) when every weight underflows.
    pub fn posterior_weights(&self, z: &LatentField, t: f64) -> Result<Vec<f64>> {
        let logw = self.log_weights(z, t)?;
        if let Some(w) = softmax(&logw) {
            return Ok(w);
        }
        let nearest = self
            .components
            .iter()
            .enumerate()
            .map(|(k, (_, x))| {
                let d: f64 = z
                    .as_slice()
                    .iter()
                    .zip(x.as_slice())
                    .map(|(zv, xv)| (zv - (1.0 - t) * xv).powi(2))
                    .sum();
                (k, d)
            })
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
            .0;
        let mut w = vec![0.0; self.components.len()];
        w[nearest] = 1.0;
        Ok(w)
    }

    /// `x̄(z, t) = Σ w_k x_k`.
    pub fn posterior_mean(&self, z: &LatentField, t: f64) -> Result<LatentField> {
        let w = self.posterior_weights(z, t)?;
        let shape = z.shape();
        let mut acc = vec![0.0; shape.len()];
        for (wk, (_, x)) in w.iter().zip(&self.components) {
            if *wk == 0.0 {
                continue;
            }
            acc.iter_mut().zip(x.as_slice()).for_each(|(a, xv)| *a += wk * xv);
        }
        LatentField::checked(shape, acc, "posterior_mean")
    }
}

/// Normalized `exp` of log-weights with a max shift. `None` when nothing
/// survives (all `−∞` or non-finite).
pub fn softmax(log_weights: &[f64]) -> Option<Vec<f64>> {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return None;
    }
    let w: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    Some(w.into_iter().map(|v| v / total).collect())
}

/// Marginal flow of an unconditional point-mass mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureField {
    pub data: MixtureDataset,
}

pub fn mixture_field(data: MixtureDataset) -> MixtureField {
    MixtureField { data }
}

impl VelocityField for MixtureField {
    fn evaluate(&self, z: &LatentField, t: f64, _c: &ConditionBundle) -> Result<LatentField> {
        toward(&self.data.posterior_mean(z, t)?, z, t)
    }
}

/// Conditional mixture: under condition `c` the dataset is the scene rendered
/// with each variant's texture phase, weighted by the variant weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneMixtureField {
    pub scene: ToyScene,
    /// `(weight, texture phase)` per component.
    pub variants: Vec<(f64, f64)>,
}

impl SceneMixtureField {
    pub fn new(scene: ToyScene, variants: Vec<(f64, f64)>) -> Result<Self> {
        let field = SceneMixtureField { scene, variants };
        let total: f64 = field.variants.iter().map(|(w, _)| w).sum();
        if field.variants.is_empty()
            || field.variants.iter().any(|(w, _)| w.is_nan() || *w < 0.0)
            || total.is_nan()
            || total <= 0.0
        {
            return Err(Error::Domain(
                "scene mixture needs non-negative weights with a positive sum".into(),
            ));
        }
        Ok(field)
    }

    pub fn dataset(&self, c: &ConditionBundle) -> Result<MixtureDataset> {
        let components = self
            .variants
            .iter()
            .map(|&(w, phase)| Ok((w, render_target(&self.scene.with_phase(phase), c)?)))
            .collect::<Result<Vec<_>>>()?;
        MixtureDataset::normalized(components)
    }
}

impl VelocityField for SceneMixtureField {
    fn evaluate(&self, z: &LatentField, t: f64, c: &ConditionBundle) -> Result<LatentField> {
        require_positive_t(t)?;
        toward(&self.dataset(c)?.posterior_mean(z, t)?, z, t)
    }
}

/// Dispatches to a per-condition field, matched by bundle equality.
pub struct ConditionSwitch {
    arms: Vec<(ConditionBundle, Box<dyn VelocityField>)>,
}

impl ConditionSwitch {
    pub fn new() -> Self {
        ConditionSwitch { arms: Vec::new() }
    }

    pub fn arm(mut self, c: ConditionBundle, field: impl VelocityField + 'static) -> Self {
        self.arms.push((c, Box::new(field)));
        self
    }
}

impl Default for ConditionSwitch {
    fn default() -> Self {
        Self::new()
    }
}

impl VelocityField for ConditionSwitch {
    fn evaluate(&self, z: &LatentField, t: f64, c: &ConditionBundle) -> Result<LatentField> {
        self.arms
            .iter()
            .find(|(key, _)| key == c)
            .ok_or_else(|| Error::Domain("no field registered for this condition".into()))?
            .1
            .evaluate(z, t, c)
    }
}
