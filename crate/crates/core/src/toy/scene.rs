use std::f64::consts::TAU;

use crate::condition::ConditionBundle;
use crate::error::{Error, Result};
use crate::latent::{LatentField, Mask, Shape};
use crate::noise::sample_noise;

/// `illum_params = [gain, angle (radians), background level]`.
pub const ILLUM_ARITY: usize = 3;
/// `agnostic_params = [center x, center y, radius]`, normalized to the frame.
pub const AGNOSTIC_ARITY: usize = 3;
/// Weight of the structural condition added onto the structure pattern.
pub const STRUCTURAL_WEIGHT: f64 = 0.1;

/// A synthetic scene: a textured disc lit by a directional ramp over a lit
/// background.
///
/// The render is `x = M·(S ⊙ g) + (1 − M)·B` where the disc `M` and texture
/// `S` come from the illumination-agnostic parameters and the gain `g` and
/// background `B` come from the illumination parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyScene {
    pub shape: Shape,
    /// Strength of the directional ramp in both `g` and `B`.
    pub falloff: f64,
    /// Band frequency in cycles per frame width.
    pub texture_freq: f64,
    /// Texture phase; mixture variants differ only here.
    pub phase: f64,
    /// Horizontal disc motion per frame, in frame widths.
    pub drift: f64,
    /// Amplitude of the seeded grain added to the texture.
    pub grain: f64,
    pub seed: u64,
}

impl ToyScene {
    pub fn new(shape: Shape) -> Self {
        ToyScene {
            shape,
            falloff: 0.6,
            texture_freq: 2.0,
            phase: 0.0,
            drift: 0.05,
            grain: 0.05,
            seed: 0,
        }
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        ToyScene { phase, ..self.clone() }
    }

    fn coords(&self, row: usize, col: usize) -> (f64, f64) {
        (
            (col as f64 + 0.5) / self.shape.width as f64,
            (row as f64 + 0.5) / self.shape.height as f64,
        )
    }

    fn check_arity(c: &ConditionBundle) -> Result<()> {
        if c.illum_params.len() != ILLUM_ARITY {
            return Err(Error::Domain(format!(
                "toy scene takes {ILLUM_ARITY} illumination parameters, got {}",
                c.illum_params.len()
            )));
        }
        if c.agnostic_params.len() != AGNOSTIC_ARITY {
            return Err(Error::Domain(format!(
                "toy scene takes {AGNOSTIC_ARITY} agnostic parameters, got {}",
                c.agnostic_params.len()
            )));
        }
        Ok(())
    }

    /// Foreground disc for the given agnostic parameters.
    pub fn foreground_mask(&self, agnostic: &[f64]) -> Result<Mask> {
        let [cx, cy, radius] = agnostic else {
            return Err(Error::Domain(format!(
                "toy scene takes {AGNOSTIC_ARITY} agnostic parameters, got {}",
                agnostic.len()
            )));
        };
        let ms = self.shape.mask_shape();
        let mut data = Vec::with_capacity(ms.len());
        for f in 0..ms.frames {
            let fx = cx + self.drift * f as f64;
            for y in 0..ms.height {
                for x in 0..ms.width {
                    let (u, v) = self.coords(y, x);
                    let inside = (u - fx).powi(2) + (v - cy).powi(2) <= radius * radius;
                    data.push(if inside { 1.0 } else { 0.0 });
                }
            }
        }
        Mask::new(ms, data)
    }

    /// Texture `S`, including the structural prior when present.
    pub fn structure(&self, c: &ConditionBundle) -> Result<LatentField> {
        let grain = sample_noise(self.seed, self.shape);
        let k = TAU * self.texture_freq;
        let s = LatentField::from_fn(self.shape, |f, ch, y, x| {
            let (u, v) = self.coords(y, x);
            let u = u - self.drift * f as f64;
            0.5 + 0.35 * (k * u + self.phase).sin() * (0.5 * k * v + self.phase).cos()
                + 0.05 * ch as f64
                + self.grain * grain.get(f, ch, y, x)
        })?;
        match &c.structural {
            None => Ok(s),
            Some(prior) => crate::latent::axpy(STRUCTURAL_WEIGHT, prior, &s),
        }
    }

    fn direction(&self, angle: f64, row: usize, col: usize) -> f64 {
        let (u, v) = self.coords(row, col);
        angle.cos() * (u - 0.5) + angle.sin() * (v - 0.5)
    }

    /// Deterministic render `x(c)`; also the ground truth for metrics.
    pub fn render(&self, c: &ConditionBundle) -> Result<LatentField> {
        Self::check_arity(c)?;
        let [gain, angle, bg] = c.illum_params[..] else {
            unreachable!()
        };
        let mask = self.foreground_mask(&c.agnostic_params)?;
        let s = self.structure(c)?;
        let mut out = LatentField::from_fn(self.shape, |f, ch, y, x| {
            let ramp = 1.0 + self.falloff * self.direction(angle, y, x);
            let m = mask.at(f, y, x);
            m * s.get(f, ch, y, x) * gain * ramp + (1.0 - m) * bg * ramp
        })?
        .into_vec();
        if let Some(reference) = &c.reference_frame {
            if reference.shape() != self.shape.single_frame() {
                return Err(Error::ShapeMismatch {
                    expected: self.shape.single_frame(),
                    got: reference.shape(),
                });
            }
            out[..reference.as_slice().len()].copy_from_slice(reference.as_slice());
        }
        LatentField::from_vec(self.shape, out)
    }
}

/// Ground-truth render of `scene` under `c`.
pub fn render_target(scene: &ToyScene, c: &ConditionBundle) -> Result<LatentField> {
    scene.render(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> ToyScene {
        ToyScene::new(Shape::new(2, 2, 12, 12).unwrap())
    }

    fn cond(gain: f64, bg: f64) -> ConditionBundle {
        ConditionBundle::new(vec![gain, 0.7, bg], vec![0.45, 0.5, 0.3])
    }

    #[test]
    fn neutral_light_shows_bare_structure() {
        let mut s = scene();
        s.falloff = 0.0;
        let c = cond(1.0, 0.0);
        let x = s.render(&c).unwrap();
        let m = s.foreground_mask(&c.agnostic_params).unwrap();
        let st = s.structure(&c).unwrap();
        for f in 0..2 {
            for ch in 0..2 {
                for y in 0..12 {
                    for xx in 0..12 {
                        let expect = if m.at(f, y, xx) == 1.0 {
                            st.get(f, ch, y, xx)
                        } else {
                            0.0
                        };
                        assert_eq!(x.get(f, ch, y, xx), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn gain_scales_only_foreground() {
        let s = scene();
        let a = s.render(&cond(1.0, 0.3)).unwrap();
        let b = s.render(&cond(2.0, 0.3)).unwrap();
        let m = s.foreground_mask(&[0.45, 0.5, 0.3]).unwrap();
        let shape = s.shape;
        let mut fg = 0;
        for f in 0..shape.frames {
            for ch in 0..shape.channels {
                for y in 0..shape.height {
                    for x in 0..shape.width {
                        let (va, vb) = (a.get(f, ch, y, x), b.get(f, ch, y, x));
                        if m.at(f, y, x) == 0.0 {
                            assert_eq!(va, vb);
                        } else {
                            fg += 1;
                            assert!((vb - 2.0 * va).abs() < 1e-12);
                        }
                    }
                }
            }
        }
        assert!(fg > 0);
    }

    #[test]
    fn reference_frame_overrides_frame_zero() {
        let s = scene();
        let reference = LatentField::filled(s.shape.single_frame(), 0.25);
        let c = cond(1.0, 0.3).with_reference(reference.clone());
        let x = s.render(&c).unwrap();
        assert_eq!(x.frame(0), reference);
        assert_eq!(x.frame(1), s.render(&cond(1.0, 0.3)).unwrap().frame(1));
    }

    #[test]
    fn structural_prior_is_additive() {
        let s = scene();
        let prior = LatentField::filled(s.shape, 1.0);
        let base = s.structure(&cond(1.0, 0.0)).unwrap();
        let with = s.structure(&cond(1.0, 0.0).with_structural(prior)).unwrap();
        let diff = with.sub(&base).unwrap();
        assert!(diff.as_slice().iter().all(|d| (d - STRUCTURAL_WEIGHT).abs() < 1e-12));
    }

    #[test]
    fn arity_is_checked() {
        let s = scene();
        assert!(s.render(&ConditionBundle::new(vec![1.0], vec![0.5, 0.5, 0.3])).is_err());
        assert!(s.render(&ConditionBundle::new(vec![1.0, 0.0, 0.0], vec![0.5])).is_err());
    }

    #[test]
    fn identical_bundles_render_identically() {
        let s = scene();
        assert_eq!(s.render(&cond(1.3, 0.2)).unwrap(), s.render(&cond(1.3, 0.2)).unwrap());
    }
}
