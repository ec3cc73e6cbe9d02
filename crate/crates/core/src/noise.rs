//! Seeded standard-normal noise.
//!
//! Uniforms come from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)`; an optional 64-bit stream id selects an independent
//! substream. Each uniform is `(u64 >> 11 + 1) · 2⁻⁵³ ∈ (0, 1]`, and pairs are
//! turned into normals with the Box–Muller transform, emitting the cosine
//! branch then the sine branch. The output depends only on `(seed, stream,
//! shape)`.

use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::latent::{LatentField, Shape};

struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        GaussianStream { rng, spare: None }
    }

    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let radius = (-2.0 * self.uniform().ln()).sqrt();
        let angle = TAU * self.uniform();
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

fn fill(seed: u64, stream: u64, shape: Shape) -> LatentField {
    let mut g = GaussianStream::new(seed, stream);
    let data = (0..shape.len()).map(|_| g.next()).collect();
    LatentField::from_vec(shape, data).expect("Box-Muller output is finite")
}

/// `ε ~ N(0, I)` for a given seed.
pub fn sample_noise(seed: u64, shape: Shape) -> LatentField {
    fill(seed, 0, shape)
}

/// Independent noise for draw `draw` at step `step` of a multi-noise run.
///
/// Never collides with [`sample_noise`] for the same seed.
pub fn sample_noise_at(seed: u64, step: u32, draw: u32, shape: Shape) -> LatentField {
    let stream = ((u64::from(step) + 1) << 32) | u64::from(draw);
    fill(seed, stream, shape)
}
