//! Spatial frequency split and high-frequency transfer.
//!
//! Each frame/channel plane is transformed with a 2D DFT over (height, width).
//! Bins are classified by normalized radial frequency: along an axis of length
//! `n`, bin `k` has frequency `min(k, n − k) / ⌊n/2⌋` (0 when `n == 1`), and the
//! radial frequency is the Euclidean norm of the two axis frequencies. Bins with
//! radial frequency `≤ rho · r_max` are low, everything else is high. The
//! temporal axis is never mixed.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::latent::{LatentField, Mask, Shape};

/// Low and high spatial-frequency parts of a field; `low + high` is the input.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqSplit {
    pub low: LatentField,
    pub high: LatentField,
    pub rho: f64,
}

fn axis_frequency(k: usize, n: usize) -> f64 {
    let half = n / 2;
    if half == 0 {
        0.0
    } else {
        k.min(n - k) as f64 / half as f64
    }
}

/// Reusable 2D transform plans and the low-pass bin mask for one plane size.
pub struct SpectralSplitter {
    height: usize,
    width: usize,
    rho: f64,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    low_bin: Vec<bool>,
}

impl SpectralSplitter {
    pub fn new(height: usize, width: usize, rho: f64) -> Result<Self> {
        Error::check_unit("rho", rho)?;
        if height == 0 || width == 0 {
            return Err(Error::InvalidShape("empty plane".into()));
        }
        let mut planner = FftPlanner::new();
        let fy_max = axis_frequency(height / 2, height);
        let fx_max = axis_frequency(width / 2, width);
        let cutoff_sq = rho * rho * (fy_max * fy_max + fx_max * fx_max);
        let mut low_bin = Vec::with_capacity(height * width);
        for ky in 0..height {
            let fy = axis_frequency(ky, height);
            for kx in 0..width {
                let fx = axis_frequency(kx, width);
                low_bin.push(fy * fy + fx * fx <= cutoff_sq);
            }
        }
        Ok(SpectralSplitter {
            height,
            width,
            rho,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
            low_bin,
        })
    }

    pub fn for_shape(shape: Shape, rho: f64) -> Result<Self> {
        Self::new(shape.height, shape.width, rho)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Whether spectral bin `(ky, kx)` belongs to the low band.
    pub fn is_low(&self, ky: usize, kx: usize) -> bool {
        self.low_bin[ky * self.width + kx]
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let (rows, cols) = if inverse {
            (&self.row_inv, &self.col_inv)
        } else {
            (&self.row_fwd, &self.col_fwd)
        };
        for line in buf.chunks_exact_mut(self.width) {
            rows.process(line);
        }
        let mut column = vec![Complex64::default(); self.height];
        for x in 0..self.width {
            for y in 0..self.height {
                column[y] = buf[y * self.width + x];
            }
            cols.process(&mut column);
            for y in 0..self.height {
                buf[y * self.width + x] = column[y];
            }
        }
    }

    /// Splits one `height × width` plane into (low, high).
    fn split_plane(&self, plane: &[f64], low: &mut [f64], high: &mut [f64]) {
        let n = plane.len();
        let mut spec: Vec<Complex64> = plane.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut spec, false);
        let mut hi_spec = vec![Complex64::default(); n];
        for (i, (s, h)) in spec.iter_mut().zip(hi_spec.iter_mut()).enumerate() {
            if !self.low_bin[i] {
                *h = *s;
                *s = Complex64::default();
            }
        }
        self.transform(&mut spec, true);
        self.transform(&mut hi_spec, true);
        let norm = 1.0 / n as f64;
        for i in 0..n {
            low[i] = spec[i].re * norm;
            high[i] = hi_spec[i].re * norm;
        }
    }

    fn high_plane(&self, plane: &[f64], high: &mut [f64]) {
        let mut spec: Vec<Complex64> = plane.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut spec, false);
        for (s, low) in spec.iter_mut().zip(&self.low_bin) {
            if *low {
                *s = Complex64::default();
            }
        }
        self.transform(&mut spec, true);
        let norm = 1.0 / plane.len() as f64;
        for (h, s) in high.iter_mut().zip(&spec) {
            *h = s.re * norm;
        }
    }

    fn check(&self, shape: Shape) -> Result<()> {
        if shape.height != self.height || shape.width != self.width {
            return Err(Error::InvalidShape(format!(
                "splitter planned for {}x{} planes, got {shape}",
                self.height, self.width
            )));
        }
        Ok(())
    }

    pub fn decompose(&self, x: &LatentField) -> Result<FreqSplit> {
        let shape = x.shape();
        self.check(shape)?;
        let plane = shape.plane();
        let mut low = vec![0.0; shape.len()];
        let mut high = vec![0.0; shape.len()];
        for ((src, lo), hi) in x
            .as_slice()
            .chunks_exact(plane)
            .zip(low.chunks_exact_mut(plane))
            .zip(high.chunks_exact_mut(plane))
        {
            self.split_plane(src, lo, hi);
        }
        Ok(FreqSplit {
            low: LatentField::checked(shape, low, "freq_decompose")?,
            high: LatentField::checked(shape, high, "freq_decompose")?,
            rho: self.rho,
        })
    }

    /// High band only.
    pub fn high_pass(&self, x: &LatentField) -> Result<LatentField> {
        let shape = x.shape();
        self.check(shape)?;
        let plane = shape.plane();
        let mut high = vec![0.0; shape.len()];
        for (src, hi) in x.as_slice().chunks_exact(plane).zip(high.chunks_exact_mut(plane)) {
            self.high_plane(src, hi);
        }
        LatentField::checked(shape, high, "high_pass")
    }

    /// Masked high-frequency transfer from `z_src` into `z_edit`:
    /// `LF(z_edit) + λM·HF(z_src) + (1 − λM)·HF(z_edit)`.
    ///
    /// Evaluated as `z_edit + λM·HF(z_src − z_edit)`, which is the same map by
    /// linearity of the band split. It returns `z_edit` bit-for-bit when
    /// `λ = 0`, when `M ≡ 0`, or when `z_src == z_edit`.
    pub fn transfer(&self, z_edit: &LatentField, z_src: &LatentField, mask: &Mask, lambda: f64) -> Result<LatentField> {
        Error::check_unit("lambda", lambda)?;
        let shape = z_edit.shape();
        if z_src.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                got: z_src.shape(),
            });
        }
        mask.check_broadcast(shape)?;
        if lambda == 0.0 || mask.is_constant(0.0) {
            return Ok(z_edit.clone());
        }
        let detail = self.high_pass(&z_src.sub(z_edit)?)?;
        let data = z_edit
            .as_slice()
            .iter()
            .zip(detail.as_slice())
            .zip(mask.broadcast(shape)?)
            .map(|((&e, &d), m)| {
                let w = lambda * m;
                if w == 0.0 {
                    e
                } else {
                    e + w * d
                }
            })
            .collect();
        LatentField::checked(shape, data, "hf_transfer")
    }
}

/// Splits `x` into low and high spatial bands at threshold `rho`.
pub fn freq_decompose(x: &LatentField, rho: f64) -> Result<FreqSplit> {
    SpectralSplitter::for_shape(x.shape(), rho)?.decompose(x)
}

/// One-shot masked high-frequency transfer; see [`SpectralSplitter::transfer`].
pub fn hf_transfer(
    z_edit: &LatentField,
    z_src: &LatentField,
    mask: &Mask,
    lambda: f64,
    rho: f64,
) -> Result<LatentField> {
    SpectralSplitter::for_shape(z_edit.shape(), rho)?.transfer(z_edit, z_src, mask, lambda)
}
