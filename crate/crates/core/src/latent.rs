//! Dense 4-axis latent fields and soft masks.
//!
//! Every field is laid out row-major over `(frame, channel, row, column)`.
//! Public operations never hand back a field holding NaN or infinity.

use std::fmt;

use crate::error::{Error, Result};

/// Extents of a latent video: frames × channels × height × width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub frames: usize,
    pub channels: usize,
    pub height: usize,
    pub width: usize,
}

impl Shape {
    pub fn new(frames: usize, channels: usize, height: usize, width: usize) -> Result<Self> {
        let shape = Shape {
            frames,
            channels,
            height,
            width,
        };
        if frames == 0 || channels == 0 || height == 0 || width == 0 {
            return Err(Error::InvalidShape(format!("every extent must be >= 1, got {shape}")));
        }
        frames
            .checked_mul(channels)
            .and_then(|n| n.checked_mul(height))
            .and_then(|n| n.checked_mul(width))
            .ok_or_else(|| Error::InvalidShape(format!("{shape} overflows the address space")))?;
        Ok(shape)
    }

    pub fn len(&self) -> usize {
        self.frames * self.channels * self.height * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pixels in one frame-channel plane.
    pub fn plane(&self) -> usize {
        self.height * self.width
    }

    #[inline]
    pub fn index(&self, frame: usize, channel: usize, row: usize, col: usize) -> usize {
        ((frame * self.channels + channel) * self.height + row) * self.width + col
    }

    /// The single-channel shape a mask for this latent must have.
    pub fn mask_shape(&self) -> Shape {
        Shape { channels: 1, ..*self }
    }

    /// One frame with the same channel and spatial layout.
    pub fn single_frame(&self) -> Shape {
        Shape { frames: 1, ..*self }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}x{}", self.frames, self.channels, self.height, self.width)
    }
}

fn expect_same(expected: Shape, got: Shape) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::ShapeMismatch { expected, got })
    }
}

/// A real-valued latent video (noise, data, velocities, edit states).
#[derive(Debug, Clone, PartialEq)]
pub struct LatentField {
    shape: Shape,
    data: Vec<f64>,
}

impl LatentField {
    pub fn zeros(shape: Shape) -> Self {
        Self::filled(shape, 0.0)
    }

    pub fn filled(shape: Shape, value: f64) -> Self {
        assert!(value.is_finite(), "fill value must be finite");
        LatentField {
            shape,
            data: vec![value; shape.len()],
        }
    }

    pub fn from_vec(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::InvalidShape(format!(
                "{shape} needs {} values, got {}",
                shape.len(),
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("LatentField::from_vec"));
        }
        Ok(LatentField { shape, data })
    }

    /// Builds a field by evaluating `f(frame, channel, row, col)` at every element.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(shape.len());
        for fr in 0..shape.frames {
            for ch in 0..shape.channels {
                for y in 0..shape.height {
                    for x in 0..shape.width {
                        data.push(f(fr, ch, y, x));
                    }
                }
            }
        }
        Self::checked(shape, data, "LatentField::from_fn")
    }

    pub(crate) fn checked(shape: Shape, data: Vec<f64>, op: &'static str) -> Result<Self> {
        debug_assert_eq!(data.len(), shape.len());
        if data.iter().all(|v| v.is_finite()) {
            Ok(LatentField { shape, data })
        } else {
            Err(Error::NonFinite(op))
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, frame: usize, channel: usize, row: usize, col: usize) -> f64 {
        self.data[self.shape.index(frame, channel, row, col)]
    }

    /// The contiguous `height × width` plane of one frame and channel.
    pub fn plane(&self, frame: usize, channel: usize) -> &[f64] {
        let start = self.shape.index(frame, channel, 0, 0);
        &self.data[start..start + self.shape.plane()]
    }

    pub fn frame(&self, frame: usize) -> LatentField {
        let n = self.shape.channels * self.shape.plane();
        LatentField {
            shape: self.shape.single_frame(),
            data: self.data[frame * n..(frame + 1) * n].to_vec(),
        }
    }

    pub(crate) fn zip_map(
        &self,
        other: &LatentField,
        op: &'static str,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<LatentField> {
        expect_same(self.shape, other.shape)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Self::checked(self.shape, data, op)
    }

    pub fn add(&self, other: &LatentField) -> Result<LatentField> {
        self.zip_map(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &LatentField) -> Result<LatentField> {
        self.zip_map(other, "sub", |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Result<LatentField> {
        let data = self.data.iter().map(|v| a * v).collect();
        Self::checked(self.shape, data, "scale")
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sum_squares(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn rms(&self) -> f64 {
        (self.sum_squares() / self.data.len() as f64).sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn max_abs_diff(&self, other: &LatentField) -> Result<f64> {
        expect_same(self.shape, other.shape)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `max|self − reference| / (1 + max|reference|)`.
    ///
    /// This is the relative error used by every tolerance check in the crate.
    pub fn relative_error(&self, reference: &LatentField) -> Result<f64> {
        Ok(self.max_abs_diff(reference)? / (1.0 + reference.max_abs()))
    }

    pub fn rms_diff(&self, other: &LatentField) -> Result<f64> {
        expect_same(self.shape, other.shape)?;
        let ss: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok((ss / self.data.len() as f64).sqrt())
    }
}

/// `a·x + y`, elementwise.
pub fn axpy(a: f64, x: &LatentField, y: &LatentField) -> Result<LatentField> {
    if a == 0.0 {
        expect_same(y.shape, x.shape)?;
        return Ok(y.clone());
    }
    x.zip_map(y, "axpy", |xv, yv| a * xv + yv)
}

/// Point on the straight noising path: `(1 − t)·z0 + t·eps`.
pub fn lerp_noise(z0: &LatentField, eps: &LatentField, t: f64) -> Result<LatentField> {
    Error::check_unit("t", t)?;
    if t == 0.0 {
        expect_same(z0.shape, eps.shape)?;
        return Ok(z0.clone());
    }
    if t == 1.0 {
        expect_same(z0.shape, eps.shape)?;
        return Ok(eps.clone());
    }
    z0.zip_map(eps, "lerp_noise", |a, b| (1.0 - t) * a + t * b)
}

/// Per-pixel weight in `[0, 1]`, shared by all channels of a latent.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    shape: Shape,
    data: Vec<f64>,
}

impl Mask {
    pub fn new(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if shape.channels != 1 {
            return Err(Error::InvalidShape(format!("mask must have one channel, got {shape}")));
        }
        if data.len() != shape.len() {
            return Err(Error::InvalidShape(format!(
                "{shape} mask needs {} values, got {}",
                shape.len(),
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange {
                name: "mask value",
                value: *bad,
                range: "[0, 1]",
            });
        }
        Ok(Mask { shape, data })
    }

    pub fn filled(shape: Shape, value: f64) -> Result<Self> {
        Self::new(shape.mask_shape(), vec![value; shape.mask_shape().len()])
    }

    /// All-ones mask matching the frames and spatial extents of `latent`.
    pub fn ones(latent: Shape) -> Self {
        Self::filled(latent, 1.0).expect("1 is a valid mask value")
    }

    pub fn zeros(latent: Shape) -> Self {
        Self::filled(latent, 0.0).expect("0 is a valid mask value")
    }

    pub fn from_field(field: &LatentField) -> Result<Self> {
        Self::new(field.shape(), field.as_slice().to_vec())
    }

    pub fn to_field(&self) -> LatentField {
        LatentField {
            shape: self.shape,
            data: self.data.clone(),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, frame: usize, row: usize, col: usize) -> f64 {
        self.data[self.shape.index(frame, 0, row, col)]
    }

    pub fn is_constant(&self, value: f64) -> bool {
        self.data.iter().all(|&v| v == value)
    }

    /// Checks that this mask lines up with `latent` (same frames, height, width).
    pub fn check_broadcast(&self, latent: Shape) -> Result<()> {
        expect_same(latent.mask_shape(), self.shape)
    }

    /// Mask value for every element of `latent`, broadcast over channels.
    pub(crate) fn broadcast(&self, latent: Shape) -> Result<impl Iterator<Item = f64> + '_> {
        self.check_broadcast(latent)?;
        let plane = latent.plane();
        Ok((0..latent.frames).flat_map(move |f| {
            let row = &self.data[f * plane..(f + 1) * plane];
            (0..latent.channels).flat_map(move |_| row.iter().copied())
        }))
    }
}

/// Overlap weights of each target cell against source cells along one axis.
fn pooling_weights(src: usize, dst: usize) -> Vec<Vec<(usize, f64)>> {
    let ratio = src as f64 / dst as f64;
    (0..dst)
        .map(|j| {
            let lo = j as f64 * ratio;
            let hi = (j + 1) as f64 * ratio;
            let mut cells = Vec::new();
            for i in lo.floor() as usize..(hi.ceil() as usize).min(src) {
                let overlap = (hi.min((i + 1) as f64) - lo.max(i as f64)).max(0.0);
                if overlap > 0.0 {
                    cells.push((i, overlap / ratio));
                }
            }
            cells
        })
        .collect()
}

/// Area-average pooling of a pixel-resolution mask down to latent resolution.
///
/// Height and width may shrink by any factor (fractional cell overlaps are
/// weighted by area). Frames must match or divide evenly.
pub fn downsample_mask(mask: &Mask, target: Shape) -> Result<Mask> {
    let src = mask.shape();
    let dst = target.mask_shape();
    if target.frames > src.frames || !src.frames.is_multiple_of(target.frames) {
        return Err(Error::InvalidShape(format!(
            "cannot pool {} mask frames into {}",
            src.frames, target.frames
        )));
    }
    if target.height > src.height || target.width > src.width {
        return Err(Error::InvalidShape(format!(
            "mask {src} is smaller than target {dst}; only downsampling is supported"
        )));
    }
    let wf = pooling_weights(src.frames, dst.frames);
    let wy = pooling_weights(src.height, dst.height);
    let wx = pooling_weights(src.width, dst.width);
    let mut out = Vec::with_capacity(dst.len());
    for fcells in &wf {
        for ycells in &wy {
            for xcells in &wx {
                let mut acc = 0.0;
                for &(f, a) in fcells {
                    for &(y, b) in ycells {
                        for &(x, c) in xcells {
                            acc += a * b * c * mask.at(f, y, x);
                        }
                    }
                }
                out.push(acc.clamp(0.0, 1.0));
            }
        }
    }
    Mask::new(dst, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(values: &[f64]) -> LatentField {
        LatentField::from_vec(Shape::new(1, 1, 1, values.len()).unwrap(), values.to_vec()).unwrap()
    }

    #[test]
    fn shape_rejects_zero_extent() {
        assert!(Shape::new(1, 0, 4, 4).is_err());
        assert!(Shape::new(usize::MAX, 2, 2, 2).is_err());
        assert_eq!(Shape::new(2, 3, 4, 5).unwrap().len(), 120);
    }

    #[test]
    fn axpy_cases() {
        let y = row(&[1.0, 1.0]);
        let x = row(&[2.0, 4.0]);
        assert_eq!(axpy(0.0, &x, &y).unwrap(), y);
        assert_eq!(axpy(1.0, &x.scale(-1.0).unwrap(), &x).unwrap(), row(&[0.0, 0.0]));
        let r = axpy(0.1, &x, &y).unwrap();
        assert!((r.as_slice()[0] - 1.2).abs() < 1e-15);
        assert!((r.as_slice()[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn axpy_shape_and_overflow_errors() {
        assert!(matches!(
            axpy(1.0, &row(&[1.0]), &row(&[1.0, 2.0])),
            Err(Error::ShapeMismatch { .. })
        ));
        assert_eq!(
            axpy(f64::MAX, &row(&[f64::MAX]), &row(&[0.0])),
            Err(Error::NonFinite("axpy"))
        );
    }

    #[test]
    fn lerp_endpoints_and_midpoint() {
        let z0 = row(&[2.0, -3.5]);
        let eps = row(&[0.0, 7.25]);
        assert_eq!(lerp_noise(&z0, &eps, 0.0).unwrap(), z0);
        assert_eq!(lerp_noise(&z0, &eps, 1.0).unwrap(), eps);
        assert_eq!(lerp_noise(&row(&[2.0]), &row(&[0.0]), 0.25).unwrap(), row(&[1.5]));
        assert!(matches!(lerp_noise(&z0, &eps, 1.5), Err(Error::OutOfRange { .. })));
        assert!(lerp_noise(&z0, &row(&[1.0]), 0.5).is_err());
    }

    #[test]
    fn from_vec_rejects_nan() {
        assert!(LatentField::from_vec(Shape::new(1, 1, 1, 1).unwrap(), vec![f64::NAN]).is_err());
    }

    #[test]
    fn mask_validation() {
        let s = Shape::new(1, 1, 1, 2).unwrap();
        assert!(Mask::new(s, vec![0.0, 1.1]).is_err());
        assert!(Mask::new(Shape::new(1, 2, 1, 1).unwrap(), vec![0.0, 1.0]).is_err());
        let m = Mask::new(s, vec![0.0, 0.5]).unwrap();
        let latent = Shape::new(1, 3, 1, 2).unwrap();
        let b: Vec<f64> = m.broadcast(latent).unwrap().collect();
        assert_eq!(b, vec![0.0, 0.5, 0.0, 0.5, 0.0, 0.5]);
        assert!(m.check_broadcast(Shape::new(2, 3, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn pooling_two_by_two_block() {
        let m = Mask::new(Shape::new(1, 1, 2, 2).unwrap(), vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let p = downsample_mask(&m, Shape::new(1, 4, 1, 1).unwrap()).unwrap();
        assert_eq!(p.shape(), Shape::new(1, 1, 1, 1).unwrap());
        assert!((p.as_slice()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pooling_ones_stays_ones() {
        let m = Mask::ones(Shape::new(4, 1, 9, 7).unwrap());
        for target in [(4, 3, 3), (2, 4, 5), (1, 1, 1), (4, 9, 7)] {
            let t = Shape::new(target.0, 2, target.1, target.2).unwrap();
            let p = downsample_mask(&m, t).unwrap();
            assert!(p.as_slice().iter().all(|v| (v - 1.0).abs() < 1e-12), "{t}");
        }
    }

    #[test]
    fn pooling_rejects_incompatible_frames_and_upsampling() {
        let m = Mask::ones(Shape::new(3, 1, 4, 4).unwrap());
        assert!(downsample_mask(&m, Shape::new(2, 1, 2, 2).unwrap()).is_err());
        assert!(downsample_mask(&m, Shape::new(3, 1, 8, 4).unwrap()).is_err());
    }

    #[test]
    fn relative_error_definition() {
        let a = row(&[1.0, 2.0]);
        let b = row(&[1.0, 3.0]);
        assert_eq!(a.relative_error(&b).unwrap(), 1.0 / 4.0);
    }
}
