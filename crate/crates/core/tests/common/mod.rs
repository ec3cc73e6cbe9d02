//! Slow, literal reference implementations used as test oracles. None of them
//! share code with the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use rcflow::{LatentField, Shape};

/// Normalized axis frequency of bin `k` on an `n`-point axis.
fn axis_freq(k: usize, n: usize) -> f64 {
    if n == 1 {
        0.0
    } else {
        k.min(n - k) as f64 / (n / 2) as f64
    }
}

pub fn is_low_bin(ky: usize, kx: usize, h: usize, w: usize, rho: f64) -> bool {
    let (fy, fx) = (axis_freq(ky, h), axis_freq(kx, w));
    let (my, mx) = (axis_freq(h / 2, h), axis_freq(w / 2, w));
    fy * fy + fx * fx <= rho * rho * (my * my + mx * mx)
}

/// Low band of `x` computed with a direct O(N²) DFT per plane.
pub fn naive_low_pass(x: &LatentField, rho: f64) -> Vec<f64> {
    let s = x.shape();
    let (h, w) = (s.height, s.width);
    let mut out = Vec::with_capacity(s.len());
    for f in 0..s.frames {
        for c in 0..s.channels {
            let plane = x.plane(f, c);
            let mut spec = vec![(0.0, 0.0); h * w];
            for ky in 0..h {
                for kx in 0..w {
                    if !is_low_bin(ky, kx, h, w, rho) {
                        continue;
                    }
                    let (mut re, mut im) = (0.0, 0.0);
                    for y in 0..h {
                        for xx in 0..w {
                            let a = -2.0 * PI * ((ky * y) as f64 / h as f64 + (kx * xx) as f64 / w as f64);
                            re += plane[y * w + xx] * a.cos();
                            im += plane[y * w + xx] * a.sin();
                        }
                    }
                    spec[ky * w + kx] = (re, im);
                }
            }
            for y in 0..h {
                for xx in 0..w {
                    let mut acc = 0.0;
                    for ky in 0..h {
                        for kx in 0..w {
                            let (re, im) = spec[ky * w + kx];
                            let a = 2.0 * PI * ((ky * y) as f64 / h as f64 + (kx * xx) as f64 / w as f64);
                            acc += re * a.cos() - im * a.sin();
                        }
                    }
                    out.push(acc / (h * w) as f64);
                }
            }
        }
    }
    out
}

/// Area pooling by replication: each source cell is split into `dst` equal
/// pieces, then every destination cell averages `src` consecutive pieces.
fn pool_axis(values: &[f64], src: usize, dst: usize) -> Vec<f64> {
    let fine: Vec<f64> = values.iter().flat_map(|&v| std::iter::repeat_n(v, dst)).collect();
    fine.chunks(src).map(|c| c.iter().sum::<f64>() / src as f64).collect()
}

/// Brute-force pooling of an `f × h × w` mask to `tf × th × tw`.
pub fn pool_mask(data: &[f64], (f, h, w): (usize, usize, usize), (tf, th, tw): (usize, usize, usize)) -> Vec<f64> {
    // width
    let mut a = Vec::new();
    for row in data.chunks(w) {
        a.extend(pool_axis(row, w, tw));
    }
    // height
    let mut b = vec![0.0; f * th * tw];
    for fi in 0..f {
        for x in 0..tw {
            let col: Vec<f64> = (0..h).map(|y| a[(fi * h + y) * tw + x]).collect();
            for (y, v) in pool_axis(&col, h, th).into_iter().enumerate() {
                b[(fi * th + y) * tw + x] = v;
            }
        }
    }
    // frames
    let mut out = vec![0.0; tf * th * tw];
    for p in 0..th * tw {
        let col: Vec<f64> = (0..f).map(|fi| b[fi * th * tw + p]).collect();
        for (fi, v) in pool_axis(&col, f, tf).into_iter().enumerate() {
            out[fi * th * tw + p] = v;
        }
    }
    out
}

/// Gaussian-mixture posterior mean written straight from the definition,
/// without any overflow protection.
pub fn literal_posterior_mean(components: &[(f64, LatentField)], z: &LatentField, t: f64) -> Vec<f64> {
    let raw: Vec<f64> = components
        .iter()
        .map(|(pi, x)| {
            let d2: f64 = z
                .as_slice()
                .iter()
                .zip(x.as_slice())
                .map(|(a, b)| (a - (1.0 - t) * b).powi(2))
                .sum();
            pi * (-d2 / (2.0 * t * t)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let mut out = vec![0.0; z.shape().len()];
    for (r, (_, x)) in raw.iter().zip(components) {
        for (o, v) in out.iter_mut().zip(x.as_slice()) {
            *o += r / total * v;
        }
    }
    out
}

pub fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    num / den
}

/// Small deterministic pseudo-random field (splitmix64), independent of the
/// library's noise generator.
pub fn field_from_seed(shape: Shape, seed: u64) -> LatentField {
    let mut state = seed;
    let data = (0..shape.len())
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect();
    LatentField::from_vec(shape, data).unwrap()
}
