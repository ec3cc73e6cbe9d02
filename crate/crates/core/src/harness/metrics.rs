//! Desk-scale edit-quality metrics and the `key=value` report.

use std::fmt::Write as _;

use crate::error::Result;
use crate::latent::{LatentField, Mask};

/// Pixels count as foreground when their mask weight is at least this.
pub const FOREGROUND_THRESHOLD: f64 = 0.5;

/// Forward-difference gradient magnitude at every pixel that has a right and
/// lower neighbour, paired with the smallest mask weight over that stencil.
fn gradient_magnitudes(x: &LatentField, mask: &Mask) -> Vec<(f64, f64)> {
    let s = x.shape();
    let mut out = Vec::new();
    for f in 0..s.frames {
        for c in 0..s.channels {
            for y in 0..s.height.saturating_sub(1) {
                for col in 0..s.width.saturating_sub(1) {
                    let v = x.get(f, c, y, col);
                    let dx = x.get(f, c, y, col + 1) - v;
                    let dy = x.get(f, c, y + 1, col) - v;
                    let m = mask
                        .at(f, y, col)
                        .min(mask.at(f, y, col + 1))
                        .min(mask.at(f, y + 1, col));
                    out.push(((dx * dx + dy * dy).sqrt(), m));
                }
            }
        }
    }
    out
}

/// Pearson correlation; 0 when either side has no spread.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    if n < 2 {
        return 0.0;
    }
    let ma = a[..n].iter().sum::<f64>() / n as f64;
    let mb = b[..n].iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a[..n].iter().zip(&b[..n]) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
    }
}

/// Correlation of gradient magnitudes inside the mask, `output` vs `reference`.
///
/// Only stencils lying wholly in the foreground count, so the jump across the
/// mask boundary (which tracks the background, not the structure) is ignored.
pub fn fg_structure_score(output: &LatentField, reference: &LatentField, mask: &Mask) -> Result<f64> {
    mask.check_broadcast(output.shape())?;
    mask.check_broadcast(reference.shape())?;
    let go = gradient_magnitudes(output, mask);
    let gr = gradient_magnitudes(reference, mask);
    let (a, b): (Vec<f64>, Vec<f64>) = go
        .iter()
        .zip(&gr)
        .filter(|((_, m), _)| *m >= FOREGROUND_THRESHOLD)
        .map(|((x, _), (y, _))| (*x, *y))
        .unzip();
    Ok(pearson(&a, &b))
}

/// RMS of `output − source` over background pixels (mask below threshold);
/// 0 when there is no background.
pub fn bg_change_rms(output: &LatentField, source: &LatentField, mask: &Mask) -> Result<f64> {
    let diff = output.sub(source)?;
    let mut ss = 0.0;
    let mut n = 0usize;
    for (d, m) in diff.as_slice().iter().zip(mask.broadcast(output.shape())?) {
        if m < FOREGROUND_THRESHOLD {
            ss += d * d;
            n += 1;
        }
    }
    Ok(if n == 0 { 0.0 } else { (ss / n as f64).sqrt() })
}

/// Machine-readable run summary, written as one `key=value` per line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    pub nfe: u64,
    pub identity_error: Option<f64>,
    pub fg_structure_score: Option<f64>,
    pub bg_change_rms: Option<f64>,
    pub reuse_gap: Option<f64>,
    /// Extra informational entries, kept in insertion order.
    pub extra: Vec<(String, String)>,
}

impl MetricsReport {
    pub fn with_nfe(nfe: u64) -> Self {
        MetricsReport {
            nfe,
            ..Default::default()
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.extra.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "nfe={}", self.nfe).unwrap();
        let optional = [
            ("identity_error", self.identity_error),
            ("fg_structure_score", self.fg_structure_score),
            ("bg_change_rms", self.bg_change_rms),
            ("reuse_gap", self.reuse_gap),
        ];
        for (k, v) in optional {
            if let Some(v) = v {
                writeln!(s, "{k}={v:e}").unwrap();
            }
        }
        for (k, v) in &self.extra {
            writeln!(s, "{k}={v}").unwrap();
        }
        s
    }

    /// Parses `key=value` lines back into a lookup list.
    pub fn parse(text: &str) -> Vec<(String, String)> {
        text.lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect()
    }
}
