//! Text frame-stack files and grayscale frame export.
//!
//! A stack file is a header line `FPSTACK 1 <frames> <channels> <height> <width>`
//! followed by whitespace-separated decimal values in row-major
//! `(frame, channel, row, column)` order. The writer emits 9 significant
//! digits, one image row per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::harness::HarnessError;
use crate::latent::{LatentField, Shape};

const MAGIC: &str = "FPSTACK";
const VERSION: &str = "1";

pub fn encode_stack(x: &LatentField) -> String {
    let s = x.shape();
    let mut out = String::with_capacity(16 * s.len() + 64);
    writeln!(
        out,
        "{MAGIC} {VERSION} {} {} {} {}",
        s.frames, s.channels, s.height, s.width
    )
    .unwrap();
    for row in x.as_slice().chunks(s.width) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v:.8e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn decode_stack(text: &str) -> Result<LatentField, String> {
    let mut tokens = text.split_ascii_whitespace();
    if tokens.next() != Some(MAGIC) {
        return Err(format!("missing {MAGIC} header"));
    }
    if tokens.next() != Some(VERSION) {
        return Err(format!("unsupported stack version (expected {VERSION})"));
    }
    let mut extent = |name: &str| -> Result<usize, String> {
        tokens
            .next()
            .ok_or_else(|| format!("header is missing {name}"))?
            .parse::<usize>()
            .map_err(|e| format!("bad {name}: {e}"))
    };
    let (f, c, h, w) = (
        extent("frames")?,
        extent("channels")?,
        extent("height")?,
        extent("width")?,
    );
    let shape = Shape::new(f, c, h, w).map_err(|e| e.to_string())?;
    let data = tokens
        .map(|t| t.parse::<f64>().map_err(|e| format!("bad value {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if data.len() != shape.len() {
        return Err(format!(
            "header declares {} values ({shape}), payload has {}",
            shape.len(),
            data.len()
        ));
    }
    LatentField::from_vec(shape, data).map_err(|e| e.to_string())
}

pub fn write_stack(path: &Path, x: &LatentField) -> Result<(), HarnessError> {
    fs::write(path, encode_stack(x)).map_err(|e| HarnessError::io(path, e))
}

pub fn read_stack(path: &Path) -> Result<LatentField, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    decode_stack(&text).map_err(|e| HarnessError::Format {
        path: path.display().to_string(),
        message: e,
    })
}

/// Min-max range used to map a channel of `x` to 8 bits.
pub fn channel_range(x: &LatentField, channel: usize) -> (f64, f64) {
    let s = x.shape();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for f in 0..s.frames {
        for v in x.plane(f, channel) {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    (lo, hi)
}

/// Binary portable graymap (P5, maxval 255) of one frame/channel plane.
pub fn encode_pgm(x: &LatentField, frame: usize, channel: usize, range: (f64, f64)) -> Vec<u8> {
    let s = x.shape();
    let mut out = format!("P5\n{} {}\n255\n", s.width, s.height).into_bytes();
    let (lo, hi) = range;
    let span = hi - lo;
    out.extend(x.plane(frame, channel).iter().map(|v| {
        if span > 0.0 {
            ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_layout() {
        let x = LatentField::from_vec(Shape::new(1, 1, 2, 2).unwrap(), vec![0.5, -1.0, 2.0, 1e-7]).unwrap();
        let text = encode_stack(&x);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("FPSTACK 1 1 1 2 2"));
        assert_eq!(lines.next(), Some("5.00000000e-1 -1.00000000e0"));
        assert_eq!(decode_stack(&text).unwrap(), x);
    }

    #[test]
    fn rejects_malformed_payloads() {
        assert!(decode_stack("FPSTACK 1 1 1 1 2\n1.0").is_err());
        assert!(decode_stack("FPSTACK 1 1 1 1 1\n1.0 2.0").is_err());
        assert!(decode_stack("FPSTACK 2 1 1 1 1\n1.0").is_err());
        assert!(decode_stack("STACK 1 1 1 1 1\n1.0").is_err());
        assert!(decode_stack("FPSTACK 1 1 0 1 1\n").is_err());
        assert!(decode_stack("FPSTACK 1 1 1 1 1\nnan").is_err());
    }

    #[test]
    fn pgm_bytes() {
        let x = LatentField::from_vec(Shape::new(1, 1, 1, 3).unwrap(), vec![0.0, 0.5, 1.0]).unwrap();
        let pgm = encode_pgm(&x, 0, 0, channel_range(&x, 0));
        assert!(pgm.starts_with(b"P5\n3 1\n255\n"));
        assert_eq!(&pgm[pgm.len() - 3..], &[0, 128, 255]);
        let flat = encode_pgm(&x, 0, 0, (1.0, 1.0));
        assert_eq!(&flat[flat.len() - 3..], &[0, 0, 0]);
    }
}
