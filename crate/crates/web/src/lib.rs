//! Browser demo: three interactive views over the toy relighting scene.
//!
//! Each view is a plain Rust function returning a [`Panels`] strip of
//! grayscale RGBA images; the `#[wasm_bindgen]` wrappers at the bottom only
//! convert errors for JavaScript.

use rcflow::harness::config::default_mixture_components;
use rcflow::harness::metrics::{bg_change_rms, fg_structure_score};
use rcflow::toy::{point_field, render_target, SceneMixtureField, ToyScene};
use rcflow::{
    flowedit_run, freq_decompose, run_edit, sample_noise, ConditionBundle, EditConfig, FlowEditConfig, LatentField,
    Mask, Schedule, Shape, VelocityField,
};
use wasm_bindgen::prelude::*;

/// Side length of every demo image.
pub const SIZE: usize = 48;
const STEPS: usize = 50;

fn shape() -> Shape {
    Shape::new(1, 1, SIZE, SIZE).expect("static shape")
}

fn scene() -> ToyScene {
    ToyScene::new(shape())
}

fn source() -> ConditionBundle {
    ConditionBundle::new(vec![1.0, 0.0, 0.3], vec![0.45, 0.5, 0.3])
}

/// A horizontal strip of equally sized grayscale images plus run statistics.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Panels {
    width: usize,
    height: usize,
    count: usize,
    rgba: Vec<u8>,
    stats: Vec<f64>,
}

#[wasm_bindgen]
impl Panels {
    /// Width of the whole strip in pixels.
    pub fn width(&self) -> usize {
        self.width * self.count
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// RGBA bytes, row-major over the whole strip.
    pub fn pixels(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    /// View-specific numbers; see each view for the order.
    pub fn stats(&self) -> Vec<f64> {
        self.stats.clone()
    }
}

/// Lays images side by side. Images in the same `group` share an intensity
/// range so they can be compared by eye.
fn strip(images: &[(&LatentField, usize)], stats: Vec<f64>) -> Panels {
    let (h, w) = (SIZE, SIZE);
    let groups = images.iter().map(|(_, g)| *g).max().map_or(0, |g| g + 1);
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); groups];
    for (img, g) in images {
        for v in img.plane(0, 0) {
            ranges[*g].0 = ranges[*g].0.min(*v);
            ranges[*g].1 = ranges[*g].1.max(*v);
        }
    }
    let n = images.len();
    let mut rgba = vec![255u8; 4 * n * w * h];
    for (k, (img, g)) in images.iter().enumerate() {
        let (lo, hi) = ranges[*g];
        let span = hi - lo;
        for (i, v) in img.plane(0, 0).iter().enumerate() {
            let level = if span > 0.0 {
                ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                128
            };
            let (y, x) = (i / w, i % w);
            let at = 4 * (y * n * w + k * w + x);
            rgba[at..at + 3].fill(level);
        }
    }
    Panels {
        width: w,
        height: h,
        count: n,
        rgba,
        stats,
    }
}

/// Source render, its low band and its high band at cutoff `rho`.
///
/// Stats: `[rms of low band, rms of high band]`.
pub fn frequency_split(rho: f64, texture_seed: u64) -> Result<Panels, String> {
    let mut sc = scene();
    sc.seed = texture_seed;
    let x = sc.render(&source()).map_err(|e| e.to_string())?;
    let split = freq_decompose(&x, rho).map_err(|e| e.to_string())?;
    let stats = vec![split.low.rms(), split.high.rms()];
    Ok(strip(&[(&x, 0), (&split.low, 0), (&split.high, 1)], stats))
}

/// Knobs of the relighting view.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct RelightParams {
    pub gain: f64,
    pub angle: f64,
    pub background: f64,
    pub reuse_interval: usize,
    pub lambda: f64,
    pub rho: f64,
    /// Restrict the residual correction to the foreground disc.
    pub masked: bool,
    /// Use the single-image point field instead of the texture mixture.
    pub point_field: bool,
    pub seed: u32,
}

#[wasm_bindgen]
impl RelightParams {
    #[wasm_bindgen(constructor)]
    pub fn new() -> RelightParams {
        RelightParams {
            gain: 1.2,
            angle: 1.0,
            background: 0.8,
            reuse_interval: 10,
            lambda: 0.5,
            rho: 0.8,
            masked: true,
            point_field: false,
            seed: 0,
        }
    }
}

impl Default for RelightParams {
    fn default() -> Self {
        Self::new()
    }
}

/// Source, residual-corrected edit and the scene rendered under the target
/// lighting.
///
/// Stats: `[nfe, foreground structure score, background change rms,
/// rms distance of the edit to the target render]`.
pub fn relight(p: &RelightParams) -> Result<Panels, String> {
    let sc = scene();
    let c_src = source();
    let c_tar = c_src.relit(vec![p.gain, p.angle, p.background]);
    let field: Box<dyn VelocityField> = if p.point_field {
        Box::new(point_field(sc.clone()))
    } else {
        Box::new(SceneMixtureField::new(sc.clone(), default_mixture_components()).map_err(|e| e.to_string())?)
    };
    let fg = sc.foreground_mask(&c_src.agnostic_params).map_err(|e| e.to_string())?;
    let mask = if p.masked { fg.clone() } else { Mask::ones(shape()) };
    let r = p.reuse_interval.clamp(1, STEPS);
    let cfg = EditConfig::new(Schedule::uniform(STEPS).map_err(|e| e.to_string())?, mask)
        .with_reuse(r)
        .with_hf(p.lambda, p.rho);

    let z0 = sc.render(&c_src).map_err(|e| e.to_string())?;
    let truth = render_target(&sc, &c_tar).map_err(|e| e.to_string())?;
    let rep = run_edit(
        field.as_ref(),
        &z0,
        &c_src,
        &c_tar,
        &sample_noise(p.seed.into(), shape()),
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let stats = vec![
        rep.nfe as f64,
        fg_structure_score(&rep.output, &z0, &fg).map_err(|e| e.to_string())?,
        bg_change_rms(&rep.output, &z0, &fg).map_err(|e| e.to_string())?,
        rep.output.rms_diff(&truth).map_err(|e| e.to_string())?,
    ];
    Ok(strip(&[(&z0, 0), (&rep.output, 0), (&truth, 0)], stats))
}

/// FlowEdit with `n_avg` fresh noise draws per step next to the
/// residual-corrected edit (unmasked, `r = 1`, no detail transfer) and the
/// absolute difference between them.
///
/// Stats: `[flowedit nfe, residual-corrected nfe, rms difference]`.
pub fn compare(n_avg: usize, seed: u64) -> Result<Panels, String> {
    let sc = scene();
    let c_src = source();
    let c_tar = c_src.relit(vec![1.2, 1.0, 0.8]);
    let field = SceneMixtureField::new(sc.clone(), default_mixture_components()).map_err(|e| e.to_string())?;
    let sched = Schedule::uniform(STEPS).map_err(|e| e.to_string())?;
    let z0 = sc.render(&c_src).map_err(|e| e.to_string())?;

    let fe = flowedit_run(
        &field,
        &z0,
        &c_src,
        &c_tar,
        &FlowEditConfig::fresh(sched.clone(), n_avg.max(1), seed),
    )
    .map_err(|e| e.to_string())?;
    let cfg = EditConfig::new(sched, Mask::ones(shape())).with_reuse(1).without_hf();
    let rcf = run_edit(&field, &z0, &c_src, &c_tar, &sample_noise(seed, shape()), &cfg).map_err(|e| e.to_string())?;

    let diff = fe.output.sub(&rcf.output).map_err(|e| e.to_string())?;
    let abs = LatentField::from_fn(shape(), |f, c, y, x| diff.get(f, c, y, x).abs()).map_err(|e| e.to_string())?;
    let stats = vec![fe.edit_trace.nfe.count() as f64, rcf.nfe as f64, diff.rms()];
    Ok(strip(&[(&fe.output, 0), (&rcf.output, 0), (&abs, 1)], stats))
}

#[wasm_bindgen(js_name = frequencySplit)]
pub fn frequency_split_js(rho: f64, texture_seed: u32) -> Result<Panels, JsValue> {
    frequency_split(rho, texture_seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = relight)]
pub fn relight_js(params: &RelightParams) -> Result<Panels, JsValue> {
    relight(params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = compare)]
pub fn compare_js(n_avg: usize, seed: u32) -> Result<Panels, JsValue> {
    compare(n_avg, seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixel(p: &Panels, panel: usize, y: usize, x: usize) -> [u8; 4] {
        let at = 4 * (y * p.width() + panel * SIZE + x);
        p.rgba[at..at + 4].try_into().unwrap()
    }

    #[test]
    fn split_strip_layout() {
        let p = frequency_split(0.5, 0).unwrap();
        assert_eq!((p.width(), p.height(), p.count()), (3 * SIZE, SIZE, 3));
        assert_eq!(p.pixels().len(), 4 * 3 * SIZE * SIZE);
        let px = pixel(&p, 2, 10, 10);
        assert_eq!(px[0], px[1]);
        assert_eq!(px[3], 255);
        // Cutoff 1 keeps every bin low, so the high band is flat.
        let all_low = frequency_split(1.0, 0).unwrap();
        assert!(all_low.stats()[1] < 1e-12);
    }

    #[test]
    fn relight_reports_edit_cost() {
        let p = relight(&RelightParams::new()).unwrap();
        let s = p.stats();
        assert_eq!(s[0], 55.0);
        assert!(s[1] > 0.8, "structure {}", s[1]);
        let mut q = RelightParams::new();
        q.reuse_interval = 1;
        q.point_field = true;
        q.masked = false;
        assert_eq!(relight(&q).unwrap().stats()[0], 100.0);
    }

    #[test]
    fn compare_counts_both_methods() {
        let s = compare(2, 3).unwrap().stats();
        assert_eq!(s[0], 200.0);
        assert_eq!(s[1], 100.0);
        assert!(s[2] > 0.0);
    }
}
