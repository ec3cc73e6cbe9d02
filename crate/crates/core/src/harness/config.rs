//! Line-oriented experiment configuration.
//!
//! One `key = value` per line, `#` starts a comment. Lists are comma
//! separated. Mixture components use indexed keys (`component.0.weight`,
//! `component.0.phase`). Unknown keys, duplicate keys and out-of-range values
//! are rejected before anything runs, naming the offending key.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::condition::ConditionBundle;
use crate::flowedit::{FlowEditConfig, NoiseMode};
use crate::harness::stackfile::read_stack;
use crate::harness::HarnessError;
use crate::latent::{downsample_mask, LatentField, Mask, Shape};
use crate::rcf::{EditConfig, DEFAULT_HF_LAMBDA, DEFAULT_HF_RHO, DEFAULT_REUSE_INTERVAL};
use crate::sampler::VelocityField;
use crate::schedule::Schedule;
use crate::toy::{constant_field, point_field, SceneMixtureField, ToyScene, AGNOSTIC_ARITY, ILLUM_ARITY};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaskSource {
    Ones,
    Zeros,
    /// Foreground disc of the scene under the source condition.
    Scene,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    /// Render of the scene under the source condition.
    Scene,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Constant {
        value: f64,
    },
    Point,
    /// `(weight, texture phase)` per component.
    Mixture {
        components: Vec<(f64, f64)>,
    },
}

/// Five equally weighted texture variants around the scene phase.
pub fn default_mixture_components() -> Vec<(f64, f64)> {
    (-2..=2).map(|k| (0.2, 0.1 * k as f64)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpec {
    pub illum: Vec<f64>,
    pub agnostic: Vec<f64>,
    pub reference: Option<PathBuf>,
    pub structural: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub shape: Shape,
    pub steps: usize,
    pub knots: Option<Vec<f64>>,
    pub reuse_interval: usize,
    pub hf_lambda: f64,
    pub hf_rho: f64,
    pub hf_enabled: bool,
    pub mask: MaskSource,
    pub input: InputSource,
    pub field: FieldSpec,
    pub scene: ToyScene,
    pub src: ConditionSpec,
    pub tar: ConditionSpec,
    /// Which condition `generate` samples under.
    pub generate_target: bool,
    pub out: PathBuf,
    pub flowedit_noise: NoiseMode,
    pub flowedit_n_avg: usize,
    pub equivalence_tol: f64,
    pub sweep_r_values: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let shape = Shape::new(2, 1, 16, 16).expect("static shape");
        ExperimentConfig {
            seed: 0,
            shape,
            steps: 50,
            knots: None,
            reuse_interval: DEFAULT_REUSE_INTERVAL,
            hf_lambda: DEFAULT_HF_LAMBDA,
            hf_rho: DEFAULT_HF_RHO,
            hf_enabled: true,
            mask: MaskSource::Scene,
            input: InputSource::Scene,
            field: FieldSpec::Mixture {
                components: default_mixture_components(),
            },
            scene: ToyScene::new(shape),
            src: ConditionSpec {
                illum: vec![1.0, 0.0, 0.3],
                agnostic: vec![0.4, 0.5, 0.3],
                reference: None,
                structural: None,
            },
            tar: ConditionSpec {
                illum: vec![1.2, 1.0, 0.8],
                agnostic: vec![0.4, 0.5, 0.3],
                reference: None,
                structural: None,
            },
            generate_target: true,
            out: PathBuf::from("out"),
            flowedit_noise: NoiseMode::FreshPerStep,
            flowedit_n_avg: 1,
            equivalence_tol: 1e-6,
            sweep_r_values: vec![1, 2, 5, 10],
        }
    }
}

/// Command-line overrides; each replaces the config key of the same meaning.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub reuse_interval: Option<usize>,
    pub hf_lambda: Option<f64>,
    pub hf_rho: Option<f64>,
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| bad(key, format!("expected a number, got {v:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, "must be finite"))
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse()
        .map_err(|_| bad(key, format!("expected a non-negative integer, got {v:?}")))
}

fn parse_list<T>(
    key: &str,
    v: &str,
    item: impl Fn(&str, &str) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    v.split(',').map(|s| item(key, s.trim())).collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(key, format!("expected true/false, got {v:?}"))),
    }
}

fn check_unit(key: &str, x: f64) -> Result<(), ConfigError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(bad(key, format!("{x} is outside [0, 1]")))
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Ok(Self::parse(&text, base)?)
    }

    /// Parses and validates config text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(line, format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if entries.insert(k.clone(), v).is_some() {
                return Err(bad(&k, "given more than once"));
            }
        }

        let mut cfg = ExperimentConfig::default();
        let mut components: BTreeMap<usize, (Option<f64>, Option<f64>)> = BTreeMap::new();
        let mut field_kind: Option<String> = None;
        let mut field_value = 0.0;
        let mut tar_agnostic_set = false;
        let mut tar_structural_set = false;
        let path = |v: &str| base.join(v);

        for (k, v) in &entries {
            let key = k.as_str();
            let v = v.as_str();
            match key {
                "seed" => cfg.seed = v.parse().map_err(|_| bad(key, "expected an unsigned 64-bit integer"))?,
                "shape" => {
                    let e = parse_list(key, v, parse_usize)?;
                    let [f, c, h, w] = e[..] else {
                        return Err(bad(key, "expected frames,channels,height,width"));
                    };
                    cfg.shape = Shape::new(f, c, h, w).map_err(|e| bad(key, e.to_string()))?;
                }
                "steps" => cfg.steps = parse_usize(key, v)?,
                "knots" => cfg.knots = Some(parse_list(key, v, parse_f64)?),
                "reuse_interval" => cfg.reuse_interval = parse_usize(key, v)?,
                "hf_lambda" => cfg.hf_lambda = parse_f64(key, v)?,
                "hf_rho" => cfg.hf_rho = parse_f64(key, v)?,
                "hf_enabled" => cfg.hf_enabled = parse_bool(key, v)?,
                "mask" => {
                    cfg.mask = match v {
                        "ones" => MaskSource::Ones,
                        "zeros" => MaskSource::Zeros,
                        "scene" => MaskSource::Scene,
                        p => MaskSource::File(path(p)),
                    }
                }
                "input" => {
                    cfg.input = match v {
                        "scene" => InputSource::Scene,
                        p => InputSource::File(path(p)),
                    }
                }
                "field" => field_kind = Some(v.to_string()),
                "field.value" => field_value = parse_f64(key, v)?,
                "scene.falloff" => cfg.scene.falloff = parse_f64(key, v)?,
                "scene.texture_freq" => cfg.scene.texture_freq = parse_f64(key, v)?,
                "scene.phase" => cfg.scene.phase = parse_f64(key, v)?,
                "scene.drift" => cfg.scene.drift = parse_f64(key, v)?,
                "scene.grain" => cfg.scene.grain = parse_f64(key, v)?,
                "scene.seed" => {
                    cfg.scene.seed = v.parse().map_err(|_| bad(key, "expected an unsigned 64-bit integer"))?
                }
                "src.illum" => cfg.src.illum = parse_list(key, v, parse_f64)?,
                "src.agnostic" => cfg.src.agnostic = parse_list(key, v, parse_f64)?,
                "src.reference" => cfg.src.reference = Some(path(v)),
                "src.structural" => cfg.src.structural = Some(path(v)),
                "tar.illum" => cfg.tar.illum = parse_list(key, v, parse_f64)?,
                "tar.agnostic" => {
                    cfg.tar.agnostic = parse_list(key, v, parse_f64)?;
                    tar_agnostic_set = true;
                }
                "tar.reference" => cfg.tar.reference = Some(path(v)),
                "tar.structural" => {
                    cfg.tar.structural = Some(path(v));
                    tar_structural_set = true;
                }
                "generate.condition" => {
                    cfg.generate_target = match v {
                        "tar" => true,
                        "src" => false,
                        _ => return Err(bad(key, "expected `src` or `tar`")),
                    }
                }
                "out" => cfg.out = path(v),
                "flowedit.noise" => {
                    cfg.flowedit_noise = match v {
                        "fresh" => NoiseMode::FreshPerStep,
                        "fixed" => NoiseMode::Fixed,
                        _ => return Err(bad(key, "expected `fresh` or `fixed`")),
                    }
                }
                "flowedit.n_avg" => cfg.flowedit_n_avg = parse_usize(key, v)?,
                "equivalence.tol" => cfg.equivalence_tol = parse_f64(key, v)?,
                "sweep.r_values" => cfg.sweep_r_values = parse_list(key, v, parse_usize)?,
                _ => {
                    let parts: Vec<&str> = key.split('.').collect();
                    match parts[..] {
                        ["component", idx, attr @ ("weight" | "phase")] => {
                            let i = parse_usize(key, idx)?;
                            let slot = components.entry(i).or_default();
                            let x = parse_f64(key, v)?;
                            if attr == "weight" {
                                slot.0 = Some(x);
                            } else {
                                slot.1 = Some(x);
                            }
                        }
                        _ => return Err(bad(key, "unknown key")),
                    }
                }
            }
        }

        if !tar_agnostic_set {
            cfg.tar.agnostic = cfg.src.agnostic.clone();
        }
        if !tar_structural_set {
            cfg.tar.structural = cfg.src.structural.clone();
        }
        cfg.scene.shape = cfg.shape;

        cfg.field = match field_kind.as_deref() {
            None | Some("mixture") => {
                if components.is_empty() {
                    FieldSpec::Mixture {
                        components: default_mixture_components(),
                    }
                } else {
                    let mut list = Vec::with_capacity(components.len());
                    for (expected, (i, (w, p))) in components.into_iter().enumerate() {
                        let key = format!("component.{i}");
                        if i != expected {
                            return Err(bad(
                                &format!("component.{expected}"),
                                "missing; indices must be contiguous from 0",
                            ));
                        }
                        let w = w.ok_or_else(|| bad(&format!("{key}.weight"), "missing"))?;
                        if w < 0.0 {
                            return Err(bad(&format!("{key}.weight"), "must be >= 0"));
                        }
                        list.push((w, p.unwrap_or(0.0)));
                    }
                    if list.iter().map(|(w, _)| w).sum::<f64>() <= 0.0 {
                        return Err(bad("component.0.weight", "weights must have a positive sum"));
                    }
                    FieldSpec::Mixture { components: list }
                }
            }
            Some("point") => FieldSpec::Point,
            Some("constant") => FieldSpec::Constant { value: field_value },
            Some(other) => return Err(bad("field", format!("unknown field kind {other:?}"))),
        };
        if !matches!(cfg.field, FieldSpec::Mixture { .. }) && entries.keys().any(|k| k.starts_with("component.")) {
            return Err(bad("field", "component.* keys need `field = mixture`"));
        }
        if entries.contains_key("field.value") && !matches!(cfg.field, FieldSpec::Constant { .. }) {
            return Err(bad("field.value", "only valid with `field = constant`"));
        }

        if entries.contains_key("steps") && entries.contains_key("knots") {
            return Err(bad("steps", "give either `steps` or `knots`, not both"));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(r) = o.reuse_interval {
            self.reuse_interval = r;
        }
        if let Some(l) = o.hf_lambda {
            self.hf_lambda = l;
        }
        if let Some(r) = o.hf_rho {
            self.hf_rho = r;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self
            .schedule()
            .map_err(|e| bad(if self.knots.is_some() { "knots" } else { "steps" }, e.to_string()))?
            .steps();
        if self.reuse_interval == 0 || self.reuse_interval > n {
            return Err(bad(
                "reuse_interval",
                format!("{} is outside [1, {n}]", self.reuse_interval),
            ));
        }
        check_unit("hf_lambda", self.hf_lambda)?;
        check_unit("hf_rho", self.hf_rho)?;
        for (prefix, c) in [("src", &self.src), ("tar", &self.tar)] {
            if c.illum.len() != ILLUM_ARITY {
                return Err(bad(
                    &format!("{prefix}.illum"),
                    format!("expected {ILLUM_ARITY} values"),
                ));
            }
            if c.agnostic.len() != AGNOSTIC_ARITY {
                return Err(bad(
                    &format!("{prefix}.agnostic"),
                    format!("expected {AGNOSTIC_ARITY} values"),
                ));
            }
            if c.agnostic[2] <= 0.0 {
                return Err(bad(&format!("{prefix}.agnostic"), "radius must be > 0"));
            }
        }
        if self.scene.texture_freq < 0.0 {
            return Err(bad("scene.texture_freq", "must be >= 0"));
        }
        if self.scene.grain < 0.0 {
            return Err(bad("scene.grain", "must be >= 0"));
        }
        if self.flowedit_n_avg == 0 {
            return Err(bad("flowedit.n_avg", "must be >= 1"));
        }
        if self.flowedit_noise == NoiseMode::Fixed && self.flowedit_n_avg != 1 {
            return Err(bad(
                "flowedit.n_avg",
                "fixed-noise mode takes exactly one draw per step",
            ));
        }
        if self.equivalence_tol < 0.0 {
            return Err(bad("equivalence.tol", "must be >= 0"));
        }
        if self.sweep_r_values.is_empty() {
            return Err(bad("sweep.r_values", "needs at least one value"));
        }
        if let Some(r) = self.sweep_r_values.iter().find(|&&r| r == 0 || r > n) {
            return Err(bad("sweep.r_values", format!("{r} is outside [1, {n}]")));
        }
        Ok(())
    }

    pub fn schedule(&self) -> crate::error::Result<Schedule> {
        match &self.knots {
            Some(k) => Schedule::from_knots(k.clone()),
            None => Schedule::uniform(self.steps),
        }
    }

    fn condition(&self, spec: &ConditionSpec) -> Result<ConditionBundle, HarnessError> {
        let mut c = ConditionBundle::new(spec.illum.clone(), spec.agnostic.clone());
        if let Some(p) = &spec.reference {
            let frame = read_stack(p)?;
            expect_shape(p, frame.shape(), self.shape.single_frame())?;
            c = c.with_reference(frame);
        }
        if let Some(p) = &spec.structural {
            let s = read_stack(p)?;
            expect_shape(p, s.shape(), self.shape)?;
            c = c.with_structural(s);
        }
        Ok(c)
    }

    pub fn src_condition(&self) -> Result<ConditionBundle, HarnessError> {
        self.condition(&self.src)
    }

    pub fn tar_condition(&self) -> Result<ConditionBundle, HarnessError> {
        self.condition(&self.tar)
    }

    pub fn build_field(&self) -> Result<Box<dyn VelocityField>, HarnessError> {
        Ok(match &self.field {
            FieldSpec::Constant { value } => Box::new(constant_field(LatentField::filled(self.shape, *value))),
            FieldSpec::Point => Box::new(point_field(self.scene.clone())),
            FieldSpec::Mixture { components } => {
                Box::new(SceneMixtureField::new(self.scene.clone(), components.clone())?)
            }
        })
    }

    pub fn load_input(&self) -> Result<LatentField, HarnessError> {
        match &self.input {
            InputSource::Scene => Ok(self.scene.render(&self.src_condition()?)?),
            InputSource::File(p) => {
                let x = read_stack(p)?;
                expect_shape(p, x.shape(), self.shape)?;
                Ok(x)
            }
        }
    }

    pub fn load_mask(&self) -> Result<Mask, HarnessError> {
        Ok(match &self.mask {
            MaskSource::Ones => Mask::ones(self.shape),
            MaskSource::Zeros => Mask::zeros(self.shape),
            MaskSource::Scene => self.scene.foreground_mask(&self.src.agnostic)?,
            MaskSource::File(p) => {
                let raw = read_stack(p)?;
                let m = Mask::from_field(&raw).map_err(|e| HarnessError::Format {
                    path: p.display().to_string(),
                    message: e.to_string(),
                })?;
                downsample_mask(&m, self.shape).map_err(|e| HarnessError::Format {
                    path: p.display().to_string(),
                    message: e.to_string(),
                })?
            }
        })
    }

    pub fn edit_config(&self, mask: Mask) -> Result<EditConfig, HarnessError> {
        let mut cfg = EditConfig::new(self.schedule()?, mask)
            .with_reuse(self.reuse_interval)
            .with_hf(self.hf_lambda, self.hf_rho);
        cfg.hf_enabled = self.hf_enabled;
        Ok(cfg)
    }

    pub fn flowedit_config(&self) -> Result<FlowEditConfig, HarnessError> {
        Ok(FlowEditConfig {
            schedule: self.schedule()?,
            noise_mode: self.flowedit_noise,
            n_avg: self.flowedit_n_avg,
            seed: self.seed,
        })
    }
}

fn expect_shape(path: &Path, got: Shape, expected: Shape) -> Result<(), HarnessError> {
    if got == expected {
        Ok(())
    } else {
        Err(HarnessError::Format {
            path: path.display().to_string(),
            message: format!("expected shape {expected}, file has {got}"),
        })
    }
}
