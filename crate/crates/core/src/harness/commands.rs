//! Command drivers. Each reads an [`ExperimentConfig`], runs one experiment
//! and writes its artifacts under `config.out`. Nothing time-dependent goes
//! into the files, so re-running a command reproduces them byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::flowedit::{equivalence_check, flowedit_run};
use crate::harness::config::ExperimentConfig;
use crate::harness::metrics::{bg_change_rms, fg_structure_score, MetricsReport};
use crate::harness::stackfile::{channel_range, encode_pgm, write_stack};
use crate::harness::HarnessError;
use crate::latent::{LatentField, Mask};
use crate::noise::sample_noise;
use crate::rcf::run_edit;
use crate::sampler::generate;
use crate::toy::render_target;

/// Identity runs (target condition equal to the source, full mask, `r = 1`)
/// must reproduce the input within this relative error.
pub const IDENTITY_TOL: f64 = 1e-5;

/// Channel exported to the grayscale frame images.
const EXPORT_CHANNEL: usize = 0;

#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub report: MetricsReport,
    /// False when a built-in check failed (identity or equivalence).
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub r: usize,
    pub nfe: u64,
    /// RMS distance between this run's output and the `r = 1` output.
    pub reuse_gap: f64,
    /// `reuse_gap` divided by the RMS size of the `r = 1` edit.
    pub relative_gap: f64,
    /// Only for identity runs (target condition equal to the source).
    pub identity_error: Option<f64>,
}

struct OutputDir {
    root: PathBuf,
    files: Vec<PathBuf>,
}

impl OutputDir {
    fn create(root: &Path) -> Result<Self, HarnessError> {
        fs::create_dir_all(root).map_err(|e| HarnessError::io(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<(), HarnessError> {
        let path = self.root.join(name);
        fs::write(&path, bytes).map_err(|e| HarnessError::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }

    /// Stack file plus one grayscale image per frame, sharing one intensity range.
    fn write_latent(&mut self, x: &LatentField, report: &mut MetricsReport) -> Result<(), HarnessError> {
        let path = self.root.join("output.fpstack");
        write_stack(&path, x)?;
        self.files.push(path);
        let range = channel_range(x, EXPORT_CHANNEL);
        for f in 0..x.shape().frames {
            self.write(&format!("frame_{f:03}.pgm"), encode_pgm(x, f, EXPORT_CHANNEL, range))?;
        }
        report.note("export_channel", EXPORT_CHANNEL);
        report.note("export_min", format!("{:e}", range.0));
        report.note("export_max", format!("{:e}", range.1));
        Ok(())
    }

    fn finish(mut self, report: MetricsReport, passed: bool) -> Result<CommandOutcome, HarnessError> {
        self.write("report.txt", report.render())?;
        Ok(CommandOutcome {
            report,
            passed,
            files: self.files,
        })
    }
}

/// Fills in the edit-quality metrics shared by `edit` and `flowedit`.
/// Returns whether the identity check (when applicable) held.
fn edit_metrics(
    cfg: &ExperimentConfig,
    report: &mut MetricsReport,
    output: &LatentField,
    z0: &LatentField,
    mask: &Mask,
    identity_strict: bool,
) -> Result<bool, HarnessError> {
    let c_src = cfg.src_condition()?;
    let mut passed = true;
    if c_src == cfg.tar_condition()? {
        let err = output.relative_error(z0)?;
        report.identity_error = Some(err);
        if identity_strict && err > IDENTITY_TOL {
            passed = false;
        }
    }
    let source_render = render_target(&cfg.scene, &c_src)?;
    report.fg_structure_score = Some(fg_structure_score(output, &source_render, mask)?);
    report.bg_change_rms = Some(bg_change_rms(output, z0, mask)?);
    Ok(passed)
}

pub fn cmd_generate(cfg: &ExperimentConfig) -> Result<CommandOutcome, HarnessError> {
    let field = cfg.build_field()?;
    let c = if cfg.generate_target {
        cfg.tar_condition()?
    } else {
        cfg.src_condition()?
    };
    let eps = sample_noise(cfg.seed, cfg.shape);
    let (x, trace) = generate(field.as_ref(), &c, &eps, &cfg.schedule()?)?;

    let mut out = OutputDir::create(&cfg.out)?;
    let mut report = MetricsReport::with_nfe(trace.nfe.count());
    report.note("condition", if cfg.generate_target { "tar" } else { "src" });
    out.write_latent(&x, &mut report)?;
    out.finish(report, true)
}

pub fn cmd_edit(cfg: &ExperimentConfig) -> Result<CommandOutcome, HarnessError> {
    let field = cfg.build_field()?;
    let z0 = cfg.load_input()?;
    let (c_src, c_tar) = (cfg.src_condition()?, cfg.tar_condition()?);
    let mask = cfg.load_mask()?;
    let eps = sample_noise(cfg.seed, cfg.shape);
    let edit_cfg = cfg.edit_config(mask.clone())?;
    let run = run_edit(field.as_ref(), &z0, &c_src, &c_tar, &eps, &edit_cfg)?;

    let mut report = MetricsReport::with_nfe(run.nfe);
    let strict = mask.is_constant(1.0) && cfg.reuse_interval == 1;
    let passed = edit_metrics(cfg, &mut report, &run.output, &z0, &mask, strict)?;
    report.note("expected_nfe", edit_cfg.expected_nfe());
    report.note("residual_recomputations", run.residual_recomputations);

    let mut out = OutputDir::create(&cfg.out)?;
    out.write_latent(&run.output, &mut report)?;
    out.finish(report, passed)
}

pub fn cmd_flowedit(cfg: &ExperimentConfig) -> Result<CommandOutcome, HarnessError> {
    let field = cfg.build_field()?;
    let z0 = cfg.load_input()?;
    let (c_src, c_tar) = (cfg.src_condition()?, cfg.tar_condition()?);
    let mask = cfg.load_mask()?;
    let fe_cfg = cfg.flowedit_config()?;
    let run = flowedit_run(field.as_ref(), &z0, &c_src, &c_tar, &fe_cfg)?;

    let mut report = MetricsReport::with_nfe(run.edit_trace.nfe.count());
    edit_metrics(cfg, &mut report, &run.output, &z0, &mask, false)?;
    report.note("expected_nfe", fe_cfg.expected_nfe());
    report.note("n_avg", fe_cfg.n_avg);

    let mut out = OutputDir::create(&cfg.out)?;
    out.write_latent(&run.output, &mut report)?;
    out.finish(report, true)
}

pub fn cmd_equivalence(cfg: &ExperimentConfig) -> Result<CommandOutcome, HarnessError> {
    let field = cfg.build_field()?;
    let z0 = cfg.load_input()?;
    let (c_src, c_tar) = (cfg.src_condition()?, cfg.tar_condition()?);
    let eq = equivalence_check(
        field.as_ref(),
        &z0,
        &c_src,
        &c_tar,
        &cfg.schedule()?,
        cfg.seed,
        cfg.equivalence_tol,
    )?;

    let mut table = String::from("t\tdeviation\n");
    for (t, d) in &eq.deviations {
        writeln!(table, "{t:e}\t{d:e}").unwrap();
    }

    let mut report = MetricsReport::with_nfe(eq.flowedit_nfe + eq.rcf_nfe);
    report.note("flowedit_nfe", eq.flowedit_nfe);
    report.note("rcf_nfe", eq.rcf_nfe);
    report.note("max_deviation", format!("{:e}", eq.max_deviation));
    report.note("tol", format!("{:e}", eq.tol));
    report.note("equivalent", eq.passed);

    let mut out = OutputDir::create(&cfg.out)?;
    out.write("equivalence.txt", table)?;
    out.finish(report, eq.passed)
}

/// Runs the edit once per reuse interval (plus an `r = 1` baseline) and
/// reports how far each output drifts from the baseline.
pub fn cmd_sweep_reuse(cfg: &ExperimentConfig) -> Result<(CommandOutcome, Vec<SweepRow>), HarnessError> {
    let field = cfg.build_field()?;
    let z0 = cfg.load_input()?;
    let (c_src, c_tar) = (cfg.src_condition()?, cfg.tar_condition()?);
    let identity = c_src == c_tar;
    let mask = cfg.load_mask()?;
    let eps = sample_noise(cfg.seed, cfg.shape);
    let base_cfg = cfg.edit_config(mask)?;

    let mut rs = vec![1];
    for &r in &cfg.sweep_r_values {
        if !rs.contains(&r) {
            rs.push(r);
        }
    }

    let field = field.as_ref();
    let runs = std::thread::scope(|s| {
        let handles: Vec<_> = rs
            .iter()
            .map(|&r| {
                let ec = base_cfg.clone().with_reuse(r);
                let (z0, eps, c_src, c_tar) = (&z0, &eps, &c_src, &c_tar);
                s.spawn(move || run_edit(field, z0, c_src, c_tar, eps, &ec))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect::<crate::error::Result<Vec<_>>>()
    })?;

    let baseline = &runs[0].output;
    let scale = baseline.rms_diff(&z0)?;
    let mut rows = Vec::with_capacity(rs.len());
    for (&r, run) in rs.iter().zip(&runs) {
        let gap = run.output.rms_diff(baseline)?;
        rows.push(SweepRow {
            r,
            nfe: run.nfe,
            reuse_gap: gap,
            relative_gap: if scale > 0.0 { gap / scale } else { 0.0 },
            identity_error: if identity {
                Some(run.output.relative_error(&z0)?)
            } else {
                None
            },
        });
    }

    let mut tsv = String::from("r\tnfe\treuse_gap\trelative_gap\tidentity_error\n");
    for row in &rows {
        let ident = row.identity_error.map_or("-".to_string(), |e| format!("{e:e}"));
        writeln!(
            tsv,
            "{}\t{}\t{:e}\t{:e}\t{ident}",
            row.r, row.nfe, row.reuse_gap, row.relative_gap
        )
        .unwrap();
    }

    let swept: Vec<&SweepRow> = rows.iter().filter(|r| cfg.sweep_r_values.contains(&r.r)).collect();
    let mut report = MetricsReport::with_nfe(rows.iter().map(|r| r.nfe).sum());
    report.reuse_gap = swept.iter().map(|r| r.reuse_gap).reduce(f64::max);
    report.identity_error = swept.iter().filter_map(|r| r.identity_error).reduce(f64::max);
    report.note(
        "max_relative_gap",
        format!("{:e}", swept.iter().map(|r| r.relative_gap).fold(0.0, f64::max)),
    );
    report.note("baseline_edit_rms", format!("{scale:e}"));

    let mut out = OutputDir::create(&cfg.out)?;
    out.write("sweep.tsv", tsv)?;
    Ok((out.finish(report, true)?, rows))
}
