//! Residual-corrected flow editing for flow-matching generators.
//!
//! The crate covers the numerical pieces end to end: dense latent fields and
//! spatial frequency splits, an Euler flow sampler with evaluation counting,
//! the residual-corrected edit driver with masking, detail transfer and
//! residual reuse, a reference FlowEdit, analytic toy velocity fields, and the
//! experiment harness behind the `rcflow` binary.
//!
//! ```
//! use rcflow::toy::{point_field, ToyScene};
//! use rcflow::{run_edit, sample_noise, ConditionBundle, EditConfig, Schedule, Shape};
//!
//! let shape = Shape::new(1, 1, 8, 8)?;
//! let scene = ToyScene::new(shape);
//! let src = ConditionBundle::new(vec![1.0, 0.0, 0.3], vec![0.5, 0.5, 0.3]);
//! let tar = src.relit(vec![1.3, 1.0, 0.6]);
//! let z0 = scene.render(&src)?;
//!
//! let mask = scene.foreground_mask(&src.agnostic_params)?;
//! let config = EditConfig::new(Schedule::uniform(50)?, mask);
//! let report = run_edit(&point_field(scene), &z0, &src, &tar, &sample_noise(0, shape), &config)?;
//! assert_eq!(report.nfe, 55);
//! # Ok::<(), rcflow::Error>(())
//! ```

pub mod condition;
pub mod error;
pub mod flowedit;
pub mod freq;
pub mod harness;
pub mod latent;
pub mod noise;
pub mod rcf;
pub mod sampler;
pub mod schedule;
pub mod toy;

pub use condition::ConditionBundle;
pub use error::{Error, Result};
pub use flowedit::{equivalence_check, flowedit_run, EquivalenceReport, FlowEditConfig, FlowEditRun, NoiseMode};
pub use freq::{freq_decompose, hf_transfer, FreqSplit, SpectralSplitter};
pub use latent::{axpy, downsample_mask, lerp_noise, LatentField, Mask, Shape};
pub use noise::{sample_noise, sample_noise_at};
pub use rcf::{
    consistency_residual, residual_corrected_velocity, restoration_velocity, run_edit, EditConfig, EditReport,
};
pub use sampler::{euler_step, evaluate_counted, generate, NfeCounter, RunTrace, VelocityField};
pub use schedule::Schedule;
