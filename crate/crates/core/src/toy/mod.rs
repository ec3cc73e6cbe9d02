//! Synthetic scenes and closed-form velocity fields.

pub mod fields;
pub mod scene;

pub use fields::{
    constant_field, mixture_field, point_field, softmax, ConditionSwitch, ConstantField, MixtureDataset, MixtureField,
    PointField, SceneMixtureField,
};
pub use scene::{render_target, ToyScene, AGNOSTIC_ARITY, ILLUM_ARITY, STRUCTURAL_WEIGHT};
