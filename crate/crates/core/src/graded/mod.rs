//! Graded signatures, homogeneity structures, weight vector fields and the
//! real homogenizer.

pub mod action;
pub mod field;
pub mod homogenize;
pub mod signature;

pub use action::{standard_homothety, verify_action, ActionFamily, Law, Monoid, Side, Verdict};
pub use field::{
    field_weight, flow_nilpotent, lie_bracket, lie_series_flow, standard_weight_field,
    weight_field, VectorField,
};
pub use homogenize::{
    check_morphism, core_extract, homogenize_real, tower_truncate, Homogenization, MorphismReport,
};
pub use signature::{GradedSignature, VarDecl};
