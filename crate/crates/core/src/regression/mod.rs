//! Least-squares fitting of movement-time models, partial F tests and
//! stepwise variable selection.

pub mod fdist;
pub mod fit;
pub mod ols;
pub mod stepwise;

pub use fdist::{beta_reg, f_cdf, f_sf};
pub use fit::{aggregate_conditions, compare_models, fit_model, model_observations, ComparisonRow, Condition};
pub use ols::{ols_fit, r_squared, DesignMatrix, ModelFit};
pub use stepwise::{partial_f_test, stepwise, Step, StepAction, StepwiseReport, P_ENTER, P_REMOVE};
