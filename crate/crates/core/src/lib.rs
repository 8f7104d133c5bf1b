//! Movement-time models for 3D pointing and manipulation tasks.
//!
//! The crate covers the whole pipeline from task geometry to model
//! comparison:
//!
//! * [`task`]: task and trial types, target placement, success predicates;
//! * [`metrics`]: index-of-difficulty formulas and per-model predictors;
//! * [`regression`]: least squares, F tests, stepwise selection, model fits;
//! * [`synth`]: experiment grids and seeded synthetic trials;
//! * [`retarget`]: joint angles and PD torques for hand retargeting;
//! * [`log`] and [`report`]: CSV trial logs and comparison reports.

pub mod angle;
pub mod error;
pub mod log;
pub mod metrics;
pub mod regression;
pub mod report;
pub mod retarget;
pub mod synth;
pub mod task;
pub mod variables;

pub use nalgebra;

pub use error::{Error, Result};
pub use metrics::{IdKind, IdValue, ModelKind, PredictorVector};
pub use regression::{DesignMatrix, ModelFit, StepwiseReport};
pub use synth::{Experiment, ExperimentGrid, GroundTruth};
pub use task::{DistanceVariant, InteractionKind, Pose, TaskSpec, Trial};
