//! Raw task variables as stepwise-regression candidates.

use std::fmt;
use std::str::FromStr;

use crate::angle::sin_deg;
use crate::error::{Error, Result};
use crate::regression::{aggregate_conditions, stepwise, DesignMatrix, StepwiseReport};
use crate::task::{TaskSpec, Trial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskVariable {
    ObjectSize,
    Width,
    Separation,
    Direction,
    Inclination,
    Rotation,
    Tolerance,
}

impl TaskVariable {
    pub const ALL: [TaskVariable; 7] = [
        TaskVariable::ObjectSize,
        TaskVariable::Width,
        TaskVariable::Separation,
        TaskVariable::Direction,
        TaskVariable::Inclination,
        TaskVariable::Rotation,
        TaskVariable::Tolerance,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            TaskVariable::ObjectSize => "F",
            TaskVariable::Width => "W",
            TaskVariable::Separation => "A",
            TaskVariable::Direction => "phi",
            TaskVariable::Inclination => "theta",
            TaskVariable::Rotation => "alpha",
            TaskVariable::Tolerance => "omega",
        }
    }

    fn raw(self, t: &TaskSpec) -> f64 {
        match self {
            TaskVariable::ObjectSize => t.object_size,
            TaskVariable::Width => t.width,
            TaskVariable::Separation => t.separation,
            TaskVariable::Direction => t.direction,
            TaskVariable::Inclination => t.inclination,
            TaskVariable::Rotation => t.rotation,
            TaskVariable::Tolerance => t.tolerance,
        }
    }
}

impl fmt::Display for TaskVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for TaskVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = match s.trim() {
            "F" | "f" => TaskVariable::ObjectSize,
            "W" | "w" => TaskVariable::Width,
            "A" | "a" => TaskVariable::Separation,
            "phi" => TaskVariable::Direction,
            "theta" => TaskVariable::Inclination,
            "alpha" => TaskVariable::Rotation,
            "omega" => TaskVariable::Tolerance,
            other => {
                return Err(Error::Domain(format!(
                    "unknown variable '{other}' (expected F, W, A, phi, theta, alpha, omega)"
                )))
            }
        };
        Ok(v)
    }
}

/// How candidate columns are derived from task variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transforms {
    /// Enter the direction as `sin(phi)` (the default) rather than raw degrees.
    pub sin_direction: bool,
}

impl Default for Transforms {
    fn default() -> Self {
        Transforms { sin_direction: true }
    }
}

impl Transforms {
    pub fn column_name(&self, v: TaskVariable) -> &'static str {
        match v {
            TaskVariable::Direction if self.sin_direction => "sin_phi",
            _ => v.symbol(),
        }
    }

    pub fn value(&self, v: TaskVariable, t: &TaskSpec) -> f64 {
        match v {
            TaskVariable::Direction if self.sin_direction => sin_deg(t.direction),
            _ => v.raw(t),
        }
    }
}

/// Design matrix of candidate variables plus the response, per condition
/// mean (`aggregate`) or per successful trial.
pub fn candidate_design(
    trials: &[Trial],
    variables: &[TaskVariable],
    transforms: Transforms,
    aggregate: bool,
) -> Result<(DesignMatrix, Vec<f64>)> {
    for (i, v) in variables.iter().enumerate() {
        if variables[..i].contains(v) {
            return Err(Error::Domain(format!("duplicate candidate variable '{v}'")));
        }
    }
    let rows: Vec<(TaskSpec, f64)> = if aggregate {
        aggregate_conditions(trials)?.into_iter().map(|c| (c.task, c.mean_mt)).collect()
    } else {
        trials.iter().filter(|t| t.success).map(|t| (t.task, t.mt)).collect()
    };
    let mut x = DesignMatrix::new(rows.len());
    for &v in variables {
        x.push(transforms.column_name(v), rows.iter().map(|(t, _)| transforms.value(v, t)).collect())?;
    }
    Ok((x, rows.into_iter().map(|(_, y)| y).collect()))
}

/// Stepwise selection over task variables.
pub fn stepwise_variables(
    trials: &[Trial],
    variables: &[TaskVariable],
    transforms: Transforms,
    aggregate: bool,
) -> Result<StepwiseReport> {
    let (x, y) = candidate_design(trials, variables, transforms, aggregate)?;
    stepwise(&x, &y)
}
