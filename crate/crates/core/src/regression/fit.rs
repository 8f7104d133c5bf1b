use serde::Serialize;

use super::ols::{is_constant, ols_fit, DesignMatrix, ModelFit};
use crate::error::{Error, Result};
use crate::metrics::{predictors_for, ModelKind};
use crate::task::{TaskSpec, Trial};

/// Successful-trial observations grouped by condition, in first-seen order.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub task: TaskSpec,
    pub mean_mt: f64,
    pub successes: usize,
    pub trials: usize,
}

fn same_condition(a: &TaskSpec, b: &TaskSpec) -> bool {
    let bits = |t: &TaskSpec| {
        [
            t.object_size.to_bits(),
            t.width.to_bits(),
            t.separation.to_bits(),
            t.direction.to_bits(),
            t.inclination.to_bits(),
            t.rotation.to_bits(),
            t.tolerance.to_bits(),
        ]
    };
    bits(a) == bits(b) && a.interaction == b.interaction
}

/// Averages successful movement times per condition. Error trials are
/// excluded; a condition with no successful trial is an error.
pub fn aggregate_conditions(trials: &[Trial]) -> Result<Vec<Condition>> {
    let mut groups: Vec<(TaskSpec, f64, usize, usize)> = Vec::new();
    for trial in trials {
        let idx = match groups.iter().position(|g| same_condition(&g.0, &trial.task)) {
            Some(i) => i,
            None => {
                groups.push((trial.task, 0.0, 0, 0));
                groups.len() - 1
            }
        };
        let g = &mut groups[idx];
        g.3 += 1;
        if trial.success {
            g.1 += trial.mt;
            g.2 += 1;
        }
    }
    groups
        .into_iter()
        .map(|(task, sum, successes, count)| {
            if successes == 0 {
                return Err(Error::EmptyCondition(describe(&task)));
            }
            Ok(Condition { task, mean_mt: sum / successes as f64, successes, trials: count })
        })
        .collect()
}

fn describe(t: &TaskSpec) -> String {
    format!(
        "F={} W={} A={} phi={} theta={} alpha={} omega={} ({})",
        t.object_size, t.width, t.separation, t.direction, t.inclination, t.rotation, t.tolerance, t.interaction
    )
}

fn count_conditions(trials: &[Trial]) -> usize {
    let mut seen: Vec<&TaskSpec> = Vec::new();
    for t in trials {
        if !seen.iter().any(|s| same_condition(s, &t.task)) {
            seen.push(&t.task);
        }
    }
    seen.len()
}

/// Regression inputs for `kind`: one row per condition mean when
/// `aggregate` is set, otherwise one row per successful trial.
pub fn model_observations(kind: ModelKind, trials: &[Trial], aggregate: bool) -> Result<(DesignMatrix, Vec<f64>)> {
    let rows: Vec<(TaskSpec, f64)> = if aggregate {
        aggregate_conditions(trials)?.into_iter().map(|c| (c.task, c.mean_mt)).collect()
    } else {
        trials.iter().filter(|t| t.success).map(|t| (t.task, t.mt)).collect()
    };
    let names = kind.predictor_names();
    let mut values = Vec::with_capacity(rows.len());
    let mut y = Vec::with_capacity(rows.len());
    for (task, mt) in &rows {
        values.push(predictors_for(kind, task)?.values().to_vec());
        y.push(*mt);
    }
    Ok((DesignMatrix::from_rows(names, &values)?, y))
}

/// Fits one movement-time model to trial data.
///
/// Predictors that are constant over the data (for instance `sin(phi)` when
/// every target lies in the same direction) cannot be separated from the
/// intercept; they are left out and reported with a zero slope.
pub fn fit_model(kind: ModelKind, trials: &[Trial], aggregate: bool) -> Result<ModelFit> {
    let successful: Vec<Trial> = trials.iter().filter(|t| t.success).copied().collect();
    let conditions = count_conditions(&successful);
    if conditions < 2 {
        return Err(Error::InsufficientData { rows: conditions, params: kind.predictor_count() + 1 });
    }
    let (x, y) = model_observations(kind, trials, aggregate)?;

    let keep: Vec<usize> = (0..x.cols()).filter(|&j| !is_constant(x.column(j))).collect();
    let reduced = x.select(&keep);
    let fit = ols_fit(&reduced, &y)?;

    let mut slopes = vec![0.0; x.cols()];
    for (k, &j) in keep.iter().enumerate() {
        slopes[j] = fit.slopes[k];
    }
    let dropped = (0..x.cols()).filter(|j| !keep.contains(j)).map(|j| x.names()[j].clone()).collect();
    Ok(ModelFit { kind: Some(kind), predictors: x.names().to_vec(), slopes, dropped, ..fit })
}

/// One model's outcome in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub kind: ModelKind,
    pub fit: std::result::Result<ModelFit, String>,
}

impl ComparisonRow {
    pub fn r2(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.r2)
    }
}

/// Fits every requested model and ranks them by r², best first. Ties keep
/// declaration order; models that fail to fit are listed last with their
/// error.
pub fn compare_models(trials: &[Trial], kinds: &[ModelKind], aggregate: bool) -> Vec<ComparisonRow> {
    let mut unique: Vec<ModelKind> = kinds.to_vec();
    unique.sort();
    unique.dedup();
    let mut rows: Vec<ComparisonRow> = unique
        .into_iter()
        .map(|kind| ComparisonRow { kind, fit: fit_model(kind, trials, aggregate).map_err(|e| e.to_string()) })
        .collect();
    rows.sort_by(|a, b| match (a.r2(), b.r2()) {
        (Some(x), Some(y)) => y.total_cmp(&x).then(a.kind.cmp(&b.kind)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.kind.cmp(&b.kind),
    });
    rows
}
