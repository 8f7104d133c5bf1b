//! Model-comparison reports, rendered as a text table or a JSON document.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::log::TrialLog;
use crate::metrics::ModelKind;
use crate::regression::{compare_models, model_observations, StepAction, StepwiseReport};
use crate::task::Trial;

pub const REPORT_SCHEMA: &str = "fitts3d.comparison";
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
}

/// One regression observation: the model's predictors and the response.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    pub predictors: Vec<f64>,
    pub mt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
    pub coefficients: Vec<Coefficient>,
    pub predictors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observations: Option<usize>,
    pub dropped: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Point>>,
}

impl ModelReport {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub schema: String,
    pub schema_version: u32,
    pub experiment: Option<String>,
    pub interaction: Option<String>,
    pub aggregate: bool,
    pub trials: usize,
    pub successful_trials: usize,
    /// Best r² first; failed models last.
    pub models: Vec<ModelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stepwise: Option<StepwiseReport>,
}

impl ComparisonReport {
    pub fn fitted_models(&self) -> impl Iterator<Item = &ModelReport> {
        self.models.iter().filter(|m| m.is_ok())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "experiment: {}  interaction: {}  trials: {} ({} successful)  aggregate: {}",
            self.experiment.as_deref().unwrap_or("-"),
            self.interaction.as_deref().unwrap_or("mixed"),
            self.trials,
            self.successful_trials,
            self.aggregate
        );
        if !self.models.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(s, "{:<4} {:<13} {:>7} {:>5}  equation", "rank", "model", "r2", "n");
            let mut rank = 0;
            for m in &self.models {
                if m.is_ok() {
                    rank += 1;
                    let _ = writeln!(
                        s,
                        "{:<4} {:<13} {:>7.4} {:>5}  {}",
                        rank,
                        m.model,
                        m.r2.unwrap_or(f64::NAN),
                        m.observations.unwrap_or(0),
                        m.equation.as_deref().unwrap_or("")
                    );
                    if !m.dropped.is_empty() {
                        let _ =
                            writeln!(s, "{:<4} {:<13} constant predictors left out: {}", "", "", m.dropped.join(", "));
                    }
                } else {
                    let _ = writeln!(
                        s,
                        "{:<4} {:<13} {:>7} {:>5}  error: {}",
                        "-",
                        m.model,
                        "-",
                        "-",
                        m.error.as_deref().unwrap_or("unknown")
                    );
                }
            }
        }
        if let Some(sw) = &self.stepwise {
            let _ = writeln!(s);
            s.push_str(&render_stepwise(sw));
        }
        s
    }
}

pub fn render_stepwise(sw: &StepwiseReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "stepwise selection (enter p < .05, remove p > .10)");
    for (i, step) in sw.steps.iter().enumerate() {
        let action = match step.action {
            StepAction::Enter => "enter",
            StepAction::Remove => "remove",
        };
        let _ = writeln!(
            s,
            "  step {:<2} {:<6} {:<8} F = {:<12.4} p = {:<10.3e} r2 = {:.4}",
            i + 1,
            action,
            step.variable,
            step.f,
            step.p,
            step.r2
        );
    }
    let _ = writeln!(s, "{:<10} {:>16} {:>10}", "variable", "contribution(%)", "selected");
    for (name, c) in &sw.contributions {
        let selected = if sw.selected.contains(name) { "yes" } else { "no" };
        let _ = writeln!(s, "{:<10} {:>16.1} {:>10}", name, c, selected);
    }
    let _ = writeln!(s, "final r2: {:.4}", sw.r2);
    s
}

/// Fits `kinds` to `trials` and assembles a ranked report. With
/// `include_points`, each fitted model carries its regression observations.
pub fn build_report(log: &TrialLog, kinds: &[ModelKind], aggregate: bool, include_points: bool) -> ComparisonReport {
    let trials: &[Trial] = &log.trials;
    let rows = compare_models(trials, kinds, aggregate);
    let models = rows
        .into_iter()
        .map(|row| match row.fit {
            Ok(fit) => {
                let points = if include_points {
                    model_observations(row.kind, trials, aggregate).ok().map(|(x, y)| {
                        (0..x.rows())
                            .map(|i| Point { predictors: (0..x.cols()).map(|j| x.column(j)[i]).collect(), mt: y[i] })
                            .collect()
                    })
                } else {
                    None
                };
                ModelReport {
                    model: row.kind.name().to_string(),
                    status: "ok".into(),
                    equation: Some(fit.equation()),
                    coefficients: fit
                        .coefficients()
                        .into_iter()
                        .map(|(name, value)| Coefficient { name, value })
                        .collect(),
                    predictors: fit.predictors.clone(),
                    r2: Some(fit.r2),
                    observations: Some(fit.n),
                    dropped: fit.dropped.clone(),
                    error: None,
                    points,
                }
            }
            Err(e) => ModelReport {
                model: row.kind.name().to_string(),
                status: "error".into(),
                equation: None,
                coefficients: Vec::new(),
                predictors: row.kind.predictor_names().iter().map(|s| s.to_string()).collect(),
                r2: None,
                observations: None,
                dropped: Vec::new(),
                error: Some(e),
                points: None,
            },
        })
        .collect();
    ComparisonReport {
        schema: REPORT_SCHEMA.into(),
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: log.experiment.clone(),
        interaction: log.interaction.map(|i| i.to_string()),
        aggregate,
        trials: trials.len(),
        successful_trials: trials.iter().filter(|t| t.success).count(),
        models,
        stepwise: None,
    }
}
