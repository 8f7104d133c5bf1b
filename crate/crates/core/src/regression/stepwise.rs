use serde::Serialize;

use super::fdist::f_sf;
use super::ols::{is_constant, ols_fit, DesignMatrix, ModelFit};
use crate::error::{Error, Result};

/// Entry threshold on the partial-F p-value.
pub const P_ENTER: f64 = 0.05;
/// Removal threshold on the partial-F p-value.
pub const P_REMOVE: f64 = 0.10;
/// Candidates whose p-values differ by less than this are considered tied.
const P_TIE: f64 = 1e-12;

/// Partial F test of `reduced` against the larger `full` model.
///
/// Returns `(F, p)` with `p = P(F(Δdf, df_full) > F)`.
pub fn partial_f_test(full: &ModelFit, reduced: &ModelFit) -> Result<(f64, f64)> {
    if full.n != reduced.n {
        return Err(Error::InvalidNesting(format!("fits use {} and {} observations", full.n, reduced.n)));
    }
    if let Some(extra) = reduced.predictors.iter().find(|p| !full.predictors.contains(p)) {
        return Err(Error::InvalidNesting(format!("'{extra}' is not in the full model")));
    }
    let yf = full.observed();
    let yr = reduced.observed();
    let scale = yf.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if yf.iter().zip(&yr).any(|(a, b)| (a - b).abs() > 1e-9 * scale) {
        return Err(Error::InvalidNesting("fits were made on different responses".into()));
    }

    let p_full = full.fitted_params();
    let p_reduced = reduced.fitted_params();
    if p_full < p_reduced {
        return Err(Error::InvalidNesting("reduced model has more parameters".into()));
    }
    let delta_df = p_full - p_reduced;
    if delta_df == 0 {
        return Ok((0.0, 1.0));
    }
    let df_full = full.df_residual();
    if df_full == 0 {
        return Err(Error::InsufficientData { rows: full.n, params: p_full });
    }

    let gain = (reduced.ss_res - full.ss_res).max(0.0);
    let noise_floor = 1e-20 * (reduced.ss_res + full.ss_tot).max(f64::MIN_POSITIVE);
    if gain <= noise_floor {
        return Ok((0.0, 1.0));
    }
    if full.ss_res <= noise_floor {
        return Ok((f64::INFINITY, 0.0));
    }
    let f = (gain / delta_df as f64) / (full.ss_res / df_full as f64);
    Ok((f, f_sf(f, delta_df as f64, df_full as f64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepAction {
    Enter,
    Remove,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub action: StepAction,
    pub variable: String,
    pub f: f64,
    pub p: f64,
    /// r² of the model after this step.
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepwiseReport {
    pub steps: Vec<Step>,
    /// Selected variables in order of entry.
    pub selected: Vec<String>,
    /// Per candidate, the r² increment (in percent) at its last entry; zero
    /// for variables not in the final model. Listed in column order.
    pub contributions: Vec<(String, f64)>,
    /// Partial-F p-value of each selected variable in the final model.
    pub final_p_values: Vec<(String, f64)>,
    pub r2: f64,
}

impl StepwiseReport {
    pub fn contribution(&self, name: &str) -> Option<f64> {
        self.contributions.iter().find(|(n, _)| n == name).map(|(_, c)| *c)
    }
}

fn fit_subset(x: &DesignMatrix, y: &[f64], cols: &[usize]) -> Result<ModelFit> {
    ols_fit(&x.select(cols), y)
}

/// Forward selection with backward elimination on partial-F p-values.
///
/// Each round enters the candidate with the smallest p-value when it is
/// below [`P_ENTER`], then removes the included variable with the largest
/// p-value when it exceeds [`P_REMOVE`]. Stops when a round changes nothing.
/// Candidates that would make the design rank deficient are skipped.
pub fn stepwise(x: &DesignMatrix, y: &[f64]) -> Result<StepwiseReport> {
    let mut current = fit_subset(x, y, &[])?;
    let mut included: Vec<usize> = Vec::new();
    let mut contribution = vec![0.0; x.cols()];
    let mut steps = Vec::new();

    if !is_constant(y) {
        // Enter threshold below the removal threshold rules out cycling; the
        // cap only guards against pathological rounding.
        let max_rounds = 4 * x.cols() + 4;
        for _ in 0..max_rounds {
            let mut changed = false;

            let mut best: Option<(usize, f64, f64, ModelFit)> = None;
            for j in (0..x.cols()).filter(|j| !included.contains(j)) {
                let mut cols = included.clone();
                cols.push(j);
                let candidate = match fit_subset(x, y, &cols) {
                    Ok(fit) => fit,
                    Err(Error::RankDeficient) | Err(Error::InsufficientData { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let (f, p) = match partial_f_test(&candidate, &current) {
                    Ok(fp) => fp,
                    Err(Error::InsufficientData { .. }) => continue,
                    Err(e) => return Err(e),
                };
                if best.as_ref().is_none_or(|b| p < b.2 - P_TIE) {
                    best = Some((j, f, p, candidate));
                }
            }
            if let Some((j, f, p, fit)) = best {
                if p < P_ENTER {
                    contribution[j] = fit.r2 - current.r2;
                    steps.push(Step { action: StepAction::Enter, variable: x.names()[j].clone(), f, p, r2: fit.r2 });
                    included.push(j);
                    current = fit;
                    changed = true;
                }
            }

            let mut worst: Option<(usize, f64, f64, ModelFit)> = None;
            for (pos, &j) in included.iter().enumerate() {
                let mut cols = included.clone();
                cols.remove(pos);
                let reduced = fit_subset(x, y, &cols)?;
                let (f, p) = partial_f_test(&current, &reduced)?;
                if worst.as_ref().is_none_or(|w| p > w.2 + P_TIE) {
                    worst = Some((j, f, p, reduced));
                }
            }
            if let Some((j, f, p, reduced)) = worst {
                if p > P_REMOVE {
                    contribution[j] = 0.0;
                    steps.push(Step {
                        action: StepAction::Remove,
                        variable: x.names()[j].clone(),
                        f,
                        p,
                        r2: reduced.r2,
                    });
                    included.retain(|&k| k != j);
                    current = reduced;
                    changed = true;
                }
            }

            if !changed {
                break;
            }
        }
    }

    let mut final_p_values = Vec::with_capacity(included.len());
    for (pos, &j) in included.iter().enumerate() {
        let mut cols = included.clone();
        cols.remove(pos);
        let reduced = fit_subset(x, y, &cols)?;
        let (_, p) = partial_f_test(&current, &reduced)?;
        final_p_values.push((x.names()[j].clone(), p));
    }

    Ok(StepwiseReport {
        steps,
        selected: included.iter().map(|&j| x.names()[j].clone()).collect(),
        contributions: x.names().iter().zip(&contribution).map(|(n, c)| (n.clone(), 100.0 * c)).collect(),
        final_p_values,
        r2: current.r2,
    })
}
