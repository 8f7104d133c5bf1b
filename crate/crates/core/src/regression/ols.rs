use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::ModelKind;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Named predictor columns. The intercept is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    rows: usize,
}

impl DesignMatrix {
    pub fn new(rows: usize) -> Self {
        DesignMatrix { names: Vec::new(), columns: Vec::new(), rows }
    }

    pub fn from_columns<S: Into<String>>(columns: Vec<(S, Vec<f64>)>) -> Result<Self> {
        let rows = columns.first().map_or(0, |(_, c)| c.len());
        let mut m = DesignMatrix::new(rows);
        for (name, col) in columns {
            m.push(name, col)?;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major data.
    pub fn from_rows<S: AsRef<str>>(names: &[S], rows: &[Vec<f64>]) -> Result<Self> {
        let mut m = DesignMatrix::new(rows.len());
        for (j, name) in names.iter().enumerate() {
            let mut col = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                if row.len() != names.len() {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i} has {} entries, expected {}",
                        row.len(),
                        names.len()
                    )));
                }
                col.push(row[j]);
            }
            m.push(name.as_ref(), col)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, name: impl Into<String>, column: Vec<f64>) -> Result<()> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(Error::InvalidMatrix(format!("duplicate column name '{name}'")));
        }
        if column.len() != self.rows {
            return Err(Error::InvalidMatrix(format!(
                "column '{name}' has {} rows, expected {}",
                column.len(),
                self.rows
            )));
        }
        if column.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("column '{name}' has non-finite entries")));
        }
        self.names.push(name);
        self.columns.push(column);
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|j| self.columns[j].as_slice())
    }

    /// A new matrix holding only the listed columns, in the given order.
    pub fn select(&self, indices: &[usize]) -> DesignMatrix {
        DesignMatrix {
            names: indices.iter().map(|&j| self.names[j].clone()).collect(),
            columns: indices.iter().map(|&j| self.columns[j].clone()).collect(),
            rows: self.rows,
        }
    }
}

/// Result of a least-squares fit with intercept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelFit {
    pub kind: Option<ModelKind>,
    pub predictors: Vec<String>,
    pub intercept: f64,
    pub slopes: Vec<f64>,
    pub r2: f64,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub n: usize,
    pub ss_res: f64,
    pub ss_tot: f64,
    /// Set when the response had zero variance; `r2` is then reported as 0.
    pub degenerate_variance: bool,
    /// Predictors that were constant over the data and left out of the fit.
    /// Their slopes are reported as 0.
    pub dropped: Vec<String>,
}

impl ModelFit {
    /// Residual degrees of freedom, counting only the predictors actually fitted.
    pub fn df_residual(&self) -> usize {
        self.n - self.fitted_params()
    }

    /// Intercept plus fitted slopes.
    pub fn fitted_params(&self) -> usize {
        1 + self.predictors.len() - self.dropped.len()
    }

    pub fn slope(&self, name: &str) -> Option<f64> {
        self.predictors.iter().position(|p| p == name).map(|j| self.slopes[j])
    }

    /// Observed responses, reconstructed as fitted value plus residual.
    pub fn observed(&self) -> Vec<f64> {
        self.fitted.iter().zip(&self.residuals).map(|(f, r)| f + r).collect()
    }

    /// Coefficients labelled `a, b, c, ...` in column order. The combined
    /// model is reported in its `a + b[c·ID_t + d·ID_r]` form with `b = 1`.
    pub fn coefficients(&self) -> Vec<(String, f64)> {
        let letters = ["a", "b", "c", "d", "e", "f", "g", "h"];
        let mut values = vec![self.intercept];
        if self.kind == Some(ModelKind::FinalModel) {
            values.push(1.0);
        }
        values.extend(&self.slopes);
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (letters.get(i).map_or_else(|| format!("k{i}"), |l| l.to_string()), v))
            .collect()
    }

    /// Line equation with coefficients to four decimals, e.g.
    /// `MT = 0.4000 + 0.3000·id_fitts`.
    pub fn equation(&self) -> String {
        let mut s = format!("MT = {:.4}", self.intercept);
        let terms: Vec<String> = self
            .predictors
            .iter()
            .zip(&self.slopes)
            .map(|(name, b)| {
                let sign = if b.is_sign_negative() { '-' } else { '+' };
                format!(" {sign} {:.4}·{name}", b.abs())
            })
            .collect();
        if self.kind == Some(ModelKind::FinalModel) {
            s.push_str(" + 1.0000·[");
            s.push_str(terms.join("").trim_start_matches(" + ").trim_start());
            s.push(']');
        } else {
            for t in terms {
                s.push_str(&t);
            }
        }
        s
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// A response counts as constant when its spread is below 1e-12 of its scale.
pub(crate) fn is_constant(v: &[f64]) -> bool {
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let scale = lo.abs().max(hi.abs()).max(1.0);
    v.is_empty() || hi - lo <= 1e-12 * scale
}

/// Ordinary least squares with an implicit intercept.
///
/// Predictor columns are centred (which absorbs the intercept) and scaled to
/// unit norm before a singular value decomposition, so the rank check is not
/// fooled by columns on very different scales.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<ModelFit> {
    let n = x.rows();
    let p = x.cols();
    if y.len() != n {
        return Err(Error::InvalidMatrix(format!("response has {} values, design has {n} rows", y.len())));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidMatrix("response has non-finite values".into()));
    }
    if n <= p || n == 0 {
        return Err(Error::InsufficientData { rows: n, params: p + 1 });
    }

    let y_mean = mean(y);
    let degenerate = is_constant(y);

    let mut slopes = vec![0.0; p];
    if p > 0 {
        let means: Vec<f64> = (0..p).map(|j| mean(x.column(j))).collect();
        let mut scales = vec![0.0; p];
        let mut centered = DMatrix::<f64>::zeros(n, p);
        for j in 0..p {
            let col = x.column(j);
            for i in 0..n {
                centered[(i, j)] = col[i] - means[j];
            }
            let norm = centered.column(j).norm();
            if norm == 0.0 {
                return Err(Error::RankDeficient);
            }
            scales[j] = norm;
            centered.column_mut(j).scale_mut(1.0 / norm);
        }

        let svd = centered.svd(true, true);
        let max_sv = svd.singular_values.max();
        let min_sv = svd.singular_values.min();
        if max_sv.is_nan() || max_sv <= 0.0 || min_sv < RANK_TOLERANCE * max_sv {
            return Err(Error::RankDeficient);
        }

        if !degenerate {
            let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
            let scaled = svd.solve(&yc, 0.0).map_err(|_| Error::RankDeficient)?;
            for j in 0..p {
                slopes[j] = scaled[j] / scales[j];
            }
        }
    }

    let intercept = y_mean - (0..p).map(|j| slopes[j] * mean(x.column(j))).sum::<f64>();
    let fitted: Vec<f64> =
        (0..n).map(|i| intercept + (0..p).map(|j| slopes[j] * x.column(j)[i]).sum::<f64>()).collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(o, f)| o - f).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = if degenerate { 0.0 } else { y.iter().map(|v| (v - y_mean).powi(2)).sum() };
    let r2 = if degenerate { 0.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };

    Ok(ModelFit {
        kind: None,
        predictors: x.names().to_vec(),
        intercept,
        slopes,
        r2,
        residuals,
        fitted,
        n,
        ss_res,
        ss_tot,
        degenerate_variance: degenerate,
        dropped: Vec::new(),
    })
}

/// Coefficient of determination `1 - SS_res / SS_tot` of `fit` against `y`.
pub fn r_squared(fit: &ModelFit, y: &[f64]) -> Result<f64> {
    if y.len() != fit.n {
        return Err(Error::InvalidMatrix(format!("response has {} values, fit has {}", y.len(), fit.n)));
    }
    if is_constant(y) {
        return Err(Error::DegenerateVariance);
    }
    let m = mean(y);
    let ss_tot: f64 = y.iter().map(|v| (v - m).powi(2)).sum();
    let ss_res: f64 = y.iter().zip(&fit.fitted).map(|(o, f)| (o - f).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}
