//! Index-of-difficulty formulas and the predictor vectors each movement-time
//! model is regressed on.
//!
//! Every model maps a [`TaskSpec`] onto a fixed list of named regressors.
//! Single-ID models have one regressor; the directional models carry their
//! angle terms as separately weighted columns; the combined model carries
//! translation and rotation difficulty as two columns.
//!
//! For tasks with rotation, the classic models are evaluated with the target
//! rotation standing in for the separation and the tolerance standing in for
//! the width. Models that include the object size have no rotational analog
//! for it, so their rotational form drops it. For combined tasks the prior
//! models use the sum of the translational and rotational IDs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::sin_deg;
use crate::error::{domain, Error, Result};
use crate::task::{Regime, TaskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    Fitts,
    Hoffmann,
    Welford,
    Shannon,
    MurataIwase,
    ChaMyung,
    FinalModel,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Fitts,
        ModelKind::Hoffmann,
        ModelKind::Welford,
        ModelKind::Shannon,
        ModelKind::MurataIwase,
        ModelKind::ChaMyung,
        ModelKind::FinalModel,
    ];

    /// Regressor names, in column order.
    pub fn predictor_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Fitts => &["id_fitts"],
            ModelKind::Hoffmann => &["id_hoffmann"],
            ModelKind::Welford => &["id_welford"],
            ModelKind::Shannon => &["id_shannon"],
            ModelKind::MurataIwase => &["id_shannon", "sin_phi"],
            ModelKind::ChaMyung => &["theta1", "sin_theta2", "id_hoffmann"],
            ModelKind::FinalModel => &["id_t", "id_r"],
        }
    }

    pub fn predictor_count(self) -> usize {
        self.predictor_names().len()
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Fitts => "fitts",
            ModelKind::Hoffmann => "hoffmann",
            ModelKind::Welford => "welford",
            ModelKind::Shannon => "shannon",
            ModelKind::MurataIwase => "murata-iwase",
            ModelKind::ChaMyung => "cha-myung",
            ModelKind::FinalModel => "final",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' ', '&'], "-");
        let kind = match key.as_str() {
            "fitts" => ModelKind::Fitts,
            "hoffmann" => ModelKind::Hoffmann,
            "welford" => ModelKind::Welford,
            "shannon" => ModelKind::Shannon,
            "murata-iwase" | "murata" | "murataiwase" => ModelKind::MurataIwase,
            "cha-myung" | "cha" | "chamyung" => ModelKind::ChaMyung,
            "final" | "finalmodel" | "final-model" => ModelKind::FinalModel,
            _ => return Err(domain(format!("unknown model '{s}'"))),
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdKind {
    Translation,
    Rotation,
    Combined,
}

/// An index of difficulty in bits. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdValue {
    pub bits: f64,
    pub kind: IdKind,
}

impl IdValue {
    fn checked(bits: f64, kind: IdKind) -> Result<Self> {
        if bits.is_finite() {
            Ok(IdValue { bits, kind })
        } else {
            Err(domain("index of difficulty is not finite"))
        }
    }
}

/// Named regressors for one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorVector {
    names: &'static [&'static str],
    values: Vec<f64>,
}

impl PredictorVector {
    fn new(kind: ModelKind, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), kind.predictor_count());
        PredictorVector { names: kind.predictor_names(), values }
    }

    pub fn names(&self) -> &'static [&'static str] {
        self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| *n == name).map(|i| self.values[i])
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite")))
    }
}

/// `log2(2A / W)`.
pub fn id_fitts(a: f64, w: f64) -> Result<IdValue> {
    finite("A", a)?;
    finite("W", w)?;
    if a <= 0.0 {
        return Err(domain("Fitts ID requires A > 0"));
    }
    if w <= 0.0 {
        return Err(domain("Fitts ID requires W > 0"));
    }
    IdValue::checked((2.0 * a / w).log2(), IdKind::Translation)
}

/// `log2(2A / (W + F))`.
pub fn id_hoffmann(a: f64, w: f64, f: f64) -> Result<IdValue> {
    finite("A", a)?;
    finite("W", w)?;
    finite("F", f)?;
    if a <= 0.0 {
        return Err(domain("Hoffmann ID requires A > 0"));
    }
    if w + f <= 0.0 {
        return Err(domain("Hoffmann ID requires W + F > 0"));
    }
    IdValue::checked((2.0 * a / (w + f)).log2(), IdKind::Translation)
}

/// `log2(A / W + 0.5)`.
pub fn id_welford(a: f64, w: f64) -> Result<IdValue> {
    finite("A", a)?;
    finite("W", w)?;
    if w <= 0.0 {
        return Err(domain("Welford ID requires W > 0"));
    }
    if a < 0.0 {
        return Err(domain("Welford ID requires A >= 0"));
    }
    IdValue::checked((a / w + 0.5).log2(), IdKind::Translation)
}

/// `log2(A / W + 1)`.
pub fn id_shannon(a: f64, w: f64) -> Result<IdValue> {
    finite("A", a)?;
    finite("W", w)?;
    if w <= 0.0 {
        return Err(domain("Shannon ID requires W > 0"));
    }
    if a < 0.0 {
        return Err(domain("Shannon ID requires A >= 0"));
    }
    IdValue::checked((a / w + 1.0).log2(), IdKind::Translation)
}

/// `[log2(A/W + 1), sin(phi)]`.
pub fn predictors_murata(a: f64, w: f64, phi: f64) -> Result<PredictorVector> {
    finite("phi", phi)?;
    let id = id_shannon(a, w)?;
    Ok(PredictorVector::new(ModelKind::MurataIwase, vec![id.bits, sin_deg(phi)]))
}

/// `[theta1, sin(theta2), log2(2A/(W+F))]` with `theta1` the inclination in
/// degrees and `theta2` the azimuth.
pub fn predictors_cha_myung(a: f64, w: f64, f: f64, theta1: f64, theta2: f64) -> Result<PredictorVector> {
    finite("theta1", theta1)?;
    finite("theta2", theta2)?;
    let id = id_hoffmann(a, w, f)?;
    Ok(PredictorVector::new(ModelKind::ChaMyung, vec![theta1, sin_deg(theta2), id.bits]))
}

/// Translational difficulty of the combined model: `log2(2A/(F+W) + 1)`.
pub fn id_t_final(a: f64, w: f64, f: f64) -> Result<IdValue> {
    finite("A", a)?;
    finite("W", w)?;
    finite("F", f)?;
    if w + f <= 0.0 {
        return Err(domain("translation ID requires W + F > 0"));
    }
    if a < 0.0 {
        return Err(domain("translation ID requires A >= 0"));
    }
    IdValue::checked((2.0 * a / (f + w) + 1.0).log2(), IdKind::Translation)
}

/// Rotational difficulty of the combined model: `log2(2α/ω² + 1)`, with both
/// angles in degrees.
pub fn id_r_final(alpha: f64, omega: f64) -> Result<IdValue> {
    finite("alpha", alpha)?;
    finite("omega", omega)?;
    if omega <= 0.0 {
        return Err(domain("rotation ID requires omega > 0"));
    }
    if alpha < 0.0 {
        return Err(domain("rotation ID requires alpha >= 0"));
    }
    IdValue::checked((2.0 * alpha / (omega * omega) + 1.0).log2(), IdKind::Rotation)
}

/// A classic model's translational ID evaluated on rotation quantities
/// (`A := alpha`, `W := omega`). Object size has no rotational analog and is
/// dropped, so Hoffmann and Cha-Myung reduce to the Fitts form.
pub fn id_rot_adapted(kind: ModelKind, alpha: f64, omega: f64) -> Result<IdValue> {
    let id = match kind {
        ModelKind::Fitts | ModelKind::Hoffmann | ModelKind::ChaMyung => id_fitts(alpha, omega)?,
        ModelKind::Welford => id_welford(alpha, omega)?,
        ModelKind::Shannon | ModelKind::MurataIwase => id_shannon(alpha, omega)?,
        ModelKind::FinalModel => return id_r_final(alpha, omega),
    };
    Ok(IdValue { bits: id.bits, kind: IdKind::Rotation })
}

/// The translational ID used by each classic model.
fn translation_id(kind: ModelKind, task: &TaskSpec) -> Result<f64> {
    let (a, w, f) = (task.separation, task.width, task.object_size);
    let id = match kind {
        ModelKind::Fitts => id_fitts(a, w)?,
        ModelKind::Hoffmann | ModelKind::ChaMyung => id_hoffmann(a, w, f)?,
        ModelKind::Welford => id_welford(a, w)?,
        ModelKind::Shannon | ModelKind::MurataIwase => id_shannon(a, w)?,
        ModelKind::FinalModel => id_t_final(a, w, f)?,
    };
    Ok(id.bits)
}

/// The ID term of a classic model for the task's regime: translational,
/// rotational, or their sum for combined tasks.
fn regime_id(kind: ModelKind, task: &TaskSpec) -> Result<f64> {
    match task.regime() {
        Regime::Translational => translation_id(kind, task),
        Regime::Rotational => Ok(id_rot_adapted(kind, task.rotation, task.tolerance)?.bits),
        Regime::Combined => {
            let t = translation_id(kind, task)?;
            let r = id_rot_adapted(kind, task.rotation, task.tolerance)?.bits;
            Ok(t + r)
        }
    }
}

/// Builds the regressors `kind` uses for `task`.
pub fn predictors_for(kind: ModelKind, task: &TaskSpec) -> Result<PredictorVector> {
    let values = match kind {
        ModelKind::Fitts | ModelKind::Hoffmann | ModelKind::Welford | ModelKind::Shannon => {
            vec![regime_id(kind, task)?]
        }
        ModelKind::MurataIwase => {
            finite("phi", task.direction)?;
            vec![regime_id(kind, task)?, sin_deg(task.direction)]
        }
        ModelKind::ChaMyung => {
            finite("theta", task.inclination)?;
            finite("phi", task.direction)?;
            vec![task.inclination, sin_deg(task.direction), regime_id(kind, task)?]
        }
        ModelKind::FinalModel => {
            let id_t = id_t_final(task.separation, task.width, task.object_size)?.bits;
            // No rotation asked for: the rotational term vanishes even when no
            // tolerance is defined.
            let id_r = if task.rotation == 0.0 { 0.0 } else { id_r_final(task.rotation, task.tolerance)?.bits };
            vec![id_t, id_r]
        }
    };
    Ok(PredictorVector::new(kind, values))
}
