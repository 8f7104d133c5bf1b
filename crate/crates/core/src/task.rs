//! Task and trial types, spherical target placement and the success
//! predicates used to score a placement.
//!
//! Conventions: positions are in centimetres, angles in degrees. World axes
//! are right-handed with `x` pointing to the user's right, `y` up and `z`
//! away from the user along the view axis.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::angle::{reduce_cube_symmetry, sin_cos_deg, wrap_deg};
use crate::error::{Error, Result};

/// Maximum time allowed for a pointing task before it counts as an error.
pub const POINTING_TIMEOUT_S: f64 = 15.0;
/// Maximum time allowed for a manipulation task before it counts as an error.
pub const MANIPULATION_TIMEOUT_S: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    /// The object is attached to the index fingertip.
    Pointing,
    /// The object is grasped and carried under simulated physics.
    Manipulation,
}

impl InteractionKind {
    pub fn timeout_s(self) -> f64 {
        match self {
            InteractionKind::Pointing => POINTING_TIMEOUT_S,
            InteractionKind::Manipulation => MANIPULATION_TIMEOUT_S,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InteractionKind::Pointing => "pointing",
            InteractionKind::Manipulation => "manipulation",
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InteractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pointing" => Ok(InteractionKind::Pointing),
            "manipulation" => Ok(InteractionKind::Manipulation),
            other => Err(Error::Domain(format!("unknown interaction '{other}' (expected pointing|manipulation)"))),
        }
    }
}

/// Which kinds of movement a task asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Translational,
    Rotational,
    Combined,
}

/// One experimental condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    /// Edge length of the manipulated cube, cm.
    pub object_size: f64,
    /// Edge length of the target volume, cm.
    pub width: f64,
    /// Centre-to-centre distance between start and target, cm.
    pub separation: f64,
    /// Azimuth of the start-to-target direction, degrees in `[0, 360)`.
    pub direction: f64,
    /// Elevation above the horizontal plane, degrees in `[0, 90]`.
    pub inclination: f64,
    /// Angular distance between object and target orientation, degrees.
    pub rotation: f64,
    /// Per-axis rotation tolerance, degrees.
    pub tolerance: f64,
    pub interaction: InteractionKind,
}

impl TaskSpec {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("object_size", self.object_size),
            ("width", self.width),
            ("separation", self.separation),
            ("direction", self.direction),
            ("inclination", self.inclination),
            ("rotation", self.rotation),
            ("tolerance", self.tolerance),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite")));
            }
        }
        if self.object_size <= 0.0 {
            return Err(Error::Domain("object size F must be > 0".into()));
        }
        if self.width <= 0.0 {
            return Err(Error::Domain("target width W must be > 0".into()));
        }
        if self.separation < 0.0 {
            return Err(Error::Domain("target separation A must be >= 0".into()));
        }
        if !(0.0..360.0).contains(&self.direction) {
            return Err(Error::Domain("direction phi must be in [0, 360)".into()));
        }
        if !(0.0..=90.0).contains(&self.inclination) {
            return Err(Error::Domain("inclination theta must be in [0, 90]".into()));
        }
        if self.rotation < 0.0 {
            return Err(Error::Domain("target rotation alpha must be >= 0".into()));
        }
        if self.tolerance < 0.0 {
            return Err(Error::Domain("rotation tolerance omega must be >= 0".into()));
        }
        Ok(())
    }

    /// A task has a rotational component when the target is rotated at all;
    /// a translational one when the target is displaced. A task with neither
    /// is treated as (degenerate) translational.
    pub fn regime(&self) -> Regime {
        match (self.separation > 0.0, self.rotation > 0.0) {
            (true, true) => Regime::Combined,
            (false, true) => Regime::Rotational,
            _ => Regime::Translational,
        }
    }

    /// Target centre relative to the object start position.
    pub fn target_offset(&self) -> Vector3<f64> {
        spherical_to_cartesian(self.separation, self.direction, self.inclination)
    }
}

/// A position plus per-axis rotation, the latter normalised to `(-180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vector3<f64>,
    pub rotation: Vector3<f64>,
}

impl Pose {
    pub fn new(position: Vector3<f64>, rotation: Vector3<f64>) -> Self {
        Pose { position, rotation: rotation.map(wrap_deg) }
    }

    pub fn at(position: Vector3<f64>) -> Self {
        Pose::new(position, Vector3::zeros())
    }
}

/// One observation: a condition, its movement time and whether it succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub task: TaskSpec,
    /// Movement time, seconds.
    pub mt: f64,
    pub success: bool,
}

impl Trial {
    pub fn validate(&self) -> Result<()> {
        self.task.validate()?;
        if !(self.mt.is_finite() && self.mt > 0.0) {
            return Err(Error::Domain("movement time must satisfy mt > 0".into()));
        }
        let timeout = self.task.interaction.timeout_s();
        if self.success && self.mt > timeout {
            return Err(Error::Domain(format!(
                "successful {} trial exceeds the {timeout} s timeout",
                self.task.interaction
            )));
        }
        Ok(())
    }
}

/// Reference points a separation can be measured between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceVariant {
    CenterCenter,
    EdgeCenter,
    EdgeEdge,
}

/// Offset of a target placed `separation` cm away at azimuth `direction` and
/// elevation `inclination` (both degrees).
///
/// `direction = 0` points along the view axis (`+z`), `90` to the right
/// (`+x`); positive `inclination` lifts the target (`+y`).
pub fn spherical_to_cartesian(separation: f64, direction: f64, inclination: f64) -> Vector3<f64> {
    let (sin_phi, cos_phi) = sin_cos_deg(direction);
    let (sin_theta, cos_theta) = sin_cos_deg(inclination);
    let horizontal = separation * cos_theta;
    Vector3::new(horizontal * sin_phi, separation * sin_theta, horizontal * cos_phi)
}

pub fn euclidean_distance(p: &Vector3<f64>, q: &Vector3<f64>) -> f64 {
    (p - q).norm()
}

/// Converts a separation measured under `variant` into the centre-to-centre
/// equivalent.
pub fn effective_separation(measured: f64, variant: DistanceVariant, width: f64, object_size: f64) -> f64 {
    match variant {
        DistanceVariant::CenterCenter => measured,
        DistanceVariant::EdgeCenter => measured + width / 2.0,
        DistanceVariant::EdgeEdge => measured + (width + object_size) / 2.0,
    }
}

/// Success when the object centre lies within `width / 2` of the target centre.
pub fn classify_translation(object: &Pose, target: &Pose, width: f64) -> bool {
    euclidean_distance(&object.position, &target.position) <= width / 2.0
}

/// Success when every axis is within `tolerance` degrees of the target after
/// accounting for the cube's 90° face symmetry.
pub fn classify_rotation(object: &Pose, target: &Pose, tolerance: f64) -> bool {
    (0..3).all(|i| {
        let diff = reduce_cube_symmetry(target.rotation[i] - object.rotation[i]);
        diff.abs() <= tolerance
    })
}

pub fn classify_combined(object: &Pose, target: &Pose, width: f64, tolerance: f64) -> bool {
    classify_translation(object, target, width) && classify_rotation(object, target, tolerance)
}
