//! Hand retargeting: joint angles between bone vectors, PD joint torques
//! and a saturated proportional velocity command for the palm.

use nalgebra::Vector3;

use crate::angle::wrap_deg;
use crate::error::{Error, Result};
use crate::task::Pose;

/// Bones shorter than this are rejected.
pub const MIN_BONE_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BonePair {
    /// Child bone direction.
    pub bone: Vector3<f64>,
    /// Parent bone direction.
    pub parent: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    pub kp: f64,
    pub kd: f64,
    /// Radians.
    pub desired: f64,
    /// Radians.
    pub current: f64,
    /// Radians per second.
    pub velocity: f64,
}

/// Angle in `[0, π]` between a bone and its parent.
pub fn joint_angle(pair: &BonePair) -> Result<f64> {
    let nb = pair.bone.norm();
    let np = pair.parent.norm();
    for n in [nb, np] {
        if n.is_nan() || n <= MIN_BONE_NORM {
            return Err(Error::DegenerateBone(n));
        }
    }
    let cos = (pair.bone.dot(&pair.parent) / (nb * np)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

/// `kp (desired - current) - kd velocity`.
pub fn pd_torque(state: &JointState) -> f64 {
    state.kp * (state.desired - state.current) - state.kd * state.velocity
}

/// Linear (cm/s) and angular (deg/s) velocity driving `current` towards
/// `target`, each component clamped to `±max_speed`.
///
/// Angular error per axis is the shortest signed difference in `(-180, 180]`.
pub fn palm_velocity_command(current: &Pose, target: &Pose, gain: f64, max_speed: f64) -> [f64; 6] {
    let linear = (target.position - current.position) * gain;
    let angular = (target.rotation - current.rotation).map(wrap_deg) * gain;
    let mut out = [0.0; 6];
    for i in 0..3 {
        out[i] = linear[i].clamp(-max_speed, max_speed);
        out[i + 3] = angular[i].clamp(-max_speed, max_speed);
    }
    out
}
