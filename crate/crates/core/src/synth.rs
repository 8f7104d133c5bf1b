//! Experiment grids and seeded synthetic trials.
//!
//! # Random stream
//!
//! Trials are generated per condition. Condition `i` (0-based, grid order)
//! of a run with seed `s` draws from a xoshiro256** generator seeded through
//! SplitMix64 with `mix(s ^ ((i + 1) * 0x9E3779B97F4A7C15))`, where `mix` is
//! the SplitMix64 output function. Each repetition consumes exactly three
//! 64-bit outputs `u1, u2, u3`, each mapped to `[0, 1)` as `(x >> 11) * 2^-53`:
//!
//! * `u1 < error_rate` marks the trial as an error;
//! * `z = sqrt(-2 ln(1 - u2)) * cos(2π u3)` is the standard normal deviate.
//!
//! A successful trial gets `max(mean + sd * z, 0.05)`; if that exceeds the
//! interaction timeout the trial becomes an error. Error trials record the
//! timeout as their movement time.

use std::fmt;
use std::str::FromStr;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{predictors_for, ModelKind};
use crate::task::{InteractionKind, TaskSpec, Trial};

/// Floor applied to noisy movement times, seconds.
pub const MIN_MT_S: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Experiment {
    /// Translation along one line.
    E1,
    /// Translation with directions and inclinations.
    E2,
    /// Rotation only.
    E3,
    /// Translation and rotation with directions and inclinations.
    E4,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [Experiment::E1, Experiment::E2, Experiment::E3, Experiment::E4];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::E1 => "e1",
            Experiment::E2 => "e2",
            Experiment::E3 => "e3",
            Experiment::E4 => "e4",
        }
    }

    pub fn repetitions(self) -> usize {
        match self {
            Experiment::E4 => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(Experiment::E1),
            "e2" => Ok(Experiment::E2),
            "e3" => Ok(Experiment::E3),
            "e4" => Ok(Experiment::E4),
            _ => Err(Error::Domain(format!("unknown experiment '{s}' (expected e1..e4)"))),
        }
    }
}

/// Factor levels of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Levels {
    pub object_size: &'static [f64],
    pub width: &'static [f64],
    pub separation: &'static [f64],
    pub direction: &'static [f64],
    pub inclination: &'static [f64],
    pub rotation: &'static [f64],
    pub tolerance: &'static [f64],
}

pub fn levels(id: Experiment) -> Levels {
    match id {
        Experiment::E1 => Levels {
            object_size: &[3.0, 4.0, 5.0],
            width: &[5.0, 7.5, 10.0, 12.5],
            separation: &[12.0, 24.0, 36.0, 48.0],
            direction: &[90.0],
            inclination: &[0.0],
            rotation: &[0.0],
            tolerance: &[0.0],
        },
        Experiment::E2 => Levels {
            object_size: &[5.0],
            width: &[5.0, 10.0],
            separation: &[12.0, 24.0],
            direction: &[0.0, 90.0, 180.0, 270.0],
            inclination: &[15.0, 30.0, 45.0],
            rotation: &[0.0],
            tolerance: &[0.0],
        },
        Experiment::E3 => Levels {
            object_size: &[4.0, 5.0],
            width: &[5.0, 10.0],
            separation: &[0.0],
            direction: &[0.0],
            inclination: &[0.0],
            rotation: &[15.0, 30.0, 45.0],
            tolerance: &[2.5, 5.0, 7.5, 10.0],
        },
        Experiment::E4 => Levels {
            object_size: &[4.0],
            width: &[4.0, 8.0],
            separation: &[12.0, 24.0],
            direction: &[0.0, 90.0],
            inclination: &[15.0, 30.0],
            rotation: &[30.0, 45.0],
            tolerance: &[7.5, 15.0],
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub id: Experiment,
    /// Conditions in Cartesian-product order (object size outermost,
    /// tolerance innermost), tagged as pointing tasks.
    pub variations: Vec<TaskSpec>,
    pub repetitions: usize,
}

impl ExperimentGrid {
    /// The grid's conditions re-tagged with `interaction`.
    pub fn tasks(&self, interaction: InteractionKind) -> impl Iterator<Item = TaskSpec> + '_ {
        self.variations.iter().map(move |t| TaskSpec { interaction, ..*t })
    }

    pub fn trial_count(&self) -> usize {
        self.variations.len() * self.repetitions
    }
}

pub fn build_grid(id: Experiment) -> ExperimentGrid {
    let l = levels(id);
    let mut variations = Vec::new();
    for &object_size in l.object_size {
        for &width in l.width {
            for &separation in l.separation {
                for &direction in l.direction {
                    for &inclination in l.inclination {
                        for &rotation in l.rotation {
                            for &tolerance in l.tolerance {
                                variations.push(TaskSpec {
                                    object_size,
                                    width,
                                    separation,
                                    direction,
                                    inclination,
                                    rotation,
                                    tolerance,
                                    interaction: InteractionKind::Pointing,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    ExperimentGrid { id, variations, repetitions: id.repetitions() }
}

/// A planted movement-time law plus the noise and error process around it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub kind: ModelKind,
    pub intercept: f64,
    /// One slope per predictor of `kind`, in predictor order.
    pub slopes: Vec<f64>,
    pub noise_sd: f64,
    pub error_rate: f64,
    pub seed: u64,
}

impl GroundTruth {
    pub fn predict(&self, task: &TaskSpec) -> Result<f64> {
        let p = predictors_for(self.kind, task)?;
        Ok(self.intercept + p.values().iter().zip(&self.slopes).map(|(x, b)| x * b).sum::<f64>())
    }

    pub fn validate(&self) -> Result<()> {
        if self.slopes.len() != self.kind.predictor_count() {
            return Err(Error::InvalidTruth(format!(
                "{} needs {} slopes, got {}",
                self.kind,
                self.kind.predictor_count(),
                self.slopes.len()
            )));
        }
        if !self.intercept.is_finite() || self.slopes.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidTruth("coefficients must be finite".into()));
        }
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return Err(Error::InvalidTruth("noise_sd must be >= 0".into()));
        }
        if !(0.0..1.0).contains(&self.error_rate) {
            return Err(Error::InvalidTruth("error_rate must be in [0, 1)".into()));
        }
        Ok(())
    }

    pub fn named_coefficients(&self) -> Vec<(String, f64)> {
        std::iter::once(("intercept".to_string(), self.intercept))
            .chain(self.kind.predictor_names().iter().map(|n| n.to_string()).zip(self.slopes.iter().copied()))
            .collect()
    }
}

/// Noise and error settings for [`generate_trials_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub noise_sd: f64,
    pub error_rate: f64,
    pub seed: u64,
}

fn splitmix_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the generator used for condition `index`.
pub fn condition_seed(seed: u64, index: usize) -> u64 {
    splitmix_mix(seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn unit(rng: &mut Xoshiro256StarStar) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Generates repetitions of every grid condition around an arbitrary mean
/// movement-time law.
pub fn generate_trials_with<F>(
    grid: &ExperimentGrid,
    interaction: InteractionKind,
    noise: NoiseModel,
    mut mean_mt: F,
) -> Result<Vec<Trial>>
where
    F: FnMut(&TaskSpec) -> Result<f64>,
{
    if !(noise.noise_sd.is_finite() && noise.noise_sd >= 0.0) {
        return Err(Error::InvalidTruth("noise_sd must be >= 0".into()));
    }
    if !(0.0..1.0).contains(&noise.error_rate) {
        return Err(Error::InvalidTruth("error_rate must be in [0, 1)".into()));
    }
    let timeout = interaction.timeout_s();
    let tasks: Vec<TaskSpec> = grid.tasks(interaction).collect();
    let mut means = Vec::with_capacity(tasks.len());
    for task in &tasks {
        let mu = mean_mt(task)?;
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidTruth(format!("predicted MT {mu} is not positive")));
        }
        means.push(mu);
    }

    let mut trials = Vec::with_capacity(tasks.len() * grid.repetitions);
    for (i, (task, mu)) in tasks.iter().zip(means).enumerate() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(condition_seed(noise.seed, i));
        for _ in 0..grid.repetitions {
            let u_error = unit(&mut rng);
            let u_radius = unit(&mut rng);
            let u_angle = unit(&mut rng);
            let z = (-2.0 * (-u_radius).ln_1p()).sqrt() * (std::f64::consts::TAU * u_angle).cos();
            let mt = (mu + noise.noise_sd * z).max(MIN_MT_S);
            let trial = if u_error < noise.error_rate || mt > timeout {
                Trial { task: *task, mt: timeout, success: false }
            } else {
                Trial { task: *task, mt, success: true }
            };
            trials.push(trial);
        }
    }
    Ok(trials)
}

/// Generates trials whose successful movement times follow `truth`.
pub fn generate_trials(grid: &ExperimentGrid, truth: &GroundTruth, interaction: InteractionKind) -> Result<Vec<Trial>> {
    truth.validate()?;
    let noise = NoiseModel { noise_sd: truth.noise_sd, error_rate: truth.error_rate, seed: truth.seed };
    generate_trials_with(grid, interaction, noise, |task| truth.predict(task))
}

/// Mean movement time, its spread and the error share reported for each
/// experiment and interaction.
pub fn reported_statistics(experiment: Experiment, interaction: InteractionKind) -> (f64, f64, f64) {
    use InteractionKind::*;
    match (experiment, interaction) {
        (Experiment::E1, Pointing) => (1.63, 0.40, 4.0 / 4800.0),
        (Experiment::E1, Manipulation) => (2.13, 0.45, 44.0 / 4800.0),
        (Experiment::E2, Pointing) => (1.47, 0.23, 3.0 / 4800.0),
        (Experiment::E2, Manipulation) => (2.11, 0.25, 60.0 / 4800.0),
        (Experiment::E3, Pointing) => (3.37, 1.51, 225.0 / 4800.0),
        (Experiment::E3, Manipulation) => (2.79, 0.67, 64.0 / 4800.0),
        (Experiment::E4, Pointing) => (2.71, 0.55, 120.0 / 4800.0),
        (Experiment::E4, Manipulation) => (3.10, 0.59, 82.0 / 4800.0),
    }
}

/// Intercept of the default planted law, seconds.
pub const DEFAULT_INTERCEPT_S: f64 = 0.3;

/// Share of the ID-driven time attributed to rotation in combined tasks.
fn rotation_share(interaction: InteractionKind) -> f64 {
    match interaction {
        InteractionKind::Pointing => 0.75,
        InteractionKind::Manipulation => 0.5,
    }
}

/// A combined-model ground truth whose grid-mean prediction equals the
/// reported mean movement time of `experiment` and `interaction`.
///
/// The intercept is fixed at [`DEFAULT_INTERCEPT_S`]; the remaining time is
/// split between the translational and rotational terms (all translational
/// without rotation, all rotational without translation). Noise and error
/// rate default to the reported spread and error share; the seed is 0.
pub fn paper_scale_defaults(experiment: Experiment, interaction: InteractionKind) -> GroundTruth {
    let (mean, sd, error_rate) = reported_statistics(experiment, interaction);
    let grid = build_grid(experiment);
    let n = grid.variations.len() as f64;
    let (mut mean_t, mut mean_r) = (0.0, 0.0);
    for task in grid.tasks(interaction) {
        let p = predictors_for(ModelKind::FinalModel, &task).expect("grid tasks are valid");
        mean_t += p.values()[0] / n;
        mean_r += p.values()[1] / n;
    }
    let budget = mean - DEFAULT_INTERCEPT_S;
    let share = match (mean_t > 0.0, mean_r > 0.0) {
        (true, true) => rotation_share(interaction),
        (false, true) => 1.0,
        _ => 0.0,
    };
    let slope_t = if mean_t > 0.0 { (1.0 - share) * budget / mean_t } else { 0.0 };
    let slope_r = if mean_r > 0.0 { share * budget / mean_r } else { 0.0 };
    GroundTruth {
        kind: ModelKind::FinalModel,
        intercept: DEFAULT_INTERCEPT_S,
        slopes: vec![slope_t, slope_r],
        noise_sd: sd,
        error_rate,
        seed: 0,
    }
}
