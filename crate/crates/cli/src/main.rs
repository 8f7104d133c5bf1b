use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use fitts3d::log::{read_trials_file, write_trials, TrialLog};
use fitts3d::nalgebra::Vector3;
use fitts3d::report::{build_report, render_stepwise, ComparisonReport};
use fitts3d::synth::{build_grid, generate_trials, paper_scale_defaults};
use fitts3d::task::{classify_rotation, classify_translation};
use fitts3d::variables::{stepwise_variables, TaskVariable, Transforms};
use fitts3d::{Experiment, InteractionKind, ModelKind, Pose, StepwiseReport};

/// Movement-time models for 3D pointing and manipulation.
#[derive(Debug, Parser)]
#[command(name = "fitts3d", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic trial log for one experiment grid.
    Generate(GenerateArgs),
    /// Check whether an object pose satisfies a target.
    Classify(ClassifyArgs),
    /// Fit the requested models to a trial log.
    Fit(FitArgs),
    /// Fit every model (or the requested ones) and rank them by r².
    Compare(FitArgs),
    /// Stepwise selection over raw task variables.
    Stepwise(StepwiseArgs),
    /// Model comparison followed by stepwise selection.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    #[value(name = "json-like", alias = "json")]
    JsonLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Translation,
    Rotation,
    Combined,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_from_str::<Experiment>)]
    experiment: Experiment,
    #[arg(long, default_value = "pointing", value_parser = parse_from_str::<InteractionKind>)]
    interaction: InteractionKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Planted model; defaults to the combined model.
    #[arg(long, value_parser = parse_from_str::<ModelKind>, requires = "coef")]
    model: Option<ModelKind>,
    /// Planted coefficients, intercept first, then one slope per predictor.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    coef: Option<Vec<f64>>,
    /// Standard deviation of movement-time noise, seconds.
    #[arg(long)]
    noise_sd: Option<f64>,
    /// Share of trials that fail.
    #[arg(long)]
    error_rate: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Object position x,y,z in cm.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    object: Vector3<f64>,
    /// Object rotation about x,y,z in degrees.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
    object_rotation: Vector3<f64>,
    /// Target position x,y,z in cm.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    target: Vector3<f64>,
    /// Target rotation about x,y,z in degrees.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
    target_rotation: Vector3<f64>,
    /// Target width W in cm.
    #[arg(long)]
    width: f64,
    /// Rotation tolerance in degrees.
    #[arg(long, default_value_t = 0.0)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "combined")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Trial log in CSV form.
    #[arg(long = "in")]
    input: PathBuf,
    /// Fit per-condition mean movement times rather than single trials.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    aggregate: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated model names; all models when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_from_str::<ModelKind>)]
    models: Vec<ModelKind>,
    /// Include the regression observations of each model.
    #[arg(long)]
    points: bool,
}

#[derive(Debug, Args)]
struct CandidateArgs {
    /// Comma-separated candidates from F, W, A, phi, theta, alpha, omega.
    #[arg(long, value_delimiter = ',', value_parser = parse_from_str::<TaskVariable>)]
    candidates: Vec<TaskVariable>,
    /// Enter the direction in raw degrees instead of its sine.
    #[arg(long)]
    raw_phi: bool,
}

#[derive(Debug, Args)]
struct StepwiseArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    candidates: CandidateArgs,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_from_str::<ModelKind>)]
    models: Vec<ModelKind>,
    #[command(flatten)]
    candidates: CandidateArgs,
    #[arg(long)]
    points: bool,
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn parse_vec3(s: &str) -> Result<Vector3<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got '{s}'"));
    }
    let mut v = Vector3::zeros();
    for (i, p) in parts.iter().enumerate() {
        let x: f64 = p.trim().parse().map_err(|_| format!("'{p}' is not a number"))?;
        if !x.is_finite() {
            return Err(format!("'{p}' is not finite"));
        }
        v[i] = x;
    }
    Ok(v)
}

/// Failure after the arguments were accepted; exits with status 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn usage_error(kind: ErrorKind, msg: impl std::fmt::Display) -> ! {
    Cli::command().error(kind, msg).exit()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load(input: &InputArgs) -> Result<TrialLog, Failure> {
    let log = read_trials_file(&input.input)?;
    for w in &log.warnings {
        eprintln!("warning: {w}");
    }
    Ok(log)
}

fn render(report: &ComparisonReport, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Table => report.render_table(),
        Format::JsonLike => report.to_json()? + "\n",
    })
}

fn checked_candidates(args: &CandidateArgs) -> Vec<TaskVariable> {
    if args.candidates.is_empty() {
        return TaskVariable::ALL.to_vec();
    }
    for (i, v) in args.candidates.iter().enumerate() {
        if args.candidates[..i].contains(v) {
            usage_error(ErrorKind::ValueValidation, format!("candidate '{v}' is listed more than once"));
        }
    }
    args.candidates.clone()
}

fn models_or_all(models: &[ModelKind]) -> Vec<ModelKind> {
    if models.is_empty() {
        ModelKind::ALL.to_vec()
    } else {
        models.to_vec()
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    let mut truth = paper_scale_defaults(args.experiment, args.interaction);
    truth.seed = args.seed;
    if let Some(kind) = args.model {
        truth.kind = kind;
    }
    if let Some(coef) = &args.coef {
        if coef.len() != truth.kind.predictor_count() + 1 {
            usage_error(
                ErrorKind::ValueValidation,
                format!(
                    "model {} takes {} coefficients (intercept and {} slopes), got {}",
                    truth.kind,
                    truth.kind.predictor_count() + 1,
                    truth.kind.predictor_count(),
                    coef.len()
                ),
            );
        }
        truth.intercept = coef[0];
        truth.slopes = coef[1..].to_vec();
    }
    if let Some(sd) = args.noise_sd {
        truth.noise_sd = sd;
    }
    if let Some(rate) = args.error_rate {
        truth.error_rate = rate;
    }
    let grid = build_grid(args.experiment);
    let trials = generate_trials(&grid, &truth, args.interaction)?;
    let mut buf = Vec::new();
    write_trials(&mut buf, args.experiment.as_str(), &trials)?;
    emit(args.out.as_deref(), std::str::from_utf8(&buf)?)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), Failure> {
    if !(args.width.is_finite() && args.width > 0.0) {
        usage_error(ErrorKind::ValueValidation, "--width must be a positive number");
    }
    if !(args.tolerance.is_finite() && args.tolerance >= 0.0) {
        usage_error(ErrorKind::ValueValidation, "--tolerance must be a non-negative number");
    }
    let object = Pose::new(args.object, args.object_rotation);
    let target = Pose::new(args.target, args.target_rotation);
    let translation = classify_translation(&object, &target, args.width);
    let rotation = classify_rotation(&object, &target, args.tolerance);
    let checks: Vec<(&str, bool)> = match args.mode {
        Mode::Translation => vec![("translation", translation)],
        Mode::Rotation => vec![("rotation", rotation)],
        Mode::Combined => {
            vec![("translation", translation), ("rotation", rotation), ("combined", translation && rotation)]
        }
    };
    let text = match args.format {
        Format::Table => {
            checks.iter().map(|(name, ok)| format!("{name}: {}\n", if *ok { "success" } else { "miss" })).collect()
        }
        Format::JsonLike => {
            let map: serde_json::Map<String, serde_json::Value> =
                checks.iter().map(|(name, ok)| (name.to_string(), serde_json::Value::Bool(*ok))).collect();
            serde_json::to_string_pretty(&map)? + "\n"
        }
    };
    emit(None, &text)
}

fn cmd_fit(args: &FitArgs) -> Result<(), Failure> {
    let log = load(&args.input)?;
    let report = build_report(&log, &models_or_all(&args.models), args.input.aggregate, args.points);
    emit(args.input.out.as_deref(), &render(&report, args.input.format)?)?;
    if report.fitted_models().next().is_none() {
        return Err(Failure("no model could be fitted".into()));
    }
    Ok(())
}

fn run_stepwise(
    log: &TrialLog,
    vars: &[TaskVariable],
    candidates: &CandidateArgs,
    aggregate: bool,
) -> Result<StepwiseReport, Failure> {
    let transforms = Transforms { sin_direction: !candidates.raw_phi };
    Ok(stepwise_variables(&log.trials, vars, transforms, aggregate)?)
}

fn cmd_stepwise(args: &StepwiseArgs) -> Result<(), Failure> {
    let vars = checked_candidates(&args.candidates);
    let log = load(&args.input)?;
    let sw = run_stepwise(&log, &vars, &args.candidates, args.input.aggregate)?;
    let text = match args.input.format {
        Format::Table => render_stepwise(&sw),
        Format::JsonLike => serde_json::to_string_pretty(&sw)? + "\n",
    };
    emit(args.input.out.as_deref(), &text)
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let vars = checked_candidates(&args.candidates);
    let log = load(&args.input)?;
    let mut report = build_report(&log, &models_or_all(&args.models), args.input.aggregate, args.points);
    match run_stepwise(&log, &vars, &args.candidates, args.input.aggregate) {
        Ok(sw) => report.stepwise = Some(sw),
        Err(Failure(e)) => eprintln!("warning: stepwise selection failed: {e}"),
    }
    emit(args.input.out.as_deref(), &render(&report, args.input.format)?)?;
    if report.fitted_models().next().is_none() {
        return Err(Failure("no model could be fitted".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Fit(a) | Command::Compare(a) => cmd_fit(a),
        Command::Stepwise(a) => cmd_stepwise(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
