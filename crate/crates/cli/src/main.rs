//! Command-line front end: data ingestion, model persistence, experiment
//! orchestration, and report emission.
//!
//! Exit codes: 0 on success, 2 for malformed input (files, data values), 3
//! for an infeasible configuration (parameters out of range). Every
//! randomized command takes `--seed` and is fully deterministic given its
//! flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use dfci_core::sim::{run_coverage_experiment, CoverageReport, Method, Scenario, PI_DIST_ATOMS};
use dfci_core::{
    default_knn_k, ell, fit_fixed_partition, fit_split, lower_bound, predict_interval, Dataset,
    DfModel, Dist, Error as CoreError, Partition, RegressorSpec,
};

#[derive(Parser)]
#[command(
    name = "dfci",
    version,
    about = "Distribution-free confidence intervals for binary regression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the minimum expected interval length ell(t, a).
    Ell {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
    },
    /// Minimum expected length over a discrete distribution of targets.
    LowerBound {
        /// CSV file with header `atom,weight`.
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Fit an interval predictor and write the model JSON.
    Fit {
        /// CSV file with header `x1,...,xd,y` and labels in {0, 1}.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum)]
        method: MethodKind,
        /// Cells per axis for the fixed grid partition.
        #[arg(long, default_value_t = 1)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = RegressorKind::Knn)]
        regressor: RegressorKind,
        /// Neighbor count for the k-NN regressor (default: ceil(m^(2/(2+d)))
        /// for m first-half points in dimension d).
        #[arg(long)]
        knn_k: Option<usize>,
        /// Cells per axis for the histogram regressor.
        #[arg(long, default_value_t = 10)]
        hist_bins: usize,
        /// Apply a seeded permutation to the rows before splitting.
        #[arg(long)]
        shuffle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a fitted model at a point and print the interval.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated feature values, e.g. `--x 0.3,0.7`.
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the seed-derived uniform draw.
        #[arg(long)]
        u: Option<f64>,
    },
    /// Run a Monte Carlo coverage experiment and write the report JSON.
    Simulate {
        /// Scenario JSON file.
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        method: MethodKind,
        #[arg(long, default_value_t = 1)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = RegressorKind::Knn)]
        regressor: RegressorKind,
        #[arg(long)]
        knn_k: Option<usize>,
        #[arg(long, default_value_t = 10)]
        hist_bins: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        alpha: f64,
        /// Master seed (default: the scenario file's seed).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write one CSV row per trial.
        #[arg(long)]
        per_trial: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodKind {
    Fixed,
    Split,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegressorKind {
    Knn,
    Histogram,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn config(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::InvalidDistribution(_) | CoreError::InvalidData(_) => 2,
            CoreError::InvalidParam(_) | CoreError::Unsupported(_) => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ell { t, a } => {
            check_unit("t", t)?;
            check_unit("a", a)?;
            println!("{}", ell(t, a));
            Ok(())
        }
        Command::LowerBound { dist, alpha } => {
            check_unit("alpha", alpha)?;
            let dist = read_dist_csv(&dist)?;
            println!("{}", lower_bound(&dist, alpha)?);
            Ok(())
        }
        Command::Fit {
            data,
            alpha,
            method,
            bins,
            regressor,
            knn_k,
            hist_bins,
            shuffle,
            seed,
            out,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(CliError::config(format!("alpha {alpha} outside (0, 1)")));
            }
            let mut dataset = read_data_csv(&data)?;
            if shuffle {
                dataset = shuffled(&dataset, seed);
            }
            let model = match method {
                MethodKind::Fixed => {
                    if bins == 0 {
                        return Err(CliError::config("bins must be {2265} 1"));
                    }
                    fit_fixed_partition(
                        &dataset,
                        Partition::Grid {
                            dim: dataset.dim(),
                            bins,
                        },
                        alpha,
                    )?
                }
                MethodKind::Split => {
                    let spec = regressor_spec(
                        regressor,
                        knn_k,
                        hist_bins,
                        dataset.len(),
                        dataset.dim(),
                    )?;
                    fit_split(&dataset, alpha, spec)?
                }
            };
            write_json(&out, &model)?;
            Ok(())
        }
        Command::Predict { model, x, seed, u } => {
            let model = read_model_json(&model)?;
            let x = parse_point(&x, model.partition.dim())?;
            let u = match u {
                Some(u) => {
                    if !(0.0..=1.0).contains(&u) {
                        return Err(CliError::config(format!("u {u} outside [0, 1]")));
                    }
                    u
                }
                None => ChaCha8Rng::seed_from_u64(seed).gen(),
            };
            println!("{}", predict_interval(&model, &x, u));
            Ok(())
        }
        Command::Simulate {
            scenario,
            method,
            bins,
            regressor,
            knn_k,
            hist_bins,
            n,
            trials,
            alpha,
            seed,
            out,
            per_trial,
        } => {
            let scenario = read_scenario_json(&scenario)?;
            if trials < 100 {
                return Err(CliError::config(format!(
                    "need at least 100 trials, got {trials}"
                )));
            }
            let method = match method {
                MethodKind::Fixed => {
                    if bins == 0 {
                        return Err(CliError::config("bins must be {2265} 1"));
                    }
                    Method::Fixed { bins }
                }
                MethodKind::Split => Method::Split {
                    regressor: regressor_spec(
                        regressor,
                        knn_k,
                        hist_bins,
                        n,
                        scenario.dimension,
                    )?,
                },
            };
            let seed = seed.unwrap_or(scenario.seed);
            let (report, records) =
                run_coverage_experiment(&scenario, &method, n, alpha, trials, seed)?;
            let doc = SimulateDoc {
                config: SimulateConfig {
                    scenario,
                    method,
                    n,
                    trials,
                    alpha,
                    seed,
                    pi_dist_atoms: PI_DIST_ATOMS,
                },
                report,
            };
            write_json(&out, &doc)?;
            if let Some(path) = per_trial {
                let mut csv = String::from("covered_pi,covered_y,length\n");
                for r in &records {
                    csv.push_str(&format!(
                        "{},{},{}\n",
                        u8::from(r.covered_pi),
                        u8::from(r.covered_y),
                        r.length
                    ));
                }
                fs::write(path, csv)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SimulateDoc {
    config: SimulateConfig,
    report: CoverageReport,
}

#[derive(Serialize)]
struct SimulateConfig {
    scenario: Scenario,
    #[serde(flatten)]
    method: Method,
    n: usize,
    trials: usize,
    alpha: f64,
    seed: u64,
    pi_dist_atoms: usize,
}

fn check_unit(name: &str, v: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::config(format!("{name} = {v} outside [0, 1]")))
    }
}

fn regressor_spec(
    kind: RegressorKind,
    knn_k: Option<usize>,
    hist_bins: usize,
    n: usize,
    dim: usize,
) -> Result<RegressorSpec, CliError> {
    match kind {
        RegressorKind::Knn => {
            let k = knn_k.unwrap_or_else(|| default_knn_k(n / 2, dim));
            if k == 0 {
                return Err(CliError::config("knn-k must be {2265} 1"));
            }
            Ok(RegressorSpec::Knn { k })
        }
        RegressorKind::Histogram => {
            if hist_bins == 0 {
                return Err(CliError::config("hist-bins must be {2265} 1"));
            }
            Ok(RegressorSpec::Histogram { bins: hist_bins })
        }
    }
}

fn shuffled(data: &Dataset, seed: u64) -> Dataset {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    data.permuted(&order)
}

fn parse_point(raw: &str, dim: usize) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = raw
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("bad feature value {tok:?}")))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != dim {
        return Err(CliError::input(format!(
            "expected {dim} feature values, got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::input(format!("non-finite feature value {v}")));
    }
    Ok(values)
}

fn read_data_csv(path: &Path) -> Result<Dataset, CliError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let cols = headers.len();
    if cols < 2 || &headers[cols - 1] != "y" {
        return Err(CliError::input(format!(
            "{}: expected header x1,...,xd,y",
            path.display()
        )));
    }
    let dim = cols - 1;
    for j in 0..dim {
        if headers[j] != format!("x{}", j + 1) {
            return Err(CliError::input(format!(
                "{}: column {} is {:?}, expected {:?}",
                path.display(),
                j + 1,
                &headers[j],
                format!("x{}", j + 1)
            )));
        }
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != cols {
            return Err(CliError::input(format!(
                "{}: row {} has {} fields, expected {cols}",
                path.display(),
                line + 2,
                record.len()
            )));
        }
        for j in 0..dim {
            let v: f64 = record[j].parse().map_err(|_| {
                CliError::input(format!(
                    "{}: row {}: bad feature {:?}",
                    path.display(),
                    line + 2,
                    &record[j]
                ))
            })?;
            xs.push(v);
        }
        let y: f64 = record[dim].parse().map_err(|_| {
            CliError::input(format!(
                "{}: row {}: bad label {:?}",
                path.display(),
                line + 2,
                &record[dim]
            ))
        })?;
        if y == 0.0 {
            ys.push(0);
        } else if y == 1.0 {
            ys.push(1);
        } else {
            return Err(CliError::input(format!(
                "{}: row {}: label {y} outside {{0, 1}}",
                path.display(),
                line + 2
            )));
        }
    }
    Ok(Dataset::new(dim, xs, ys)?)
}

fn read_dist_csv(path: &Path) -> Result<Dist, CliError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "atom" || &headers[1] != "weight" {
        return Err(CliError::input(format!(
            "{}: expected header atom,weight",
            path.display()
        )));
    }
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |field: &str| -> Result<f64, CliError> {
            field.parse().map_err(|_| {
                CliError::input(format!(
                    "{}: row {}: bad value {field:?}",
                    path.display(),
                    line + 2
                ))
            })
        };
        atoms.push(parse(&record[0])?);
        weights.push(parse(&record[1])?);
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(CliError::input(format!(
            "{}: weights sum to {total}, not 1",
            path.display()
        )));
    }
    // Renormalize the rounded file weights so they sum to one exactly.
    for w in &mut weights {
        *w /= total;
    }
    Ok(Dist::new(atoms, weights)?)
}

fn read_model_json(path: &Path) -> Result<DfModel, CliError> {
    let raw = fs::read_to_string(path)?;
    let model: DfModel = serde_json::from_str(&raw)?;
    model.validate()?;
    Ok(model)
}

fn read_scenario_json(path: &Path) -> Result<Scenario, CliError> {
    let raw = fs::read_to_string(path)?;
    let scenario: Scenario = serde_json::from_str(&raw)?;
    scenario.validate()?;
    Ok(scenario)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut doc = serde_json::to_string_pretty(value)?;
    doc.push('\n');
    fs::write(path, doc)?;
    Ok(())
}
