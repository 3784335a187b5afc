use std::fs;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::Path;

use owagen::explore::{
    default_epsilons, epsilon_curve, fit_frontier, grid_file_name, latin_hypercube, sweep,
    write_epsilon_curve_csv, write_grid_csv, write_sweep_csv, Lattice, Metric, SweepRecord,
    EPSILON_CURVE_FILE, SWEEP_FILE,
};
use owagen::metrics::WeightMetrics;
use owagen::{
    andness, generate_weights, owa_aggregate, CriteriaSet, DecisionPoint, OwaError, WeightVector,
};
use serde_json::json;

use crate::args::{
    AggregateArgs, Cli, Command, Format, GridArgs, PointArgs, ServeArgs, SweepArgs, WeightSource,
};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const USAGE: u8 = 1;
    pub const INFEASIBLE: u8 = 2;
    pub const IO: u8 = 3;

    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: Self::USAGE,
            message: message.into(),
        }
    }
}

impl From<OwaError> for Failure {
    fn from(e: OwaError) -> Self {
        let code = match e {
            OwaError::Infeasible { .. } => Self::INFEASIBLE,
            OwaError::Io(_) => Self::IO,
            _ => Self::USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: Self::IO,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Caps the rayon pool at `OWAGEN_THREADS` when set.
pub fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var("OWAGEN_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|t| *t > 0).ok_or_else(|| {
        Failure::usage(format!(
            "OWAGEN_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

/// Twelve significant digits, shortest form.
fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn joined(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| sig12(*v))
        .collect::<Vec<_>>()
        .join(",")
}

fn check_epsilon(epsilon: f64) -> Outcome {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Failure::usage(format!(
            "epsilon must be positive, got {epsilon}"
        )))
    }
}

fn print_json(value: &serde_json::Value) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value).map_err(|e| Failure::from(io::Error::from(e)))?;
    writeln!(out)?;
    Ok(())
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generate(a) => generate(a, cli.format),
        Command::Aggregate(a) => aggregate(a, cli.format),
        Command::Metrics(a) => metrics(a, cli.format),
        Command::Sweep(a) => sweep_cmd(a, cli.format, false),
        Command::Frontier(a) => sweep_cmd(a, cli.format, true),
        Command::Grid(a) => grid(a, cli.format),
        Command::Serve(a) => serve(a),
    }
}

fn generate(a: PointArgs, format: Format) -> Outcome {
    check_epsilon(a.epsilon)?;
    let point = DecisionPoint::new(a.alpha, a.delta)?;
    let out = match generate_weights(point, a.n, a.epsilon) {
        Ok(out) => out,
        Err(
            e @ OwaError::Infeasible {
                delta_max,
                distance,
                ..
            },
        ) => {
            if format == Format::Json {
                print_json(&json!({
                    "alpha": a.alpha,
                    "delta": a.delta,
                    "feasible": false,
                    "delta_max": delta_max,
                    "distance": distance,
                }))?;
            }
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    let w = out.weights.as_slice();
    let m = out.achieved;
    match format {
        Format::Json => print_json(&json!({
            "weights": w,
            "alpha": a.alpha,
            "delta": a.delta,
            "orness": m.map(|m| m.orness),
            "dispersion": m.map(|m| m.dispersion),
            "tradeoff": m.map(|m| m.tradeoff),
            "feasible": true,
        })),
        Format::Csv => {
            let mut s = String::from("index,weight\n");
            for (i, wi) in w.iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, sig12(*wi)));
            }
            print!("{s}");
            Ok(())
        }
        Format::Plain => {
            println!("{}", joined(w));
            if let Some(m) = m {
                println!(
                    "orness={} dispersion={} tradeoff={}",
                    sig12(m.orness),
                    sig12(m.dispersion),
                    sig12(m.tradeoff)
                );
            }
            Ok(())
        }
    }
}

fn read_weights(source: &WeightSource) -> Result<WeightVector, Failure> {
    let raw = match (&source.weights, &source.weights_file) {
        (Some(w), _) => w.clone(),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure {
                code: Failure::IO,
                message: format!("{}: {e}", path.display()),
            })?;
            parse_numbers(&text, path)?
        }
        (None, None) => return Err(Failure::usage("give --weights or --weights-file")),
    };
    Ok(WeightVector::new(raw)?)
}

fn parse_numbers(text: &str, path: &Path) -> Result<Vec<f64>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Failure::usage(format!("{}: not a number: {t:?}", path.display())))
        })
        .collect()
}

fn aggregate(a: AggregateArgs, format: Format) -> Outcome {
    let weights = match (a.alpha, a.delta, a.n) {
        (Some(alpha), Some(delta), Some(n)) => {
            check_epsilon(a.epsilon)?;
            generate_weights(DecisionPoint::new(alpha, delta)?, n, a.epsilon)?.weights
        }
        _ => read_weights(&a.source)?,
    };
    let criteria = CriteriaSet::new(a.criteria)?;
    let value = owa_aggregate(&weights, &criteria)?;
    match format {
        Format::Json => print_json(&json!({
            "value": value,
            "weights": weights.as_slice(),
            "sorted_criteria": criteria.sorted(),
        })),
        Format::Csv => {
            println!("value\n{}", sig12(value));
            Ok(())
        }
        Format::Plain => {
            println!("{}", sig12(value));
            Ok(())
        }
    }
}

fn metrics(source: WeightSource, format: Format) -> Outcome {
    let w = read_weights(&source)?;
    let m = WeightMetrics::of(&w)?;
    let andness = andness(&w)?;
    match format {
        Format::Json => print_json(&json!({
            "orness": m.orness,
            "andness": andness,
            "dispersion": m.dispersion,
            "tradeoff": m.tradeoff,
        })),
        Format::Csv => {
            println!("orness,andness,dispersion,tradeoff");
            println!("{}", joined(&[m.orness, andness, m.dispersion, m.tradeoff]));
            Ok(())
        }
        Format::Plain => {
            println!(
                "orness={} andness={} dispersion={} tradeoff={}",
                sig12(m.orness),
                sig12(andness),
                sig12(m.dispersion),
                sig12(m.tradeoff)
            );
            Ok(())
        }
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<fs::File>, Failure> {
    let path = dir.join(name);
    let io = |e: io::Error| Failure {
        code: Failure::IO,
        message: format!("{}: {e}", path.display()),
    };
    fs::create_dir_all(dir).map_err(io)?;
    Ok(BufWriter::new(fs::File::create(&path).map_err(io)?))
}

fn sweep_cmd(a: SweepArgs, format: Format, fit: bool) -> Outcome {
    check_epsilon(a.epsilon)?;
    let points = latin_hypercube(a.samples, a.seed)?;
    let records: Vec<SweepRecord> = sweep(&points, a.epsilon)?;
    let curve = epsilon_curve(&records, &default_epsilons())?;
    write_sweep_csv(create(&a.out_dir, SWEEP_FILE)?, &records)?;
    write_epsilon_curve_csv(create(&a.out_dir, EPSILON_CURVE_FILE)?, &curve)?;

    let accepted = records.iter().filter(|r| r.accepted).count();
    let rejected_fraction = 1.0 - accepted as f64 / records.len() as f64;
    if !fit {
        return match format {
            Format::Json => print_json(&json!({
                "samples": records.len(),
                "seed": a.seed,
                "epsilon": a.epsilon,
                "accepted": accepted,
                "rejected_fraction": rejected_fraction,
            })),
            _ => {
                println!(
                    "samples={} accepted={accepted} rejected_fraction={}",
                    records.len(),
                    sig12(rejected_fraction)
                );
                Ok(())
            }
        };
    }
    let f = fit_frontier(&records)?;
    match format {
        Format::Json => print_json(&json!({
            "a": f.a,
            "b": f.b,
            "c": f.c,
            "rmse": f.rmse,
            "bins": f.frontier.len(),
            "samples": records.len(),
            "rejected_fraction": rejected_fraction,
        })),
        _ => {
            println!(
                "a={} b={} c={} rmse={} bins={}",
                sig12(f.a),
                sig12(f.b),
                sig12(f.c),
                sig12(f.rmse),
                f.frontier.len()
            );
            Ok(())
        }
    }
}

fn grid(a: GridArgs, format: Format) -> Outcome {
    check_epsilon(a.epsilon)?;
    let metrics: Vec<Metric> = if a.metric.eq_ignore_ascii_case("all") {
        Metric::ALL.to_vec()
    } else {
        vec![a.metric.parse()?]
    };
    if let Some(&n) = a.n.iter().find(|&&n| n < 2) {
        return Err(OwaError::DegenerateDimension(n).into());
    }
    let lattice = Lattice::calibrate(a.resolution, a.epsilon)?;
    let mut written = Vec::new();
    for &n in &a.n {
        for &m in &metrics {
            let g = lattice.grid(n, m)?;
            let name = grid_file_name(m, n);
            write_grid_csv(create(&a.out_dir, &name)?, &g)?;
            written.push(a.out_dir.join(name).display().to_string());
        }
    }
    match format {
        Format::Json => print_json(&json!({
            "resolution": a.resolution,
            "feasible_cells": lattice.feasible_count(),
            "files": written,
        })),
        _ => {
            for path in written {
                println!("{path}");
            }
            Ok(())
        }
    }
}

fn serve(a: ServeArgs) -> Outcome {
    let addr = SocketAddr::from(([127, 0, 0, 1], a.port));
    let runtime = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    runtime.block_on(owagen_service::serve(addr, a.static_dir))?;
    Ok(())
}
