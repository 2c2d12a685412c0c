//! Command-line surface over the `elqcc` library.
//!
//! Spectra come from JSON files — `{"coefficients": [0.5, 0.3, 0.2]}` or a
//! bare array, with `-` reading standard input — and results go to standard
//! output (or `--out FILE`) as JSON, CSV (landscape only), or plain
//! `key=value` text. All numbers are printed with 9 significant digits.
//!
//! Exit codes separate physics from plumbing: 0 is a positive verdict or a
//! completed computation; 1 is a negative verdict — not majorized, no
//! catalyst found, gate-pruned — always with a machine-readable JSON
//! explanation on standard output; 2 is invalid input.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::{fs, io};

use clap::{Args, Parser, Subcommand, ValueEnum};
use elqcc::numfmt::{round_sig9, sig9};
use elqcc::{
    bounds, classify_pair, find_boost_catalyst, find_deterministic_catalyst, landscape,
    landscape_csv, optimal_catalysed, optimal_uncatalysed, p_max, tensor_sorted,
    CatalystSearchResult, SchmidtSpectrum, Verdict,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "elqcc", version, about = "Entanglement transformations on ordered Schmidt coefficients")]
struct Cli {
    /// Output format; defaults to csv for landscape and json elsewhere
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args)]
struct PairArgs {
    /// Source spectrum: JSON file path or `-` for standard input
    #[arg(long)]
    source: String,

    /// Target spectrum: JSON file path or `-` for standard input
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    pair: PairArgs,

    /// Catalyst dimension to scan
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=5))]
    dim: u32,

    /// Simplex grid pitch; defaults to 1e-3 for dim 2 and 5e-3 above
    #[arg(long)]
    grid_step: Option<f64>,
}

impl SearchArgs {
    fn step(&self) -> f64 {
        self.grid_step
            .unwrap_or(if self.dim == 2 { 1e-3 } else { 5e-3 })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether source → target succeeds with certainty
    Check(PairArgs),

    /// Optimal conversion probability of source → target
    Pmax {
        #[command(flatten)]
        pair: PairArgs,

        /// Evaluate with this catalyst tensored onto both sides
        #[arg(long)]
        catalyst: Option<String>,
    },

    /// Majorization relation of a pair, in both directions
    Classify(PairArgs),

    /// Search for a catalyst making the conversion deterministic
    FindCatalyst(SearchArgs),

    /// Search for a catalyst raising the conversion probability
    Boost {
        #[command(flatten)]
        search: SearchArgs,

        /// Polish the best grid point with a pattern search
        #[arg(long)]
        refine: bool,
    },

    /// Optimal entanglement concentration of a state
    Ecp {
        /// Spectrum to concentrate: JSON file path or `-`
        #[arg(long)]
        state: String,

        /// Catalyst spectrum for the catalysed protocol
        #[arg(long)]
        catalyst: Option<String>,
    },

    /// Upper bounds on any catalysed concentration yield
    Bounds {
        /// Spectrum to bound: JSON file path or `-`
        #[arg(long)]
        state: String,
    },

    /// Sweep two-level catalysts and tabulate the concentration optimum
    Landscape {
        /// Spectrum to concentrate: JSON file path or `-`
        #[arg(long)]
        state: String,

        /// Number of sweep intervals over β₁ ∈ [0.5, 1.0]
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: io::Error },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("writing {path}: {source}")]
    Write { path: String, source: io::Error },

    #[error(transparent)]
    Catalysis(#[from] elqcc::CatalysisError),

    #[error(transparent)]
    Concentration(#[from] elqcc::ConcentrationError),

    #[error("the csv format is only available for the landscape command")]
    CsvUnavailable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let format = cli.format;
    let (content, negative) = match cli.command {
        Command::Check(pair) => {
            let (x, y) = load_pair(&pair)?;
            let class = classify_pair(&x, &y);
            let majorized = matches!(class.verdict, Verdict::Equivalent | Verdict::SourceToTarget);
            let payload = json!({
                "majorized": majorized,
                "verdict": class.verdict.to_string(),
                "first_violation": class.forward_violation,
            });
            let plain = format!(
                "majorized={majorized}\nverdict={}\n",
                class.verdict
            );
            (render(format, payload, plain, !majorized)?, !majorized)
        }
        Command::Pmax { pair, catalyst } => {
            let (x, y) = load_pair(&pair)?;
            let p = match catalyst {
                Some(path) => {
                    let c = load_spectrum(&path)?;
                    p_max(&tensor_sorted(&x, &c), &tensor_sorted(&y, &c))
                }
                None => p_max(&x, &y),
            };
            let payload = json!({ "p_max": num(p) });
            (render(format, payload, format!("{}\n", sig9(p)), false)?, false)
        }
        Command::Classify(pair) => {
            let (x, y) = load_pair(&pair)?;
            let class = classify_pair(&x, &y);
            let payload = json!({
                "verdict": class.verdict.to_string(),
                "forward_violation": class.forward_violation,
                "backward_violation": class.backward_violation,
            });
            let plain = format!(
                "verdict={}\nforward_violation={}\nbackward_violation={}\n",
                class.verdict,
                violation(class.forward_violation),
                violation(class.backward_violation),
            );
            (render(format, payload, plain, false)?, false)
        }
        Command::FindCatalyst(search) => {
            let (x, y) = load_pair(&search.pair)?;
            let result =
                find_deterministic_catalyst(&x, &y, search.dim as usize, search.step())?;
            let negative = !result.found;
            (
                render(format, search_json(&result), search_plain(&result), negative)?,
                negative,
            )
        }
        Command::Boost { search, refine } => {
            let (x, y) = load_pair(&search.pair)?;
            let result =
                find_boost_catalyst(&x, &y, search.dim as usize, search.step(), refine)?;
            let negative = !result.found;
            (
                render(format, search_json(&result), search_plain(&result), negative)?,
                negative,
            )
        }
        Command::Ecp { state, catalyst } => {
            let x = load_spectrum(&state)?;
            let dist = match catalyst {
                Some(path) => optimal_catalysed(&x, &load_spectrum(&path)?)?,
                None => optimal_uncatalysed(&x),
            };
            let payload = json!({
                "probabilities": num_list(&dist.probabilities),
                "expected_entanglement_nats": num(dist.expected_entanglement_nats),
                "expected_entanglement_ebits": num(dist.expected_entanglement_ebits),
            });
            let plain = format!(
                "probabilities={}\nexpected_entanglement_nats={}\nexpected_entanglement_ebits={}\n",
                join_sig9(&dist.probabilities),
                sig9(dist.expected_entanglement_nats),
                sig9(dist.expected_entanglement_ebits),
            );
            (render(format, payload, plain, false)?, false)
        }
        Command::Bounds { state } => {
            let x = load_spectrum(&state)?;
            let caps = bounds(&x)?;
            let payload = json!({
                "bound_b_nats": num(caps.bound_b_nats),
                "entropy_nats": num(caps.entropy_nats),
                "binding": caps.binding.to_string(),
            });
            let plain = format!(
                "bound_b_nats={}\nentropy_nats={}\nbinding={}\n",
                sig9(caps.bound_b_nats),
                sig9(caps.entropy_nats),
                caps.binding,
            );
            (render(format, payload, plain, false)?, false)
        }
        Command::Landscape { state, steps } => {
            let x = load_spectrum(&state)?;
            let rows = landscape(&x, steps)?;
            let content = match format.unwrap_or(Format::Csv) {
                Format::Json => {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|row| {
                            json!({
                                "beta1": num(row.beta1),
                                "beta2": num(1.0 - row.beta1),
                                "e_nats": num(row.e_nats),
                                "e_ebits": num(row.e_ebits),
                            })
                        })
                        .collect();
                    format!("{}\n", json!({ "rows": rows }))
                }
                // The CSV table is the plain rendering too.
                Format::Csv | Format::Plain => landscape_csv(&rows),
            };
            (content, false)
        }
    };
    emit(cli.out.as_deref(), &content, negative)
}

/// Renders a positive result in the requested format. Negative verdicts
/// are always JSON, whatever the format, so pipelines that branched on the
/// exit code find a machine-readable explanation.
fn render(
    format: Option<Format>,
    payload: Value,
    plain: String,
    negative: bool,
) -> Result<String, CliError> {
    if negative {
        return Ok(format!("{payload}\n"));
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(format!("{payload}\n")),
        Format::Plain => Ok(plain),
        Format::Csv => Err(CliError::CsvUnavailable),
    }
}

fn emit(out: Option<&Path>, content: &str, negative: bool) -> Result<ExitCode, CliError> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|source| CliError::Write {
                path: path.display().to_string(),
                source,
            })?;
            // The explanation must still reach standard output.
            if negative {
                print!("{content}");
            }
        }
        None => print!("{content}"),
    }
    Ok(if negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn load_pair(pair: &PairArgs) -> Result<(SchmidtSpectrum, SchmidtSpectrum), CliError> {
    Ok((load_spectrum(&pair.source)?, load_spectrum(&pair.target)?))
}

fn load_spectrum(path: &str) -> Result<SchmidtSpectrum, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Read {
                path: path.to_owned(),
                source,
            })?;
        buf
    } else {
        fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?
    };
    serde_json::from_str(&text).map_err(|err| CliError::Parse {
        path: path.to_owned(),
        message: err.to_string(),
    })
}

/// A JSON number rounded to 9 significant digits; the parsed-back value is
/// bit-for-bit the rounded one.
fn num(value: f64) -> Value {
    serde_json::Number::from_f64(round_sig9(value)).map_or(Value::Null, Value::Number)
}

fn num_list(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|v| num(*v)).collect())
}

fn join_sig9(values: &[f64]) -> String {
    values.iter().map(|v| sig9(*v)).collect::<Vec<_>>().join(",")
}

fn violation(index: Option<usize>) -> String {
    index.map_or_else(|| "none".to_owned(), |l| l.to_string())
}

fn search_json(result: &CatalystSearchResult) -> Value {
    json!({
        "found": result.found,
        "catalyst": result
            .catalyst
            .as_ref()
            .map_or(Value::Null, |c| num_list(c.coefficients())),
        "achieved_probability": num(result.achieved_probability),
        "baseline_probability": num(result.baseline_probability),
        "evaluations": result.evaluations,
        "gate": result
            .pruned_gate()
            .map_or(Value::Null, |gate| Value::String(gate.to_string())),
        "notes": result
            .gate_report
            .iter()
            .map(|note| note.to_string())
            .collect::<Vec<_>>(),
    })
}

fn search_plain(result: &CatalystSearchResult) -> String {
    let mut out = format!("found={}\n", result.found);
    if let Some(catalyst) = &result.catalyst {
        out.push_str(&format!("catalyst={}\n", join_sig9(catalyst.coefficients())));
    }
    out.push_str(&format!(
        "achieved_probability={}\nbaseline_probability={}\nevaluations={}\n",
        sig9(result.achieved_probability),
        sig9(result.baseline_probability),
        result.evaluations,
    ));
    if let Some(gate) = result.pruned_gate() {
        out.push_str(&format!("gate={gate}\n"));
    }
    out
}
