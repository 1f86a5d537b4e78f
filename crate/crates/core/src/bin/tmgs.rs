use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tmgs::analysis::{analyze, parse_cm_json, AnalysisFailure};
use tmgs::state_gen::{randomize_cm, sample_batch, Family, FamilySpec};
use tmgs::sweep::{sweep, to_csv, SweepAxis, SweepBase, SweepRange};
use tmgs::symplectic::{build_standard_cm, CovarianceMatrixJson, Ordering, StandardFormParams};
use tmgs::tolerances::Tolerances;
use tmgs::verify::{run_all, Counts, VerifyConfig};
use tmgs::Error;

const DEFAULT_SEED: &str = "20240917";

#[derive(Parser)]
#[command(name = "tmgs", version, about = "Separability analysis of two-mode Gaussian states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a covariance matrix JSON file ("-" for stdin) and print a JSON report.
    Analyze {
        path: String,
        /// Row ordering of the input; overrides the file's `ordering` field.
        #[arg(long, value_parser = parse_ordering)]
        ordering: Option<Ordering>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Sample states from a family and print them as JSON.
    Gen {
        #[arg(long, default_value = "generic")]
        family: Family,
        #[arg(long, env = "TMGS_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 5.0)]
        b_max: f64,
        /// Fix c at this fraction of its ceiling.
        #[arg(long)]
        strength: Option<f64>,
        /// Bias generic draws toward entangled states.
        #[arg(long)]
        entangled_bias: bool,
        /// Hide the standard form behind a random local symplectic map.
        #[arg(long)]
        randomize: bool,
        /// Write one file per state into this directory instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the verification suite over `n` random states per property.
    Verify {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, env = "TMGS_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
        /// Write the JSON summary here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
        /// Corrupt one closed form to check that the suite notices.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Tabulate indicators along one parameter of a family as CSV.
    Sweep {
        #[arg(long)]
        family: Family,
        /// One of b, c, d, r.
        #[arg(long)]
        axis: SweepAxis,
        /// lo:hi:steps (inclusive).
        #[arg(long, allow_hyphen_values = true)]
        range: SweepRange,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        b1: f64,
        #[arg(long, default_value_t = 1.0)]
        b2: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
        d: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        d_ratio: f64,
        /// Thermal occupancy for the squeezed thermal family.
        #[arg(long, default_value_t = 0.0)]
        thermal: f64,
    },
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = Tolerances::default().eps_phys)]
    eps_phys: f64,
    #[arg(long, default_value_t = Tolerances::default().closed_vs_oracle)]
    tol_oracle: f64,
    #[arg(long, default_value_t = Tolerances::default().identity)]
    tol_identity: f64,
    #[arg(long, default_value_t = Tolerances::default().hessian_fd)]
    tol_hessian: f64,
    #[arg(long, default_value_t = Tolerances::default().fd_step)]
    fd_step: f64,
    #[arg(long, default_value_t = Tolerances::default().d_pt_boundary)]
    d_pt_boundary: f64,
    #[arg(long, default_value_t = Tolerances::default().f_tilde_boundary)]
    f_tilde_boundary: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            eps_phys: self.eps_phys,
            closed_vs_oracle: self.tol_oracle,
            identity: self.tol_identity,
            hessian_fd: self.tol_hessian,
            fd_step: self.fd_step,
            d_pt_boundary: self.d_pt_boundary,
            f_tilde_boundary: self.f_tilde_boundary,
        }
    }
}

fn parse_ordering(s: &str) -> Result<Ordering, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| "expected q1p1q2p2 or q1q2p1p2".into())
}

/// A generated state: the parameters it was drawn with plus the matrix,
/// in the same shape `analyze` reads.
#[derive(Serialize)]
struct GeneratedState {
    params: StandardFormParams,
    #[serde(flatten)]
    covariance: CovarianceMatrixJson,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn io_failure(what: &str, path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("cannot {what} {}: {e}", path.display()) }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure { code: 1, message: format!("cannot read stdin: {e}") })?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| io_failure("read", Path::new(path), e))?;
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { path, ordering, tol } => {
            let (cm, file_ordering) = parse_cm_json(&read_input(&path)?)?;
            let cm = match ordering {
                Some(o) if o != file_ordering => {
                    tmgs::symplectic::CovarianceMatrix::from_rows(cm.to_rows(file_ordering), o)
                }
                _ => cm,
            };
            match analyze(&cm, ordering.unwrap_or(file_ordering), &tol.tolerances()) {
                Ok(report) => {
                    println!("{}", to_json(&report));
                    Ok(())
                }
                Err(AnalysisFailure::Unphysical(r)) => {
                    println!("{}", to_json(&r));
                    Err(Failure { code: 1, message: "covariance matrix is not a physical state".into() })
                }
                Err(AnalysisFailure::Error(e)) => Err(e.into()),
            }
        }
        Command::Gen { family, seed, count, b_max, strength, entangled_bias, randomize, out_dir } => {
            let spec = FamilySpec { family, b_max, strength, seed, entangled_bias };
            let states = sample_batch(&spec, count)?
                .into_iter()
                .enumerate()
                .map(|(i, p)| {
                    let cm =
                        if randomize { randomize_cm(&p, seed.wrapping_add(i as u64))? } else { build_standard_cm(&p) };
                    Ok(GeneratedState { params: p, covariance: cm.to_json(Ordering::default()) })
                })
                .collect::<tmgs::Result<Vec<_>>>()?;
            match out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| io_failure("create", &dir, e))?;
                    for (i, s) in states.iter().enumerate() {
                        let path = dir.join(format!("state_{i:04}.json"));
                        std::fs::write(&path, to_json(s) + "\n").map_err(|e| io_failure("write", &path, e))?;
                    }
                }
                None if states.len() == 1 => println!("{}", to_json(&states[0])),
                None => println!("{}", to_json(&states)),
            }
            Ok(())
        }
        Command::Verify { n, seed, report, tol, inject_fault } => {
            if n == 0 {
                return Err(Failure { code: 1, message: "--n must be positive".into() });
            }
            let cfg = VerifyConfig { counts: Counts::uniform(n), seed, tolerances: tol.tolerances(), inject_fault };
            let summary = run_all(&cfg);
            for c in &summary.checks {
                println!("{}", c.line());
                for f in &c.failures {
                    eprintln!("    {f}");
                }
            }
            if let Some(path) = report {
                std::fs::write(&path, to_json(&summary) + "\n").map_err(|e| io_failure("write", &path, e))?;
            }
            if summary.passed {
                Ok(())
            } else {
                Err(Failure { code: 1, message: "verification failed".into() })
            }
        }
        Command::Sweep { family, axis, range, output, b1, b2, c, d, d_ratio, thermal } => {
            let base = SweepBase { b1, b2, c, d, d_ratio, thermal };
            let csv = to_csv(&sweep(family, axis, &range, &base)?);
            match output {
                Some(path) => std::fs::write(&path, csv).map_err(|e| io_failure("write", &path, e))?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are invalid input (1), not clap's default 2
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tmgs: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
