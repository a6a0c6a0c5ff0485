use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use gma_core::baselines::{brute_force_opt, ldm, zsg, LdmConfig, OracleError, OracleGuards};
use gma_core::bench::{generate_instance, run_benchmark, BenchConfig, SplitMix64, SystemSpec};
use gma_core::gma::{gma, GmaConfig, GmaError};
use gma_core::model::{validate_assignment, Assignment, MecInstance};

#[derive(Parser)]
#[command(name = "gma", version, about = "Deadline-aware MEC offloading via LP rounding and 3D matching")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic instance as JSON.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.85)]
        rb: f64,
        #[arg(long, default_value_t = 0.85)]
        rc: f64,
        #[arg(long, default_value_t = 20)]
        tasks: usize,
        #[arg(long, default_value_t = 1.0 / 12.0)]
        alpha: f64,
        /// Use the twelve-AP, fifteen-server system.
        #[arg(long)]
        full: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and print the assignment with a report.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Alg::Gma)]
        alg: Alg,
        /// Override the instance's allocation bound.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        /// Pivot budget for ldm.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite and write results.csv and summary.csv.
    Bench {
        /// TOML config; the desk profile when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Record per-run wall time (makes the CSV non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Check an assignment against an instance.
    Validate { instance: PathBuf, assignment: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Gma,
    Zsg,
    Ldm,
    Oracle,
}

/// An error with the exit code it maps to.
struct Fail {
    code: u8,
    err: anyhow::Error,
}

const EXIT_IO: u8 = 1;
const EXIT_INSTANCE: u8 = 2;
const EXIT_LP: u8 = 3;
const EXIT_TOO_LARGE: u8 = 4;
const EXIT_VIOLATIONS: u8 = 5;

trait Code<T> {
    fn code(self, code: u8) -> Result<T, Fail>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Fail> {
        self.map_err(|e| Fail { code, err: e.into() })
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Gen {
            seed,
            rb,
            rc,
            tasks,
            alpha,
            full,
            out,
        } => {
            let spec = if full { SystemSpec::full_scale() } else { SystemSpec::default() };
            if !(0.0..1.0).contains(&alpha) || tasks == 0 || !(rb > 0.0 && rc > 0.0) {
                return Err(anyhow::anyhow!("need alpha in [0, 1), tasks > 0 and positive utilizations")).code(EXIT_INSTANCE);
            }
            let inst = generate_instance(&spec, rb, rc, tasks, alpha, &mut SplitMix64::new(seed));
            emit(out.as_deref(), &inst.to_json())
        }
        Cmd::Solve {
            instance,
            alg,
            alpha,
            epsilon,
            budget,
            out,
        } => {
            let mut inst = load_instance(&instance)?;
            if let Some(a) = alpha {
                inst = inst.with_alpha(a).code(EXIT_INSTANCE)?;
            }
            let (assignment, report) = solve(&inst, alg, epsilon, budget)?;
            let doc = SolveOutput { assignment, report };
            emit(out.as_deref(), &serde_json::to_string_pretty(&doc).expect("output serializes"))
        }
        Cmd::Bench {
            config,
            out_dir,
            seed,
            timing,
        } => {
            let mut cfg = match &config {
                Some(path) => {
                    let text = read(path)?;
                    BenchConfig::from_toml(&text)
                        .with_context(|| format!("parsing {}", path.display()))
                        .code(EXIT_INSTANCE)?
                }
                None => BenchConfig::desk(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.timing |= timing;
            cfg.validate().map_err(anyhow::Error::msg).code(EXIT_INSTANCE)?;
            let res = run_benchmark(&cfg);
            fs::create_dir_all(&out_dir).code(EXIT_IO)?;
            write(&out_dir.join("results.csv"), &res.to_csv())?;
            write(&out_dir.join("summary.csv"), &res.summary_csv())?;
            for f in &res.failures {
                eprintln!("failed: instance {} alpha {} {}: {}", f.instance_id, f.alpha, f.alg, f.message);
            }
            print!("{}", res.summary_csv());
            let infeasible = res.rows.iter().filter(|r| !r.feasible).count();
            if infeasible > 0 {
                return Err(anyhow::anyhow!("{infeasible} infeasible rows")).code(EXIT_VIOLATIONS);
            }
            Ok(())
        }
        Cmd::Validate { instance, assignment } => {
            let inst = load_instance(&instance)?;
            let text = read(&assignment)?;
            let a = match serde_json::from_str::<AssignmentDoc>(&text)
                .with_context(|| format!("parsing {}", assignment.display()))
                .code(EXIT_INSTANCE)?
            {
                AssignmentDoc::Bare(a) => a,
                AssignmentDoc::Wrapped { assignment } => assignment,
            };
            let report = validate_assignment(&inst, &a);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if report.is_feasible() {
                Ok(())
            } else {
                Err(anyhow::anyhow!("{} violations", report.violations.len())).code(EXIT_VIOLATIONS)
            }
        }
    }
}

#[derive(Serialize)]
struct SolveOutput {
    assignment: Assignment,
    report: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AssignmentDoc {
    Wrapped { assignment: Assignment },
    Bare(Assignment),
}

fn solve(inst: &MecInstance, alg: Alg, epsilon: f64, budget: u64) -> Result<(Assignment, serde_json::Value), Fail> {
    match alg {
        Alg::Gma => {
            let cfg = GmaConfig {
                epsilon,
                ..GmaConfig::default()
            };
            let (a, r) = gma(inst, &cfg).map_err(|e| {
                let code = match e {
                    GmaError::BadEpsilon(_) => EXIT_INSTANCE,
                    _ => EXIT_LP,
                };
                Fail { code, err: e.into() }
            })?;
            Ok((a, to_value(&r)))
        }
        Alg::Zsg => Ok((zsg(inst), serde_json::json!({}))),
        Alg::Ldm => {
            let cfg = LdmConfig {
                pivot_budget: budget,
                ..LdmConfig::default()
            };
            let (a, r) = ldm(inst, &cfg);
            Ok((a, to_value(&r)))
        }
        Alg::Oracle => {
            let r = brute_force_opt(inst, OracleGuards::default()).map_err(|e| match e {
                OracleError::TooLarge(_) => Fail {
                    code: EXIT_TOO_LARGE,
                    err: e.into(),
                },
            })?;
            let report = serde_json::json!({
                "optimum": r.optimum,
                "explored": r.explored,
                "proven_optimal": r.proven_optimal,
            });
            Ok((r.assignment, report))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .code(EXIT_IO)
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .code(EXIT_IO)
}

fn load_instance(path: &Path) -> Result<MecInstance, Fail> {
    let text = read(path)?;
    MecInstance::from_json(&text)
        .with_context(|| format!("loading {}", path.display()))
        .code(EXIT_INSTANCE)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
