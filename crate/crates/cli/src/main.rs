//! `hodge` — scenario-driven studies of Hodge–Dirac operators under rough
//! metric weights.
//!
//! Exit codes: 0 all checks passed, 1 assertion or oracle failure, 2 input
//! error.

mod refine;
mod report;
mod runner;
mod scenario;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::{emit_report, to_canonical_json, Report, TaskResult};
use runner::{run_scenario, RunOptions};
use scenario::{parse_scenario, MetricModel, MetricSpec, RefineModel, RefineSpec, Scenario, Task};

#[derive(Parser)]
#[command(name = "hodge", version, about = "rough-metric Hodge studies on finite complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files and emit reports.
    Run {
        /// Scenario JSON files.
        scenarios: Vec<PathBuf>,
        /// Output directory (overrides the scenario's own).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit wall-clock timings so reports are byte-identical across runs.
        #[arg(long)]
        no_timings: bool,
        /// Override every metric seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance overrides KEY=VAL (rank_gap, residual, isomorphism).
        #[arg(long = "tol")]
        tol: Vec<String>,
        /// Also emit SVG plots.
        #[arg(long)]
        svg: bool,
    },
    /// Spectral Betti numbers of a fixture under a chosen metric.
    Betti {
        #[arg(long)]
        fixture: String,
        /// identity | random:<seed>:<C>
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Exact integer homology of a fixture.
    Oracle {
        #[arg(long)]
        fixture: String,
    },
    /// Mesh-refinement divergence study of the weighted codifferential.
    Refine {
        /// weierstrass | smooth
        #[arg(long)]
        model: String,
        /// Number of dyadic levels.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Coarsest resolution.
        #[arg(long, default_value_t = 32)]
        base: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn thread_cap() -> usize {
    std::env::var("HODGE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run {
            scenarios,
            out,
            no_timings,
            seed,
            tol,
            svg,
        } => {
            if scenarios.is_empty() {
                return Err("no scenario files given".into());
            }
            let mut parsed: Vec<(PathBuf, Scenario)> = Vec::new();
            for path in &scenarios {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let mut scenario =
                    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                apply_tolerance_overrides(&mut scenario, &tol)?;
                parsed.push((path.clone(), scenario));
            }
            let options = RunOptions {
                no_timings,
                seed_override: seed,
            };
            let reports = run_parallel(parsed, &options);
            let mut all_passed = true;
            for (path, report) in &reports {
                let dir = out
                    .clone()
                    .or_else(|| report.scenario.output.clone().map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("out"));
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_else(|| "scenario".into());
                let files = emit_report(report, &dir.join(stem), svg)
                    .map_err(|e| format!("emit failed: {e}"))?;
                for f in files {
                    println!("wrote {f}");
                }
                print_summary(report);
                all_passed &= report.passed;
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Betti { fixture, metric } => {
            let metric_spec = parse_metric_flag(&metric)?;
            let scenario = Scenario {
                complex: scenario::ComplexSpec {
                    fixture: Some(fixture),
                    file: None,
                    cubical: None,
                    boundary: None,
                    local_system: None,
                    magnet: None,
                },
                metrics: vec![metric_spec],
                tasks: vec![Task::Betti],
                tolerances: Default::default(),
                output: None,
                refine: None,
            };
            let report = run_scenario(
                &scenario,
                &RunOptions {
                    no_timings: true,
                    seed_override: None,
                },
            );
            print!("{}", to_canonical_json(&report));
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Oracle { fixture } => {
            let complex = hodge_core::complexes::build_simplicial(&fixture)
                .map_err(|e| e.to_string())?;
            let report = hodge_core::complexes::betti_smith(&complex)
                .map_err(|e| e.to_string())?;
            let torsion: Vec<String> = report
                .torsion
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.is_empty())
                .map(|(k, t)| format!("degree {k}: {t:?}"))
                .collect();
            println!("betti {:?}", report.betti);
            if torsion.is_empty() {
                println!("torsion none");
            } else {
                for line in torsion {
                    println!("torsion {line}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Refine {
            model,
            levels,
            base,
            out,
            no_timings,
        } => {
            let model = match model.as_str() {
                "weierstrass" => RefineModel::Weierstrass,
                "smooth" => RefineModel::Smooth,
                other => return Err(format!("unknown refine model {other:?}")),
            };
            let scenario = Scenario {
                complex: scenario::ComplexSpec {
                    fixture: None,
                    file: None,
                    cubical: None,
                    boundary: None,
                    local_system: None,
                    magnet: None,
                },
                metrics: Vec::new(),
                tasks: vec![Task::RefineDivergence],
                tolerances: Default::default(),
                output: None,
                refine: Some(RefineSpec {
                    base,
                    levels,
                    model,
                }),
            };
            let report = run_scenario(
                &scenario,
                &RunOptions {
                    no_timings,
                    seed_override: None,
                },
            );
            if let Some(dir) = out {
                let files =
                    emit_report(&report, &dir, true).map_err(|e| format!("emit failed: {e}"))?;
                for f in files {
                    println!("wrote {f}");
                }
            }
            print_summary(&report);
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_parallel(
    parsed: Vec<(PathBuf, Scenario)>,
    options: &RunOptions,
) -> Vec<(PathBuf, Report)> {
    let cap = thread_cap();
    if parsed.len() <= 1 || cap <= 1 {
        return parsed
            .into_iter()
            .map(|(p, s)| {
                let r = run_scenario(&s, options);
                (p, r)
            })
            .collect();
    }
    let chunk = parsed.len().div_ceil(cap);
    let mut out: Vec<(PathBuf, Report)> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for batch in parsed.chunks(chunk) {
            handles.push(scope.spawn(move || {
                batch
                    .iter()
                    .map(|(p, s)| (p.clone(), run_scenario(s, options)))
                    .collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            out.extend(handle.join().expect("runner thread"));
        }
    });
    out
}

fn apply_tolerance_overrides(scenario: &mut Scenario, overrides: &[String]) -> Result<(), String> {
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("tolerance override {item:?} is not KEY=VAL"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| format!("tolerance value {value:?} is not a number"))?;
        match key {
            "rank_gap" => scenario.tolerances.rank_gap = value,
            "residual" => scenario.tolerances.residual = value,
            "isomorphism" => scenario.tolerances.isomorphism = value,
            other => return Err(format!("unknown tolerance key {other:?}")),
        }
    }
    Ok(())
}

fn parse_metric_flag(flag: &str) -> Result<MetricSpec, String> {
    if flag == "identity" {
        return Ok(MetricSpec::identity());
    }
    if let Some(rest) = flag.strip_prefix("random:") {
        let mut parts = rest.split(':');
        let seed: u64 = parts
            .next()
            .ok_or("random metric needs random:<seed>:<C>")?
            .parse()
            .map_err(|_| "bad seed in metric flag".to_string())?;
        let c_max: f64 = parts
            .next()
            .ok_or("random metric needs random:<seed>:<C>")?
            .parse()
            .map_err(|_| "bad C in metric flag".to_string())?;
        return Ok(MetricSpec {
            model: MetricModel::Random,
            seed,
            c_max,
            terms: 24,
            file: None,
        });
    }
    Err(format!("unknown metric flag {flag:?}"))
}

fn print_summary(report: &Report) {
    for t in &report.tasks {
        print_task_line(t);
    }
    println!(
        "scenario: {}",
        if report.passed { "PASS" } else { "FAIL" }
    );
}

fn print_task_line(t: &TaskResult) {
    let status = if t.passed { "PASS" } else { "FAIL" };
    let mut extra = String::new();
    if let Some(dims) = &t.dims {
        extra.push_str(&format!(" dims={dims:?}"));
    }
    if let Some(m) = t.oracle_match {
        extra.push_str(&format!(" oracle_match={m}"));
    }
    if let Some(note) = &t.note {
        extra.push_str(&format!(" ({note})"));
    }
    println!("{status}: {}{extra}", t.task);
}
