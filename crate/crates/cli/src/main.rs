//! `feedlink`: optimal feed-link placement from the command line.

mod input;
mod report;
mod svg;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use feedlink_core::oracle::{grid_best, OracleConfig};
use feedlink_core::{solve, GeomError, PolygonChain, SolveError, Solution, SweepError};
use thiserror::Error;

use input::{Format, ProblemInput};
use report::{CheckReport, OracleReport, SolveReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid geometry: {0}")]
    Geom(#[from] GeomError),
    #[error("internal error: {0}")]
    Internal(#[from] SweepError),
    #[error("check failed: solver {solve} vs oracle {oracle} (relative gap {gap:e})")]
    Check { solve: f64, oracle: f64, gap: f64 },
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Geom(g) => g.into(),
            SolveError::Sweep(s) => s.into(),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Geom(_) => 2,
            CliError::Check { .. } => 3,
            CliError::Internal(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Compute the optimal feed-link.
    Solve,
    /// Brute-force grid search over feed-link positions.
    Oracle,
    /// Dump realized lever states and retargeting points.
    States,
    /// Compare the solver against the grid search.
    Check,
}

#[derive(Debug, Parser)]
#[command(name = "feedlink", version, about = "Feed-link placement minimizing the maximum dilation")]
struct Args {
    #[arg(value_enum, default_value_t = Command::Solve)]
    command: Command,
    /// Problem file.
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Render the polygon, the focus, the feed-link and the witness.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Render the distance plot with the lever at the optimum.
    #[arg(long)]
    plot_svg: Option<PathBuf>,
    /// Grid points for the oracle; 100 n when absent.
    #[arg(long)]
    grid_density: Option<usize>,
    /// Relative tolerance of `check`.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Write the sweep event trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Worker threads for the oracle grid.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(args: &Args, text: &str) -> Result<(), CliError> {
    match &args.output {
        Some(path) => write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn load(args: &Args) -> Result<PolygonChain, CliError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    ProblemInput::parse(&text, args.format)?.chain()
}

fn timed_solve(chain: &PolygonChain) -> Result<(Solution, SolveReport), CliError> {
    let start = Instant::now();
    let sol = solve(chain)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let report = SolveReport::new(&sol, chain.perimeter(), chain.len(), ms);
    Ok((sol, report))
}

fn oracle(args: &Args, chain: &PolygonChain, extra: &[f64]) -> OracleReport {
    let cfg = OracleConfig {
        q_samples: args.grid_density,
        threads: args.threads.max(1),
        ..OracleConfig::default()
    };
    let samples = args.grid_density.unwrap_or(100 * chain.len()).max(chain.len());
    let (t, d) = grid_best(chain, &cfg, extra);
    OracleReport::new(t, chain.point_at(t), d, samples)
}

fn side_outputs(args: &Args, chain: &PolygonChain, sol: &Solution) -> Result<(), CliError> {
    if let Some(path) = &args.svg {
        write_file(path, &svg::polygon_svg(chain, &sol.result))?;
    }
    if let Some(path) = &args.plot_svg {
        let slope = sol.sides.slopes(sol.result.t_star).0;
        write_file(path, &svg::plot_svg(&sol.sides.left_segs, &sol.result, slope))?;
    }
    if let Some(path) = &args.trace {
        let mut recs = report::trace_lines("left", sol.sides.left.trace());
        recs.extend(report::trace_lines("right", sol.sides.right.trace()));
        write_file(path, &report::lines(&recs))?;
    }
    Ok(())
}

fn run(args: &Args) -> Result<(), CliError> {
    let chain = load(args)?;
    match args.command {
        Command::Solve => {
            let (sol, report) = timed_solve(&chain)?;
            side_outputs(args, &chain, &sol)?;
            emit(args, &json(&report))
        }
        Command::Oracle => {
            let sol = solve(&chain).ok();
            let extra: Vec<f64> = sol
                .iter()
                .flat_map(|s| s.merged.entries.iter().map(|e| e.p))
                .collect();
            emit(args, &json(&oracle(args, &chain, &extra)))
        }
        Command::States => {
            let sol = solve(&chain)?;
            side_outputs(args, &chain, &sol)?;
            let mu = chain.perimeter();
            let mut text = report::lines(&report::state_records(&sol.sides.left, &sol.sides.right, mu));
            text.push_str(&report::lines(&report::retarget_records("left", &sol.sides.left_retargets)));
            text.push_str(&report::lines(&report::retarget_records("right", &sol.sides.right_retargets)));
            emit(args, &text)
        }
        Command::Check => {
            let (sol, solved) = timed_solve(&chain)?;
            side_outputs(args, &chain, &sol)?;
            let mut extra: Vec<f64> = sol.merged.entries.iter().map(|e| e.p).collect();
            extra.push(sol.result.t_star);
            let grid = oracle(args, &chain, &extra);
            let (ds, dor) = (solved.dilation, grid.dilation);
            let gap = (ds - dor).abs() / dor;
            let passed = gap <= args.tolerance && ds <= dor * (1.0 + args.tolerance);
            emit(
                args,
                &json(&CheckReport {
                    solve: solved,
                    oracle: grid,
                    relative_gap: gap,
                    tolerance: args.tolerance,
                    passed,
                }),
            )?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Check {
                    solve: ds,
                    oracle: dor,
                    gap,
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("feedlink: {e}");
            ExitCode::from(e.code())
        }
    }
}
