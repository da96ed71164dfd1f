//! `otinf` command line: parse problem files, run a solver, print a report.
//!
//! Exit codes: 0 on success, 2 for invalid input (the error name goes to
//! standard error), 3 when `--check` finds a cross-method mismatch.

pub mod bench;
pub mod gen;
pub mod input;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use otinf::{
    default_relaxed_tolerance, oracle, solve_bisect, solve_kantorovich_with, solve_monge_with,
    solve_relaxed, validate_problem, CostMatrix, Marginals, RelaxedSolution, SolveReport,
    SweepMode,
};

use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "otinf",
    version,
    about = "Exact discrete bottleneck optimal transport"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Re-test feasibility after every admitted edge instead of batching
    /// equal-cost groups; same results, mainly for comparison.
    #[arg(long, global = true)]
    pub per_edge: bool,
    /// Cross-check the result with an independent method; mismatches exit 3.
    #[arg(long, global = true)]
    pub check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize over permutations the largest assigned cost.
    Monge {
        /// Cost matrix CSV (headerless, decimal entries).
        #[arg(long)]
        cost: PathBuf,
    },
    /// Minimize over couplings the largest cost that carries mass.
    Kantorovich {
        #[arg(long)]
        cost: PathBuf,
        /// Source weights, one decimal per line or a JSON string array;
        /// uniform 1/n when omitted.
        #[arg(long)]
        a: Option<PathBuf>,
        /// Target weights; uniform 1/m when omitted.
        #[arg(long)]
        b: Option<PathBuf>,
    },
    /// Approximate the relaxed minimax over doubly stochastic matrices.
    Relaxed {
        #[arg(long)]
        cost: PathBuf,
        /// Bisection accuracy; defaults to 1e-9 times the largest entry.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the naive reference solvers instead of the production ones.
    Oracle {
        #[command(subcommand)]
        problem: OracleProblem,
    },
    /// Time the solvers on seeded random square instances.
    Bench {
        /// Comma-separated sizes, e.g. 50,100,200.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleProblem {
    /// Brute-force enumeration of all permutations (n <= 9).
    Monge {
        #[arg(long)]
        cost: PathBuf,
    },
    /// Ascending threshold scan with cut-based feasibility (n, m <= 20).
    Kantorovich {
        #[arg(long)]
        cost: PathBuf,
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum Failure {
    Invalid(otinf::Error),
    Io(PathBuf, std::io::Error),
    Check(String),
}

impl From<otinf::Error> for Failure {
    fn from(err: otinf::Error) -> Self {
        Failure::Invalid(err)
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(Failure::Invalid(err)) => {
            eprintln!("{}: {err}", err.name());
            2
        }
        Err(Failure::Io(path, err)) => {
            eprintln!("Io: {}: {err}", path.display());
            2
        }
        Err(Failure::Check(msg)) => {
            eprintln!("cross-check mismatch: {msg}");
            3
        }
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let mode = if cli.per_edge {
        SweepMode::PerEdge
    } else {
        SweepMode::Batched
    };
    match &cli.command {
        Command::Monge { cost } => {
            let c = input::read_cost(cost)?;
            let start = Instant::now();
            let solved = solve_monge_with(&c, mode)?;
            let ms = elapsed_ms(start);
            if cli.check {
                check_monge(&c, &solved, mode)?;
            }
            Ok(report::from_solve("monge", &solved, ms).render(cli.format))
        }
        Command::Kantorovich { cost, a, b } => {
            let c = input::read_cost(cost)?;
            let marg = load_marginals(&c, a.as_deref(), b.as_deref())?;
            let start = Instant::now();
            let solved = solve_kantorovich_with(&c, &marg, mode)?;
            let ms = elapsed_ms(start);
            if cli.check {
                check_kantorovich(&c, &marg, &solved, mode)?;
            }
            Ok(report::from_solve("kantorovich", &solved, ms).render(cli.format))
        }
        Command::Relaxed { cost, tol } => {
            let c = input::read_cost(cost)?;
            let eps = tol.unwrap_or_else(|| default_relaxed_tolerance(&c));
            let start = Instant::now();
            let sol = solve_relaxed(&c, eps)?;
            let ms = elapsed_ms(start);
            if cli.check {
                check_relaxed(&c, &sol)?;
            }
            Ok(report::from_relaxed(&c, &sol, ms).render(cli.format))
        }
        Command::Oracle { problem } => match problem {
            OracleProblem::Monge { cost } => {
                let c = input::read_cost(cost)?;
                let start = Instant::now();
                let value = oracle::brute_force_monge(&c)?;
                let ms = elapsed_ms(start);
                if cli.check {
                    let main = solve_monge_with(&c, mode)?;
                    ensure(
                        value == main.value,
                        format!("oracle value {value} vs solver {}", main.value),
                    )?;
                }
                Ok(report::from_oracle(value, ms).render(cli.format))
            }
            OracleProblem::Kantorovich { cost, a, b } => {
                let c = input::read_cost(cost)?;
                let marg = load_marginals(&c, a.as_deref(), b.as_deref())?;
                let start = Instant::now();
                let value = oracle::threshold_scan(&c, &marg)?;
                let ms = elapsed_ms(start);
                if cli.check {
                    let main = solve_kantorovich_with(&c, &marg, mode)?;
                    ensure(
                        value == main.value,
                        format!("oracle value {value} vs solver {}", main.value),
                    )?;
                }
                Ok(report::from_oracle(value, ms).render(cli.format))
            }
        },
        Command::Bench {
            sizes,
            trials,
            seed,
        } => Ok(bench::run(sizes, *trials as usize, *seed)?.render(cli.format)),
    }
}

fn load_marginals(
    cost: &CostMatrix,
    a: Option<&Path>,
    b: Option<&Path>,
) -> Result<Marginals, Failure> {
    if a.is_none() && b.is_none() {
        return Ok(Marginals::uniform(cost));
    }
    let a_texts = match a {
        Some(path) => input::read_weights(path)?,
        None => uniform_texts(cost.rows()),
    };
    let b_texts = match b {
        Some(path) => input::read_weights(path)?,
        None => uniform_texts(cost.cols()),
    };
    validate_problem(cost, &a_texts, &b_texts).map_err(Failure::Invalid)
}

fn uniform_texts(n: usize) -> Vec<String> {
    vec![format!("1/{n}"); n]
}

fn check_monge(cost: &CostMatrix, got: &SolveReport, used: SweepMode) -> Result<(), Failure> {
    let other = solve_monge_with(cost, opposite(used))?;
    ensure(
        other.value == got.value
            && other.iterations == got.iterations
            && other.witness_edge == got.witness_edge,
        format!(
            "sweep modes disagree: value {} vs {}, stop {} vs {}",
            got.value, other.value, got.iterations, other.iterations
        ),
    )?;
    if cost.rows() <= oracle::BRUTE_FORCE_LIMIT {
        let brute = oracle::brute_force_monge(cost)?;
        ensure(
            brute == got.value,
            format!("brute force {brute} vs solver {}", got.value),
        )?;
    }
    Ok(())
}

fn check_kantorovich(
    cost: &CostMatrix,
    marg: &Marginals,
    got: &SolveReport,
    used: SweepMode,
) -> Result<(), Failure> {
    let other = solve_kantorovich_with(cost, marg, opposite(used))?;
    ensure(
        other.value == got.value
            && other.iterations == got.iterations
            && other.witness_edge == got.witness_edge,
        format!(
            "sweep modes disagree: value {} vs {}, stop {} vs {}",
            got.value, other.value, got.iterations, other.iterations
        ),
    )?;
    let bisect = solve_bisect(cost, marg)?;
    ensure(
        bisect.value == got.value
            && bisect.iterations == got.iterations
            && bisect.witness_edge == got.witness_edge,
        format!(
            "bisection found {} at {}, sweep {} at {}",
            bisect.value, bisect.iterations, got.value, got.iterations
        ),
    )?;
    match oracle::threshold_scan(cost, marg) {
        Ok(scan) => ensure(
            scan == got.value,
            format!("threshold scan {scan} vs solver {}", got.value),
        ),
        Err(otinf::Error::TooLarge { .. }) => Ok(()),
        Err(err) => Err(Failure::Invalid(err)),
    }
}

fn check_relaxed(cost: &CostMatrix, sol: &RelaxedSolution) -> Result<(), Failure> {
    for i in 0..sol.n {
        let row: f64 = (0..sol.n).map(|j| sol.plan_entry(i, j)).sum();
        let col: f64 = (0..sol.n).map(|j| sol.plan_entry(j, i)).sum();
        ensure((row - 1.0).abs() <= 1e-9, format!("row {i} sums to {row}"))?;
        ensure(
            (col - 1.0).abs() <= 1e-9,
            format!("column {i} sums to {col}"),
        )?;
    }
    let weighted = sol.weighted_bottleneck(cost);
    ensure(
        weighted <= sol.value + sol.tolerance + 1e-12,
        format!("plan level {weighted} above value {}", sol.value),
    )?;
    let monge = solve_monge_with(cost, SweepMode::Batched)?;
    ensure(
        sol.value <= monge.value + 1e-6,
        format!(
            "relaxed {} above assignment value {}",
            sol.value, monge.value
        ),
    )
}

fn opposite(mode: SweepMode) -> SweepMode {
    match mode {
        SweepMode::Batched => SweepMode::PerEdge,
        SweepMode::PerEdge => SweepMode::Batched,
    }
}

fn ensure(ok: bool, msg: String) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg))
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
