use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rabin_index::bench::{self, BenchError};
use rabin_index::generators::gen_family_named;
use rabin_index::oracle::{self, Relation, DEFAULT_CAP};
use rabin_index::*;

#[derive(Parser)]
#[command(name = "rabin", version, about = "Reduce, solve and check parity games in PGSolver format")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark family or a random game.
    Gen {
        /// Family name, or `random`.
        family: String,
        /// Family parameters (`5,10`, `[100]`) or `nodes/minOut/maxOut/maxColor`.
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce the colors of a game.
    Index {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Search nodes one exact cycle query may expand.
        #[arg(long)]
        budget: Option<u64>,
        /// Continue with the abstract reduction when the exact search runs out of budget.
        #[arg(long, value_enum)]
        fallback: Option<Fallback>,
        /// Print the per-iteration color changes.
        #[arg(long)]
        trace: bool,
        /// Write the recolored game here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a game, optionally compressing colors first.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Pre::None)]
        pre: Pre,
    },
    /// Check a solution against its game.
    Verify { file: PathBuf, solution: PathBuf },
    /// Compare the colorings of two games over the same arena.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = RelationArg::Simple)]
        relation: RelationArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Exhaustive oracles for small games.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Decide whether the abstract Rabin index is below K.
    Member {
        file: PathBuf,
        #[arg(short)]
        k: Color,
    },
    /// Run a benchmark spec and write one CSV row per entry.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Smallest index of an equivalent coloring, with a witness.
    RabinIndex {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RelationArg::Simple)]
        relation: RelationArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Static,
    Alpha,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fallback {
    Alpha,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pre {
    None,
    Static,
    Alpha,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Simple,
    Alpha,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Relation {
        match r {
            RelationArg::Simple => Relation::SimpleCycles,
            RelationArg::Alpha => Relation::ClosedWalks,
        }
    }
}

/// A failure with its stderr category and exit code.
struct Failure {
    category: &'static str,
    code: u8,
    message: String,
}

impl Failure {
    fn new(category: &'static str, code: u8, message: impl ToString) -> Self {
        Failure { category, code, message: message.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new("parse", 3, e)
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::new("params", 1, e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::NodeCap { .. } => Failure::new("cap", 5, e),
            _ => Failure::new("oracle", 1, e),
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::BudgetExhausted { .. } => Failure::new("budget", 4, e),
            ReduceError::InvalidBound => Failure::new("params", 1, e),
        }
    }
}

impl From<ArenaError> for Failure {
    fn from(e: ArenaError) -> Self {
        Failure::new("arena", 1, e)
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Spec { .. } => Failure::new("parse", 3, e),
            _ => Failure::new("io", 1, e),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new("io", 1, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new("io", 1, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ParityGame, Failure> {
    parse_pgsolver(&read(path)?).map_err(|e| Failure::new("parse", 3, format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn reduce(
    game: &ParityGame,
    mode: Mode,
    budget: Option<u64>,
    fallback: Option<Fallback>,
) -> Result<(Coloring, Option<ReductionReport>), Failure> {
    let (arena, c) = (game.arena(), game.coloring());
    match mode {
        Mode::Static => Ok((static_compress(c), None)),
        Mode::Alpha => {
            let r = rabin(arena, c, OracleMode::AbstractCycle)?;
            Ok((r.coloring, Some(r.report)))
        }
        Mode::Exact => {
            let budget = budget.map_or_else(SearchBudget::default, SearchBudget::limited);
            match rabin(arena, c, OracleMode::ExactSimpleCycle(budget)) {
                Ok(r) => Ok((r.coloring, Some(r.report))),
                Err(ReduceError::BudgetExhausted { node, gamma, partial }) if fallback.is_some() => {
                    eprintln!("warning: exact search exhausted its budget at node {node}, color {gamma}; continuing abstractly");
                    let start = partial.map_or_else(|| c.clone(), |p| p.coloring);
                    let r = rabin(arena, &start, OracleMode::AbstractCycle)?;
                    Ok((r.coloring, Some(r.report)))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn same_arena(a: &ParityGame, b: &ParityGame) -> Result<(), Failure> {
    if a.arena().successor_lists() != b.arena().successor_lists() {
        return Err(Failure::new("mismatch", 1, "the two games have different edges"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { family, params, seed, output } => {
            let game = if family.eq_ignore_ascii_case("random") {
                let cfg: RandomConfig = params.parse()?;
                gen_random(&cfg.with_seed(seed))?
            } else {
                gen_family_named(&family, &params)?
            };
            emit(output.as_deref(), &write_pgsolver(&game))
        }
        Command::Index { file, mode, budget, fallback, trace, output } => {
            let game = load(&file)?;
            let (coloring, report) = reduce(&game, mode, budget, fallback)?;
            let iterations = report.as_ref().map_or(0, |r| r.iteration_count());
            println!("index: {} -> {}, iterations: {iterations}", game.coloring().index(), coloring.index());
            if let (true, Some(r)) = (trace, &report) {
                print!("{}", r.to_trace());
            }
            if let Some(path) = output {
                write(&path, &write_pgsolver(&game.recolored(coloring)?))?;
            }
            Ok(())
        }
        Command::Solve { file, pre } => {
            let game = load(&file)?;
            let solved = match pre {
                Pre::None => zielonka_solve(&game),
                Pre::Static => zielonka_solve(&game.recolored(static_compress(game.coloring()))?),
                Pre::Alpha => {
                    let r = rabin(game.arena(), game.coloring(), OracleMode::AbstractCycle)?;
                    zielonka_solve(&game.recolored(r.coloring)?)
                }
            };
            print!("{}", write_solution(&game, &solved));
            Ok(())
        }
        Command::Verify { file, solution } => {
            let game = load(&file)?;
            let sol = parse_solution(&game, &read(&solution)?)?;
            check_solution(&game, &sol).map_err(|e| Failure::new("verify", 6, format!("{}: {e}", e.category())))?;
            println!("valid");
            Ok(())
        }
        Command::Equiv { first, second, relation, cap } => {
            let (a, b) = (load(&first)?, load(&second)?);
            same_arena(&a, &b)?;
            if oracle::equivalent(a.arena(), a.coloring(), b.coloring(), relation.into(), cap)? {
                println!("equivalent");
                Ok(())
            } else {
                println!("not equivalent");
                Err(Failure::new("equiv", 6, "colorings are not equivalent"))
            }
        }
        Command::Oracle(OracleCommand::RabinIndex { file, relation, cap }) => {
            let game = load(&file)?;
            let (k, witness) = oracle::rabin_index_witness(game.arena(), game.coloring(), relation.into(), cap)?;
            println!("rabin index: {k}");
            let colors: Vec<String> = witness.values().iter().map(|c| c.to_string()).collect();
            println!("witness: {}", colors.join(" "));
            Ok(())
        }
        Command::Member { file, k } => {
            let game = load(&file)?;
            println!("member: {}", abstract_membership(&game, k)?);
            Ok(())
        }
        Command::Bench { spec, runs, out } => {
            let entries = bench::parse_spec(&read(&spec)?)?;
            let rows = bench::bench_run(&entries, runs);
            for row in &rows {
                if let Some(e) = &row.error {
                    eprintln!("warning: {}: {e}", row.game);
                }
            }
            emit(out.as_deref(), &bench::to_csv(&rows))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.category, f.message);
            ExitCode::from(f.code)
        }
    }
}
