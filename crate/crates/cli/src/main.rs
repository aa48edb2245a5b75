//! `barriers`: command-line front end for the barriers library.
//!
//! Exit codes: 0 clean, 1 a check found violations or counterexamples,
//! 2 bad usage or input, 3 an internal invariant broke.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use barriers::diag::{DefeaterKind, OracleFamily};
use barriers::reduction::Reduction;
use barriers::Ordinal;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{DiagArgs, Outcome, ReduceArgs, SolveArgs, Status};

#[derive(Parser)]
#[command(name = "barriers", version, about = "Barriers, canonical barriers and Ramsey-type reductions")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel checks (0 = one per core).
    #[arg(long, global = true, env = "BARRIERS_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BarrierArg {
    /// Shorthand (`schreier`, `exact:3`, `canonical:w^2`), JSON, or a JSON file.
    #[arg(long)]
    barrier: String,
}

#[derive(Subcommand)]
enum Command {
    /// List the elements of a barrier inside a finite ground set.
    Front {
        #[command(flatten)]
        barrier: BarrierArg,
        /// `a..b`, `a..=b` or `1,3,5`.
        #[arg(long)]
        ground: String,
    },
    /// Check the Sperner and density axioms on a finite ground set.
    Check {
        #[command(flatten)]
        barrier: BarrierArg,
        #[arg(long)]
        ground: String,
    },
    /// The k-variant of an element.
    Variant {
        #[command(flatten)]
        barrier: BarrierArg,
        /// Element such as `2,4,5`.
        #[arg(long)]
        seq: String,
        #[arg(long)]
        k: u64,
    },
    /// Order type of the lexicographic order on a barrier.
    Ordertype {
        #[command(flatten)]
        barrier: BarrierArg,
    },
    /// Apply a reduction to a coloring, or check it exhaustively.
    Reduce {
        /// fs-to-rt, ts-to-rt, ts-to-fs, rrt-to-rt or rrt2-to-fs.
        #[arg(long)]
        name: String,
        #[command(flatten)]
        barrier: BarrierArg,
        /// Coloring JSON, a JSON file, or a builtin name.
        #[arg(long)]
        coloring: Option<String>,
        #[arg(long)]
        ground: String,
        /// Check every target solution against the source problem.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
        /// Seeded random instances to add to the hand-made ones.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound for rrt-to-rt.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Search for a mono, free, thin or rainbow set.
    Solve {
        #[arg(long, value_parser = ["mono", "free", "thin", "rainbow"])]
        property: String,
        #[command(flatten)]
        barrier: BarrierArg,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        ground: String,
        /// Color universe for thin sets, as a comma list.
        #[arg(long)]
        universe: Option<String>,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
        /// List every witness instead of the least one.
        #[arg(long)]
        all: bool,
    },
    /// Staged colorings that defeat thin and rainbow solutions.
    Diag {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Ordinal index of the stage barrier, such as `w`.
        #[arg(long)]
        alpha: String,
        /// Oracle family JSON or file; empty if omitted.
        #[arg(long)]
        family: Option<String>,
        /// Search for a defeat, as in `e=0,i=2`.
        #[arg(long)]
        verify: Option<String>,
        #[arg(long, default_value_t = 16)]
        bound: u64,
        /// Ground set explored when `--verify` is absent.
        #[arg(long, default_value = "0..=12")]
        ground: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Thin,
    Rainbow,
}

fn run(cli: Cli) -> Result<Outcome> {
    Ok(match cli.command {
        Command::Front { barrier, ground } => {
            commands::front(&input::barrier(&barrier.barrier)?, &input::ground(&ground)?)
        }
        Command::Check { barrier, ground } => {
            commands::check(&input::barrier(&barrier.barrier)?, &input::ground(&ground)?)?
        }
        Command::Variant { barrier, seq, k } => {
            commands::variant(&input::barrier(&barrier.barrier)?, &input::seq(&seq)?, k)?
        }
        Command::Ordertype { barrier } => commands::ordertype(&input::barrier(&barrier.barrier)?)?,
        Command::Reduce {
            name,
            barrier,
            coloring,
            ground,
            check,
            min_size,
            random,
            seed,
            k,
        } => {
            let b = input::barrier(&barrier.barrier)?;
            let g = input::ground(&ground)?;
            commands::reduce(ReduceArgs {
                reduction: Reduction::parse(&name, k)?,
                barrier: &b,
                coloring: coloring.as_deref().map(input::coloring).transpose()?,
                ground: &g,
                check,
                min_size,
                random,
                seed,
            })?
        }
        Command::Solve {
            property,
            barrier,
            coloring,
            ground,
            universe,
            min_size,
            all,
        } => {
            let b = input::barrier(&barrier.barrier)?;
            let g = input::ground(&ground)?;
            commands::solve(SolveArgs {
                property: &property,
                barrier: &b,
                coloring: input::coloring(&coloring)?,
                ground: &g,
                universe: universe.as_deref().map(input::ground).transpose()?,
                min_size,
                all,
            })?
        }
        Command::Diag {
            kind,
            alpha,
            family,
            verify,
            bound,
            ground,
        } => {
            let g = input::ground(&ground)?;
            commands::diag(DiagArgs {
                kind: match kind {
                    Kind::Thin => DefeaterKind::Thin,
                    Kind::Rainbow => DefeaterKind::Rainbow,
                },
                alpha: alpha.parse::<Ordinal>()?,
                family: family.as_deref().map(input::family).transpose()?.unwrap_or_else(OracleFamily::empty),
                verify: verify.as_deref().map(input::verify_target).transpose()?,
                bound,
                ground: &g,
            })?
        }
    })
}

fn is_bug(err: &anyhow::Error) -> bool {
    err.chain()
        .any(|e| e.downcast_ref::<barriers::Error>().is_some_and(barriers::Error::is_bug))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = if json {
                let body = serde_json::to_string_pretty(&out.json).expect("reports serialize");
                writeln!(stdout, "{body}")
            } else {
                write!(stdout, "{}", out.text)
            };
            if written.is_err() {
                return ExitCode::from(2);
            }
            match out.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(1),
                Status::Bug => ExitCode::from(3),
            }
        }
        Err(err) if is_bug(&err) => {
            eprintln!("{err:#}");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
