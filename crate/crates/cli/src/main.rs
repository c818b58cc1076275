mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use chainforge::number::parse_q;
use chainforge::{Error, Q};

#[derive(Debug, Parser)]
#[command(name = "chainforge", version, about = "Flat norms, fillings and systoles of chains mod p")]
#[command(args_override_self = true)]
struct Cli {
    /// File of `key = value` defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn modulus(s: &str) -> Result<i64, String> {
    match s.parse::<i64>() {
        Ok(p) if p >= 2 => Ok(p),
        _ => Err(format!("modulus must be an integer >= 2, got {s:?}")),
    }
}

#[derive(Debug, Clone, Args)]
struct ChainInput {
    /// Chain JSON (`dim`, `modulus`, `coeffs`, optional embedded `complex`).
    #[arg(long, alias = "cycle", value_name = "PATH")]
    chain: PathBuf,
    /// Complex the chain lives on (`.off` or `.json`); overrides an embedded complex.
    #[arg(long, alias = "complex", value_name = "PATH")]
    ambient: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Strategy {
    Farthest,
    Index,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FillKind {
    Exact,
    Greedy,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Flat norm (or flat norm mod p) with its optimal decomposition.
    Flatnorm {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long, value_parser = modulus)]
        p: Option<i64>,
        /// Solve the LP relaxation instead of the integer program.
        #[arg(long)]
        relaxed: bool,
    },
    /// Slice of a chain by a vertex function, or its whole spectrum.
    Slice {
        #[command(flatten)]
        input: ChainInput,
        /// Vertex values: array, `{"values": [...]}` or object keyed by vertex.
        #[arg(long, value_name = "PATH")]
        function: PathBuf,
        #[arg(long, value_parser = modulus)]
        p: Option<i64>,
        /// Slice at this level only (must not be a vertex value).
        #[arg(long, value_parser = rational)]
        at: Option<Q>,
    },
    /// Maximal ε-net and Kuratowski embedding of a distance matrix.
    Embed {
        #[arg(long, value_name = "PATH")]
        metric: PathBuf,
        #[arg(long, value_parser = rational)]
        epsilon: Q,
        #[arg(long, value_enum, default_value = "farthest")]
        strategy: Strategy,
    },
    /// Vietoris–Rips complex of a distance matrix.
    Rips {
        #[arg(long, value_name = "PATH")]
        metric: PathBuf,
        #[arg(long, value_parser = rational)]
        scale: Q,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = chainforge::metric::DEFAULT_RIPS_BUDGET)]
        budget: usize,
        /// Also write the complex as JSON to this path.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Exact mod-2 filling radius of a cycle.
    Fillrad {
        #[command(flatten)]
        input: ChainInput,
    },
    /// Filling volume, exact or by the isoperimetric construction.
    Fillvol {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long, value_parser = modulus, default_value = "2")]
        p: i64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: FillKind,
    },
    /// Ball decomposition of a cycle mod p.
    Decompose {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long, value_parser = modulus, default_value = "2")]
        p: i64,
    },
    /// Systole of a closed surface, with the Loewner comparison on tori.
    Systole {
        #[arg(long, value_name = "PATH")]
        mesh: PathBuf,
    },
    /// Systolic inequality chain for a closed manifold mesh.
    Verify {
        #[arg(long, value_name = "PATH")]
        mesh: PathBuf,
        #[arg(long, value_parser = rational, default_value = "1/2")]
        epsilon: Q,
        #[arg(long, value_enum, default_value = "farthest")]
        strategy: Strategy,
        #[arg(long, default_value_t = chainforge::metric::DEFAULT_RIPS_BUDGET)]
        budget: usize,
    },
    /// Quasi-minimizing filling by penalized local search, with density profiles.
    Ekeland {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long, value_parser = modulus, default_value = "2")]
        p: i64,
        #[arg(long, value_parser = rational, default_value = "1/2")]
        epsilon: Q,
        /// Independent searches with shuffled move orders; the first scans in index order.
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Writes the deterministic test corpus.
    Corpus {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "6,12,24,48")]
        circles: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        tori: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "6")]
        hex_tori: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "10,16")]
        random: Vec<usize>,
    },
}

/// Input problems exit with 2, failed checks and solver failures with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Certificate(_)
        | Error::Solver(_)
        | Error::Numeric(_)
        | Error::BudgetExceeded { .. }
        | Error::NoAdmissibleRadius { .. }
        | Error::NoVanishingSlice { .. } => 1,
        _ => 2,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CHAINFORGE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("CHAINFORGE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("CHAINFORGE_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let args = match config::expand(std::env::args().collect(), &names) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match commands::run(cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
            let written = match &cli.json {
                Some(path) => std::fs::write(path, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if let Some(reason) = outcome.failed {
                eprintln!("check failed: {reason}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
