use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kncomp::workload::{self, Family};
use kncomp::{count, parse_edge_list, verify, CountError, CountResult, Method, Subtrahend};

/// Exact spanning-tree counts for K_n minus a subgraph.
#[derive(Parser)]
#[command(name = "kncomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count spanning trees of K_n - H.
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "auto")]
        method: Method,
        /// Print a human-readable summary on stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Run an engine and an oracle on the same input and compare.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        against: Method,
        #[arg(long)]
        verbose: bool,
        /// Adds one to the engine's answer.
        #[arg(long, hide = true)]
        debug_perturb: bool,
    },
    /// Time an engine over a family of instances; prints CSV.
    Bench {
        #[arg(long)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Run over a random 62-bit prime field instead of the rationals.
        #[arg(long)]
        mod_p: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputChoice {
    /// Edge-list file for H.
    #[arg(long)]
    h: Option<PathBuf>,
    /// H as a complete split graph: clique size, stable size.
    #[arg(long, value_name = "K,S")]
    csplit: Option<Split>,
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    choice: InputChoice,
}

#[derive(Clone, Copy)]
struct Split(usize, usize);

impl std::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (k, st) = s.split_once(',').ok_or("expected K,S")?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        Ok(Split(parse(k)?, parse(st)?))
    }
}

/// Anything that ends the run early, with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl fmt::Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: format!("{}: {e}", e.kind()),
        }
    }
}

fn load(input: &Input) -> Result<Subtrahend, Failure> {
    match (&input.choice.h, input.choice.csplit) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let g = parse_edge_list(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Ok(Subtrahend::Graph(g))
        }
        (None, Some(Split(clique, stable))) => Ok(Subtrahend::CompleteSplit { clique, stable }),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn summary(r: &CountResult) -> String {
    let mut s = format!(
        "tau(K_{} - H) = {} via {} on {} subtrahend vertices in {:.3} ms",
        r.n, r.tau, r.method_used, r.k_or_p, r.elapsed_ms
    );
    if let Some(reason) = &r.fallback_reason {
        s.push_str(&format!(" (fell back: {reason})"));
    }
    s
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("results serialize")
}

fn seed() -> Result<u64, Failure> {
    match std::env::var("KNCOMP_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|e| Failure::input(format!("KNCOMP_SEED={s:?}: {e}"))),
        Err(_) => Ok(1),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Count {
            input,
            method,
            verbose,
        } => {
            let h = load(&input)?;
            let r = count(input.n, &h, method)?;
            println!("{}", json(&r));
            if verbose {
                eprintln!("{}", summary(&r));
            }
        }
        Command::Verify {
            input,
            method,
            against,
            verbose,
            debug_perturb,
        } => {
            if !against.is_oracle() {
                return Err(Failure::input(format!(
                    "--against must be an oracle, got {against}"
                )));
            }
            let h = load(&input)?;
            let v = verify(input.n, &h, method, against, debug_perturb)?;
            println!("{}", json(&v));
            eprintln!(
                "{}: {}  {}: {}  {}",
                v.engine.method_used,
                v.engine.tau,
                v.oracle,
                v.oracle_tau,
                if v.equal { "equal" } else { "MISMATCH" }
            );
            if verbose {
                eprintln!("{}", summary(&v.engine));
            }
            if !v.equal {
                return Err(Failure {
                    code: 3,
                    message: "engine and oracle disagree".into(),
                });
            }
        }
        Command::Bench {
            family,
            sizes,
            mod_p,
        } => {
            let rows = workload::run(family, &sizes, mod_p, seed()?)?;
            print!("{}", workload::to_csv(&rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
