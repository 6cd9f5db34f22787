//! `seedpattern`: walks, identity checks, the principal extension and the A2
//! tables from the command line.
//!
//! Exit codes: 0 success, 1 runtime error (for instance the term ceiling),
//! 2 usage or parse error, 3 an identity failed.

mod commands;

use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seedpattern::poly::set_term_limit;
use seedpattern::{Error, ExchangeMatrix, IntMatrix};

use commands::Outcome;

/// Overrides the polynomial term ceiling.
const MAX_TERMS_VAR: &str = "SEEDPATTERN_MAX_TERMS";

#[derive(Parser)]
#[command(name = "seedpattern", version, about = "C-, G-, F-matrices and F-polynomials of seed patterns")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the pattern node at the end of a walk.
    Mutate(MutateArgs),
    /// Check initial-seed transforms, transpose dualities and involutions.
    CheckDuality(DualityArgs),
    /// Print the principal extension and check its block identities.
    Extend(WalkArgs),
    /// Reproduce the type A2 tables.
    TablesA2(TablesArgs),
    /// Run the seeded random identity suite.
    RandomSuite(SuiteArgs),
}

#[derive(Args)]
struct MatrixArg {
    /// Exchange matrix: JSON rows such as '[[0,1],[-1,0]]', a JSON object
    /// {"rows", "cols", "entries"}, or a path to a file holding either.
    #[arg(long)]
    matrix: String,
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    matrix: MatrixArg,

    /// Comma-separated 1-based mutation labels, e.g. '2,1,2'.
    #[arg(long, default_value = "")]
    walk: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SemifieldArg {
    /// Principal coefficients, Trop(y).
    Tropical,
    /// Trop(y⁻¹).
    Inverted,
    /// Subtraction-free rational functions.
    Universal,
    /// The one-element semifield.
    One,
}

#[derive(Args)]
struct MutateArgs {
    #[command(flatten)]
    walk: WalkArgs,

    /// Run every redundant formula and invariant at each step.
    #[arg(long)]
    checked: bool,

    /// Also compute cluster variables and coefficients over this semifield.
    #[arg(long, value_enum)]
    semifield: Option<SemifieldArg>,
}

#[derive(Args)]
struct DualityArgs {
    #[command(flatten)]
    matrix: MatrixArg,

    /// A single walk; without it every walk up to --max-len is checked.
    #[arg(long)]
    walk: Option<String>,

    #[arg(long, default_value_t = 5)]
    max_len: usize,

    /// Also check re-rooting of cluster variables and coefficients by ρ_k
    /// in the universal semifield.
    #[arg(long)]
    rho: bool,
}

#[derive(Args)]
struct TablesArgs {
    /// One of root-seeds, root-matrices, moved-seeds, moved-matrices.
    #[arg(long)]
    table: Option<String>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_entry: Option<i64>,
    #[arg(long)]
    walk_len: Option<usize>,
    #[arg(long)]
    long_cases: Option<usize>,
    #[arg(long)]
    long_walk: Option<usize>,
    /// Comma-separated subset of identities, principal-extension, laurent.
    #[arg(long)]
    groups: Option<String>,
}

fn parse_matrix(arg: &str) -> Result<ExchangeMatrix, Error> {
    let trimmed = arg.trim();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(Path::new(trimmed)).map_err(|e| Error::Parse(format!("{trimmed}: {e}")))?
    };
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    ExchangeMatrix::new(IntMatrix::from_json(&v)?)
}

fn parse_walk(s: &str, n: usize) -> Result<Vec<usize>, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let label: usize = t.trim().parse().map_err(|_| Error::Parse(format!("bad walk label {t:?}")))?;
            if label == 0 || label > n {
                return Err(Error::Parse(format!("walk label {label} outside 1..={n}")));
            }
            Ok(label - 1)
        })
        .collect()
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::IndexOutOfRange { .. }
        | Error::DimensionMismatch(_)
        | Error::NotSkewSymmetrizable(_)
        | Error::MissingGenerator(_) => 2,
        Error::Verification { .. }
        | Error::SignIncoherent { .. }
        | Error::HMismatch { .. }
        | Error::CancellationFailure
        | Error::NonLaurent(_)
        | Error::NonIntegerBlock { .. }
        | Error::NotDivisible => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Mutate(a) => {
            let b = parse_matrix(&a.walk.matrix.matrix)?;
            let walk = parse_walk(&a.walk.walk, b.rank())?;
            commands::mutate(&b, &walk, a.checked, a.semifield.map(commands::semifield_kind))
        }
        Command::CheckDuality(a) => {
            let b = parse_matrix(&a.matrix.matrix)?;
            let walks = match &a.walk {
                Some(w) => vec![parse_walk(w, b.rank())?],
                None => commands::all_walks(b.rank(), a.max_len),
            };
            commands::check_duality(&b, &walks, a.rho)
        }
        Command::Extend(a) => {
            let b = parse_matrix(&a.matrix.matrix)?;
            let walk = parse_walk(&a.walk, b.rank())?;
            commands::extend(&b, &walk)
        }
        Command::TablesA2(a) => commands::tables_a2(a.table.as_deref()),
        Command::RandomSuite(a) => {
            let mut config = seedpattern::suite::SuiteConfig::default();
            config.max_rank = a.rank.unwrap_or(config.max_rank);
            config.cases = a.cases.unwrap_or(config.cases);
            config.seed = a.seed.unwrap_or(config.seed);
            config.max_entry = a.max_entry.unwrap_or(config.max_entry);
            config.max_walk = a.walk_len.unwrap_or(config.max_walk);
            config.long_cases = a.long_cases.unwrap_or(config.long_cases);
            config.long_walk = a.long_walk.unwrap_or(config.long_walk);
            if config.max_rank == 0 || config.max_entry < 1 {
                return Err(Error::Parse("--rank and --max-entry must be positive".into()));
            }
            let groups = commands::parse_groups(a.groups.as_deref())?;
            commands::random_suite(&config, &groups)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var(MAX_TERMS_VAR) {
        match v.trim().parse::<usize>() {
            Ok(limit) if limit > 0 => set_term_limit(limit),
            _ => {
                eprintln!("error: {MAX_TERMS_VAR} must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = match format {
                Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Text => write!(stdout, "{}", out.text),
            };
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
