use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhodge::commands::{cmd_integral, cmd_matrix, cmd_series, SeriesName, SpecInput};
use hhodge::config::{Config, MAX_ORDER};
use hhodge::error::{CliError, Result};
use hhodge::gamma_io::load_tables;
use hhodge::verify::{run_verify, Scope, Target, VerifyConfig};
use hhodge_core::series::DEFAULT_ORDER;
use hhodge_core::surface::MatrixMode;
use hhodge_core::{Rational, StackyType, Theory};
use serde::Serialize;

/// Exact descendant Hurwitz-Hodge integrals for P(1,N) and P(1,1,N).
#[derive(Parser)]
#[command(name = "hhodge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoryArg {
    Line,
    Surface,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Line => Theory::Line,
            TheoryArg::Surface => Theory::Surface,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Consistent,
    Verbatim,
}

impl From<ModeArg> for MatrixMode {
    fn from(m: ModeArg) -> MatrixMode {
        match m {
            ModeArg::Consistent => MatrixMode::Consistent,
            ModeArg::Verbatim => MatrixMode::Verbatim,
        }
    }
}

#[derive(Args)]
struct GammaArgs {
    /// Initial-value table (JSON); may be repeated.
    #[arg(long = "gamma", value_name = "FILE")]
    gamma: Vec<PathBuf>,
    /// Directory whose *.json files are loaded before any --gamma file.
    #[arg(long, env = "HHODGE_GAMMA_DIR", value_name = "DIR")]
    gamma_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one integral given as inline JSON or a JSON file.
    Integral {
        theory: TheoryArg,
        /// {"N", "g", "n", "k", "l"} with optional "initial".
        spec: String,
        #[command(flatten)]
        gamma: GammaArgs,
        #[arg(long, value_enum, default_value = "consistent")]
        matrix_mode: ModeArg,
        /// One-point value for integrals without stacky points.
        #[arg(long)]
        initial: Option<Rational>,
    },
    /// Print a one-point generating series as [t, z, "p/q"] triples.
    Series {
        #[arg(value_enum)]
        name: SeriesName,
        #[arg(long = "n", short = 'n', default_value_t = 2)]
        modulus: u32,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Print the coefficient matrix of a stacky type.
    Matrix {
        theory: TheoryArg,
        #[arg(long = "n", short = 'n')]
        modulus: u32,
        #[arg(long, short = 'g')]
        genus: u32,
        /// Multiplicities n_1,...,n_{N-1}.
        #[arg(long, value_delimiter = ',')]
        mult: Vec<u32>,
        #[arg(long, value_enum, default_value = "consistent")]
        matrix_mode: ModeArg,
    },
    /// Check the recursion relations on seeded random instances.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        #[arg(long, value_enum, default_value = "consistent")]
        matrix_mode: ModeArg,
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        #[command(flatten)]
        gamma: GammaArgs,
    },
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|source| CliError::Json {
        context: "output".into(),
        source,
    })?;
    emit(&s);
    Ok(())
}

// A closed pipe (`hhodge ... | head`) is not an error worth a panic.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{s}") {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("hhodge: {e}");
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Integral {
            theory,
            spec,
            gamma,
            matrix_mode,
            initial,
        } => {
            let tables = load_tables(gamma.gamma_dir.as_deref(), &gamma.gamma)?;
            let input = SpecInput::load(&spec)?;
            let out = cmd_integral(
                theory.into(),
                &input,
                &tables,
                initial.as_ref(),
                matrix_mode.into(),
            )?;
            print_json(&out)
        }
        Command::Series {
            name,
            modulus,
            order,
        } => {
            let config = Config {
                order,
                ..Config::default()
            };
            config.validate()?;
            print_json(&cmd_series(name, modulus, config.order, MAX_ORDER)?)
        }
        Command::Matrix {
            theory,
            modulus,
            genus,
            mult,
            matrix_mode,
        } => {
            let x = StackyType::new(modulus, mult)?;
            print_json(&cmd_matrix(theory.into(), genus, &x, matrix_mode.into())?)
        }
        Command::Verify {
            target,
            seed,
            samples,
            matrix_mode,
            scope,
            gamma,
        } => {
            let config = Config {
                samples,
                seed,
                matrix_mode: matrix_mode.into(),
                gamma_files: gamma.gamma.clone(),
                gamma_dir: gamma.gamma_dir.clone(),
                ..Config::default()
            };
            config.validate()?;
            let tables = load_tables(config.gamma_dir.as_deref(), &config.gamma_files)?;
            let cfg = VerifyConfig {
                seed,
                samples,
                mode: config.matrix_mode,
                scope,
                ..VerifyConfig::default()
            };
            let report = run_verify(target, &cfg, &tables);
            emit(&report.to_json());
            if report.failures > 0 {
                return Err(CliError::VerifyFailed(report.failures));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hhodge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
