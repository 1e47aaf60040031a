//! Binary entry point. Exit codes: 0 on success (including per-curve math
//! failures, which become error records on stdout), 1 for I/O errors, 2
//! for configuration and usage errors.

use std::path::PathBuf;

use archbound::{BoundConfig, PlaceSpec, Variant};
use clap::{Args, Parser, Subcommand, ValueEnum};

use archbound_cli::input::{parse_input, CurveInput};
use archbound_cli::report::Record;
use archbound_cli::run::{batch_run, record_for_input, RunConfig, ValidationSpec};

#[derive(Parser)]
#[command(
    name = "archbound",
    version,
    about = "Upper bounds for the archimedean local difference between naive and canonical heights on elliptic curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound one curve supplied on the command line.
    Compute(ComputeArgs),
    /// Bound every record in a line-delimited file.
    Batch(BatchArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Relative stopping tolerance for the bound iteration.
    #[arg(long, default_value_t = 1e-9, env = "ARCHBOUND_TOL")]
    tol: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 60, env = "ARCHBOUND_MAX_ITER")]
    max_iter: usize,
    /// Contraction formula; auto picks the sharper one-component form on
    /// real models with negative discriminant.
    #[arg(long, value_enum, default_value_t = VariantArg::Auto, env = "ARCHBOUND_VARIANT")]
    variant: VariantArg,
    /// Sample N points per place and report the empirical maximum.
    #[arg(long, value_name = "N", env = "ARCHBOUND_VALIDATE")]
    validate: Option<usize>,
    /// Series terms per sampled point.
    #[arg(long, default_value_t = 12, env = "ARCHBOUND_TERMS")]
    terms: usize,
    /// Sampling seed; batch lines derive per-line seeds from it.
    #[arg(long, default_value_t = 0, env = "ARCHBOUND_SEED")]
    seed: u64,
    /// Emit JSON records (the default).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table instead of JSON.
    #[arg(long)]
    table: bool,
    /// Shift bounds by log|disc|_v / 6 for comparison with tools that
    /// normalize the local height difference that way.
    #[arg(long)]
    bruin_normalization: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Auto,
    Complex,
    Real,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaceArg {
    Real,
    Complex,
}

#[derive(Args)]
struct ComputeArgs {
    /// Curve record, e.g. "[0,-1,1,-7820,-263580]" or "label: [...] @real".
    #[arg(long)]
    curve: String,
    /// Evaluate at this place instead of the record's place list.
    #[arg(long, value_enum)]
    place: Option<PlaceArg>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BatchArgs {
    /// Line-delimited record file.
    file: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0, env = "ARCHBOUND_JOBS")]
    jobs: usize,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Compute(args) => run_compute(args),
        Command::Batch(args) => run_batch(args),
    };
    std::process::exit(code);
}

fn build_config(common: &CommonArgs) -> Result<RunConfig, String> {
    if !common.tol.is_finite() || common.tol <= 0.0 {
        return Err("--tol must be a positive number".into());
    }
    if common.max_iter == 0 {
        return Err("--max-iter must be at least 1".into());
    }
    let variant = match common.variant {
        VariantArg::Auto => None,
        VariantArg::Complex => Some(Variant::ComplexFormula),
        VariantArg::Real => Some(Variant::RealOneComponent),
    };
    let validate = match common.validate {
        None => None,
        Some(0) => return Err("--validate must sample at least one point".into()),
        Some(n) => {
            if common.terms == 0 {
                return Err("--terms must be at least 1".into());
            }
            Some(ValidationSpec { n_samples: n, terms: common.terms })
        }
    };
    Ok(RunConfig {
        bound: BoundConfig {
            rel_tol: common.tol,
            max_iter: common.max_iter,
            variant,
            ..BoundConfig::default()
        },
        validate,
        seed: common.seed,
        shift_by_disc: common.bruin_normalization,
    })
}

fn emit(record: &Record, table: bool) {
    if table {
        println!("{}", record.to_table());
    } else {
        println!("{}", record.to_json());
    }
}

fn run_compute(args: ComputeArgs) -> i32 {
    let cfg = match build_config(&args.common) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config: {msg}");
            return 2;
        }
    };
    let mut input = match parse_input(&args.curve) {
        Ok(input) => input,
        Err(err) => {
            eprintln!("{err}");
            return 2;
        }
    };
    if let Some(place) = args.place {
        let place = match place {
            PlaceArg::Real => PlaceSpec::Real,
            PlaceArg::Complex => PlaceSpec::Complex,
        };
        input = match CurveInput::new(
            input.label.clone(),
            input.coefficients.to_vec(),
            vec![place],
            1,
        ) {
            Ok(input) => input,
            Err(err) => {
                eprintln!("{err}");
                return 2;
            }
        };
    }
    emit(&record_for_input(&input, &cfg, None), args.common.table);
    0
}

fn run_batch(args: BatchArgs) -> i32 {
    let cfg = match build_config(&args.common) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config: {msg}");
            return 2;
        }
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("i/o: {}: {err}", args.file.display());
            return 1;
        }
    };
    match batch_run(&text, &cfg, args.jobs) {
        Ok(records) => {
            for record in &records {
                emit(record, args.common.table);
            }
            0
        }
        Err(err) => {
            eprintln!("{err}");
            2
        }
    }
}
