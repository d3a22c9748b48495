use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mtoeplitz_cli::config::{read_set_file, FamilyName, SetsConfig};
use mtoeplitz_cli::output::{emit, emit_to_path};
use mtoeplitz_cli::{run, CliError, ExperimentConfig, ExperimentKind, Format, RunOptions};

#[derive(Parser)]
#[command(name = "mtoeplitz", version, about = "Szegő-type limit experiments for truncated Toeplitz matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and emit its records.
    Run(RunArgs),
    /// Print the statement each experiment exercises.
    Describe {
        /// Experiment kind; all kinds when omitted.
        kind: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List experiment kinds.
    ListExperiments,
    /// Parse and validate a config without running it.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        set_file: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest #σ a schedule point may reach.
    #[arg(long)]
    max_size: Option<usize>,
    /// Write the matrix of the last schedule point as CSV.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
    /// Replace the configured family with explicit sets from this file.
    #[arg(long)]
    set_file: Option<PathBuf>,
}

fn use_set_file(cfg: &mut ExperimentConfig, path: PathBuf) -> Result<(), CliError> {
    read_set_file(&path)?;
    cfg.sets = Some(SetsConfig {
        family: FamilyName::File,
        schedule: Vec::new(),
        ell: None,
        base: None,
        dim: None,
        extra: None,
        file: Some(path),
        first: None,
        second: None,
    });
    Ok(())
}

fn load(path: &PathBuf, set_file: Option<PathBuf>) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    cfg.resolve_paths(path.parent().unwrap_or(std::path::Path::new(".")));
    if let Some(p) = set_file {
        use_set_file(&mut cfg, p)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_command(args: RunArgs) -> Result<i32, CliError> {
    let mut cfg = load(&args.config, args.set_file)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.max_size.is_some() {
        cfg.max_size = args.max_size;
    }
    let format = args.format.unwrap_or_else(|| cfg.format());
    let dump = args.dump_matrix.or_else(|| cfg.output.dump_matrix.clone());
    let report = run(&cfg, &RunOptions { dump_matrix: dump.as_deref() })?;
    match args.out.or_else(|| cfg.output.path.clone()) {
        Some(path) => emit_to_path(&report, format, &path)?,
        None => emit(&report, format, std::io::stdout().lock())?,
    }
    eprintln!("{}: {}", report.experiment, report.verdict.name());
    Ok(report.verdict.exit_code())
}

fn describe(kind: ExperimentKind) {
    println!("{}\n    {}", kind.name(), kind.describe());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Describe { kind, config } => (|| {
            let kinds = match (kind, config) {
                (Some(name), _) => vec![ExperimentKind::from_name(&name)
                    .ok_or_else(|| CliError::field("experiment", format!("unknown kind `{name}`")))?],
                (None, Some(path)) => vec![load(&path, None)?.experiment],
                (None, None) => ExperimentKind::ALL.to_vec(),
            };
            kinds.into_iter().for_each(describe);
            Ok(0)
        })(),
        Command::ListExperiments => {
            ExperimentKind::ALL.iter().for_each(|k| println!("{k}"));
            Ok(0)
        }
        Command::ValidateConfig { config, set_file } => load(&config, set_file).map(|cfg| {
            println!("{}: ok ({})", config.display(), cfg.experiment);
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
