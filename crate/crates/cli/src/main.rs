use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ssflab_cli::describe::describe;
use ssflab_cli::{execute, CliError, ExperimentConfig, ExperimentKind, ExperimentRecord};

#[derive(Parser)]
#[command(name = "ssflab", version, about = "Spectral shift and Wegner estimate laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Re-run the config stored in a record and compare payload hashes.
    Rerun {
        record: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// List experiment kinds.
    List,
    /// Describe one experiment kind and its config fields.
    Describe { kind: String },
}

#[derive(clap::Args)]
struct RunOpts {
    /// Replace the master seed from the config.
    #[arg(long)]
    seed_override: Option<u64>,
    /// Worker threads for realization-parallel experiments.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::List => {
            for k in ExperimentKind::ALL {
                println!("{:<16} {}", k.name(), describe(k).target);
            }
            Ok(0)
        }
        Command::Describe { kind } => {
            let k = ExperimentKind::parse(&kind).ok_or(CliError::UnknownKind(kind))?;
            let d = describe(k);
            println!("{}\n", k.name());
            println!("targets: {}", d.target);
            println!("{}\n", d.summary);
            println!("required: {}", d.required.join(", "));
            println!("optional: {}", d.optional.join(", "));
            Ok(0)
        }
        Command::Run { config, opts } => {
            let cfg = ExperimentConfig::load(&config)?;
            let record = run_with(cfg, &opts)?;
            println!("{}", record.payload_sha256);
            Ok(0)
        }
        Command::Rerun { record, opts } => {
            let stored = ExperimentRecord::load(&record)?;
            let fresh = run_with(stored.config.clone(), &opts)?;
            println!("{}", fresh.payload_sha256);
            if fresh.payload_sha256 == stored.payload_sha256 {
                Ok(0)
            } else {
                eprintln!("payload hash differs from {}", stored.payload_sha256);
                Ok(1)
            }
        }
    }
}

fn run_with(mut cfg: ExperimentConfig, opts: &RunOpts) -> Result<ExperimentRecord, CliError> {
    if let Some(seed) = opts.seed_override {
        cfg.seed = seed;
    }
    let record = match opts.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::invalid("threads", e.to_string()))?;
            pool.install(|| execute(&cfg, &opts.out_dir))?
        }
        None => execute(&cfg, &opts.out_dir)?,
    };
    eprintln!(
        "{}: wrote {} ({:.2} s)",
        cfg.experiment.name(),
        opts.out_dir.join(format!("{}.record.json", cfg.stem())).display(),
        record.wall_clock_seconds
    );
    Ok(record)
}
