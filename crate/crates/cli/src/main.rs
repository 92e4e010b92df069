use std::path::PathBuf;
use std::process::ExitCode;

use beamspace::channel::ChannelGenConfig;
use beamspace::precoding::PrecoderKind;
use beamspace_cli::commands::{ber, complexity, dump};
use beamspace_cli::config::ExperimentConfig;
use beamspace_cli::{CliError, CliResult};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beamspace",
    version,
    about = "Sparse beamspace precoding experiments"
)]
struct Cli {
    /// Worker threads for Monte-Carlo trials (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(
        long,
        global = true,
        env = "BEAMSPACE_OUT_DIR",
        default_value = "results"
    )]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the BER sweeps of an experiment file.
    Ber(BerArgs),
    /// Tabulate multiplication counts and speed-up versus MRT.
    Complexity(ComplexityArgs),
    /// Write the sparse precoder of one seeded channel as JSON.
    PrecoderDump(DumpArgs),
}

#[derive(Args)]
struct BerArgs {
    /// TOML experiment file.
    config: PathBuf,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `trials`.
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides `slots`.
    #[arg(long)]
    slots: Option<usize>,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(short = 'B', long = "b")]
    b: u64,
    #[arg(short = 'U', long = "u")]
    u: u64,
    #[arg(short = 'K', long = "k")]
    k: u64,
    /// Average nonzeros per column for the local WF row (default: K).
    #[arg(short = 'M', long = "m")]
    m: Option<u64>,
    /// Block lengths, comma separated.
    #[arg(
        short = 'T',
        long = "t",
        value_delimiter = ',',
        default_value = "1,10,100,1000,10000,100000,1000000"
    )]
    t: Vec<u64>,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(short = 'B', long = "b")]
    b: usize,
    #[arg(short = 'U', long = "u")]
    u: usize,
    #[arg(short = 'K', long = "k")]
    k: usize,
    /// SBP, RS, 1S-SBP or 1S-RS.
    #[arg(long, default_value = "SBP")]
    precoder: PrecoderKind,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    snr_db: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    trial: usize,
    /// Non-line-of-sight channel.
    #[arg(long)]
    nlos: bool,
}

fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn run(cli: Cli) -> CliResult<()> {
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Config("--threads must be at least 1".into())),
        Some(n) => n,
        None => default_threads(),
    };
    match cli.command {
        Command::Ber(args) => {
            let mut cfg = ExperimentConfig::load(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            if let Some(trials) = args.trials {
                cfg.trials = trials;
            }
            if let Some(slots) = args.slots {
                cfg.slots = slots;
            }
            let manifest = ber::run(&cfg, &cli.out, threads)?;
            println!(
                "config {} -> {} files in {}",
                manifest.config_hash,
                manifest.outputs.len(),
                cli.out.display()
            );
        }
        Command::Complexity(args) => {
            if args.k > args.b {
                return Err(CliError::Config(format!(
                    "K = {} violates K <= B = {}",
                    args.k, args.b
                )));
            }
            let m = args.m.unwrap_or(args.k);
            let (report, path) = complexity::run(args.b, args.u, args.k, m, &args.t, &cli.out)?;
            println!("gamma = {:.4}", report.gamma);
            println!(
                "wrote {} (LocalWF row is formula-only, M = {m})",
                path.display()
            );
        }
        Command::PrecoderDump(args) => {
            let req = dump::DumpRequest {
                channel: ChannelGenConfig::new(args.b, args.u, !args.nlos),
                precoder: args.precoder,
                k: args.k,
                snr_db: args.snr_db,
                seed: args.seed,
                trial: args.trial,
            };
            let p = dump::build(&req)?;
            std::fs::create_dir_all(&cli.out).map_err(|e| CliError::Runtime(e.to_string()))?;
            let path = cli.out.join(dump::file_name(&req));
            std::fs::write(&path, p.to_json() + "\n")
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
