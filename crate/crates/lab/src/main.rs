use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use echo_core::MapParams;
use echo_lab::config::Format;
use echo_lab::{presets, run, ExperimentConfig, Preset, RunOptions, THREADS_ENV};

#[derive(Parser)]
#[command(
    name = "echo-lab",
    version,
    about = "Fidelity decay experiments on the quantum sawtooth map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file and write tables plus a manifest.
    Run(RunArgs),
    /// Print derived map parameters for K0, σ and N.
    Params {
        #[arg(long)]
        kick: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        dim: usize,
    },
    /// List presets, or print one as an editable TOML config.
    Presets {
        #[arg(long)]
        show: Option<Preset>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<Preset>,
    /// TOML config, or a manifest.json from an earlier run to replay it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Shrink N, ensembles and sample counts by this factor in (0, 1].
    #[arg(long)]
    scale: Option<f64>,
    /// Output directory [default: results/<name>].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated output formats: csv, json.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Manifest path [default: <out>/manifest.json].
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long)]
    plot: bool,
    #[arg(long, short)]
    quiet: bool,
}

fn run_command(args: RunArgs) -> Result<()> {
    let mut config = match (&args.preset, &args.config) {
        (Some(p), None) => p.config(),
        (None, Some(path)) => ExperimentConfig::load(path)?,
        _ => bail!("give exactly one of --preset and --config"),
    };
    if let Some(s) = args.scale {
        config.scale = s;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(f) = args.format {
        config.formats = f;
    }
    config.plot |= args.plot;
    config.validate()?;
    if args.threads == Some(0) {
        bail!("--threads must be positive");
    }

    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from("results").join(&config.name));
    let opts = RunOptions {
        out: out.clone(),
        manifest: args.manifest,
        threads: args.threads,
        preset: args.preset.map(|p| p.name().to_string()),
        quiet: args.quiet,
    };
    let manifest = run(&config, &opts)?;
    if !args.quiet {
        let files: usize = manifest.outputs.iter().map(|o| o.files.len()).sum();
        eprintln!(
            "wrote {files} files to {} in {:.1} s",
            out.display(),
            manifest.wall_seconds
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Params { kick, sigma, dim } => MapParams::from_sigma(kick, sigma, dim)
            .context("deriving parameters")
            .map(|p| {
                println!(
                    "hbar = {:e}\nepsilon = {:e}\nk0 = {:e}\nk = {:e}",
                    p.hbar(),
                    p.epsilon(),
                    p.k0(),
                    p.k()
                );
            }),
        Command::Presets { show: None } => {
            for p in presets::ALL {
                println!("{p}");
            }
            Ok(())
        }
        Command::Presets { show: Some(p) } => p.config().to_toml().map(|t| print!("{t}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
