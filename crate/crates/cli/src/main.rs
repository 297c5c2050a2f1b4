use clap::{Parser, Subcommand};
use roughscat_cli::commands::{
    cmd_forward, cmd_image, cmd_render, cmd_sweep, cmd_validate, resolve_config, CliError, CliResult,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Elastic rough-surface scattering and near-field imaging.
#[derive(Parser, Debug)]
#[command(name = "roughscat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named preset instead of a config file (fig3-a ... fig7-c, flat, sweep-noise, sweep-frequency).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory, overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Noise seed, overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the numerical self-checks and print one line per criterion.
    Validate {
        /// Skip the forward-solver and reconstruction checks.
        #[arg(long)]
        quick: bool,
    },
    /// Solve the scattering problems and write the near-field dataset.
    Forward,
    /// Image a dataset written by `forward`.
    Image {
        /// Dataset file (default: <out>/dataset.bin).
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Run the `[sweep]` section and write a metrics table.
    Sweep,
    /// Render an imaging result (CSV) as a PPM heatmap.
    Render {
        /// Result CSV written by `image`.
        result: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let config = || {
        resolve_config(
            cli.config.as_deref(),
            cli.preset.as_deref(),
            cli.out.as_deref(),
            cli.seed,
        )
    };
    match &cli.command {
        Command::Validate { quick } => {
            cmd_validate(*quick, cli.out.as_deref())?;
        }
        Command::Forward => {
            let cfg = config()?;
            let path = cmd_forward(&cfg, cli.preset.as_deref() == Some("flat"))?;
            println!("{}", path.display());
        }
        Command::Image { dataset } => {
            let o = cmd_image(&config()?, dataset.as_deref())?;
            println!("{}", o.csv.display());
            if let Some(m) = o.metrics {
                println!(
                    "mean |error| {:.4}, max |error| {:.4} (|z1| <= {})",
                    m.mean_abs, m.max_abs, m.window
                );
            }
        }
        Command::Sweep => {
            cmd_sweep(&config()?)?;
        }
        Command::Render { result } => {
            let truth = if cli.config.is_some() || cli.preset.is_some() {
                Some(config()?.surface_profile()?)
            } else {
                None
            };
            let out = cli.out.as_ref().map(|d| {
                let name = result.with_extension("ppm");
                d.join(name.file_name().unwrap_or_default())
            });
            if let Some(d) = &cli.out {
                std::fs::create_dir_all(d)?;
            }
            let path = cmd_render(result, truth.as_ref(), out.as_deref())?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
