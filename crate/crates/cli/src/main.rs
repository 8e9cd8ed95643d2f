use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use viewscope::config::RunConfig;
use viewscope::stages;

#[derive(Parser)]
#[command(
    name = "viewscope",
    about = "Selects informative camera viewpoints for synthetic indoor scenes",
    version
)]
struct Cli {
    /// Run configuration TOML; defaults apply for every missing field.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides the configured worker count (0 means all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the synthetic room suite, ground-truth cameras, and example set.
    Suite,
    /// Estimate per-category spatial pdfs from the example set.
    Pdf,
    /// Generate and score camera candidates for every room.
    Generate,
    /// Pick a view set from the scored candidates.
    Select,
    /// Place one competing view set (rand, hum, cat, traj, or heur).
    Baseline {
        /// Which placement strategy to run.
        which: String,
    },
    /// Score view sets against the example set.
    Eval {
        /// Set names to score; defaults to the selection plus every
        /// baseline already on disk.
        sets: Vec<String>,
    },
    /// Render the selected views to image files.
    Export,
    /// Run every stage in order into a fresh output directory.
    Pipeline {
        /// Allow writing into a non-empty output directory.
        #[arg(long)]
        force: bool,
    },
    /// Check a scene file and report its shape or its problems.
    Scene {
        #[command(subcommand)]
        action: SceneAction,
    },
}

#[derive(Subcommand)]
enum SceneAction {
    Validate { path: PathBuf },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let cfg = cfg.with_overrides(cli.seed, cli.workers);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Suite => stages::cmd_suite(&load_config(&cli)?),
        Command::Pdf => stages::cmd_pdf(&load_config(&cli)?),
        Command::Generate => stages::cmd_generate(&load_config(&cli)?),
        Command::Select => stages::cmd_select(&load_config(&cli)?).map(|_| ()),
        Command::Baseline { which } => stages::cmd_baseline(&load_config(&cli)?, which),
        Command::Eval { sets } => {
            let sets = if sets.is_empty() { None } else { Some(sets.clone()) };
            stages::cmd_eval(&load_config(&cli)?, sets).map(|_| ())
        }
        Command::Export => stages::cmd_export(&load_config(&cli)?),
        Command::Pipeline { force } => {
            stages::cmd_pipeline(&load_config(&cli)?, *force).map(|_| ())
        }
        Command::Scene { action } => match action {
            SceneAction::Validate { path } => stages::cmd_scene_validate(path),
        },
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
