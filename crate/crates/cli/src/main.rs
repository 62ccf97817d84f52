use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wikitrends_cli::{run_pipeline, run_stage, write_fixture, CliError, FixtureOptions, PipelineConfig, Stage};

#[derive(Parser)]
#[command(name = "wikitrends", version, about = "Detect and compare trending Wikipedia topics")]
struct Cli {
    /// Pipeline config (TOML, config_version = 1).
    #[arg(long, global = true, default_value = "wikitrends.toml")]
    config: PathBuf,
    /// Overrides the config's output directory (for `synth`: where the fixture goes).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// error, warn, info, debug or trace; RUST_LOG also works.
    #[arg(long, global = true, default_value = "info")]
    log_level: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse dumps, hyperlinks and filters into the per-language cache.
    Ingest,
    /// Detect bursts.
    Detect,
    /// Build the trend graph, cluster it and rank pages.
    Cluster,
    /// Describe clusters with TF-IDF keywords (and LDA when enabled).
    Keywords,
    /// Label pages and clusters; train and evaluate the classifier.
    Label,
    /// Assemble and export trends.
    Trends,
    /// Align trends across languages and write the manifest.
    Compare,
    /// Every stage, then the comparison.
    Run,
    /// Write a synthetic multi-language fixture with a ready config.
    Synth {
        #[arg(long, value_delimiter = ',', default_value = "en,fr,ru")]
        languages: Vec<String>,
        #[arg(long, default_value_t = 400)]
        hours: usize,
        #[arg(long, default_value_t = 60)]
        noise_pages: usize,
    },
}

fn load(cli: &Cli) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig::load(&cli.config)?;
    if let Some(out) = &cli.output {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let stage = match &cli.command {
        Command::Synth {
            languages,
            hours,
            noise_pages,
        } => {
            let dir = cli
                .output
                .clone()
                .ok_or_else(|| CliError::Config("synth needs --output <dir>".into()))?;
            let opts = FixtureOptions {
                languages: languages.clone(),
                t_hours: *hours,
                n_noise_pages: *noise_pages,
                seed: cli.seed.unwrap_or(FixtureOptions::default().seed),
            };
            let cfg = write_fixture(&dir, &opts)?;
            println!("{}", cfg.display());
            return Ok(());
        }
        Command::Run => {
            let cfg = load(cli)?;
            let manifest = run_pipeline(&cfg)?;
            println!("{} files in {}", manifest.files.len(), cfg.output_dir.display());
            return Ok(());
        }
        Command::Ingest => Stage::Ingest,
        Command::Detect => Stage::Detect,
        Command::Cluster => Stage::Cluster,
        Command::Keywords => Stage::Keywords,
        Command::Label => Stage::Label,
        Command::Trends => Stage::Trends,
        Command::Compare => Stage::Compare,
    };
    let cfg = load(cli)?;
    run_stage(&cfg, stage)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(&cli.log_level))
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
