//! Command-line front end: evolve, sweep, and qfunc experiments driven by a
//! flat key = value config file, exporting deterministic CSV data plus a
//! JSON manifest per run.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use micromaser::config::{parse_config, ResolvedConfig};
use micromaser::driver::{evolve_and_record, sweep_interaction_time};
use micromaser::error::{Error, Result};
use micromaser::io::{
    evolution_csv, grid_csv, snapshot_csv, sweep_csv, write_atomic, RunManifest, MANIFEST_NAME,
};
use micromaser::quasiprob::{quasiprob_grid, GridSpec};

#[derive(Parser)]
#[command(
    name = "micromaser",
    about = "Lossless two-photon micromaser simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (flat key = value document).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV data and the run manifest.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pump chain and export per-atom diagnostics.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Export final diagnostics for each configured transit time.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evolve, then export a phase-space quasiprobability grid.
    Qfunc {
        #[command(flatten)]
        common: CommonArgs,
        /// Quasiprobability order parameter in [-1, 1); -1 is the Husimi
        /// function, 0 the Wigner function.
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        s: f64,
        /// Grid as re_min,re_max,im_min,im_max,n_re,n_im.
        #[arg(long, default_value = "-8,8,-8,8,81,81", allow_hyphen_values = true)]
        grid: String,
    },
}

fn load_config(path: &Path) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

fn cmd_evolve(common: &CommonArgs) -> Result<()> {
    let config = load_config(&common.config)?;
    let record = evolve_and_record(&config.experiment()?)?;
    let mut artifacts = vec!["evolution.csv".to_string()];
    let mut files = vec![("evolution.csv".to_string(), evolution_csv(&record))];
    for (n, probs) in &record.snapshots {
        let name = format!("pn_N{n}.csv");
        artifacts.push(name.clone());
        files.push((name, snapshot_csv(probs)));
    }
    write_run(&common.out, "evolve", config, artifacts, files)
}

fn cmd_sweep(common: &CommonArgs) -> Result<()> {
    let config = load_config(&common.config)?;
    let mut values = config.sweep_values.clone();
    let before = values.len();
    values.sort_by(f64::total_cmp);
    values.dedup();
    if values.len() < before {
        eprintln!(
            "warning: {} duplicate sweep transit time(s) removed",
            before - values.len()
        );
    }
    let rows = sweep_interaction_time(&config.experiment()?, &values)?;
    let files = vec![("sweep.csv".to_string(), sweep_csv(&rows))];
    write_run(
        &common.out,
        "sweep",
        config,
        vec!["sweep.csv".to_string()],
        files,
    )
}

fn parse_grid(text: &str, s: f64) -> Result<GridSpec> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 6 {
        return Err(Error::InvalidParameter(format!(
            "--grid needs re_min,re_max,im_min,im_max,n_re,n_im, got \"{text}\""
        )));
    }
    let num = |i: usize| -> Result<f64> {
        parts[i].trim().parse::<f64>().map_err(|_| {
            Error::InvalidParameter(format!(
                "--grid field {} is not a number: {}",
                i + 1,
                parts[i]
            ))
        })
    };
    let count = |i: usize| -> Result<usize> {
        parts[i].trim().parse::<usize>().map_err(|_| {
            Error::InvalidParameter(format!(
                "--grid field {} is not a positive integer: {}",
                i + 1,
                parts[i]
            ))
        })
    };
    let spec = GridSpec {
        re_min: num(0)?,
        re_max: num(1)?,
        im_min: num(2)?,
        im_max: num(3)?,
        n_re: count(4)?,
        n_im: count(5)?,
        s,
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_qfunc(common: &CommonArgs, s: f64, grid: &str) -> Result<()> {
    let config = load_config(&common.config)?;
    let spec = parse_grid(grid, s)?;
    let record = evolve_and_record(&config.experiment()?)?;
    let grid = quasiprob_grid(&record.final_state, &spec)?;
    let files = vec![("grid.csv".to_string(), grid_csv(&grid))];
    write_run(
        &common.out,
        "qfunc",
        config,
        vec!["grid.csv".to_string()],
        files,
    )
}

fn write_run(
    out_dir: &Path,
    command: &str,
    config: ResolvedConfig,
    artifacts: Vec<String>,
    files: Vec<(String, String)>,
) -> Result<()> {
    let manifest = RunManifest::new(command, config, artifacts);
    write_atomic(out_dir, MANIFEST_NAME, &manifest.to_json()?)?;
    for (name, content) in &files {
        write_atomic(out_dir, name, content)?;
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Evolve { common } => cmd_evolve(common),
        Command::Sweep { common } => cmd_sweep(common),
        Command::Qfunc { common, s, grid } => cmd_qfunc(common, *s, grid),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg: String = e
                .to_string()
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
