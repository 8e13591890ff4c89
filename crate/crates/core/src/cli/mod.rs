//! Command-line pipeline: `make-data → train-mmc → train-gan → eval/plot`.
//!
//! Every command works inside one output directory and creates missing
//! upstream artifacts on the fly, so `train-gan` on an empty directory runs
//! the whole pipeline.

pub mod config;
pub mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use config::{DataConfig, RunConfig};

use crate::datasets::Dataset;
use crate::gan::{sample_latent, train_mmcgan, Checkpoint, GanError};
use crate::metrics::{eval_protocol, summarize};
use crate::mmc::{
    coding_path_length, convex_hull, lipschitz_bound_check, pca_codes, standardize_codes,
    train_autoencoder, BoundCheck, Coding, MmcError,
};
use crate::nn::MlpModel;
use crate::rng::{stream, Stream};
use crate::runlog::RunLog;

pub const DATA_FILE: &str = "data.txt";
pub const CODING_FILE: &str = "coding.txt";
pub const CODING_STD_FILE: &str = "coding_std.txt";
pub const AUTOENCODER_FILE: &str = "autoencoder.json";
pub const AE_LOG_FILE: &str = "ae_log.jsonl";
pub const MMC_REPORT_FILE: &str = "mmc_report.json";
pub const GAN_LOG_FILE: &str = "gan_log.jsonl";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const SAMPLES_FILE: &str = "samples.txt";
pub const EVAL_FILE: &str = "eval.json";

/// Generator samples written after training and drawn for plots.
const PLOT_SAMPLES: usize = 1000;
const CONTOUR_RES: usize = 100;
const CONTOUR_LO: f64 = -1.5;
const CONTOUR_HI: f64 = 1.5;

#[derive(Debug, Parser)]
#[command(name = "mmcgan", version, about = "Minimum manifold coding and manifold-prior GANs on 2-D toy data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run seed for model initialization and training (the data seed for
    /// `make-data`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Run seeds `seed..seed+k` as separate processes in `<out>/seed_<s>`.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeat: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sample the configured toy dataset.
    MakeData,
    /// Fit the coding autoencoder and report path lengths and the measure bound.
    TrainMmc,
    /// Train a GAN, with the coding prior unless `gan.prior = false`.
    TrainGan,
    /// Score coverage logs in the output directory and its seed subdirectories.
    Eval,
    /// Write SVG/CSV figures for whatever artifacts exist.
    Plot,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::MakeData => "make-data",
            Command::TrainMmc => "train-mmc",
            Command::TrainGan => "train-gan",
            Command::Eval => "eval",
            Command::Plot => "plot",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmcReport {
    pub n: usize,
    pub m: usize,
    pub final_recon_mse: f64,
    /// Path length through the data in code order (m = 1 only).
    pub mmc_path_length: Option<f64>,
    pub pca_path_length: Option<f64>,
    pub bound_check: Option<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEval {
    pub log: PathBuf,
    pub score: f64,
    pub transition_iter: Option<usize>,
    pub aborted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub runs: Vec<RunEval>,
    pub mean: f64,
    pub std: f64,
}

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    if cli.repeat > 1 && cli.command != Command::Eval {
        return run_repeats(cli, &cfg);
    }
    let cfg = match (cli.command, cli.seed) {
        (Command::MakeData, Some(s)) => RunConfig {
            data: DataConfig { seed: s, ..cfg.data.clone() },
            ..cfg
        },
        (_, Some(s)) => cfg.with_seed(s),
        (_, None) => cfg,
    };
    fs::create_dir_all(&cli.out)
        .with_context(|| format!("cannot create output directory {}", cli.out.display()))?;
    let out = cli.out.as_path();
    match cli.command {
        Command::MakeData => make_data(&cfg, out).map(|_| ()),
        Command::TrainMmc => train_mmc(&cfg, out).map(|_| ()),
        Command::TrainGan => train_gan(&cfg, out),
        Command::Eval => eval(out).map(|_| ()),
        Command::Plot => plot(&cfg, out),
    }
}

fn run_repeats(cli: &Cli, cfg: &RunConfig) -> anyhow::Result<()> {
    let base = cli.seed.unwrap_or(match cli.command {
        Command::MakeData => cfg.data.seed,
        _ => cfg.gan.seed,
    });
    let exe = std::env::current_exe().context("cannot locate own executable")?;
    let width = std::thread::available_parallelism().map_or(1, |n| n.get());
    let seeds: Vec<u64> = (base..base + cli.repeat).collect();
    let mut failed = Vec::new();
    for chunk in seeds.chunks(width) {
        let mut children = Vec::new();
        for &s in chunk {
            let mut cmd = Process::new(&exe);
            cmd.arg(cli.command.name())
                .arg("--seed")
                .arg(s.to_string())
                .arg("--out")
                .arg(cli.out.join(format!("seed_{s}")));
            if let Some(c) = &cli.config {
                cmd.arg("--config").arg(c);
            }
            children.push((s, cmd.spawn().context("cannot spawn repeat run")?));
        }
        for (s, mut child) in children {
            if !child.wait()?.success() {
                failed.push(s);
            }
        }
    }
    if !failed.is_empty() {
        bail!("{} of {} runs failed (seeds {failed:?})", failed.len(), seeds.len());
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_log(path: &Path, log: &RunLog) -> anyhow::Result<()> {
    log.write_jsonl(path)
        .with_context(|| format!("cannot write {}", path.display()))
}

fn make_data(cfg: &RunConfig, out: &Path) -> anyhow::Result<Dataset> {
    let data = cfg.data.generate()?;
    let path = out.join(DATA_FILE);
    data.write(&path)?;
    println!("wrote {} {} samples to {}", data.len(), data.meta.generator, path.display());
    Ok(data)
}

fn load_or_make_data(cfg: &RunConfig, out: &Path) -> anyhow::Result<Dataset> {
    let path = out.join(DATA_FILE);
    if path.exists() {
        Ok(Dataset::read(&path)?)
    } else {
        make_data(cfg, out)
    }
}

#[derive(Serialize)]
struct AutoencoderDump<'a> {
    encoder: &'a MlpModel,
    decoder: &'a MlpModel,
}

fn train_mmc(cfg: &RunConfig, out: &Path) -> anyhow::Result<Coding> {
    let data = load_or_make_data(cfg, out)?;
    let fit = match train_autoencoder(&data, &cfg.autoencoder) {
        Ok(fit) => fit,
        Err(MmcError::Diverged { epoch, log }) => {
            write_log(&out.join(AE_LOG_FILE), &log)?;
            bail!("autoencoder diverged at epoch {epoch}");
        }
        Err(e) => return Err(e.into()),
    };
    write_log(&out.join(AE_LOG_FILE), &fit.log)?;
    fit.coding.write(&out.join(CODING_FILE))?;
    let standardized = standardize_codes(&fit.coding)?;
    standardized.write(&out.join(CODING_STD_FILE))?;
    let dump = AutoencoderDump {
        encoder: &fit.encoder,
        decoder: &fit.decoder,
    };
    write(&out.join(AUTOENCODER_FILE), &serde_json::to_string(&dump)?)?;

    let m = cfg.autoencoder.m;
    let (mmc_path_length, pca_path_length) = if m == 1 {
        let mmc = coding_path_length(&data, &fit.coding)?.length;
        let pca = coding_path_length(&data, &pca_codes(&data)?)?.length;
        (Some(mmc), Some(pca))
    } else {
        (None, None)
    };
    let bound_check = if m <= 2 {
        let hull = convex_hull(&fit.coding)?;
        Some(lipschitz_bound_check(&fit.decoder, &hull, 2000, cfg.autoencoder.seed)?)
    } else {
        None
    };
    let report = MmcReport {
        n: data.len(),
        m,
        final_recon_mse: fit.final_recon_mse().unwrap_or(f64::NAN),
        mmc_path_length,
        pca_path_length,
        bound_check,
    };
    write(&out.join(MMC_REPORT_FILE), &serde_json::to_string_pretty(&report)?)?;
    println!("reconstruction mse {:.5}", report.final_recon_mse);
    if let (Some(a), Some(b)) = (mmc_path_length, pca_path_length) {
        println!("path length: mmc {a:.4}, pca {b:.4}");
    }
    if let Some(b) = &report.bound_check {
        println!(
            "mapping measure {:.4} <= bound {:.4}: {}",
            b.report.lambda_hat,
            b.report.bound,
            if b.pass { "ok" } else { "VIOLATED" }
        );
    }
    Ok(standardized)
}

fn load_or_train_coding(cfg: &RunConfig, out: &Path) -> anyhow::Result<Coding> {
    let path = out.join(CODING_STD_FILE);
    if path.exists() {
        Ok(Coding::read(&path)?)
    } else {
        train_mmc(cfg, out)
    }
}

fn train_gan(cfg: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let data = load_or_make_data(cfg, out)?;
    let coding = if cfg.gan.prior {
        Some(load_or_train_coding(cfg, out)?)
    } else {
        None
    };
    let (trainer, log) = match train_mmcgan(&data, coding.as_ref(), &cfg.gan) {
        Ok(r) => r,
        Err(GanError::Aborted { iter, reason, log }) => {
            write_log(&out.join(GAN_LOG_FILE), &log)?;
            bail!("training aborted at iteration {iter}: {reason}");
        }
        Err(e) => return Err(e.into()),
    };
    write_log(&out.join(GAN_LOG_FILE), &log)?;
    write(&out.join(CHECKPOINT_FILE), &Checkpoint::new(trainer.clone()).to_json())?;
    let z = sample_latent(PLOT_SAMPLES, cfg.gan.m, &mut stream(cfg.gan.seed, Stream::Eval));
    let samples = trainer.generator.predict(&z)?;
    Dataset::from_points(samples, "generator")?.write(&out.join(SAMPLES_FILE))?;

    match trainer.transition_iter {
        Some(t) => println!("recon phase ended at iteration {t}"),
        None if cfg.gan.prior => println!("recon phase never ended"),
        None => {}
    }
    if let Some(last) = log.coverage_snapshots().last() {
        println!("final coverage {last}/25");
    }
    Ok(())
}

/// `<out>/gan_log.jsonl` plus every `<out>/seed_*/gan_log.jsonl`.
fn find_logs(out: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut logs = Vec::new();
    if out.join(GAN_LOG_FILE).exists() {
        logs.push(out.join(GAN_LOG_FILE));
    }
    let mut seeded = Vec::new();
    for entry in fs::read_dir(out).with_context(|| format!("cannot list {}", out.display()))? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(seed) = name.strip_prefix("seed_").and_then(|s| s.parse::<u64>().ok()) {
            let log = entry.path().join(GAN_LOG_FILE);
            if log.exists() {
                seeded.push((seed, log));
            }
        }
    }
    seeded.sort();
    logs.extend(seeded.into_iter().map(|(_, p)| p));
    Ok(logs)
}

fn eval(out: &Path) -> anyhow::Result<EvalReport> {
    let logs = find_logs(out)?;
    if logs.is_empty() {
        bail!("no {GAN_LOG_FILE} found under {}", out.display());
    }
    let mut runs = Vec::new();
    for path in logs {
        let log = RunLog::read_jsonl(&path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let score = eval_protocol(&log).with_context(|| format!("in {}", path.display()))?;
        runs.push(RunEval {
            score,
            transition_iter: log.transitions().first().map(|t| t.0),
            aborted: log.aborted(),
            log: path,
        });
    }
    let summary = summarize(&runs.iter().map(|r| r.score).collect::<Vec<_>>())?;
    for r in &runs {
        println!(
            "{}: {:.1}{}",
            r.log.display(),
            r.score,
            if r.aborted { " (aborted)" } else { "" }
        );
    }
    println!("coverage {summary} over {} runs", runs.len());
    let report = EvalReport {
        runs,
        mean: summary.mean,
        std: summary.std,
    };
    write(&out.join(EVAL_FILE), &serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

fn plot(cfg: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let data = load_or_make_data(cfg, out)?;
    let mut written = vec!["data.svg"];
    write(&out.join("data.svg"), &plot::scatter_svg(&[(&data.points, "black", 2.5)])?)?;

    let coding_path = out.join(CODING_FILE);
    if coding_path.exists() {
        let coding = Coding::read(&coding_path)?;
        if coding.m() == 1 {
            let order = coding_path_length(&data, &coding)?;
            write(&out.join("path.svg"), &plot::path_svg(&data.points, &order.ordering)?)?;
            written.push("path.svg");
        }
    }

    let ck_path = out.join(CHECKPOINT_FILE);
    if ck_path.exists() {
        let text = fs::read_to_string(&ck_path)
            .with_context(|| format!("cannot read {}", ck_path.display()))?;
        let trainer = Checkpoint::from_json(&text)?.trainer;
        let m = trainer.generator.in_dim();
        let z = sample_latent(PLOT_SAMPLES, m, &mut stream(trainer.config.seed, Stream::Eval));
        let samples = trainer.generator.predict(&z)?;
        let svg = plot::scatter_svg(&[(&data.points, "lightgray", 3.0), (&samples, "crimson", 1.5)])?;
        write(&out.join("samples.svg"), &svg)?;
        let grid = plot::contour_grid(&trainer.discriminator, CONTOUR_RES, CONTOUR_LO, CONTOUR_HI)?;
        write(&out.join("contour.csv"), &plot::grid_csv(&grid))?;
        let svg = plot::heatmap_svg(&grid, CONTOUR_LO, CONTOUR_HI, Some(&data.points))?;
        write(&out.join("contour.svg"), &svg)?;
        written.extend(["samples.svg", "contour.csv", "contour.svg"]);
    }
    println!("wrote {} in {}", written.join(", "), out.display());
    Ok(())
}

