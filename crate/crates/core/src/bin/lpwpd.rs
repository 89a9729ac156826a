use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lpwpd::pipeline::{self, JobConfig, ProcessingConfig, SweepGrid};
use lpwpd::scene::{Scene, SceneConfig};
use lpwpd::stft::AnalysisConfig;
use lpwpd::wav::write_wav;
use lpwpd::{Error, InitMode};

#[derive(Parser)]
#[command(name = "lpwpd", version, about = "Joint dereverberation and denoising with an lp-norm WPD beamformer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enhance one multichannel recording.
    Enhance(EnhanceArgs),
    /// Run a (p, init, iteration) grid over a list of utterances and write one CSV row per cell.
    Sweep {
        /// key = value file
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
    },
    /// Average sweep CSVs over utterances.
    Report {
        #[arg(long, num_args = 1.., required = true)]
        csv: Vec<PathBuf>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic noisy reverberant recording and its reference.
    Synth {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 2)]
        channels: usize,
        #[arg(long, default_value_t = 500)]
        frames: usize,
        #[arg(long, default_value_t = 20.0)]
        snr_db: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct EnhanceArgs {
    /// One multichannel WAV, or one WAV per channel (ordered by path).
    #[arg(long = "in", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Clean reference for scoring.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    #[arg(long, default_value = "mc")]
    init: InitMode,
    #[arg(long, default_value_t = 4)]
    tau: usize,
    #[arg(long, default_value_t = 12)]
    lh: usize,
    /// 1-based.
    #[arg(long, default_value_t = 1)]
    ref_mic: usize,
    #[arg(long, default_value_t = 225.0)]
    noise_head_ms: f64,
    #[arg(long, default_value_t = 75.0)]
    noise_tail_ms: f64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = 16_000)]
    fs: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the run record as JSON.
    #[arg(long)]
    record: Option<PathBuf>,
}

enum Failure {
    Input(Error),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_solver_failure() {
            Failure::Solver(e.to_string())
        } else {
            Failure::Input(e)
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn enhance(args: EnhanceArgs) -> Result<(), Failure> {
    let ref_mic = args
        .ref_mic
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidConfig("--ref-mic is 1-based".into()))?;
    let mut processing = ProcessingConfig {
        analysis: AnalysisConfig {
            fs: args.fs,
            ..AnalysisConfig::default()
        },
        jobs: args.jobs,
        seed: args.seed,
        ..ProcessingConfig::default()
    };
    let bf = &mut processing.beamformer;
    bf.p = args.p;
    bf.iterations = args.iters;
    bf.init = args.init;
    bf.tau = args.tau;
    bf.lh = args.lh;
    bf.ref_mic = ref_mic;
    processing.mask.head_ms = args.noise_head_ms;
    processing.mask.tail_ms = args.noise_tail_ms;
    let job = JobConfig {
        inputs: args.inputs,
        reference: args.reference,
        output: Some(args.out),
        processing,
        sweep: SweepGrid::default(),
    };
    let (_, record) = pipeline::enhance(&job)?;
    if record.warnings > 0 {
        log::warn!(
            "{} of {} bins passed through ({} silent, {} failed)",
            record.warnings,
            record.num_bins,
            record.bins_silent,
            record.bins_failed
        );
    }
    if let (Some(enh), Some(noisy)) = (&record.enhanced, &record.unprocessed) {
        println!(
            "fwssnr {:.4} dB (unprocessed {:.4}, delta {:+.4}); segsnr {:.4} dB (unprocessed {:.4}, delta {:+.4})",
            enh.fwssnr_db,
            noisy.fwssnr_db,
            enh.fwssnr_db - noisy.fwssnr_db,
            enh.seg_snr_db,
            noisy.seg_snr_db,
            enh.seg_snr_db - noisy.seg_snr_db
        );
    }
    if let Some(path) = &args.record {
        fs::write(path, serde_json::to_string_pretty(&record).map_err(Error::from)?).map_err(io_err(path))?;
    }
    if record.all_bins_failed() {
        return Err(Failure::Solver("the solver failed on every bin with energy".into()));
    }
    Ok(())
}

fn sweep(config: &Path, out_csv: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(config).map_err(io_err(config))?;
    let base = config.parent().unwrap_or(Path::new("."));
    let parsed = pipeline::parse_sweep_config(&text, base)?;
    let mut rows = Vec::new();
    for job in &parsed.jobs {
        log::info!("sweeping {}", job.utterance());
        rows.extend(pipeline::sweep(job)?);
    }
    pipeline::write_rows_to(out_csv, &rows)?;
    Ok(())
}

fn report(csvs: &[PathBuf], out: Option<&Path>) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for path in csvs {
        rows.extend(pipeline::read_rows(path)?);
    }
    let summary = pipeline::report(&rows);
    match out {
        Some(path) => pipeline::write_rows_to(path, &summary)?,
        None => pipeline::write_rows(io::stdout().lock(), &summary)?,
    }
    Ok(())
}

fn synth(out_dir: &Path, channels: usize, frames: usize, snr_db: f64, seed: u64) -> Result<(), Failure> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let cfg = SceneConfig {
        channels,
        num_frames: frames,
        snr_db,
        seed,
        ..SceneConfig::default()
    };
    let analysis = AnalysisConfig::default();
    let rendered = Scene::generate(&cfg)?.render(&analysis, 0)?;
    write_wav(&out_dir.join("mixture.wav"), rendered.mixture.view(), analysis.fs)?;
    write_wav(
        &out_dir.join("reference.wav"),
        rendered.desired.view().insert_axis(ndarray::Axis(0)),
        analysis.fs,
    )?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enhance(args) => enhance(args),
        Command::Sweep { config, out_csv } => sweep(&config, &out_csv),
        Command::Report { csv, out } => report(&csv, out.as_deref()),
        Command::Synth {
            out_dir,
            channels,
            frames,
            snr_db,
            seed,
        } => synth(&out_dir, channels, frames, snr_db, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
