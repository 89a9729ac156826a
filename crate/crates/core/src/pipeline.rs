//! Batch driver: audio in, per-bin RTF estimation and IRLS filtering, audio out,
//! plus scoring, iteration sweeps and CSV reports.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::{Array1, Array2, Array3, ArrayView2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beamformer::{magnitude_floor, run_lp_wpd, BeamformerConfig, InitMode, IterationDiagnostics};
use crate::error::{Error, Result};
use crate::linalg::sample_cov;
use crate::metrics::{aligned, best_lag, MetricReport, MetricsConfig};
use crate::rtf::{estimate_noise_cov, estimate_rtf, NoiseMask};
use crate::stft::{AnalysisConfig, SpectralFrames, Stft};
use crate::wav::{read_channels, read_wav, write_wav};

/// Maximum lag searched when aligning a reference to an output.
pub const ALIGN_MAX_MS: f64 = 32.0;

/// Everything that shapes the numbers, independent of where the audio comes from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProcessingConfig {
    pub analysis: AnalysisConfig,
    pub beamformer: BeamformerConfig,
    pub mask: NoiseMask,
    /// Worker threads for the per-bin stage; 0 uses every core.
    pub jobs: usize,
    pub seed: u64,
}

impl ProcessingConfig {
    pub fn validate(&self) -> Result<()> {
        self.analysis.validate()?;
        self.beamformer.validate()
    }
}

/// Shape parameters, initializations and iteration count of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub p: Vec<f64>,
    pub init: Vec<InitMode>,
    pub iterations: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            p: vec![0.0, 0.5, 1.0],
            init: vec![InitMode::SingleChannel, InitMode::MultiChannel],
            iterations: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    /// One multichannel file, or one file per channel.
    pub inputs: Vec<PathBuf>,
    pub reference: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub processing: ProcessingConfig,
    pub sweep: SweepGrid,
}

impl JobConfig {
    pub fn new(inputs: Vec<PathBuf>) -> Self {
        Self {
            inputs,
            reference: None,
            output: None,
            processing: ProcessingConfig::default(),
            sweep: SweepGrid::default(),
        }
    }

    /// Name used for CSV rows: the stem of the first input.
    pub fn utterance(&self) -> String {
        let mut sorted = self.inputs.clone();
        sorted.sort();
        sorted
            .first()
            .and_then(|p| p.file_stem())
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }

    fn check_files(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::InvalidInput("no input files given".into()));
        }
        for p in self.inputs.iter().chain(&self.reference) {
            if !p.is_file() {
                return Err(Error::InvalidInput(format!("{} does not exist", p.display())));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinStatus {
    Enhanced,
    /// No energy in the reference channel; passed through.
    Silent,
    /// A numerical failure; passed through.
    Failed,
}

#[derive(Debug, Clone)]
pub struct BinResult {
    pub status: BinStatus,
    /// Output after each iteration, or only the last one when history is not kept.
    pub outputs: Vec<Array1<Complex64>>,
    pub diagnostics: Vec<IterationDiagnostics>,
    pub message: Option<String>,
}

/// Result of filtering every bin of a recording.
#[derive(Debug, Clone)]
pub struct SpectrumRun {
    pub bins: Vec<BinResult>,
    pub iterations: usize,
    pub stacked_dim: usize,
    ref_mic: usize,
}

impl SpectrumRun {
    pub fn count(&self, status: BinStatus) -> usize {
        self.bins.iter().filter(|b| b.status == status).count()
    }

    /// True when at least one bin had energy and every such bin failed.
    pub fn all_failed(&self) -> bool {
        let failed = self.count(BinStatus::Failed);
        failed > 0 && failed + self.count(BinStatus::Silent) == self.bins.len()
    }

    /// Single-channel spectrum after `iteration` (1-based); pass-through bins
    /// carry the reference channel of `mixture`.
    pub fn spectrum_at(&self, mixture: &SpectralFrames, iteration: usize) -> Result<SpectralFrames> {
        if iteration == 0 || iteration > self.iterations {
            return Err(Error::InvalidInput(format!(
                "iteration {iteration} outside 1..={}",
                self.iterations
            )));
        }
        let t = mixture.num_frames();
        let mut data = Array3::zeros((self.bins.len(), 1, t));
        for (f, bin) in self.bins.iter().enumerate() {
            let mut row = data.slice_mut(ndarray::s![f, 0, ..]);
            if bin.status == BinStatus::Enhanced {
                let z = if bin.outputs.len() == self.iterations {
                    &bin.outputs[iteration - 1]
                } else if iteration == self.iterations {
                    bin.outputs.last().expect("enhanced bins keep their output")
                } else {
                    return Err(Error::InvalidInput("iteration history was not kept".into()));
                };
                row.assign(z);
            } else {
                row.assign(&mixture.bin(f).row(self.ref_mic));
            }
        }
        let out = SpectralFrames::new(data)?;
        Ok(match mixture.recorded_signal_len() {
            Some(n) => out.with_signal_len(n),
            None => out,
        })
    }

    pub fn final_spectrum(&self, mixture: &SpectralFrames) -> Result<SpectralFrames> {
        self.spectrum_at(mixture, self.iterations)
    }

    /// Diagnostics of one iteration (1-based) pooled over the enhanced bins.
    pub fn summary(&self, iteration: usize) -> IterationSummary {
        let diags: Vec<&IterationDiagnostics> = self
            .bins
            .iter()
            .filter(|b| b.status == BinStatus::Enhanced)
            .filter_map(|b| b.diagnostics.get(iteration - 1))
            .collect();
        let n = diags.len();
        IterationSummary {
            iteration,
            constraint_residual_max: diags.iter().map(|d| d.constraint_residual).fold(0.0, f64::max),
            lp_cost_mean: if n == 0 {
                0.0
            } else {
                diags.iter().map(|d| d.lp_cost).sum::<f64>() / n as f64
            },
        }
    }

    pub fn summaries(&self) -> Vec<IterationSummary> {
        (1..=self.iterations).map(|i| self.summary(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationSummary {
    pub iteration: usize,
    pub constraint_residual_max: f64,
    pub lp_cost_mean: f64,
}

fn process_bin(
    bin: ArrayView2<'_, Complex64>,
    cfg: &ProcessingConfig,
    signal_len: usize,
    keep_history: bool,
) -> Result<BinResult> {
    let bf = &cfg.beamformer;
    let fallback = |status, message: Option<String>| BinResult {
        status,
        outputs: Vec::new(),
        diagnostics: Vec::new(),
        message,
    };
    if let Err(Error::SilentBin) = magnitude_floor(bin, bf.ref_mic, bf.weight_floor) {
        return Ok(fallback(BinStatus::Silent, None));
    }
    let attempt = || -> Result<BinResult> {
        let rn = estimate_noise_cov(bin, &cfg.mask, &cfg.analysis, signal_len)?;
        let ry = sample_cov(bin, None)?;
        let rtf = estimate_rtf(&ry, &rn, bf.ref_mic)?;
        let run = run_lp_wpd(bin, &rtf, bf)?;
        let diagnostics = run.diagnostics();
        let outputs = if keep_history {
            run.history.into_iter().map(|s| s.z).collect()
        } else {
            vec![run.history.into_iter().last().expect("at least one iteration").z]
        };
        Ok(BinResult {
            status: BinStatus::Enhanced,
            outputs,
            diagnostics,
            message: None,
        })
    };
    match attempt() {
        Err(e) if e.is_solver_failure() => Ok(fallback(BinStatus::Failed, Some(e.to_string()))),
        other => other,
    }
}

/// Filters every bin of `mixture` (`[frequency, channel, frame]`).
///
/// Bins run concurrently on `cfg.jobs` threads; results are assembled in bin
/// order, so the output does not depend on the thread count.
pub fn enhance_spectrum(mixture: &SpectralFrames, cfg: &ProcessingConfig, keep_history: bool) -> Result<SpectrumRun> {
    cfg.validate()?;
    let m = mixture.num_channels();
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "at least two channels are needed, got {m}"
        )));
    }
    if cfg.beamformer.ref_mic >= m {
        return Err(Error::InvalidInput(format!(
            "reference microphone {} out of range for {m} channels",
            cfg.beamformer.ref_mic + 1
        )));
    }
    let signal_len = mixture.signal_len(&cfg.analysis);
    cfg.mask.select_frames(&cfg.analysis, mixture.num_frames(), signal_len)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let bins = pool.install(|| {
        (0..mixture.num_bins())
            .into_par_iter()
            .map(|f| process_bin(mixture.bin(f), cfg, signal_len, keep_history))
            .collect::<Result<Vec<_>>>()
    })?;
    for (f, b) in bins.iter().enumerate() {
        if let Some(msg) = &b.message {
            log::warn!("bin {f}: {msg}; passing the reference channel through");
        }
    }
    Ok(SpectrumRun {
        bins,
        iterations: cfg.beamformer.iterations,
        stacked_dim: cfg.beamformer.stacked_dim(m),
        ref_mic: cfg.beamformer.ref_mic,
    })
}

/// Scores `test` against `reference` after aligning them by cross-correlation.
pub fn score(reference: &[f64], test: &[f64], fs: u32) -> Result<MetricReport> {
    let max_lag = (ALIGN_MAX_MS * 1e-3 * fs as f64).round() as usize;
    let lag = best_lag(reference, test, max_lag);
    let (r, t) = aligned(reference, test, lag);
    MetricReport::compute(r, t, &MetricsConfig::for_sample_rate(fs), false)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub analysis_ms: f64,
    pub filtering_ms: f64,
    pub synthesis_ms: f64,
    pub metrics_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: ProcessingConfig,
    pub inputs: Vec<PathBuf>,
    pub reference: Option<PathBuf>,
    pub channels: usize,
    pub num_samples: usize,
    pub num_frames: usize,
    pub num_bins: usize,
    pub stacked_dim: usize,
    pub bins_enhanced: usize,
    pub bins_silent: usize,
    pub bins_failed: usize,
    /// Bins passed through unprocessed.
    pub warnings: usize,
    pub iterations: Vec<IterationSummary>,
    pub enhanced: Option<MetricReport>,
    pub unprocessed: Option<MetricReport>,
    pub timings: Timings,
}

impl RunRecord {
    pub fn all_bins_failed(&self) -> bool {
        self.bins_failed > 0 && self.bins_failed + self.bins_silent == self.num_bins
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// In-memory enhancement of `audio` (`channels x samples`) sampled at `cfg.analysis.fs`.
/// Returns the enhanced reference-channel signal.
pub fn enhance_audio(
    audio: ArrayView2<'_, f64>,
    reference: Option<&[f64]>,
    cfg: &ProcessingConfig,
) -> Result<(Array1<f64>, RunRecord)> {
    cfg.validate()?;
    let stft = Stft::new(cfg.analysis)?;
    let start = Instant::now();
    let mixture = stft.analyze(audio)?;
    let analysis_ms = ms_since(start);

    let start = Instant::now();
    let run = enhance_spectrum(&mixture, cfg, false)?;
    let filtering_ms = ms_since(start);

    let start = Instant::now();
    let enhanced = stft.synthesize(&run.final_spectrum(&mixture)?)?.row(0).to_owned();
    let synthesis_ms = ms_since(start);

    let start = Instant::now();
    let (enh_report, noisy_report) = match reference {
        Some(r) => {
            let noisy = audio.row(cfg.beamformer.ref_mic).to_vec();
            (
                Some(score(r, enhanced.as_slice().expect("contiguous"), cfg.analysis.fs)?),
                Some(score(r, &noisy, cfg.analysis.fs)?),
            )
        }
        None => (None, None),
    };
    let metrics_ms = ms_since(start);

    let record = RunRecord {
        config: cfg.clone(),
        inputs: Vec::new(),
        reference: None,
        channels: audio.nrows(),
        num_samples: audio.ncols(),
        num_frames: mixture.num_frames(),
        num_bins: mixture.num_bins(),
        stacked_dim: run.stacked_dim,
        bins_enhanced: run.count(BinStatus::Enhanced),
        bins_silent: run.count(BinStatus::Silent),
        bins_failed: run.count(BinStatus::Failed),
        warnings: run.count(BinStatus::Silent) + run.count(BinStatus::Failed),
        iterations: run.summaries(),
        enhanced: enh_report,
        unprocessed: noisy_report,
        timings: Timings {
            analysis_ms,
            filtering_ms,
            synthesis_ms,
            metrics_ms,
        },
    };
    Ok((enhanced, record))
}

fn load_inputs(job: &JobConfig) -> Result<(Array2<f64>, Option<Vec<f64>>)> {
    job.check_files()?;
    let fs = job.processing.analysis.fs;
    let audio = read_channels(&job.inputs)?;
    if audio.fs != fs {
        return Err(Error::InvalidInput(format!(
            "input is sampled at {} Hz, analysis expects {fs} Hz",
            audio.fs
        )));
    }
    let reference = match &job.reference {
        Some(path) => {
            let r = read_wav(path)?;
            if r.fs != fs {
                return Err(Error::InvalidInput(format!(
                    "{} is sampled at {} Hz, analysis expects {fs} Hz",
                    path.display(),
                    r.fs
                )));
            }
            Some(r.samples.row(0).to_vec())
        }
        None => None,
    };
    Ok((audio.samples, reference))
}

/// Reads the job's audio, enhances it and writes the output file if one is set.
pub fn enhance(job: &JobConfig) -> Result<(Array1<f64>, RunRecord)> {
    let (audio, reference) = load_inputs(job)?;
    let (enhanced, mut record) = enhance_audio(audio.view(), reference.as_deref(), &job.processing)?;
    record.inputs = job.inputs.clone();
    record.reference = job.reference.clone();
    if let Some(out) = &job.output {
        write_wav(out, enhanced.view().insert_axis(ndarray::Axis(0)), job.processing.analysis.fs)?;
    }
    Ok((enhanced, record))
}

/// One cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub utterance: String,
    pub p: f64,
    pub init: InitMode,
    pub iteration: usize,
    pub fwssnr_noisy: f64,
    pub fwssnr_enh: f64,
    pub delta_fwssnr: f64,
    pub seg_snr_noisy: f64,
    pub seg_snr_enh: f64,
    pub delta_seg_snr: f64,
    pub constraint_residual_max: f64,
    /// Mean floored cost over the enhanced bins at this row's iteration.
    pub lp_cost_final: f64,
}

/// Sweeps `grid` over one in-memory recording. Every iteration's output comes
/// from the history of a single run per `(p, init)` cell.
pub fn sweep_audio(
    utterance: &str,
    audio: ArrayView2<'_, f64>,
    reference: &[f64],
    cfg: &ProcessingConfig,
    grid: &SweepGrid,
) -> Result<Vec<SweepRow>> {
    if grid.p.is_empty() || grid.init.is_empty() || grid.iterations == 0 {
        return Err(Error::InvalidConfig("sweep lists must be non-empty".into()));
    }
    let stft = Stft::new(cfg.analysis)?;
    let mixture = stft.analyze(audio)?;
    let fs = cfg.analysis.fs;
    let noisy = score(reference, &audio.row(cfg.beamformer.ref_mic).to_vec(), fs)?;
    let mut rows = Vec::new();
    for &p in &grid.p {
        for &init in &grid.init {
            let cell = ProcessingConfig {
                beamformer: BeamformerConfig {
                    p,
                    init,
                    iterations: grid.iterations,
                    ..cfg.beamformer
                },
                ..cfg.clone()
            };
            let run = enhance_spectrum(&mixture, &cell, true)?;
            for iteration in 1..=grid.iterations {
                let out = stft.synthesize(&run.spectrum_at(&mixture, iteration)?)?;
                let enh = score(reference, &out.row(0).to_vec(), fs)?;
                let summary = run.summary(iteration);
                rows.push(SweepRow {
                    utterance: utterance.to_string(),
                    p,
                    init,
                    iteration,
                    fwssnr_noisy: noisy.fwssnr_db,
                    fwssnr_enh: enh.fwssnr_db,
                    delta_fwssnr: enh.fwssnr_db - noisy.fwssnr_db,
                    seg_snr_noisy: noisy.seg_snr_db,
                    seg_snr_enh: enh.seg_snr_db,
                    delta_seg_snr: enh.seg_snr_db - noisy.seg_snr_db,
                    constraint_residual_max: summary.constraint_residual_max,
                    lp_cost_final: summary.lp_cost_mean,
                });
            }
        }
    }
    Ok(rows)
}

pub fn sweep(job: &JobConfig) -> Result<Vec<SweepRow>> {
    let (audio, reference) = load_inputs(job)?;
    let reference = reference.ok_or_else(|| Error::InvalidInput("a sweep needs a reference signal".into()))?;
    sweep_audio(&job.utterance(), audio.view(), &reference, &job.processing, &job.sweep)
}

pub fn write_rows<W: Write, R: Serialize>(writer: W, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_rows_to(path: &Path, rows: &[impl Serialize]) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_rows(file, rows)
}

pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Mean over utterances of one `(p, init, iteration)` cell, each utterance weighted equally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: f64,
    pub init: InitMode,
    pub iteration: usize,
    pub utterances: usize,
    pub delta_fwssnr: f64,
    pub delta_seg_snr: f64,
    pub fwssnr_enh: f64,
    pub seg_snr_enh: f64,
}

type Cell<'a> = (f64, InitMode, Vec<&'a SweepRow>);

pub fn report(rows: &[SweepRow]) -> Vec<ReportRow> {
    let mut groups: BTreeMap<(u64, &'static str, usize), Cell<'_>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.p.to_bits(), r.init.label(), r.iteration))
            .or_insert_with(|| (r.p, r.init, Vec::new()))
            .2
            .push(r);
    }
    let mut out: Vec<ReportRow> = groups
        .into_values()
        .map(|(p, init, members)| {
            let n = members.len() as f64;
            let mean = |f: fn(&SweepRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / n;
            ReportRow {
                p,
                init,
                iteration: members[0].iteration,
                utterances: members.len(),
                delta_fwssnr: mean(|r| r.delta_fwssnr),
                delta_seg_snr: mean(|r| r.delta_seg_snr),
                fwssnr_enh: mean(|r| r.fwssnr_enh),
                seg_snr_enh: mean(|r| r.seg_snr_enh),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.p.total_cmp(&b.p)
            .then(a.init.label().cmp(b.init.label()))
            .then(a.iteration.cmp(&b.iteration))
    });
    out
}

/// Parsed sweep configuration: shared settings plus one job per utterance.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFile {
    pub jobs: Vec<JobConfig>,
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {s:?}")))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
}

/// Parses a `key = value` sweep file. `input` and `reference` repeat, one
/// utterance per line, paired in order; relative paths resolve against `base`.
/// `ref_mic` is 1-based.
pub fn parse_sweep_config(text: &str, base: &Path) -> Result<SweepFile> {
    let mut processing = ProcessingConfig::default();
    let mut grid = SweepGrid::default();
    let mut inputs: Vec<Vec<PathBuf>> = Vec::new();
    let mut references: Vec<PathBuf> = Vec::new();
    let resolve = |s: &str| {
        let p = PathBuf::from(s);
        if p.is_absolute() {
            p
        } else {
            base.join(p)
        }
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        let bf = &mut processing.beamformer;
        match key {
            "input" => inputs.push(value.split_whitespace().map(resolve).collect()),
            "reference" => references.push(resolve(value)),
            "p" => grid.p = parse_list(key, value)?,
            "init" => grid.init = parse_list(key, value)?,
            "iters" | "iterations" => grid.iterations = parse_one(key, value)?,
            "tau" => bf.tau = parse_one(key, value)?,
            "lh" => bf.lh = parse_one(key, value)?,
            "ref_mic" => {
                let m: usize = parse_one(key, value)?;
                bf.ref_mic = m
                    .checked_sub(1)
                    .ok_or_else(|| Error::InvalidConfig("ref_mic is 1-based".into()))?;
            }
            "noise_head_ms" => processing.mask.head_ms = parse_one(key, value)?,
            "noise_tail_ms" => processing.mask.tail_ms = parse_one(key, value)?,
            "frame_len" => processing.analysis.frame_len = parse_one(key, value)?,
            "hop" => processing.analysis.hop = parse_one(key, value)?,
            "fs" => processing.analysis.fs = parse_one(key, value)?,
            "jobs" => processing.jobs = parse_one(key, value)?,
            "seed" => processing.seed = parse_one(key, value)?,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    if inputs.is_empty() {
        return Err(Error::InvalidConfig("no input given".into()));
    }
    if references.len() != inputs.len() {
        return Err(Error::InvalidConfig(format!(
            "{} inputs but {} references",
            inputs.len(),
            references.len()
        )));
    }
    if grid.p.is_empty() || grid.init.is_empty() || grid.iterations == 0 {
        return Err(Error::InvalidConfig("sweep lists must be non-empty".into()));
    }
    processing.beamformer.iterations = grid.iterations;
    processing.validate()?;
    let jobs = inputs
        .into_iter()
        .zip(references)
        .map(|(inputs, reference)| JobConfig {
            inputs,
            reference: Some(reference),
            output: None,
            processing: processing.clone(),
            sweep: grid.clone(),
        })
        .collect();
    Ok(SweepFile { jobs })
}
