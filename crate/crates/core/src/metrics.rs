//! Objective quality scores against a reference signal.
//!
//! FWSSNR follows the common configuration from the speech-enhancement
//! evaluation literature: 25 ms Hann frames at 75 % overlap, 25 mel-spaced
//! triangular bands applied to the magnitude spectrum, band weights
//! `|X_j|^0.2` from the reference, per-band SNR clipped to `[-10, 35]` dB.

use serde::{Deserialize, Serialize};

use realfft::RealFftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsConfig {
    pub fs: u32,
    pub frame_ms: f64,
    /// Fraction of a frame shared with the next one.
    pub overlap: f64,
    pub num_bands: usize,
    pub weight_exponent: f64,
    pub min_db: f64,
    pub max_db: f64,
}

impl MetricsConfig {
    pub fn for_sample_rate(fs: u32) -> Self {
        Self {
            fs,
            frame_ms: 25.0,
            overlap: 0.75,
            num_bands: 25,
            weight_exponent: 0.2,
            min_db: -10.0,
            max_db: 35.0,
        }
    }

    pub fn frame_len(&self) -> usize {
        ((self.frame_ms * 1e-3 * self.fs as f64).round() as usize).max(2)
    }

    pub fn hop(&self) -> usize {
        ((self.frame_len() as f64 * (1.0 - self.overlap)).round() as usize).max(1)
    }

    pub fn fft_len(&self) -> usize {
        (2 * self.frame_len()).next_power_of_two()
    }

    fn validate(&self) -> Result<()> {
        if self.fs == 0 || self.num_bands == 0 || !(0.0..1.0).contains(&self.overlap) || self.min_db >= self.max_db {
            return Err(Error::InvalidConfig(format!("invalid metrics configuration {self:?}")));
        }
        Ok(())
    }

    fn clip(&self, db: f64) -> f64 {
        if db.is_nan() {
            self.min_db
        } else {
            db.clamp(self.min_db, self.max_db)
        }
    }
}

/// Symmetric Hann window without the zero end points.
pub fn hann(len: usize) -> Vec<f64> {
    (1..=len)
        .map(|n| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * n as f64 / (len + 1) as f64).cos()))
        .collect()
}

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular mel filters over the `fft_len/2 + 1` bins, one row per band.
pub fn mel_filterbank(num_bands: usize, fft_len: usize, fs: u32) -> Vec<Vec<f64>> {
    let nyquist = fs as f64 / 2.0;
    let top = hz_to_mel(nyquist);
    let edges: Vec<f64> = (0..num_bands + 2)
        .map(|i| mel_to_hz(top * i as f64 / (num_bands + 1) as f64))
        .collect();
    let num_bins = fft_len / 2 + 1;
    (0..num_bands)
        .map(|j| {
            let (lo, mid, hi) = (edges[j], edges[j + 1], edges[j + 2]);
            (0..num_bins)
                .map(|k| {
                    let hz = k as f64 * fs as f64 / fft_len as f64;
                    if hz <= lo || hz >= hi {
                        0.0
                    } else if hz <= mid {
                        (hz - lo) / (mid - lo)
                    } else {
                        (hi - hz) / (hi - mid)
                    }
                })
                .collect()
        })
        .collect()
}

fn check_pair(reference: &[f64], test: &[f64], cfg: &MetricsConfig) -> Result<usize> {
    cfg.validate()?;
    if reference.len() != test.len() {
        return Err(Error::InvalidInput(format!(
            "reference has {} samples, test has {}",
            reference.len(),
            test.len()
        )));
    }
    let frame_len = cfg.frame_len();
    if reference.len() < frame_len {
        return Err(Error::InvalidInput(format!(
            "signals are shorter than one {frame_len}-sample metric frame"
        )));
    }
    if reference.iter().chain(test).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("signals contain non-finite samples".into()));
    }
    if reference.iter().all(|x| *x == 0.0) {
        return Err(Error::InvalidInput("reference signal is all zeros".into()));
    }
    Ok((reference.len() - frame_len) / cfg.hop() + 1)
}

/// Per-frame FWSSNR in dB; frames where the reference is silent in every band are skipped.
pub fn fwssnr_frames(reference: &[f64], test: &[f64], cfg: &MetricsConfig) -> Result<Vec<f64>> {
    let num_frames = check_pair(reference, test, cfg)?;
    let frame_len = cfg.frame_len();
    let hop = cfg.hop();
    let fft_len = cfg.fft_len();
    let window = hann(frame_len);
    let bank = mel_filterbank(cfg.num_bands, fft_len, cfg.fs);

    let mut planner = RealFftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(fft_len);
    let mut buf = fft.make_input_vec();
    let mut spec = fft.make_output_vec();
    let mut scratch = fft.make_scratch_vec();
    let mut band_mags = |x: &[f64]| -> Vec<f64> {
        buf.iter_mut().for_each(|v| *v = 0.0);
        for (n, (b, s)) in buf.iter_mut().zip(x).enumerate() {
            *b = s * window[n];
        }
        fft.process_with_scratch(&mut buf, &mut spec, &mut scratch)
            .expect("buffer sizes come from the planner");
        bank.iter()
            .map(|filt| filt.iter().zip(spec.iter()).map(|(h, c)| h * c.norm()).sum())
            .collect()
    };

    let mut scores = Vec::with_capacity(num_frames);
    for i in 0..num_frames {
        let range = i * hop..i * hop + frame_len;
        let clean = band_mags(&reference[range.clone()]);
        let processed = band_mags(&test[range]);
        let mut weight_sum = 0.0;
        // accumulate the shortfall from the ceiling so an all-ceiling frame scores it exactly
        let mut shortfall = 0.0;
        for (x, y) in clean.iter().zip(&processed) {
            let w = x.powf(cfg.weight_exponent);
            let err = (x - y) * (x - y);
            let snr = if err == 0.0 {
                cfg.max_db
            } else {
                cfg.clip(10.0 * (x * x / err).log10())
            };
            weight_sum += w;
            shortfall += w * (cfg.max_db - snr);
        }
        if weight_sum > 0.0 {
            scores.push(cfg.max_db - shortfall / weight_sum);
        }
    }
    Ok(scores)
}

/// Frequency-weighted segmental SNR in dB.
pub fn fwssnr(reference: &[f64], test: &[f64], cfg: &MetricsConfig) -> Result<f64> {
    mean(&fwssnr_frames(reference, test, cfg)?)
}

/// Per-frame time-domain segmental SNR; frames with a silent reference are skipped.
pub fn seg_snr_frames(reference: &[f64], test: &[f64], cfg: &MetricsConfig) -> Result<Vec<f64>> {
    let num_frames = check_pair(reference, test, cfg)?;
    let frame_len = cfg.frame_len();
    let hop = cfg.hop();
    let mut scores = Vec::with_capacity(num_frames);
    for i in 0..num_frames {
        let range = i * hop..i * hop + frame_len;
        let signal: f64 = reference[range.clone()].iter().map(|x| x * x).sum();
        if signal == 0.0 {
            continue;
        }
        let err: f64 = reference[range.clone()]
            .iter()
            .zip(&test[range])
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        scores.push(if err == 0.0 {
            cfg.max_db
        } else {
            cfg.clip(10.0 * (signal / err).log10())
        });
    }
    Ok(scores)
}

pub fn seg_snr(reference: &[f64], test: &[f64], cfg: &MetricsConfig) -> Result<f64> {
    mean(&seg_snr_frames(reference, test, cfg)?)
}

fn mean(scores: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::InvalidInput("no frame carries reference energy".into()));
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Improvement of an enhanced score over the unprocessed one.
pub fn delta(metric_enhanced: f64, metric_noisy: f64) -> f64 {
    metric_enhanced - metric_noisy
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerFrameScores {
    pub fwssnr_db: Vec<f64>,
    pub seg_snr_db: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub fwssnr_db: f64,
    pub seg_snr_db: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_frame: Option<PerFrameScores>,
}

impl MetricReport {
    pub fn compute(reference: &[f64], test: &[f64], cfg: &MetricsConfig, keep_frames: bool) -> Result<Self> {
        let fw = fwssnr_frames(reference, test, cfg)?;
        let seg = seg_snr_frames(reference, test, cfg)?;
        Ok(Self {
            fwssnr_db: mean(&fw)?,
            seg_snr_db: mean(&seg)?,
            per_frame: keep_frames.then_some(PerFrameScores {
                fwssnr_db: fw,
                seg_snr_db: seg,
            }),
        })
    }
}

/// Lag in `[-max_lag, max_lag]` maximizing `sum_n reference[n] * test[n + lag]`.
/// Ties resolve to the lag of smallest magnitude.
pub fn best_lag(reference: &[f64], test: &[f64], max_lag: usize) -> isize {
    let max_lag = max_lag as isize;
    let mut best = (f64::NEG_INFINITY, 0isize);
    let mut lags: Vec<isize> = (-max_lag..=max_lag).collect();
    lags.sort_by_key(|l| l.abs());
    for lag in lags {
        let corr: f64 = reference
            .iter()
            .enumerate()
            .filter_map(|(n, r)| {
                let j = n as isize + lag;
                (j >= 0 && (j as usize) < test.len()).then(|| r * test[j as usize])
            })
            .sum();
        if corr > best.0 {
            best = (corr, lag);
        }
    }
    best.1
}

/// Overlapping parts of `reference` and `test` once `test` is shifted back by `lag`.
pub fn aligned<'a>(reference: &'a [f64], test: &'a [f64], lag: isize) -> (&'a [f64], &'a [f64]) {
    let (r, t) = if lag >= 0 {
        let lag = (lag as usize).min(test.len());
        (reference, &test[lag..])
    } else {
        let lag = (lag.unsigned_abs()).min(reference.len());
        (&reference[lag..], test)
    };
    let n = r.len().min(t.len());
    (&r[..n], &t[..n])
}
