//! Short-time Fourier analysis and weighted overlap-add synthesis.
//!
//! Both directions use the same square-root periodic Hann window, so the
//! analysis/synthesis pair is a perfect-reconstruction filterbank whenever the
//! hop is at most half the frame length. The signal is padded with
//! `frame_len - hop` zeros on both sides (plus enough trailing zeros to land on
//! a hop boundary), so every input sample is covered by the full number of
//! overlapping frames.
//!
//! The forward DFT is unnormalized and the inverse carries the `1/frame_len`
//! factor. Only the `frame_len/2 + 1` non-negative frequency bins are stored.

use std::sync::Arc;

use ndarray::{Array2, Array3, ArrayView2, ArrayViewMut2, Axis};
use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    SqrtHann,
}

impl Window {
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            Window::SqrtHann => (0..len)
                .map(|n| {
                    let phase = 2.0 * std::f64::consts::PI * n as f64 / len as f64;
                    (0.5 - 0.5 * phase.cos()).sqrt()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub frame_len: usize,
    pub hop: usize,
    pub window: Window,
    pub fs: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            frame_len: 512,
            hop: 128,
            window: Window::SqrtHann,
            fs: 16_000,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hop == 0 {
            return Err(Error::InvalidConfig("hop must be at least 1".into()));
        }
        if !self.frame_len.is_power_of_two() || self.frame_len < 2 {
            return Err(Error::InvalidConfig(format!(
                "frame_len {} is not a power of two",
                self.frame_len
            )));
        }
        if !self.frame_len.is_multiple_of(self.hop) {
            return Err(Error::InvalidConfig(format!(
                "hop {} does not divide frame_len {}",
                self.hop, self.frame_len
            )));
        }
        if self.fs == 0 {
            return Err(Error::InvalidConfig("sample rate must be positive".into()));
        }
        // Perfect reconstruction needs a constant, non-zero overlap-add of w^2.
        let ola = self.overlap_add_gain();
        let first = ola[0];
        if first <= 1e-12 || ola.iter().any(|g| (g - first).abs() > 1e-9 * first) {
            return Err(Error::InvalidConfig(format!(
                "window does not satisfy constant overlap-add at hop {}",
                self.hop
            )));
        }
        Ok(())
    }

    pub fn num_bins(&self) -> usize {
        self.frame_len / 2 + 1
    }

    /// Zero padding in front of the signal (and the minimum at the end).
    pub fn edge_padding(&self) -> usize {
        self.frame_len - self.hop
    }

    /// Number of frames produced for a signal of `num_samples` samples.
    pub fn num_frames(&self, num_samples: usize) -> usize {
        let padded = self.padded_len(num_samples);
        (padded - self.frame_len) / self.hop + 1
    }

    /// Length of the signal spanned by `num_frames` frames once the edge padding is removed.
    pub fn signal_len(&self, num_frames: usize) -> usize {
        if num_frames == 0 {
            return 0;
        }
        ((num_frames - 1) * self.hop + self.frame_len).saturating_sub(2 * self.edge_padding())
    }

    /// Offset (in original-signal samples, possibly negative) of the first sample of frame `t`.
    pub fn frame_start(&self, t: usize) -> isize {
        (t * self.hop) as isize - self.edge_padding() as isize
    }

    fn padded_len(&self, num_samples: usize) -> usize {
        let base = num_samples + 2 * self.edge_padding();
        let rem = (base - self.frame_len) % self.hop;
        if rem == 0 {
            base
        } else {
            base + self.hop - rem
        }
    }

    fn overlap_add_gain(&self) -> Vec<f64> {
        let w = self.window.coefficients(self.frame_len);
        (0..self.hop)
            .map(|r| {
                (r..self.frame_len)
                    .step_by(self.hop)
                    .map(|n| w[n] * w[n])
                    .sum()
            })
            .collect()
    }
}

/// Complex STFT coefficients of a multichannel signal.
///
/// Stored bin-major as `[frequency, channel, frame]`; each bin is a contiguous
/// `M x T` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFrames {
    data: Array3<Complex64>,
    signal_len: Option<usize>,
}

impl SpectralFrames {
    /// `data` is indexed `[frequency, channel, frame]`.
    pub fn new(data: Array3<Complex64>) -> Result<Self> {
        let (f, m, t) = data.dim();
        if f == 0 || m == 0 || t == 0 {
            return Err(Error::InvalidInput(format!(
                "spectral frames must be non-empty, got {f} bins x {m} channels x {t} frames"
            )));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("spectral frames contain non-finite values".into()));
        }
        Ok(Self { data, signal_len: None })
    }

    /// Records the length of the time-domain signal the frames were computed from.
    pub fn with_signal_len(mut self, signal_len: usize) -> Self {
        self.signal_len = Some(signal_len);
        self
    }

    /// Assemble from per-bin `M x T` matrices.
    pub fn from_bins(bins: &[Array2<Complex64>]) -> Result<Self> {
        let first = bins
            .first()
            .ok_or_else(|| Error::InvalidInput("no frequency bins".into()))?;
        let (m, t) = first.dim();
        let mut data = Array3::zeros((bins.len(), m, t));
        for (f, bin) in bins.iter().enumerate() {
            if bin.dim() != (m, t) {
                return Err(Error::InvalidInput(format!(
                    "bin {f} has shape {:?}, expected {:?}",
                    bin.dim(),
                    (m, t)
                )));
            }
            data.index_axis_mut(Axis(0), f).assign(bin);
        }
        Self::new(data)
    }

    pub fn num_bins(&self) -> usize {
        self.data.dim().0
    }

    pub fn num_channels(&self) -> usize {
        self.data.dim().1
    }

    pub fn num_frames(&self) -> usize {
        self.data.dim().2
    }

    /// Length of the originating signal, or the span implied by `cfg` for frames
    /// that were never analyzed from audio.
    pub fn signal_len(&self, cfg: &AnalysisConfig) -> usize {
        self.signal_len.unwrap_or_else(|| cfg.signal_len(self.num_frames()))
    }

    pub fn recorded_signal_len(&self) -> Option<usize> {
        self.signal_len
    }

    pub fn get(&self, f: usize, t: usize, channel: usize) -> Complex64 {
        self.data[[f, channel, t]]
    }

    /// The `M x T` observation matrix of one frequency bin.
    pub fn bin(&self, f: usize) -> ArrayView2<'_, Complex64> {
        self.data.index_axis(Axis(0), f)
    }

    pub fn bin_mut(&mut self, f: usize) -> ArrayViewMut2<'_, Complex64> {
        self.data.index_axis_mut(Axis(0), f)
    }

    pub fn data(&self) -> &Array3<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array3<Complex64> {
        self.data
    }

    /// Keep a single channel.
    pub fn channel(&self, channel: usize) -> SpectralFrames {
        let data = self
            .data
            .slice(ndarray::s![.., channel..channel + 1, ..])
            .to_owned();
        SpectralFrames {
            data,
            signal_len: self.signal_len,
        }
    }
}

/// Planned forward/inverse transforms for one configuration.
pub struct Stft {
    cfg: AnalysisConfig,
    window: Vec<f64>,
    ola_gain: f64,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
}

impl Stft {
    pub fn new(cfg: AnalysisConfig) -> Result<Self> {
        cfg.validate()?;
        let mut planner = RealFftPlanner::<f64>::new();
        Ok(Self {
            window: cfg.window.coefficients(cfg.frame_len),
            ola_gain: cfg.overlap_add_gain()[0],
            forward: planner.plan_fft_forward(cfg.frame_len),
            inverse: planner.plan_fft_inverse(cfg.frame_len),
            cfg,
        })
    }

    pub fn config(&self) -> &AnalysisConfig {
        &self.cfg
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    /// `audio` is `channels x samples`.
    pub fn analyze(&self, audio: ArrayView2<'_, f64>) -> Result<SpectralFrames> {
        let (channels, num_samples) = audio.dim();
        let cfg = &self.cfg;
        if channels == 0 || num_samples == 0 {
            return Err(Error::InvalidInput("audio is empty".into()));
        }
        if num_samples < cfg.frame_len {
            return Err(Error::InvalidInput(format!(
                "audio has {num_samples} samples, fewer than one frame ({})",
                cfg.frame_len
            )));
        }
        if audio.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("audio contains non-finite samples".into()));
        }

        let num_frames = cfg.num_frames(num_samples);
        let pad = cfg.edge_padding();
        let mut data = Array3::zeros((cfg.num_bins(), channels, num_frames));
        let mut frame = self.forward.make_input_vec();
        let mut spectrum = self.forward.make_output_vec();
        let mut scratch = self.forward.make_scratch_vec();

        for ch in 0..channels {
            let signal = audio.row(ch);
            for t in 0..num_frames {
                let start = t * cfg.hop;
                for (n, slot) in frame.iter_mut().enumerate() {
                    let idx = (start + n).checked_sub(pad);
                    let x = match idx {
                        Some(i) if i < num_samples => signal[i],
                        _ => 0.0,
                    };
                    *slot = x * self.window[n];
                }
                self.forward
                    .process_with_scratch(&mut frame, &mut spectrum, &mut scratch)
                    .expect("buffer sizes come from the planner");
                for (k, c) in spectrum.iter().enumerate() {
                    data[[k, ch, t]] = *c;
                }
            }
        }
        Ok(SpectralFrames::new(data)?.with_signal_len(num_samples))
    }

    /// Returns `channels x signal_len` samples.
    pub fn synthesize(&self, frames: &SpectralFrames) -> Result<Array2<f64>> {
        let cfg = &self.cfg;
        if frames.num_bins() != cfg.num_bins() {
            return Err(Error::ConfigMismatch(format!(
                "frames carry {} bins, frame_len {} implies {}",
                frames.num_bins(),
                cfg.frame_len,
                cfg.num_bins()
            )));
        }
        let channels = frames.num_channels();
        let num_frames = frames.num_frames();
        let pad = cfg.edge_padding();
        let full_len = (num_frames - 1) * cfg.hop + cfg.frame_len;
        let out_len = frames.signal_len(cfg).min(full_len.saturating_sub(pad));

        let mut out = Array2::zeros((channels, out_len));
        let mut spectrum = self.inverse.make_input_vec();
        let mut frame = self.inverse.make_output_vec();
        let mut scratch = self.inverse.make_scratch_vec();
        let scale = 1.0 / (cfg.frame_len as f64 * self.ola_gain);
        let last = spectrum.len() - 1;
        let mut acc = vec![0.0; full_len];

        for ch in 0..channels {
            acc.iter_mut().for_each(|x| *x = 0.0);
            for t in 0..num_frames {
                for (k, slot) in spectrum.iter_mut().enumerate() {
                    *slot = frames.get(k, t, ch);
                }
                // A real signal has real DC and Nyquist coefficients.
                spectrum[0].im = 0.0;
                spectrum[last].im = 0.0;
                self.inverse
                    .process_with_scratch(&mut spectrum, &mut frame, &mut scratch)
                    .expect("buffer sizes come from the planner");
                let start = t * cfg.hop;
                for (n, x) in frame.iter().enumerate() {
                    acc[start + n] += x * self.window[n] * scale;
                }
            }
            for (i, y) in out.row_mut(ch).iter_mut().enumerate() {
                *y = acc[i + pad];
            }
        }
        Ok(out)
    }
}

pub fn analyze(audio: ArrayView2<'_, f64>, cfg: &AnalysisConfig) -> Result<SpectralFrames> {
    Stft::new(*cfg)?.analyze(audio)
}

pub fn synthesize(frames: &SpectralFrames, cfg: &AnalysisConfig) -> Result<Array2<f64>> {
    Stft::new(*cfg)?.synthesize(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(channels: usize, len: usize, seed: u64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((channels, len), |_| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn config_validation() {
        assert!(AnalysisConfig::default().validate().is_ok());
        let bad_hop = AnalysisConfig { hop: 100, ..Default::default() };
        assert!(matches!(bad_hop.validate(), Err(Error::InvalidConfig(_))));
        let not_pow2 = AnalysisConfig { frame_len: 500, hop: 125, ..Default::default() };
        assert!(not_pow2.validate().is_err());
        let zero_hop = AnalysisConfig { hop: 0, ..Default::default() };
        assert!(zero_hop.validate().is_err());
        // hop == frame_len leaves gaps in the Hann overlap-add
        let no_overlap = AnalysisConfig { hop: 512, ..Default::default() };
        assert!(no_overlap.validate().is_err());
    }

    #[test]
    fn frame_count_matches_padding_policy() {
        let cfg = AnalysisConfig::default();
        // 512 + 2*384 = 1280 padded, (1280-512)/128 + 1 = 7
        assert_eq!(cfg.num_frames(512), 7);
        assert_eq!(cfg.signal_len(7), 512);
        // non-multiple lengths are padded up to the next hop boundary
        assert_eq!(cfg.num_frames(600), 8);
        assert!(cfg.signal_len(8) >= 600);
    }

    #[test]
    fn rejects_empty_nan_and_short_audio() {
        let cfg = AnalysisConfig::default();
        let empty = Array2::<f64>::zeros((1, 0));
        assert!(matches!(analyze(empty.view(), &cfg), Err(Error::InvalidInput(_))));
        let mut x = Array2::<f64>::zeros((2, 1024));
        x[[1, 10]] = f64::NAN;
        assert!(matches!(analyze(x.view(), &cfg), Err(Error::InvalidInput(_))));
        let short = Array2::<f64>::zeros((1, 100));
        assert!(analyze(short.view(), &cfg).is_err());
    }

    #[test]
    fn zeros_in_zeros_out() {
        let cfg = AnalysisConfig::default();
        let x = Array2::<f64>::zeros((2, 2048));
        let frames = analyze(x.view(), &cfg).unwrap();
        assert!(frames.data().iter().all(|c| c.norm() == 0.0));
        let y = synthesize(&frames, &cfg).unwrap();
        assert_eq!(y.dim(), (2, 2048));
        assert!(y.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn impulse_spectrum_is_windowed_impulse() {
        let cfg = AnalysisConfig::default();
        let w = cfg.window.coefficients(cfg.frame_len);
        let mut x = Array2::<f64>::zeros((1, 2048));
        x[[0, 0]] = 1.0;
        let frames = analyze(x.view(), &cfg).unwrap();
        // frame 0 starts 384 samples before the signal, so the impulse sits at offset 384
        let offset = cfg.edge_padding();
        for k in 0..cfg.num_bins() {
            let phase = -2.0 * std::f64::consts::PI * (k * offset) as f64 / cfg.frame_len as f64;
            let expected = Complex64::from_polar(w[offset], phase);
            assert!((frames.get(k, 0, 0) - expected).norm() < 1e-12);
        }
        // frame 3 starts exactly at sample 0: spectrum is w[0] in every bin
        for k in 0..cfg.num_bins() {
            assert!((frames.get(k, 3, 0) - Complex64::new(w[0], 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn sinusoid_concentrates_in_its_bin() {
        let cfg = AnalysisConfig::default();
        let k0 = 37;
        let n = 4096;
        let x = Array2::from_shape_fn((1, n), |(_, i)| {
            (2.0 * std::f64::consts::PI * (k0 * i) as f64 / cfg.frame_len as f64).cos()
        });
        let frames = analyze(x.view(), &cfg).unwrap();
        let w = cfg.window.coefficients(cfg.frame_len);
        // interior frames have full support inside the signal
        for t in 3..(frames.num_frames() - 3) {
            let start = cfg.frame_start(t) as usize;
            // direct-summation oracle of the windowed frame at bin k0
            let oracle: Complex64 = (0..cfg.frame_len)
                .map(|i| {
                    let ang = 2.0 * std::f64::consts::PI * (k0 * i) as f64 / cfg.frame_len as f64;
                    Complex64::from_polar(w[i] * x[[0, start + i]], -ang)
                })
                .sum();
            let got = frames.get(k0, t, 0);
            assert!((got - oracle).norm() <= 1e-6 * oracle.norm(), "frame {t}: {got}");
            let total: f64 = (0..cfg.num_bins()).map(|k| frames.get(k, t, 0).norm_sqr()).sum();
            let neighbours: f64 = (k0 - 3..=k0 + 3).map(|k| frames.get(k, t, 0).norm_sqr()).sum();
            assert!(neighbours / total > 0.999);
        }
    }

    #[test]
    fn white_noise_round_trip() {
        let cfg = AnalysisConfig::default();
        let x = noise(3, 8000, 7);
        let y = synthesize(&analyze(x.view(), &cfg).unwrap(), &cfg).unwrap();
        assert_eq!(x.dim(), y.dim());
        let peak = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let err = x.iter().zip(y.iter()).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        assert!(err <= 1e-6 * peak, "round trip error {err}");
    }

    #[test]
    fn single_frame_stays_local() {
        let cfg = AnalysisConfig::default();
        let t0 = 10;
        let num_frames = 30;
        let mut data = Array3::zeros((cfg.num_bins(), 1, num_frames));
        for k in 0..cfg.num_bins() {
            data[[k, 0, t0]] = Complex64::new(1.0, 0.5);
        }
        let frames = SpectralFrames::new(data).unwrap();
        let y = synthesize(&frames, &cfg).unwrap();
        let start = cfg.frame_start(t0);
        for (i, v) in y.row(0).iter().enumerate() {
            let i = i as isize;
            if i < start || i >= start + cfg.frame_len as isize {
                assert_eq!(*v, 0.0, "sample {i} outside the frame support");
            }
        }
        assert!(y.iter().any(|v| *v != 0.0));
    }

    #[test]
    fn synthesize_rejects_mismatched_config() {
        let cfg = AnalysisConfig::default();
        let frames = analyze(noise(1, 2048, 1).view(), &cfg).unwrap();
        let other = AnalysisConfig { frame_len: 256, hop: 64, ..cfg };
        assert!(matches!(synthesize(&frames, &other), Err(Error::ConfigMismatch(_))));
    }
}
