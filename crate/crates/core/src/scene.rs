//! Synthetic noisy reverberant scenes generated directly in the STFT domain.
//!
//! Every bin follows the convolutive transfer function model
//! `y_t = sum_l a_l s_{t-l} + n_t` exactly, with the desired part (lags below
//! `tau`), the late reverberation and the noise kept separately.

use ndarray::{s, Array1, Array2, Array3, ArrayView2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rtf::RtfVector;
use crate::stft::{AnalysisConfig, SpectralFrames, Stft};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Circular complex Gaussian sample with unit variance.
fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Per-bin CTF taps, indexed `[frequency, lag, channel]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CtfModel {
    taps: Array3<Complex64>,
}

impl CtfModel {
    pub fn new(taps: Array3<Complex64>) -> Result<Self> {
        let (f, la, m) = taps.dim();
        if f == 0 || la == 0 || m == 0 {
            return Err(Error::InvalidInput(format!("empty CTF model ({f} bins, {la} taps, {m} channels)")));
        }
        if taps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("CTF taps must be finite".into()));
        }
        Ok(Self { taps })
    }

    /// Single tap per bin: `a_0 = v` with `v` indexed `[frequency, channel]`.
    pub fn single_tap(v: ArrayView2<'_, Complex64>) -> Result<Self> {
        let (f, m) = v.dim();
        let mut taps = Array3::zeros((f, 1, m));
        taps.slice_mut(s![.., 0, ..]).assign(&v);
        Self::new(taps)
    }

    /// Independent complex Gaussian taps whose energy decays by 60 dB over `t60_frames` lags.
    pub fn random(num_bins: usize, num_taps: usize, channels: usize, t60_frames: f64, seed: u64) -> Result<Self> {
        let mut taps = Array3::zeros((num_bins, num_taps, channels));
        for f in 0..num_bins {
            let mut rng = rng_for(seed, f as u64);
            for l in 0..num_taps {
                let gain = decay_gain(l, t60_frames);
                for m in 0..channels {
                    taps[[f, l, m]] = complex_normal(&mut rng) * gain;
                }
            }
        }
        Self::new(taps)
    }

    /// Like [`CtfModel::random`], but the taps below `tau` share one direction
    /// per bin (`a_l = g_l v`), so the desired component is exactly `v` times a
    /// filtered source and has a well-defined RTF.
    pub fn reverberant(
        num_bins: usize,
        num_taps: usize,
        channels: usize,
        tau: usize,
        t60_frames: f64,
        seed: u64,
    ) -> Result<Self> {
        if tau > num_taps {
            return Err(Error::InvalidConfig(format!("tau = {tau} exceeds the {num_taps} CTF taps")));
        }
        let mut taps = Array3::zeros((num_bins, num_taps, channels));
        for f in 0..num_bins {
            let mut rng = rng_for(seed, f as u64);
            let v: Vec<Complex64> = (0..channels).map(|_| complex_normal(&mut rng)).collect();
            for l in 0..num_taps {
                let gain = decay_gain(l, t60_frames);
                if l < tau {
                    let g = if l == 0 { Complex64::new(1.0, 0.0) } else { complex_normal(&mut rng) };
                    for m in 0..channels {
                        taps[[f, l, m]] = v[m] * g * gain;
                    }
                } else {
                    for m in 0..channels {
                        taps[[f, l, m]] = complex_normal(&mut rng) * gain;
                    }
                }
            }
        }
        Self::new(taps)
    }

    pub fn taps(&self) -> &Array3<Complex64> {
        &self.taps
    }

    pub fn num_bins(&self) -> usize {
        self.taps.dim().0
    }

    pub fn num_taps(&self) -> usize {
        self.taps.dim().1
    }

    pub fn channels(&self) -> usize {
        self.taps.dim().2
    }

    /// RTF of the direct-path tap `a_0` of bin `f`.
    pub fn direct_rtf(&self, f: usize, ref_mic: usize) -> Result<RtfVector> {
        RtfVector::from_steering(self.taps.slice(s![f, 0, ..]).to_owned(), ref_mic)
    }
}

fn decay_gain(lag: usize, t60_frames: f64) -> f64 {
    if t60_frames.is_finite() && t60_frames > 0.0 {
        // amplitude: 60 dB energy decay over t60_frames
        10f64.powf(-3.0 * lag as f64 / t60_frames)
    } else {
        1.0
    }
}

/// Ground-truth decomposition of a synthetic mixture.
#[derive(Debug, Clone)]
pub struct SceneComponents {
    pub desired: SpectralFrames,
    pub late: SpectralFrames,
    pub noise: SpectralFrames,
    /// Source coefficients, `[frequency, frame]`.
    pub clean: Array2<Complex64>,
}

/// Convolves `source` (`[frequency, frame]`) with the CTF and adds white
/// complex Gaussian noise whose power is `noise_level` times the mean power of
/// the reverberant speech.
pub fn synth_ctf_scene(
    source: ArrayView2<'_, Complex64>,
    ctf: &CtfModel,
    tau: usize,
    noise_level: f64,
    seed: u64,
) -> Result<(SpectralFrames, SceneComponents)> {
    let (num_bins, num_frames) = source.dim();
    let (la, m) = (ctf.num_taps(), ctf.channels());
    if ctf.num_bins() != num_bins {
        return Err(Error::InvalidInput(format!(
            "source has {num_bins} bins, CTF has {}",
            ctf.num_bins()
        )));
    }
    if tau > la {
        return Err(Error::InvalidConfig(format!("tau = {tau} exceeds the {la} CTF taps")));
    }
    if !(noise_level >= 0.0 && noise_level.is_finite()) {
        return Err(Error::InvalidInput(format!("noise level {noise_level} must be non-negative")));
    }

    let mut desired: Array3<Complex64> = Array3::zeros((num_bins, m, num_frames));
    let mut late: Array3<Complex64> = Array3::zeros((num_bins, m, num_frames));
    let taps = ctf.taps();
    for f in 0..num_bins {
        for l in 0..la {
            let target = if l < tau { &mut desired } else { &mut late };
            for ch in 0..m {
                let a = taps[[f, l, ch]];
                for t in l..num_frames {
                    target[[f, ch, t]] += a * source[[f, t - l]];
                }
            }
        }
    }

    let speech_power = desired
        .iter()
        .zip(late.iter())
        .map(|(d, r)| (d + r).norm_sqr())
        .sum::<f64>()
        / desired.len() as f64;
    let sigma = (noise_level * speech_power).sqrt();
    let mut noise = Array3::zeros((num_bins, m, num_frames));
    if sigma > 0.0 {
        for f in 0..num_bins {
            let mut rng = rng_for(seed, (1 << 32) + f as u64);
            for ch in 0..m {
                for t in 0..num_frames {
                    noise[[f, ch, t]] = complex_normal(&mut rng) * sigma;
                }
            }
        }
    }

    let mixture = &desired + &late + &noise;
    let components = SceneComponents {
        desired: SpectralFrames::new(desired)?,
        late: SpectralFrames::new(late)?,
        noise: SpectralFrames::new(noise)?,
        clean: source.to_owned(),
    };
    Ok((SpectralFrames::new(mixture)?, components))
}

/// Complex Gaussian sequence of length `num_frames` where each frame is
/// independently kept with probability `activity` and zeroed otherwise.
pub fn synth_sparse_source(num_frames: usize, activity: f64, seed: u64) -> Result<Array1<Complex64>> {
    if !(activity > 0.0 && activity <= 1.0) {
        return Err(Error::InvalidInput(format!("activity {activity} outside (0, 1]")));
    }
    let mut rng = rng_for(seed, 0);
    Ok(Array1::from_shape_fn(num_frames, |_| {
        let x = complex_normal(&mut rng);
        let keep: f64 = rng.random();
        if keep < activity {
            x
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Parameters of a complete multi-bin synthetic recording.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneConfig {
    pub num_bins: usize,
    pub num_frames: usize,
    pub channels: usize,
    pub num_taps: usize,
    pub tau: usize,
    pub t60_frames: f64,
    pub activity: f64,
    /// Reverberant-speech to noise ratio in dB; `f64::INFINITY` for no noise.
    pub snr_db: f64,
    /// Source frames forced silent at the start and end, so the recording has noise-only stretches.
    pub silent_head_frames: usize,
    pub silent_tail_frames: usize,
    pub seed: u64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            num_bins: 257,
            num_frames: 500,
            channels: 2,
            num_taps: 12,
            tau: 4,
            t60_frames: 75.0,
            activity: 0.5,
            snr_db: 20.0,
            silent_head_frames: 30,
            silent_tail_frames: 24,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub mixture: SpectralFrames,
    pub components: SceneComponents,
    pub ctf: CtfModel,
}

impl Scene {
    pub fn generate(cfg: &SceneConfig) -> Result<Self> {
        let ctf = CtfModel::reverberant(cfg.num_bins, cfg.num_taps, cfg.channels, cfg.tau, cfg.t60_frames, cfg.seed)?;
        let mut source = Array2::zeros((cfg.num_bins, cfg.num_frames));
        for f in 0..cfg.num_bins {
            let seq = synth_sparse_source(cfg.num_frames, cfg.activity, cfg.seed ^ ((f as u64 + 1) << 20))?;
            source.row_mut(f).assign(&seq);
        }
        let tail_start = cfg.num_frames.saturating_sub(cfg.silent_tail_frames);
        for mut row in source.rows_mut() {
            for t in (0..cfg.silent_head_frames.min(cfg.num_frames)).chain(tail_start..cfg.num_frames) {
                row[t] = Complex64::new(0.0, 0.0);
            }
        }
        let noise_level = 10f64.powf(-cfg.snr_db / 10.0);
        let (mixture, components) = synth_ctf_scene(source.view(), &ctf, cfg.tau, noise_level, cfg.seed)?;
        Ok(Self { mixture, components, ctf })
    }
}

/// Time-domain rendering of a scene.
#[derive(Debug, Clone)]
pub struct RenderedScene {
    /// `channels x samples`
    pub mixture: Array2<f64>,
    /// Desired component at the reference microphone.
    pub desired: Array1<f64>,
}

impl Scene {
    /// Resynthesizes the mixture and the reference-channel desired component.
    pub fn render(&self, cfg: &AnalysisConfig, ref_mic: usize) -> Result<RenderedScene> {
        if ref_mic >= self.mixture.num_channels() {
            return Err(Error::InvalidInput(format!(
                "reference microphone {ref_mic} out of range for {} channels",
                self.mixture.num_channels()
            )));
        }
        let stft = Stft::new(*cfg)?;
        let mixture = stft.synthesize(&self.mixture)?;
        let desired = stft.synthesize(&self.components.desired.channel(ref_mic))?.row(0).to_owned();
        Ok(RenderedScene { mixture, desired })
    }
}
