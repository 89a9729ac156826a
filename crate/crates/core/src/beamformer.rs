//! Convolutional WPD beamformer with an lp-norm cost, optimized by
//! iteratively reweighted least squares.
//!
//! Each frequency bin is processed on its own. The current frame and the
//! frames `tau..=lh-1` in the past are stacked into one vector `y_bar_t`; the
//! filter `h_bar` minimizes the weighted output power
//! `sum_t w_t |h_bar^H y_bar_t|^2` subject to `h_bar^H v_bar = 1`, where
//! `v_bar` is the RTF padded with zeros over the history taps. Weights are
//! then refreshed from the new output as `w_t = 1 / |z_t|^(2 - p)`.
//!
//! `p = 0` is the conventional time-varying Gaussian WPD: the weights are the
//! inverse per-frame variances `1 / |z_t|^2`.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sample_cov, solve_hpd};
use crate::rtf::RtfVector;

const MIN_CONSTRAINT_GAIN: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitMode {
    /// Weights from the reference microphone.
    #[serde(rename = "sc")]
    SingleChannel,
    /// Weights from the norm over all microphones.
    #[serde(rename = "mc")]
    MultiChannel,
}

impl InitMode {
    pub fn label(self) -> &'static str {
        match self {
            InitMode::SingleChannel => "sc",
            InitMode::MultiChannel => "mc",
        }
    }
}

impl std::str::FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sc" | "single" | "single_channel" => Ok(InitMode::SingleChannel),
            "mc" | "multi" | "multi_channel" => Ok(InitMode::MultiChannel),
            other => Err(Error::InvalidConfig(format!("unknown init mode '{other}' (expected sc or mc)"))),
        }
    }
}

impl std::fmt::Display for InitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamformerConfig {
    /// Prediction delay in frames.
    pub tau: usize,
    /// Filter span in frames, including the current one.
    pub lh: usize,
    /// Shape parameter in `[0, 2]`; `0` selects the conventional WPD.
    pub p: f64,
    pub iterations: usize,
    pub init: InitMode,
    /// Reference microphone, 0-based.
    pub ref_mic: usize,
    /// Magnitude floor relative to the RMS of the reference channel in the bin.
    pub weight_floor: f64,
    /// Relative diagonal loading for the filter solve; `None` picks it from the frame count.
    pub loading: Option<f64>,
}

impl Default for BeamformerConfig {
    fn default() -> Self {
        Self {
            tau: 4,
            lh: 12,
            p: 0.5,
            iterations: 10,
            init: InitMode::MultiChannel,
            ref_mic: 0,
            weight_floor: 1e-8,
            loading: None,
        }
    }
}

impl BeamformerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tau < 1 || self.tau > self.lh {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= tau <= lh, got tau = {} and lh = {}",
                self.tau, self.lh
            )));
        }
        if !(0.0..=2.0).contains(&self.p) {
            return Err(Error::InvalidConfig(format!("shape parameter p = {} outside [0, 2]", self.p)));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidConfig("at least one iteration is required".into()));
        }
        if !(self.weight_floor > 0.0 && self.weight_floor.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "weight floor {} must be positive",
                self.weight_floor
            )));
        }
        if let Some(l) = self.loading {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::InvalidConfig(format!("loading {l} must be non-negative")));
            }
        }
        Ok(())
    }

    /// `M * (lh - tau + 1)`
    pub fn stacked_dim(&self, channels: usize) -> usize {
        channels * (self.lh - self.tau + 1)
    }

    /// Exponent of the weight update, `2 - p`.
    pub fn weight_exponent(&self) -> f64 {
        2.0 - self.p
    }
}

/// Delay-gapped stacked observations, `D x T`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedFrames {
    data: Array2<Complex64>,
    channels: usize,
}

impl StackedFrames {
    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn num_frames(&self) -> usize {
        self.data.ncols()
    }

    pub fn channels(&self) -> usize {
        self.channels
    }
}

/// Stacks `[y_t, y_{t-tau}, ..., y_{t-lh+1}]` for every frame of the `M x T` bin.
/// Frames before the start of the signal are zero.
pub fn stack(bin: ArrayView2<'_, Complex64>, tau: usize, lh: usize) -> Result<StackedFrames> {
    if tau < 1 || tau > lh {
        return Err(Error::InvalidConfig(format!(
            "need 1 <= tau <= lh, got tau = {tau} and lh = {lh}"
        )));
    }
    let (m, t_len) = bin.dim();
    let blocks = lh - tau + 1;
    let mut data = Array2::zeros((m * blocks, t_len));
    for block in 0..blocks {
        let lag = if block == 0 { 0 } else { tau + block - 1 };
        for ch in 0..m {
            let src = bin.row(ch);
            let mut dst = data.row_mut(block * m + ch);
            for t in lag..t_len {
                dst[t] = src[t - lag];
            }
        }
    }
    Ok(StackedFrames { data, channels: m })
}

/// The RTF followed by `M * (lh - tau)` zeros.
pub fn pad_constraint(rtf: &RtfVector, tau: usize, lh: usize) -> Array1<Complex64> {
    let m = rtf.len();
    let mut v = Array1::zeros(m * (lh - tau + 1));
    v.slice_mut(ndarray::s![..m]).assign(rtf.vector());
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvFilter {
    pub h_bar: Array1<Complex64>,
    pub v_bar: Array1<Complex64>,
}

impl ConvFilter {
    /// `|h_bar^H v_bar - 1|`
    pub fn constraint_residual(&self) -> f64 {
        (dot_h(self.h_bar.view(), self.v_bar.view()) - 1.0).norm()
    }

    /// `z_t = h_bar^H y_bar_t`
    pub fn apply(&self, ybar: &StackedFrames) -> Array1<Complex64> {
        let h = &self.h_bar;
        let data = ybar.data();
        let mut z = Array1::zeros(ybar.num_frames());
        for (d, row) in data.rows().into_iter().enumerate() {
            let hc = h[d].conj();
            if hc == Complex64::new(0.0, 0.0) {
                continue;
            }
            z.iter_mut().zip(row.iter()).for_each(|(acc, y)| *acc += hc * y);
        }
        z
    }
}

fn dot_h(a: ArrayView1<'_, Complex64>, b: ArrayView1<'_, Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Per-frame positive weights of the weighted least-squares subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerWeights(Array1<f64>);

impl PowerWeights {
    pub fn new(w: Array1<f64>) -> Result<Self> {
        if let Some((index, &value)) = w.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(Self(w))
    }

    /// Weights `1 / lambda_t` from per-frame variances.
    pub fn from_variances(lambda: &[f64]) -> Result<Self> {
        Self::new(lambda.iter().map(|l| 1.0 / l).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice().expect("contiguous")
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Absolute magnitude floor for a bin: `rel` times the RMS magnitude of the reference channel.
pub fn magnitude_floor(bin: ArrayView2<'_, Complex64>, ref_mic: usize, rel: f64) -> Result<f64> {
    if ref_mic >= bin.nrows() {
        return Err(Error::InvalidConfig(format!(
            "reference microphone {ref_mic} out of range for {} channels",
            bin.nrows()
        )));
    }
    let row = bin.row(ref_mic);
    let rms = (row.iter().map(|c| c.norm_sqr()).sum::<f64>() / row.len().max(1) as f64).sqrt();
    let floor = rel * rms;
    if floor > 0.0 && floor.is_finite() {
        Ok(floor)
    } else {
        Err(Error::SilentBin)
    }
}

/// `x^e`, exact for the integer exponents of the `p = 0, 1, 2` cases.
fn pow(x: f64, e: f64) -> f64 {
    match e {
        0.0 => 1.0,
        1.0 => x,
        2.0 => x * x,
        _ => x.powf(e),
    }
}

/// Initial weights from the observations: reference magnitude (single-channel) or
/// channel-norm with `M` scaling (multi-channel).
pub fn init_weights(bin: ArrayView2<'_, Complex64>, cfg: &BeamformerConfig, floor: f64) -> PowerWeights {
    let exp = cfg.weight_exponent();
    let m = bin.nrows() as f64;
    let w = match cfg.init {
        InitMode::SingleChannel => bin.row(cfg.ref_mic).mapv(|y| 1.0 / pow(y.norm().max(floor), exp)),
        InitMode::MultiChannel => Array1::from_shape_fn(bin.ncols(), |t| {
            let norm = bin.column(t).iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
            m / pow(norm.max(floor), exp)
        }),
    };
    PowerWeights(w)
}

/// `w_t = 1 / max(|z_t|, floor)^(2 - p)`
pub fn update_weights(z: ArrayView1<'_, Complex64>, cfg: &BeamformerConfig, floor: f64) -> PowerWeights {
    let exp = cfg.weight_exponent();
    PowerWeights(z.mapv(|x| 1.0 / pow(x.norm().max(floor), exp)))
}

/// Floored lp cost `mean_t max(|z_t|, floor)^p`; for `p = 0` the log-variance
/// `mean_t ln max(|z_t|, floor)^2`, which the conventional iteration decreases.
pub fn lp_cost(z: ArrayView1<'_, Complex64>, p: f64, floor: f64) -> f64 {
    let n = z.len().max(1) as f64;
    if p == 0.0 {
        z.iter().map(|x| 2.0 * x.norm().max(floor).ln()).sum::<f64>() / n
    } else {
        z.iter().map(|x| x.norm().max(floor).powf(p)).sum::<f64>() / n
    }
}

/// Minimizes `h^H R h` subject to `h^H v_bar = 1` with `R = (1/T) Y_bar W Y_bar^H`.
pub fn wpd_solve(
    ybar: &StackedFrames,
    weights: &PowerWeights,
    v_bar: ArrayView1<'_, Complex64>,
    loading: f64,
) -> Result<ConvFilter> {
    if v_bar.len() != ybar.dim() {
        return Err(Error::InvalidInput(format!(
            "constraint vector has length {}, stacked dimension is {}",
            v_bar.len(),
            ybar.dim()
        )));
    }
    if v_bar.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::DegenerateConstraint(0.0));
    }
    let r = sample_cov(ybar.data().view(), Some(weights.as_slice()))?;
    let x = solve_hpd(&r, v_bar, loading)?;
    let gain = dot_h(v_bar, x.view());
    if gain.norm().is_nan() || gain.norm() < MIN_CONSTRAINT_GAIN || !gain.re.is_finite() {
        return Err(Error::DegenerateConstraint(gain.norm()));
    }
    Ok(ConvFilter {
        h_bar: x.mapv(|c| c / gain),
        v_bar: v_bar.to_owned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationDiagnostics {
    pub lp_cost: f64,
    pub constraint_residual: f64,
}

#[derive(Debug, Clone)]
pub struct IterationState {
    pub filter: ConvFilter,
    pub z: Array1<Complex64>,
    pub diagnostics: IterationDiagnostics,
}

#[derive(Debug, Clone)]
pub struct WpdRun {
    /// One entry per iteration; the last one is the result.
    pub history: Vec<IterationState>,
    pub floor: f64,
    pub stacked_dim: usize,
}

impl WpdRun {
    pub fn final_state(&self) -> &IterationState {
        self.history.last().expect("at least one iteration")
    }

    pub fn z(&self) -> &Array1<Complex64> {
        &self.final_state().z
    }

    pub fn filter(&self) -> &ConvFilter {
        &self.final_state().filter
    }

    pub fn diagnostics(&self) -> Vec<IterationDiagnostics> {
        self.history.iter().map(|s| s.diagnostics).collect()
    }
}

struct Prepared {
    ybar: StackedFrames,
    v_bar: Array1<Complex64>,
    floor: f64,
    loading: f64,
}

fn prepare(bin: ArrayView2<'_, Complex64>, rtf: &RtfVector, cfg: &BeamformerConfig) -> Result<Prepared> {
    cfg.validate()?;
    let m = bin.nrows();
    if rtf.len() != m {
        return Err(Error::InvalidInput(format!("RTF has {} entries for {m} channels", rtf.len())));
    }
    if rtf.ref_mic() != cfg.ref_mic {
        return Err(Error::InvalidConfig(format!(
            "RTF is normalized to microphone {}, configuration uses {}",
            rtf.ref_mic(),
            cfg.ref_mic
        )));
    }
    let floor = magnitude_floor(bin, cfg.ref_mic, cfg.weight_floor)?;
    let ybar = stack(bin, cfg.tau, cfg.lh)?;
    let d = ybar.dim();
    if ybar.num_frames() <= d {
        log::warn!(
            "{} frames for a stacked dimension of {d}; the weighted covariance is rank deficient",
            ybar.num_frames()
        );
    }
    let loading = cfg
        .loading
        .unwrap_or_else(|| linalg::default_loading(ybar.num_frames(), d));
    Ok(Prepared {
        v_bar: pad_constraint(rtf, cfg.tau, cfg.lh),
        ybar,
        floor,
        loading,
    })
}

fn iterate(
    prep: &Prepared,
    cfg: &BeamformerConfig,
    mut weights: PowerWeights,
    mut next_weights: impl FnMut(ArrayView1<'_, Complex64>) -> Result<PowerWeights>,
) -> Result<WpdRun> {
    let mut history = Vec::with_capacity(cfg.iterations);
    for i in 0..cfg.iterations {
        let filter = wpd_solve(&prep.ybar, &weights, prep.v_bar.view(), prep.loading)?;
        let z = filter.apply(&prep.ybar);
        let diagnostics = IterationDiagnostics {
            lp_cost: lp_cost(z.view(), cfg.p, prep.floor),
            constraint_residual: filter.constraint_residual(),
        };
        if i + 1 < cfg.iterations {
            weights = next_weights(z.view())?;
        }
        history.push(IterationState { filter, z, diagnostics });
    }
    Ok(WpdRun {
        history,
        floor: prep.floor,
        stacked_dim: prep.ybar.dim(),
    })
}

/// IRLS optimization of the lp-norm WPD filter for one bin (`M x T`).
///
/// Iteration 1 solves with the initial weights; every following iteration
/// reweights from the previous output.
pub fn run_lp_wpd(bin: ArrayView2<'_, Complex64>, rtf: &RtfVector, cfg: &BeamformerConfig) -> Result<WpdRun> {
    let prep = prepare(bin, rtf, cfg)?;
    let weights = init_weights(bin, cfg, prep.floor);
    iterate(&prep, cfg, weights, |z| Ok(update_weights(z, cfg, prep.floor)))
}

/// The conventional WPD written with per-frame variances: `lambda_t = |z_t|^2`
/// and covariance `(1/T) Y_bar Lambda^-1 Y_bar^H`. Ignores `cfg.p`.
pub fn run_conventional_wpd(
    bin: ArrayView2<'_, Complex64>,
    rtf: &RtfVector,
    cfg: &BeamformerConfig,
) -> Result<WpdRun> {
    let cfg = BeamformerConfig { p: 0.0, ..*cfg };
    let prep = prepare(bin, rtf, &cfg)?;
    let floor = prep.floor;
    let m = bin.nrows() as f64;
    let lambda: Vec<f64> = match cfg.init {
        InitMode::SingleChannel => bin.row(cfg.ref_mic).iter().map(|y| y.norm().max(floor).powi(2)).collect(),
        InitMode::MultiChannel => bin
            .columns()
            .into_iter()
            .map(|col| {
                let norm = col.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
                norm.max(floor).powi(2) / m
            })
            .collect(),
    };
    let weights = PowerWeights::from_variances(&lambda)?;
    iterate(&prep, &cfg, weights, |z| {
        let lambda: Vec<f64> = z.iter().map(|x| x.norm().max(floor).powi(2)).collect();
        PowerWeights::from_variances(&lambda)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn stacked_dimension_for_table_defaults() {
        let cfg = BeamformerConfig::default();
        assert_eq!(cfg.stacked_dim(2), 18);
        assert_eq!(cfg.stacked_dim(8), 72);
        let bin = Array2::<Complex64>::zeros((2, 40));
        assert_eq!(stack(bin.view(), 4, 12).unwrap().dim(), 18);
    }

    #[test]
    fn degenerate_stacking_is_identity() {
        let bin = Array2::from_shape_fn((3, 7), |(m, t)| c(m as f64, t as f64));
        let s = stack(bin.view(), 1, 1).unwrap();
        assert_eq!(s.data(), &bin);
    }

    #[test]
    fn stack_index_arithmetic() {
        let bin = Array2::from_shape_fn((1, 5), |(_, t)| c((t + 1) as f64, 0.0));
        let s = stack(bin.view(), 2, 4).unwrap();
        assert_eq!(s.dim(), 3);
        let last: Vec<f64> = s.data().column(4).iter().map(|z| z.re).collect();
        assert_eq!(last, vec![5.0, 3.0, 2.0]);
        // cold start: frame 1 has no history
        let first: Vec<f64> = s.data().column(0).iter().map(|z| z.re).collect();
        assert_eq!(first, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn stack_rejects_tau_above_lh() {
        let bin = Array2::<Complex64>::zeros((2, 10));
        assert!(matches!(stack(bin.view(), 5, 4), Err(Error::InvalidConfig(_))));
        assert!(stack(bin.view(), 0, 4).is_err());
    }

    #[test]
    fn unit_magnitude_gives_unit_weights() {
        let bin = Array2::from_shape_fn((2, 6), |(_, t)| Complex64::from_polar(1.0, t as f64));
        for p in [0.0, 0.5, 1.0, 2.0] {
            let cfg = BeamformerConfig { p, init: InitMode::SingleChannel, ..Default::default() };
            let w = init_weights(bin.view(), &cfg, 1e-8);
            assert!(w.values().iter().all(|v| (*v - 1.0).abs() < 1e-15));
            let z = bin.row(0);
            let w = update_weights(z, &cfg, 1e-8);
            assert!(w.values().iter().all(|v| (*v - 1.0).abs() < 1e-15));
        }
    }

    #[test]
    fn quadratic_case_has_constant_weights() {
        let bin = array![[c(3.0, 1.0), c(0.1, 0.0)], [c(-2.0, 0.0), c(5.0, 5.0)]];
        let sc = BeamformerConfig { p: 2.0, init: InitMode::SingleChannel, ..Default::default() };
        let mc = BeamformerConfig { p: 2.0, init: InitMode::MultiChannel, ..Default::default() };
        assert!(init_weights(bin.view(), &sc, 1e-8).values().iter().all(|v| *v == 1.0));
        assert!(init_weights(bin.view(), &mc, 1e-8).values().iter().all(|v| *v == 2.0));
        assert!(update_weights(bin.row(1), &sc, 1e-8).values().iter().all(|v| *v == 1.0));
    }

    #[test]
    fn multichannel_init_hand_value() {
        let bin = array![[c(3.0, 0.0)], [c(4.0, 0.0)]];
        let cfg = BeamformerConfig { p: 0.0, init: InitMode::MultiChannel, ..Default::default() };
        let w = init_weights(bin.view(), &cfg, 1e-8);
        assert!((w.values()[0] - 2.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn update_hand_value() {
        let cfg = BeamformerConfig { p: 0.5, ..Default::default() };
        let w = update_weights(array![c(4.0, 0.0), c(0.0, -4.0)].view(), &cfg, 1e-8);
        assert!((w.values()[0] - 0.125).abs() < 1e-15);
        assert!((w.values()[1] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn floored_weights_are_bounded() {
        let floor = 1e-3;
        for p in [0.0, 0.5, 1.0, 1.5, 2.0] {
            let cfg = BeamformerConfig { p, ..Default::default() };
            let z = array![c(0.0, 0.0), c(1e-9, 0.0), c(2.0, 1.0)];
            let w = update_weights(z.view(), &cfg, floor);
            let bound = floor.powf(-(2.0 - p));
            assert!(w.values().iter().all(|v| *v > 0.0 && *v <= bound * (1.0 + 1e-12)));
        }
    }

    #[test]
    fn identity_covariance_gives_matched_filter() {
        // columns of sqrt(T) * I make R = I exactly
        let d = 4;
        let t = 4;
        let data = Array2::from_shape_fn((d, t), |(i, j)| if i == j { c(2.0, 0.0) } else { c(0.0, 0.0) });
        let ybar = StackedFrames { data, channels: 1 };
        let w = PowerWeights::new(Array1::ones(t)).unwrap();

        let e1 = array![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let f = wpd_solve(&ybar, &w, e1.view(), 0.0).unwrap();
        assert!(f.h_bar.iter().zip(e1.iter()).all(|(a, b)| (a - b).norm() < 1e-14));

        let v = array![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1.0), c(3.0, -1.0)];
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let f = wpd_solve(&ybar, &w, v.view(), 0.0).unwrap();
        for (h, vi) in f.h_bar.iter().zip(v.iter()) {
            assert!((h - vi / vv).norm() < 1e-14);
        }
        assert!(f.constraint_residual() < 1e-14);
    }

    #[test]
    fn zero_constraint_is_degenerate() {
        let ybar = stack(Array2::from_elem((2, 10), c(1.0, 0.0)).view(), 1, 1).unwrap();
        let w = PowerWeights::new(Array1::ones(10)).unwrap();
        let v = Array1::zeros(2);
        assert!(matches!(
            wpd_solve(&ybar, &w, v.view(), 1e-10),
            Err(Error::DegenerateConstraint(_))
        ));
    }

    #[test]
    fn silent_bin_is_reported() {
        let bin = Array2::<Complex64>::zeros((2, 50));
        let rtf = RtfVector::from_steering(array![c(1.0, 0.0), c(1.0, 0.0)], 0).unwrap();
        assert!(matches!(
            run_lp_wpd(bin.view(), &rtf, &BeamformerConfig::default()),
            Err(Error::SilentBin)
        ));
    }

    #[test]
    fn config_validation() {
        assert!(BeamformerConfig::default().validate().is_ok());
        let bad = [
            BeamformerConfig { tau: 0, ..Default::default() },
            BeamformerConfig { tau: 13, ..Default::default() },
            BeamformerConfig { p: 2.5, ..Default::default() },
            BeamformerConfig { p: -0.1, ..Default::default() },
            BeamformerConfig { iterations: 0, ..Default::default() },
            BeamformerConfig { weight_floor: 0.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn rtf_reference_must_match_config() {
        let bin = Array2::from_elem((2, 40), c(1.0, 0.5));
        let rtf = RtfVector::from_steering(array![c(1.0, 0.0), c(1.0, 0.0)], 1).unwrap();
        assert!(matches!(
            run_lp_wpd(bin.view(), &rtf, &BeamformerConfig::default()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn init_mode_parsing() {
        assert_eq!("SC".parse::<InitMode>().unwrap(), InitMode::SingleChannel);
        assert_eq!("mc".parse::<InitMode>().unwrap(), InitMode::MultiChannel);
        assert!("xx".parse::<InitMode>().is_err());
    }
}
