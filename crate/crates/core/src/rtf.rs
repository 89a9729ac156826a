//! Blind relative transfer function estimation by covariance whitening.
//!
//! The noisy covariance is whitened with a square root of the noise
//! covariance, its principal eigenvector is mapped back (de-whitened) and
//! normalized to the reference microphone.

use ndarray::{Array1, ArrayView2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, cholesky, principal_eigvec, sample_cov, HermitianCov};
use crate::stft::AnalysisConfig;

const MIN_REFERENCE_MODULUS: f64 = 1e-12;

/// Relative transfer function of one frequency bin; the `ref_mic` entry is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct RtfVector {
    v_tilde: Array1<Complex64>,
    ref_mic: usize,
}

impl RtfVector {
    /// Normalizes `v` by its `ref_mic` entry.
    pub fn from_steering(v: Array1<Complex64>, ref_mic: usize) -> Result<Self> {
        if ref_mic >= v.len() {
            return Err(Error::InvalidInput(format!(
                "reference microphone {ref_mic} out of range for {} channels",
                v.len()
            )));
        }
        let pivot = v[ref_mic];
        if pivot.norm() < MIN_REFERENCE_MODULUS {
            return Err(Error::DegenerateReference(pivot.norm()));
        }
        let mut v_tilde = v.mapv(|c| c / pivot);
        v_tilde[ref_mic] = Complex64::new(1.0, 0.0);
        if v_tilde.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::DegenerateReference(pivot.norm()));
        }
        Ok(Self { v_tilde, ref_mic })
    }

    pub fn vector(&self) -> &Array1<Complex64> {
        &self.v_tilde
    }

    pub fn ref_mic(&self) -> usize {
        self.ref_mic
    }

    pub fn len(&self) -> usize {
        self.v_tilde.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_tilde.is_empty()
    }
}

/// Leading and trailing stretches of the recording declared noise-only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseMask {
    pub head_ms: f64,
    pub tail_ms: f64,
}

impl Default for NoiseMask {
    fn default() -> Self {
        Self {
            head_ms: 225.0,
            tail_ms: 75.0,
        }
    }
}

impl NoiseMask {
    /// Frames whose full support lies in `[0, head)` or in `[len - tail, len)`,
    /// in ascending order. Head and tail frames are pooled.
    pub fn select_frames(&self, cfg: &AnalysisConfig, num_frames: usize, signal_len: usize) -> Result<Vec<usize>> {
        if !(self.head_ms >= 0.0 && self.tail_ms >= 0.0) {
            return Err(Error::InvalidMask(format!(
                "durations must be non-negative (head {} ms, tail {} ms)",
                self.head_ms, self.tail_ms
            )));
        }
        let to_samples = |ms: f64| (ms * 1e-3 * cfg.fs as f64).round() as isize;
        let head_end = to_samples(self.head_ms).min(signal_len as isize);
        let tail_start = (signal_len as isize - to_samples(self.tail_ms)).max(0);
        let len = cfg.frame_len as isize;
        let selected: Vec<usize> = (0..num_frames)
            .filter(|&t| {
                let start = cfg.frame_start(t);
                let end = start + len;
                let in_head = start >= 0 && end <= head_end;
                let in_tail = start >= tail_start && end <= signal_len as isize;
                in_head || in_tail
            })
            .collect();
        if selected.is_empty() {
            return Err(Error::InvalidMask(format!(
                "no frame of {} samples fits in the first {} ms or last {} ms of a {signal_len}-sample signal",
                cfg.frame_len, self.head_ms, self.tail_ms
            )));
        }
        Ok(selected)
    }
}

/// Sample covariance of the noise-only frames of one bin (`M x T`).
pub fn estimate_noise_cov(
    bin: ArrayView2<'_, Complex64>,
    mask: &NoiseMask,
    cfg: &AnalysisConfig,
    signal_len: usize,
) -> Result<HermitianCov> {
    let frames = mask.select_frames(cfg, bin.ncols(), signal_len)?;
    let selected = bin.select(Axis(1), &frames);
    sample_cov(selected.view(), None)
}

/// Covariance-whitening estimate of the RTF for reference channel `ref_mic` (0-based).
///
/// The noise covariance is factored unloaded when it is positive definite, and
/// with the default relative loading otherwise.
pub fn estimate_rtf(ry: &HermitianCov, rn: &HermitianCov, ref_mic: usize) -> Result<RtfVector> {
    let m = rn.dim();
    if ry.dim() != m {
        return Err(Error::InvalidInput(format!(
            "noisy covariance is {}x{}, noise covariance is {m}x{m}",
            ry.dim(),
            ry.dim()
        )));
    }
    if ref_mic >= m {
        return Err(Error::InvalidInput(format!(
            "reference microphone {ref_mic} out of range for {m} channels"
        )));
    }
    let factor = match cholesky(rn, 0.0) {
        Ok(f) => f,
        Err(Error::NotPositiveDefinite { .. }) => cholesky(rn, linalg::RANK_DEFICIENT_LOADING)?,
        Err(e) => return Err(e),
    };
    let whitened = factor.whiten(ry)?;
    let eig = principal_eigvec(&whitened, linalg::EIG_TOL, linalg::EIG_MAX_ITER)?;
    let v = factor.dewhiten(eig.vector.view());
    RtfVector::from_steering(v, ref_mic)
}
