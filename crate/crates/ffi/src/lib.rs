//! C interface to `lpwpd`.
//!
//! Every call returns an [`LpwpdStatus`]. On failure the message is available
//! from [`lpwpd_last_error_message`] on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lpwpd::metrics::{fwssnr, seg_snr, MetricsConfig};
use lpwpd::pipeline::ProcessingConfig;
use lpwpd::stft::AnalysisConfig;
use lpwpd::{Error, InitMode};
use ndarray::ArrayView2;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpwpdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InvalidConfig = 3,
    SolverFailure = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpwpdInit {
    SingleChannel = 0,
    MultiChannel = 1,
}

/// Processing parameters. `ref_mic` is 0-based; `jobs == 0` uses every core.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LpwpdConfig {
    pub fs: u32,
    pub p: f64,
    pub iterations: usize,
    pub init: LpwpdInit,
    pub tau: usize,
    pub lh: usize,
    pub ref_mic: usize,
    pub noise_head_ms: f64,
    pub noise_tail_ms: f64,
    pub jobs: usize,
}

/// Per-call counts from the last [`lpwpd_enhance`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LpwpdStats {
    pub num_bins: usize,
    pub bins_enhanced: usize,
    pub bins_silent: usize,
    pub bins_failed: usize,
    pub stacked_dim: usize,
}

/// Opaque enhancer handle.
pub struct LpwpdEnhancer {
    config: ProcessingConfig,
    stats: LpwpdStats,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: LpwpdStatus, msg: impl Into<String>) -> LpwpdStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> LpwpdStatus {
    let status = match &e {
        Error::InvalidConfig(_) | Error::ConfigMismatch(_) => LpwpdStatus::InvalidConfig,
        e if e.is_solver_failure() => LpwpdStatus::SolverFailure,
        _ => LpwpdStatus::InvalidInput,
    };
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> LpwpdStatus) -> LpwpdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LpwpdStatus::Internal, "panic inside lpwpd"))
}

impl Default for LpwpdConfig {
    fn default() -> Self {
        let d = ProcessingConfig::default();
        Self {
            fs: d.analysis.fs,
            p: d.beamformer.p,
            iterations: d.beamformer.iterations,
            init: match d.beamformer.init {
                InitMode::SingleChannel => LpwpdInit::SingleChannel,
                InitMode::MultiChannel => LpwpdInit::MultiChannel,
            },
            tau: d.beamformer.tau,
            lh: d.beamformer.lh,
            ref_mic: d.beamformer.ref_mic,
            noise_head_ms: d.mask.head_ms,
            noise_tail_ms: d.mask.tail_ms,
            jobs: d.jobs,
        }
    }
}

impl LpwpdConfig {
    fn to_processing(self) -> Result<ProcessingConfig, Error> {
        let mut cfg = ProcessingConfig {
            analysis: AnalysisConfig { fs: self.fs, ..AnalysisConfig::default() },
            jobs: self.jobs,
            ..ProcessingConfig::default()
        };
        let bf = &mut cfg.beamformer;
        bf.p = self.p;
        bf.iterations = self.iterations;
        bf.init = match self.init {
            LpwpdInit::SingleChannel => InitMode::SingleChannel,
            LpwpdInit::MultiChannel => InitMode::MultiChannel,
        };
        bf.tau = self.tau;
        bf.lh = self.lh;
        bf.ref_mic = self.ref_mic;
        cfg.mask.head_ms = self.noise_head_ms;
        cfg.mask.tail_ms = self.noise_tail_ms;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn lpwpd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lpwpd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Fills `out` with the default parameters.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `LpwpdConfig`.
#[no_mangle]
pub unsafe extern "C" fn lpwpd_config_default(out: *mut LpwpdConfig) -> LpwpdStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LpwpdStatus::NullPointer, "out is NULL");
        }
        out.write(LpwpdConfig::default());
        LpwpdStatus::Ok
    })
}

/// Creates an enhancer. Release it with [`lpwpd_enhancer_free`].
///
/// # Safety
/// `config` must be NULL or point to a valid `LpwpdConfig`; `out` must be NULL
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn lpwpd_enhancer_new(config: *const LpwpdConfig, out: *mut *mut LpwpdEnhancer) -> LpwpdStatus {
    guarded(|| {
        if config.is_null() || out.is_null() {
            return fail(LpwpdStatus::NullPointer, "config or out is NULL");
        }
        match (*config).to_processing() {
            Ok(config) => {
                out.write(Box::into_raw(Box::new(LpwpdEnhancer { config, stats: LpwpdStats::default() })));
                LpwpdStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `handle` must be NULL or come from [`lpwpd_enhancer_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lpwpd_enhancer_free(handle: *mut LpwpdEnhancer) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Enhances `num_samples` frames of `channels`-channel interleaved audio and
/// writes `num_samples` samples of the reference channel to `out`.
///
/// # Safety
/// `input` must hold `num_samples * channels` doubles and `out` must have room
/// for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lpwpd_enhance(
    handle: *mut LpwpdEnhancer,
    input: *const f64,
    num_samples: usize,
    channels: usize,
    out: *mut f64,
    out_len: usize,
) -> LpwpdStatus {
    guarded(|| {
        if handle.is_null() || input.is_null() || out.is_null() {
            return fail(LpwpdStatus::NullPointer, "handle, input or out is NULL");
        }
        if out_len < num_samples {
            return fail(LpwpdStatus::BufferTooSmall, format!("out holds {out_len} samples, need {num_samples}"));
        }
        let Some(total) = num_samples.checked_mul(channels) else {
            return fail(LpwpdStatus::InvalidInput, "num_samples * channels overflows");
        };
        let enhancer = &mut *handle;
        let data = std::slice::from_raw_parts(input, total);
        let interleaved = match ArrayView2::from_shape((num_samples, channels), data) {
            Ok(v) => v,
            Err(e) => return fail(LpwpdStatus::InvalidInput, e.to_string()),
        };
        let audio = interleaved.t();
        match lpwpd::enhance_audio(audio, None, &enhancer.config) {
            Ok((enhanced, record)) => {
                let dst = std::slice::from_raw_parts_mut(out, num_samples);
                for (d, s) in dst.iter_mut().zip(enhanced.iter()) {
                    *d = *s;
                }
                enhancer.stats = LpwpdStats {
                    num_bins: record.num_bins,
                    bins_enhanced: record.bins_enhanced,
                    bins_silent: record.bins_silent,
                    bins_failed: record.bins_failed,
                    stacked_dim: record.stacked_dim,
                };
                if record.all_bins_failed() {
                    return fail(LpwpdStatus::SolverFailure, "the solver failed on every bin with energy");
                }
                LpwpdStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Counts from the last successful [`lpwpd_enhance`] on `handle`.
///
/// # Safety
/// `handle` must be a live enhancer and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpwpd_enhancer_stats(handle: *const LpwpdEnhancer, out: *mut LpwpdStats) -> LpwpdStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(LpwpdStatus::NullPointer, "handle or out is NULL");
        }
        out.write((*handle).stats);
        LpwpdStatus::Ok
    })
}

unsafe fn score(
    metric: fn(&[f64], &[f64], &MetricsConfig) -> lpwpd::Result<f64>,
    reference: *const f64,
    test: *const f64,
    len: usize,
    fs: u32,
    out: *mut f64,
) -> LpwpdStatus {
    guarded(|| {
        if reference.is_null() || test.is_null() || out.is_null() {
            return fail(LpwpdStatus::NullPointer, "reference, test or out is NULL");
        }
        let r = std::slice::from_raw_parts(reference, len);
        let t = std::slice::from_raw_parts(test, len);
        match metric(r, t, &MetricsConfig::for_sample_rate(fs)) {
            Ok(v) => {
                out.write(v);
                LpwpdStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Frequency-weighted segmental SNR in dB of `test` against `reference`, both `len` samples.
///
/// # Safety
/// Both inputs must hold `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpwpd_fwssnr(reference: *const f64, test: *const f64, len: usize, fs: u32, out: *mut f64) -> LpwpdStatus {
    score(fwssnr, reference, test, len, fs, out)
}

/// Segmental SNR in dB.
///
/// # Safety
/// As for [`lpwpd_fwssnr`].
#[no_mangle]
pub unsafe extern "C" fn lpwpd_seg_snr(reference: *const f64, test: *const f64, len: usize, fs: u32, out: *mut f64) -> LpwpdStatus {
    score(seg_snr, reference, test, len, fs, out)
}
