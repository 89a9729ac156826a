//! Joint dereverberation and noise reduction with a convolutional weighted
//! power minimization distortionless response (WPD) beamformer under an
//! lp-norm sparse prior, optimized by iteratively reweighted least squares.
//!
//! The processing chain per recording is
//! [`stft::analyze`] → per bin {[`rtf::estimate_noise_cov`],
//! [`rtf::estimate_rtf`], [`beamformer::run_lp_wpd`]} → [`stft::synthesize`],
//! driven by [`pipeline::enhance`].

pub mod beamformer;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod rtf;
pub mod scene;
pub mod stft;
pub mod wav;

pub use beamformer::{run_conventional_wpd, run_lp_wpd, BeamformerConfig, ConvFilter, InitMode, WpdRun};
pub use error::{Error, Result};
pub use metrics::{fwssnr, seg_snr, MetricReport, MetricsConfig};
pub use pipeline::{enhance, enhance_audio, sweep, JobConfig, ProcessingConfig, RunRecord, SweepGrid, SweepRow};
pub use rtf::{estimate_rtf, NoiseMask, RtfVector};
pub use stft::{AnalysisConfig, SpectralFrames, Stft};
