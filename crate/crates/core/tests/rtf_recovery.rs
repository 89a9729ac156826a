mod common;

use common::*;
use lpwpd::linalg::HermitianCov;
use lpwpd::rtf::{estimate_noise_cov, estimate_rtf, NoiseMask, RtfVector};
use lpwpd::scene::{Scene, SceneConfig};
use lpwpd::stft::AnalysisConfig;
use lpwpd::linalg::sample_cov;
use ndarray::Array2;

fn rank_one_plus(rn: &Array2<C>, phi: f64, v: &ndarray::Array1<C>) -> HermitianCov {
    let m = v.len();
    let ry = Array2::from_shape_fn((m, m), |(i, j)| rn[[i, j]] + v[i] * v[j].conj() * phi);
    HermitianCov::from_matrix(ry).unwrap()
}

#[test]
fn exact_covariances_give_the_true_rtf() {
    let mut r = rng(21);
    for m in [2usize, 3, 4, 8] {
        for _ in 0..10 {
            let rn = random_pd(m, &mut r);
            let v = random_vector(m, &mut r);
            let ry = rank_one_plus(&rn, 2.5, &v);
            for ref_mic in 0..m {
                let truth = RtfVector::from_steering(v.clone(), ref_mic).unwrap();
                let est = estimate_rtf(&ry, &HermitianCov::from_matrix(rn.clone()).unwrap(), ref_mic).unwrap();
                assert_eq!(est.vector()[ref_mic], C::new(1.0, 0.0));
                let err = rel_err(est.vector().view(), truth.vector().view());
                assert!(err <= 1e-8, "M = {m}, ref {ref_mic}: {err}");
            }
        }
    }
}

#[test]
fn joint_scaling_leaves_the_rtf_unchanged() {
    let mut r = rng(22);
    for _ in 0..10 {
        let m = 4;
        let rn = random_pd(m, &mut r);
        let v = random_vector(m, &mut r);
        let ry = rank_one_plus(&rn, 0.7, &v);
        let rn = HermitianCov::from_matrix(rn).unwrap();
        let base = estimate_rtf(&ry, &rn, 0).unwrap();
        for alpha in [1e-6, 0.3, 17.0, 1e5] {
            let scaled = estimate_rtf(&ry.scaled(alpha), &rn.scaled(alpha), 0).unwrap();
            assert!(rel_err(scaled.vector().view(), base.vector().view()) <= 1e-9);
        }
    }
}

/// Frames all of whose samples lie in the head stretch, or all in the tail
/// stretch, checked sample by sample.
fn frames_by_enumeration(cfg: &AnalysisConfig, mask: &NoiseMask, num_frames: usize, signal_len: usize) -> Vec<usize> {
    let head = (mask.head_ms * cfg.fs as f64 / 1000.0).round() as isize;
    let tail = (mask.tail_ms * cfg.fs as f64 / 1000.0).round() as isize;
    let len = signal_len as isize;
    let pad = (cfg.frame_len - cfg.hop) as isize;
    (0..num_frames)
        .filter(|&t| {
            let first = (t * cfg.hop) as isize - pad;
            let mut support = first..first + cfg.frame_len as isize;
            let in_head = support.clone().all(|n| n >= 0 && n < head.min(len));
            let in_tail = support.all(|n| n >= 0 && n < len && n + tail >= len);
            in_head || in_tail
        })
        .collect()
}

#[test]
fn noise_frame_selection_matches_sample_marking() {
    let cfg = AnalysisConfig::default();
    for &(head_ms, tail_ms) in &[(225.0, 75.0), (100.0, 0.0), (0.0, 300.0), (500.0, 500.0)] {
        let mask = NoiseMask { head_ms, tail_ms };
        for num_frames in [60usize, 200, 500] {
            let signal_len = cfg.signal_len(num_frames);
            let want = frames_by_enumeration(&cfg, &mask, num_frames, signal_len);
            let got = mask.select_frames(&cfg, num_frames, signal_len);
            if want.is_empty() {
                assert!(got.is_err());
            } else {
                assert_eq!(got.unwrap(), want, "{head_ms}/{tail_ms} ms, {num_frames} frames");
            }
        }
    }
    // default head: frames 3..=27
    let mask = NoiseMask::default();
    let sel = mask.select_frames(&cfg, 500, cfg.signal_len(500)).unwrap();
    assert_eq!(sel.iter().filter(|&&t| t < 100).count(), 25);
    assert_eq!(sel[0], 3);
}

#[test]
fn sample_covariance_estimate_is_close() {
    let scene = Scene::generate(&SceneConfig {
        num_bins: 40,
        channels: 4,
        num_taps: 1,
        tau: 1,
        ..SceneConfig::default()
    })
    .unwrap();
    let cfg = AnalysisConfig::default();
    let signal_len = cfg.signal_len(scene.mixture.num_frames());
    let mut angles = Vec::new();
    for f in 0..40 {
        let bin = scene.mixture.bin(f);
        let rn = estimate_noise_cov(bin, &NoiseMask::default(), &cfg, signal_len).unwrap();
        let ry = sample_cov(bin, None).unwrap();
        let est = estimate_rtf(&ry, &rn, 0).unwrap();
        let truth = scene.ctf.direct_rtf(f, 0).unwrap();
        angles.push(hermitian_angle_deg(est.vector().view(), truth.vector().view()));
    }
    let mean = angles.iter().sum::<f64>() / angles.len() as f64;
    assert!(mean <= 5.0, "mean angle {mean} deg");
}
