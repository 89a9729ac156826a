mod common;

use common::*;
use lpwpd::scene::{synth_ctf_scene, synth_sparse_source, CtfModel, Scene, SceneConfig};
use lpwpd::Error;
use ndarray::Array2;

#[test]
fn split_components_sum_to_direct_convolution() {
    let mut r = rng(51);
    let (f, la, m, t) = (5, 8, 3, 60);
    let ctf = CtfModel::random(f, la, m, 20.0, 9).unwrap();
    let source = random_matrix(f, t, &mut r);
    let (mix, comp) = synth_ctf_scene(source.view(), &ctf, 4, 0.0, 1).unwrap();
    for k in 0..f {
        for ch in 0..m {
            for n in 0..t {
                let mut direct = C::new(0.0, 0.0);
                for l in 0..la.min(n + 1) {
                    direct += ctf.taps()[[k, l, ch]] * source[[k, n - l]];
                }
                let got = comp.desired.get(k, n, ch) + comp.late.get(k, n, ch);
                assert!((got - direct).norm() <= 1e-12 * direct.norm().max(1.0));
                let mut early = C::new(0.0, 0.0);
                for l in 0..4.min(n + 1) {
                    early += ctf.taps()[[k, l, ch]] * source[[k, n - l]];
                }
                assert!((comp.desired.get(k, n, ch) - early).norm() <= 1e-12 * early.norm().max(1.0));
                assert_eq!(mix.get(k, n, ch), got);
            }
        }
    }
}

#[test]
fn mixture_is_exactly_additive() {
    let scene = Scene::generate(&SceneConfig { num_bins: 9, num_frames: 120, ..SceneConfig::default() }).unwrap();
    let c = &scene.components;
    let sum = c.desired.data() + c.late.data() + c.noise.data();
    assert_eq!(scene.mixture.data(), &sum);
}

#[test]
fn noise_level_sets_the_power_ratio() {
    let scene = Scene::generate(&SceneConfig { num_bins: 64, num_frames: 400, snr_db: 10.0, ..SceneConfig::default() }).unwrap();
    let c = &scene.components;
    let speech: f64 = (c.desired.data() + c.late.data()).iter().map(|x| x.norm_sqr()).sum();
    let noise: f64 = c.noise.data().iter().map(|x| x.norm_sqr()).sum();
    let ratio_db = 10.0 * (speech / noise).log10();
    assert!((ratio_db - 10.0).abs() < 0.2, "{ratio_db}");
}

#[test]
fn tau_split_boundaries() {
    let mut r = rng(52);
    let ctf = CtfModel::random(2, 4, 2, 10.0, 3).unwrap();
    let source = random_matrix(2, 30, &mut r);
    let (_, comp) = synth_ctf_scene(source.view(), &ctf, 4, 0.0, 0).unwrap();
    assert!(comp.late.data().iter().all(|x| x.norm() == 0.0));
    assert!(matches!(
        synth_ctf_scene(source.view(), &ctf, 5, 0.0, 0),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn single_tap_is_the_multiplicative_model() {
    let mut r = rng(53);
    let v = random_matrix(3, 2, &mut r);
    let ctf = CtfModel::single_tap(v.view()).unwrap();
    let source = random_matrix(3, 40, &mut r);
    let (mix, _) = synth_ctf_scene(source.view(), &ctf, 1, 0.0, 0).unwrap();
    for k in 0..3 {
        for ch in 0..2 {
            for t in 0..40 {
                assert_eq!(mix.get(k, t, ch), v[[k, ch]] * source[[k, t]]);
            }
        }
    }
}

#[test]
fn sparse_source_statistics() {
    let full = synth_sparse_source(1000, 1.0, 4).unwrap();
    assert!(full.iter().all(|x| x.norm() > 0.0));
    for seed in 0..5 {
        let s = synth_sparse_source(1000, 0.5, seed).unwrap();
        let zeros = s.iter().filter(|x| x.norm() == 0.0).count() as f64 / 1000.0;
        assert!((0.45..=0.55).contains(&zeros), "seed {seed}: {zeros}");
    }
    assert_eq!(synth_sparse_source(300, 0.3, 8).unwrap(), synth_sparse_source(300, 0.3, 8).unwrap());
    assert_ne!(synth_sparse_source(300, 0.3, 8).unwrap(), synth_sparse_source(300, 0.3, 9).unwrap());
    assert!(synth_sparse_source(10, 0.0, 1).is_err());
}

#[test]
fn scenes_are_reproducible() {
    let cfg = SceneConfig { num_bins: 17, num_frames: 100, ..SceneConfig::default() };
    let a = Scene::generate(&cfg).unwrap();
    let b = Scene::generate(&cfg).unwrap();
    assert_eq!(a.mixture, b.mixture);
    let c = Scene::generate(&SceneConfig { seed: 1, ..cfg }).unwrap();
    assert_ne!(a.mixture, c.mixture);
    let silent: Array2<C> = a.components.clean.slice(ndarray::s![.., ..cfg.silent_head_frames]).to_owned();
    assert!(silent.iter().all(|x| x.norm() == 0.0));
}
