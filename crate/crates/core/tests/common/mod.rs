//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit-variance circular complex Gaussian by Box-Muller.
pub fn cn(rng: &mut impl Rng) -> C {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    let r = (-u1.ln()).sqrt();
    C::from_polar(r, 2.0 * std::f64::consts::PI * u2)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Array2<C> {
    Array2::from_shape_fn((rows, cols), |_| cn(rng))
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> Array1<C> {
    Array1::from_shape_fn(n, |_| cn(rng))
}

/// `A^H A + I`
pub fn random_pd(n: usize, rng: &mut impl Rng) -> Array2<C> {
    let a = random_matrix(n, n, rng);
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut acc = C::new(0.0, 0.0);
            for k in 0..n {
                acc += a[[k, i]].conj() * a[[k, j]];
            }
            out[[i, j]] = acc;
        }
        out[[i, i]] += C::new(1.0, 0.0);
    }
    out
}

pub fn frob(a: &Array2<C>) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm(a: ArrayView1<'_, C>) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn rel_err(a: ArrayView1<'_, C>, b: ArrayView1<'_, C>) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    diff / norm(b)
}

pub fn matvec(a: &Array2<C>, x: ArrayView1<'_, C>) -> Array1<C> {
    Array1::from_shape_fn(a.nrows(), |i| (0..a.ncols()).map(|j| a[[i, j]] * x[j]).sum())
}

/// Gaussian elimination with partial pivoting on a general complex system.
pub fn gauss_solve(a: &Array2<C>, b: ArrayView1<'_, C>) -> Array1<C> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.to_owned();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[[i, col]].norm().total_cmp(&m[[j, col]].norm()))
            .unwrap();
        if pivot != col {
            for k in 0..n {
                m.swap([col, k], [pivot, k]);
            }
            x.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = m[[row, col]] / m[[col, col]];
            for k in col..n {
                let v = m[[col, k]];
                m[[row, k]] -= factor * v;
            }
            let v = x[col];
            x[row] -= factor * v;
        }
    }
    for row in (0..n).rev() {
        let mut acc = x[row];
        for k in row + 1..n {
            acc -= m[[row, k]] * x[k];
        }
        x[row] = acc / m[[row, row]];
    }
    x
}

/// `(1/T) sum_t w_t x_t x_t^H` by explicit loops.
pub fn naive_cov(x: ArrayView2<'_, C>, w: Option<&[f64]>) -> Array2<C> {
    let (d, t) = x.dim();
    let mut out = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            let mut acc = C::new(0.0, 0.0);
            for k in 0..t {
                let wk = w.map_or(1.0, |w| w[k]);
                acc += x[[i, k]] * x[[j, k]].conj() * wk;
            }
            out[[i, j]] = acc / t as f64;
        }
    }
    out
}

/// Minimizer of `h^H R h` subject to `h^H v = 1` from the stationarity system
/// `R h = mu v`, `v^H h = 1`, solved as one bordered linear system.
pub fn lagrangian_mpdr(r: &Array2<C>, v: ArrayView1<'_, C>) -> Array1<C> {
    let d = r.nrows();
    let mut k = Array2::zeros((d + 1, d + 1));
    let mut rhs = Array1::zeros(d + 1);
    for i in 0..d {
        for j in 0..d {
            k[[i, j]] = r[[i, j]];
        }
        k[[i, d]] = -v[i];
        k[[d, i]] = v[i].conj();
    }
    rhs[d] = C::new(1.0, 0.0);
    let sol = gauss_solve(&k, rhs.view());
    sol.slice(ndarray::s![..d]).to_owned()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations on its
/// real symmetric embedding `[[Re, -Im], [Im, Re]]`. Returns eigenvalues in
/// descending order (each appears twice in the embedding; one copy is kept)
/// and the complex eigenvector of the largest one.
pub fn jacobi_principal(a: &Array2<C>) -> (Vec<f64>, Array1<C>) {
    let n = a.nrows();
    let m = 2 * n;
    let mut s = Array2::<f64>::zeros((m, m));
    for i in 0..n {
        for j in 0..n {
            s[[i, j]] = a[[i, j]].re;
            s[[i + n, j + n]] = a[[i, j]].re;
            s[[i, j + n]] = -a[[i, j]].im;
            s[[i + n, j]] = a[[i, j]].im;
        }
    }
    let mut vecs = Array2::<f64>::eye(m);
    for _ in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[[i, j]] * s[[i, j]])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if s[[p, q]].abs() < 1e-300 {
                    continue;
                }
                let theta = (s[[q, q]] - s[[p, p]]) / (2.0 * s[[p, q]]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let skp = s[[k, p]];
                    let skq = s[[k, q]];
                    s[[k, p]] = c * skp - sn * skq;
                    s[[k, q]] = sn * skp + c * skq;
                }
                for k in 0..m {
                    let spk = s[[p, k]];
                    let sqk = s[[q, k]];
                    s[[p, k]] = c * spk - sn * sqk;
                    s[[q, k]] = sn * spk + c * sqk;
                }
                for k in 0..m {
                    let vkp = vecs[[k, p]];
                    let vkq = vecs[[k, q]];
                    vecs[[k, p]] = c * vkp - sn * vkq;
                    vecs[[k, q]] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| s[[j, j]].total_cmp(&s[[i, i]]));
    let values: Vec<f64> = order.iter().step_by(2).map(|&i| s[[i, i]]).collect();
    let top = order[0];
    let vec = Array1::from_shape_fn(n, |i| C::new(vecs[[i, top]], vecs[[i + n, top]]));
    (values, vec)
}

/// `|a^H b| / (|a| |b|)` as an angle in degrees.
pub fn hermitian_angle_deg(a: ArrayView1<'_, C>, b: ArrayView1<'_, C>) -> f64 {
    let inner: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let cos = (inner.norm() / (norm(a) * norm(b))).min(1.0);
    cos.acos().to_degrees()
}

/// `min_phi ||a - e^{i phi} b|| / ||b||`, accurate for nearly parallel vectors.
pub fn phase_aligned_err(a: ArrayView1<'_, C>, b: ArrayView1<'_, C>) -> f64 {
    let inner: C = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { C::new(1.0, 0.0) };
    rel_err(a, b.mapv(|c| c * phase).view())
}

/// One reverberant noisy bin: `(mixture M x T, desired M x T, true RTF at mic 0)`.
pub fn reverberant_bin(
    channels: usize,
    frames: usize,
    noise_level: f64,
    seed: u64,
) -> (Array2<C>, Array2<C>, lpwpd::rtf::RtfVector) {
    use lpwpd::scene::{synth_ctf_scene, synth_sparse_source, CtfModel};
    let ctf = CtfModel::reverberant(1, 12, channels, 4, 75.0, seed).unwrap();
    let source = synth_sparse_source(frames, 0.5, seed.wrapping_add(1)).unwrap().insert_axis(ndarray::Axis(0));
    let (mix, comp) = synth_ctf_scene(source.view(), &ctf, 4, noise_level, seed.wrapping_add(2)).unwrap();
    (mix.bin(0).to_owned(), comp.desired.bin(0).to_owned(), ctf.direct_rtf(0, 0).unwrap())
}
