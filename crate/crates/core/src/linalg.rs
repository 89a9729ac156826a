//! Dense complex Hermitian kernels: sample covariances, triangular factors,
//! principal eigenvectors and Hermitian positive-definite solves.
//!
//! Matrices here are small (a few dozen rows at most) and rebuilt often, so
//! everything is a straightforward dense loop over contiguous rows.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative diagonal loading for well-posed solves.
pub const DEFAULT_LOADING: f64 = 1e-10;
/// Relative diagonal loading when a covariance is built from fewer frames than its dimension.
pub const RANK_DEFICIENT_LOADING: f64 = 1e-8;

pub const EIG_TOL: f64 = 1e-10;
pub const EIG_MAX_ITER: usize = 500;

/// Loading to use for a covariance of dimension `dim` estimated from `frames` snapshots.
pub fn default_loading(frames: usize, dim: usize) -> f64 {
    if frames < dim {
        RANK_DEFICIENT_LOADING
    } else {
        DEFAULT_LOADING
    }
}

/// A Hermitian matrix. The lower triangle is always the exact conjugate of the upper
/// one and the diagonal is exactly real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianCov {
    mat: Array2<Complex64>,
}

impl HermitianCov {
    /// Symmetrizes `mat` as `(A + A^H) / 2`.
    pub fn from_matrix(mat: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = mat.dim();
        if rows != cols || rows == 0 {
            return Err(Error::InvalidInput(format!(
                "covariance must be square and non-empty, got {rows}x{cols}"
            )));
        }
        if mat.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("covariance has non-finite entries".into()));
        }
        let mut out = Array2::zeros((rows, rows));
        for i in 0..rows {
            out[[i, i]] = Complex64::new(mat[[i, i]].re, 0.0);
            for j in i + 1..rows {
                let upper = (mat[[i, j]] + mat[[j, i]].conj()) * 0.5;
                out[[i, j]] = upper;
                out[[j, i]] = upper.conj();
            }
        }
        Ok(Self { mat: out })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Array2::eye(dim).mapv(|x: f64| Complex64::new(x, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[[i, i]].re).sum()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            mat: self.mat.mapv(|c| c * alpha),
        }
    }

    pub fn mul_vec(&self, x: ArrayView1<'_, Complex64>) -> Array1<Complex64> {
        self.mat.dot(&x)
    }

    /// `self + a * u u^H`
    pub fn rank_one_update(&self, a: f64, u: ArrayView1<'_, Complex64>) -> Self {
        let n = self.dim();
        let mut mat = self.mat.clone();
        for i in 0..n {
            for j in 0..n {
                mat[[i, j]] += u[i] * u[j].conj() * a;
            }
        }
        Self::from_matrix(mat).expect("finite inputs stay finite")
    }

    fn loaded(&self, loading: f64) -> Array2<Complex64> {
        let n = self.dim();
        let shift = loading * self.trace() / n as f64;
        let mut a = self.mat.clone();
        for i in 0..n {
            a[[i, i]].re += shift;
        }
        a
    }
}

/// `(1/T) * sum_t w_t x_t x_t^H` over the columns of the `D x T` matrix `frames`.
pub fn sample_cov(frames: ArrayView2<'_, Complex64>, weights: Option<&[f64]>) -> Result<HermitianCov> {
    let (dim, num_frames) = frames.dim();
    if dim == 0 || num_frames == 0 {
        return Err(Error::InvalidInput(format!(
            "need at least one frame of a non-empty vector, got {dim}x{num_frames}"
        )));
    }
    let frames = frames.as_standard_layout();
    let weighted = match weights {
        Some(w) => {
            if w.len() != num_frames {
                return Err(Error::InvalidInput(format!(
                    "{} weights for {num_frames} frames",
                    w.len()
                )));
            }
            if let Some((index, &value)) = w
                .iter()
                .enumerate()
                .find(|(_, v)| !(v.is_finite() && **v > 0.0))
            {
                return Err(Error::InvalidWeight { index, value });
            }
            let mut scaled = frames.to_owned();
            for mut row in scaled.rows_mut() {
                row.iter_mut().zip(w).for_each(|(x, wt)| *x *= *wt);
            }
            Some(scaled)
        }
        None => None,
    };
    let lhs = weighted.as_ref().map_or(frames.view(), |s| s.view());

    let inv_t = 1.0 / num_frames as f64;
    let mut mat = Array2::zeros((dim, dim));
    for i in 0..dim {
        let a = lhs.row(i);
        let a = a.as_slice().expect("standard layout");
        for j in i..dim {
            let b = frames.row(j);
            let b = b.as_slice().expect("standard layout");
            let (mut re, mut im) = (0.0, 0.0);
            for (x, y) in a.iter().zip(b) {
                // x * conj(y)
                re += x.re * y.re + x.im * y.im;
                im += x.im * y.re - x.re * y.im;
            }
            let c = Complex64::new(re * inv_t, im * inv_t);
            if i == j {
                mat[[i, i]] = Complex64::new(c.re, 0.0);
            } else {
                mat[[i, j]] = c;
                mat[[j, i]] = c.conj();
            }
        }
    }
    Ok(HermitianCov { mat })
}

/// Lower-triangular `L` with positive real diagonal and `L^H L = A`.
///
/// `L` acts as the matrix square root `A^{1/2}` (and `L^H` as `A^{H/2}`) in
/// whitening: `L^{-H} B L^{-1}` whitens `B` against `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholFactor {
    lower: Array2<Complex64>,
}

impl CholFactor {
    pub fn lower(&self) -> &Array2<Complex64> {
        &self.lower
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// `L^H L`
    pub fn reconstruct(&self) -> Array2<Complex64> {
        let lh = self.lower.t().mapv(|c| c.conj());
        lh.dot(&self.lower)
    }

    /// Solves `L^H y = b` (upper-triangular back substitution).
    pub fn solve_upper(&self, b: ArrayView1<'_, Complex64>) -> Array1<Complex64> {
        let n = self.dim();
        let l = &self.lower;
        let mut y = b.to_owned();
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= l[[j, i]].conj() * y[j];
            }
            y[i] = acc / l[[i, i]].re;
        }
        y
    }

    /// Solves `L y = b` (lower-triangular forward substitution).
    pub fn solve_lower(&self, b: ArrayView1<'_, Complex64>) -> Array1<Complex64> {
        let n = self.dim();
        let l = &self.lower;
        let mut y = b.to_owned();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= l[[i, j]] * y[j];
            }
            y[i] = acc / l[[i, i]].re;
        }
        y
    }

    /// Solves `(L^H L) x = b`.
    pub fn solve(&self, b: ArrayView1<'_, Complex64>) -> Array1<Complex64> {
        let y = self.solve_upper(b);
        self.solve_lower(y.view())
    }

    /// `L^{-H} B L^{-1}`
    pub fn whiten(&self, b: &HermitianCov) -> Result<HermitianCov> {
        let n = self.dim();
        if b.dim() != n {
            return Err(Error::InvalidInput(format!(
                "cannot whiten a {}x{} matrix with a {n}x{n} factor",
                b.dim(),
                b.dim()
            )));
        }
        // X = L^{-H} B, column by column
        let mut x = Array2::zeros((n, n));
        for j in 0..n {
            let col = self.solve_upper(b.matrix().column(j));
            x.column_mut(j).assign(&col);
        }
        // W = X L^{-1}  <=>  W^H = L^{-H} X^H
        let xh = x.t().mapv(|c| c.conj());
        let mut wh = Array2::zeros((n, n));
        for j in 0..n {
            let col = self.solve_upper(xh.column(j));
            wh.column_mut(j).assign(&col);
        }
        HermitianCov::from_matrix(wh.t().mapv(|c| c.conj()))
    }

    /// `L^H v`
    pub fn dewhiten(&self, v: ArrayView1<'_, Complex64>) -> Array1<Complex64> {
        let n = self.dim();
        let l = &self.lower;
        Array1::from_shape_fn(n, |i| (i..n).map(|k| l[[k, i]].conj() * v[k]).sum())
    }
}

/// Factors `cov + loading * (tr(cov)/D) * I` as `L^H L`.
pub fn cholesky(cov: &HermitianCov, loading: f64) -> Result<CholFactor> {
    if !(loading >= 0.0 && loading.is_finite()) {
        return Err(Error::InvalidConfig(format!("diagonal loading {loading} must be non-negative")));
    }
    let a = cov.loaded(loading);
    let n = a.nrows();
    let mut l: Array2<Complex64> = Array2::zeros((n, n));
    // Columns right to left; within a column, rows bottom to top.
    // A_ji = conj(L_jj) L_ji + sum_{k>j} conj(L_kj) L_ki
    for i in (0..n).rev() {
        for j in (i + 1..n).rev() {
            let mut acc = a[[j, i]];
            for k in j + 1..n {
                acc -= l[[k, j]].conj() * l[[k, i]];
            }
            l[[j, i]] = acc / l[[j, j]].re;
        }
        let mut d = a[[i, i]].re;
        for k in i + 1..n {
            d -= l[[k, i]].norm_sqr();
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::NotPositiveDefinite { pivot: i, value: d });
        }
        l[[i, i]] = Complex64::new(d.sqrt(), 0.0);
    }
    Ok(CholFactor { lower: l })
}

/// Solves `(cov + loading * (tr/D) * I) x = rhs`.
pub fn solve_hpd(cov: &HermitianCov, rhs: ArrayView1<'_, Complex64>, loading: f64) -> Result<Array1<Complex64>> {
    if rhs.len() != cov.dim() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has length {}, matrix is {}x{}",
            rhs.len(),
            cov.dim(),
            cov.dim()
        )));
    }
    Ok(cholesky(cov, loading)?.solve(rhs))
}

#[derive(Debug, Clone)]
pub struct PrincipalEigen {
    /// Unit norm; the entry of largest modulus is real and positive.
    pub vector: Array1<Complex64>,
    /// Rayleigh quotient `v^H A v`.
    pub value: f64,
    pub iterations: usize,
}

/// Power iteration from a fixed start vector, stopped when
/// `||A v - rho v|| <= tol * rho`.
pub fn principal_eigvec(cov: &HermitianCov, tol: f64, max_iter: usize) -> Result<PrincipalEigen> {
    let n = cov.dim();
    let a = cov.matrix();
    // e_1 plus a small fixed perturbation so no eigenvector is orthogonal to the start
    let mut v = Array1::from_shape_fn(n, |k| {
        let base = if k == 0 { 1.0 } else { 0.0 };
        base + Complex64::from_polar(1e-3 * (1.0 + 0.37 * k as f64) / n as f64, 0.91 * k as f64)
    });
    normalize(&mut v);

    let mut residual = f64::INFINITY;
    for iter in 1..=max_iter {
        let u = a.dot(&v);
        let rho: f64 = v.iter().zip(u.iter()).map(|(x, y)| (x.conj() * y).re).sum();
        residual = u
            .iter()
            .zip(v.iter())
            .map(|(y, x)| (y - x * rho).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= tol * rho.abs() || residual == 0.0 {
            fix_phase(&mut v);
            return Ok(PrincipalEigen {
                vector: v,
                value: rho,
                iterations: iter,
            });
        }
        v = u;
        normalize(&mut v);
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iter,
        residual,
    })
}

fn normalize(v: &mut Array1<Complex64>) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.mapv_inplace(|c| c / norm);
    }
}

/// Rotate so the entry of largest modulus is real and positive.
fn fix_phase(v: &mut Array1<Complex64>) {
    let (mut best, mut idx) = (-1.0, 0);
    for (i, c) in v.iter().enumerate() {
        if c.norm() > best {
            best = c.norm();
            idx = i;
        }
    }
    if best > 0.0 {
        let rot = v[idx].conj() / best;
        v.mapv_inplace(|c| c * rot);
        v[idx] = Complex64::new(v[idx].norm(), 0.0);
    }
}
