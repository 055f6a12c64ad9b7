//! Dense complex matrices and the two Jacobi kernels every spectral
//! operation is built on: a two-sided cyclic Jacobi eigensolver for
//! Hermitian matrices and a one-sided Jacobi SVD.
//!
//! The one-sided SVD matters: it computes small singular values with
//! absolute error on the order of machine epsilon times the largest one,
//! which is what makes a relative rank threshold of `1e-10` meaningful.
//! Forming `z*z` first would square away that accuracy.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) type C64 = Complex64;

/// Stop the Hermitian sweep once the off-diagonal Frobenius mass drops
/// below this fraction of the initial Frobenius norm.
pub(crate) const JACOBI_EIG_TOL: f64 = 1e-13;
/// Column pair is considered orthogonal when |<u,v>| <= tol * |u| |v|.
pub(crate) const JACOBI_SVD_TOL: f64 = 1e-14;
/// Hard sweep cap for both kernels; quadratic convergence makes this
/// unreachable for well-formed input at the supported sizes.
pub(crate) const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Matrix {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_data(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data length must be dim^2");
        Matrix { dim, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix::from_data(self.dim, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix::from_data(self.dim, data)
    }

    pub fn scale(&self, c: C64) -> Matrix {
        Matrix::from_data(self.dim, self.data.iter().map(|a| a * c).collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian part (m + m*)/2.
    pub fn hermitize(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
            }
        }
        out
    }

    /// Rank-one update accumulator: self += c * v v*.
    pub fn add_outer(&mut self, c: f64, v: &[C64]) {
        let n = self.dim;
        assert_eq!(v.len(), n);
        for i in 0..n {
            for j in 0..n {
                let u = self.get(i, j) + v[i] * v[j].conj() * c;
                self.set(i, j, u);
            }
        }
    }
}

fn offdiag_mass(a: &Matrix) -> f64 {
    let n = a.dim;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0, the rotation tangent
/// annihilating the pivot.
fn rotation_tangent(tau: f64) -> f64 {
    if !tau.is_finite() {
        return 0.0;
    }
    if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi.
///
/// Returns the (unsorted) real eigenvalues and a unitary whose columns are
/// the matching eigenvectors. The caller is expected to pass a genuinely
/// Hermitian matrix; entries are symmetrized on entry so the iteration is
/// exact regardless of last-bit noise.
pub(crate) fn jacobi_eig(h: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = h.dim;
    let mut a = h.hermitize();
    let mut v = Matrix::identity(n);
    if n <= 1 {
        let lam = if n == 1 { vec![a.get(0, 0).re] } else { vec![] };
        return Ok((lam, v));
    }

    let scale = a.frobenius();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let stop = JACOBI_EIG_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if offdiag_mass(&a) <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let beta = a.get(p, q);
                let beta_abs = beta.norm();
                if beta_abs == 0.0 {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                let tau = (gamma - alpha) / (2.0 * beta_abs);
                let t = rotation_tangent(tau);
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                // s carries the conjugate phase of the pivot.
                let s = (beta / beta_abs).conj() * sigma;

                // Columns p, q of A and V: A <- A J, V <- V J.
                for i in 0..n {
                    let ap = a.get(i, p);
                    let aq = a.get(i, q);
                    a.set(i, p, ap * c + aq * s);
                    a.set(i, q, ap * (-s.conj()) + aq * c);

                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, vp * c + vq * s);
                    v.set(i, q, vp * (-s.conj()) + vq * c);
                }
                // Rows p, q of A: A <- J* A.
                for j in 0..n {
                    let ap = a.get(p, j);
                    let aq = a.get(q, j);
                    a.set(p, j, ap * c + aq * s.conj());
                    a.set(q, j, ap * (-s) + aq * c);
                }
                // The pivot is annihilated up to rounding; pin it.
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));
            }
        }
    }

    if offdiag_mass(&a) > stop {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }
    let lambda = (0..n).map(|i| a.get(i, i).re).collect();
    Ok((lambda, v))
}

/// One-sided Jacobi SVD of a square complex matrix: z = U diag(sigma) V*.
///
/// `u_cols[i]` is only meaningful where `sigma[i] > 0`; columns of exactly
/// zero norm get a zero placeholder. Output is sorted by descending sigma,
/// ties broken by original column index.
pub(crate) struct Svd {
    pub sigma: Vec<f64>,
    pub u_cols: Vec<Vec<C64>>,
    pub v_cols: Vec<Vec<C64>>,
}

pub(crate) fn jacobi_svd(z: &Matrix) -> Result<Svd> {
    let n = z.dim;
    let mut w = z.clone();
    let mut v = Matrix::identity(n);

    if n > 1 {
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = C64::new(0.0, 0.0);
                    for i in 0..n {
                        let wp = w.get(i, p);
                        let wq = w.get(i, q);
                        app += wp.norm_sqr();
                        aqq += wq.norm_sqr();
                        apq += wp.conj() * wq;
                    }
                    let g = apq.norm();
                    if g <= JACOBI_SVD_TOL * (app * aqq).sqrt() || g == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let tau = (aqq - app) / (2.0 * g);
                    let t = rotation_tangent(tau);
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let sigma = t * c;
                    let s = (apq / g).conj() * sigma;
                    for i in 0..n {
                        let wp = w.get(i, p);
                        let wq = w.get(i, q);
                        w.set(i, p, wp * c + wq * s);
                        w.set(i, q, wp * (-s.conj()) + wq * c);

                        let vp = v.get(i, p);
                        let vq = v.get(i, q);
                        v.set(i, p, vp * c + vq * s);
                        v.set(i, q, vp * (-s.conj()) + vq * c);
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            // One last orthogonality audit before giving up.
            let mut worst = 0.0f64;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = C64::new(0.0, 0.0);
                    for i in 0..n {
                        app += w.get(i, p).norm_sqr();
                        aqq += w.get(i, q).norm_sqr();
                        apq += w.get(i, p).conj() * w.get(i, q);
                    }
                    let denom = (app * aqq).sqrt();
                    if denom > 0.0 {
                        worst = worst.max(apq.norm() / denom);
                    }
                }
            }
            if worst > 1e-10 {
                return Err(Error::NoConvergence {
                    sweeps: JACOBI_MAX_SWEEPS,
                });
            }
        }
    }

    // Column norms are the singular values; normalized columns are U.
    let mut order: Vec<usize> = (0..n).collect();
    let sig_raw: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| w.get(i, j).norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &b| sig_raw[b].partial_cmp(&sig_raw[a]).unwrap().then(a.cmp(&b)));

    let mut sigma = Vec::with_capacity(n);
    let mut u_cols = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    for &j in &order {
        let s = sig_raw[j];
        sigma.push(s);
        if s > 0.0 {
            u_cols.push((0..n).map(|i| w.get(i, j) / s).collect());
        } else {
            u_cols.push(vec![C64::new(0.0, 0.0); n]);
        }
        v_cols.push((0..n).map(|i| v.get(i, j)).collect());
    }
    Ok(Svd {
        sigma,
        u_cols,
        v_cols,
    })
}
