//! Spectral toolkit: Hermitian eigendecomposition and everything built on
//! it: spectral projections, continuous functional calculus, the modulus
//! |z|, polar decomposition, range projections, and rank comparisons.
//!
//! Hermitian structure goes through the two-sided Jacobi eigensolver;
//! singular structure (|z|, polar, ranges, operator norms) goes through the
//! one-sided Jacobi SVD, which resolves small singular values to machine
//! precision relative to the largest one.

use crate::algebra::{Operator, ToleranceConfig, TracialAlgebra, C64};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eig, jacobi_svd, Matrix};

/// Relative threshold below which a singular value counts as zero in rank,
/// range, and pseudo-inverse decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Relative tie guard for spectral cuts: `p^h(s, inf)` keeps eigenvalues
/// strictly above `s + EIG_TIE_TOL * |h|`, so values numerically equal to
/// the cut are excluded, matching the open interval.
pub const EIG_TIE_TOL: f64 = 1e-10;

/// Eigenvalues and orthonormal eigenvectors of a Hermitian operator,
/// globally sorted in descending order; ties break by (block, column) so
/// identical input bits give identical output.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    algebra: TracialAlgebra,
    entries: Vec<EigenPair>,
}

/// One eigenpair; the vector lives inside block `block`.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub block: usize,
    vector: Vec<C64>,
}

impl EigenPair {
    pub fn vector(&self) -> &[C64] {
        &self.vector
    }
}

impl SpectralDecomposition {
    pub fn algebra(&self) -> &TracialAlgebra {
        &self.algebra
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.entries
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value.abs())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Assembles `sum_i f(lambda_i) v_i v_i*`.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> Operator {
        let mut blocks: Vec<Matrix> = self
            .algebra
            .blocks()
            .iter()
            .map(|b| Matrix::zero(b.dim))
            .collect();
        for pair in &self.entries {
            blocks[pair.block].add_outer(f(pair.value), &pair.vector);
        }
        Operator::from_matrices(&self.algebra, blocks)
    }

    /// `sum_i lambda_i v_i v_i*`; reconstruction error is the solver's
    /// quality contract.
    pub fn reconstruct(&self) -> Operator {
        self.assemble(|t| t)
    }
}

/// Eigendecomposition of a Hermitian operator.
pub fn eig_hermitian(h: &Operator, tol: &ToleranceConfig) -> Result<SpectralDecomposition> {
    let defect = h.sub(&h.adjoint())?.norm();
    let herm_slack = tol.slack(h.norm());
    if defect > herm_slack {
        return Err(Error::NotHermitian {
            defect,
            tol: herm_slack,
        });
    }
    eig_hermitian_unchecked(h)
}

/// Same as [`eig_hermitian`] but trusts the caller; used internally where
/// hermiticity holds by construction.
pub(crate) fn eig_hermitian_unchecked(h: &Operator) -> Result<SpectralDecomposition> {
    let mut entries = Vec::with_capacity(h.algebra().total_dim());
    for (k, m) in h.block_matrices().iter().enumerate() {
        let (lambda, v) = jacobi_eig(m)?;
        for (col, &value) in lambda.iter().enumerate() {
            let vector = (0..m.dim).map(|i| v.get(i, col)).collect();
            entries.push(EigenPair {
                value,
                block: k,
                vector,
            });
        }
    }
    // Descending by value; ties by (block, original column); the entries
    // are pushed in that order, so a stable sort preserves it.
    entries.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());
    Ok(SpectralDecomposition {
        algebra: h.algebra().clone(),
        entries,
    })
}

/// Per-block singular value decompositions of an operator.
pub(crate) struct OperatorSvd {
    pub blocks: Vec<crate::linalg::Svd>,
}

impl OperatorSvd {
    pub fn max_sigma(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|s| s.sigma.iter().copied())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn operator_svd(z: &Operator) -> Result<OperatorSvd> {
    let blocks = z
        .block_matrices()
        .iter()
        .map(jacobi_svd)
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSvd { blocks })
}

/// Operator norm = largest singular value over all blocks.
pub fn op_norm(z: &Operator) -> f64 {
    operator_svd(z).map(|s| s.max_sigma()).unwrap_or(f64::NAN)
}

/// `|z| = (z*z)^{1/2}`, assembled from the right singular vectors.
pub fn abs_op(z: &Operator) -> Operator {
    abs_power(z, 1.0)
}

/// `|z|^r` for `r > 0` in one pass: `sum_i sigma_i^r v_i v_i*`.
pub(crate) fn abs_power(z: &Operator, r: f64) -> Operator {
    assert!(r > 0.0, "exponent must be positive");
    let svd = operator_svd(z).expect("svd of finite operator");
    let mut blocks: Vec<Matrix> = z
        .block_matrices()
        .iter()
        .map(|m| Matrix::zero(m.dim))
        .collect();
    for (k, s) in svd.blocks.iter().enumerate() {
        for (i, &sigma) in s.sigma.iter().enumerate() {
            if sigma > 0.0 {
                blocks[k].add_outer(sigma.powf(r), &s.v_cols[i]);
            }
        }
    }
    Operator::from_matrices(z.algebra(), blocks)
}

/// Polar decomposition `z = w |z|` with `w` a partial isometry supported on
/// the range of `|z|`.
#[derive(Clone, Debug)]
pub struct PolarDecomposition {
    pub partial_isometry: Operator,
    pub modulus: Operator,
}

/// Computes the polar decomposition; the partial isometry is
/// `z |z|^+`, built on singular values above `RANK_TOL * |z|` and zero on
/// the kernel.
pub fn polar(z: &Operator) -> PolarDecomposition {
    let svd = operator_svd(z).expect("svd of finite operator");
    let cutoff = RANK_TOL * svd.max_sigma();
    let mut mod_blocks: Vec<Matrix> = Vec::with_capacity(z.algebra().n_blocks());
    let mut iso_blocks: Vec<Matrix> = Vec::with_capacity(z.algebra().n_blocks());
    for (m, s) in z.block_matrices().iter().zip(&svd.blocks) {
        let n = m.dim;
        let mut modulus = Matrix::zero(n);
        let mut iso = Matrix::zero(n);
        for (i, &sigma) in s.sigma.iter().enumerate() {
            if sigma <= 0.0 {
                continue;
            }
            modulus.add_outer(sigma, &s.v_cols[i]);
            if sigma > cutoff {
                // w += u_i v_i*
                for r in 0..n {
                    for c in 0..n {
                        let v = iso.get(r, c) + s.u_cols[i][r] * s.v_cols[i][c].conj();
                        iso.set(r, c, v);
                    }
                }
            }
        }
        mod_blocks.push(modulus);
        iso_blocks.push(iso);
    }
    PolarDecomposition {
        partial_isometry: Operator::from_matrices(z.algebra(), iso_blocks),
        modulus: Operator::from_matrices(z.algebra(), mod_blocks),
    }
}

/// Spectral projection `p^h((s, inf))`: the orthogonal projection onto the
/// span of eigenvectors with eigenvalue strictly above the cut.
pub fn spectral_projection(h: &Operator, s: f64, tol: &ToleranceConfig) -> Result<Operator> {
    let dec = eig_hermitian(h, tol)?;
    Ok(spectral_projection_from(&dec, s))
}

pub(crate) fn spectral_projection_from(dec: &SpectralDecomposition, s: f64) -> Operator {
    let guard = EIG_TIE_TOL * dec.max_abs_eigenvalue();
    dec.assemble(|lam| if lam > s + guard { 1.0 } else { 0.0 })
}

/// Range projection `R[x]`: projection onto the span of left singular
/// vectors with singular value above `RANK_TOL * |x|`.
pub fn range_projection(x: &Operator) -> Operator {
    let svd = operator_svd(x).expect("svd of finite operator");
    let cutoff = RANK_TOL * svd.max_sigma();
    let mut blocks: Vec<Matrix> = x
        .block_matrices()
        .iter()
        .map(|m| Matrix::zero(m.dim))
        .collect();
    for (k, s) in svd.blocks.iter().enumerate() {
        for (i, &sigma) in s.sigma.iter().enumerate() {
            if sigma > cutoff && sigma > 0.0 {
                blocks[k].add_outer(1.0, &s.u_cols[i]);
            }
        }
    }
    Operator::from_matrices(x.algebra(), blocks)
}

/// Per-block rank of a projection, counting eigenvalues above 1/2.
pub(crate) fn projection_ranks(e: &Operator, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    if !e.is_projection(tol) {
        let defect = e.multiply(e)?.sub(e)?.norm();
        return Err(Error::NotProjection { defect });
    }
    let mut ranks = Vec::with_capacity(e.algebra().n_blocks());
    for m in e.block_matrices() {
        let (lambda, _) = jacobi_eig(m)?;
        ranks.push(lambda.iter().filter(|&&l| l > 0.5).count());
    }
    Ok(ranks)
}

/// Murray-von Neumann equivalence of projections. In a finite direct sum
/// of matrix factors this is exactly per-block rank equality.
pub fn mvn_equivalent(e: &Operator, f: &Operator, tol: &ToleranceConfig) -> Result<bool> {
    if e.algebra() != f.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(projection_ranks(e, tol)? == projection_ranks(f, tol)?)
}

/// Scalar maps used in the functional calculus: increasing continuous
/// functions on the nonnegative reals vanishing at zero.
#[derive(Clone, Debug)]
pub enum ScalarFunction {
    /// `t^r` with `r > 0`.
    Power { exponent: f64 },
    /// `exp(rate * t) - 1` with `rate > 0`.
    ExpMinusOne { rate: f64 },
    /// Piecewise-linear interpolant through `(t, value)` knots; constant
    /// extension beyond the last knot.
    Interpolant { knots: Vec<(f64, f64)> },
}

impl ScalarFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::InvalidExponent(exponent));
        }
        Ok(ScalarFunction::Power { exponent })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ScalarFunction::Power { exponent } => {
                if t <= 0.0 {
                    0.0
                } else {
                    t.powf(*exponent)
                }
            }
            ScalarFunction::ExpMinusOne { rate } => (rate * t).exp_m1(),
            ScalarFunction::Interpolant { knots } => {
                if knots.is_empty() {
                    return 0.0;
                }
                if t <= knots[0].0 {
                    return knots[0].1;
                }
                for pair in knots.windows(2) {
                    let (t0, v0) = pair[0];
                    let (t1, v1) = pair[1];
                    if t <= t1 {
                        let frac = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
                        return v0 + frac * (v1 - v0);
                    }
                }
                knots.last().unwrap().1
            }
        }
    }

    /// Sample-grid validation: vanishing at zero and nondecreasing on
    /// `[0, upper]`.
    pub(crate) fn validate_monotone_zero(&self, upper: f64) -> Result<()> {
        let at_zero = self.eval(0.0);
        if at_zero.abs() > 1e-12 {
            return Err(Error::InvalidScalarFunction(format!(
                "psi(0) = {at_zero}, expected 0"
            )));
        }
        let top = if upper > 0.0 { upper } else { 1.0 };
        let samples = 64;
        let mut prev = at_zero;
        for i in 1..=samples {
            let t = top * i as f64 / samples as f64;
            let v = self.eval(t);
            if !v.is_finite() || v < prev - 1e-12 * (1.0 + prev.abs()) {
                return Err(Error::InvalidScalarFunction(format!(
                    "not nondecreasing near t = {t}"
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

/// Continuous functional calculus `psi(h)` for positive `h`: eigenvalues in
/// `[-(slack), 0)` are clamped to zero, anything lower is an error.
pub fn functional_calculus(
    h: &Operator,
    psi: &ScalarFunction,
    tol: &ToleranceConfig,
) -> Result<Operator> {
    let dec = eig_hermitian(h, tol)?;
    let scale = dec.max_abs_eigenvalue();
    let clamp = tol.slack(scale);
    let min_eig = dec.min_eigenvalue().min(0.0);
    if min_eig < -clamp {
        return Err(Error::NotPositive { min_eig });
    }
    psi.validate_monotone_zero(scale)?;
    Ok(dec.assemble(|lam| psi.eval(lam.max(0.0))))
}

/// `a^r` for positive `a` and `r > 0`; zero eigenvalues map to zero.
pub fn power_pos(a: &Operator, r: f64, tol: &ToleranceConfig) -> Result<Operator> {
    functional_calculus(a, &ScalarFunction::power(r)?, tol)
}

/// Applies an arbitrary real function to a Hermitian operator; no
/// positivity or vanishing-at-zero requirement. This is the raw matrix
/// function used by the Fenchel-Young check, where `F(0)` may be nonzero.
pub fn hermitian_map(
    h: &Operator,
    f: impl Fn(f64) -> f64,
    tol: &ToleranceConfig,
) -> Result<Operator> {
    let dec = eig_hermitian(h, tol)?;
    Ok(dec.assemble(f))
}

/// Inverse of a positive invertible operator via the spectral toolkit.
pub(crate) fn invert_pos(
    b: &Operator,
    min_eig_floor: f64,
    tol: &ToleranceConfig,
) -> Result<Operator> {
    let dec = eig_hermitian(b, tol)?;
    let min_eig = dec.min_eigenvalue();
    if min_eig <= min_eig_floor {
        return Err(Error::NotInvertible {
            min_eig,
            threshold: min_eig_floor,
        });
    }
    Ok(dec.assemble(|lam| 1.0 / lam))
}
