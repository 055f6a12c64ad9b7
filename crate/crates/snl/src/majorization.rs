//! Weak majorization, the spectral pre-order, log-majorization, and the
//! doubly stochastic (unitary conjugation) correction available in a
//! single matrix factor.

use crate::algebra::{Operator, ToleranceConfig};
use crate::error::{Error, Result};
use crate::inequalities::{young_rhs, ConjugatePair};
use crate::linalg::Matrix;
use crate::report::VerificationReport;
use crate::snumbers::{log_integral_exp, mu, StepFunction};
use crate::spectral::{self, abs_power, eig_hermitian};

/// `f` is weakly majorized by `g`: `int_0^s f <= int_0^s g` for every `s`.
/// The difference of cumulative integrals is piecewise linear with kinks
/// only at merged breakpoints, so checking there (and at infinity, which
/// equals the last breakpoint value) is exact. Uses default tolerances.
pub fn weak_majorize(f: &StepFunction, g: &StepFunction) -> bool {
    weak_majorize_with(f, g, &ToleranceConfig::default())
}

/// [`weak_majorize`] with explicit tolerances.
pub fn weak_majorize_with(f: &StepFunction, g: &StepFunction, tol: &ToleranceConfig) -> bool {
    weak_majorization_margin(f, g) >= -tol.slack(g.total_integral().max(f.total_integral()))
}

/// `min_s (int_0^s g - int_0^s f)`; nonnegative iff `f` is weakly majorized
/// by `g`.
pub fn weak_majorization_margin(f: &StepFunction, g: &StepFunction) -> f64 {
    StepFunction::merged_breakpoints(&[f, g])
        .iter()
        .map(|&s| g.integrate(s) - f.integrate(s))
        .fold(f64::INFINITY, f64::min)
}

/// Submajorization of products: `mu(xy)` is weakly majorized by the
/// pointwise product `mu(x) mu(y)`.
pub fn check_submajorization(
    x: &Operator,
    y: &Operator,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let lhs = mu(&x.multiply(y)?);
    let rhs = StepFunction::product(&mu(x), &mu(y));
    let margin = weak_majorization_margin(&lhs, &rhs);
    let scale = rhs.total_integral().max(lhs.total_integral());
    let mut report = VerificationReport::from_margin("submajorization", margin, scale, tol);
    report.insert_detail("lhs_total", lhs.total_integral());
    report.insert_detail("rhs_total", rhs.total_integral());
    Ok(report)
}

fn descending_eigenvalues_factor(a: &Operator, tol: &ToleranceConfig) -> Result<Vec<f64>> {
    if !a.algebra().is_factor() {
        return Err(Error::RequiresFactor {
            blocks: a.algebra().n_blocks(),
        });
    }
    let dec = eig_hermitian(a, tol)?;
    let min_eig = dec.min_eigenvalue();
    if min_eig < -tol.slack(dec.max_abs_eigenvalue()) {
        return Err(Error::NotPositive { min_eig });
    }
    Ok(dec.eigenvalues())
}

/// Spectral pre-order `a <sp b` for positive operators in a factor: every
/// spectral projection `p^a((s, inf))` is equivalent to a subprojection of
/// `p^b((s, inf))`. In a matrix factor that is a rank inequality at every
/// cut, which is in turn equivalent to eigenvalue-wise domination of the
/// descending spectra.
pub fn spectral_preorder(a: &Operator, b: &Operator, tol: &ToleranceConfig) -> Result<bool> {
    if a.algebra() != b.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let la = descending_eigenvalues_factor(a, tol)?;
    let lb = descending_eigenvalues_factor(b, tol)?;
    let scale = la.iter().chain(&lb).fold(0.0f64, |m, &v| m.max(v.abs()));
    let slack = tol.slack(scale);
    Ok(la.iter().zip(&lb).all(|(x, y)| *x <= *y + slack))
}

/// Young's inequality in the spectral pre-order:
/// `|xy*| <sp p^{-1}|x|^p + q^{-1}|y|^q` in a factor.
pub fn check_young_preorder(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let lhs = spectral::abs_op(&x.multiply(&y.adjoint())?);
    let rhs = young_rhs(x, y, pq)?;
    let la = descending_eigenvalues_factor(&lhs, tol)?;
    let lb = descending_eigenvalues_factor(&rhs, tol)?;
    let margin = la
        .iter()
        .zip(&lb)
        .map(|(a, b)| b - a)
        .fold(f64::INFINITY, f64::min);
    let scale = lb.first().copied().unwrap_or(0.0);
    let mut report = VerificationReport::from_margin("young-preorder", margin, scale, tol);
    report.insert_detail("dimension", la.len() as f64);
    Ok(report)
}

/// Unitary correction in a type I_n factor: builds the unitary `U` mapping
/// the descending eigenbasis of `h = p^{-1}|x|^p + q^{-1}|y|^q` onto the
/// descending eigenbasis of `k = |xy*|`, and verifies the Loewner bound
/// `k <= U h U*`. Conjugation by a unitary is a doubly stochastic map, so
/// this realizes the corrected Young inequality with an automorphism.
pub fn doubly_stochastic_correction(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<(Operator, VerificationReport)> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let algebra = x.algebra();
    if !algebra.is_factor() {
        return Err(Error::RequiresFactor {
            blocks: algebra.n_blocks(),
        });
    }
    let k = spectral::abs_op(&x.multiply(&y.adjoint())?);
    let h = young_rhs(x, y, pq)?;
    let dec_k = eig_hermitian(&k, tol)?;
    let dec_h = eig_hermitian(&h, tol)?;

    // U = sum_i u_i v_i*, u_i the i-th eigenvector of k, v_i of h.
    let n = algebra.blocks()[0].dim;
    let mut u_mat = Matrix::zero(n);
    for (pk, ph) in dec_k.pairs().iter().zip(dec_h.pairs()) {
        for r in 0..n {
            for c in 0..n {
                let v = u_mat.get(r, c) + pk.vector()[r] * ph.vector()[c].conj();
                u_mat.set(r, c, v);
            }
        }
    }
    let u = Operator::from_matrices(algebra, vec![u_mat]);

    let unitary_defect = u
        .adjoint()
        .multiply(&u)?
        .sub(&Operator::identity(algebra))?
        .norm();
    let conj = u.multiply(&h)?.multiply(&u.adjoint())?;
    let diff = conj.sub(&k)?;
    let min_eig = eig_hermitian(&diff.hermitian_part(), tol)?.min_eigenvalue();
    let h_norm = h.norm();

    let scale = h_norm.max(1.0);
    let margin = if unitary_defect > tol.slack(scale) {
        min_eig.min(-unitary_defect)
    } else {
        min_eig
    };
    let mut report = VerificationReport::from_margin("ds-correction", margin, scale, tol);
    report.insert_detail("unitary_defect", unitary_defect);
    report.insert_detail("min_eig_difference", min_eig);
    report.insert_detail("trace_preservation", (conj.trace().re - h.trace().re).abs());
    Ok((u, report))
}

/// Log-majorization via the Lambda function: `Lambda_{|ab|}(s) <=
/// Lambda_a(s) Lambda_b(s)` at midpoints of the merged breakpoints and
/// just below `tau(1)`, together with the square-root identity
/// `Lambda_{h^{1/2}}(s) = sqrt(Lambda_h(s))`.
pub fn check_log_majorization(
    a: &Operator,
    b: &Operator,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    for op in [a, b] {
        if !op.is_positive(tol) {
            let min_eig = eig_hermitian(&op.hermitian_part(), tol)?.min_eigenvalue();
            return Err(Error::NotPositive { min_eig });
        }
    }
    let ab = a.multiply(b)?;
    let mu_ab = mu(&ab);
    let mu_a = mu(a);
    let mu_b = mu(b);

    let total = a.algebra().total_trace();
    let mut cuts: Vec<f64> = Vec::new();
    let merged = StepFunction::merged_breakpoints(&[&mu_ab, &mu_a, &mu_b]);
    for w in merged.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if mid > 0.0 && mid < total {
            cuts.push(mid);
        }
    }
    cuts.push(total * (1.0 - 1e-12));

    let mut worst = f64::INFINITY;
    for &s in &cuts {
        let lhs = log_integral_exp(&mu_ab, s);
        let rhs = log_integral_exp(&mu_a, s) * log_integral_exp(&mu_b, s);
        // Multiplicative comparison with additive slack near zero.
        let margin = (rhs - lhs) / (1.0 + rhs.abs());
        worst = worst.min(margin);
    }

    // Square-root identity, checked on the same cuts for h = |ab|.
    let h = spectral::abs_op(&ab);
    let sqrt_h = abs_power(&h, 0.5);
    let mu_h = mu(&h);
    let mu_sqrt = mu(&sqrt_h);
    let mut sqrt_defect = 0.0f64;
    for &s in &cuts {
        let left = log_integral_exp(&mu_sqrt, s);
        let right = log_integral_exp(&mu_h, s).sqrt();
        sqrt_defect = sqrt_defect.max((left - right).abs() / (1.0 + right));
    }

    let margin = if sqrt_defect > tol.slack(1.0) {
        worst.min(-sqrt_defect)
    } else {
        worst
    };
    let mut report = VerificationReport::from_margin("log-majorization", margin, 1.0, tol);
    report.insert_detail("lambda_margin", worst);
    report.insert_detail("sqrt_identity_defect", sqrt_defect);
    report.insert_detail("cuts", cuts.len() as f64);
    Ok(report)
}
