//! Executable Young-type inequality checks: the singular-value form, the
//! tracial form with its dagger variants, the compression lemma, equality
//! detection, the arithmetic-geometric mean chain, the Fenchel-Young trace
//! inequality, and the documented counterexample search for the naive
//! `|xy|` variant.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Operator, ToleranceConfig};
use crate::error::{Error, Result};
use crate::gen::{gen_operator, trial_rng, OperatorKind, STREAM_FALSIFY};
use crate::majorization::weak_majorization_margin;
use crate::report::{VerificationReport, Witness};
use crate::snumbers::{mu, StepFunction};
use crate::spectral::{
    abs_op, abs_power, eig_hermitian, hermitian_map, invert_pos, mvn_equivalent, power_pos,
    range_projection, spectral_projection,
};

/// Relative tolerance deciding "the traces are equal" in the equality
/// characterizations. Looser than arithmetic tolerance because both sides
/// pass through eigendecompositions, still tight enough to separate the
/// 1e-2 perturbations the harness uses.
pub const EQ_TRACE_TOL: f64 = 1e-8;

/// Relative tolerance deciding the operator equality `b^q = a^p`.
pub const EQ_OP_TOL: f64 = 1e-6;

/// Minimum eigenvalue, relative to the norm, below which an operator is
/// treated as non-invertible when a genuine inverse is required.
pub const INVERTIBILITY_TOL: f64 = 1e-6;

/// Conjugate exponents `p, q > 1` with `1/p + 1/q = 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ConjugatePair {
    p: f64,
    q: f64,
}

impl ConjugatePair {
    /// Builds the pair from `p`, deriving `q = p / (p - 1)`.
    pub fn from_p(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        Ok(ConjugatePair {
            p,
            q: p / (p - 1.0),
        })
    }

    /// Validates an explicit pair.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0) || !(q > 1.0) {
            return Err(Error::InvalidExponent(if p > 1.0 { q } else { p }));
        }
        let defect = (1.0 / p + 1.0 / q - 1.0).abs();
        if defect > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "1/p + 1/q differs from 1 by {defect:.3e}"
            )));
        }
        Ok(ConjugatePair { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The same pair with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> ConjugatePair {
        ConjugatePair {
            p: self.q,
            q: self.p,
        }
    }
}

/// `p^{-1} |x|^p + q^{-1} |y|^q`, the right-hand side of every Young form.
pub fn young_rhs(x: &Operator, y: &Operator, pq: &ConjugatePair) -> Result<Operator> {
    let xp = abs_power(x, pq.p()).scale_re(1.0 / pq.p());
    let yq = abs_power(y, pq.q()).scale_re(1.0 / pq.q());
    xp.add(&yq)
}

/// Young's inequality in singular values:
/// `mu_{|xy*|}(t) <= mu_{p^{-1}|x|^p + q^{-1}|y|^q}(t)` for all `t`.
pub fn check_young_sv(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let lhs = mu(&x.multiply(&y.adjoint())?);
    let rhs_op = young_rhs(x, y, pq)?;
    let rhs = mu(&rhs_op);
    let margin = StepFunction::min_margin(&lhs, &rhs);
    let scale = rhs.eval(0.0);
    let mut report = VerificationReport::from_margin("young-sv", margin, scale, tol);
    report.insert_detail("p", pq.p());
    report.insert_detail("lhs_norm", lhs.eval(0.0));
    report.insert_detail("rhs_norm", scale);
    Ok(report)
}

/// The naive `|xy|` variant of the singular-value inequality. This is NOT
/// a theorem (counterexamples exist already in 2x2 matrices), so the
/// check is informational and exercised by the counterexample search.
pub fn check_young_sv_xy(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let lhs = mu(&x.multiply(y)?);
    let rhs_op = young_rhs(x, y, pq)?;
    let rhs = mu(&rhs_op);
    let margin = StepFunction::min_margin(&lhs, &rhs);
    let scale = rhs.eval(0.0);
    let mut report = VerificationReport::from_margin("young-sv-xy", margin, scale, tol);
    report.insert_detail("p", pq.p());
    Ok(report)
}

/// The four dagger substitutions `x -> x, x*, |x|, |x*|` under which the
/// tracial Young inequality is invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dagger {
    Plain,
    Star,
    Abs,
    AbsStar,
}

impl Dagger {
    pub const ALL: [Dagger; 4] = [Dagger::Plain, Dagger::Star, Dagger::Abs, Dagger::AbsStar];

    pub fn apply(&self, x: &Operator) -> Operator {
        match self {
            Dagger::Plain => x.clone(),
            Dagger::Star => x.adjoint(),
            Dagger::Abs => abs_op(x),
            Dagger::AbsStar => abs_op(&x.adjoint()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Dagger::Plain => "plain",
            Dagger::Star => "star",
            Dagger::Abs => "abs",
            Dagger::AbsStar => "abs-star",
        }
    }
}

/// Tracial Young inequality for one dagger combination:
/// `tau(|x' y'|) <= p^{-1} tau(|x|^p) + q^{-1} tau(|y|^q)`, and the
/// right-hand side must not depend on the chosen variants.
pub fn check_young_trace(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    dagger_x: Dagger,
    dagger_y: Dagger,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let xd = dagger_x.apply(x);
    let yd = dagger_y.apply(y);
    let lhs = abs_op(&xd.multiply(&yd)?).trace().re;
    let rhs = young_rhs(x, y, pq)?.trace().re;
    let rhs_variant = young_rhs(&xd, &yd, pq)?.trace().re;
    let variant_dev = (rhs_variant - rhs).abs();

    let scale = rhs.abs().max(lhs.abs());
    let margin = if variant_dev > tol.slack(scale) {
        (rhs - lhs).min(-variant_dev)
    } else {
        rhs - lhs
    };
    let mut report = VerificationReport::from_margin("young-trace", margin, scale, tol);
    report.insert_detail("lhs", lhs);
    report.insert_detail("rhs", rhs);
    report.insert_detail("rhs_variant_deviation", variant_dev);
    report.insert_detail("p", pq.p());
    Ok(report)
}

/// All sixteen dagger combinations at once: every trace inequality must
/// hold and the sixteen right-hand sides must agree up to relative
/// tolerance.
pub fn check_young_trace_variants(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let x_variants: Vec<Operator> = Dagger::ALL.iter().map(|d| d.apply(x)).collect();
    let y_variants: Vec<Operator> = Dagger::ALL.iter().map(|d| d.apply(y)).collect();
    let tx: Vec<f64> = x_variants
        .iter()
        .map(|v| abs_power(v, pq.p()).trace().re)
        .collect();
    let ty: Vec<f64> = y_variants
        .iter()
        .map(|v| abs_power(v, pq.q()).trace().re)
        .collect();

    let rhs_base = tx[0] / pq.p() + ty[0] / pq.q();
    let mut rhs_spread = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    let mut worst_label = 0usize;
    for (i, xv) in x_variants.iter().enumerate() {
        for (j, yv) in y_variants.iter().enumerate() {
            let lhs = abs_op(&xv.multiply(yv)?).trace().re;
            let rhs = tx[i] / pq.p() + ty[j] / pq.q();
            rhs_spread = rhs_spread.max((rhs - rhs_base).abs());
            let margin = rhs - lhs;
            if margin < worst_margin {
                worst_margin = margin;
                worst_label = i * 4 + j;
            }
        }
    }

    let scale = rhs_base.abs();
    let rel_spread = rhs_spread / scale.max(1e-300);
    let margin = if rhs_spread > tol.slack(scale) {
        worst_margin.min(-rhs_spread)
    } else {
        worst_margin
    };
    let mut report = VerificationReport::from_margin("young-trace-variants", margin, scale, tol);
    report.insert_detail("rhs", rhs_base);
    report.insert_detail("rhs_relative_spread", rel_spread);
    report.insert_detail("worst_variant_index", worst_label as f64);
    report.insert_detail("p", pq.p());
    Ok(report)
}

fn require_positive(op: &Operator, tol: &ToleranceConfig) -> Result<()> {
    if op.is_positive(tol) {
        Ok(())
    } else {
        let min_eig = eig_hermitian(&op.hermitian_part(), tol)?.min_eigenvalue();
        Err(Error::NotPositive { min_eig })
    }
}

/// Equality characterization in traces: for positive `a, b`,
/// `tau(|ab|) = p^{-1} tau(a^p) + q^{-1} tau(b^q)` holds exactly when
/// `b^q = a^p`. The check computes both the trace gap and the operator
/// distance and passes iff the two smallness verdicts agree.
pub fn check_equality_trace(
    a: &Operator,
    b: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_positive(a, tol)?;
    require_positive(b, tol)?;
    let ap = power_pos(a, pq.p(), tol)?;
    let bq = power_pos(b, pq.q(), tol)?;
    let rhs = ap.trace().re / pq.p() + bq.trace().re / pq.q();
    let lhs = abs_op(&a.multiply(b)?).trace().re;
    let gap = rhs - lhs;
    let dist = bq.sub(&ap)?.norm();

    let tol_eq = EQ_TRACE_TOL * (1.0 + rhs.abs());
    let tol_op = EQ_OP_TOL * (1.0 + ap.norm());
    let gap_small = gap <= tol_eq;
    let dist_small = dist <= tol_op;

    let mut report = VerificationReport::from_flag("equality-trace", gap_small == dist_small);
    report.insert_detail("gap", gap);
    report.insert_detail("dist", dist);
    report.insert_detail("tol_eq", tol_eq);
    report.insert_detail("tol_op", tol_op);
    report.insert_detail("gap_small", gap_small as u8 as f64);
    report.insert_detail("dist_small", dist_small as u8 as f64);
    report.insert_detail("p", pq.p());
    Ok(report)
}

/// Equality characterization in singular values: `mu_{|xy*|}` coincides
/// with `mu` of the Young right-hand side exactly when `|y|^q = |x|^p`.
pub fn check_equality_sv(
    x: &Operator,
    y: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let lhs_mu = mu(&x.multiply(&y.adjoint())?);
    let rhs_op = young_rhs(x, y, pq)?;
    let rhs_mu = mu(&rhs_op);
    let sup = StepFunction::sup_distance(&lhs_mu, &rhs_mu);

    let xp = abs_power(x, pq.p());
    let yq = abs_power(y, pq.q());
    let dist = yq.sub(&xp)?.norm();

    let tol_mu = (EQ_TRACE_TOL * (1.0 + rhs_mu.eval(0.0))).max(tol.slack(rhs_mu.eval(0.0)));
    let tol_op = (EQ_OP_TOL * (1.0 + xp.norm())).max(tol.slack(xp.norm()));
    let mu_equal = sup <= tol_mu;
    let op_equal = dist <= tol_op;

    let mut report = VerificationReport::from_flag("equality-sv", mu_equal == op_equal);
    report.insert_detail("sup_mu_gap", sup);
    report.insert_detail("dist", dist);
    report.insert_detail("tol_mu", tol_mu);
    report.insert_detail("tol_op", tol_op);
    report.insert_detail("mu_equal", mu_equal as u8 as f64);
    report.insert_detail("op_equal", op_equal as u8 as f64);
    report.insert_detail("p", pq.p());
    Ok(report)
}

/// Compression lemma: for `p` in `(1, 2]`, positive `a`, positive
/// invertible `b`, and `f_s = R[b^{-1} p^{|ab|}((s, inf))]`,
///
/// `s f_s <= f_s (p^{-1} a^p + q^{-1} b^q) f_s` and
/// `f_s` is equivalent to `p^{|ab|}((s, inf))`.
pub fn check_compression(
    a: &Operator,
    b: &Operator,
    pq: &ConjugatePair,
    s: f64,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if !(pq.p() > 1.0 && pq.p() <= 2.0) {
        return Err(Error::InvalidExponent(pq.p()));
    }
    require_positive(a, tol)?;
    require_positive(b, tol)?;
    let b_floor = INVERTIBILITY_TOL * b.norm();
    let b_inv = invert_pos(b, b_floor, tol)?;

    let abs_ab = abs_op(&a.multiply(b)?);
    let proj = spectral_projection(&abs_ab, s, tol)?;
    let f_s = range_projection(&b_inv.multiply(&proj)?);

    let h = young_rhs(a, b, pq)?;
    let compressed = f_s.multiply(&h)?.multiply(&f_s)?;
    let shifted = compressed.sub(&f_s.scale_re(s))?;
    let min_eig = eig_hermitian(&shifted.hermitian_part(), tol)?.min_eigenvalue();

    let equivalent = mvn_equivalent(&f_s, &proj, tol)?;

    let scale = h.norm() + s;
    let margin = if equivalent {
        min_eig
    } else {
        min_eig.min(-(1.0 + scale))
    };
    let mut report = VerificationReport::from_margin("compression", margin, scale, tol);
    report.insert_detail("s", s);
    report.insert_detail("min_eig", min_eig);
    report.insert_detail("equivalent", equivalent as u8 as f64);
    report.insert_detail("p", pq.p());
    Ok(report)
}

/// Runs the compression lemma over a sweep of cuts: `s = 0`, the midpoints
/// between consecutive singular levels of `|ab|`, and a point beyond the
/// norm (where everything is vacuous). Returns the worst case.
pub fn check_compression_sweep(
    a: &Operator,
    b: &Operator,
    pq: &ConjugatePair,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let abs_ab = abs_op(&a.multiply(b)?);
    let levels = mu(&abs_ab);
    let mut cuts = vec![0.0];
    for w in levels.values().windows(2) {
        cuts.push(0.5 * (w[0] + w[1]));
    }
    cuts.push(1.1 * levels.eval(0.0).max(1.0));

    let mut worst: Option<VerificationReport> = None;
    for &s in &cuts {
        let report = check_compression(a, b, pq, s, tol)?;
        let replace = match &worst {
            None => true,
            Some(w) => report.worst_margin < w.worst_margin,
        };
        if replace {
            worst = Some(report);
        }
    }
    let mut report = worst.expect("at least one cut");
    report.insert_detail("cuts", cuts.len() as f64);
    Ok(report)
}

/// Arithmetic-geometric mean inequality: the weak majorization
/// `mu(|ab|^{1/2}) <w (mu(a) + mu(b)) / 2` together with the scalar chain
/// `tau(|ab|^{1/2}) <= sqrt(tau(a) tau(b)) <= (tau(a) + tau(b)) / 2`.
pub fn check_agm(a: &Operator, b: &Operator, tol: &ToleranceConfig) -> Result<VerificationReport> {
    require_positive(a, tol)?;
    require_positive(b, tol)?;
    let sqrt_ab = abs_power(&a.multiply(b)?, 0.5);
    let lhs_mu = mu(&sqrt_ab);
    let rhs_mu = StepFunction::average(&mu(a), &mu(b));
    let maj_margin = weak_majorization_margin(&lhs_mu, &rhs_mu);

    let t_ab = sqrt_ab.trace().re;
    let t_a = a.trace().re;
    let t_b = b.trace().re;
    let geometric = (t_a * t_b).sqrt();
    let arithmetic = 0.5 * (t_a + t_b);

    let margin = maj_margin.min(geometric - t_ab).min(arithmetic - geometric);
    let scale = arithmetic.max(rhs_mu.total_integral());
    let mut report = VerificationReport::from_margin("agm", margin, scale, tol);
    report.insert_detail("tau_sqrt_ab", t_ab);
    report.insert_detail("geometric_mean", geometric);
    report.insert_detail("arithmetic_mean", arithmetic);
    report.insert_detail("majorization_margin", maj_margin);
    Ok(report)
}

/// A convex function on the nonnegative reals together with its Fenchel
/// conjugate machinery.
#[derive(Clone, Debug)]
pub enum ConvexFunction {
    /// `F(t) = p^{-1} t^p` with closed-form conjugate `q^{-1} s^q` on
    /// `[0, inf)`.
    Power { p: f64 },
    /// Uniform samples `(t_i, F(t_i))`; the conjugate is evaluated as a
    /// maximum over the grid, valid for `r` inside `conjugate_domain`.
    Grid {
        knots: Vec<(f64, f64)>,
        conjugate_domain: (f64, f64),
    },
}

impl ConvexFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        Ok(ConvexFunction::Power { p })
    }

    /// Samples `f` on a uniform grid over `[0, t_max]` and validates
    /// convexity (midpoint test) and monotonicity on the samples.
    pub fn from_samples(
        f: impl Fn(f64) -> f64,
        t_max: f64,
        points: usize,
        conjugate_domain: (f64, f64),
    ) -> Result<Self> {
        if !(t_max > 0.0) || points < 3 {
            return Err(Error::InvalidConfig(
                "grid needs t_max > 0 and at least 3 points".into(),
            ));
        }
        let knots: Vec<(f64, f64)> = (0..points)
            .map(|i| {
                let t = t_max * i as f64 / (points - 1) as f64;
                (t, f(t))
            })
            .collect();
        for w in knots.windows(3) {
            let (_, v0) = w[0];
            let (_, v1) = w[1];
            let (_, v2) = w[2];
            if !v1.is_finite() {
                return Err(Error::InvalidScalarFunction("non-finite sample".into()));
            }
            if v1 > 0.5 * (v0 + v2) + 1e-12 * (1.0 + v1.abs()) {
                return Err(Error::InvalidScalarFunction(
                    "midpoint test failed: samples are not convex".into(),
                ));
            }
            if v1 < v0 - 1e-12 * (1.0 + v0.abs()) {
                return Err(Error::InvalidScalarFunction(
                    "samples are not nondecreasing".into(),
                ));
            }
        }
        Ok(ConvexFunction::Grid {
            knots,
            conjugate_domain,
        })
    }

    pub fn conjugate_domain(&self) -> (f64, f64) {
        match self {
            ConvexFunction::Power { .. } => (0.0, f64::INFINITY),
            ConvexFunction::Grid {
                conjugate_domain, ..
            } => *conjugate_domain,
        }
    }

    /// Grid spacing; zero for the closed-form power case.
    pub fn grid_spacing(&self) -> f64 {
        match self {
            ConvexFunction::Power { .. } => 0.0,
            ConvexFunction::Grid { knots, .. } => {
                if knots.len() < 2 {
                    0.0
                } else {
                    knots[1].0 - knots[0].0
                }
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            ConvexFunction::Power { p } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(*p) / p
                }
            }
            ConvexFunction::Grid { knots, .. } => {
                for w in knots.windows(2) {
                    let (t0, v0) = w[0];
                    let (t1, v1) = w[1];
                    if t <= t1 {
                        let frac = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
                        return v0 + frac * (v1 - v0);
                    }
                }
                // Linear extension with the final slope keeps convexity.
                let n = knots.len();
                let (t0, v0) = knots[n - 2];
                let (t1, v1) = knots[n - 1];
                let slope = if t1 > t0 { (v1 - v0) / (t1 - t0) } else { 0.0 };
                v1 + slope * (t - t1)
            }
        }
    }

    fn conjugate_unchecked(&self, r: f64) -> f64 {
        match self {
            ConvexFunction::Power { p } => {
                let q = p / (p - 1.0);
                if r <= 0.0 {
                    0.0
                } else {
                    r.powf(q) / q
                }
            }
            ConvexFunction::Grid { knots, .. } => knots
                .iter()
                .map(|&(t, v)| r * t - v)
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Fenchel conjugate `F*(r) = sup_t (r t - F(t))`; `r` must lie in the
/// declared conjugate domain.
pub fn fenchel_conjugate(f: &ConvexFunction, r: f64) -> Result<f64> {
    let (lo, hi) = f.conjugate_domain();
    if !(r >= lo && r <= hi) {
        return Err(Error::OutOfDomain { value: r, lo, hi });
    }
    Ok(f.conjugate_unchecked(r))
}

/// Fenchel-Young inequality in traces:
/// `tau(|ab|) <= tau(F(a)) + tau(F*(b))` up to the recorded grid error,
/// for positive `a, b` with the spectrum of `b` inside the conjugate
/// domain.
pub fn check_fenchel_young(
    a: &Operator,
    b: &Operator,
    f: &ConvexFunction,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    require_positive(a, tol)?;
    require_positive(b, tol)?;
    let (lo, hi) = f.conjugate_domain();
    let dec_b = eig_hermitian(b, tol)?;
    let b_norm = dec_b.max_abs_eigenvalue();
    let dom_slack = tol.slack(b_norm.max(1.0));
    for &lam in &dec_b.eigenvalues() {
        if lam > hi + dom_slack || lam < lo.max(0.0) - dom_slack {
            return Err(Error::OutOfDomain { value: lam, lo, hi });
        }
    }

    let tau_f_a = hermitian_map(a, |t| f.eval(t), tol)?.trace().re;
    let tau_fstar_b = hermitian_map(b, |t| f.conjugate_unchecked(t.clamp(lo.max(0.0), hi)), tol)?
        .trace()
        .re;
    // Each conjugate evaluation at r carries grid error up to spacing * r;
    // summed against the trace weights that is spacing * tau(b).
    let grid_error = f.grid_spacing() * b.trace().re.abs();

    let lhs = abs_op(&a.multiply(b)?).trace().re;
    let margin = tau_f_a + tau_fstar_b + grid_error - lhs;
    let scale = tau_f_a.abs() + tau_fstar_b.abs() + lhs.abs();
    let mut report = VerificationReport::from_margin("fenchel-young", margin, scale, tol);
    report.insert_detail("tau_f_a", tau_f_a);
    report.insert_detail("tau_fstar_b", tau_fstar_b);
    report.insert_detail("grid_error", grid_error);
    report.insert_detail("tau_abs_ab", lhs);
    Ok(report)
}

/// Random search for a violation of the naive `|xy|` singular-value
/// inequality. Entries are standard complex Gaussians, `p` is uniform on
/// `[1.1, 4]`. Finding a witness is the expected ("passing") outcome;
/// exhausting the budget is reported, not an error. Every witness is
/// cross-checked to satisfy the true `|xy*|` inequality.
pub fn find_xy_counterexample(
    dim: usize,
    seeds: u64,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if dim < 2 {
        return Err(Error::InvalidConfig(format!(
            "counterexample search needs dim >= 2, got {dim}"
        )));
    }
    let algebra = crate::algebra::TracialAlgebra::factor(dim)?;
    for trial in 0..seeds {
        let mut rng = trial_rng(seed, trial, STREAM_FALSIFY);
        let x = gen_operator(&mut rng, &algebra, OperatorKind::General);
        let y = gen_operator(&mut rng, &algebra, OperatorKind::General);
        let p: f64 = rng.random_range(1.1..4.0);
        let pq = ConjugatePair::from_p(p)?;

        let lhs = mu(&x.multiply(&y)?);
        let rhs = mu(&young_rhs(&x, &y, &pq)?);
        let scale = rhs.eval(0.0);
        let slack = tol.slack(scale);

        let mut worst = f64::INFINITY;
        let mut worst_t = 0.0;
        for &t in &StepFunction::comparison_points(&lhs, &rhs) {
            let m = rhs.eval(t) - lhs.eval(t);
            if m < worst {
                worst = m;
                worst_t = t;
            }
        }
        if worst < -slack {
            // Genuine violation of the naive form; the true form must
            // still hold for the same data.
            let sv_report = check_young_sv(&x, &y, &pq, tol)?;
            let witness = Witness::new()
                .with_operator("x", &x)
                .with_operator("y", &y)
                .with_scalar("p", p)
                .with_scalar("t", worst_t)
                .with_scalar("violation", -worst);
            let mut report = VerificationReport::from_flag("find-xy-counterexample", true);
            report.insert_detail("violation", -worst);
            report.insert_detail("violating_t", worst_t);
            report.insert_detail("trials_used", (trial + 1) as f64);
            report.insert_detail("p", p);
            report.insert_detail("young_sv_margin", sv_report.worst_margin);
            report.insert_detail("young_sv_passed", sv_report.passed as u8 as f64);
            return Ok(report.with_witness(witness));
        }
    }
    let mut report = VerificationReport::from_flag("find-xy-counterexample", false);
    report.insert_detail("trials_used", seeds as f64);
    Ok(report)
}
