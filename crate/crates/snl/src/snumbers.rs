//! Generalized singular-value functions.
//!
//! For an operator `z` in a block algebra, `mu_z` is the nonincreasing,
//! right-continuous rearrangement of the singular values of `z`, where the
//! singular values of block `k` each carry mass equal to the block's trace
//! weight. On this model `mu_h(t) = min { s : tau(p^h(s, inf)) <= t }`
//! holds exactly, and everything here is a finite computation on step
//! functions: exact rectangle integrals, pointwise transforms, and the
//! log-integral `Lambda_h(s) = exp(int_0^s log mu_h)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Operator, ToleranceConfig};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::spectral::{self, ScalarFunction, RANK_TOL};

/// Right-continuous, nonincreasing, compactly supported step function on
/// `[0, inf)` in canonical form: `breakpoints[0] = 0`, the function takes
/// `values[i] > 0` on `[breakpoints[i], breakpoints[i+1])`, adjacent values
/// are strictly decreasing, and the function is zero from the last
/// breakpoint on. The zero function is `breakpoints = [0]`, `values = []`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunctionJson", into = "StepFunctionJson")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct StepFunctionJson {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl From<StepFunction> for StepFunctionJson {
    fn from(f: StepFunction) -> Self {
        StepFunctionJson {
            breakpoints: f.breakpoints,
            values: f.values,
        }
    }
}

impl TryFrom<StepFunctionJson> for StepFunction {
    type Error = Error;

    fn try_from(json: StepFunctionJson) -> Result<StepFunction> {
        StepFunction::new(json.breakpoints, json.values)
    }
}

impl StepFunction {
    /// Identically zero function.
    pub fn zero() -> StepFunction {
        StepFunction {
            breakpoints: vec![0.0],
            values: vec![],
        }
    }

    /// Validates canonical form: see the type-level description.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<StepFunction> {
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints do not frame {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.first() != Some(&0.0) {
            return Err(Error::InvalidStepFunction(
                "first breakpoint must be 0".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::InvalidStepFunction(
                    "breakpoints must be finite and strictly increasing".into(),
                ));
            }
        }
        for w in values.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::InvalidStepFunction(
                    "values must be strictly decreasing".into(),
                ));
            }
        }
        if let Some(last) = values.last() {
            if !(*last > 0.0) {
                return Err(Error::InvalidStepFunction(
                    "values must be positive (the zero tail is implicit)".into(),
                ));
            }
        }
        if let Some(first) = values.first() {
            if !first.is_finite() {
                return Err(Error::InvalidStepFunction("non-finite value".into()));
            }
        }
        Ok(StepFunction {
            breakpoints,
            values,
        })
    }

    /// Builds the canonical form from `(value, mass)` levels sorted by
    /// descending value: equal adjacent values merge, zero values feed the
    /// implicit tail.
    pub(crate) fn from_levels(levels: impl IntoIterator<Item = (f64, f64)>) -> StepFunction {
        let mut breakpoints = vec![0.0];
        let mut values: Vec<f64> = Vec::new();
        let mut cursor = 0.0f64;
        for (value, mass) in levels {
            debug_assert!(mass > 0.0);
            if let Some(last) = values.last() {
                debug_assert!(
                    value <= *last,
                    "levels must arrive in descending value order"
                );
            }
            if value <= 0.0 {
                break;
            }
            cursor += mass;
            if values.last() == Some(&value) {
                // Merge: extend the current step.
                *breakpoints.last_mut().unwrap() = cursor;
            } else {
                values.push(value);
                breakpoints.push(cursor);
            }
        }
        StepFunction {
            breakpoints,
            values,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// End of the support: the function is zero on `[support_end, inf)`.
    pub fn support_end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Right-continuous evaluation; `t` must be nonnegative.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "step functions live on [0, inf), got t = {t}");
        // Index of the interval [b_i, b_{i+1}) containing t.
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        if idx == 0 || idx > self.values.len() {
            0.0
        } else {
            self.values[idx - 1]
        }
    }

    /// Exact `int_0^s f`, a finite sum of rectangles; `s` may be infinite.
    pub fn integrate(&self, s: f64) -> f64 {
        assert!(s >= 0.0, "integration endpoint must be nonnegative");
        let mut total = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            let lo = self.breakpoints[i];
            let hi = self.breakpoints[i + 1].min(s);
            if hi <= lo {
                break;
            }
            total += v * (hi - lo);
        }
        total
    }

    pub fn total_integral(&self) -> f64 {
        self.integrate(f64::INFINITY)
    }

    /// Pointwise `psi o f`, re-canonicalized. Requires `psi(0) = 0` and
    /// `psi` nondecreasing so the composition is again a canonical step
    /// function.
    pub fn transform(&self, psi: &ScalarFunction) -> Result<StepFunction> {
        let upper = self.values.first().copied().unwrap_or(0.0);
        psi.validate_monotone_zero(upper)?;
        let levels = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| (psi.eval(v), self.breakpoints[i + 1] - self.breakpoints[i]));
        Ok(StepFunction::from_levels(levels))
    }

    /// Merged breakpoint set of several step functions, sorted and deduped.
    pub fn merged_breakpoints(fns: &[&StepFunction]) -> Vec<f64> {
        let mut pts: Vec<f64> = fns
            .iter()
            .flat_map(|f| f.breakpoints.iter().copied())
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// Pointwise combination on the common refinement. The combiner must
    /// preserve "nonincreasing and nonnegative" (products and convex
    /// averages of such functions do).
    pub(crate) fn zip_with(
        f: &StepFunction,
        g: &StepFunction,
        op: impl Fn(f64, f64) -> f64,
    ) -> StepFunction {
        let pts = StepFunction::merged_breakpoints(&[f, g]);
        let mut levels = Vec::with_capacity(pts.len());
        for w in pts.windows(2) {
            levels.push((op(f.eval(w[0]), g.eval(w[0])), w[1] - w[0]));
        }
        // Levels may contain equal neighbours; from_levels merges them.
        StepFunction::from_levels(levels)
    }

    /// Pointwise product.
    pub fn product(f: &StepFunction, g: &StepFunction) -> StepFunction {
        StepFunction::zip_with(f, g, |a, b| a * b)
    }

    /// Pointwise average `(f + g)/2`.
    pub fn average(f: &StepFunction, g: &StepFunction) -> StepFunction {
        StepFunction::zip_with(f, g, |a, b| 0.5 * (a + b))
    }

    /// Pointwise maximum.
    pub fn pointwise_max(f: &StepFunction, g: &StepFunction) -> StepFunction {
        StepFunction::zip_with(f, g, f64::max)
    }

    /// Evaluation points for pointwise comparisons: the left endpoints of
    /// all intervals of the common refinement wider than an accumulation
    /// guard, plus the final breakpoint (where both functions have reached
    /// their zero tails).
    ///
    /// Hair-width intervals appear when two functions carry the same total
    /// mass accumulated in different orders, leaving breakpoints that
    /// differ in the last bits; comparing inside such a sliver would
    /// manufacture a value-sized discrepancy out of rounding.
    pub fn comparison_points(f: &StepFunction, g: &StepFunction) -> Vec<f64> {
        let pts = StepFunction::merged_breakpoints(&[f, g]);
        let last = *pts.last().unwrap();
        let guard = 1e-12 * (1.0 + last);
        let mut out: Vec<f64> = pts
            .windows(2)
            .filter(|w| w[1] - w[0] > guard)
            .map(|w| w[0])
            .collect();
        out.push(last);
        out
    }

    /// `sup_t |f(t) - g(t)|` over the comparison points; both sides are
    /// constant between merged breakpoints.
    pub fn sup_distance(f: &StepFunction, g: &StepFunction) -> f64 {
        StepFunction::comparison_points(f, g)
            .iter()
            .map(|&t| (f.eval(t) - g.eval(t)).abs())
            .fold(0.0, f64::max)
    }

    /// `min_t (g(t) - f(t))` over the comparison points; nonnegative iff
    /// `f <= g` pointwise.
    pub fn min_margin(f: &StepFunction, g: &StepFunction) -> f64 {
        StepFunction::comparison_points(f, g)
            .iter()
            .map(|&t| g.eval(t) - f.eval(t))
            .fold(f64::INFINITY, f64::min)
    }
}

/// The generalized singular-value function of `z`.
///
/// Singular values come from the one-sided Jacobi SVD of each block; values
/// below `RANK_TOL` times the global largest are treated as exact zeros, so
/// the function of a projection is exactly the indicator of `[0, tau(f))`.
pub fn mu(z: &Operator) -> StepFunction {
    let svd = crate::spectral::operator_svd(z).expect("svd of finite operator");
    let cutoff = RANK_TOL * svd.max_sigma();
    let mut levels: Vec<(f64, f64)> = Vec::with_capacity(z.algebra().total_dim());
    for (spec, block) in z.algebra().blocks().iter().zip(&svd.blocks) {
        for &sigma in &block.sigma {
            let v = if sigma <= cutoff { 0.0 } else { sigma };
            levels.push((v, spec.weight));
        }
    }
    levels.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    StepFunction::from_levels(levels)
}

/// `Lambda_h(s) = exp(int_0^s log mu_h(t) dt)` for positive `h` and
/// `0 < s < tau(1)`. If `mu_h` vanishes on a positive-measure part of
/// `[0, s)` the value is exactly 0.
pub fn lambda_fn(h: &Operator, s: f64, tol: &ToleranceConfig) -> Result<f64> {
    let dec = spectral::eig_hermitian(h, tol)?;
    let min_eig = dec.min_eigenvalue();
    if min_eig < -tol.slack(dec.max_abs_eigenvalue()) {
        return Err(Error::NotPositive { min_eig });
    }
    let upper = h.algebra().total_trace();
    if !(s > 0.0) || !(s < upper) {
        return Err(Error::OutOfDomain {
            value: s,
            lo: 0.0,
            hi: upper,
        });
    }
    Ok(log_integral_exp(&mu(h), s))
}

/// The same log-integral on a bare step function; shared with the
/// log-majorization checks.
pub(crate) fn log_integral_exp(f: &StepFunction, s: f64) -> f64 {
    if s > f.support_end() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        let lo = f.breakpoints()[i];
        let hi = f.breakpoints()[i + 1].min(s);
        if hi <= lo {
            break;
        }
        log_sum += v.ln() * (hi - lo);
    }
    log_sum.exp()
}

/// Checks the Lipschitz dependence of `mu` on its argument:
/// `sup_t |mu_{z1}(t) - mu_{z2}(t)| <= |z1 - z2|`.
pub fn mu_distance_bound(
    z1: &Operator,
    z2: &Operator,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let diff_norm = z1.sub(z2)?.norm();
    let sup = StepFunction::sup_distance(&mu(z1), &mu(z2));
    let scale = z1.norm().max(z2.norm());
    let mut report = VerificationReport::from_margin("mu-distance", diff_norm - sup, scale, tol);
    report.insert_detail("sup_difference", sup);
    report.insert_detail("operator_distance", diff_norm);
    Ok(report)
}
