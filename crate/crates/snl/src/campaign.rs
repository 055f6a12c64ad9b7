//! Campaign driver: runs named checks over seeded random ensembles and
//! aggregates the outcomes into a deterministic report.
//!
//! Trials are independent: every `(check, p, trial)` cell derives its own
//! ChaCha stream from the campaign seed, so results do not depend on
//! execution order and identical configurations produce byte-identical
//! reports (apart from the wall-time field).

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{BlockSpec, Operator, ToleranceConfig, TracialAlgebra};
use crate::error::{Error, Result};
use crate::gen::{gen_operator, trial_rng, OperatorKind};
use crate::inequalities::{
    check_agm, check_compression_sweep, check_equality_sv, check_equality_trace,
    check_fenchel_young, check_young_sv, check_young_sv_xy, check_young_trace_variants,
    find_xy_counterexample, ConjugatePair, ConvexFunction, INVERTIBILITY_TOL,
};
use crate::majorization::{check_submajorization, check_young_preorder};
use crate::report::{VerificationReport, Witness};

/// Names of the runnable checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    YoungSv,
    YoungSvXy,
    YoungTrace,
    EqualityTrace,
    EqualitySv,
    Compression,
    Agm,
    FenchelYoung,
    Submajorization,
    YoungPreorder,
    DsCorrection,
    LogMajorization,
    MuDistance,
    TraceCommutation,
    FindXyCounterexample,
}

impl CheckName {
    pub const ALL: [CheckName; 15] = [
        CheckName::YoungSv,
        CheckName::YoungSvXy,
        CheckName::YoungTrace,
        CheckName::EqualityTrace,
        CheckName::EqualitySv,
        CheckName::Compression,
        CheckName::Agm,
        CheckName::FenchelYoung,
        CheckName::Submajorization,
        CheckName::YoungPreorder,
        CheckName::DsCorrection,
        CheckName::LogMajorization,
        CheckName::MuDistance,
        CheckName::TraceCommutation,
        CheckName::FindXyCounterexample,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::YoungSv => "young-sv",
            CheckName::YoungSvXy => "young-sv-xy",
            CheckName::YoungTrace => "young-trace",
            CheckName::EqualityTrace => "equality-trace",
            CheckName::EqualitySv => "equality-sv",
            CheckName::Compression => "compression",
            CheckName::Agm => "agm",
            CheckName::FenchelYoung => "fenchel-young",
            CheckName::Submajorization => "submajorization",
            CheckName::YoungPreorder => "young-preorder",
            CheckName::DsCorrection => "ds-correction",
            CheckName::LogMajorization => "log-majorization",
            CheckName::MuDistance => "mu-distance",
            CheckName::TraceCommutation => "trace-commutation",
            CheckName::FindXyCounterexample => "find-xy-counterexample",
        }
    }

    /// Whether a failure of this check falsifies a proven statement. The
    /// naive `|xy|` variant is expected to fail on some inputs; everything
    /// else (including the counterexample search, whose "pass" is finding
    /// a witness) must succeed on a healthy build.
    pub fn proven(&self) -> bool {
        !matches!(self, CheckName::YoungSvXy)
    }

    /// Checks restricted to single-block algebras.
    pub fn requires_factor(&self) -> bool {
        matches!(self, CheckName::YoungPreorder | CheckName::DsCorrection)
    }
}

impl std::fmt::Display for CheckName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown check name: {s}")))
    }
}

/// Full description of a campaign; serializable as the CLI config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: u64,
    pub block_specs: Vec<BlockSpec>,
    pub p_values: Vec<f64>,
    pub tolerance: ToleranceConfig,
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 17,
            trials: 500,
            block_specs: (2..=6).map(|dim| BlockSpec { dim, weight: 1.0 }).collect(),
            p_values: vec![1.1, 1.5, 2.0, 3.0, 10.0],
            tolerance: ToleranceConfig::default(),
            checks: vec![
                CheckName::YoungSv,
                CheckName::YoungTrace,
                CheckName::EqualityTrace,
                CheckName::EqualitySv,
                CheckName::Compression,
                CheckName::Agm,
                CheckName::FenchelYoung,
                CheckName::Submajorization,
                CheckName::LogMajorization,
                CheckName::MuDistance,
                CheckName::TraceCommutation,
            ],
            output_path: None,
        }
    }
}

impl CampaignConfig {
    pub fn algebra(&self) -> Result<TracialAlgebra> {
        let specs: Vec<(usize, f64)> = self.block_specs.iter().map(|b| (b.dim, b.weight)).collect();
        TracialAlgebra::new(&specs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidConfig("no checks requested".into()));
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidConfig("no p values".into()));
        }
        for &p in &self.p_values {
            if !(p > 1.0) || !p.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "p value {p} must be a finite real > 1"
                )));
            }
        }
        ToleranceConfig::new(self.tolerance.abs_tol, self.tolerance.rel_tol)?;
        let algebra = self.algebra()?;
        for check in &self.checks {
            if check.requires_factor() && !algebra.is_factor() {
                return Err(Error::InvalidConfig(format!(
                    "check {check} needs a single-block algebra, config has {} blocks",
                    algebra.n_blocks()
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Aggregate of all runs of one check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckAggregate {
    pub check: CheckName,
    pub proven: bool,
    pub runs: u64,
    pub failures: u64,
    pub worst_margin: f64,
    pub worst_trial: Option<u64>,
    pub worst_p: Option<f64>,
    pub worst_witness: Option<Witness>,
}

/// Outcome of a whole campaign: the config echo plus per-check aggregates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignResult {
    pub config: CampaignConfig,
    pub aggregates: Vec<CheckAggregate>,
    pub wall_time_secs: f64,
}

impl CampaignResult {
    /// Exit-code contract: true iff no check that reflects a proven
    /// statement recorded a failure.
    pub fn all_proven_passed(&self) -> bool {
        self.aggregates.iter().all(|a| !a.proven || a.failures == 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }

    /// Flat projection for spreadsheet triage.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,proven,runs,failures,worst_margin,worst_trial,worst_p\n");
        for a in &self.aggregates {
            out.push_str(&format!(
                "{},{},{},{},{:e},{},{}\n",
                a.check,
                a.proven,
                a.runs,
                a.failures,
                a.worst_margin,
                a.worst_trial.map_or(String::new(), |t| t.to_string()),
                a.worst_p.map_or(String::new(), |p| p.to_string()),
            ));
        }
        out
    }
}

fn stream_id(check_index: usize, p_index: usize) -> u64 {
    ((check_index as u64) << 16) | (p_index as u64 + 1)
}

/// Runs one check instance on operators derived from
/// `(seed, trial, stream)`, attaching the generated inputs as witness.
fn run_single(
    check: CheckName,
    algebra: &TracialAlgebra,
    pq: &ConjugatePair,
    seed: u64,
    trial: u64,
    stream: u64,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let mut rng = trial_rng(seed, trial, stream);
    match check {
        CheckName::YoungSv => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = gen_operator(&mut rng, algebra, OperatorKind::General);
            let report = check_young_sv(&x, &y, pq, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::YoungSvXy => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = gen_operator(&mut rng, algebra, OperatorKind::General);
            let report = check_young_sv_xy(&x, &y, pq, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::YoungTrace => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = gen_operator(&mut rng, algebra, OperatorKind::General);
            let report = check_young_trace_variants(&x, &y, pq, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::EqualityTrace => {
            let a = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let b = equality_partner(&mut rng, &a, pq, trial, tol)?;
            let report = check_equality_trace(&a, &b, pq, tol)?;
            Ok(report.with_witness(pair_witness(&a, &b, pq)))
        }
        CheckName::EqualitySv => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = if trial.is_multiple_of(2) {
                // Constructed equality case: y = w |x|^{p/q}.
                let w = gen_operator(&mut rng, algebra, OperatorKind::Unitary);
                w.multiply(&crate::spectral::abs_power(&x, pq.p() / pq.q()))?
            } else {
                gen_operator(&mut rng, algebra, OperatorKind::General)
            };
            let report = check_equality_sv(&x, &y, pq, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::Compression => {
            let a = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let b = gen_operator(&mut rng, algebra, OperatorKind::InvertiblePositive);
            // The lemma is stated for p in (1, 2]; one of (p, q) always is.
            let pq_small = if pq.p() <= 2.0 { *pq } else { pq.swapped() };
            let report = check_compression_sweep(&a, &b, &pq_small, tol)?;
            Ok(report.with_witness(pair_witness(&a, &b, &pq_small)))
        }
        CheckName::Agm => {
            let a = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let b = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let report = check_agm(&a, &b, tol)?;
            Ok(report.with_witness(pair_witness(&a, &b, pq)))
        }
        CheckName::FenchelYoung => {
            let a = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let b = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let f = ConvexFunction::power(pq.p())?;
            let report = check_fenchel_young(&a, &b, &f, tol)?;
            Ok(report.with_witness(pair_witness(&a, &b, pq)))
        }
        CheckName::Submajorization => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = gen_operator(&mut rng, algebra, OperatorKind::General);
            let report = check_submajorization(&x, &y, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::YoungPreorder => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = gen_operator(&mut rng, algebra, OperatorKind::General);
            let report = check_young_preorder(&x, &y, pq, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::DsCorrection => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let y = gen_operator(&mut rng, algebra, OperatorKind::General);
            let (_, report) = crate::majorization::doubly_stochastic_correction(&x, &y, pq, tol)?;
            Ok(report.with_witness(pair_witness(&x, &y, pq)))
        }
        CheckName::LogMajorization => {
            let a = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let b = gen_operator(&mut rng, algebra, OperatorKind::Positive);
            let report = crate::majorization::check_log_majorization(&a, &b, tol)?;
            Ok(report.with_witness(pair_witness(&a, &b, pq)))
        }
        CheckName::MuDistance => {
            let z1 = gen_operator(&mut rng, algebra, OperatorKind::General);
            let z2 = gen_operator(&mut rng, algebra, OperatorKind::General);
            let report = crate::snumbers::mu_distance_bound(&z1, &z2, tol)?;
            Ok(report.with_witness(pair_witness(&z1, &z2, pq)))
        }
        CheckName::TraceCommutation => {
            let x = gen_operator(&mut rng, algebra, OperatorKind::General);
            let k = 1 + (trial % 4) as u32;
            let report = crate::algebra::trace_commutation_check(&x, k, tol);
            Ok(report.with_witness(Witness::new().with_operator("x", &x)))
        }
        CheckName::FindXyCounterexample => {
            // Dispatched directly by run_campaign with the full trial
            // budget; reaching it through the per-trial path is a bug.
            unreachable!("counterexample search runs once per campaign")
        }
    }
}

/// One full-budget counterexample search on the largest block dimension.
fn run_falsification(
    algebra: &TracialAlgebra,
    seeds: u64,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    let dim = algebra
        .blocks()
        .iter()
        .map(|b| b.dim)
        .max()
        .unwrap_or(2)
        .max(2);
    find_xy_counterexample(dim, seeds, seed, tol)
}

/// Rotating construction for the equality-in-traces ensemble: exact
/// equality cases, commuting perturbations of them, and unrelated random
/// positives.
fn equality_partner(
    rng: &mut impl rand::Rng,
    a: &Operator,
    pq: &ConjugatePair,
    trial: u64,
    tol: &ToleranceConfig,
) -> Result<Operator> {
    let exact = crate::spectral::power_pos(a, pq.p() / pq.q(), tol)?;
    match trial % 3 {
        0 => Ok(exact),
        1 => exact.add(&Operator::identity(a.algebra()).scale_re(1e-2)),
        _ => Ok(gen_operator(rng, a.algebra(), OperatorKind::Positive)),
    }
}

fn pair_witness(x: &Operator, y: &Operator, pq: &ConjugatePair) -> Witness {
    Witness::new()
        .with_operator("x", x)
        .with_operator("y", y)
        .with_scalar("p", pq.p())
}

/// Executes the campaign and, if the config names an output path, writes
/// the JSON report there.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    config.validate()?;
    let algebra = config.algebra()?;
    let start = Instant::now();

    let mut aggregates = Vec::with_capacity(config.checks.len());
    for (ci, &check) in config.checks.iter().enumerate() {
        let mut agg = CheckAggregate {
            check,
            proven: check.proven(),
            runs: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            worst_trial: None,
            worst_p: None,
            worst_witness: None,
        };
        if check == CheckName::FindXyCounterexample {
            let report =
                run_falsification(&algebra, config.trials, config.seed, &config.tolerance)?;
            agg.runs = 1;
            agg.failures = (!report.passed) as u64;
            agg.worst_margin = report.worst_margin;
            agg.worst_trial = Some(0);
            agg.worst_witness = report.witness;
        } else {
            for (pi, &p) in config.p_values.iter().enumerate() {
                let pq = ConjugatePair::from_p(p)?;
                let stream = stream_id(ci, pi);
                for trial in 0..config.trials {
                    let report = run_single(
                        check,
                        &algebra,
                        &pq,
                        config.seed,
                        trial,
                        stream,
                        &config.tolerance,
                    )?;
                    agg.runs += 1;
                    if !report.passed {
                        agg.failures += 1;
                    }
                    if report.worst_margin < agg.worst_margin {
                        agg.worst_margin = report.worst_margin;
                        agg.worst_trial = Some(trial);
                        agg.worst_p = Some(p);
                        agg.worst_witness = report.witness;
                    }
                }
            }
        }
        aggregates.push(agg);
    }

    let result = CampaignResult {
        config: config.clone(),
        aggregates,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    if let Some(path) = &config.output_path {
        std::fs::write(path, result.to_json())?;
    }
    Ok(result)
}

/// The full check battery for one explicit operator pair, as run by the
/// file-verification CLI path. Checks that need positivity run on the
/// moduli `|x|, |y|`; the compression lemma joins in when its hypotheses
/// hold; the factor-only checks join in on single-block algebras.
pub fn verify_pair(
    x: &Operator,
    y: &Operator,
    p: f64,
    tol: &ToleranceConfig,
) -> Result<Vec<VerificationReport>> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let pq = ConjugatePair::from_p(p)?;
    let a = crate::spectral::abs_op(x);
    let b = crate::spectral::abs_op(y);

    let mut reports = vec![
        check_young_sv(x, y, &pq, tol)?,
        check_young_sv_xy(x, y, &pq, tol)?,
        check_young_trace_variants(x, y, &pq, tol)?,
        check_equality_sv(x, y, &pq, tol)?,
        check_submajorization(x, y, tol)?,
        crate::snumbers::mu_distance_bound(x, y, tol)?,
        crate::algebra::trace_commutation_check(x, 2, tol),
        check_equality_trace(&a, &b, &pq, tol)?,
        check_agm(&a, &b, tol)?,
        crate::majorization::check_log_majorization(&a, &b, tol)?,
        check_fenchel_young(&a, &b, &ConvexFunction::power(p)?, tol)?,
    ];

    let pq_small = if pq.p() <= 2.0 { pq } else { pq.swapped() };
    let b_min_eig = crate::spectral::eig_hermitian(&b, tol)?.min_eigenvalue();
    if b_min_eig > INVERTIBILITY_TOL * b.norm() {
        reports.push(check_compression_sweep(&a, &b, &pq_small, tol)?);
    }
    if x.algebra().is_factor() {
        reports.push(check_young_preorder(x, y, &pq, tol)?);
        let (_, ds) = crate::majorization::doubly_stochastic_correction(x, y, &pq, tol)?;
        reports.push(ds);
    }
    Ok(reports)
}

/// Paper-truth classification by report name, mirroring
/// [`CheckName::proven`] for battery output.
pub fn report_is_proven(name: &str) -> bool {
    name != "young-sv-xy"
}
