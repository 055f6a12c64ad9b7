//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Every tolerance is pinned in code; the ensembles are
//! seeded and deterministic.

mod common;

use std::time::Instant;

use snl::gen::{gen_operator, trial_rng, OperatorKind};
use snl::inequalities::{
    check_agm, check_compression_sweep, check_equality_trace, check_fenchel_young, check_young_sv,
    check_young_sv_xy, check_young_trace, check_young_trace_variants, find_xy_counterexample,
    young_rhs, ConjugatePair, ConvexFunction, Dagger,
};
use snl::majorization::{
    check_submajorization, check_young_preorder, doubly_stochastic_correction,
};
use snl::snumbers::mu;
use snl::spectral::{abs_op, power_pos, ScalarFunction};
use snl::{Operator, StepFunction, ToleranceConfig, TracialAlgebra};

const P_GRID: [f64; 5] = [1.1, 1.5, 2.0, 3.0, 10.0];

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn conclude(criterion: &str, ok: bool, detail: &str) {
    println!(
        "{} criterion {criterion}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_young_singular_values_ensemble() {
    let start = Instant::now();
    let t = tol();
    let mut violations = 0u32;
    let mut runs = 0u32;
    let mut worst = f64::INFINITY;
    for dim in 2..=6usize {
        let algebra = TracialAlgebra::factor(dim).unwrap();
        for (pi, &p) in P_GRID.iter().enumerate() {
            let pq = ConjugatePair::from_p(p).unwrap();
            for trial in 0..500u64 {
                let mut rng = trial_rng(0xC1, trial, (dim * 8 + pi) as u64);
                let x = gen_operator(&mut rng, &algebra, OperatorKind::General);
                let y = gen_operator(&mut rng, &algebra, OperatorKind::General);
                let report = check_young_sv(&x, &y, &pq, &t).unwrap();
                runs += 1;
                worst = worst.min(report.worst_margin);
                if !report.passed {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = violations == 0 && elapsed <= 60.0;
    conclude(
        "01 (Young in singular values)",
        ok,
        &format!("{runs} runs, {violations} violations, worst margin {worst:.3e}, {elapsed:.1} s"),
    );
}

#[test]
fn criterion_02_tracial_young_all_dagger_variants() {
    let t = tol();
    let mut violations = 0u32;
    let mut runs = 0u32;
    let mut worst_spread = 0.0f64;
    for dim in 2..=6usize {
        let algebra = TracialAlgebra::factor(dim).unwrap();
        for (pi, &p) in P_GRID.iter().enumerate() {
            let pq = ConjugatePair::from_p(p).unwrap();
            for trial in 0..500u64 {
                let mut rng = trial_rng(0xC2, trial, (dim * 8 + pi) as u64);
                let x = gen_operator(&mut rng, &algebra, OperatorKind::General);
                let y = gen_operator(&mut rng, &algebra, OperatorKind::General);
                let report = check_young_trace_variants(&x, &y, &pq, &t).unwrap();
                runs += 1;
                let spread = report.details["rhs_relative_spread"];
                worst_spread = worst_spread.max(spread);
                if !report.passed || spread > 1e-9 {
                    violations += 1;
                }
            }
        }
    }
    conclude(
        "02 (tracial Young, 16 dagger variants)",
        violations == 0,
        &format!("{runs} runs, {violations} violations, worst RHS spread {worst_spread:.3e}"),
    );
}

#[test]
fn criterion_03_equality_biconditional() {
    let t = tol();
    let mut equal_flagged = 0u32;
    let mut unequal_flagged = 0u32;
    let mut disagreements = 0u32;
    for trial in 0..200u64 {
        let dim = 2 + (trial % 5) as usize;
        let algebra = TracialAlgebra::factor(dim).unwrap();
        let pq = ConjugatePair::from_p(P_GRID[(trial % 5) as usize]).unwrap();
        let mut rng = trial_rng(0xC3, trial, 0);
        let a = gen_operator(&mut rng, &algebra, OperatorKind::Positive);
        let b_exact = power_pos(&a, pq.p() / pq.q(), &t).unwrap();

        let r = check_equality_trace(&a, &b_exact, &pq, &t).unwrap();
        if !r.passed {
            disagreements += 1;
        }
        if r.details["gap_small"] == 1.0 && r.details["dist_small"] == 1.0 {
            equal_flagged += 1;
        }

        let b_pert = b_exact
            .add(&Operator::identity(&algebra).scale_re(1e-2))
            .unwrap();
        let r = check_equality_trace(&a, &b_pert, &pq, &t).unwrap();
        if !r.passed {
            disagreements += 1;
        }
        if r.details["gap_small"] == 0.0 && r.details["dist_small"] == 0.0 {
            unequal_flagged += 1;
        }
    }
    let ok = equal_flagged == 200 && unequal_flagged == 200 && disagreements == 0;
    conclude(
        "03 (equality-in-traces biconditional)",
        ok,
        &format!(
            "{equal_flagged}/200 equality pairs flagged equal, {unequal_flagged}/200 perturbed pairs flagged strictly unequal, {disagreements} boolean disagreements"
        ),
    );
}

#[test]
fn criterion_04_projection_mu_is_exact_indicator() {
    let pool = common::algebra_pool();
    let mut worst_breakpoint_err = 0.0f64;
    let mut worst_value_err = 0.0f64;
    let mut checked = 0u32;
    for trial in 0..100u64 {
        let algebra = &pool[(trial % pool.len() as u64) as usize];
        let mut rng = trial_rng(0xC4, trial, 0);
        let f_op = gen_operator(&mut rng, algebra, OperatorKind::Projection);
        let f = mu(&f_op);
        let mass = f_op.trace().re;
        checked += 1;
        if mass <= 0.0 {
            worst_breakpoint_err = worst_breakpoint_err.max(f.support_end());
            continue;
        }
        worst_breakpoint_err = worst_breakpoint_err.max((f.support_end() - mass).abs());
        for v in f.values() {
            worst_value_err = worst_value_err.max((v - 1.0).abs());
        }
    }
    let ok = worst_breakpoint_err <= 1e-12 && worst_value_err <= 1e-12;
    conclude(
        "04 (projection singular values are indicators)",
        ok,
        &format!(
            "{checked} projections, worst breakpoint error {worst_breakpoint_err:.3e}, worst value error {worst_value_err:.3e}"
        ),
    );
}

#[test]
fn criterion_05_functional_calculus_on_mu() {
    let t = tol();
    let pool = common::algebra_pool();
    let mut worst_rel = 0.0f64;
    for trial in 0..200u64 {
        let algebra = &pool[(trial % pool.len() as u64) as usize];
        let mut rng = trial_rng(0xC5, trial, 0);
        let h = gen_operator(&mut rng, algebra, OperatorKind::Positive);
        for &r in &[0.5, 2.0, 3.0] {
            let via_transform = mu(&h)
                .transform(&ScalarFunction::power(r).unwrap())
                .unwrap();
            let via_power = mu(&power_pos(&h, r, &t).unwrap());
            let scale = 1.0 + via_power.eval(0.0).max(via_transform.eval(0.0));
            let rel = StepFunction::sup_distance(&via_transform, &via_power) / scale;
            worst_rel = worst_rel.max(rel);
        }
    }
    conclude(
        "05 (functional calculus through mu)",
        worst_rel <= 1e-9,
        &format!("600 comparisons, worst relative deviation {worst_rel:.3e}"),
    );
}

#[test]
fn criterion_06_trace_integral_identity() {
    let pool = common::algebra_pool();
    let mut worst_rel = 0.0f64;
    for trial in 0..500u64 {
        let algebra = &pool[(trial % pool.len() as u64) as usize];
        let mut rng = trial_rng(0xC6, trial, 0);
        let z = gen_operator(&mut rng, algebra, OperatorKind::General);
        let integral = mu(&z).total_integral();
        let trace = abs_op(&z).trace().re;
        worst_rel = worst_rel.max((integral - trace).abs() / trace.abs().max(1e-300));
    }
    conclude(
        "06 (trace integral identity)",
        worst_rel <= 1e-10,
        &format!("500 operators, worst relative gap {worst_rel:.3e}"),
    );
}

#[test]
fn criterion_07_compression_lemma() {
    let t = tol();
    let p_small = [1.1, 1.3, 1.5, 1.7, 1.9, 2.0];
    let mut failures = 0u32;
    let mut worst = f64::INFINITY;
    for trial in 0..200u64 {
        let dim = 2 + (trial % 5) as usize;
        let algebra = TracialAlgebra::factor(dim).unwrap();
        let pq = ConjugatePair::from_p(p_small[(trial % 6) as usize]).unwrap();
        let mut rng = trial_rng(0xC7, trial, 0);
        let a = gen_operator(&mut rng, &algebra, OperatorKind::Positive);
        let b = gen_operator(&mut rng, &algebra, OperatorKind::InvertiblePositive);
        let report = check_compression_sweep(&a, &b, &pq, &t).unwrap();
        worst = worst.min(report.worst_margin);
        if !report.passed || report.details["equivalent"] != 1.0 {
            failures += 1;
        }
    }
    conclude(
        "07 (compression lemma)",
        failures == 0,
        &format!("200 sweeps, {failures} failures, worst margin {worst:.3e}"),
    );
}

#[test]
fn criterion_08_agm_chain() {
    let t = tol();
    let pool = common::algebra_pool();
    let mut failures = 0u32;
    for trial in 0..500u64 {
        let algebra = &pool[(trial % pool.len() as u64) as usize];
        let mut rng = trial_rng(0xC8, trial, 0);
        let a = gen_operator(&mut rng, algebra, OperatorKind::Positive);
        let b = gen_operator(&mut rng, algebra, OperatorKind::Positive);
        let report = check_agm(&a, &b, &t).unwrap();
        let slack = 1e-12 + 1e-9 * report.details["arithmetic_mean"].abs();
        let chain_ok = report.details["tau_sqrt_ab"] <= report.details["geometric_mean"] + slack
            && report.details["geometric_mean"] <= report.details["arithmetic_mean"] + slack;
        if !report.passed || !chain_ok {
            failures += 1;
        }
    }
    conclude(
        "08 (arithmetic-geometric mean chain)",
        failures == 0,
        &format!("500 positive pairs, {failures} failures"),
    );
}

#[test]
fn criterion_09_product_submajorization() {
    let t = tol();
    let pool = common::algebra_pool();
    let mut failures = 0u32;
    let mut worst = f64::INFINITY;
    for trial in 0..500u64 {
        let algebra = &pool[(trial % pool.len() as u64) as usize];
        let mut rng = trial_rng(0xC9, trial, 0);
        let x = gen_operator(&mut rng, algebra, OperatorKind::General);
        let y = gen_operator(&mut rng, algebra, OperatorKind::General);
        let report = check_submajorization(&x, &y, &t).unwrap();
        worst = worst.min(report.worst_margin);
        if !report.passed {
            failures += 1;
        }
    }
    conclude(
        "09 (weak majorization of products)",
        failures == 0,
        &format!("500 pairs, {failures} failures, worst margin {worst:.3e}"),
    );
}

#[test]
fn criterion_10_spectral_preorder_and_correction() {
    let t = tol();
    let mut failures = 0u32;
    let mut worst_unitary = 0.0f64;
    let mut worst_loewner = f64::INFINITY;
    for trial in 0..200u64 {
        let dim = 2 + (trial % 5) as usize;
        let algebra = TracialAlgebra::factor(dim).unwrap();
        let pq = ConjugatePair::from_p(P_GRID[(trial % 5) as usize]).unwrap();
        let mut rng = trial_rng(0xCA, trial, 0);
        let x = gen_operator(&mut rng, &algebra, OperatorKind::General);
        let y = gen_operator(&mut rng, &algebra, OperatorKind::General);

        let preorder = check_young_preorder(&x, &y, &pq, &t).unwrap();
        let (_, correction) = doubly_stochastic_correction(&x, &y, &pq, &t).unwrap();
        let h_norm = young_rhs(&x, &y, &pq).unwrap().norm();
        let unitary_defect = correction.details["unitary_defect"];
        let min_eig = correction.details["min_eig_difference"];
        worst_unitary = worst_unitary.max(unitary_defect);
        worst_loewner = worst_loewner.min(min_eig / h_norm);
        if !preorder.passed || unitary_defect > 1e-9 || min_eig < -1e-9 * h_norm {
            failures += 1;
        }
    }
    conclude(
        "10 (spectral pre-order and unitary correction)",
        failures == 0,
        &format!(
            "200 factor trials, {failures} failures, worst unitary defect {worst_unitary:.3e}, worst normalized Loewner eigenvalue {worst_loewner:.3e}"
        ),
    );
}

#[test]
fn criterion_11_counterexample_search_and_round_trip() {
    let t = tol();
    let report = find_xy_counterexample(2, 10_000, 0xCB, &t).unwrap();
    let found = report.passed;
    let mut round_trip_ok = false;
    let mut xy_fails = false;
    let mut xystar_passes = false;
    if let Some(witness) = &report.witness {
        let p = witness.scalars["p"];
        let pq = ConjugatePair::from_p(p).unwrap();
        // Serialize the witness operators to the wire format and back.
        let x_json = serde_json::to_string(&witness.operators["x"]).unwrap();
        let y_json = serde_json::to_string(&witness.operators["y"]).unwrap();
        let x = Operator::from_json(&x_json).unwrap();
        let y = Operator::from_json(&y_json).unwrap();
        round_trip_ok = x.to_json() == x_json && y.to_json() == y_json;
        xy_fails = !check_young_sv_xy(&x, &y, &pq, &t).unwrap().passed;
        xystar_passes = check_young_sv(&x, &y, &pq, &t).unwrap().passed;
    }
    let ok = found && round_trip_ok && xy_fails && xystar_passes;
    conclude(
        "11 (naive |xy| counterexample exists)",
        ok,
        &format!(
            "witness found = {found}, bit-exact round trip = {round_trip_ok}, |xy| fails = {xy_fails}, |xy*| passes = {xystar_passes}, trials used = {}",
            report.details.get("trials_used").copied().unwrap_or(f64::NAN)
        ),
    );
}

#[test]
fn criterion_12_fenchel_young() {
    let t = tol();

    // Power form reproduces the plain tracial Young margins.
    let mut worst_margin_gap = 0.0f64;
    for trial in 0..100u64 {
        let dim = 2 + (trial % 5) as usize;
        let algebra = TracialAlgebra::factor(dim).unwrap();
        let p = P_GRID[(trial % 5) as usize];
        let pq = ConjugatePair::from_p(p).unwrap();
        let mut rng = trial_rng(0xCC, trial, 0);
        let a = gen_operator(&mut rng, &algebra, OperatorKind::Positive);
        let b = gen_operator(&mut rng, &algebra, OperatorKind::Positive);
        let fy = check_fenchel_young(&a, &b, &ConvexFunction::power(p).unwrap(), &t).unwrap();
        let yt = check_young_trace(&a, &b, &pq, Dagger::Plain, Dagger::Plain, &t).unwrap();
        let gap = (fy.worst_margin - yt.worst_margin).abs() / (1.0 + yt.worst_margin.abs());
        worst_margin_gap = worst_margin_gap.max(gap);
    }

    // Grid form on commuting (diagonal) pairs against the eigenvalue-wise
    // scalar brute force with the exact conjugate of F(t) = e^t - 1 - t,
    // namely F*(r) = (1 + r) ln(1 + r) - r.
    let mut grid_ok = true;
    let mut worst_excess = 0.0f64;
    for trial in 0..50u64 {
        let dim = 2 + (trial % 4) as usize;
        let algebra = TracialAlgebra::factor(dim).unwrap();
        let mut rng = trial_rng(0xCD, trial, 1);
        let diag_a: Vec<f64> = (0..dim)
            .map(|_| rand::Rng::random_range(&mut rng, 0.05..2.0))
            .collect();
        let diag_b: Vec<f64> = (0..dim)
            .map(|_| rand::Rng::random_range(&mut rng, 0.05..2.0))
            .collect();
        let a = Operator::diagonal(&algebra, &diag_a).unwrap();
        let b = Operator::diagonal(&algebra, &diag_b).unwrap();

        let spectrum_max = diag_a.iter().chain(&diag_b).fold(0.0f64, |m, &v| m.max(v));
        let t_max = 2.0 * spectrum_max;
        let points = 2048;
        let f = ConvexFunction::from_samples(
            |u| u.exp() - 1.0 - u,
            t_max,
            points,
            (0.0, t_max.exp() - 1.0),
        )
        .unwrap();
        let report = check_fenchel_young(&a, &b, &f, &t).unwrap();

        let oracle_margin: f64 = diag_a
            .iter()
            .zip(&diag_b)
            .map(|(&alpha, &beta)| {
                let f_a = alpha.exp() - 1.0 - alpha;
                let fstar_b = (1.0 + beta) * (1.0 + beta).ln() - beta;
                f_a + fstar_b - alpha * beta
            })
            .sum();

        let spacing = f.grid_spacing();
        let reported_grid_error = report.details["grid_error"];
        // F is evaluated through a linear interpolant (overshoot at most
        // spacing^2 / 8 * sup F'' per eigenvalue), and the grid conjugate
        // undershoots by at most spacing * r; the check already adds the
        // reported grid error for the latter.
        let interp_bound = spacing * spacing / 8.0 * t_max.exp() * algebra.total_trace();
        let diff = report.worst_margin - report.details["grid_error"] - oracle_margin;
        let bound = reported_grid_error + interp_bound + 1e-9 * (1.0 + oracle_margin.abs());
        if diff.abs() > bound || !report.passed {
            grid_ok = false;
        }
        worst_excess = worst_excess.max(diff.abs());
    }

    let ok = worst_margin_gap <= 1e-9 && grid_ok;
    conclude(
        "12 (Fenchel-Young)",
        ok,
        &format!(
            "power-form margin gap {worst_margin_gap:.3e}, grid-form oracle deviation {worst_excess:.3e} within reported grid error"
        ),
    );
}

#[test]
fn criterion_13_variational_principle_oracle() {
    let algebras: Vec<TracialAlgebra> = vec![
        TracialAlgebra::new(&[(2, 1.0), (3, 1.0)]).unwrap(),
        TracialAlgebra::new(&[(6, 1.0)]).unwrap(),
        TracialAlgebra::new(&[(2, 1.0), (2, 1.0), (2, 1.0)]).unwrap(),
        TracialAlgebra::new(&[(1, 1.0), (4, 1.0)]).unwrap(),
        TracialAlgebra::new(&[(3, 1.0), (3, 1.0)]).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut runs = 0u32;
    for trial in 0..60u64 {
        let algebra = &algebras[(trial % algebras.len() as u64) as usize];
        let n = algebra.total_dim();
        let mut rng = trial_rng(0xCE, trial, 0);
        // Quantized entries force cross-block ties and zeros.
        let diag: Vec<f64> = (0..n)
            .map(|_| f64::from(rand::Rng::random_range(&mut rng, 0u32..12)) * 0.25)
            .collect();
        let h = Operator::diagonal(algebra, &diag).unwrap();
        let f = mu(&h);
        for t in 0..=n {
            let oracle = common::variational_mu_diagonal(&diag, t);
            let lib = f.eval(t as f64);
            worst = worst.max((oracle - lib).abs());
            runs += 1;
        }
    }
    // The oracle also dominates mu for non-diagonal Hermitian input, where
    // coordinate projections are a strict subset of all projections.
    let mut domination_ok = true;
    for trial in 0..5u64 {
        let algebra = TracialAlgebra::new(&[(2, 1.0), (2, 1.0)]).unwrap();
        let mut rng = trial_rng(0xCF, trial, 0);
        let h = gen_operator(&mut rng, &algebra, OperatorKind::Positive);
        let f = mu(&h);
        for t in 0..=algebra.total_dim() {
            let upper = common::variational_upper_bound(&h, t);
            if f.eval(t as f64) > upper + 1e-8 * (1.0 + upper) {
                domination_ok = false;
            }
        }
    }
    let ok = worst <= 1e-10 && domination_ok;
    conclude(
        "13 (variational principle oracle)",
        ok,
        &format!("{runs} breakpoint evaluations, worst deviation {worst:.3e}, upper-bound domination = {domination_ok}"),
    );
}
