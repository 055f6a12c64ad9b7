//! Command-line front end: campaign execution, file-pair verification,
//! counterexample search, and a small demonstration run.
//!
//! Exit code is 0 exactly when every check that reflects a proven
//! statement passed (for `falsify`, when a witness was found).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use snl::campaign::{report_is_proven, run_campaign, verify_pair};
use snl::inequalities::find_xy_counterexample;
use snl::{CampaignConfig, Operator, ToleranceConfig, VerificationReport};

#[derive(Parser)]
#[command(
    name = "snl",
    about = "Singular-number laboratory: verify Young-type trace inequalities on random block algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonFlags {
    /// Campaign seed; the SNL_SEED environment variable overrides this.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of trials per (check, p) cell.
    #[arg(long)]
    trials: Option<u64>,
    /// Absolute tolerance floor.
    #[arg(long = "tol-abs")]
    tol_abs: Option<f64>,
    /// Relative tolerance factor.
    #[arg(long = "tol-rel")]
    tol_rel: Option<f64>,
    /// Write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format for --out.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification campaign from a config file, or the full check
    /// battery on one explicit operator pair.
    Verify {
        /// Campaign config (JSON). Omit to run the built-in default
        /// campaign when no operator files are given.
        #[arg(long, conflicts_with_all = ["x", "y", "p"])]
        config: Option<PathBuf>,
        /// Operator file for x.
        #[arg(long, requires = "y", requires = "p")]
        x: Option<PathBuf>,
        /// Operator file for y.
        #[arg(long)]
        y: Option<PathBuf>,
        /// Exponent p > 1 for the conjugate pair.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Search for a counterexample to the naive |xy| singular-value
    /// inequality.
    Falsify {
        /// Matrix dimension of the single-block algebra.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Number of random seeds to try.
        #[arg(long, default_value_t = 10_000)]
        seeds: u64,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Small fixed-seed showcase of the check battery.
    Demo,
}

fn env_seed() -> Option<u64> {
    std::env::var("SNL_SEED").ok().and_then(|s| s.parse().ok())
}

fn effective_seed(flag: Option<u64>, config_seed: u64) -> u64 {
    env_seed().or(flag).unwrap_or(config_seed)
}

fn tolerance_from(common: &CommonFlags, base: ToleranceConfig) -> anyhow::Result<ToleranceConfig> {
    Ok(ToleranceConfig::new(
        common.tol_abs.unwrap_or(base.abs_tol),
        common.tol_rel.unwrap_or(base.rel_tol),
    )?)
}

fn print_report_line(report: &VerificationReport) {
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    let tag = if report_is_proven(&report.name) {
        ""
    } else {
        " (informational)"
    };
    println!(
        "{verdict} {:<24} worst_margin = {:+.3e}{tag}",
        report.name, report.worst_margin
    );
}

fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("name,passed,worst_margin\n");
    for r in reports {
        out.push_str(&format!("{},{},{:e}\n", r.name, r.passed, r.worst_margin));
    }
    out
}

fn cmd_verify_campaign(config_path: Option<PathBuf>, common: &CommonFlags) -> anyhow::Result<bool> {
    let mut config = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading config {}", path.display()))?;
            CampaignConfig::from_json(&text).context("parsing campaign config")?
        }
        None => CampaignConfig::default(),
    };
    config.seed = effective_seed(common.seed, config.seed);
    if let Some(trials) = common.trials {
        config.trials = trials;
    }
    config.tolerance = tolerance_from(common, config.tolerance)?;

    let result = run_campaign(&config)?;
    for agg in &result.aggregates {
        let verdict = if agg.proven && agg.failures > 0 {
            "FAIL"
        } else {
            "PASS"
        };
        println!(
            "{verdict} {:<24} runs = {:<6} failures = {:<4} worst_margin = {:+.3e}",
            agg.check.to_string(),
            agg.runs,
            agg.failures,
            agg.worst_margin
        );
    }
    println!(
        "campaign finished in {:.2} s (seed {})",
        result.wall_time_secs, config.seed
    );
    if let Some(out) = &common.out {
        let payload = match common.format {
            OutputFormat::Json => result.to_json(),
            OutputFormat::Csv => result.to_csv(),
        };
        std::fs::write(out, payload).with_context(|| format!("writing {}", out.display()))?;
        println!("report written to {}", out.display());
    }
    Ok(result.all_proven_passed())
}

fn cmd_verify_pair(
    x_path: PathBuf,
    y_path: PathBuf,
    p: f64,
    common: &CommonFlags,
) -> anyhow::Result<bool> {
    let x = load_operator(&x_path)?;
    let y = load_operator(&y_path)?;
    let tol = tolerance_from(common, ToleranceConfig::default())?;
    let reports = verify_pair(&x, &y, p, &tol)?;
    for report in &reports {
        print_report_line(report);
    }
    let ok = reports
        .iter()
        .all(|r| r.passed || !report_is_proven(&r.name));
    if let Some(out) = &common.out {
        let payload = match common.format {
            OutputFormat::Json => serde_json::to_string_pretty(&reports)?,
            OutputFormat::Csv => reports_to_csv(&reports),
        };
        std::fs::write(out, payload).with_context(|| format!("writing {}", out.display()))?;
        println!("report written to {}", out.display());
    }
    Ok(ok)
}

fn load_operator(path: &PathBuf) -> anyhow::Result<Operator> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading operator file {}", path.display()))?;
    Operator::from_json(&text).with_context(|| format!("parsing operator {}", path.display()))
}

fn cmd_falsify(dim: usize, seeds: u64, common: &CommonFlags) -> anyhow::Result<bool> {
    let seed = effective_seed(common.seed, 17);
    let tol = tolerance_from(common, ToleranceConfig::default())?;
    let report = find_xy_counterexample(dim, seeds, seed, &tol)?;
    if report.passed {
        let details = &report.details;
        println!(
            "witness found after {} trials: p = {:.4}, violating t = {:.4}, violation = {:.3e}",
            details["trials_used"], details["p"], details["violating_t"], details["violation"],
        );
        println!(
            "the |xy*| form still holds on the witness (margin {:+.3e})",
            details["young_sv_margin"]
        );
    } else {
        println!("no violation of the |xy| variant found in {seeds} trials");
    }
    if let Some(out) = &common.out {
        let payload = match common.format {
            OutputFormat::Json => report.to_json(),
            OutputFormat::Csv => reports_to_csv(std::slice::from_ref(&report)),
        };
        std::fs::write(out, payload).with_context(|| format!("writing {}", out.display()))?;
        println!("witness report written to {}", out.display());
    }
    Ok(report.passed)
}

fn cmd_demo() -> anyhow::Result<bool> {
    use snl::inequalities::{check_agm, check_young_sv, check_young_trace_variants, ConjugatePair};
    use snl::snumbers::mu;
    use snl::{Operator, TracialAlgebra};

    let tol = ToleranceConfig::default();
    println!("-- singular values of diag(3, 1) on M_2 with unit weight --");
    let m2 = TracialAlgebra::factor(2)?;
    let h = Operator::diagonal(&m2, &[3.0, 1.0])?;
    let f = mu(&h);
    println!("breakpoints {:?}, values {:?}", f.breakpoints(), f.values());
    println!("integral = {} = trace of |h|", f.total_integral());

    println!("\n-- Young inequality on a diagonal pair, p = 2 --");
    let x = Operator::diagonal(&m2, &[4.0, 1.0])?;
    let y = Operator::diagonal(&m2, &[2.0, 1.0])?;
    let pq = ConjugatePair::from_p(2.0)?;
    print_report_line(&check_young_sv(&x, &y, &pq, &tol)?);
    print_report_line(&check_young_trace_variants(&x, &y, &pq, &tol)?);
    print_report_line(&check_agm(&x, &y, &tol)?);

    println!("\n-- small random campaign (25 trials, seed 1) --");
    let config = CampaignConfig {
        trials: 25,
        seed: effective_seed(None, 1),
        ..CampaignConfig::default()
    };
    let result = run_campaign(&config)?;
    for agg in &result.aggregates {
        println!(
            "{:<24} runs = {:<4} failures = {}",
            agg.check.to_string(),
            agg.runs,
            agg.failures
        );
    }
    Ok(result.all_proven_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            config,
            x,
            y,
            p,
            common,
        } => match (x, y, p) {
            (Some(x), Some(y), Some(p)) => cmd_verify_pair(x, y, p, &common),
            (None, None, None) => cmd_verify_campaign(config, &common),
            _ => Err(anyhow::anyhow!(
                "verify needs either --config, or all of --x, --y, --p"
            )),
        },
        Command::Falsify { dim, seeds, common } => cmd_falsify(dim, seeds, &common),
        Command::Demo => cmd_demo(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
