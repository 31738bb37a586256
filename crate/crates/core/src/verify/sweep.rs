use std::io::Write;

use rayon::prelude::*;

use super::checks::*;
use crate::error::{Error, Result};
use crate::modforms::{f1_coefficients, SeriesZ};
use crate::residue::{primes_in, ContextOptions, PrimeContext, DEFAULT_GAMMA_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::BadArgument(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub pmin: u64,
    pub pmax: u64,
    pub checks: Vec<CheckKind>,
    /// Precision of the Gamma-route checks.
    pub precision: u32,
    pub threads: usize,
    /// Gamma table budget in entries.
    pub gamma_budget: u64,
    /// Keep wall-clock times in the rows; otherwise they are zeroed.
    pub timings: bool,
}

impl SweepConfig {
    pub fn new(pmin: u64, pmax: u64, checks: Vec<CheckKind>) -> Self {
        SweepConfig { pmin, pmax, checks, precision: 2, threads: 0, gamma_budget: DEFAULT_GAMMA_BUDGET, timings: false }
    }
}

fn failed_row(ctx: &PrimeContext, id: &str, e: &Error) -> CheckResult {
    CheckResult {
        prime: ctx.p(),
        class_mod_12: ctx.p() % 12,
        check_id: id.to_string(),
        lhs: format!("error: {e}"),
        rhs: String::new(),
        precision: ctx.precision(),
        pass: false,
        runtime_ms: 0,
    }
}

fn outcome(ctx: &PrimeContext, id: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| failed_row(ctx, id, &e))
}

fn run_prime(cfg: &SweepConfig, p: u64, series: &SeriesZ) -> Result<Vec<CheckResult>> {
    let applicable: Vec<CheckKind> = cfg.checks.iter().copied().filter(|k| k.applies(p)).collect();
    let gamma_ctx = if applicable.iter().any(|k| k.uses_gamma()) {
        let opts = ContextOptions { with_gamma: true, gamma_budget: cfg.gamma_budget };
        Some(PrimeContext::with_options(p, cfg.precision, opts)?)
    } else {
        None
    };
    let needs_exact = applicable.iter().any(|k| !matches!(k, CheckKind::Prop | CheckKind::Intro | CheckKind::Lemmas));
    let exact_ctx = if needs_exact { Some(PrimeContext::new(p, max_precision(p))?) } else { None };
    let (g, x) = (gamma_ctx.as_ref(), exact_ctx.as_ref());
    let mut rows = Vec::new();
    for kind in applicable {
        match kind {
            CheckKind::Master => rows.push(outcome(x.unwrap(), "master", check_master_identity(x.unwrap()))),
            CheckKind::Thm1 => {
                rows.push(outcome(g.unwrap(), "thm1", check_thm1(g.unwrap())));
                rows.push(outcome(x.unwrap(), "thm1-jacobi", check_thm1_jacobi(x.unwrap())));
            }
            CheckKind::Thm2 => {
                rows.push(outcome(g.unwrap(), "thm2", check_thm2(g.unwrap())));
                rows.push(outcome(x.unwrap(), "thm2-jacobi", check_thm2_jacobi(x.unwrap())));
            }
            CheckKind::Thm3 => {
                rows.push(outcome(g.unwrap(), "thm3", check_thm3(g.unwrap(), series)));
                rows.push(outcome(x.unwrap(), "thm3-jacobi", check_thm3_jacobi(x.unwrap(), series)));
            }
            CheckKind::Thm4 => {
                rows.push(outcome(g.unwrap(), "thm4", check_thm4(g.unwrap(), series)));
                rows.push(outcome(x.unwrap(), "thm4-jacobi", check_thm4_jacobi(x.unwrap(), series)));
            }
            CheckKind::Prop => rows.push(outcome(g.unwrap(), "prop", check_prop_equivalence(g.unwrap()))),
            CheckKind::Intro => rows.push(outcome(g.unwrap(), "intro", check_intro_identity(g.unwrap()))),
            CheckKind::Dgp => rows.push(outcome(x.unwrap(), "dgp", check_dgp_bridge(x.unwrap(), series))),
            CheckKind::Lemmas => rows.push(outcome(g.unwrap(), "lemmas", check_lemma_suite(g.unwrap()))),
        }
    }
    if !cfg.timings {
        rows.iter_mut().for_each(|r| r.runtime_ms = 0);
    }
    Ok(rows)
}

/// Run every applicable check for every prime in `[pmin, pmax]`, in prime order.
///
/// Configuration problems (range below 5, unknown precision, Gamma budget)
/// are errors; a check that fails or cannot be evaluated becomes a failing row.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<CheckResult>> {
    if cfg.pmin < 5 || cfg.pmin > cfg.pmax {
        return Err(Error::BadArgument(format!("need 5 <= pmin <= pmax, got {}..{}", cfg.pmin, cfg.pmax)));
    }
    if cfg.checks.is_empty() {
        return Err(Error::BadArgument("no checks selected".into()));
    }
    if cfg.precision == 0 {
        return Err(Error::BadArgument("precision must be at least 1".into()));
    }
    let primes = primes_in(cfg.pmin, cfg.pmax);
    let series = f1_coefficients(cfg.pmax as usize);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::BadArgument(e.to_string()))?;
    let per_prime: Vec<Vec<CheckResult>> =
        pool.install(|| primes.par_iter().map(|&p| run_prime(cfg, p, &series)).collect::<Result<_>>())?;
    Ok(per_prime.into_iter().flatten().collect())
}

/// 0 when every row passed, 1 otherwise.
pub fn exit_code(rows: &[CheckResult]) -> i32 {
    if rows.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

pub fn write_report<W: Write>(rows: &[CheckResult], format: ReportFormat, out: W) -> Result<()> {
    let io = |e: &dyn std::fmt::Display| Error::BadArgument(format!("cannot write report: {e}"));
    match format {
        ReportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| io(&e))?;
            writeln!(out).map_err(|e| io(&e))?;
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if rows.is_empty() {
                w.write_record(["prime", "class_mod_12", "check_id", "lhs", "rhs", "precision", "pass", "runtime_ms"])
                    .map_err(|e| io(&e))?;
            }
            for r in rows {
                w.serialize(r).map_err(|e| io(&e))?;
            }
            w.flush().map_err(|e| io(&e))?;
        }
    }
    Ok(())
}
