//! The identity registry and its verifier.

mod catalog;
pub mod integrals;

use std::collections::BTreeMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{format_decimal, Ball, ComplexBall, Mag, PrecisionContext};
use crate::error::Result;

pub use catalog::{catalog, gamma_product, BASE_IDS};

pub type Plan = Arc<dyn Fn(&PrecisionContext) -> Result<ComplexBall> + Send + Sync>;

/// Largest combined radius that still counts as a pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tolerance {
    /// `2^-(bits-56)` at the working precision.
    Default,
    /// `2^e`.
    Exp2(i64),
    /// `10^-d`.
    Digits(u32),
}

impl Tolerance {
    /// Exponent `e` with `2^e` at or below the tolerance.
    pub fn exp2(&self, bits: u32) -> i64 {
        match *self {
            Tolerance::Default => -(bits as i64 - 56),
            Tolerance::Exp2(e) => e,
            Tolerance::Digits(d) => -((d as f64 * std::f64::consts::LOG2_10).ceil() as i64),
        }
    }
}

#[derive(Clone)]
pub struct IdentityCase {
    pub id: String,
    pub instance: usize,
    pub description: String,
    pub params: Vec<(String, String)>,
    pub lhs: Plan,
    pub rhs: Plan,
    pub tolerance: Tolerance,
}

impl IdentityCase {
    pub(crate) fn new(id: &str, description: &str, lhs: Plan, rhs: Plan) -> Self {
        IdentityCase {
            id: id.to_string(),
            instance: 0,
            description: description.to_string(),
            params: Vec::new(),
            lhs,
            rhs,
            tolerance: Tolerance::Default,
        }
    }

    pub(crate) fn param(mut self, k: &str, v: impl fmt::Display) -> Self {
        self.params.push((k.to_string(), v.to_string()));
        self
    }

    pub(crate) fn tolerance(mut self, t: Tolerance) -> Self {
        self.tolerance = t;
        self
    }

    fn sort_key(&self) -> (u32, usize) {
        (self.id.trim_start_matches('I').parse().unwrap_or(u32::MAX), self.instance)
    }
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCase").field("id", &self.id).field("params", &self.params).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub instance: usize,
    pub params: Vec<(String, String)>,
    pub lhs: Option<ComplexBall>,
    pub rhs: Option<ComplexBall>,
    /// Upper bound of `|mid(lhs) - mid(rhs)|`.
    pub gap: Option<Mag>,
    pub status: Status,
    pub bits: u32,
    pub seconds: f64,
    pub cause: Option<String>,
}

fn run_plan(p: &Plan, ctx: &PrecisionContext) -> Result<ComplexBall> {
    match catch_unwind(AssertUnwindSafe(|| p(ctx))) {
        Ok(r) => r,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(crate::error::Error::NonConvergent(format!("evaluation panicked: {msg}")))
        }
    }
}

fn midpoint_gap(l: &ComplexBall, r: &ComplexBall) -> Mag {
    let p = l.prec().max(r.prec()) + 64;
    let m = |b: &Ball| Ball::exact(rug::Float::with_val(p, b.mid()));
    let d = ComplexBall::new(m(&l.re), m(&l.im)).sub(&ComplexBall::new(m(&r.re), m(&r.im)));
    d.abs_upper()
}

struct Attempt {
    lhs: ComplexBall,
    rhs: ComplexBall,
    status: Status,
}

fn attempt(case: &IdentityCase, ctx: &PrecisionContext, tol: &Mag) -> Result<Attempt> {
    let lhs = run_plan(&case.lhs, ctx)?;
    let rhs = run_plan(&case.rhs, ctx)?;
    let status = if !lhs.overlaps(&rhs) {
        Status::Fail
    } else if lhs.rad().add(&rhs.rad()) <= *tol {
        Status::Pass
    } else {
        Status::Inconclusive
    };
    Ok(Attempt { lhs, rhs, status })
}

/// Verify with one automatic refinement at doubled bits (capped by `max_bits`).
pub fn verify_capped(case: &IdentityCase, ctx: &PrecisionContext, max_bits: u32) -> VerificationReport {
    let start = Instant::now();
    let tol_exp = case.tolerance.exp2(ctx.work_bits);
    let tol = Mag::pow2(tol_exp);
    // each side gets a quarter of the tolerance
    let run_ctx = PrecisionContext { work_bits: ctx.work_bits, target_exp: tol_exp - 2 };
    let mut bits = run_ctx.work_bits;
    let mut outcome = attempt(case, &run_ctx, &tol);
    if matches!(&outcome, Ok(a) if a.status == Status::Inconclusive) && ctx.work_bits * 2 <= max_bits {
        bits = ctx.work_bits * 2;
        let refined = run_ctx.with_bits(bits);
        outcome = attempt(case, &refined, &tol);
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut report = VerificationReport {
        id: case.id.clone(),
        instance: case.instance,
        params: case.params.clone(),
        lhs: None,
        rhs: None,
        gap: None,
        status: Status::Fail,
        bits,
        seconds,
        cause: None,
    };
    match outcome {
        Ok(a) => {
            report.gap = Some(midpoint_gap(&a.lhs, &a.rhs));
            report.status = a.status;
            if a.status == Status::Fail {
                report.cause = Some("enclosures are disjoint".into());
            } else if a.status == Status::Inconclusive {
                report.cause = Some(format!("combined radius exceeds 2^{tol_exp}"));
            }
            report.lhs = Some(a.lhs);
            report.rhs = Some(a.rhs);
        }
        Err(e) => report.cause = Some(e.to_string()),
    }
    report
}

pub fn verify(case: &IdentityCase, ctx: &PrecisionContext) -> VerificationReport {
    verify_capped(case, ctx, ctx.work_bits * 2)
}

/// Cases whose id is in `filter` (all when `None`).
pub fn select(filter: Option<&[String]>) -> Vec<IdentityCase> {
    let all = catalog();
    match filter {
        None => all,
        Some(ids) => all.into_iter().filter(|c| ids.iter().any(|i| i.eq_ignore_ascii_case(&c.id))).collect(),
    }
}

/// Verify every selected case on a pool of `jobs` workers; reports come back
/// ordered by id and instance whatever the schedule.
pub fn verify_all(filter: Option<&[String]>, ctx: &PrecisionContext, jobs: usize, max_bits: u32) -> Vec<VerificationReport> {
    let mut cases = select(filter);
    cases.sort_by_key(|c| c.sort_key());
    let run = || cases.par_iter().map(|c| verify_capped(c, ctx, max_bits)).collect::<Vec<_>>();
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => cases.iter().map(|c| verify_capped(c, ctx, max_bits)).collect(),
    }
}

/// Wire form of a report: every numeric field is a decimal string.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportRecord {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub lhs_mid: String,
    pub lhs_rad: String,
    pub rhs_mid: String,
    pub rhs_rad: String,
    pub gap: String,
    pub status: Status,
    pub bits: String,
    pub seconds: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
}

impl ReportRecord {
    pub const COLUMNS: [&'static str; 10] =
        ["id", "params", "lhs_mid", "lhs_rad", "rhs_mid", "rhs_rad", "gap", "status", "bits", "seconds"];

    /// `timing = false` writes `"0"` for seconds so runs are byte-reproducible.
    pub fn from_report(r: &VerificationReport, timing: bool) -> Self {
        let (lm, lr) = r.lhs.as_ref().map(ball_strings).unwrap_or_default();
        let (rm, rr) = r.rhs.as_ref().map(ball_strings).unwrap_or_default();
        ReportRecord {
            id: r.id.clone(),
            params: r.params.iter().cloned().collect(),
            lhs_mid: lm,
            lhs_rad: lr,
            rhs_mid: rm,
            rhs_rad: rr,
            gap: r.gap.as_ref().map(|g| g.to_string()).unwrap_or_default(),
            status: r.status,
            bits: r.bits.to_string(),
            seconds: if timing { format!("{:.3}", r.seconds) } else { "0".into() },
            cause: r.cause.clone(),
        }
    }

    pub fn params_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

/// Midpoint and radius strings; a ball whose imaginary part straddles 0 is
/// reported as real with `|im|` folded into the radius.
pub fn ball_strings(b: &ComplexBall) -> (String, String) {
    let digits = |x: &Ball| ((x.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
    if b.im.contains_zero() {
        let rad = b.re.rad().add(&b.im.abs_upper());
        (format_decimal(b.re.mid(), digits(&b.re)), rad.to_string())
    } else {
        let re = format_decimal(b.re.mid(), digits(&b.re));
        let im = format_decimal(b.im.mid(), digits(&b.im));
        let sep = if im.starts_with('-') { "" } else { "+" };
        (format!("{re}{sep}{im}i"), b.rad().to_string())
    }
}

#[cfg(test)]
mod tests;
