//! Command-line front end: `eval`, `sum`, `verify`, `probe` and `list`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gevrey_core::borel::{check_direction, laplace_sum, AntiESpec, Direction};
use gevrey_core::identities::{ball_strings, select, verify_all, ReportRecord, Status};
use gevrey_core::pslq::{probe_conjecture3, probe_mixed_independence, ProbeResult, Verdict};
use gevrey_core::series::{deriv_e, EFunctionSpec};
use gevrey_core::{ComplexBall, Error, Integer, PrecisionContext, Rational};

pub mod parse;
pub mod report;

use report::Format;

const USAGE_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gevrey", version, about = "Certified evaluation of arithmetic Gevrey series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Eas,
    Exp,
    I0,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProbeKind {
    Conjecture3,
    Mixed,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an E-function (or one of its derivatives) at z.
    Eval {
        #[arg(long, value_enum, default_value = "eas")]
        family: Family,
        #[arg(long, value_parser = parse::rational, default_value = "1")]
        a: Rational,
        #[arg(long, default_value_t = 0)]
        s: u32,
        #[arg(long, value_parser = parse::rational, default_value = "1")]
        beta: Rational,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        z: Rational,
        /// Imaginary part of z.
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        zi: Option<Rational>,
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
        bits: u32,
    },
    /// Borel-Laplace sum of the divergent series in direction theta.
    Sum {
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        a: Option<Rational>,
        #[arg(long)]
        k: Option<u32>,
        /// Binomial kernel (1+t)^s instead of the power-log one.
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true, conflicts_with_all = ["a", "k"])]
        s: Option<Rational>,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        z: Rational,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        zi: Option<Rational>,
        #[arg(long, value_parser = parse::theta, allow_hyphen_values = true, default_value = "0")]
        theta: Direction,
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
        bits: u32,
    },
    /// Certify catalogued identities.
    Verify {
        /// `all` or comma-separated ids such as `I1,I8`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
        bits: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Record wall-clock seconds (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Integer-relation search on a constant vector.
    Probe {
        #[arg(long, value_enum)]
        kind: ProbeKind,
        #[arg(long, value_parser = parse::rational, default_value = "1/2")]
        a: Rational,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, value_parser = parse::rational, default_value = "1")]
        alpha: Rational,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true, default_value = "1/2")]
        rho: Rational,
        #[arg(long, default_value_t = 150)]
        digits: u32,
        #[arg(long, default_value = "1000000000000")]
        height: Integer,
    },
    /// List catalogued identity cases.
    List,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("gevrey: {msg}");
            USAGE_ERROR
        }
    }
}

/// Refinement cap: `GEVREY_MAX_BITS` or twice the requested precision.
fn max_bits(bits: u32) -> u32 {
    std::env::var("GEVREY_MAX_BITS")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map_or(bits.saturating_mul(2), |m| m.max(bits))
}

fn point(re: &Rational, im: &Option<Rational>, bits: u32) -> ComplexBall {
    match im {
        Some(i) => ComplexBall::from_rationals(re, i, bits),
        None => ComplexBall::from_rational(re, bits),
    }
}

/// Print to stdout; a closed pipe is not an error.
fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_ball(b: &ComplexBall) {
    let (mid, rad) = ball_strings(b);
    out(&format!("{mid} +/- {rad}"));
}

fn dispatch(cmd: Command) -> Result<i32, String> {
    match cmd {
        Command::Eval { family, a, s, beta, z, zi, order, bits } => {
            let spec = match family {
                Family::Eas => EFunctionSpec::eas(&a, s).map_err(|e| e.to_string())?,
                Family::Exp => EFunctionSpec::exp(&beta),
                Family::I0 => EFunctionSpec::bessel_i0(),
            };
            let ctx = PrecisionContext::at(bits);
            let v = deriv_e(&spec, &point(&z, &zi, bits), order, &ctx).map_err(|e| e.to_string())?;
            print_ball(&v);
            Ok(0)
        }
        Command::Sum { a, k, s, z, zi, theta, bits } => {
            let spec = match s {
                Some(s) => AntiESpec::binomial(&s),
                None => AntiESpec::new(a.unwrap_or_else(|| Rational::from(1)), k.unwrap_or(0)),
            };
            if let Err(e @ Error::AntiStokes { .. }) = check_direction(&spec, &theta) {
                return Err(e.to_string());
            }
            let ctx = PrecisionContext::at(bits);
            let v = laplace_sum(&spec, &point(&z, &zi, bits), &theta, &ctx).map_err(|e| e.to_string())?;
            print_ball(&v);
            Ok(0)
        }
        Command::Verify { suite, bits, format, out, jobs, timing } => {
            let filter = parse::suite(&suite);
            if let Some(ids) = &filter {
                if ids.is_empty() || select(Some(ids)).is_empty() {
                    return Err(format!("no identity matches {suite:?}"));
                }
            }
            let jobs = jobs.map_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()), |j| j as usize);
            let ctx = PrecisionContext::at(bits);
            let reports = verify_all(filter.as_deref(), &ctx, jobs, max_bits(bits));
            let records: Vec<ReportRecord> = reports.iter().map(|r| ReportRecord::from_report(r, timing)).collect();
            let text = report::render(&records, format)?;
            report::emit(&text, out.as_deref())?;
            let all_pass = records.iter().all(|r| r.status == Status::Pass);
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Probe { kind, a, s, alpha, rho, digits, height } => {
            if height < 1 {
                return Err("height must be positive".into());
            }
            let ctx = gevrey_core::pslq::context_for_digits(digits);
            let res = match kind {
                ProbeKind::Conjecture3 => probe_conjecture3(&a, s, digits, &height, &ctx),
                ProbeKind::Mixed => probe_mixed_independence(&alpha, &rho, digits, &height, &ctx),
            }
            .map_err(|e| e.to_string())?;
            print_probe(&res);
            Ok(if res.verdict == Verdict::InsufficientPrecision { 1 } else { 0 })
        }
        Command::List => {
            for c in select(None) {
                let params = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                out(&format!("{}\t{}\t{}\t{}", c.id, c.instance, params, c.description));
            }
            Ok(0)
        }
    }
}

fn print_probe(r: &ProbeResult) {
    let mut lines = vec![format!("verdict: {}", r.verdict)];
    if let Some(m) = &r.relation {
        let m: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        lines.push(format!("relation: [{}]", m.join(", ")));
    }
    lines.push(format!("height_bound: {}", r.height_bound));
    if let Some(n) = r.norm_bound {
        lines.push(format!("norm_bound: {n:.6e}"));
    }
    lines.push(format!("digits: {}", r.digits_used));
    lines.push(format!("iterations: {}", r.iterations));
    out(&lines.join("\n"));
}
