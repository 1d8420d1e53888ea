//! Integer relation search (PSLQ) over enclosed constants.
//!
//! Only integer relations are searched; a `NoneUpToHeight` verdict rests on
//! the PSLQ lower bound `1/max|H_jj|` for the norm of any relation.

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::ball::{Ball, ComplexBall, Mag, PrecisionContext};
use crate::borel::{laplace_sum, AntiESpec, Direction};
use crate::error::{Error, Result};
use crate::series::{eval_e, EFunctionSpec};

/// Labelled constants known to `digits` decimal places.
#[derive(Clone, Debug)]
pub struct ConstantVector {
    pub labels: Vec<String>,
    pub values: Vec<Ball>,
    pub digits: u32,
}

impl ConstantVector {
    pub fn new(labels: Vec<String>, values: Vec<Ball>, digits: u32) -> Result<Self> {
        if values.len() < 2 || labels.len() != values.len() {
            return Err(Error::Parameter("a constant vector needs at least two labelled entries".into()));
        }
        let bound = decimal_ulp(digits);
        if let Some(i) = values.iter().position(|v| v.rad() > &bound) {
            return Err(Error::Parameter(format!("{} is not known to {digits} digits", labels[i])));
        }
        Ok(ConstantVector { labels, values, digits })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Found,
    NoneUpToHeight,
    InsufficientPrecision,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Found => "found",
            Verdict::NoneUpToHeight => "none_up_to_height",
            Verdict::InsufficientPrecision => "insufficient_precision",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub relation: Option<Vec<Integer>>,
    pub height_bound: Integer,
    /// Lower bound for the Euclidean norm of any relation, when reached.
    pub norm_bound: Option<f64>,
    pub digits_used: u32,
    pub iterations: usize,
    pub verdict: Verdict,
}

/// Upper bound of `10^-digits`.
fn decimal_ulp(digits: u32) -> Mag {
    let p = Rational::from((Integer::from(1), Integer::from(10).pow(digits)));
    Mag::from_rational(&p)
}

/// `D ≥ 10 + n·ceil(log10 H)`.
pub fn required_digits(n: usize, h: &Integer) -> u32 {
    let mut l = 0u32;
    let mut p = Integer::from(1);
    while p < *h {
        p *= 10;
        l += 1;
    }
    10 + n as u32 * l
}

fn round_int(x: &Float) -> Integer {
    x.to_integer_round(Round::Nearest).map(|(i, _)| i).unwrap_or_default()
}

/// `Σ m_i v_i` in ball arithmetic.
pub fn residual(m: &[Integer], v: &[Ball]) -> Ball {
    let prec = v.iter().map(|b| b.prec()).max().unwrap_or(64);
    let mut acc = Ball::zero(prec);
    for (mi, vi) in m.iter().zip(v) {
        acc = acc.add(&vi.mul(&Ball::from_integer(mi, prec)));
    }
    acc
}

fn trivial_relation(v: &[Ball]) -> Option<Vec<Integer>> {
    let n = v.len();
    for i in 0..n {
        if v[i].contains_zero() {
            let mut m = vec![Integer::new(); n];
            m[i] = Integer::from(1);
            return Some(m);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if v[i].sub(&v[j]).contains_zero() {
                let mut m = vec![Integer::new(); n];
                m[i] = Integer::from(1);
                m[j] = Integer::from(-1);
                return Some(m);
            }
        }
    }
    None
}

fn primitive(mut m: Vec<Integer>) -> Vec<Integer> {
    let g = m.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g > 1 {
        for x in &mut m {
            *x = Integer::from(&*x).div_exact(&g);
        }
    }
    // first nonzero entry positive
    if m.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in &mut m {
            *x = Integer::from(-&*x);
        }
    }
    m
}

fn max_abs(m: &[Integer]) -> Integer {
    m.iter().map(|x| Integer::from(x.abs_ref())).max().unwrap_or_default()
}

/// Search for an integer relation with entries at most `max_height`.
#[allow(clippy::needless_range_loop)] // matrix updates read clearer with indices
pub fn pslq(v: &ConstantVector, max_height: &Integer, _ctx: &PrecisionContext) -> ProbeResult {
    let n = v.len();
    let mut out = ProbeResult {
        relation: None,
        height_bound: max_height.clone(),
        norm_bound: None,
        digits_used: v.digits,
        iterations: 0,
        verdict: Verdict::InsufficientPrecision,
    };
    if let Some(m) = trivial_relation(&v.values) {
        out.relation = Some(primitive(m));
        out.verdict = Verdict::Found;
        return out;
    }
    if v.digits < required_digits(n, max_height) {
        return out;
    }
    let prec = (v.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32;
    let fl = |x: f64| Float::with_val(prec, x);
    let gamma = Float::with_val(prec, 4) / 3u32;
    let gamma = gamma.sqrt();
    let x: Vec<Float> = v.values.iter().map(|b| Float::with_val(prec, b.mid())).collect();

    // s_k = sqrt(Σ_{j≥k} x_j²), y = x/s_0
    let mut s = vec![fl(0.0); n];
    let mut acc = fl(0.0);
    for k in (0..n).rev() {
        acc += Float::with_val(prec, x[k].square_ref());
        s[k] = Float::with_val(prec, acc.sqrt_ref());
    }
    let s0 = s[0].clone();
    let mut y: Vec<Float> = x.iter().map(|xi| Float::with_val(prec, xi / &s0)).collect();
    for sk in &mut s {
        *sk /= &s0;
    }
    let mut h = vec![vec![fl(0.0); n - 1]; n];
    for i in 0..n {
        for j in 0..(n - 1).min(i + 1) {
            if i == j {
                h[i][j] = Float::with_val(prec, &s[j + 1] / &s[j]);
            } else {
                let den = Float::with_val(prec, &s[j] * &s[j + 1]);
                h[i][j] = -Float::with_val(prec, &y[i] * &y[j]) / den;
            }
        }
    }
    let mut a: Vec<Vec<Integer>> = (0..n).map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect()).collect();
    let mut b = a.clone();

    let reduce = |i: usize, j: usize, h: &mut Vec<Vec<Float>>, y: &mut Vec<Float>, a: &mut Vec<Vec<Integer>>, b: &mut Vec<Vec<Integer>>| {
        if h[j][j].is_zero() {
            return;
        }
        let t = round_int(&Float::with_val(prec, &h[i][j] / &h[j][j]));
        if t == 0 {
            return;
        }
        let tf = Float::with_val(prec, &t);
        let yi = Float::with_val(prec, &y[i] * &tf);
        y[j] += yi;
        for k in 0..=j {
            let d = Float::with_val(prec, &h[j][k] * &tf);
            h[i][k] -= d;
        }
        for k in 0..n {
            let d = Integer::from(&a[j][k] * &t);
            a[i][k] -= d;
            let d = Integer::from(&b[k][i] * &t);
            b[k][j] += d;
        }
    };

    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            reduce(i, j, &mut h, &mut y, &mut a, &mut b);
        }
    }

    let detect = Float::with_val(prec, 10).pow(-(v.digits as i32) + 4);
    let hard_cap = Integer::from(10).pow(v.digits.saturating_sub(6)) ;
    let sqrt_n_h = Float::with_val(prec, max_height) * Float::with_val(prec, n).sqrt();
    let max_iter = 200 * n * v.digits as usize;
    for iter in 0..max_iter {
        out.iterations = iter + 1;
        // pick m maximizing γ^j |H_jj|
        let mut m = 0;
        let mut best = fl(-1.0);
        let mut gp = Float::with_val(prec, &gamma);
        for j in 0..n - 1 {
            let val = Float::with_val(prec, h[j][j].abs_ref()) * &gp;
            if val > best {
                best = val;
                m = j;
            }
            gp *= &gamma;
        }
        y.swap(m, m + 1);
        a.swap(m, m + 1);
        h.swap(m, m + 1);
        for row in &mut b {
            row.swap(m, m + 1);
        }
        if m + 2 < n {
            let t0 = (Float::with_val(prec, h[m][m].square_ref()) + Float::with_val(prec, h[m][m + 1].square_ref())).sqrt();
            if t0.is_zero() {
                break;
            }
            let t1 = Float::with_val(prec, &h[m][m] / &t0);
            let t2 = Float::with_val(prec, &h[m][m + 1] / &t0);
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = Float::with_val(prec, &t1 * &t3) + Float::with_val(prec, &t2 * &t4);
                row[m + 1] = Float::with_val(prec, &t1 * &t4) - Float::with_val(prec, &t2 * &t3);
            }
        }
        for i in m + 1..n {
            for j in (0..(i).min(m + 2).min(n - 1)).rev() {
                reduce(i, j, &mut h, &mut y, &mut a, &mut b);
            }
        }

        // candidate relations: columns of B with tiny y
        for j in 0..n {
            let col: Vec<Integer> = (0..n).map(|k| b[k][j].clone()).collect();
            let scale = Float::with_val(prec, max_abs(&col)).max(&fl(1.0));
            if Float::with_val(prec, y[j].abs_ref()) <= Float::with_val(prec, &detect * &scale)
                && residual(&col, &v.values).contains_zero() {
                    let col = primitive(col);
                    out.verdict = if max_abs(&col) <= *max_height { Verdict::Found } else { Verdict::NoneUpToHeight };
                    if out.verdict == Verdict::Found {
                        out.relation = Some(col);
                    } else {
                        // the shortest relation found exceeds H; none smaller exists up to the bound
                        out.norm_bound = norm_bound(&h, prec);
                    }
                    return out;
                }
        }

        let bound = norm_bound(&h, prec);
        if let Some(nb) = &bound {
            if Float::with_val(prec, *nb) > sqrt_n_h {
                out.norm_bound = bound;
                out.verdict = Verdict::NoneUpToHeight;
                return out;
            }
        }
        if b.iter().flatten().any(|e| Integer::from(e.abs_ref()) > hard_cap) {
            out.norm_bound = bound;
            return out;
        }
    }
    out.norm_bound = norm_bound(&h, prec);
    out
}

fn norm_bound(h: &[Vec<Float>], prec: u32) -> Option<f64> {
    let n1 = h.first().map(|r| r.len()).unwrap_or(0);
    let mut mx = Float::with_val(prec, 0);
    for (j, row) in h.iter().enumerate().take(n1) {
        let v = Float::with_val(prec, row[j].abs_ref());
        if v > mx {
            mx = v;
        }
    }
    if mx.is_zero() {
        None
    } else {
        Some(Float::with_val(prec, mx.recip_ref()).to_f64())
    }
}

/// Context delivering balls with radius below `10^-digits`.
pub fn context_for_digits(digits: u32) -> PrecisionContext {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 40;
    PrecisionContext { work_bits: bits, target_exp: -(bits as i64 - 16) }
}

/// `(1, e, e·E_{a,s+1}(-1))`, which has no rational relation unless the
/// series collapses (e.g. `a = 1, s = 0`).
pub fn conjecture3_vector(a: &Rational, s: u32, digits: u32) -> Result<ConstantVector> {
    let ctx = context_for_digits(digits);
    let prec = ctx.work_bits;
    let e = Ball::one(prec).exp();
    let ev = eval_e(&EFunctionSpec::eas(a, s + 1)?, &ComplexBall::from_i64(-1, prec), &ctx)?;
    let third = e.mul(&ev.re);
    ConstantVector::new(vec!["1".into(), "e".into(), format!("e*E_{{{a},{}}}(-1)", s + 1)], vec![Ball::one(prec), e, third], digits)
}

pub fn probe_conjecture3(a: &Rational, s: u32, digits: u32, h: &Integer, ctx: &PrecisionContext) -> Result<ProbeResult> {
    let v = conjecture3_vector(a, s, digits)?;
    Ok(pslq(&v, h, ctx))
}

/// `(1, e^ρ, ∫_0^∞ e^{-t}/(1+αt) dt)`.
pub fn mixed_vector(alpha: &Rational, rho: &Rational, digits: u32) -> Result<ConstantVector> {
    if *alpha <= 0 {
        return Err(Error::Parameter("probe_mixed_independence needs alpha > 0".into()));
    }
    let ctx = context_for_digits(digits);
    let prec = ctx.work_bits;
    let er = Ball::from_rational(rho, prec).exp();
    let f = laplace_sum(&AntiESpec::new(Rational::new(), 0), &ComplexBall::from_rational(alpha, prec), &Direction::zero(), &ctx)?;
    ConstantVector::new(
        vec!["1".into(), format!("exp({rho})"), format!("phi_0(1/{alpha})")],
        vec![Ball::one(prec), er, f.re],
        digits,
    )
}

pub fn probe_mixed_independence(alpha: &Rational, rho: &Rational, digits: u32, h: &Integer, ctx: &PrecisionContext) -> Result<ProbeResult> {
    if *rho == 0 {
        return Err(Error::Parameter("probe_mixed_independence needs rho != 0".into()));
    }
    let v = mixed_vector(alpha, rho, digits)?;
    Ok(pslq(&v, h, ctx))
}

#[cfg(test)]
mod tests;
