//! Reference values computed by schemes that share nothing with the
//! identities under test: Machin for π, argument-reduced atanh for log,
//! Brent–McMillan for γ and shifted Stirling for Γ.

mod bernoulli;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use crate::ball::{cauchy_derivative, Ball, ComplexBall, Mag, PrecisionContext};
use crate::error::{Error, Result};
use crate::instrument;

pub use bernoulli::bernoulli;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    Machin,
    AtanhReduction,
    BrentMcMillan,
    ShiftedStirling,
    StirlingCauchy,
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub value: ComplexBall,
    pub method: OracleMethod,
}

#[derive(Clone, Debug)]
pub enum Oracle {
    Pi,
    Log(Rational),
    EulerGamma,
    Gamma(Rational),
    GammaDeriv(Rational, u32),
}

pub fn evaluate(o: &Oracle, ctx: &PrecisionContext) -> Result<OracleResult> {
    let (v, method) = match o {
        Oracle::Pi => (pi_oracle(ctx), OracleMethod::Machin),
        Oracle::Log(x) => (log_oracle(x, ctx)?, OracleMethod::AtanhReduction),
        Oracle::EulerGamma => (euler_gamma_oracle(ctx), OracleMethod::BrentMcMillan),
        Oracle::Gamma(a) => (gamma_oracle(a, ctx)?, OracleMethod::ShiftedStirling),
        Oracle::GammaDeriv(a, s) => (gamma_deriv_oracle(a, *s, ctx)?, OracleMethod::StirlingCauchy),
    };
    Ok(OracleResult { value: ComplexBall::real(v), method })
}

/// Bits needed so the result radius lands below the context target.
fn bits_for(ctx: &PrecisionContext) -> u32 {
    ((-ctx.target_exp).max(ctx.work_bits as i64 - 48).max(16) as u32) + 16
}

/// `Σ_{j≥0} (-1)^j w^{2j+1}/(2j+1)` (`alternating`) or `Σ w^{2j+1}/(2j+1)` for `|w| < 1`.
fn arctan_like(w: &Rational, alternating: bool, prec: u32) -> Ball {
    let wb = Ball::from_rational(w, prec);
    let w2 = wb.sqr();
    let wabs = Mag::from_rational(w);
    let w2m = wabs.mul(&wabs);
    let one_m_w2 = Float::with_val_round(64, 1 - w2m.as_float(), rug::float::Round::Down).0;
    let eps = Mag::pow2(-(prec as i64) - 4);
    let mut pw = wb;
    let mut pm = wabs;
    let mut sum = Ball::zero(prec);
    let mut j = 0i64;
    loop {
        let term = pw.div_i64(2 * j + 1).expect("odd divisor");
        sum = if alternating && j % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        pw = pw.mul(&w2);
        pm = pm.mul(&w2m);
        j += 1;
        // remaining terms: alternating ⇒ bounded by the next one; otherwise geometric
        let next = pm.div_lower(&Float::with_val(64, 2 * j + 1));
        let tail = if alternating { next } else { next.div_lower(&one_m_w2) };
        if tail <= eps {
            return sum.with_error(&tail);
        }
    }
}

fn pi_cache() -> &'static Mutex<HashMap<u32, Ball>> {
    static C: OnceLock<Mutex<HashMap<u32, Ball>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// π = 16 atan(1/5) - 4 atan(1/239).
pub fn pi_at(prec: u32) -> Ball {
    let key = prec.div_ceil(64) * 64;
    if let Some(v) = pi_cache().lock().expect("pi cache poisoned").get(&key) {
        return v.clone();
    }
    let wp = key + 16;
    let a = arctan_like(&Rational::from((1, 5)), true, wp).mul_i64(16);
    let b = arctan_like(&Rational::from((1, 239)), true, wp).mul_i64(4);
    let v = a.sub(&b);
    pi_cache().lock().expect("pi cache poisoned").insert(key, v.clone());
    v
}

pub fn pi_oracle(ctx: &PrecisionContext) -> Ball {
    instrument::record(instrument::Kind::Oracle);
    pi_at(bits_for(ctx))
}

fn ln2_at(prec: u32) -> Ball {
    arctan_like(&Rational::from((1, 3)), false, prec).mul_2exp(1)
}

/// `log x` with `x = 2^m y`, `y ∈ [2/3, 4/3]`, `log y = 2 atanh((y-1)/(y+1))`.
pub fn log_at(x: &Rational, prec: u32) -> Result<Ball> {
    if *x <= 0 {
        return Err(Error::Domain(format!("log_oracle needs x > 0, got {x}")));
    }
    let mut m = x.numer().significant_bits() as i64 - x.denom().significant_bits() as i64;
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from(Integer::from(1) << e as u32)
        } else {
            Rational::from((Integer::from(1), Integer::from(1) << (-e) as u32))
        }
    };
    let mut y = x / pow2(m);
    while y > (4, 3) {
        y /= 2u32;
        m += 1;
    }
    while y < (2, 3) {
        y *= 2u32;
        m -= 1;
    }
    let wp = prec + 16 + 64 - (m.unsigned_abs() | 1).leading_zeros();
    let w = Rational::from(&y - 1u32) / Rational::from(&y + 1u32);
    let mut v = arctan_like(&w, false, wp).mul_2exp(1);
    if m != 0 {
        v = v.add(&ln2_at(wp).mul_i64(m));
    }
    Ok(v)
}

pub fn log_oracle(x: &Rational, ctx: &PrecisionContext) -> Result<Ball> {
    instrument::record(instrument::Kind::Oracle);
    log_at(x, bits_for(ctx))
}

/// Brent–McMillan: `γ = A/B - log n - K₀(2n)/I₀(2n)` with
/// `A = Σ (n^k/k!)² H_k`, `B = Σ (n^k/k!)²` and `0 < K₀/I₀ < π e^{-4n}`.
pub fn euler_gamma_at(prec: u32) -> Ball {
    let n = (((prec + 6) as f64) * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 1;
    let kmax = (4.971 * n as f64).ceil() as i64 + 1;
    let wp = prec + 32 + (kmax as f64).log2().ceil() as u32;
    let n2 = n * n;
    let mut t = Ball::one(wp);
    let mut h = Ball::zero(wp);
    let mut a = Ball::zero(wp);
    let mut b = Ball::one(wp);
    for k in 1..=kmax {
        t = t.mul_i64(n2).div_i64(k * k).expect("k > 0");
        h = h.add(&Ball::one(wp).div_i64(k).expect("k > 0"));
        a = a.add(&t.mul(&h));
        b = b.add(&t);
    }
    // tails past kmax: ratio of consecutive terms ≤ q = (n/(kmax+1))², and H_k grows by ≤ 1/(kmax+1)
    let kk = kmax + 1;
    let q = Mag::from_rational(&Rational::from((n2, kk * kk)));
    let qa = q.mul(&Mag::from_rational(&Rational::from((kk + 1, kk))));
    let lower = |m: &Mag| Float::with_val_round(64, 1 - m.as_float(), rug::float::Round::Down).0;
    let t_next = t.abs_upper().mul(&q);
    let tail_b = t_next.div_lower(&lower(&q));
    let h_next = h.abs_upper().add(&Mag::one());
    let tail_a = t_next.mul(&h_next).div_lower(&lower(&qa));
    let a = a.with_error(&tail_a);
    let b = b.with_error(&tail_b);
    let ratio = a.div(&b).expect("B > 1");
    let ln_n = log_at(&Rational::from(n), wp).expect("n > 0");
    // subtract the midpoint π e^{-4n}/2 of the correction interval, keep half-width as radius
    let corr = Mag::from_f64(std::f64::consts::PI).add(&Mag::pow2(-40)).mul(&Mag::exp_neg(&Float::with_val(64, 4 * n)));
    let half = corr.mul_2exp(-1);
    let mid = Ball::exact(half.as_float().clone());
    ratio.sub(&ln_n).sub(&mid).with_error(&half)
}

pub fn euler_gamma_oracle(ctx: &PrecisionContext) -> Ball {
    instrument::record(instrument::Kind::Oracle);
    euler_gamma_at(bits_for(ctx))
}

/// `log Γ(w)` by Stirling's series for `Re w` large, with the remainder bound
/// `|B_{2J+2}|/((2J+2)(2J+1)|w|^{2J+1}) · sec^{2J+2}(arg(w)/2)`.
fn ln_gamma_stirling(w: &ComplexBall, prec: u32) -> Result<ComplexBall> {
    let re_lo = w.re.lower();
    if re_lo <= 1 {
        return Err(Error::Domain("Stirling series needs Re w > 1".into()));
    }
    let wabs_lo = w.abs_lower();
    let wabs_up = w.abs_upper();
    // cos²(arg/2) = (1 + Re w/|w|)/2
    let cos2 = if w.is_real() {
        Float::with_val(64, 1)
    } else {
        let r = Float::with_val_round(64, &re_lo / wabs_up.as_float(), rug::float::Round::Down).0;
        Float::with_val_round(64, (r + 1u32) / 2u32, rug::float::Round::Down).0
    };
    let sec2 = Mag::one().div_lower(&cos2);
    let eps = Mag::pow2(-(prec as i64) - 4);
    let inv_w = w.inv()?;
    let inv_w2 = inv_w.sqr();
    let inv_abs = Mag::one().div_lower(&wabs_lo);
    let mut sum = ComplexBall::zero(prec);
    let mut pw = inv_w.clone();
    let mut pm = inv_abs.clone();
    let mut j = 1u32;
    let remainder = loop {
        let b = bernoulli(2 * j);
        let c = b / Rational::from(2 * j as i64 * (2 * j as i64 - 1));
        sum = sum.add(&pw.mul_rational(&c));
        pw = pw.mul(&inv_w2);
        pm = pm.mul(&inv_abs).mul(&inv_abs);
        let bn = bernoulli(2 * j + 2);
        let cn = Mag::from_rational(&(bn / Rational::from((2 * j as i64 + 2) * (2 * j as i64 + 1))));
        let rem = cn.mul(&pm).mul(&sec2.powi(j + 1));
        if rem <= eps {
            break rem;
        }
        j += 1;
        if j > 4 * prec {
            return Err(Error::NonConvergent("Stirling series shift too small".into()));
        }
    };
    let half = Rational::from((1, 2));
    let two_pi = pi_at(prec).mul_2exp(1);
    let lead = w.sub(&ComplexBall::from_rational(&half, prec)).mul(&w.ln()?).sub(w);
    let c = ComplexBall::real(two_pi.ln()?.mul_2exp(-1));
    let v = lead.add(&c).add(&sum);
    Ok(if w.is_real() {
        let mut v = v;
        v.re.add_error(&remainder);
        v
    } else {
        v.with_error(&remainder)
    })
}

fn shift_for(prec: u32) -> f64 {
    (prec as f64 * 0.25).max(10.0)
}

/// `Γ(w)` for `Re w > 0` via upward shift and Stirling.
pub fn gamma_complex(w: &ComplexBall, prec: u32) -> Result<ComplexBall> {
    let x = w.re.mid().to_f64();
    if !(w.re.lower() > 0) {
        return Err(Error::Domain("gamma oracle needs Re w > 0".into()));
    }
    let wp = prec + 32;
    let m = (shift_for(wp) - x).ceil().max(0.0) as i64;
    let w = w.round_to(wp.max(w.prec()));
    let mut rising = ComplexBall::one(wp);
    for j in 0..m {
        rising = rising.mul(&w.add(&ComplexBall::from_i64(j, wp)));
    }
    let shifted = w.add(&ComplexBall::from_i64(m, wp));
    let lg = ln_gamma_stirling(&shifted, wp)?;
    lg.exp().div(&rising)
}

/// `Γ(a)` for rational `a > 0`.
pub fn gamma_at(a: &Rational, prec: u32) -> Result<Ball> {
    if *a <= 0 {
        return Err(Error::Parameter(format!("gamma oracle needs a > 0, got {a}")));
    }
    let wp = prec + 32;
    let m = (shift_for(wp) - a.to_f64()).ceil().max(0.0) as u32;
    let mut rising = Rational::from(1);
    for j in 0..m {
        rising *= Rational::from(a + j);
    }
    let shifted = ComplexBall::from_rational(&Rational::from(a + m), wp);
    let lg = ln_gamma_stirling(&shifted, wp)?;
    lg.re.exp().div(&Ball::from_rational(&rising, wp))
}

pub fn gamma_oracle(a: &Rational, ctx: &PrecisionContext) -> Result<Ball> {
    instrument::record(instrument::Kind::Oracle);
    gamma_at(a, bits_for(ctx))
}

/// `Γ^{(s)}(a)` by the trapezoid rule on `|w - a| = min(a/2, 1/2)`; on the
/// larger disc of radius `R = min(3a/4, 2r)`, `|Γ(x+iy)| ≤ Γ(x)` and
/// log-convexity give `M = max(Γ(a-R), Γ(a+R))`.
pub fn gamma_deriv_oracle(a: &Rational, s: u32, ctx: &PrecisionContext) -> Result<Ball> {
    if *a <= 0 {
        return Err(Error::Parameter(format!("gamma oracle needs a > 0, got {a}")));
    }
    if s == 0 {
        return gamma_oracle(a, ctx);
    }
    instrument::record(instrument::Kind::Oracle);
    let half = Rational::from((1, 2));
    let a2 = Rational::from(a / 2u32);
    let r = if a2 < half { a2 } else { half };
    let r2 = Rational::from(&r * 2u32);
    let a34 = Rational::from(a * 3u32) / 4u32;
    let big_r = if a34 < r2 { a34 } else { r2 };
    let lo = gamma_at(&Rational::from(a - &big_r), 64)?.abs_upper();
    let hi = gamma_at(&Rational::from(a + &big_r), 64)?.abs_upper();
    let m = lo.max(&hi);
    let bits = bits_for(ctx);
    let target = Mag::pow2(-(bits as i64) + 8);
    // sample errors are amplified by s!/r^s
    let amp = (s as f64) * (1.0 / r.to_f64()).log2() + (1..=s).map(|j| (j as f64).log2()).sum::<f64>();
    let sample_prec = bits + amp.ceil() as u32 + 8;
    let z0 = ComplexBall::from_rational(a, sample_prec);
    let v = cauchy_derivative(|w| gamma_complex(w, sample_prec), &z0, s, &r, &big_r, &m, true, &target, sample_prec)?;
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::at(192)
    }

    #[test]
    fn pi_digits_and_agreement_with_mpfr() {
        let p = pi_oracle(&ctx());
        assert!(p.overlaps(&Ball::pi(256)));
        assert!(p.mid_decimal(9).starts_with("3.14159265"));
        assert!(*p.rad() < Mag::pow2(-150));
    }

    #[test]
    fn log_examples() {
        assert!(log_oracle(&q(1, 1), &ctx()).unwrap().contains_zero());
        let l2 = log_oracle(&q(2, 1), &ctx()).unwrap();
        assert!(l2.overlaps(&Ball::from_i64(2, 256).ln().unwrap()));
        let l = log_oracle(&q(1000, 7), &ctx()).unwrap();
        assert!(l.overlaps(&Ball::from_rational(&q(1000, 7), 256).ln().unwrap()));
        let tiny = log_oracle(&q(3, 1 << 40), &ctx()).unwrap();
        assert!(tiny.overlaps(&Ball::from_rational(&q(3, 1 << 40), 256).ln().unwrap()));
        assert!(log_oracle(&q(-1, 1), &ctx()).is_err());
    }

    #[test]
    fn euler_gamma_digits() {
        let g = euler_gamma_oracle(&ctx());
        let want = Ball::from_decimal("0.57721566490153286060651209008240243104215933593992", 256)
            .unwrap()
            .with_error(&Mag::pow2(-160));
        assert!(g.overlaps(&want));
        assert!(*g.rad() < Mag::pow2(-140));
    }

    #[test]
    fn gamma_examples() {
        let g5 = gamma_oracle(&q(5, 1), &ctx()).unwrap();
        assert!(g5.contains_rational(&q(24, 1)));
        let gh = gamma_oracle(&q(1, 2), &ctx()).unwrap();
        assert!(gh.overlaps(&pi_oracle(&ctx()).sqrt().unwrap()));
        // Γ(1/3) at two different shifts
        let g13 = gamma_oracle(&q(1, 3), &ctx()).unwrap();
        let g13b = gamma_at(&q(1, 3), 400).unwrap();
        assert!(g13.overlaps(&g13b));
        assert!(g13.mid_decimal(9).starts_with("2.6789385"));
    }

    #[test]
    fn complex_gamma_matches_real() {
        let w = ComplexBall::from_rational(&q(7, 3), 192);
        let c = gamma_complex(&w, 192).unwrap();
        assert!(c.re.overlaps(&gamma_at(&q(7, 3), 192).unwrap()));
        // Γ(1+i)Γ(1-i) = π/sinh π
        let z = ComplexBall::from_rationals(&q(1, 1), &q(1, 1), 192);
        let p = gamma_complex(&z, 192).unwrap().mul(&gamma_complex(&z.conj(), 192).unwrap());
        let pi = pi_at(192);
        let (sh, _) = pi.sinh_cosh();
        assert!(p.re.overlaps(&pi.div(&sh).unwrap()));
        assert!(p.im.contains_zero());
    }

    #[test]
    fn gamma_derivatives_at_one() {
        let c = ctx();
        let d0 = gamma_deriv_oracle(&q(3, 2), 0, &c).unwrap();
        assert!(d0.overlaps(&gamma_oracle(&q(3, 2), &c).unwrap()));
        let d1 = gamma_deriv_oracle(&q(1, 1), 1, &c).unwrap();
        let g = euler_gamma_oracle(&c);
        assert!(d1.overlaps(&g.neg()));
        let d2 = gamma_deriv_oracle(&q(1, 1), 2, &c).unwrap();
        let pi = pi_oracle(&c);
        let want = g.sqr().add(&pi.sqr().div_i64(6).unwrap());
        assert!(d2.overlaps(&want));
        assert!(d2.mid_decimal(9).starts_with("1.9781119"));
    }
}
