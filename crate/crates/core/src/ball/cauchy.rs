//! Derivatives by the trapezoid rule on a Cauchy circle.

use rug::{Float, Rational};

use super::{Ball, ComplexBall, Mag};
use crate::error::{Error, Result};
fn factorial(n: u32) -> rug::Integer {
    rug::Integer::from(rug::Integer::factorial(n))
}

fn rpow(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// `f^{(m)}(z0)` from `N` samples on `|w - z0| = r`, given `|f| ≤ M` on the
/// disc of radius `R > r`.  Aliasing error `≤ m!·M·q/((1-q)R^m)`, `q = (r/R)^N`.
///
/// With `symmetric` (real `z0` and `f(conj w) = conj f(w)`) only half the
/// circle is sampled and the result is real.
#[allow(clippy::too_many_arguments)]
pub fn cauchy_derivative<F>(
    f: F,
    z0: &ComplexBall,
    order: u32,
    r: &Rational,
    big_r: &Rational,
    m_bound: &Mag,
    symmetric: bool,
    target: &Mag,
    prec: u32,
) -> Result<ComplexBall>
where
    F: Fn(&ComplexBall) -> Result<ComplexBall>,
{
    if !(r > &0 && big_r > r) {
        return Err(Error::Parameter("cauchy_derivative needs 0 < r < R".into()));
    }
    let ratio = Rational::from(r / big_r);
    let mfact = Mag::from_rational(&Rational::from(factorial(order)));
    let pre = mfact.mul(m_bound).div_lower(&Float::with_val_round(64, rpow(big_r, order), rug::float::Round::Down).0);
    let budget = target.mul_2exp(-1);
    let ratio_up = Mag::from_rational(&ratio);
    let log_ratio = ratio.to_f64().log2();
    let mut n = (((budget.log2_upper() - pre.log2_upper() - 1.0) / log_ratio).ceil().max(order as f64 + 2.0)) as u32;
    n += n % 2;
    let alias = loop {
        let q = ratio_up.powi(n);
        let one_m_q = Float::with_val_round(64, 1 - q.as_float(), rug::float::Round::Down).0;
        let e = pre.mul(&q).div_lower(&one_m_q);
        if e <= budget {
            break e;
        }
        n += 2;
    };
    let rb = Ball::from_rational(r, prec);
    let two_pi_n = Ball::pi(prec).mul_2exp(1).div_i64(n as i64)?;
    let z0 = z0.round_to(prec.max(z0.prec()));
    let sample = |j: u32| -> Result<ComplexBall> {
        let ang = two_pi_n.mul_i64(j as i64);
        let w = if j == 0 { z0.add(&ComplexBall::real(rb.clone())) } else { z0.add(&ComplexBall::cis(&ang).mul_real(&rb)) };
        let fw = f(&w)?;
        let rot = if j == 0 { ComplexBall::one(prec) } else { ComplexBall::cis(&ang.mul_i64(-(order as i64))) };
        Ok(fw.mul(&rot))
    };
    let mut sum = ComplexBall::zero(prec);
    if symmetric {
        sum = sum.add(&ComplexBall::real(sample(0)?.re));
        sum = sum.add(&ComplexBall::real(sample(n / 2)?.re));
        for j in 1..n / 2 {
            sum = sum.add(&ComplexBall::real(sample(j)?.re.mul_2exp(1)));
        }
    } else {
        for j in 0..n {
            sum = sum.add(&sample(j)?);
        }
    }
    let scale = Ball::from_rational(&(Rational::from(factorial(order)) / rpow(r, order)), prec)
        .div_i64(n as i64)?;
    let out = sum.mul_real(&scale);
    Ok(if symmetric {
        let mut o = out;
        o.re.add_error(&alias);
        o
    } else {
        out.with_error(&alias)
    })
}

