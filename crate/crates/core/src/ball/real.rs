use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

use super::mag::Mag;
use crate::error::{Error, Result};

/// Midpoint–radius enclosure of a real number: the set `[mid - rad, mid + rad]`.
#[derive(Clone)]
pub struct Ball {
    mid: Float,
    rad: Mag,
}

/// Half an ulp of `x` at its own precision; the error of a round-to-nearest
/// result that was reported inexact.
pub(crate) fn half_ulp(x: &Float) -> Mag {
    match x.get_exp() {
        Some(e) => Mag::pow2(e as i64 - x.prec() as i64 - 1),
        None => Mag::zero(),
    }
}

fn rounding_error(x: &Float, ord: Ordering) -> Mag {
    if ord == Ordering::Equal {
        Mag::zero()
    } else {
        half_ulp(x)
    }
}

/// Round `val` to nearest at `prec` and report the rounding error bound.
pub(crate) fn round_nearest<T>(prec: u32, val: T) -> (Float, Mag)
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let (f, ord) = Float::with_val_round(prec, val, Round::Nearest);
    let err = rounding_error(&f, ord);
    (f, err)
}

impl Ball {
    pub fn new(mid: Float, rad: Mag) -> Self {
        Ball { mid, rad }
    }

    pub fn exact(mid: Float) -> Self {
        Ball { mid, rad: Mag::zero() }
    }

    pub fn zero(prec: u32) -> Self {
        Ball::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Ball::exact(Float::with_val(prec, 1))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let (mid, err) = round_nearest(prec, v);
        Ball { mid, rad: err }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        let (mid, err) = round_nearest(prec, v);
        Ball { mid, rad: err }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (mid, err) = round_nearest(prec, q);
        Ball { mid, rad: err }
    }

    /// Exact binary value of an `f64`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        Ball::exact(Float::with_val(prec.max(53), v))
    }

    /// Ball enclosing the decimal (or other MPFR-parsable) literal `s`.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(s).map_err(|e| Error::Parameter(format!("cannot parse {s:?}: {e}")))?;
        let (mid, ord) = Float::with_val_round(prec, parsed, Round::Nearest);
        let rad = if ord == Ordering::Equal { Mag::zero() } else { half_ulp(&mid) };
        Ok(Ball { mid, rad })
    }

    /// Enclosure of π (MPFR constant, directed rounding).
    pub fn pi(prec: u32) -> Self {
        let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    /// Is the midpoint exact with zero radius and value zero.
    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self) -> Float {
        let (f, _) = Float::with_val_round(self.prec(), &self.mid - self.rad.as_float(), Round::Down);
        f
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self) -> Float {
        let (f, _) = Float::with_val_round(self.prec(), &self.mid + self.rad.as_float(), Round::Up);
        f
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_float(&self.mid).add(&self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero if the ball contains 0).
    pub fn abs_lower(&self) -> Float {
        let (f, _) = Float::with_val_round(64, self.mid.abs_ref(), Round::Down);
        let (d, _) = Float::with_val_round(64, &f - self.rad.as_float(), Round::Down);
        if d.is_sign_negative() || d.is_zero() {
            Float::new(64)
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        let lo = self.lower();
        let hi = self.upper();
        lo <= 0 && hi >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        // |q - mid| ≤ rad, exactly.
        let mid_q = match self.mid.to_rational() {
            Some(m) => m,
            None => return false,
        };
        let diff = Rational::from(q - &mid_q).abs();
        match self.rad.as_float().to_rational() {
            Some(r) => diff <= r,
            None => true,
        }
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        match x.to_rational() {
            Some(q) => self.contains_rational(&q),
            None => false,
        }
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ball) -> bool {
        let (Some(m1), Some(m2)) = (self.mid.to_rational(), other.mid.to_rational()) else {
            return false;
        };
        let (Some(r1), Some(r2)) = (self.rad.as_float().to_rational(), other.rad.as_float().to_rational()) else {
            return !self.rad.is_finite();
        };
        Rational::from(&m1 - &m2).abs() + r2 <= r1
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        let (Some(m1), Some(m2)) = (self.mid.to_rational(), other.mid.to_rational()) else {
            return false;
        };
        let (Some(r1), Some(r2)) = (self.rad.as_float().to_rational(), other.rad.as_float().to_rational()) else {
            return true;
        };
        Rational::from(&m1 - &m2).abs() <= r1 + r2
    }

    /// Widen by an additional error term.
    pub fn add_error(&mut self, err: &Mag) {
        self.rad = self.rad.add(err);
    }

    pub fn with_error(mut self, err: &Mag) -> Self {
        self.add_error(err);
        self
    }

    /// Re-round the midpoint to `prec` bits, folding the error into the radius.
    pub fn round_to(&self, prec: u32) -> Ball {
        if prec >= self.prec() {
            return self.clone();
        }
        let (mid, err) = round_nearest(prec, &self.mid);
        Ball { mid, rad: self.rad.add(&err) }
    }

    fn prec2(&self, other: &Ball) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let (mid, err) = round_nearest(self.prec2(other), &self.mid + &other.mid);
        Ball { mid, rad: self.rad.add(&other.rad).add(&err) }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        let (mid, err) = round_nearest(self.prec2(other), &self.mid - &other.mid);
        Ball { mid, rad: self.rad.add(&other.rad).add(&err) }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let (mid, err) = round_nearest(self.prec2(other), &self.mid * &other.mid);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            err
        } else {
            let a = Mag::from_float(&self.mid).mul(&other.rad);
            let b = Mag::from_float(&other.mid).mul(&self.rad);
            a.add(&b).add(&self.rad.mul(&other.rad)).add(&err)
        };
        Ball { mid, rad }
    }

    pub fn sqr(&self) -> Ball {
        let (mid, err) = round_nearest(self.prec(), self.mid.square_ref());
        let rad = Mag::from_float(&self.mid)
            .mul(&self.rad)
            .mul_2exp(1)
            .add(&self.rad.mul(&self.rad))
            .add(&err);
        Ball { mid, rad }
    }

    pub fn mul_rational(&self, q: &Rational) -> Ball {
        self.mul(&Ball::from_rational(q, self.prec()))
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        let (mid, err) = round_nearest(self.prec(), &self.mid * k);
        Ball { mid, rad: self.rad.mul(&Mag::from_u64(k.unsigned_abs())).add(&err) }
    }

    pub fn mul_2exp(&self, e: i32) -> Ball {
        Ball { mid: self.mid.clone() << e, rad: self.rad.mul_2exp(e) }
    }

    pub fn div_i64(&self, k: i64) -> Result<Ball> {
        if k == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let (mid, err) = round_nearest(self.prec(), &self.mid / k);
        Ok(Ball { mid, rad: self.rad.div_lower(&Float::with_val(64, k.unsigned_abs())).add(&err) })
    }

    /// `self / other`; the divisor must exclude zero.
    pub fn div(&self, other: &Ball) -> Result<Ball> {
        if other.contains_zero() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        let (mid, err) = round_nearest(self.prec2(other), &self.mid / &other.mid);
        if other.rad.is_zero() {
            let rad = self.rad.div_lower(&other.abs_lower_exact()).add(&err);
            return Ok(Ball { mid, rad });
        }
        // (|x_m| r_y / |y_m| + r_x) / (|y_m| - r_y)
        let ym_low = other.mid_abs_lower();
        let t = Mag::from_float(&self.mid).mul(&other.rad).div_lower(&ym_low).add(&self.rad);
        let rad = t.div_lower(&other.abs_lower()).add(&err);
        Ok(Ball { mid, rad })
    }

    fn mid_abs_lower(&self) -> Float {
        let (f, _) = Float::with_val_round(64, self.mid.abs_ref(), Round::Down);
        f
    }

    fn abs_lower_exact(&self) -> Float {
        self.mid_abs_lower()
    }

    pub fn inv(&self) -> Result<Ball> {
        Ball::one(self.prec()).div(self)
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_sign_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn exp(&self) -> Ball {
        let (mid, err) = round_nearest(self.prec(), self.mid.exp_ref());
        if self.rad.is_zero() {
            return Ball { mid, rad: err };
        }
        // |e^t - e^m| ≤ e^m (e^r - 1)
        let em = Mag::from_float(&mid).add(&err);
        let rad = em.mul(&self.rad.exp_m1()).add(&err);
        Ball { mid, rad }
    }

    /// Natural logarithm; the ball must be strictly positive.
    pub fn ln(&self) -> Result<Ball> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a ball not strictly positive".into()));
        }
        let (mid, err) = round_nearest(self.prec(), self.mid.ln_ref());
        if self.rad.is_zero() {
            return Ok(Ball { mid, rad: err });
        }
        let rad = self.rad.div_lower(&self.abs_lower()).add(&err);
        Ok(Ball { mid, rad })
    }

    pub fn sqrt(&self) -> Result<Ball> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative ball".into()));
        }
        if !self.is_positive() {
            // Ball touches zero: enclose [0, sqrt(hi)].
            let mut hi = self.upper();
            hi.sqrt_round(Round::Up);
            let half = Mag::from_float(&hi).mul_2exp(-1);
            let (mid, err) = round_nearest(self.prec(), half.as_float());
            return Ok(Ball { mid, rad: half.add(&err) });
        }
        let (mid, err) = round_nearest(self.prec(), self.mid.sqrt_ref());
        if self.rad.is_zero() {
            return Ok(Ball { mid, rad: err });
        }
        let mut lo = self.abs_lower();
        lo.sqrt_round(Round::Down);
        let rad = self.rad.div_lower(&(lo * 2u32)).add(&err);
        Ok(Ball { mid, rad })
    }

    pub fn sin(&self) -> Ball {
        let (mid, err) = round_nearest(self.prec(), self.mid.sin_ref());
        Ball { mid, rad: self.rad.add(&err) }
    }

    pub fn cos(&self) -> Ball {
        let (mid, err) = round_nearest(self.prec(), self.mid.cos_ref());
        Ball { mid, rad: self.rad.add(&err) }
    }

    pub fn sin_cos(&self) -> (Ball, Ball) {
        (self.sin(), self.cos())
    }

    /// `(sinh x, cosh x)`.
    pub fn sinh_cosh(&self) -> (Ball, Ball) {
        let ep = self.exp();
        let em = self.neg().exp();
        (ep.sub(&em).mul_2exp(-1), ep.add(&em).mul_2exp(-1))
    }

    pub fn atan(&self) -> Ball {
        let (mid, err) = round_nearest(self.prec(), self.mid.atan_ref());
        Ball { mid, rad: self.rad.add(&err) }
    }

    /// `x^q` for `x > 0` and rational `q` (integer `q` allows any sign).
    pub fn pow_rational(&self, q: &Rational) -> Result<Ball> {
        if q.denom() == &1u32 {
            if let Some(k) = q.numer().to_i32() {
                return self.powi(k);
            }
        }
        Ok(self.ln()?.mul_rational(q).exp())
    }

    pub fn powi(&self, k: i32) -> Result<Ball> {
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        let mut acc = Ball::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if k < 0 {
            acc.inv()
        } else {
            Ok(acc)
        }
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn mid_decimal(&self, digits: usize) -> String {
        format_decimal(&self.mid, digits)
    }

    /// Decimal rendering of the radius, rounded up.
    pub fn rad_decimal(&self) -> String {
        self.rad.to_string()
    }
}

/// Deterministic decimal rendering of a float (`0` for zero).
pub fn format_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid_decimal(20), self.rad)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        write!(f, "{} +/- {}", self.mid_decimal(digits), self.rad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn exact_integer_addition() {
        let s = Ball::from_i64(1, 64).add(&Ball::from_i64(2, 64));
        assert!(s.contains_rational(&q(3, 1)));
        assert!(s.rad().is_zero());
    }

    #[test]
    fn zero_absorbs() {
        let z = Ball::zero(64);
        let y = Ball::from_rational(&q(22, 7), 64).with_error(&Mag::pow2(-10));
        let p = z.mul(&y);
        assert!(p.mid().is_zero());
        assert!(p.rad().is_zero());
    }

    #[test]
    fn one_third_at_64_bits() {
        let t = Ball::from_i64(1, 64).div(&Ball::from_i64(3, 64)).unwrap();
        assert!(t.contains_rational(&q(1, 3)));
        assert!(*t.rad() <= Mag::pow2(-62));
    }

    #[test]
    fn division_by_zero_ball_is_domain_error() {
        let y = Ball::zero(64).with_error(&Mag::pow2(-5));
        assert!(matches!(Ball::one(64).div(&y), Err(Error::Domain(_))));
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(Ball::from_i64(-1, 64).ln().is_err());
        assert!(Ball::zero(64).ln().is_err());
        let l = Ball::one(64).ln().unwrap();
        assert!(l.contains_zero());
    }

    #[test]
    fn sqrt_two_via_rational_power() {
        let r = Ball::from_i64(2, 128).pow_rational(&q(1, 2)).unwrap();
        // Newton oracle on exact rationals; after 8 steps the error is far below 2^-200.
        let mut x = q(3, 2);
        for _ in 0..8 {
            x = (x.clone() + q(2, 1) / x) / 2u32;
        }
        let widened = r.clone().with_error(&Mag::pow2(-200));
        assert!(widened.contains_rational(&x));
        assert!(*r.rad() <= Mag::pow2(-110));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = Ball::zero(64).exp();
        assert!(e.contains_rational(&q(1, 1)));
    }

    #[test]
    fn sqrt_of_ball_touching_zero() {
        let b = Ball::zero(64).with_error(&Mag::pow2(-4));
        let s = b.sqrt().unwrap();
        assert!(s.contains_zero());
        assert!(s.contains_rational(&q(1, 4)));
    }
}
