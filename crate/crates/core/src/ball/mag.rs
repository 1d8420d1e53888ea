//! Upper bounds for radii and error terms.
//!
//! A [`Mag`] is a non-negative low-precision float that is only ever rounded
//! upward, so every operation yields a valid upper bound of the exact result.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound};
use rug::Float;

pub(crate) const MAG_PREC: u32 = 32;

/// Non-negative upper bound.
#[derive(Clone, PartialEq)]
pub struct Mag(Float);

impl Mag {
    pub fn zero() -> Self {
        Mag(Float::new(MAG_PREC))
    }

    pub fn one() -> Self {
        Mag(Float::with_val(MAG_PREC, 1))
    }

    pub fn infinity() -> Self {
        Mag(Float::with_val(MAG_PREC, rug::float::Special::Infinity))
    }

    /// `2^e`, exact.
    pub fn pow2(e: i64) -> Self {
        let e = e.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32;
        Mag(Float::with_val(MAG_PREC, 1) << e)
    }

    /// Upper bound of `|x|`.
    pub fn from_float(x: &Float) -> Self {
        let (f, _) = Float::with_val_round(MAG_PREC, x.abs_ref(), Round::Up);
        Mag(f)
    }

    /// Upper bound of `|x|`; non-finite input gives infinity.
    pub fn from_f64(x: f64) -> Self {
        if !x.is_finite() {
            return Self::infinity();
        }
        let (f, _) = Float::with_val_round(MAG_PREC, x.abs(), Round::Up);
        Mag(f)
    }

    pub fn from_u64(x: u64) -> Self {
        let (f, _) = Float::with_val_round(MAG_PREC, x, Round::Up);
        Mag(f)
    }

    pub fn from_rational(q: &rug::Rational) -> Self {
        let (f, _) = Float::with_val_round(MAG_PREC, q, Round::Up);
        Mag(f.abs())
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Conservative `f64` view (rounded up).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64_round(Round::Up)
    }

    /// Upper bound of `log2(self)`, `-inf` for zero.
    pub fn log2_upper(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        match self.0.get_exp() {
            Some(e) => e as f64,
            None => f64::INFINITY,
        }
    }

    pub fn add(&self, other: &Mag) -> Mag {
        let mut r = self.0.clone();
        r.add_assign_round(&other.0, Round::Up);
        Mag(r)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        let mut r = self.0.clone();
        r.mul_assign_round(&other.0, Round::Up);
        Mag(r)
    }

    pub fn mul_u64(&self, k: u64) -> Mag {
        self.mul(&Mag::from_u64(k))
    }

    /// `self / den` where `den` is a positive lower bound.
    pub fn div_lower(&self, den: &Float) -> Mag {
        if den.is_zero() || den.is_sign_negative() {
            return if self.is_zero() { Mag::zero() } else { Mag::infinity() };
        }
        let (r, _) = Float::with_val_round(MAG_PREC, &self.0 / den, Round::Up);
        Mag(r)
    }

    /// `self / other` where `other` is itself a lower bound stored as a Mag.
    pub fn div_by(&self, other: &Mag) -> Mag {
        self.div_lower(&other.0)
    }

    pub fn mul_2exp(&self, e: i32) -> Mag {
        Mag(self.0.clone() << e)
    }

    pub fn max(&self, other: &Mag) -> Mag {
        if self.0 >= other.0 {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn sqrt(&self) -> Mag {
        let mut r = self.0.clone();
        r.sqrt_round(Round::Up);
        Mag(r)
    }

    pub fn exp(&self) -> Mag {
        let mut r = self.0.clone();
        r.exp_round(Round::Up);
        Mag(r)
    }

    pub fn exp_m1(&self) -> Mag {
        let mut r = self.0.clone();
        r.exp_m1_round(Round::Up);
        Mag(r)
    }

    /// Upper bound of `ln(self)` for `self ≥ 1`; zero below that.
    pub fn ln(&self) -> Mag {
        if self.0 <= 1 {
            return Mag::zero();
        }
        let mut r = self.0.clone();
        r.ln_round(Round::Up);
        Mag(r)
    }

    /// Upper bound of `self^k`.
    pub fn powi(&self, k: u32) -> Mag {
        let mut acc = Mag::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Upper bound of `self^p` for real `p ≥ 0` when `self ≥ 1`.
    pub fn powf_ge1(&self, p: f64) -> Mag {
        if p == 0.0 {
            return Mag::one();
        }
        self.ln().mul(&Mag::from_f64(p)).exp()
    }

    /// `exp(-x)` rounded up, for `x` given as a lower bound.
    pub fn exp_neg(x_lower: &Float) -> Mag {
        let (mut r, _) = Float::with_val_round(MAG_PREC, -x_lower, Round::Up);
        r.exp_round(Round::Up);
        Mag(r)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mag({})", self.0.to_string_radix_round(10, Some(6), Round::Up))
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_string_radix_round(10, Some(6), Round::Up))
    }
}
