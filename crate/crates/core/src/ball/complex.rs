use std::fmt;

use rug::float::Round;
use rug::{Float, Rational};

use super::mag::Mag;
use super::real::{round_nearest, Ball};
use crate::error::{Error, Result};

/// Rectangular enclosure `re + i·im` of a complex number.
#[derive(Clone)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> Self {
        let prec = re.prec();
        ComplexBall { re, im: Ball::zero(prec) }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall::real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall::real(Ball::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        ComplexBall { re: Ball::zero(prec), im: Ball::one(prec) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        ComplexBall::real(Ball::from_i64(v, prec))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        ComplexBall::real(Ball::from_rational(q, prec))
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        ComplexBall { re: Ball::from_rational(re, prec), im: Ball::from_rational(im, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Imaginary part is the exact zero.
    pub fn is_real(&self) -> bool {
        self.im.is_exact_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn contains(&self, other: &ComplexBall) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.re.contains_rational(q) && self.im.contains_rational(&Rational::new())
    }

    /// Largest of the two component radii.
    pub fn rad(&self) -> Mag {
        self.re.rad().max(self.im.rad())
    }

    /// Upper bound of `|z|` over the box.
    pub fn abs_upper(&self) -> Mag {
        let x = self.re.abs_upper();
        if self.is_real() {
            return x;
        }
        let y = self.im.abs_upper();
        x.mul(&x).add(&y.mul(&y)).sqrt()
    }

    /// Lower bound of `|z|` over the box.
    pub fn abs_lower(&self) -> Float {
        let x = self.re.abs_lower();
        if self.is_real() {
            return x;
        }
        let y = self.im.abs_lower();
        let (mut s, _) = Float::with_val_round(64, x.square_ref(), Round::Down);
        let (y2, _) = Float::with_val_round(64, y.square_ref(), Round::Down);
        s = Float::with_val_round(64, &s + &y2, Round::Down).0;
        s.sqrt_round(Round::Down);
        s
    }

    pub fn with_error(self, err: &Mag) -> Self {
        ComplexBall { re: self.re.with_error(err), im: self.im.with_error(err) }
    }

    pub fn round_to(&self, prec: u32) -> Self {
        ComplexBall { re: self.re.round_to(prec), im: self.im.round_to(prec) }
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &ComplexBall) -> Self {
        ComplexBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &ComplexBall) -> Self {
        ComplexBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &ComplexBall) -> Self {
        match (self.is_real(), o.is_real()) {
            (true, true) => ComplexBall::real(self.re.mul(&o.re)),
            (true, false) => ComplexBall { re: o.re.mul(&self.re), im: o.im.mul(&self.re) },
            (false, true) => ComplexBall { re: self.re.mul(&o.re), im: self.im.mul(&o.re) },
            (false, false) => ComplexBall {
                re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
                im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
            },
        }
    }

    pub fn mul_real(&self, x: &Ball) -> Self {
        ComplexBall { re: self.re.mul(x), im: self.im.mul(x) }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        self.mul_real(&Ball::from_rational(q, self.prec()))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        ComplexBall { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    pub fn mul_2exp(&self, e: i32) -> Self {
        ComplexBall { re: self.re.mul_2exp(e), im: self.im.mul_2exp(e) }
    }

    pub fn sqr(&self) -> Self {
        if self.is_real() {
            return ComplexBall::real(self.re.sqr());
        }
        ComplexBall {
            re: self.re.sqr().sub(&self.im.sqr()),
            im: self.re.mul(&self.im).mul_2exp(1),
        }
    }

    pub fn div_real(&self, x: &Ball) -> Result<Self> {
        Ok(ComplexBall { re: self.re.div(x)?, im: self.im.div(x)? })
    }

    pub fn div_i64(&self, k: i64) -> Result<Self> {
        Ok(ComplexBall { re: self.re.div_i64(k)?, im: self.im.div_i64(k)? })
    }

    /// `self / o`; `o` must exclude zero.
    pub fn div(&self, o: &ComplexBall) -> Result<Self> {
        if o.is_real() {
            return self.div_real(&o.re);
        }
        Ok(self.mul(&o.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_real() {
            return Ok(ComplexBall::real(self.re.inv()?));
        }
        let dmin = self.abs_lower();
        if dmin.is_zero() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        // 1/w at the exact midpoint, then |1/w - 1/w_m| ≤ |Δw| / (|w|·|w_m|).
        let (x, y) = (Ball::exact(self.re.mid().clone()), Ball::exact(self.im.mid().clone()));
        let den = x.sqr().add(&y.sqr());
        let inv_m = ComplexBall { re: x.div(&den)?, im: y.neg().div(&den)? };
        let spread = self.re.rad().add(self.im.rad());
        if spread.is_zero() {
            return Ok(inv_m);
        }
        let wm = ComplexBall::new(x, y).abs_lower();
        let rad = spread.div_lower(&dmin).div_lower(&wm);
        Ok(inv_m.with_error(&rad))
    }

    pub fn exp(&self) -> Self {
        if self.is_real() {
            return ComplexBall::real(self.re.exp());
        }
        let m = self.re.exp();
        ComplexBall { re: m.mul(&self.im.cos()), im: m.mul(&self.im.sin()) }
    }

    pub fn sin(&self) -> Self {
        if self.is_real() {
            return ComplexBall::real(self.re.sin());
        }
        let (sh, ch) = self.im.sinh_cosh();
        ComplexBall { re: self.re.sin().mul(&ch), im: self.re.cos().mul(&sh) }
    }

    pub fn cos(&self) -> Self {
        if self.is_real() {
            return ComplexBall::real(self.re.cos());
        }
        let (sh, ch) = self.im.sinh_cosh();
        ComplexBall { re: self.re.cos().mul(&ch), im: self.re.sin().mul(&sh).neg() }
    }

    /// `e^{iθ}` for real `θ`.
    pub fn cis(theta: &Ball) -> Self {
        ComplexBall { re: theta.cos(), im: theta.sin() }
    }

    /// Does the box meet the principal branch cut `(-∞, 0]`.
    pub fn touches_cut(&self) -> bool {
        self.im.contains_zero() && self.re.lower() <= 0
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        if self.touches_cut() {
            return Err(Error::Domain("logarithm: ball meets the branch cut (-inf, 0]".into()));
        }
        if self.is_real() {
            return Ok(ComplexBall::real(self.re.ln()?));
        }
        let prec = self.prec();
        // Value at the exact midpoint, then a Lipschitz bound |Δlog| ≤ |Δz|/min|z| over the box.
        let (x, y) = (Ball::exact(self.re.mid().clone()), Ball::exact(self.im.mid().clone()));
        let re = x.sqr().add(&y.sqr()).ln()?.mul_2exp(-1);
        let (arg, err) = round_nearest(prec, self.im.mid().atan2_ref(self.re.mid()));
        let spread = self.re.rad().add(self.im.rad());
        let rad = if spread.is_zero() { Mag::zero() } else { spread.div_lower(&self.abs_lower()) };
        Ok(ComplexBall { re: re.with_error(&rad), im: Ball::new(arg, err.add(&rad)) })
    }

    /// Principal power `self^p` for rational `p`.
    pub fn pow_rational(&self, p: &Rational) -> Result<Self> {
        if p.denom() == &1u32 {
            if let Some(k) = p.numer().to_i32() {
                return self.powi(k);
            }
        }
        if self.is_real() && self.re.is_positive() {
            return Ok(ComplexBall::real(self.re.pow_rational(p)?));
        }
        Ok(self.ln()?.mul_rational(p).exp())
    }

    /// Principal power with a complex exponent.
    pub fn pow(&self, w: &ComplexBall) -> Result<Self> {
        Ok(self.ln()?.mul(w).exp())
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        let mut acc = ComplexBall::one(self.prec());
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
}

impl From<Ball> for ComplexBall {
    fn from(b: Ball) -> Self {
        ComplexBall::real(b)
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{:?}", self.re)
        } else {
            write!(f, "{:?} + i{:?}", self.re, self.im)
        }
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}) + i({})", self.re, self.im)
        }
    }
}
