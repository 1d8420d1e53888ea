//! Midpoint–radius ("ball") arithmetic over MPFR floats.
//!
//! Midpoints are rounded to nearest; every rounding error and every
//! propagated input radius is accumulated into an upward-rounded [`Mag`].

mod cauchy;
mod complex;
mod mag;
mod real;

pub use cauchy::cauchy_derivative;
pub use complex::ComplexBall;
pub use mag::Mag;
pub use real::{format_decimal, Ball};

use rug::Rational;

use crate::error::{Error, Result};

/// Working precision plus requested output radius `2^target_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    pub work_bits: u32,
    pub target_exp: i64,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    pub fn new(work_bits: u32, target_exp: i64) -> Result<Self> {
        if work_bits < Self::MIN_BITS {
            return Err(Error::Parameter(format!("work_bits must be >= 64, got {work_bits}")));
        }
        Ok(PrecisionContext { work_bits, target_exp })
    }

    /// Context at `bits` with the default target `2^-(bits-48)`.
    pub fn at(bits: u32) -> Self {
        let bits = bits.max(Self::MIN_BITS);
        PrecisionContext { work_bits: bits, target_exp: -(bits as i64 - 48) }
    }

    pub fn target(&self) -> Mag {
        Mag::pow2(self.target_exp)
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        let shift = bits as i64 - self.work_bits as i64;
        PrecisionContext { work_bits: bits.max(Self::MIN_BITS), target_exp: self.target_exp - shift }
    }

    pub fn with_target(&self, target_exp: i64) -> Self {
        PrecisionContext { work_bits: self.work_bits, target_exp }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(op: ArithOp, x: &ComplexBall, y: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
    let x = x.round_to(ctx.work_bits.max(x.prec()));
    Ok(match op {
        ArithOp::Add => x.add(y),
        ArithOp::Sub => x.sub(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Div => x.div(y)?,
    })
}

#[derive(Clone, Debug)]
pub enum Exponent {
    Rational(Rational),
    Complex(ComplexBall),
}

#[derive(Clone, Debug)]
pub enum Elementary {
    Exp,
    Log,
    PowPrincipal(Exponent),
}

pub fn elementary(f: &Elementary, z: &ComplexBall, _ctx: &PrecisionContext) -> Result<ComplexBall> {
    match f {
        Elementary::Exp => Ok(z.exp()),
        Elementary::Log => z.ln(),
        Elementary::PowPrincipal(Exponent::Rational(p)) => {
            if p.denom() != &1u32 && z.touches_cut() {
                return Err(Error::Domain("power: ball meets the branch cut (-inf, 0]".into()));
            }
            z.pow_rational(p)
        }
        Elementary::PowPrincipal(Exponent::Complex(w)) => z.pow(w),
    }
}

/// Re-run `plan` at growing precision until its radius is at most
/// `2^target_exp` or `max_bits` is exceeded.
pub fn refine<F>(plan: F, target_exp: i64, start_bits: u32, max_bits: u32) -> Result<ComplexBall>
where
    F: Fn(&PrecisionContext) -> Result<ComplexBall>,
{
    let target = Mag::pow2(target_exp);
    let mut bits = start_bits.max(PrecisionContext::MIN_BITS);
    loop {
        let ctx = PrecisionContext { work_bits: bits, target_exp };
        let best = match plan(&ctx) {
            Ok(v) if v.rad() <= target => return Ok(v),
            Ok(v) => v,
            Err(Error::PrecisionExhausted { best: b, .. }) => *b,
            Err(e) => return Err(e),
        };
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted { bits, best: Box::new(best) });
        }
        bits = (bits * 2).min(max_bits);
    }
}
