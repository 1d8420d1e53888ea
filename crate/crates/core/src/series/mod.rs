//! Exact coefficient streams and tail-bounded evaluation of E-functions.

mod coeffs;
mod wronskian;

use std::sync::{Arc, Mutex};

use rug::{Integer, Rational};

use crate::ball::{Ball, ComplexBall, Mag, PrecisionContext};
use crate::error::{Error, Result};
use crate::instrument;

pub use coeffs::{
    coeff_binomial, coeff_eas, coeff_powerlog, convolve, factorial, is_nonpositive_integer, powerlog_series,
};
pub use wronskian::{wronskian_det, Analytic, ConstantFn, PsiFn};

/// Certified bound `|coef(n)| ≤ C·ρⁿ/n!`.
#[derive(Clone, Debug)]
pub struct Growth {
    pub c: Mag,
    pub rho: Mag,
}

type Generator = dyn Fn(u32) -> Rational + Send + Sync;

/// Deterministic coefficient generator with a growth certificate and a
/// synchronized prefix cache.
#[derive(Clone)]
pub struct CoeffStream {
    gen: Arc<Generator>,
    growth: Growth,
    cache: Arc<Mutex<Vec<Rational>>>,
}

impl CoeffStream {
    pub fn new<F>(gen: F, growth: Growth) -> Self
    where
        F: Fn(u32) -> Rational + Send + Sync + 'static,
    {
        CoeffStream { gen: Arc::new(gen), growth, cache: Arc::new(Mutex::new(Vec::new())) }
    }

    pub fn growth(&self) -> &Growth {
        &self.growth
    }

    pub fn coeff(&self, n: u32) -> Rational {
        let cache = self.cache.lock().expect("coefficient cache poisoned");
        if let Some(c) = cache.get(n as usize) {
            return c.clone();
        }
        drop(cache);
        (self.gen)(n)
    }

    /// Coefficients `0..n`.
    pub fn prefix(&self, n: usize) -> Vec<Rational> {
        let mut cache = self.cache.lock().expect("coefficient cache poisoned");
        while cache.len() < n {
            let k = cache.len() as u32;
            cache.push((self.gen)(k));
        }
        cache[..n].to_vec()
    }

    /// Stream of the `m`-th derivative: `coef(n+m)·(n+m)!/n!`, growth `(Cρ^m, ρ)`.
    pub fn derivative(&self, m: u32) -> CoeffStream {
        if m == 0 {
            return self.clone();
        }
        let base = self.clone();
        let growth = Growth { c: self.growth.c.mul(&self.growth.rho.powi(m)), rho: self.growth.rho.clone() };
        CoeffStream::new(
            move |n| {
                let mut rising = Integer::from(1);
                for j in n + 1..=n + m {
                    rising *= j;
                }
                base.coeff(n + m) * rising
            },
            growth,
        )
    }
}

impl std::fmt::Debug for CoeffStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoeffStream").field("growth", &self.growth).finish()
    }
}

#[derive(Clone, Debug)]
pub enum EFamily {
    /// `E_{a,s}(z) = Σ zⁿ/(n!(n+a)^s)`.
    Eas { a: Rational, s: u32 },
    /// `exp(βz)`.
    Exp { beta: Rational },
    /// `I₀(z) = J₀(iz)`.
    BesselI0,
    Generic,
}

#[derive(Clone, Debug)]
pub struct EFunctionSpec {
    pub family: EFamily,
    pub stream: CoeffStream,
}

impl EFunctionSpec {
    pub fn eas(a: &Rational, s: u32) -> Result<Self> {
        if is_nonpositive_integer(a) {
            return Err(Error::Parameter(format!("E_(a,s) needs a outside Z<=0, got a = {a}")));
        }
        if s == 0 {
            return Err(Error::Parameter("E_(a,s) needs s >= 1".into()));
        }
        // min over n of |n + a|
        let frac = a - a.clone().floor();
        let dist = if *a > 0 {
            a.clone()
        } else {
            let up = 1u32 - frac.clone();
            if frac < up { frac } else { up }
        };
        let inv = Mag::from_rational(&dist.recip()).powi(s);
        let growth = Growth { c: inv.max(&Mag::one()), rho: Mag::one() };
        let a2 = a.clone();
        let stream = CoeffStream::new(move |n| coeff_eas(&a2, s, n).expect("parameter checked"), growth);
        Ok(EFunctionSpec { family: EFamily::Eas { a: a.clone(), s }, stream })
    }

    pub fn exp(beta: &Rational) -> Self {
        let growth = Growth { c: Mag::one(), rho: Mag::from_rational(beta) };
        let b = beta.clone();
        let stream = CoeffStream::new(
            move |n| {
                let mut p = Rational::from(1);
                for _ in 0..n {
                    p *= &b;
                }
                p / factorial(n)
            },
            growth,
        );
        EFunctionSpec { family: EFamily::Exp { beta: beta.clone() }, stream }
    }

    pub fn bessel_i0() -> Self {
        // binom(2m, m) ≤ 4^m gives |coef(n)| ≤ 1/n!.
        let growth = Growth { c: Mag::one(), rho: Mag::one() };
        let stream = CoeffStream::new(
            |n| {
                if n % 2 == 1 {
                    return Rational::new();
                }
                let m = n / 2;
                let f = factorial(m);
                let den = Integer::from(&f * &f) << (2 * m);
                Rational::from((Integer::from(1), den))
            },
            growth,
        );
        EFunctionSpec { family: EFamily::BesselI0, stream }
    }

    pub fn generic(stream: CoeffStream) -> Self {
        EFunctionSpec { family: EFamily::Generic, stream }
    }
}

/// Truncation order and a majorant of the omitted tail.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub n: usize,
    pub bound: Mag,
}

/// Upper bound of `Σ_{n≥N} C rⁿ/n!` valid for `N ≥ 2r`.
pub fn tail_bound(growth: &Growth, zabs: &Mag, n: usize) -> Mag {
    let r = growth.rho.mul(zabs);
    let mut t = growth.c.clone();
    for j in 1..=n {
        t = t.mul(&r).div_lower(&rug::Float::with_val(64, j));
    }
    t.mul_2exp(1)
}

const MAX_TERMS: usize = 200_000;

/// Smallest `N ≥ 2ρ|z|` whose geometric-majorant tail is at most `budget`.
pub fn truncation(growth: &Growth, zabs: &Mag, budget: &Mag) -> Result<TailBound> {
    let r = growth.rho.mul(zabs);
    let start = r.to_f64().mul_add(2.0, 0.0).ceil().max(1.0) as usize;
    if start > MAX_TERMS {
        return Err(Error::NonConvergent(format!("series needs more than {MAX_TERMS} terms")));
    }
    let mut t = growth.c.clone();
    for j in 1..=start {
        t = t.mul(&r).div_lower(&rug::Float::with_val(64, j));
    }
    let mut n = start;
    loop {
        let bound = t.mul_2exp(1);
        if bound <= *budget {
            return Ok(TailBound { n, bound });
        }
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::NonConvergent(format!("series needs more than {MAX_TERMS} terms")));
        }
        t = t.mul(&r).div_lower(&rug::Float::with_val(64, n));
    }
}

/// Evaluate `Σ coef(n) zⁿ` with the tail folded into the radius.
pub fn eval_stream(stream: &CoeffStream, z: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
    let zabs = z.abs_upper();
    if !zabs.is_finite() {
        return Err(Error::Domain("series argument is unbounded".into()));
    }
    let growth = stream.growth();
    let tb = truncation(growth, &zabs, &ctx.target().mul_2exp(-2))?;
    let r = growth.rho.mul(&zabs).to_f64();
    let extra = (r * std::f64::consts::LOG2_E).ceil() as i64
        + growth.c.log2_upper().max(0.0) as i64
        + (tb.n as f64).log2().ceil() as i64
        + 8;
    let base = (ctx.work_bits as i64).max(-ctx.target_exp + 8);
    let prec = (base + extra).clamp(64, 1 << 20) as u32;
    let z = z.round_to(prec.max(z.prec()));
    let coeffs = stream.prefix(tb.n);
    let mut acc = ComplexBall::zero(prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(&z);
        if *c != 0 {
            acc.re = acc.re.add(&Ball::from_rational(c, prec));
        }
    }
    if z.is_real() {
        acc.re.add_error(&tb.bound);
        Ok(acc)
    } else {
        Ok(acc.with_error(&tb.bound))
    }
}

pub fn eval_e(spec: &EFunctionSpec, z: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
    if matches!(spec.family, EFamily::Eas { .. }) {
        instrument::record(instrument::Kind::EasSeries);
    }
    eval_stream(&spec.stream, z, ctx)
}

pub fn deriv_e(spec: &EFunctionSpec, z: &ComplexBall, order: u32, ctx: &PrecisionContext) -> Result<ComplexBall> {
    if matches!(spec.family, EFamily::Eas { .. }) {
        instrument::record(instrument::Kind::EasSeries);
    }
    eval_stream(&spec.stream.derivative(order), z, ctx)
}

/// `ψ_j(z) = e^z E_{a,j}(-z)` with `ψ_0 = 1`.
pub fn psi(a: &Rational, j: u32, z: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
    if j == 0 {
        return Ok(ComplexBall::one(ctx.work_bits));
    }
    let e = EFunctionSpec::eas(a, j)?;
    Ok(z.exp().mul(&eval_e(&e, &z.neg(), ctx)?))
}

/// `ψ_j'(z) - (1 - a/z)ψ_j(z) - ψ_{j-1}(z)/z`, which vanishes identically.
pub fn psi_residual(a: &Rational, j: u32, z: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
    if j == 0 {
        return Err(Error::Parameter("psi_residual needs j >= 1".into()));
    }
    if z.contains_zero() {
        return Err(Error::Domain("psi_residual: z contains 0".into()));
    }
    // e^z amplifies the series error; tighten the inner target accordingly.
    let grow = (z.abs_upper().to_f64() * std::f64::consts::LOG2_E).ceil() as i64;
    let ctx = &ctx.with_target(ctx.target_exp - 8 - grow);
    let e = EFunctionSpec::eas(a, j)?;
    let mz = z.neg();
    let ez = z.exp();
    let val = eval_e(&e, &mz, ctx)?;
    let der = deriv_e(&e, &mz, 1, ctx)?;
    let psi_j = ez.mul(&val);
    let dpsi_j = ez.mul(&val.sub(&der));
    let psi_prev = psi(a, j - 1, z, ctx)?;
    let inv_z = z.inv()?;
    let factor = ComplexBall::one(ctx.work_bits).sub(&inv_z.mul_rational(a));
    Ok(dpsi_j.sub(&factor.mul(&psi_j)).sub(&psi_prev.mul(&inv_z)))
}
