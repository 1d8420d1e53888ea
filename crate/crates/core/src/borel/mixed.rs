//! Mixed functions `F(z) + ф_θ(1/z)` and the Laplace duality between G- and E-values.

use rug::{Float, Rational};

use super::kernel::{laplace_sum, AntiESpec, Direction};
use super::quad::{prec_for, quad_semiinfinite, FnIntegrand, Majorant};
use crate::ball::{Ball, ComplexBall, Mag, PrecisionContext};
use crate::error::{Error, Result};
use crate::series::{eval_e, eval_stream, CoeffStream, EFunctionSpec, Growth};

/// `coeff · z^power · F(scale·z)` for an E-function `F`.
#[derive(Clone, Debug)]
pub struct ETerm {
    pub coeff: Rational,
    pub power: u32,
    pub scale: Rational,
    pub spec: EFunctionSpec,
}

impl ETerm {
    pub fn new(spec: EFunctionSpec) -> Self {
        ETerm { coeff: Rational::from(1), power: 0, scale: Rational::from(1), spec }
    }

    pub fn times(mut self, c: Rational) -> Self {
        self.coeff *= c;
        self
    }

    pub fn z_power(mut self, p: u32) -> Self {
        self.power = p;
        self
    }

    pub fn at_scale(mut self, s: Rational) -> Self {
        self.scale = s;
        self
    }

    pub fn eval(&self, z: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
        let arg = if self.scale == 1 { z.clone() } else { z.mul_rational(&self.scale) };
        let mut v = eval_e(&self.spec, &arg, ctx)?;
        if self.power > 0 {
            v = v.mul(&z.powi(self.power as i32)?);
        }
        Ok(if self.coeff == 1 { v } else { v.mul_rational(&self.coeff) })
    }
}

/// `Ψ(z) = Σ E-terms + c·M(z)·ф_θ(1/z) + ℓ·log z + constant`, where `M` is an
/// optional E-function multiplier of the Ж part.
#[derive(Clone, Debug)]
pub struct MixedFunctionSpec {
    pub e_terms: Vec<ETerm>,
    pub antie: AntiESpec,
    pub antie_coeff: Rational,
    pub antie_multiplier: Option<ETerm>,
    pub log_coeff: Rational,
    pub constant: Rational,
}

impl MixedFunctionSpec {
    pub fn pure(antie: AntiESpec) -> Self {
        MixedFunctionSpec {
            e_terms: Vec::new(),
            antie,
            antie_coeff: Rational::from(1),
            antie_multiplier: None,
            log_coeff: Rational::new(),
            constant: Rational::new(),
        }
    }
}

pub fn eval_mixed(spec: &MixedFunctionSpec, z: &ComplexBall, theta: &Direction, ctx: &PrecisionContext) -> Result<ComplexBall> {
    if z.contains_zero() {
        return Err(Error::Domain("eval_mixed: z contains 0".into()));
    }
    // a handful of summands; give each a slice of the target
    let inner = ctx.with_target(ctx.target_exp - 4);
    let prec = ctx.work_bits;
    let mut acc = ComplexBall::from_rational(&spec.constant, prec);
    for t in &spec.e_terms {
        acc = acc.add(&t.eval(z, &inner)?);
    }
    if spec.antie_coeff != 0 {
        let mut scale = 2;
        if let Some(m) = &spec.antie_multiplier {
            scale += (m.spec.stream.growth().rho.mul(&z.abs_upper()).to_f64() * 1.45) as i64;
        }
        let w = z.inv()?;
        let mut f = laplace_sum(&spec.antie, &w, theta, &inner.with_target(inner.target_exp - scale))?;
        if let Some(m) = &spec.antie_multiplier {
            f = f.mul(&m.eval(z, &inner)?);
        }
        acc = acc.add(&f.mul_rational(&spec.antie_coeff));
    }
    if spec.log_coeff != 0 {
        acc = acc.add(&z.round_to(prec.max(z.prec())).ln()?.mul_rational(&spec.log_coeff));
    }
    Ok(acc)
}

/// Coefficients `g_n` of a G-function with `|g_n| ≤ C ρⁿ`.
#[derive(Clone, Debug)]
pub struct GSeries {
    stream: CoeffStream,
}

impl GSeries {
    pub fn new<F>(gen: F, c: Mag, rho: Mag) -> Self
    where
        F: Fn(u32) -> Rational + Send + Sync + 'static,
    {
        GSeries { stream: CoeffStream::new(gen, Growth { c, rho }) }
    }

    pub fn growth(&self) -> &Growth {
        self.stream.growth()
    }

    /// Radius-of-convergence lower bound `1/ρ`.
    pub fn radius_lower(&self) -> f64 {
        1.0 / self.growth().rho.to_f64()
    }

    /// The associated E-function `Σ g_n xⁿ/n!`; it inherits the bound `(C, ρ)`.
    pub fn borel(&self) -> CoeffStream {
        let s = self.stream.clone();
        CoeffStream::new(move |n| s.coeff(n) / crate::series::factorial(n), self.growth().clone())
    }

    /// `G(w)` for `ρ|w| < 1`, geometric tail.
    pub fn eval(&self, w: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
        let g = self.growth();
        let qm = g.rho.mul(&w.abs_upper());
        if !(qm.to_f64() < 1.0) {
            return Err(Error::Domain("G-series evaluated outside its disc of convergence".into()));
        }
        let budget = ctx.target().mul_2exp(-2);
        let one_minus_q = Float::with_val_round(64, 1 - qm.as_float(), rug::float::Round::Down).0;
        let mut n = 1usize;
        let mut tail;
        loop {
            // Σ_{j≥n} C q^j = C q^n/(1-q)
            tail = g.c.mul(&qm.powi(n as u32)).div_lower(&one_minus_q);
            if tail <= budget {
                break;
            }
            n += n / 4 + 1;
            if n > 1_000_000 {
                return Err(Error::NonConvergent("G-series needs too many terms".into()));
            }
        }
        let prec = ctx.work_bits + 16;
        let w = w.round_to(prec.max(w.prec()));
        let mut acc = ComplexBall::zero(prec);
        for c in self.stream.prefix(n).iter().rev() {
            acc = acc.mul(&w);
            acc.re = acc.re.add(&Ball::from_rational(c, prec));
        }
        Ok(acc.with_error(&tail))
    }
}

/// Both sides of `(1/z)G(1/z) = ∫_0^∞ e^{-xz} F(x) dx`, `Re z > 1/2`.
pub fn laplace_of_e(g: &GSeries, z: &ComplexBall, ctx: &PrecisionContext) -> Result<(ComplexBall, ComplexBall)> {
    let prec = ctx.work_bits;
    let half = Float::with_val(64, 0.5);
    if !(z.re.lower() > half) {
        return Err(Error::Domain("laplace_of_E needs Re z > 1/2".into()));
    }
    if g.radius_lower() < 2.0 {
        return Err(Error::Domain("laplace_of_E needs a G-series of radius >= 2".into()));
    }
    let w = z.inv()?;
    let lhs = w.mul(&g.eval(&w, &ctx.with_target(ctx.target_exp - 2))?);

    let f = g.borel();
    let target = ctx.target();
    let qprec = prec_for(&target, prec);
    let zq = z.round_to(qprec.max(z.prec()));
    let sym = z.is_real();
    let eval_ctx = PrecisionContext { work_bits: qprec, target_exp: ctx.target_exp - 8 };
    let integrand = FnIntegrand::new(move |x: &ComplexBall, p: u32| {
        let c = if p < qprec { PrecisionContext::at(p) } else { eval_ctx };
        let fx = eval_stream(&f, x, &c)?;
        Ok(fx.mul(&x.mul(&zq.round_to(p)).neg().exp()))
    });
    let integrand = if sym { integrand.real_symmetric() } else { integrand };
    let decay = Float::with_val_round(64, z.re.lower() - g.growth().rho.as_float(), rug::float::Round::Down).0;
    let maj = Majorant::exponential(g.growth().c.clone(), decay);
    let rhs = quad_semiinfinite(&integrand, &maj, &target, qprec)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn pure_trivial_kernel_is_one() {
        let spec = MixedFunctionSpec::pure(AntiESpec::new(q(1, 1), 0));
        let v = eval_mixed(&spec, &ComplexBall::from_i64(3, 128), &Direction::zero(), &PrecisionContext::at(128)).unwrap();
        assert!(v.re.contains_rational(&q(1, 1)));
    }

    #[test]
    fn duality_geometric() {
        // G = 1/(1-x/2), F = e^{x/2}: both sides equal 2 at z = 1
        let g = GSeries::new(|n| Rational::from((rug::Integer::from(1), rug::Integer::from(1) << n)), Mag::one(), Mag::from_f64(0.5));
        let (l, r) = laplace_of_e(&g, &ComplexBall::one(128), &PrecisionContext::at(128)).unwrap();
        assert!(l.re.contains_rational(&q(2, 1)));
        assert!(r.re.contains_rational(&q(2, 1)));
    }

    #[test]
    fn duality_rejects_small_re() {
        let g = GSeries::new(|n| if n == 1 { q(1, 1) } else { q(0, 1) }, Mag::one(), Mag::from_f64(0.5));
        assert!(laplace_of_e(&g, &ComplexBall::from_rational(&q(1, 2), 64), &PrecisionContext::at(64)).is_err());
    }
}
