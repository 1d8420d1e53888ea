//! Borel–Laplace 1-summation of the power-log Ж-family.

use std::f64::consts::PI;
use std::fmt;

use rug::{Float, Rational};

use super::quad::{prec_for, quad_semiinfinite, Integrand, Majorant};
use crate::ball::{Ball, ComplexBall, Mag, PrecisionContext};
use crate::error::{Error, Result};
use crate::instrument;
use crate::series::{factorial, powerlog_series};

/// The Ж-function with Borel kernel `(1+ζ)^{a-1} log(1+ζ)^k`, i.e. the
/// divergent series `Σ n!·u_{a,k,n} zⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiESpec {
    pub a: Rational,
    pub k: u32,
}

impl AntiESpec {
    pub fn new(a: Rational, k: u32) -> Self {
        AntiESpec { a, k }
    }

    /// Binomial family `Σ s(s-1)…(s-n+1) zⁿ`, kernel `(1+ζ)^s`.
    pub fn binomial(s: &Rational) -> Self {
        AntiESpec { a: Rational::from(s + 1u32), k: 0 }
    }

    /// Is the kernel entire (a polynomial): `a ∈ ℕ*` and `k = 0`.
    pub fn is_entire(&self) -> bool {
        self.k == 0 && self.a.denom() == &1u32 && self.a >= 1
    }

    /// Singular points of the kernel in the Borel plane.
    pub fn singularities(&self) -> Vec<(Rational, Rational)> {
        if self.is_entire() {
            Vec::new()
        } else {
            vec![(Rational::from(-1), Rational::new())]
        }
    }

    /// `n!·u_{a,k,n}` for `n < count`.
    pub fn divergent_coeffs(&self, count: usize) -> Vec<Rational> {
        if count == 0 {
            return Vec::new();
        }
        powerlog_series(&self.a, self.k, count - 1)
            .into_iter()
            .enumerate()
            .map(|(n, u)| u * factorial(n as u32))
            .collect()
    }
}

/// A summation direction, stored exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    Radians(Rational),
    /// `θ = q·π`.
    PiFraction(Rational),
}

impl Direction {
    pub fn zero() -> Self {
        Direction::Radians(Rational::new())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Direction::Radians(q) => q.to_f64(),
            Direction::PiFraction(q) => q.to_f64() * PI,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Direction::Radians(q) | Direction::PiFraction(q) => *q == 0,
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            Direction::Radians(q) => Ball::from_rational(q, prec),
            Direction::PiFraction(q) => Ball::pi(prec).mul_rational(q),
        }
    }

    /// `e^{iθ}`, exact for `θ = 0`.
    pub fn unit(&self, prec: u32) -> ComplexBall {
        if self.is_zero() {
            return ComplexBall::one(prec);
        }
        ComplexBall::cis(&self.to_ball(prec))
    }

    /// `θ + π/64`, the substitute offered for an anti-Stokes request.
    pub fn nudged(&self) -> Direction {
        let step = Rational::from((1, 64));
        match self {
            Direction::PiFraction(q) => Direction::PiFraction(Rational::from(q + &step)),
            Direction::Radians(q) => {
                let pi_over_64 = Rational::from_f64(PI / 64.0).expect("finite");
                Direction::Radians(q + pi_over_64)
            }
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Radians(q) => write!(f, "{:.10}", q.to_f64()),
            Direction::PiFraction(q) if *q == 0 => write!(f, "0"),
            Direction::PiFraction(q) => write!(f, "{q}*pi"),
        }
    }
}

/// Rays closer than this to an anti-Stokes direction are refused.
pub const ANTI_STOKES_GUARD: f64 = PI / 128.0;

/// Directions (as multiples of π) whose ray meets a kernel singularity.
pub fn anti_stokes(spec: &AntiESpec) -> Vec<Direction> {
    spec.singularities()
        .iter()
        .map(|(re, im)| {
            let arg = im.to_f64().atan2(re.to_f64()) / PI;
            if arg == 1.0 {
                Direction::PiFraction(Rational::from(1))
            } else {
                Direction::Radians(Rational::from_f64(arg * PI).unwrap_or_default())
            }
        })
        .collect()
}

fn wrap(x: f64) -> f64 {
    let t = (x + PI).rem_euclid(2.0 * PI);
    t - PI
}

/// Refuse `theta` if it lies on (or within the guard of) an anti-Stokes ray.
pub fn check_direction(spec: &AntiESpec, theta: &Direction) -> Result<()> {
    let th = theta.to_f64();
    if !th.is_finite() {
        return Err(Error::Parameter("direction must be finite".into()));
    }
    for d in anti_stokes(spec) {
        if wrap(th - d.to_f64()).abs() < ANTI_STOKES_GUARD {
            return Err(Error::AntiStokes { theta: theta.to_string(), suggested: theta.nudged().to_string() });
        }
    }
    Ok(())
}

/// Integrand `τ ↦ K(τ e^{iθ}) e^{-uτ}` of the rotated Laplace integral.
pub(crate) struct LaplaceIntegrand {
    pub a_minus_1: Rational,
    pub k: u32,
    pub unit: ComplexBall,
    pub u: ComplexBall,
    pub singular: Vec<(f64, f64)>,
    pub symmetric: bool,
}

impl LaplaceIntegrand {
    pub fn new(spec: &AntiESpec, theta: &Direction, u: ComplexBall, prec: u32) -> Self {
        let unit = theta.unit(prec);
        let th = theta.to_f64();
        // ζ = -1 ⇔ τ = -e^{-iθ}
        let singular = if spec.is_entire() { Vec::new() } else { vec![(-th.cos(), th.sin())] };
        let symmetric = unit.is_real() && u.is_real();
        LaplaceIntegrand { a_minus_1: Rational::from(&spec.a - 1u32), k: spec.k, unit, u, singular, symmetric }
    }

    pub fn kernel(&self, zeta: &ComplexBall) -> Result<ComplexBall> {
        let prec = zeta.prec();
        let w = ComplexBall::one(prec).add(zeta);
        let mut v = if self.a_minus_1 == 0 { ComplexBall::one(prec) } else { w.pow_rational(&self.a_minus_1)? };
        if self.k > 0 {
            v = v.mul(&w.ln()?.powi(self.k as i32)?);
        }
        Ok(v)
    }
}

impl Integrand for LaplaceIntegrand {
    fn eval(&self, t: &ComplexBall, prec: u32) -> Result<ComplexBall> {
        let t = t.round_to(prec.max(t.prec()));
        let zeta = if self.unit.is_real() { t.clone() } else { t.mul(&self.unit.round_to(prec)) };
        let k = self.kernel(&zeta)?;
        let e = t.mul(&self.u.round_to(prec)).neg().exp();
        Ok(k.mul(&e))
    }

    fn singular_points(&self) -> Vec<(f64, f64)> {
        self.singular.clone()
    }

    fn conj_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Majorant of the Laplace integrand on `τ ≥ 2` (where `|1+ζ| ≥ 1`).
pub(crate) fn laplace_majorant(spec: &AntiESpec, lambda: Float) -> Majorant {
    let p = Rational::from(&spec.a - 1u32);
    let p = if p > 0 { p.to_f64() * (1.0 + 1e-12) } else { 0.0 };
    Majorant { c: Mag::one(), p, k: spec.k, lambda }
}

/// `ф_θ(z) = (1/z)∫_{arg ζ = θ} K(ζ) e^{-ζ/z} dζ`, enclosed.
///
/// Valid for `|θ - arg z| < π/2`; refused on anti-Stokes rays.
pub fn laplace_sum(spec: &AntiESpec, z: &ComplexBall, theta: &Direction, ctx: &PrecisionContext) -> Result<ComplexBall> {
    instrument::record(instrument::Kind::BorelLaplace);
    check_direction(spec, theta)?;
    if z.contains_zero() {
        return Err(Error::Domain("laplace_sum: z contains 0".into()));
    }
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits) + 8;
    let z = z.round_to(prec.max(z.prec()));
    let unit = theta.unit(prec);
    // u = e^{iθ}/z
    let u = unit.div(&z)?;
    let lambda = u.re.lower();
    if lambda <= 0 {
        return Err(Error::Domain(format!(
            "direction {theta} is outside the half-plane of convergence for this z (need |theta - arg z| < pi/2)"
        )));
    }
    let integrand = LaplaceIntegrand::new(spec, theta, u.clone(), prec);
    let maj = laplace_majorant(spec, Float::with_val(64, &lambda));
    // ф = u·∫, so scale the budget by 1/|u|
    let inner = target.div_lower(&u.abs_upper().max(&Mag::one()).as_float().clone());
    let v = quad_semiinfinite(&integrand, &maj, &inner, prec)?;
    Ok(v.mul(&u))
}

/// Outcome of comparing the 1-sum with a truncated divergent series.
#[derive(Clone, Debug)]
pub struct AsymptoticsCheck {
    pub error: Ball,
    pub first_omitted: Ball,
    pub pass: bool,
}

/// Compare `ф(1/z)` with `Σ_{n<N} n!·u_n z^{-n}` for real `z ≥ 8`.
pub fn gevrey_asymptotics_check(spec: &AntiESpec, z: &Rational, n: usize, ctx: &PrecisionContext) -> Result<AsymptoticsCheck> {
    if *z < 8 {
        return Err(Error::Parameter("gevrey_asymptotics_check needs z >= 8".into()));
    }
    if n == 0 {
        return Err(Error::Parameter("gevrey_asymptotics_check needs N >= 1".into()));
    }
    let prec = ctx.work_bits;
    let w = Rational::from(z.recip_ref());
    let sum = laplace_sum(spec, &ComplexBall::from_rational(&w, prec), &Direction::zero(), ctx)?;
    let coeffs = spec.divergent_coeffs(n + 1);
    let mut partial = Rational::new();
    let mut wp = Rational::from(1);
    for c in coeffs.iter().take(n) {
        partial += Rational::from(c * &wp);
        wp *= &w;
    }
    let omitted = Rational::from(&coeffs[n] * &wp).abs();
    let diff = sum.re.sub(&Ball::from_rational(&partial, prec)).abs().with_error(sum.im.rad());
    let first_omitted = Ball::from_rational(&omitted, prec);
    let pass = if omitted == 0 {
        diff.contains_zero()
    } else {
        diff.upper() <= Float::with_val(prec, first_omitted.lower() * 2u32)
    };
    Ok(AsymptoticsCheck { error: diff, first_omitted, pass })
}
