//! Derivatives of 1-sums on a Cauchy circle.

use rug::{Float, Rational};

use super::kernel::{laplace_sum, AntiESpec, Direction};
use crate::ball::{cauchy_derivative, Ball, ComplexBall, Mag, PrecisionContext};
use crate::error::{Error, Result};
use crate::series::factorial;

fn rpow(q: &Rational, e: u32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Upper bound of `∫_0^∞ (1+τ)^P τ^k e^{-λτ} dτ = Σ_j C(P,j)(j+k)!/λ^{j+k+1}`.
fn polynomial_laplace_bound(p: u32, k: u32, lambda_lower: &Float) -> Mag {
    let mut acc = Mag::zero();
    let mut binom = rug::Integer::from(1);
    for j in 0..=p {
        let fact = Rational::from(factorial(j + k) * binom.clone());
        let inv = Mag::one().div_lower(lambda_lower).powi(j + k + 1);
        acc = acc.add(&Mag::from_rational(&fact).mul(&inv));
        binom = binom * (p - j) / (j + 1);
    }
    acc
}

/// `d^m/dz^m ф_0(z)` for real `z > 0`, Cauchy circle of radius `min(z/4, 1/4)`.
pub fn summed_derivative(spec: &AntiESpec, z: &Rational, order: u32, ctx: &PrecisionContext) -> Result<Ball> {
    if *z <= 0 {
        return Err(Error::Domain("summed_derivative needs real z > 0".into()));
    }
    let quarter = Rational::from((1, 4));
    let zq = Rational::from(z / 4u32);
    let r = if zq < quarter { zq } else { quarter };
    let big_r = Rational::from(&r * 3u32);
    // On |w - z| ≤ R: Re(1/w) ≥ 1/(z+R) and |1/w| ≤ 1/(z-R).
    let lam = Float::with_val_round(64, Rational::from(z + &big_r).recip(), rug::float::Round::Down).0;
    let u_up = Mag::from_rational(&Rational::from(z - &big_r).recip());
    let am1 = Rational::from(&spec.a - 1u32);
    let p = if am1 > 0 { am1.ceil().numer().to_u32().unwrap_or(u32::MAX) } else { 0 };
    let m_bound = u_up.mul(&polynomial_laplace_bound(p, spec.k, &lam));
    let target = ctx.target();
    // each sample's error is scaled by m!/r^m in the result
    let amp = Rational::from(factorial(order)) / rpow(&r, order);
    let shift = Mag::from_rational(&amp).log2_upper().max(0.0) as i64 + 4;
    let inner = ctx.with_target(ctx.target_exp - shift);
    let zb = ComplexBall::from_rational(z, ctx.work_bits);
    let theta = Direction::zero();
    let v = cauchy_derivative(
        |w| laplace_sum(spec, w, &theta, &inner),
        &zb,
        order,
        &r,
        &big_r,
        &m_bound,
        true,
        &target,
        ctx.work_bits,
    )?;
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_exp() {
        let prec = 128;
        let z = ComplexBall::from_rational(&Rational::from((1, 3)), prec);
        // |e^w| ≤ e^{1/3 + 1} < 4 on the disc of radius 1
        let d = cauchy_derivative(
            |w| Ok(w.exp()),
            &z,
            2,
            &Rational::from((1, 4)),
            &Rational::from(1),
            &Mag::from_u64(4),
            true,
            &Mag::pow2(-100),
            prec,
        )
        .unwrap();
        let want = Ball::from_rational(&Rational::from((1, 3)), 200).exp();
        assert!(d.re.overlaps(&want));
        assert!(d.rad() <= Mag::pow2(-99));
    }

    #[test]
    fn euler_sum_derivative() {
        // ф(z) = ∫ e^{-t}/(1+tz) dt; ф'(z) = -∫ t e^{-t}/(1+tz)² dt, checked through the ODE
        // z²ф' + (1+z)ф - 1 = 0 at z = 1
        let ctx = PrecisionContext::at(128);
        let spec = AntiESpec::binomial(&Rational::from(-1));
        let z = Rational::from(1);
        let d = summed_derivative(&spec, &z, 1, &ctx).unwrap();
        let f = laplace_sum(&spec, &ComplexBall::one(128), &Direction::zero(), &ctx).unwrap().re;
        let res = d.add(&f.mul_i64(2)).sub(&Ball::one(128));
        assert!(res.contains_zero(), "{res:?}");
        assert!(*res.rad() <= Mag::pow2(-60));
    }
}
