//! Direct quadratures of the classical integrals in the catalog.
//!
//! Oscillatory tails `∫_R^∞` are moved onto the vertical ray `x = R + iy`,
//! where the integrand decays like `e^{-y}`.

use rug::{Float, Rational};

use crate::ball::{Ball, ComplexBall, Mag, PrecisionContext};
use crate::borel::quad::{integrate, integrate_pieces, prec_for, quad_semiinfinite, FnIntegrand, Majorant};
use crate::error::Result;
use crate::series::{eval_e, EFunctionSpec};

fn fl(v: i64) -> Float {
    Float::with_val(64, v)
}

/// `Σ_{j≥j0} sign_j c_j t^j` for a small ball `t` with `|t| ≤ 1`; the
/// coefficient callback must satisfy `|c_j| ≤ 1/j!`, so the tail past `J`
/// is at most `2|t|^J/J!`.
fn small_series(t: &ComplexBall, prec: u32, j0: u32, coeff: impl Fn(u32) -> Rational) -> ComplexBall {
    let eps = Mag::pow2(-(prec as i64) - 8);
    let tm = t.abs_upper();
    let mut terms = Vec::new();
    let mut bound = tm.powi(j0);
    let mut fact = Rational::from(crate::series::factorial(j0));
    let mut j = j0;
    loop {
        terms.push(coeff(j));
        j += 1;
        bound = bound.mul(&tm);
        fact *= j;
        let tail = bound.mul(&Mag::from_rational(&fact.clone().recip())).mul_2exp(1);
        if tail <= eps {
            let mut acc = ComplexBall::zero(prec);
            for c in terms.iter().rev() {
                acc = acc.mul(t).add(&ComplexBall::from_rational(c, prec));
            }
            return acc.mul(&t.powi(j0 as i32).expect("non-negative power")).with_error(&tail);
        }
    }
}

/// `sin(t)/t`, entire.
pub fn sinc(t: &ComplexBall, prec: u32) -> Result<ComplexBall> {
    if t.abs_upper() <= Mag::one() {
        // Σ (-1)^m t^{2m}/(2m+1)!, as a series in t with odd coefficients zero
        let v = small_series(t, prec, 0, |j| {
            if j % 2 == 1 {
                Rational::new()
            } else {
                let m = j / 2;
                let f = Rational::from(crate::series::factorial(j + 1)).recip();
                if m % 2 == 0 { f } else { -f }
            }
        });
        return Ok(v);
    }
    t.sin().div(t)
}

/// `(1 - (1+x)e^{-x})/(x(1+x))`, analytic except at `x = -1`.
pub fn euler_integrand(x: &ComplexBall, prec: u32) -> Result<ComplexBall> {
    let x = x.round_to(prec.max(x.prec()));
    let one = ComplexBall::one(prec);
    let onex = one.add(&x);
    if x.abs_upper() <= Mag::pow2(-1) {
        // Σ_{j≥1} (-1)^{j+1} j/(j+1)! x^j
        let h = small_series(&x, prec, 1, |j| {
            let c = Rational::from((j, 1)) / Rational::from(crate::series::factorial(j + 1));
            if j % 2 == 1 { c } else { -c }
        });
        return h.div(&onex);
    }
    let num = one.sub(&onex.mul(&x.neg().exp()));
    num.div(&x.mul(&onex))
}

/// `∫_R^∞ e^{ix} g(x) dx = i e^{iR} ∫_0^∞ e^{-y} g(R+iy) dy` with
/// `|g(R+iy)| ≤ c` and the given singularities of `y ↦ g(R+iy)`.
fn rotated_tail<G>(r: i64, g: G, c: Mag, singular: &[(f64, f64)], target: &Mag, prec: u32) -> Result<ComplexBall>
where
    G: Fn(&ComplexBall) -> Result<ComplexBall> + Sync,
{
    let rb = ComplexBall::from_i64(r, prec);
    let integrand = FnIntegrand::new(move |y: &ComplexBall, p: u32| {
        let y = y.round_to(p.max(y.prec()));
        let x = rb.round_to(p).add(&y.mul(&ComplexBall::i(p)));
        Ok(g(&x)?.mul(&y.neg().exp()))
    })
    .singular_at(singular);
    let maj = Majorant::exponential(c, fl(1));
    let v = quad_semiinfinite(&integrand, &maj, target, prec)?;
    let phase = ComplexBall::cis(&Ball::from_i64(r, prec));
    Ok(ComplexBall::i(prec).mul(&phase).mul(&v))
}

/// `∫_0^∞ sin(x)/x dx` by `∫_0^R` plus the rotated tail, `R = 200`.
pub fn sine_integral_direct(ctx: &PrecisionContext) -> Result<Ball> {
    const R: i64 = 200;
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits);
    let f = FnIntegrand::new(|t: &ComplexBall, p: u32| sinc(&t.round_to(p.max(t.prec())), p)).real_symmetric();
    let head = integrate(&f, &fl(0), &fl(R), &target.mul_2exp(-1), prec)?;
    // g(x) = 1/x, |g| ≤ 1/R on the ray; only the imaginary part of ∫ e^{ix}/x is needed
    let c = Mag::one().div_lower(&fl(R));
    let tail = rotated_tail(R, |x| x.inv(), c, &[(0.0, R as f64)], &target.mul_2exp(-2), prec)?;
    Ok(head.re.add(&tail.im))
}

/// `∫_0^∞ sin(x)/x dx = ∫_0^∞ dt/(1+t²) = 2∫_0^1 ds/(1+s²)`.
pub fn sine_integral_dual(ctx: &PrecisionContext) -> Result<Ball> {
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits);
    let f = FnIntegrand::new(|s: &ComplexBall, p: u32| {
        let s = s.round_to(p.max(s.prec()));
        ComplexBall::one(p).add(&s.sqr()).inv()
    })
    .singular_at(&[(0.0, 1.0), (0.0, -1.0)])
    .real_symmetric();
    let v = integrate(&f, &fl(0), &fl(1), &target.mul_2exp(-2), prec)?;
    Ok(v.re.mul_2exp(1))
}

/// `∫_0^∞ cos(x)/(1+x²) dx` by `∫_0^R` plus the rotated tail, `R = 25`.
pub fn cosine_lorentz(ctx: &PrecisionContext) -> Result<Ball> {
    const R: i64 = 25;
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits);
    let f = FnIntegrand::new(|x: &ComplexBall, p: u32| {
        let x = x.round_to(p.max(x.prec()));
        x.cos().div(&ComplexBall::one(p).add(&x.sqr()))
    })
    .singular_at(&[(0.0, 1.0), (0.0, -1.0)])
    .real_symmetric();
    let points: Vec<Float> = [0, 1, 2, 4, 8, 16, R].iter().map(|&v| fl(v)).collect();
    let head = integrate_pieces(&f, &points, &target.mul_2exp(-1), prec)?;
    // |1 + (R+iy)²| ≥ R² - 1
    let c = Mag::one().div_lower(&fl(R * R - 1));
    let sing = [(1.0, R as f64), (-1.0, R as f64)];
    let tail = rotated_tail(R, |x| ComplexBall::one(x.prec()).add(&x.sqr()).inv(), c, &sing, &target.mul_2exp(-2), prec)?;
    Ok(head.re.add(&tail.re))
}

/// `∫_0^∞ (1-(1+x)e^{-x})/(x(1+x)) dx`: quadrature on `[0, T]`, then
/// `∫_T^∞ = log(1+1/T) - E₁(T)` with `0 ≤ E₁(T) ≤ e^{-T}/T`.
pub fn euler_constant_integral(ctx: &PrecisionContext) -> Result<Ball> {
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits);
    let need = -target.log2_upper() * std::f64::consts::LN_2;
    let t = (need.max(8.0) + 4.0).ceil() as i64;
    let f = FnIntegrand::new(euler_integrand).singular_at(&[(-1.0, 0.0)]).real_symmetric();
    let points: Vec<Float> = std::iter::once(0).chain((0..).map(|j| 1i64 << j).take_while(|&v| v < t)).chain(std::iter::once(t)).map(fl).collect();
    let head = integrate_pieces(&f, &points, &target.mul_2exp(-1), prec)?;
    let ln_part = Ball::from_rational(&Rational::from((t + 1, t)), prec).ln()?;
    let e1_max = Mag::exp_neg(&fl(t)).div_lower(&fl(t));
    let half = e1_max.mul_2exp(-1);
    let e1 = Ball::exact(Float::with_val(prec, half.as_float())).with_error(&half);
    Ok(head.re.add(&ln_part).sub(&e1))
}

/// `∫_0^∞ I₀(x)e^{-3x} dx`, with `I₀(x) ≤ e^x` on the real ray.
pub fn bessel_laplace(ctx: &PrecisionContext) -> Result<Ball> {
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits);
    let spec = EFunctionSpec::bessel_i0();
    let inner_exp = ctx.target_exp - 8;
    let f = FnIntegrand::new(move |x: &ComplexBall, p: u32| {
        let x = x.round_to(p.max(x.prec()));
        let c = PrecisionContext { work_bits: p, target_exp: inner_exp.min(-(p as i64) + 16) };
        Ok(eval_e(&spec, &x, &c)?.mul(&x.mul_i64(-3).exp()))
    })
    .real_symmetric();
    let maj = Majorant::exponential(Mag::one(), fl(2));
    Ok(quad_semiinfinite(&f, &maj, &target, prec)?.re)
}

/// `d_j = ((2j)!)²/(32^j (j!)³)`, so that `I₀(x)e^{-x} ~ (2πx)^{-1/2} Σ d_j x^{-j}`.
fn hankel_coeffs(count: usize) -> Vec<Rational> {
    let mut d = vec![Rational::from(1)];
    for j in 0..count.saturating_sub(1) {
        let j = j as i64;
        let r = Rational::from(((2 * j + 1) * (2 * j + 1), 8 * (j + 1)));
        let next = Rational::from(&d[j as usize] * &r);
        d.push(next);
    }
    d
}

/// `∫_T^∞ (I₀(x)e^{-x})³ dx` for `T ≥ J+1`.
///
/// From `I₀(x)e^{-x} = (1/π)∫_0^2 e^{-xu}(u(2-u))^{-1/2} du`, expanding
/// `(1-u/2)^{-1/2}` on `[0,1]` and bounding the rest gives
/// `I₀(x)e^{-x} = (2πx)^{-1/2}(S_J(1/x) + δ)`, `|δ| ≤ 2d_J x^{-J} + e^{-x}√(2πx)`.
fn bessel_cube_tail(t: i64, j: usize, prec: u32) -> Result<Ball> {
    let d = hankel_coeffs(j + 1);
    let s = &d[..j];
    let cube = crate::series::convolve(&crate::series::convolve(s, s, 3 * j), s, 3 * j);
    // ∫_T^∞ x^{-3/2-m} dx = T^{-1/2-m}/(m+1/2)
    let tr = Rational::from(t);
    let mut main = Rational::new();
    let mut tp = Rational::from(1);
    for (m, e) in cube.iter().enumerate() {
        main += Rational::from(e * &tp) * Rational::from((2, 2 * m as i64 + 1));
        tp /= &tr;
    }
    let inv_sqrt_t = Ball::from_i64(t, prec).sqrt()?.inv()?;
    let two_pi = crate::oracles::pi_at(prec).mul_2exp(1);
    let norm = two_pi.mul(&two_pi).mul(&two_pi).sqrt()?.inv()?;
    let value = Ball::from_rational(&main, prec).mul(&inv_sqrt_t).mul(&norm);
    // κ bounds |δ| on [T, ∞); |g³ - P³| ≤ 3(S + κ)²κ (2πx)^{-3/2}
    let tf = Float::with_val(64, t);
    let kappa = Mag::from_rational(&(Rational::from(&d[j] * 2u32) / (0..j).fold(Rational::from(1), |acc, _| acc * t)))
        .add(&Mag::exp_neg(&tf).mul(&Mag::from_f64(2.0 * std::f64::consts::PI * t as f64).sqrt()));
    let mut s_t = Rational::new();
    let mut tp = Rational::from(1);
    for c in s {
        s_t += Rational::from(c * &tp);
        tp /= &tr;
    }
    let sk = Mag::from_rational(&s_t).add(&kappa);
    let err = sk.mul(&sk).mul(&kappa).mul_u64(6).mul(&norm.abs_upper()).mul(&inv_sqrt_t.abs_upper());
    Ok(value.with_error(&err))
}

/// `∫_0^∞ I₀(x)³e^{-3x} dx`: quadrature on `[0, T]` plus the Hankel-type tail.
pub fn bessel_cube_laplace(ctx: &PrecisionContext) -> Result<Ball> {
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits) + 16;
    let bits = -target.log2_upper() + 4.0;
    let t = (bits * std::f64::consts::LN_2 + 0.5 * bits.log2() + 8.0).ceil() as i64;
    // the remainder bound needs J < T; there d_J T^{-J} ≈ (2e)^{-J}
    let d = hankel_coeffs(t as usize);
    let mut j = 1usize;
    while j + 1 < d.len() && (d[j].to_f64().log2() - j as f64 * (t as f64).log2()) > -bits {
        j += 1;
    }
    let spec = EFunctionSpec::bessel_i0();
    let inner_exp = ctx.target_exp - 8;
    let f = FnIntegrand::new(move |x: &ComplexBall, p: u32| {
        let x = x.round_to(p.max(x.prec()));
        let c = PrecisionContext { work_bits: p, target_exp: inner_exp.min(-(p as i64) + 16) };
        let g = eval_e(&spec, &x, &c)?.mul(&x.neg().exp());
        Ok(g.sqr().mul(&g))
    })
    .real_symmetric();
    let points: Vec<Float> = std::iter::once(0).chain((0..).map(|k| 1i64 << k).take_while(|&v| v < t)).chain(std::iter::once(t)).map(fl).collect();
    let head = integrate_pieces(&f, &points, &target.mul_2exp(-1), prec)?;
    let tail = bessel_cube_tail(t, j, prec)?;
    Ok(head.re.add(&tail))
}

/// `∫_0^∞ e^{-t}/(1+t) dt`.
pub fn gompertz_direct(ctx: &PrecisionContext) -> Result<Ball> {
    let target = ctx.target();
    let prec = prec_for(&target, ctx.work_bits);
    let f = FnIntegrand::new(|t: &ComplexBall, p: u32| {
        let t = t.round_to(p.max(t.prec()));
        t.neg().exp().div(&ComplexBall::one(p).add(&t))
    })
    .singular_at(&[(-1.0, 0.0)])
    .real_symmetric();
    let maj = Majorant::exponential(Mag::one(), fl(1));
    Ok(quad_semiinfinite(&f, &maj, &target, prec)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(b: &Ball, v: f64, tol: f64) -> bool {
        (b.mid().to_f64() - v).abs() < tol
    }

    #[test]
    fn sinc_branches_agree() {
        let t = ComplexBall::from_rationals(&Rational::from((9, 10)), &Rational::from((1, 5)), 128);
        let a = sinc(&t, 128).unwrap();
        let b = t.sin().div(&t).unwrap();
        assert!(a.overlaps(&b));
        assert!(sinc(&ComplexBall::zero(128), 128).unwrap().contains_rational(&Rational::from(1)));
    }

    #[test]
    fn euler_integrand_branches_agree() {
        let x = ComplexBall::from_rationals(&Rational::from((2, 5)), &Rational::from((1, 10)), 128);
        let a = euler_integrand(&x, 128).unwrap();
        let one = ComplexBall::one(128);
        let onex = one.add(&x);
        let b = one.sub(&onex.mul(&x.neg().exp())).div(&x.mul(&onex)).unwrap();
        assert!(a.overlaps(&b));
    }

    #[test]
    fn classical_values() {
        let ctx = PrecisionContext::at(128);
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(near(&sine_integral_dual(&ctx).unwrap(), half_pi, 1e-15));
        assert!(near(&sine_integral_direct(&ctx).unwrap(), half_pi, 1e-15));
        let want = std::f64::consts::PI / (2.0 * std::f64::consts::E);
        assert!(near(&cosine_lorentz(&ctx).unwrap(), want, 1e-15));
        assert!(near(&euler_constant_integral(&ctx).unwrap(), 0.577_215_664_901_532_9, 1e-15));
        assert!(near(&bessel_laplace(&ctx).unwrap(), 8f64.sqrt().recip(), 1e-15));
        assert!(near(&gompertz_direct(&ctx).unwrap(), 0.596_347_362_323_194_1, 1e-15));
        assert!(near(&bessel_cube_laplace(&ctx).unwrap(), 0.505_462_019_717_326, 1e-15));
    }
}
