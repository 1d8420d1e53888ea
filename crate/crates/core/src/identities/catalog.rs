//! The twelve base identities and their parameter grids.

use std::sync::Arc;

use rug::Rational;

use super::integrals;
use super::{IdentityCase, Plan, Tolerance};
use crate::ball::{Ball, ComplexBall, Mag, PrecisionContext};
use crate::borel::{eval_mixed, laplace_of_e, laplace_sum, summed_derivative, AntiESpec, Direction, ETerm, GSeries, MixedFunctionSpec};
use crate::error::Result;
use crate::oracles;
use crate::series::{eval_e, factorial, psi, EFunctionSpec};

pub const BASE_IDS: [&str; 12] = ["I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I10", "I11", "I12"];

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn plan<F>(f: F) -> Plan
where
    F: Fn(&PrecisionContext) -> Result<ComplexBall> + Send + Sync + 'static,
{
    Arc::new(f)
}

fn real<F>(f: F) -> Plan
where
    F: Fn(&PrecisionContext) -> Result<Ball> + Send + Sync + 'static,
{
    Arc::new(move |c| f(c).map(ComplexBall::real))
}

fn split(ctx: &PrecisionContext, shift: i64) -> PrecisionContext {
    ctx.with_target(ctx.target_exp - shift)
}

/// `(-1)^s s!·E_{a,s+1}(-1) + e^{-1}·ф_{a,s+1;0}(1)`.
fn gamma_deriv_identity(a: &Rational, s: u32, ctx: &PrecisionContext) -> Result<ComplexBall> {
    let inner = split(ctx, 3);
    let prec = ctx.work_bits + 16;
    let e = eval_e(&EFunctionSpec::eas(a, s + 1)?, &ComplexBall::from_i64(-1, prec), &inner)?;
    let mut sf = Rational::from(factorial(s));
    if s % 2 == 1 {
        sf = -sf;
    }
    let phi = laplace_sum(&AntiESpec::new(a.clone(), s), &ComplexBall::one(prec), &Direction::zero(), &inner)?;
    let inv_e = ComplexBall::real(Ball::from_i64(-1, prec).exp());
    Ok(e.mul_rational(&sf).add(&inv_e.mul(&phi)))
}

/// `z·E_{1,2}(-z) - e^{-z}·ф_{1,2;0}(1/z)`, which equals `γ + log z`;
/// `with_log` subtracts `log z`.
fn gamma_log_spec(with_log: bool) -> MixedFunctionSpec {
    let mut m = MixedFunctionSpec::pure(AntiESpec::new(q(1, 1), 1));
    m.e_terms = vec![ETerm::new(EFunctionSpec::eas(&q(1, 1), 2).expect("a = 1 is admissible")).at_scale(q(-1, 1)).z_power(1)];
    m.antie_coeff = q(-1, 1);
    m.antie_multiplier = Some(ETerm::new(EFunctionSpec::exp(&q(-1, 1))));
    if with_log {
        m.log_coeff = q(-1, 1);
    }
    m
}

fn mixed_at(spec: &MixedFunctionSpec, z: &Rational, ctx: &PrecisionContext) -> Result<ComplexBall> {
    eval_mixed(spec, &ComplexBall::from_rational(z, ctx.work_bits), &Direction::zero(), ctx)
}

fn binomial_residual(s: &Rational, z: &Rational, ctx: &PrecisionContext) -> Result<ComplexBall> {
    let spec = AntiESpec::binomial(s);
    let prec = ctx.work_bits + 16;
    let inner = split(ctx, 4);
    let zb = Ball::from_rational(z, prec);
    let f = laplace_sum(&spec, &ComplexBall::real(zb.clone()), &Direction::zero(), &inner)?.re;
    let d = summed_derivative(&spec, z, 1, &inner)?;
    // z²ф' + (1 - s z)ф - 1
    let coeff = Ball::one(prec).sub(&Ball::from_rational(&Rational::from(s * z), prec));
    let r = zb.sqr().mul(&d).add(&coeff.mul(&f)).sub(&Ball::one(prec));
    Ok(ComplexBall::real(r))
}

pub fn gamma_product(ctx: &PrecisionContext) -> Result<Ball> {
    // √6/(96π³)·Γ(1/24)Γ(5/24)Γ(7/24)Γ(11/24)
    let inner = split(ctx, 6);
    let prec = ctx.work_bits + 32;
    let mut p = Ball::from_i64(6, prec).sqrt()?.div_i64(96)?;
    let pi = oracles::pi_oracle(&inner);
    p = p.div(&pi.sqr().mul(&pi))?;
    for n in [1, 5, 7, 11] {
        p = p.mul(&oracles::gamma_oracle(&q(n, 24), &inner)?);
    }
    Ok(p)
}

fn duality_cases() -> Vec<(&'static str, GSeries)> {
    let half_pow = |n: u32| Rational::from((rug::Integer::from(1), rug::Integer::from(1) << n));
    vec![
        ("1/(1-x/2)", GSeries::new(half_pow, Mag::one(), Mag::from_f64(0.5))),
        ("x", GSeries::new(|n| if n == 1 { q(1, 1) } else { q(0, 1) }, Mag::from_u64(2), Mag::from_f64(0.5))),
        (
            "-log(1-x/2)",
            GSeries::new(move |n| if n == 0 { q(0, 1) } else { half_pow(n) / n }, Mag::one(), Mag::from_f64(0.5)),
        ),
    ]
}

fn psi_points() -> Vec<(Rational, Rational)> {
    vec![
        (q(1, 3), q(0, 1)),
        (q(1, 2), q(0, 1)),
        (q(1, 1), q(0, 1)),
        (q(2, 1), q(0, 1)),
        (q(3, 1), q(0, 1)),
        (q(-1, 1), q(0, 1)),
        (q(-5, 2), q(0, 1)),
        (q(0, 1), q(1, 1)),
        (q(1, 1), q(1, 1)),
        (q(-2, 1), q(3, 2)),
    ]
}

fn fmt_complex(re: &Rational, im: &Rational) -> String {
    if *im == 0 {
        re.to_string()
    } else if *re == 0 {
        format!("{im}i")
    } else if *im > 0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}{im}i")
    }
}

/// Every identity instance in catalog order.
pub fn catalog() -> Vec<IdentityCase> {
    let mut out: Vec<IdentityCase> = Vec::new();
    let mut push = |mut c: IdentityCase| {
        c.instance = out.iter().filter(|o| o.id == c.id).count();
        out.push(c);
    };

    // I1
    let grid = [q(1, 3), q(1, 2), q(2, 3), q(1, 1), q(3, 2), q(2, 1), q(5, 2)];
    for a in &grid {
        for s in 0..3u32 {
            let (a1, a2) = (a.clone(), a.clone());
            push(
                IdentityCase::new(
                    "I1",
                    "Gamma derivative from an E-value and a Borel-Laplace sum at 1",
                    plan(move |c| gamma_deriv_identity(&a1, s, c)),
                    real(move |c| oracles::gamma_deriv_oracle(&a2, s, c)),
                )
                .param("a", a)
                .param("s", s),
            );
        }
    }

    // I2
    for (z1, z2) in [(1, 2), (1, 5), (2, 5)] {
        push(
            IdentityCase::new(
                "I2",
                "z E_{1,2}(-z) - e^{-z} phi_{1,2}(1/z) - log z is constant",
                plan(move |c| mixed_at(&gamma_log_spec(true), &q(z1, 1), c)),
                plan(move |c| mixed_at(&gamma_log_spec(true), &q(z2, 1), c)),
            )
            .param("z_lhs", z1)
            .param("z_rhs", z2),
        );
    }

    // I3
    push(IdentityCase::new(
        "I3",
        "Euler's constant from E_{1,2}(-1) and phi_{1,2}(1)",
        plan(|c| mixed_at(&gamma_log_spec(false), &q(1, 1), c)),
        real(|c| Ok(oracles::euler_gamma_oracle(c))),
    ));

    // I4
    push(
        IdentityCase::new(
            "I4",
            "log 2 as the difference of the gamma-log combination at 2z and z",
            plan(|c| {
                let inner = split(c, 1);
                let spec = gamma_log_spec(false);
                Ok(mixed_at(&spec, &q(2, 1), &inner)?.sub(&mixed_at(&spec, &q(1, 1), &inner)?))
            }),
            real(|c| oracles::log_oracle(&q(2, 1), c)),
        )
        .param("z", 1),
    );

    // I5
    let half_pi = || real(|c| Ok(oracles::pi_oracle(c).mul_2exp(-1)));
    push(IdentityCase::new("I5", "Dirichlet integral via the Laplace dual", real(integrals::sine_integral_dual), half_pi()).param("method", "dual"));
    push(
        IdentityCase::new("I5", "Dirichlet integral by direct quadrature", real(integrals::sine_integral_direct), half_pi())
            .param("method", "direct")
            .tolerance(Tolerance::Digits(10)),
    );

    // I6: the Gamma product is the transform of I0(x)³; I0(x) alone gives 8^{-1/2}
    push(
        IdentityCase::new(
            "I6",
            "Laplace transform of I0 at 3 against 8^{-1/2}",
            real(integrals::bessel_laplace),
            real(|c| Ball::from_i64(8, c.work_bits + 16).sqrt()?.inv()),
        )
        .param("integrand", "I0(x)e^{-3x}")
        .tolerance(Tolerance::Digits(30)),
    );
    push(
        IdentityCase::new(
            "I6",
            "Laplace transform of I0^3 at 3 against the Gamma product",
            real(integrals::bessel_cube_laplace),
            real(gamma_product),
        )
        .param("integrand", "I0(x)^3e^{-3x}")
        .tolerance(Tolerance::Digits(30)),
    );

    // I7
    push(
        IdentityCase::new(
            "I7",
            "Gompertz constant: phi_{1,2}(1) against the integral of e^{-t}/(1+t)",
            plan(|c| laplace_sum(&AntiESpec::new(q(1, 1), 1), &ComplexBall::one(c.work_bits), &Direction::zero(), c)),
            real(integrals::gompertz_direct),
        )
        .tolerance(Tolerance::Digits(40)),
    );

    // I8
    for s in [q(-1, 1), q(1, 2), q(-3, 2)] {
        for z in [q(1, 2), q(1, 1), q(2, 1)] {
            let (s1, z1) = (s.clone(), z.clone());
            push(
                IdentityCase::new(
                    "I8",
                    "binomial sum solves z^2 f' + (1 - s z) f = 1",
                    plan(move |c| binomial_residual(&s1, &z1, c)),
                    plan(|c| Ok(ComplexBall::zero(c.work_bits))),
                )
                .param("s", &s)
                .param("z", &z)
                .tolerance(Tolerance::Exp2(-100)),
            );
        }
    }

    // I9
    push(IdentityCase::new(
        "I9",
        "Euler's constant as an integral of rational and exponential terms",
        real(integrals::euler_constant_integral),
        real(|c| Ok(oracles::euler_gamma_oracle(c))),
    ));

    // I10
    push(
        IdentityCase::new(
            "I10",
            "integral of cos x/(1+x^2) equals pi/(2e)",
            real(integrals::cosine_lorentz),
            real(|c| {
                let prec = c.work_bits + 16;
                oracles::pi_oracle(c).div(&Ball::from_i64(1, prec).exp().mul_2exp(1))
            }),
        )
        .tolerance(Tolerance::Digits(12)),
    );

    // I11
    for (name, g) in duality_cases() {
        let g1 = g.clone();
        push(
            IdentityCase::new(
                "I11",
                "(1/z) G(1/z) equals the Laplace transform of the associated E-function",
                plan(move |c| {
                    let w = ComplexBall::one(c.work_bits);
                    Ok(w.mul(&g1.eval(&w, c)?))
                }),
                plan(move |c| Ok(laplace_of_e(&g, &ComplexBall::one(c.work_bits), c)?.1)),
            )
            .param("G", name)
            .param("z", 1),
        );
    }

    // I12
    for (re, im) in psi_points() {
        let (re1, im1) = (re.clone(), im.clone());
        let (re2, im2) = (re.clone(), im.clone());
        push(
            IdentityCase::new(
                "I12",
                "psi_1 for a = 1 equals (e^z - 1)/z",
                plan(move |c| psi(&q(1, 1), 1, &ComplexBall::from_rationals(&re1, &im1, c.work_bits + 16), c)),
                plan(move |c| {
                    let z = ComplexBall::from_rationals(&re2, &im2, c.work_bits + 16);
                    z.exp().sub(&ComplexBall::one(c.work_bits + 16)).div(&z)
                }),
            )
            .param("z", fmt_complex(&re, &im)),
        );
    }

    out
}
