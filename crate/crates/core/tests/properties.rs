//! Property tests for enclosure soundness.

use gevrey_core::ball::{arith, ArithOp};
use gevrey_core::borel::{integrate, quad_semiinfinite, FnIntegrand, Majorant};
use gevrey_core::series::{eval_e, tail_bound, EFunctionSpec};
use gevrey_core::{Ball, ComplexBall, Mag, PrecisionContext, Rational};
use proptest::prelude::*;
use rug::Float;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..1_000).prop_map(|(n, d)| Rational::from((n, d)))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != 0)
}

fn op() -> impl Strategy<Value = ArithOp> {
    prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul), Just(ArithOp::Div)]
}

fn exact(op: ArithOp, x: &Rational, y: &Rational) -> Rational {
    match op {
        ArithOp::Add => Rational::from(x + y),
        ArithOp::Sub => Rational::from(x - y),
        ArithOp::Mul => Rational::from(x * y),
        ArithOp::Div => Rational::from(x / y),
    }
}

fn widened(q: &Rational, prec: u32, e: i64) -> ComplexBall {
    let b = Ball::from_rational(q, prec);
    ComplexBall::real(Ball::new(b.mid().clone(), b.rad().add(&Mag::pow2(e))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn arithmetic_is_sound(x in rational(), y in nonzero_rational(), op in op(), bits in 64u32..300) {
        let ctx = PrecisionContext::at(bits);
        let xb = ComplexBall::from_rational(&x, bits);
        let yb = ComplexBall::from_rational(&y, bits);
        let r = arith(op, &xb, &yb, &ctx).unwrap();
        prop_assert!(r.re.contains_rational(&exact(op, &x, &y)));
        prop_assert!(r.im.contains_rational(&Rational::new()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn inclusion_is_monotone(x in rational(), y in nonzero_rational(), op in op(), e1 in -80i64..-20, de in 0i64..15) {
        let ctx = PrecisionContext::at(128);
        let (xs, ys) = (widened(&x, 128, e1 - de), widened(&y, 128, e1 - de));
        let (xl, yl) = (widened(&x, 128, e1), widened(&y, 128, e1));
        prop_assume!(!yl.contains_zero());
        let small = arith(op, &xs, &ys, &ctx).unwrap();
        let large = arith(op, &xl, &yl, &ctx).unwrap();
        prop_assert!(large.contains(&small));
    }

    #[test]
    fn complex_products_are_sound(a in rational(), b in rational(), c in rational(), d in rational()) {
        let x = ComplexBall::from_rationals(&a, &b, 96);
        let y = ComplexBall::from_rationals(&c, &d, 96);
        let p = x.mul(&y);
        prop_assert!(p.re.contains_rational(&(Rational::from(&a * &c) - Rational::from(&b * &d))));
        prop_assert!(p.im.contains_rational(&(Rational::from(&a * &d) + Rational::from(&b * &c))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// The claimed tail majorant bounds the exact omitted part.
    #[test]
    fn series_tail_is_sound(zn in -400i64..400, a_n in 1i64..30, a_d in 1i64..7, s in 1u32..4, extra in 0usize..30) {
        let z = Rational::from((zn, 100));
        let a = Rational::from((a_n, a_d));
        let spec = EFunctionSpec::eas(&a, s).unwrap();
        let zabs = Mag::from_rational(&z);
        let n = (2.0 * zabs.to_f64()).ceil() as usize + extra;
        let bound = tail_bound(spec.stream.growth(), &zabs, n);
        let prec = 400;
        let full = eval_e(&spec, &ComplexBall::from_rational(&z, prec), &PrecisionContext::at(prec)).unwrap().re;
        let mut partial = Rational::new();
        let mut zp = Rational::from(1);
        for c in spec.stream.prefix(n) {
            partial += c * &zp;
            zp *= &z;
        }
        let diff = full.sub(&Ball::from_rational(&partial, prec)).abs();
        prop_assert!(diff.lower() <= *bound.as_float());
    }

    /// `∫_0^∞ t^k e^{-λt} dt = k!/λ^{k+1}`.
    #[test]
    fn laplace_of_monomials(k in 0u32..5, ln in 1i64..40, ld in 1i64..8) {
        let lambda = Rational::from((ln, ld));
        let prec = 128;
        let lb = ComplexBall::from_rational(&lambda, prec);
        let f = FnIntegrand::new(move |t: &ComplexBall, p: u32| {
            let t = t.round_to(p.max(t.prec()));
            Ok(t.powi(k as i32)?.mul(&t.mul(&lb.round_to(p)).neg().exp()))
        })
        .real_symmetric();
        let maj = Majorant { c: Mag::one(), p: k as f64, k: 0, lambda: Float::with_val(64, &lambda) };
        let v = quad_semiinfinite(&f, &maj, &Mag::pow2(-90), prec).unwrap();
        let mut want = Rational::from(rug::Integer::from(rug::Integer::factorial(k)));
        for _ in 0..=k {
            want /= &lambda;
        }
        prop_assert!(v.re.contains_rational(&want), "{:?} vs {}", v.re, want.to_f64());
        prop_assert!(v.rad() <= Mag::pow2(-80));
    }

    /// `∫_0^1 dt/(1+ct) = log(1+c)/c`.
    #[test]
    fn rational_kernels(cn in 1i64..200, cd in 1i64..50) {
        let c = Rational::from((cn, cd));
        let prec = 128;
        let cb = ComplexBall::from_rational(&c, prec);
        let pole = -1.0 / c.to_f64();
        let f = FnIntegrand::new(move |t: &ComplexBall, p: u32| {
            let t = t.round_to(p.max(t.prec()));
            ComplexBall::one(p).add(&t.mul(&cb.round_to(p))).inv()
        })
        .singular_at(&[(pole, 0.0)])
        .real_symmetric();
        let v = integrate(&f, &Float::with_val(64, 0), &Float::with_val(64, 1), &Mag::pow2(-100), prec).unwrap();
        let want = Ball::from_rational(&Rational::from(&c + 1u32), 256).ln().unwrap().div(&Ball::from_rational(&c, 256)).unwrap();
        prop_assert!(v.re.overlaps(&want));
    }
}
