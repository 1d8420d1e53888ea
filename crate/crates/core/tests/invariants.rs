//! Cross-module invariants: summation, oracles, identity evidence and probes.

use gevrey_core::borel::{eval_mixed, gevrey_asymptotics_check, laplace_sum, AntiESpec, Direction, ETerm, MixedFunctionSpec};
use gevrey_core::identities::{catalog, verify, Status};
use gevrey_core::instrument::count_during;
use gevrey_core::oracles::{euler_gamma_oracle, gamma_oracle, pi_oracle};
use gevrey_core::pslq::{pslq, residual, ConstantVector, Verdict};
use gevrey_core::series::{coeff_powerlog, eval_e, factorial, psi_residual, EFunctionSpec};
use gevrey_core::{Ball, ComplexBall, Integer, PrecisionContext, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn gompertz() -> Ball {
    Ball::from_decimal("0.596347362323194074341078499369279376074177860152548781573484910482327", 256)
        .unwrap()
        .with_error(&gevrey_core::Mag::pow2(-220))
}

#[test]
fn gompertz_from_two_kernels() {
    let ctx = PrecisionContext::at(192);
    let one = ComplexBall::one(192);
    let log_kernel = laplace_sum(&AntiESpec::new(q(1, 1), 1), &one, &Direction::zero(), &ctx).unwrap();
    let euler = laplace_sum(&AntiESpec::new(q(0, 1), 0), &one, &Direction::zero(), &ctx).unwrap();
    assert!(log_kernel.re.overlaps(&gompertz()));
    assert!(euler.re.overlaps(&gompertz()));
    let mixed = eval_mixed(&MixedFunctionSpec::pure(AntiESpec::new(q(0, 1), 0)), &one, &Direction::zero(), &ctx).unwrap();
    assert!(mixed.re.overlaps(&gompertz()));
}

#[test]
fn direction_robustness() {
    let ctx = PrecisionContext::at(128);
    let spec = AntiESpec::new(q(1, 2), 1);
    let z = ComplexBall::one(128);
    let base = laplace_sum(&spec, &z, &Direction::zero(), &ctx).unwrap();
    for t in [q(1, 16), q(-1, 16)] {
        let v = laplace_sum(&spec, &z, &Direction::PiFraction(t), &ctx).unwrap();
        assert!(v.overlaps(&base));
    }
}

#[test]
fn gamma_log_combination_is_constant() {
    let ctx = PrecisionContext::at(192);
    let mut spec = MixedFunctionSpec::pure(AntiESpec::new(q(1, 1), 1));
    spec.e_terms = vec![ETerm::new(EFunctionSpec::eas(&q(1, 1), 2).unwrap()).at_scale(q(-1, 1)).z_power(1)];
    spec.antie_coeff = q(-1, 1);
    spec.antie_multiplier = Some(ETerm::new(EFunctionSpec::exp(&q(-1, 1))));
    spec.log_coeff = q(-1, 1);
    let g = euler_gamma_oracle(&ctx);
    for z in [1, 2, 5] {
        let v = eval_mixed(&spec, &ComplexBall::from_i64(z, 192), &Direction::zero(), &ctx).unwrap();
        assert!(v.re.overlaps(&g), "z = {z}");
    }
}

#[test]
fn asymptotics_examples() {
    let ctx = PrecisionContext::at(128);
    let log_case = gevrey_asymptotics_check(&AntiESpec::new(q(1, 1), 1), &q(20, 1), 5, &ctx).unwrap();
    assert!(log_case.pass);
    let poly = gevrey_asymptotics_check(&AntiESpec::new(q(2, 1), 0), &q(10, 1), 3, &ctx).unwrap();
    assert!(poly.pass && poly.error.contains_zero());
    let euler = gevrey_asymptotics_check(&AntiESpec::new(q(0, 1), 0), &q(10, 1), 10, &ctx).unwrap();
    assert!(euler.pass);
    assert!(euler.error.upper() < 1e-3);
}

#[test]
fn divergent_coefficients_match_powerlog() {
    for (a, k) in [(q(1, 2), 0), (q(1, 1), 1), (q(-3, 2), 2), (q(7, 3), 3)] {
        let spec = AntiESpec::new(a.clone(), k);
        for (n, c) in spec.divergent_coeffs(15).iter().enumerate() {
            assert_eq!(*c, Rational::from(factorial(n as u32)) * coeff_powerlog(&a, k, n as u32));
        }
    }
}

#[test]
fn psi_recurrence_grid() {
    let ctx = PrecisionContext::at(128);
    let zs = [(q(1, 2), q(0, 1)), (q(3, 1), q(0, 1)), (q(-2, 1), q(1, 1)), (q(1, 1), q(-2, 1)), (q(-3, 1), q(0, 1))];
    for a in [q(1, 3), q(1, 2), q(1, 1), q(5, 2)] {
        for j in 1..=4 {
            for (re, im) in &zs {
                let r = psi_residual(&a, j, &ComplexBall::from_rationals(re, im, 128), &ctx).unwrap();
                assert!(r.contains_zero(), "a={a} j={j} z={re}+{im}i");
            }
        }
    }
}

#[test]
fn precision_scaling_never_widens() {
    let spec = EFunctionSpec::eas(&q(1, 3), 2).unwrap();
    let anti = AntiESpec::new(q(1, 2), 1);
    let z = ComplexBall::from_rational(&q(3, 2), 512);
    let mut prev_e = None;
    let mut prev_l = None;
    for bits in [64, 128, 256, 512] {
        let ctx = PrecisionContext::at(bits);
        let e = eval_e(&spec, &z, &ctx).unwrap().rad();
        let l = laplace_sum(&anti, &z, &Direction::zero(), &ctx).unwrap().rad();
        if let (Some(pe), Some(pl)) = (&prev_e, &prev_l) {
            assert!(e <= *pe && l <= *pl);
        }
        prev_e = Some(e);
        prev_l = Some(l);
    }
}

#[test]
fn gamma_functional_equation_and_reflection() {
    let ctx = PrecisionContext::at(160);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = q(rng.random_range(1..=1000), rng.random_range(1..=100));
        let a = if a > 10 { Rational::from(&a / 100u32) } else { a };
        let g0 = gamma_oracle(&a, &ctx).unwrap();
        let g1 = gamma_oracle(&Rational::from(&a + 1u32), &ctx).unwrap();
        let ratio = g1.div(&g0.mul_rational(&a)).unwrap();
        assert!(ratio.contains_rational(&q(1, 1)), "a = {a}");
    }
    let prod = gamma_oracle(&q(1, 4), &ctx).unwrap().mul(&gamma_oracle(&q(3, 4), &ctx).unwrap());
    let want = pi_oracle(&ctx).mul(&Ball::from_i64(2, 200).sqrt().unwrap());
    assert!(prod.overlaps(&want));
}

#[test]
fn evidence_paths_are_independent() {
    let ctx = PrecisionContext::at(128);
    for case in catalog().into_iter().filter(|c| c.id == "I1" || c.id == "I3").take(4) {
        let (_, lhs) = count_during(|| (case.lhs)(&ctx).unwrap());
        let (_, rhs) = count_during(|| (case.rhs)(&ctx).unwrap());
        // [borel, eas, oracle]
        assert!(lhs[0] > 0 && lhs[1] > 0 && lhs[2] == 0, "{} lhs {:?}", case.id, lhs);
        assert_eq!((rhs[0], rhs[1]), (0, 0), "{} rhs", case.id);
        assert!(rhs[2] > 0);
    }
}

#[test]
fn raising_precision_keeps_passes() {
    let case = catalog().into_iter().find(|c| c.id == "I3").unwrap();
    for bits in [128, 256, 384] {
        assert_eq!(verify(&case, &PrecisionContext::at(bits)).status, Status::Pass);
    }
}

/// Planted relations among 4-vectors with heights up to 10^6.
#[test]
fn planted_relations_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let prec = 320;
    let h = Integer::from(1_000_000);
    for trial in 0..100 {
        let base: Vec<Ball> = (0..3).map(|_| Ball::from_i64(rng.random_range(2..10_000), prec).sqrt().unwrap().ln().unwrap()).collect();
        let m: Vec<i64> = (0..4).map(|_| rng.random_range(-1_000_000..=1_000_000)).collect();
        let m3 = if m[3] == 0 { 1 } else { m[3] };
        let lin = base[0].mul_i64(m[0]).add(&base[1].mul_i64(m[1])).add(&base[2].mul_i64(m[2]));
        let x4 = lin.div_i64(-m3).unwrap();
        let mut vals = base.clone();
        vals.push(x4);
        let v = ConstantVector::new((0..4).map(|i| format!("x{i}")).collect(), vals, 70).unwrap();
        let r = pslq(&v, &h, &PrecisionContext::at(prec));
        assert_eq!(r.verdict, Verdict::Found, "trial {trial}");
        let found = r.relation.unwrap();
        // proportional to the planted vector
        let planted = [m[0], m[1], m[2], m3];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(Integer::from(&found[i] * planted[j]), Integer::from(&found[j] * planted[i]), "trial {trial}");
            }
        }
        // re-evaluated at doubled precision
        let again: Vec<Ball> = v.values.iter().map(|b| b.round_to(2 * prec)).collect();
        assert!(residual(&found, &again).contains_zero());
    }
}
