use super::*;
use rug::ops::Pow;

fn ints(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

fn vector(vals: Vec<Ball>, digits: u32) -> ConstantVector {
    let labels = (0..vals.len()).map(|i| format!("x{i}")).collect();
    ConstantVector::new(labels, vals, digits).unwrap()
}

fn h(e: u32) -> Integer {
    Integer::from(10).pow(e)
}

#[test]
fn small_integers() {
    let p = 200;
    let v = vector(vec![Ball::from_i64(1, p), Ball::from_i64(2, p), Ball::from_i64(3, p)], 50);
    let r = pslq(&v, &h(6), &PrecisionContext::at(p));
    assert_eq!(r.verdict, Verdict::Found);
    let m = r.relation.unwrap();
    assert!(residual(&m, &v.values).contains_zero());
}

#[test]
fn duplicated_entry() {
    let p = 200;
    let e = Ball::one(p).exp();
    let v = vector(vec![Ball::one(p), e.clone(), e], 50);
    let r = pslq(&v, &h(6), &PrecisionContext::at(p));
    assert_eq!(r.relation, Some(ints(&[0, 1, -1])));
}

#[test]
fn e_minus_one_control() {
    let r = probe_conjecture3(&Rational::from(1), 0, 60, &h(10), &PrecisionContext::at(256)).unwrap();
    assert_eq!(r.verdict, Verdict::Found);
    assert_eq!(r.relation, Some(ints(&[1, -1, 1])));
}

#[test]
fn pi_and_e_are_unrelated_at_low_height() {
    let p = 300;
    let v = vector(vec![Ball::one(p), Ball::pi(p), Ball::one(p).exp()], 60);
    let r = pslq(&v, &h(8), &PrecisionContext::at(p));
    assert_eq!(r.verdict, Verdict::NoneUpToHeight);
    assert!(r.norm_bound.unwrap() > 1e8);
}

#[test]
fn too_few_digits() {
    let p = 200;
    let v = vector(vec![Ball::one(p), Ball::pi(p)], 20);
    assert_eq!(pslq(&v, &h(12), &PrecisionContext::at(p)).verdict, Verdict::InsufficientPrecision);
}

#[test]
fn planted_relation() {
    let p = 300;
    let x1 = Ball::from_i64(2, p).sqrt().unwrap();
    let x2 = Ball::from_i64(3, p).ln().unwrap();
    let x3 = Ball::pi(p);
    // 12345 x1 - 678 x2 + 91011 x3 + 4321 x4 = 0
    let x4 = x1.mul_i64(12345).sub(&x2.mul_i64(678)).add(&x3.mul_i64(91011)).div_i64(-4321).unwrap();
    let r = pslq(&vector(vec![x1, x2, x3, x4], 60), &h(6), &PrecisionContext::at(p));
    assert_eq!(r.relation, Some(ints(&[12345, -678, 91011, 4321])));
}
