use super::*;

fn count(id: &str) -> usize {
    catalog().iter().filter(|c| c.id == id).count()
}

#[test]
fn catalog_shape() {
    let all = catalog();
    let mut ids: Vec<&str> = all.iter().map(|c| c.id.as_str()).collect();
    ids.dedup();
    assert_eq!(ids, BASE_IDS.to_vec());
    assert_eq!(count("I1"), 21);
    assert_eq!(count("I8"), 9);
    assert_eq!(count("I12"), 10);
    assert!(all.len() >= 30);
}

#[test]
fn trivial_gamma_instance_passes() {
    let case = catalog().into_iter().find(|c| c.id == "I1" && c.params == [("a".into(), "1".into()), ("s".into(), "0".into())]).unwrap();
    let r = verify(&case, &PrecisionContext::at(128));
    assert_eq!(r.status, Status::Pass, "{:?}", r.cause);
    assert!(r.lhs.unwrap().re.contains_rational(&rug::Rational::from(1)));
}

#[test]
fn empty_filter_is_empty() {
    assert!(verify_all(Some(&[]), &PrecisionContext::at(128), 2, 256).is_empty());
}

#[test]
fn disjoint_balls_fail_and_errors_are_reported() {
    let one: Plan = Arc::new(|c: &PrecisionContext| Ok(ComplexBall::one(c.work_bits)));
    let two: Plan = Arc::new(|c: &PrecisionContext| Ok(ComplexBall::from_i64(2, c.work_bits)));
    let bad: Plan = Arc::new(|_: &PrecisionContext| Err(crate::Error::Domain("nope".into())));
    let boom: Plan = Arc::new(|_: &PrecisionContext| panic!("boom"));
    let ctx = PrecisionContext::at(64);
    assert_eq!(verify(&IdentityCase::new("X", "", one.clone(), two), &ctx).status, Status::Fail);
    let r = verify(&IdentityCase::new("X", "", one.clone(), bad), &ctx);
    assert_eq!(r.status, Status::Fail);
    assert!(r.cause.unwrap().contains("nope"));
    assert_eq!(verify(&IdentityCase::new("X", "", one, boom), &ctx).status, Status::Fail);
}

#[test]
fn loose_balls_are_inconclusive() {
    let wide: Plan = Arc::new(|c: &PrecisionContext| Ok(ComplexBall::one(c.work_bits).with_error(&Mag::pow2(-10))));
    let one: Plan = Arc::new(|c: &PrecisionContext| Ok(ComplexBall::one(c.work_bits)));
    let r = verify(&IdentityCase::new("X", "", wide, one), &PrecisionContext::at(128));
    assert_eq!(r.status, Status::Inconclusive);
    assert_eq!(r.bits, 256);
}

#[test]
fn records_are_decimal_strings() {
    let case = catalog().into_iter().find(|c| c.id == "I12").unwrap();
    let r = verify(&case, &PrecisionContext::at(128));
    let rec = ReportRecord::from_report(&r, false);
    assert_eq!(rec.seconds, "0");
    assert_eq!(rec.status, Status::Pass);
    assert!(rec.lhs_mid.starts_with("1.1868"), "{}", rec.lhs_mid);
    assert_eq!(rec.params_string(), "z=1/3");
}
