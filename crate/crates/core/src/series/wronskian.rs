use rug::Rational;

use super::{deriv_e, EFunctionSpec};
use crate::ball::{ComplexBall, PrecisionContext};
use crate::error::{Error, Result};

/// A function that can be differentiated to any order at a ball.
pub trait Analytic: Send + Sync {
    fn deriv(&self, z: &ComplexBall, order: u32, ctx: &PrecisionContext) -> Result<ComplexBall>;
}

impl Analytic for EFunctionSpec {
    fn deriv(&self, z: &ComplexBall, order: u32, ctx: &PrecisionContext) -> Result<ComplexBall> {
        deriv_e(self, z, order, ctx)
    }
}

/// The constant function `c`.
pub struct ConstantFn(pub Rational);

impl Analytic for ConstantFn {
    fn deriv(&self, _z: &ComplexBall, order: u32, ctx: &PrecisionContext) -> Result<ComplexBall> {
        if order == 0 {
            Ok(ComplexBall::from_rational(&self.0, ctx.work_bits))
        } else {
            Ok(ComplexBall::zero(ctx.work_bits))
        }
    }
}

/// `ψ_j(z) = e^z E_{a,j}(-z)`.
pub struct PsiFn {
    pub j: u32,
    spec: Option<EFunctionSpec>,
}

impl PsiFn {
    pub fn new(a: &Rational, j: u32) -> Result<Self> {
        let spec = if j == 0 { None } else { Some(EFunctionSpec::eas(a, j)?) };
        Ok(PsiFn { j, spec })
    }
}

impl Analytic for PsiFn {
    fn deriv(&self, z: &ComplexBall, order: u32, ctx: &PrecisionContext) -> Result<ComplexBall> {
        let Some(spec) = &self.spec else {
            return ConstantFn(Rational::from(1)).deriv(z, order, ctx);
        };
        // Leibniz: Σ binom(m,i) e^z (-1)^i E^{(i)}(-z)
        let mz = z.neg();
        let mut acc = ComplexBall::zero(ctx.work_bits);
        let mut binom = rug::Integer::from(1);
        for i in 0..=order {
            let mut t = deriv_e(spec, &mz, i, ctx)?.mul_rational(&Rational::from(binom.clone()));
            if i % 2 == 1 {
                t = t.neg();
            }
            acc = acc.add(&t);
            binom = binom * (order - i) / (i + 1);
        }
        Ok(acc.mul(&z.exp()))
    }
}

/// Determinant of `[f_j^{(i)}(z0)]_{i,j<m}` by exact cofactor expansion
/// over column subsets (no division, so no spurious zero-divisor failures).
pub fn wronskian_det(fns: &[&dyn Analytic], z0: &ComplexBall, ctx: &PrecisionContext) -> Result<ComplexBall> {
    let m = fns.len();
    if m == 0 || m > 8 {
        return Err(Error::Parameter(format!("wronskian needs 1..=8 functions, got {m}")));
    }
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let row = fns.iter().map(|f| f.deriv(z0, i as u32, ctx)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    // det[mask] = determinant of rows 0..|mask| restricted to the columns in mask.
    let full = (1usize << m) - 1;
    let mut det: Vec<Option<ComplexBall>> = vec![None; full + 1];
    det[0] = Some(ComplexBall::one(ctx.work_bits));
    for mask in 1..=full {
        let r = mask.count_ones() as usize - 1;
        let mut acc = ComplexBall::zero(ctx.work_bits);
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = det[mask & !(1 << j)].as_ref().expect("subsets precede supersets");
            let term = rows[r][j].mul(sub);
            // expanding along the last row: sign (-1)^{#columns in mask after j}
            let after = (mask >> (j + 1)).count_ones();
            acc = if after % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        det[mask] = Some(acc);
    }
    Ok(det[full].take().expect("full mask computed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::Ball;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn one_and_exp() {
        let ctx = PrecisionContext::at(128);
        let one = ConstantFn(q(1, 1));
        let ex = EFunctionSpec::exp(&q(1, 1));
        let w = wronskian_det(&[&one, &ex], &ComplexBall::one(128), &ctx).unwrap();
        let e = Ball::one(128).exp();
        assert!(w.re.overlaps(&e));
        assert!((w.re.mid().to_f64() - std::f64::consts::E).abs() < 1e-8);
    }

    #[test]
    fn repeated_function_gives_zero() {
        let ctx = PrecisionContext::at(128);
        let ex = EFunctionSpec::exp(&q(1, 1));
        let z = ComplexBall::from_rationals(&q(1, 3), &q(-1, 2), 128);
        assert!(wronskian_det(&[&ex, &ex], &z, &ctx).unwrap().contains_zero());
    }

    #[test]
    fn one_exp_psi_nonvanishing() {
        let ctx = PrecisionContext::at(128);
        let one = ConstantFn(q(1, 1));
        let ex = EFunctionSpec::exp(&q(1, 1));
        let p = PsiFn::new(&q(1, 2), 1).unwrap();
        let w = wronskian_det(&[&one, &ex, &p], &ComplexBall::one(128), &ctx).unwrap();
        assert!(!w.contains_zero());
    }

    #[test]
    fn three_by_three_matches_vandermonde() {
        // Wronskian of e^{b_i z} at 0 is the Vandermonde determinant of the b_i.
        let ctx = PrecisionContext::at(128);
        let (b0, b1, b2) = (q(1, 1), q(2, 1), q(-1, 2));
        let f = [EFunctionSpec::exp(&b0), EFunctionSpec::exp(&b1), EFunctionSpec::exp(&b2)];
        let w = wronskian_det(&[&f[0], &f[1], &f[2]], &ComplexBall::zero(128), &ctx).unwrap();
        let v = Rational::from(&b1 - &b0) * Rational::from(&b2 - &b0) * Rational::from(&b2 - &b1);
        assert!(w.re.contains_rational(&v), "{w:?} vs {v}");
    }
}
