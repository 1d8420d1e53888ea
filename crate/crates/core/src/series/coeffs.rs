//! Exact Taylor coefficients of the named families.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Is `a` a non-positive integer (a pole of `1/(n+a)`).
pub fn is_nonpositive_integer(a: &Rational) -> bool {
    a.denom() == &1u32 && *a.numer() <= 0
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `1/(n!·(n+a)^s)`, the coefficient of `z^n` in `E_{a,s}`.
pub fn coeff_eas(a: &Rational, s: u32, n: u32) -> Result<Rational> {
    if is_nonpositive_integer(a) {
        return Err(Error::Parameter(format!("a = {a} is a non-positive integer")));
    }
    let na = Rational::from(a + n);
    let mut den = Rational::from(factorial(n));
    for _ in 0..s {
        den *= &na;
    }
    Ok(den.recip())
}

/// Falling factorial `s(s-1)…(s-n+1)`.
pub fn coeff_binomial(s: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    for j in 0..n {
        acc *= Rational::from(s - j);
    }
    acc
}

/// Taylor coefficients of `log(1+x)` up to degree `n_max`.
fn log1p_series(n_max: usize) -> Vec<Rational> {
    let mut v = vec![Rational::new(); n_max + 1];
    for (j, c) in v.iter_mut().enumerate().skip(1) {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        *c = Rational::from((sign, j as u32));
    }
    v
}

/// Truncated product of two series.
pub fn convolve(f: &[Rational], g: &[Rational], n_max: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); n_max + 1];
    for (i, fi) in f.iter().enumerate().take(n_max + 1) {
        if *fi == 0 {
            continue;
        }
        for (j, gj) in g.iter().enumerate().take(n_max + 1 - i) {
            if *gj != 0 {
                out[i + j] += Rational::from(fi * gj);
            }
        }
    }
    out
}

/// `u_{a,k,n}` for `n = 0..=n_max`: coefficients of `(1+x)^{a-1}·log(1+x)^k`.
pub fn powerlog_series(a: &Rational, k: u32, n_max: usize) -> Vec<Rational> {
    let p = Rational::from(a - 1u32);
    let mut binom = Vec::with_capacity(n_max + 1);
    let mut b = Rational::from(1);
    for j in 0..=n_max {
        binom.push(b.clone());
        b *= Rational::from(&p - j as u32);
        b /= j as u32 + 1;
    }
    let log1p = log1p_series(n_max);
    let mut acc = binom;
    for _ in 0..k {
        acc = convolve(&acc, &log1p, n_max);
    }
    acc
}

pub fn coeff_powerlog(a: &Rational, k: u32, n: u32) -> Rational {
    powerlog_series(a, k, n as usize).swap_remove(n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn eas_examples() {
        assert_eq!(coeff_eas(&q(1, 1), 1, 0).unwrap(), 1);
        assert_eq!(coeff_eas(&q(1, 1), 2, 1).unwrap(), q(1, 4));
        assert_eq!(coeff_eas(&q(1, 2), 1, 2).unwrap(), q(1, 5));
        assert!(matches!(coeff_eas(&q(-2, 1), 1, 0), Err(Error::Parameter(_))));
        assert!(matches!(coeff_eas(&q(0, 1), 3, 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(coeff_binomial(&q(-1, 1), 3), -6);
        assert_eq!(coeff_binomial(&q(7, 3), 0), 1);
        assert_eq!(coeff_binomial(&q(1, 2), 2), q(-1, 4));
    }

    #[test]
    fn powerlog_examples() {
        for k in 1..4 {
            assert_eq!(coeff_powerlog(&q(5, 7), k, 0), 0);
        }
        assert_eq!(coeff_powerlog(&q(2, 1), 0, 1), 1);
        assert_eq!(coeff_powerlog(&q(1, 1), 1, 3), q(1, 3));
    }

    // Small-case oracle: expand (1+x)^{a-1} log(1+x)^k by repeated
    // differentiation of the exact polynomial truncation instead of convolution.
    fn powerlog_by_taylor(a: &Rational, k: u32, n: usize) -> Vec<Rational> {
        // h(x) = (1+x)^p log(1+x)^k; use the recurrence from
        // (1+x) h'(x) = p h(x) + k (1+x)^p log(1+x)^{k-1}.
        let p = Rational::from(a - 1u32);
        if k == 0 {
            let mut v = vec![Rational::from(1)];
            for j in 0..n {
                let next = (&v[j] * Rational::from(&p - j as u32)) / (j as u32 + 1);
                v.push(next);
            }
            return v;
        }
        let g = powerlog_by_taylor(a, k - 1, n);
        // (j+1) h_{j+1} + j h_j = p h_j + k g_j  ⇒  h_{j+1} = ((p - j) h_j + k g_j)/(j+1)
        let mut h = vec![Rational::new()];
        for j in 0..n {
            let t = Rational::from(&p - j as u32) * &h[j] + Rational::from(&g[j] * k);
            h.push(t / (j as u32 + 1));
        }
        h
    }

    #[test]
    fn powerlog_matches_ode_recurrence() {
        for a in [q(1, 3), q(1, 2), q(1, 1), q(5, 2), q(-3, 4)] {
            for k in 0..=3 {
                let conv = powerlog_series(&a, k, 12);
                let rec = powerlog_by_taylor(&a, k, 12);
                assert_eq!(conv, rec, "a={a} k={k}");
            }
        }
    }
}
