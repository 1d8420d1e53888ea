use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn table() -> &'static Mutex<Vec<Rational>> {
    static T: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Exact Bernoulli number `B_n` (`B_1 = -1/2`), memoized.
pub fn bernoulli(n: u32) -> Rational {
    let mut t = table().lock().expect("bernoulli table poisoned");
    while t.len() <= n as usize {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let m = t.len() as u32;
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in t.iter().enumerate() {
            acc += Rational::from(bk * &binom);
            binom = binom * (m + 1 - k as u32) / (k as u32 + 1);
        }
        t.push(-acc / (m + 1));
    }
    t[n as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }
}
