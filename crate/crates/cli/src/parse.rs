//! Exact parsing of numeric flags.

use gevrey_core::borel::Direction;
use gevrey_core::{Integer, Rational};

/// `3`, `-1/2`, `0.125`, `1e-3`, all exact.
pub fn rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Ok(q) = t.parse::<Rational>() {
        return Ok(q);
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| format!("bad exponent in {s:?}"))?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: {s:?}"));
    }
    let digits: Integer = format!("{int}{frac}").parse().map_err(|_| format!("not a number: {s:?}"))?;
    let scale = exp - frac.len() as i32;
    
    let mut q = if scale >= 0 {
        Rational::from(digits * Integer::from(Integer::u_pow_u(10, scale as u32)))
    } else {
        Rational::from((digits, Integer::from(Integer::u_pow_u(10, (-scale) as u32))))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Radians as a decimal or fraction, or multiples of π: `pi/8`, `-3pi/4`, `2*pi`.
pub fn theta(s: &str) -> Result<Direction, String> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let Some(i) = t.find("pi") else {
        return rational(&t).map(Direction::Radians);
    };
    let coef = t[..i].trim_end_matches('*');
    let c = match coef {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        _ => rational(coef)?,
    };
    let rest = &t[i + 2..];
    let d = if rest.is_empty() {
        Rational::from(1)
    } else {
        let den = rest.strip_prefix('/').ok_or_else(|| format!("cannot parse direction {s:?}"))?;
        rational(den)?
    };
    if d == 0 {
        return Err("direction has zero denominator".into());
    }
    Ok(Direction::PiFraction(c / d))
}

/// Comma-separated identity ids, or `all`.
pub fn suite(s: &str) -> Option<Vec<String>> {
    if s.eq_ignore_ascii_case("all") {
        return None;
    }
    Some(s.split(',').map(|x| x.trim().to_ascii_uppercase()).filter(|x| !x.is_empty()).collect())
}
