//! Canonical text syntax: a polynomial in `z` with rational coefficients,
//! terms in decreasing exponent, e.g. `3/2*z^4 - z + 1`; zero prints as `0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{CycError, CycNumber, Rational};

pub(super) fn format(x: &CycNumber) -> String {
    let coeffs = x.coefficients();
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let mono = match k {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(super) fn parse(text: &str, m: u64) -> Result<CycNumber, CycError> {
    if m == 0 {
        return Err(CycError::ZeroOrder);
    }
    let err = |reason: &str| CycError::Parse { text: text.to_string(), reason: reason.to_string() };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty element"));
    }
    // Split into signed terms.
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let bytes = compact.as_bytes();
    let mut start = 0;
    let mut neg = false;
    if bytes[0] == b'-' || bytes[0] == b'+' {
        neg = bytes[0] == b'-';
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && i > start && bytes[i - 1] != b'^' {
            terms.push((neg, &compact[start..i]));
            neg = b == b'-';
            start = i + 1;
        }
        i += 1;
    }
    terms.push((neg, &compact[start..]));

    let m_us = m as usize;
    let mut dense: Vec<Rational> = vec![Rational::zero(); m_us];
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(err("empty term"));
        }
        let (coef_part, mono_part) = match term.find('z') {
            Some(pos) => {
                let coef = &term[..pos];
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                if coef.is_empty() && term[..pos].ends_with('*') {
                    return Err(err("dangling '*'"));
                }
                (coef, Some(&term[pos + 1..]))
            }
            None => (term, None),
        };
        let coef = if coef_part.is_empty() {
            if mono_part.is_none() {
                return Err(err("empty coefficient"));
            }
            Rational::one()
        } else {
            parse_rational(coef_part).ok_or_else(|| err("bad coefficient"))?
        };
        let exp: u64 = match mono_part {
            None => 0,
            Some("") => 1,
            Some(rest) => {
                let digits = rest.strip_prefix('^').ok_or_else(|| err("expected '^' after z"))?;
                digits.parse::<u64>().map_err(|_| err("bad exponent"))?
            }
        };
        let c = if neg { -coef } else { coef };
        dense[(exp % m) as usize] += c;
    }
    // Reduce Σ c_k ζ^k via the integer power-sum path on a common denominator.
    let den = dense.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let nums: Vec<BigInt> = dense.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    Ok(CycNumber::from_dense(m, nums, den))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let ok = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    match s.split_once('/') {
        Some((n, d)) => {
            if !ok(n) || !ok(d) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.parse().ok()?, d))
        }
        None => ok(s).then(|| Rational::from_integer(s.parse().unwrap())),
    }
}
