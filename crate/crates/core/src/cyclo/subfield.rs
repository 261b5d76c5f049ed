//! Subfields of Q(ζ_m) described by generator sets, via their stabilisers in
//! Gal(Q(ζ_m)/Q) ≅ (Z/m)^×.

use crate::arith::{gcd, is_prime, kronecker, valuation};

use super::{CycError, CycNumber};

/// The quadratic Gauss sum g_5 = Σ_{k=1}^{4} (k|5)·ζ_5^k, which equals √5.
pub fn gauss_sum_5() -> CycNumber {
    let counts: Vec<i64> = (0..5).map(|k| kronecker(k, 5) as i64).collect();
    CycNumber::from_power_sum(5, &counts)
}

fn embed_all(generators: &[CycNumber], m: u64) -> Result<Vec<CycNumber>, CycError> {
    generators.iter().map(|g| g.embed(m)).collect()
}

fn fixes_all(gens: &[CycNumber], a: i64) -> bool {
    gens.iter().all(|g| g.galois(a).map(|h| &h == g).unwrap_or(false))
}

/// Does the subfield of Q(ζ_m) generated by `generators` contain √5?
pub fn contains_sqrt5(generators: &[CycNumber], m: u64) -> Result<bool, CycError> {
    let gens = embed_all(generators, m)?;
    if !m.is_multiple_of(5) {
        return Ok(false);
    }
    let g5 = gauss_sum_5().embed(m)?;
    for a in 1..m {
        if gcd(a, m) != 1 {
            continue;
        }
        let a = a as i64;
        if fixes_all(&gens, a) && g5.galois(a)? != g5 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the subfield generated by `generators` contained in Q(ζ_{m'}) where
/// m' is the prime-to-p part of m (hence unramified at p)?
pub fn subfield_unramified_at(generators: &[CycNumber], m: u64, p: u64) -> Result<bool, CycError> {
    if !is_prime(p) {
        return Err(CycError::NotPrime(p));
    }
    let gens = embed_all(generators, m)?;
    let m_prime = m / p.pow(valuation(m, p));
    let mut a = 1u64;
    while a < m.max(2) {
        if gcd(a, m) == 1 && a % m_prime == 1 % m_prime && !fixes_all(&gens, a as i64) {
            return Ok(false);
        }
        a += 1;
    }
    Ok(true)
}
