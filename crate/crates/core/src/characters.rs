//! Dirichlet characters on a fixed generator set of (Z/N)^×, Kronecker
//! characters, and the fundamental discriminants supported on the primes of N.

use std::fmt;

use thiserror::Error;

use crate::arith::{factor, gcd, is_squarefree, kronecker, lcm, mod_inverse, pow_mod, primitive_root};
use crate::cyclo::CycNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("expected {expected} generator values for modulus {modulus}, got {got}")]
    GeneratorCount { modulus: u64, expected: usize, got: usize },
    #[error("value exponent {k} at generator {generator} is incompatible with its order {gen_order} (d = {d})")]
    IncompatibleValue { generator: u64, k: u64, gen_order: u64, d: u64 },
    #[error("character orders must be positive")]
    ZeroOrder,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("modulus {target} is not a multiple of {modulus}")]
    NotMultiple { modulus: u64, target: u64 },
}

/// One generator of (Z/N)^×, CRT-lifted from a prime-power component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo {
    /// Generator as a residue mod N (≡ 1 away from its component).
    pub generator: u64,
    pub prime: u64,
    pub prime_power: u64,
    /// The generator reduced mod `prime_power`.
    pub local: u64,
    /// Multiplicative order of the generator.
    pub order: u64,
}

/// Lift `x mod q` to a residue mod n that is ≡ 1 modulo n/q.
fn crt_lift(x: u64, q: u64, n: u64) -> u64 {
    let rest = n / q;
    if rest == 1 {
        return x % q;
    }
    // y ≡ x (mod q), y ≡ 1 (mod rest)
    let inv = mod_inverse(rest % q, q).expect("coprime components");
    let t = ((x % q + q - 1 % q) % q) as u128 * inv as u128 % q as u128;
    ((1 + rest as u128 * t) % n as u128) as u64
}

/// The canonical generator set: smallest primitive root for each odd prime
/// power, `-1` for 4, and `-1, 5` for 2^k with k ≥ 3, in increasing prime order.
pub fn generator_set(n: u64) -> Vec<GeneratorInfo> {
    let mut out = Vec::new();
    for (p, e) in factor(n) {
        let q = p.pow(e);
        let locals: Vec<(u64, u64)> = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(q - 1, 2), (5, q / 4)],
            }
        } else {
            vec![(primitive_root(q), q / p * (p - 1))]
        };
        for (local, order) in locals {
            out.push(GeneratorInfo { generator: crt_lift(local, q, n), prime: p, prime_power: q, local, order });
        }
    }
    out
}

/// Smallest t in [0, o) with base^t ≡ x (mod q); `x` is known to lie in ⟨base⟩.
fn small_log(base: u64, x: u64, o: u64, q: u64) -> u64 {
    let mut cur = 1 % q;
    for t in 0..o {
        if cur == x % q {
            return t;
        }
        cur = (cur as u128 * base as u128 % q as u128) as u64;
    }
    panic!("element outside the expected cyclic subgroup");
}

/// A Dirichlet character modulo N with χ(g_i) = ζ_d^{k_i} on the canonical
/// generators, d the exact order of χ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    gens: Vec<GeneratorInfo>,
    exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let gens = generator_set(modulus);
        let exponents = vec![0; gens.len()];
        DirichletCharacter { modulus, order: 1, gens, exponents }
    }

    /// χ(g_i) = ζ_d^{k_i} on the canonical generators of (Z/N)^×.
    pub fn from_exponents(modulus: u64, d: u64, exponents: &[u64]) -> Result<Self, CharacterError> {
        if modulus == 0 {
            return Err(CharacterError::ZeroModulus);
        }
        if d == 0 {
            return Err(CharacterError::ZeroOrder);
        }
        let gens = generator_set(modulus);
        if gens.len() != exponents.len() {
            return Err(CharacterError::GeneratorCount { modulus, expected: gens.len(), got: exponents.len() });
        }
        for (g, &k) in gens.iter().zip(exponents) {
            if !((k % d) * g.order).is_multiple_of(d) {
                return Err(CharacterError::IncompatibleValue { generator: g.generator, k, gen_order: g.order, d });
            }
        }
        let mut chi = DirichletCharacter { modulus, order: d, gens, exponents: exponents.iter().map(|k| k % d).collect() };
        chi.normalize();
        Ok(chi)
    }

    /// Build from a function giving χ(n) as the fraction `num/den` of a full turn.
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> (u64, u64)) -> Result<Self, CharacterError> {
        let gens = generator_set(modulus);
        let values: Vec<(u64, u64)> = gens.iter().map(|g| f(g.generator)).collect();
        let d = values.iter().fold(1, |acc, &(_, den)| lcm(acc, den));
        let exps: Vec<u64> = values.iter().map(|&(num, den)| num % den * (d / den)).collect();
        Self::from_exponents(modulus, d, &exps)
    }

    /// The Kronecker character n ↦ (D|n), as a character modulo |D|.
    pub fn kronecker(disc: i64) -> Result<Self, CharacterError> {
        if !is_fundamental_discriminant(disc) {
            return Err(CharacterError::NotFundamental(disc));
        }
        Self::from_fn(disc.unsigned_abs(), |g| if kronecker(disc, g as i64) == 1 { (0, 1) } else { (1, 2) })
    }

    fn normalize(&mut self) {
        let d = self.order;
        let exact = self.exponents.iter().fold(1, |acc, &k| lcm(acc, d / gcd(d, k)));
        if exact != d {
            for k in &mut self.exponents {
                *k = *k * exact / d;
            }
            self.order = exact;
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The exact order d; values live in Q(ζ_d).
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        &self.gens
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// k with χ(n) = ζ_d^k, or None when gcd(n, N) > 1.
    pub fn exponent_at(&self, n: i64) -> Option<u64> {
        let nm = n.rem_euclid(self.modulus as i64) as u64;
        if gcd(nm, self.modulus) != 1 {
            return None;
        }
        let d = self.order;
        let mut total = 0u64;
        let mut i = 0;
        while i < self.gens.len() {
            let g = &self.gens[i];
            let q = g.prime_power;
            let mut r = nm % q;
            if g.prime == 2 {
                // component generated by -1 (and 5 when 8 | q)
                let s = if r % 4 == 1 { 0 } else { 1 };
                total += self.exponents[i] * s;
                if s == 1 {
                    r = q - r;
                }
                if q >= 8 {
                    let g5 = &self.gens[i + 1];
                    total += self.exponents[i + 1] * self.local_log(g5, r, self.exponents[i + 1]);
                    i += 1;
                }
            } else {
                total += self.exponents[i] * self.local_log(g, r, self.exponents[i]);
            }
            total %= d;
            i += 1;
        }
        Some(total % d)
    }

    /// Discrete log of `r` to base g, known only modulo the order of χ(g).
    fn local_log(&self, g: &GeneratorInfo, r: u64, k: u64) -> u64 {
        let d = self.order;
        let o = d / gcd(d, k);
        if o == 1 {
            return 0;
        }
        let h = g.order / o;
        let q = g.prime_power;
        small_log(pow_mod(g.local, h, q), pow_mod(r, h, q), o, q)
    }

    /// χ(n) as an element of Q(ζ_d); zero when gcd(n, N) > 1.
    pub fn eval(&self, n: i64) -> CycNumber {
        match self.exponent_at(n) {
            Some(k) => CycNumber::root_of_unity(self.order, k as i64),
            None => CycNumber::zero(self.order),
        }
    }

    /// χ(-1) ∈ {+1, -1}.
    pub fn parity(&self) -> i8 {
        match self.exponent_at(-1) {
            Some(0) => 1,
            _ => -1,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    pub fn conductor(&self) -> u64 {
        let mut cond = 1;
        for (p, e) in factor(self.modulus) {
            let q = p.pow(e);
            let trivial_on = |x: u64| self.exponent_at(crt_lift(x, q, self.modulus) as i64) == Some(0);
            let whole_group_trivial = self.gens.iter().filter(|g| g.prime == p).all(|g| trivial_on(g.local));
            if whole_group_trivial {
                continue;
            }
            let mut f = e;
            // kernel of reduction to p^j is generated by 1 + p^j (j ≥ 1 odd p, j ≥ 2 for p = 2)
            let start = if p == 2 { 2 } else { 1 };
            for j in (start..e).rev() {
                if trivial_on(1 + p.pow(j)) {
                    f = j;
                } else {
                    break;
                }
            }
            cond *= p.pow(f);
        }
        cond
    }

    /// (order, conductor, parity).
    pub fn invariants(&self) -> (u64, u64, i8) {
        (self.order, self.conductor(), self.parity())
    }

    pub fn pow(&self, e: i64) -> Self {
        let d = self.order as i64;
        let exps: Vec<u64> = self.exponents.iter().map(|&k| (k as i64 * e).rem_euclid(d) as u64).collect();
        Self::from_exponents(self.modulus, self.order, &exps).expect("powers stay valid")
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    /// The same character viewed modulo a multiple of N.
    pub fn lift(&self, target: u64) -> Result<Self, CharacterError> {
        if !target.is_multiple_of(self.modulus) {
            return Err(CharacterError::NotMultiple { modulus: self.modulus, target });
        }
        let d = self.order;
        Self::from_fn(target, |g| (self.exponent_at(g as i64).expect("coprime to a multiple"), d))
    }

    /// Product χ·ψ as a character modulo lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let n = lcm(self.modulus, other.modulus);
        let d = lcm(self.order, other.order);
        Self::from_fn(n, |g| {
            let a = self.exponent_at(g as i64).unwrap() * (d / self.order);
            let b = other.exponent_at(g as i64).unwrap() * (d / other.order);
            ((a + b) % d, d)
        })
        .expect("products of characters are characters")
    }

    /// The primitive character modulo the conductor inducing χ.
    pub fn primitive(&self) -> Self {
        let f = self.conductor();
        let d = self.order;
        Self::from_fn(f, |g| {
            // any lift of g mod f that is coprime to N has the same value
            let mut x = g;
            while gcd(x, self.modulus) != 1 {
                x += f;
            }
            (self.exponent_at(x as i64).unwrap(), d)
        })
        .expect("restriction to the conductor is well defined")
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi mod {} of order {} [", self.modulus, self.order)?;
        for (i, (g, k)) in self.gens.iter().zip(&self.exponents).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}", g.generator, k)?;
        }
        f.write_str("]")
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if r != 0 {
        return false;
    }
    let m = d / 4;
    let mr = m.rem_euclid(4);
    (mr == 2 || mr == 3) && is_squarefree(m.unsigned_abs())
}

/// A fundamental discriminant D (the discriminant of Q(√D)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self, CharacterError> {
        if is_fundamental_discriminant(d) {
            Ok(FundamentalDiscriminant(d))
        } else {
            Err(CharacterError::NotFundamental(d))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_imaginary(self) -> bool {
        self.0 < 0
    }

    pub fn kronecker(self, n: i64) -> i32 {
        kronecker(self.0, n)
    }

    /// p is inert in Q(√D).
    pub fn is_inert(self, p: u64) -> bool {
        kronecker(self.0, p as i64) == -1
    }

    pub fn character(self) -> DirichletCharacter {
        DirichletCharacter::kronecker(self.0).expect("fundamental")
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All fundamental discriminants whose prime divisors divide N, ordered by
/// |D| and then positive before negative.
pub fn enumerate_fundamental_discriminants(n: u64) -> Vec<FundamentalDiscriminant> {
    let primes: Vec<u64> = factor(n).into_iter().map(|(p, _)| p).collect();
    let odd: Vec<i64> = primes.iter().filter(|&&p| p != 2).map(|&p| if p % 4 == 1 { p as i64 } else { -(p as i64) }).collect();
    let two_parts: Vec<i64> = if primes.contains(&2) { vec![1, -4, 8, -8] } else { vec![1] };
    let mut out = Vec::new();
    for mask in 0u64..(1 << odd.len()) {
        let base: i64 = odd.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).product();
        for &t in &two_parts {
            let d = base * t;
            if d != 1 {
                out.push(FundamentalDiscriminant(d));
            }
        }
    }
    out.sort_by_key(|d| (d.0.unsigned_abs(), d.0 < 0));
    out
}
