//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! Elements are stored in the power basis 1, ζ_m, …, ζ_m^{φ(m)-1} as an
//! integer numerator vector over a common positive denominator, reduced so
//! that the representation is unique for a given order `m`. Mixed-order
//! operations embed both operands into Q(ζ_lcm) first.

mod poly;
mod subfield;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{gcd, lcm};

pub use poly::cyclotomic_polynomial;
pub use subfield::{contains_sqrt5, gauss_sum_5, subfield_unramified_at};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("cyclotomic order {from} does not divide target order {to}")]
    NotDivisible { from: u64, to: u64 },
    #[error("Galois exponent {a} is not coprime to {m}")]
    NotCoprime { a: i64, m: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("expected {expected} coefficients for Q(zeta_{m}), got {got}")]
    WrongLength { m: u64, expected: usize, got: usize },
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element of Q(ζ_m).
#[derive(Clone, Debug)]
pub struct CycNumber {
    order: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    pub fn zero(m: u64) -> Self {
        let phi = poly::data(m).phi;
        CycNumber { order: m, num: vec![BigInt::zero(); phi], den: BigInt::one() }
    }

    pub fn one(m: u64) -> Self {
        Self::from_integer(m, 1)
    }

    pub fn from_integer(m: u64, n: i64) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = BigInt::from(n);
        z
    }

    pub fn from_rational(m: u64, q: &Rational) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z.normalize();
        z
    }

    /// ζ_m^k (any integer k).
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        let mut counts = vec![0i64; m as usize];
        counts[k.rem_euclid(m as i64) as usize] = 1;
        Self::from_power_sum(m, &counts)
    }

    /// Σ counts[k]·ζ_m^k; `counts` may be any length, exponents are read mod m.
    pub fn from_power_sum(m: u64, counts: &[i64]) -> Self {
        let data = poly::data(m);
        let phi = data.phi;
        let mut acc = vec![0i64; phi];
        let mut folded = vec![0i64; m as usize];
        for (k, &c) in counts.iter().enumerate() {
            folded[k % m as usize] += c;
        }
        for (k, &c) in folded.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k < phi {
                acc[k] += c;
            } else {
                for (a, &t) in acc.iter_mut().zip(data.high_power(k)) {
                    *a += c * t;
                }
            }
        }
        CycNumber { order: m, num: acc.into_iter().map(BigInt::from).collect(), den: BigInt::one() }
    }

    /// Build from power-basis coordinates (length φ(m)).
    pub fn from_coefficients(m: u64, coeffs: &[Rational]) -> Result<Self, CycError> {
        if m == 0 {
            return Err(CycError::ZeroOrder);
        }
        let phi = poly::data(m).phi;
        if coeffs.len() != phi {
            return Err(CycError::WrongLength { m, expected: phi, got: coeffs.len() });
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut z = CycNumber { order: m, num, den };
        z.normalize();
        Ok(z)
    }

    /// Reduce a dense vector of exponent coefficients (length m) to normal form.
    fn from_dense(m: u64, dense: Vec<BigInt>, den: BigInt) -> Self {
        let data = poly::data(m);
        let phi = data.phi;
        let mut num: Vec<BigInt> = dense[..phi.min(dense.len())].to_vec();
        num.resize(phi, BigInt::zero());
        for (k, c) in dense.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (a, &t) in num.iter_mut().zip(data.high_power(k)) {
                if t != 0 {
                    *a += c * t;
                }
            }
        }
        let mut z = CycNumber { order: m, num, den };
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let g = self.num.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Power-basis coordinates as rationals.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.num.iter().map(|c| Rational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_integer_value(&self, n: i64) -> bool {
        self.den.is_one() && self.num[0] == BigInt::from(n) && self.num.iter().skip(1).all(|c| c.is_zero())
    }

    /// Same element written in Q(ζ_target); requires `order | target`.
    pub fn embed(&self, target: u64) -> Result<Self, CycError> {
        if target == 0 {
            return Err(CycError::ZeroOrder);
        }
        if !target.is_multiple_of(self.order) {
            return Err(CycError::NotDivisible { from: self.order, to: target });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let stride = (target / self.order) as usize;
        let mut dense = vec![BigInt::zero(); target as usize];
        for (i, c) in self.num.iter().enumerate() {
            dense[i * stride] = c.clone();
        }
        Ok(Self::from_dense(target, dense, self.den.clone()))
    }

    /// σ_a: ζ_m ↦ ζ_m^a.
    pub fn galois(&self, a: i64) -> Result<Self, CycError> {
        let m = self.order;
        let ar = a.rem_euclid(m as i64) as u64;
        if gcd(ar, m) != 1 {
            return Err(CycError::NotCoprime { a, m });
        }
        let mut dense = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                dense[(i as u64 * ar % m) as usize] += c;
            }
        }
        Ok(Self::from_dense(m, dense, self.den.clone()))
    }

    /// Complex conjugate, σ_{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let m = lcm(self.order, other.order);
        (self.embed(m).unwrap(), other.embed(m).unwrap())
    }

    fn add_same(&self, other: &Self, sign: i64) -> Self {
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let lhs = a * &other.den;
                let rhs = b * &self.den;
                if sign > 0 {
                    lhs + rhs
                } else {
                    lhs - rhs
                }
            })
            .collect();
        let mut z = CycNumber { order: self.order, num, den: &self.den * &other.den };
        z.normalize();
        z
    }

    fn mul_same(&self, other: &Self) -> Self {
        let m = self.order as usize;
        let mut dense = vec![BigInt::zero(); 2 * self.num.len()];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    dense[i + j] += a * b;
                }
            }
        }
        let mut folded = vec![BigInt::zero(); m];
        for (k, c) in dense.into_iter().enumerate() {
            if !c.is_zero() {
                folded[k % m] += c;
            }
        }
        Self::from_dense(self.order, folded, &self.den * &other.den)
    }

    pub fn inverse(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero(self.order));
        }
        let data = poly::data(self.order);
        let modulus: Vec<Rational> = data.poly.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        let me: Vec<Rational> = self.coefficients();
        let inv = poly_inverse_mod(&me, &modulus);
        let mut coeffs = inv;
        coeffs.resize(data.phi, Rational::zero());
        Ok(Self::from_coefficients(self.order, &coeffs).expect("length checked"))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycError> {
        let (a, b) = self.common(other);
        if b.is_zero() {
            return Err(CycError::DivisionByZero(b.order));
        }
        Ok(a.mul_same(&b.inverse()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// True iff the element is a root of unity (these are ±ζ_m^k in Q(ζ_m)).
    pub fn is_root_of_unity(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let m2 = lcm(2, self.order);
        self.pow(m2).is_integer_value(1)
    }
}

/// Inverse of `a` modulo the polynomial `m` over Q (both constant term first).
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    fn trim(p: &mut Vec<Rational>) {
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    fn sub_scaled(p: &mut Vec<Rational>, q: &[Rational], c: &Rational, shift: usize) {
        if p.len() < q.len() + shift {
            p.resize(q.len() + shift, Rational::zero());
        }
        for (i, qi) in q.iter().enumerate() {
            p[i + shift] -= c * qi;
        }
    }
    // Invariant: r_i ≡ s_i·a (mod m)
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<Rational> = vec![Rational::zero()];
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) && r1.len() > 1 {
        let mut q = vec![Rational::zero(); r0.len() - r1.len() + 1];
        let mut rem = r0.clone();
        let lead = r1.last().unwrap().clone();
        while rem.len() >= r1.len() && !(rem.len() == 1 && rem[0].is_zero()) {
            let shift = rem.len() - r1.len();
            let c = rem.last().unwrap() / &lead;
            q[shift] = c.clone();
            sub_scaled(&mut rem, &r1, &c, shift);
            rem.pop();
            trim(&mut rem);
            if rem.is_empty() {
                rem.push(Rational::zero());
            }
        }
        // s_next = s0 - q*s1
        let mut s_next = s0.clone();
        for (i, qi) in q.iter().enumerate() {
            if !qi.is_zero() {
                sub_scaled(&mut s_next, &s1, qi, i);
            }
        }
        trim(&mut s_next);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s_next);
    }
    // r1 is a nonzero constant (m irreducible, a nonzero mod m)
    let c = r1[0].clone();
    s1.iter().map(|x| x / &c).collect()
}

/// Operator-dispatch form of the field arithmetic, embedding both operands into the
/// common cyclotomic field.
pub fn arith(x: &CycNumber, y: &CycNumber, op: ArithOp) -> Result<CycNumber, CycError> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = self.common(other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CycNumber {}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = self.common(rhs);
        a.add_same(&b, 1)
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = self.common(rhs);
        a.add_same(&b, -1)
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        if self.order == rhs.order {
            return self.mul_same(rhs);
        }
        let (a, b) = self.common(rhs);
        a.mul_same(&b)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { order: self.order, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format(self))
    }
}

impl CycNumber {
    /// Parse the `z`-polynomial syntax, with z = ζ_m.
    pub fn parse(text: &str, m: u64) -> Result<Self, CycError> {
        text::parse(text, m)
    }
}

#[cfg(test)]
mod tests;
