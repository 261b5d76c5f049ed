//! Integral ideals of an imaginary quadratic order in Hermite normal form.

use std::fmt;

use crate::arith::{ext_gcd, factor, kronecker};

use super::{check_disc, QuadError, QuadForm, QuadInt, Ring};

/// The ideal g·(a·Z + ((b + √D)/2)·Z), with a > 0, b ∈ [0, 2a), b² ≡ D mod 4a.
///
/// `content` is the largest rational integer dividing the ideal; the pair
/// (a, b) describes the primitive part, whose norm is a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    disc: i64,
    content: u64,
    a: u64,
    b: i64,
}

/// Reduce a list of lattice vectors in Z² to a basis [(A, 0), (B, C)].
fn hnf2(vectors: &[(i128, i128)]) -> (i128, i128, i128) {
    let mut piv = (0i128, 0i128);
    let mut xs = 0i128;
    for &(x, y) in vectors {
        if y == 0 {
            xs = gcd_i(xs, x);
            continue;
        }
        if piv.1 == 0 {
            xs = gcd_i(xs, piv.0);
            piv = (x, y);
            continue;
        }
        let (g, s, t) = ext_gcd(piv.1, y);
        let other = (y / g * piv.0 - piv.1 / g * x, 0);
        piv = (s * piv.0 + t * x, g);
        xs = gcd_i(xs, other.0);
    }
    assert!(xs != 0 && piv.1 != 0, "lattice is not of full rank");
    if piv.1 < 0 {
        piv = (-piv.0, -piv.1);
    }
    (xs, piv.0.rem_euclid(xs), piv.1)
}

fn gcd_i(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

impl QuadIdeal {
    /// The primitive ideal (a, b); `b` is normalised into [0, 2a).
    pub fn new(disc: i64, a: u64, b: i64) -> Result<Self, QuadError> {
        Self::with_content(disc, 1, a, b)
    }

    pub fn with_content(disc: i64, content: u64, a: u64, b: i64) -> Result<Self, QuadError> {
        check_disc(disc)?;
        let bad = QuadError::NotIntegral { disc, a: a as i64, b };
        if a == 0 || content == 0 {
            return Err(bad);
        }
        let b = b.rem_euclid(2 * a as i64);
        if ((b as i128) * (b as i128) - disc as i128).rem_euclid(4 * a as i128) != 0 {
            return Err(bad);
        }
        Ok(QuadIdeal { disc, content, a, b })
    }

    pub fn unit(disc: i64) -> Self {
        QuadIdeal { disc, content: 1, a: 1, b: disc.rem_euclid(2) }
    }

    /// The ideal n·O.
    pub fn rational(disc: i64, n: u64) -> Self {
        QuadIdeal { content: n, ..Self::unit(disc) }
    }

    pub fn principal(disc: i64, alpha: QuadInt) -> Self {
        let ring = Ring::new(disc);
        let w = QuadInt::new(0, 1);
        let out = Self::from_lattice(disc, &[alpha, ring.mul(alpha, w)]);
        debug_assert_eq!(out.norm() as i128, ring.norm(alpha));
        out
    }

    /// The ideal whose Z-span is generated by `gens` (which must span an O-ideal).
    pub(crate) fn from_lattice(disc: i64, gens: &[QuadInt]) -> Self {
        let delta = disc.rem_euclid(2) as i128;
        let (big_a, big_b, g) = hnf2(&gens.iter().map(|v| (v.x as i128, v.y as i128)).collect::<Vec<_>>());
        debug_assert!(big_a % g == 0 && big_b % g == 0, "not an O-module");
        let a = big_a / g;
        let b = 2 * (big_b / g) + delta;
        QuadIdeal { disc, content: g as u64, a: a as u64, b: b.rem_euclid(2 * a) as i64 }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn content(&self) -> u64 {
        self.content
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn norm(&self) -> u64 {
        self.content * self.content * self.a
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.content == 1
    }

    /// Z-basis in (x, y) coordinates: [(g·a, 0), (g·(b−δ)/2, g)].
    pub fn basis(&self) -> [QuadInt; 2] {
        let g = self.content as i64;
        let delta = self.disc.rem_euclid(2);
        [QuadInt::new(g * self.a as i64, 0), QuadInt::new(g * (self.b - delta) / 2, g)]
    }

    /// The reduced-form-compatible norm form (a, b, c) of the primitive part.
    pub fn norm_form(&self) -> QuadForm {
        let c = ((self.b as i128 * self.b as i128 - self.disc as i128) / (4 * self.a as i128)) as i64;
        QuadForm::new(self.a as i64, self.b, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.disc, other.disc, "ideals from different fields");
        let ring = Ring::new(self.disc);
        let mut gens = Vec::with_capacity(4);
        for u in self.basis() {
            for v in other.basis() {
                gens.push(ring.mul(u, v));
            }
        }
        Self::from_lattice(self.disc, &gens)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::unit(self.disc), |acc, _| acc.mul(self))
    }

    pub fn conj(&self) -> Self {
        let ring = Ring::new(self.disc);
        let gens = self.basis().map(|v| ring.conj(v));
        Self::from_lattice(self.disc, &gens)
    }

    /// Canonical representative of `alpha` modulo this ideal.
    pub fn reduce(&self, alpha: QuadInt) -> QuadInt {
        let [v1, v2] = self.basis();
        let k = alpha.y.div_euclid(v2.y);
        let y = alpha.y - k * v2.y;
        let x = (alpha.x - k * v2.x).rem_euclid(v1.x);
        QuadInt::new(x, y)
    }

    pub fn contains(&self, alpha: QuadInt) -> bool {
        self.reduce(alpha) == QuadInt::new(0, 0)
    }

    /// `other ⊆ self`, i.e. self divides other.
    pub fn divides(&self, other: &Self) -> bool {
        other.basis().iter().all(|&v| self.contains(v))
    }

    pub fn is_coprime_to(&self, other: &Self) -> bool {
        let mut gens = self.basis().to_vec();
        gens.extend(other.basis());
        Self::from_lattice(self.disc, &gens).is_unit()
    }

    /// All residues modulo this ideal, in a fixed order.
    pub fn residues(&self) -> impl Iterator<Item = QuadInt> + '_ {
        let [v1, v2] = self.basis();
        (0..v2.y).flat_map(move |y| (0..v1.x).map(move |x| QuadInt::new(x, y)))
    }

    /// Dense index of a canonical residue, in [0, norm).
    pub fn residue_index(&self, r: QuadInt) -> usize {
        (r.y * self.basis()[0].x + r.x) as usize
    }

    /// Exact quotient by a prime ideal that divides this ideal.
    pub fn div_prime(&self, p: &Self) -> Self {
        debug_assert!(p.divides(self));
        // 𝔞·𝔭⁻¹ = 𝔞·conj(𝔭)/N(𝔭)
        let q = p.norm();
        let prod = self.mul(&p.conj());
        let gens = prod.basis().map(|v| QuadInt::new(v.x / q as i64, v.y / q as i64));
        Self::from_lattice(self.disc, &gens)
    }

    /// Prime factorisation, primes in increasing order of (norm, a, b).
    pub fn factor(&self) -> Vec<(QuadIdeal, u32)> {
        let mut out = Vec::new();
        let mut rest = *self;
        for (p, _) in factor(self.norm()) {
            for pr in primes_above(self.disc, p) {
                let mut e = 0;
                while !rest.is_unit() && pr.divides(&rest) {
                    rest = rest.div_prime(&pr);
                    e += 1;
                }
                if e > 0 {
                    out.push((pr, e));
                }
            }
        }
        debug_assert!(rest.is_unit());
        out
    }

    /// Is this a prime ideal?
    pub fn is_prime(&self) -> bool {
        let f = self.factor();
        f.len() == 1 && f[0].1 == 1
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content > 1 {
            write!(f, "{}*", self.content)?;
        }
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// The prime ideals above a rational prime p: two if p splits, one otherwise.
pub fn primes_above(disc: i64, p: u64) -> Vec<QuadIdeal> {
    match kronecker(disc, p as i64) {
        -1 => vec![QuadIdeal::rational(disc, p)],
        _ => {
            let mut out: Vec<QuadIdeal> = (0..2 * p as i64)
                .filter(|&b| ((b as i128) * (b as i128) - disc as i128).rem_euclid(4 * p as i128) == 0)
                .map(|b| QuadIdeal { disc, content: 1, a: p, b })
                .collect();
            out.dedup();
            out
        }
    }
}

fn ideals_of_prime_power(disc: i64, p: u64, e: u32) -> Vec<QuadIdeal> {
    let primes = primes_above(disc, p);
    match primes.as_slice() {
        [q] if q.content() > 1 => {
            if e.is_multiple_of(2) {
                vec![QuadIdeal::rational(disc, p.pow(e / 2))]
            } else {
                vec![]
            }
        }
        [q] => vec![q.pow(e)],
        [q1, q2] => (0..=e).map(|i| q1.pow(i).mul(&q2.pow(e - i))).collect(),
        _ => unreachable!("at most two primes above p"),
    }
}

/// All integral ideals of norm exactly n, sorted.
pub fn ideals_of_norm(disc: i64, n: u64) -> Vec<QuadIdeal> {
    assert!(n > 0);
    let mut out = vec![QuadIdeal::unit(disc)];
    for (p, e) in factor(n) {
        let local = ideals_of_prime_power(disc, p, e);
        out = out.iter().flat_map(|x| local.iter().map(move |y| x.mul(y))).collect();
    }
    out.sort();
    out
}
