//! Finite-order Hecke characters of ray class groups and the weight-one theta
//! series they induce.

use std::sync::Arc;

use crate::arith::{gcd, kronecker, lcm, primes_up_to};
use crate::characters::DirichletCharacter;
use crate::cyclo::CycNumber;

use super::classgroup::all_vectors;
use super::{primes_above, ray_class_group, QuadError, QuadIdeal, RayClassGroup};

/// A character of Cl_𝔣: ψ(G_i) = ζ_d^{k_i} on the Smith generators.
#[derive(Clone, Debug)]
pub struct HeckeCharacter {
    group: Arc<RayClassGroup>,
    exponents: Vec<u64>,
    order: u64,
    /// Index (in the enumeration it came from) of ψ∘τ, when 𝔣 = conj(𝔣).
    partner: Option<usize>,
}

impl HeckeCharacter {
    /// `exponents[i]` is taken relative to ζ_d; the order is normalised to the
    /// exact order.
    pub fn new(group: Arc<RayClassGroup>, d: u64, exponents: &[u64]) -> Self {
        assert_eq!(exponents.len(), group.structure().len());
        for (&k, &n) in exponents.iter().zip(group.structure()) {
            assert_eq!(k * n % d, 0, "exponent incompatible with the group structure");
        }
        let exact = exponents.iter().fold(1, |acc, &k| lcm(acc, d / gcd(d, k % d)));
        let exponents = exponents.iter().map(|&k| k % d * exact / d).collect();
        HeckeCharacter { group, exponents, order: exact, partner: None }
    }

    pub fn group(&self) -> &RayClassGroup {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conjugate_partner(&self) -> Option<usize> {
        self.partner
    }

    fn pair(&self, v: &[u64]) -> u64 {
        let d = self.order;
        self.exponents.iter().zip(v).map(|(&k, &x)| k * x % d).sum::<u64>() % d
    }

    /// ψ(𝔞) = ζ_d^k; `None` when 𝔞 is not coprime to 𝔣.
    pub fn exponent_at(&self, ideal: &QuadIdeal) -> Option<u64> {
        self.group.dlog(ideal).ok().map(|v| self.pair(&v))
    }

    pub fn eval(&self, ideal: &QuadIdeal) -> CycNumber {
        match self.exponent_at(ideal) {
            Some(k) => CycNumber::root_of_unity(self.order, k as i64),
            None => CycNumber::zero(self.order),
        }
    }

    /// The complex conjugate character ψ̄.
    pub fn conj(&self) -> Self {
        let d = self.order;
        HeckeCharacter::new(self.group.clone(), d, &self.exponents.iter().map(|&k| (d - k) % d).collect::<Vec<_>>())
    }

    /// Exponents of ψ∘τ, if 𝔣 is stable under conjugation.
    pub fn compose_conjugation(&self) -> Option<Vec<u64>> {
        let imgs = self.group.conjugate_images()?;
        Some(imgs.iter().map(|v| self.pair(v)).collect())
    }

    /// ψ ≠ ψ∘τ. Automatic when 𝔣 ≠ conj(𝔣), as the two then have different conductors.
    pub fn differs_from_conjugate(&self) -> bool {
        match self.compose_conjugation() {
            Some(e) => e != self.exponents,
            None => true,
        }
    }

    /// Is the conductor of ψ exactly 𝔣?
    pub fn is_primitive(&self) -> bool {
        self.group.kernels().iter().all(|(_, ker)| ker.iter().any(|v| self.pair(v) != 0))
    }
}

/// All ψ on Cl_𝔣 of conductor exactly 𝔣 with ψ ≠ ψ∘τ, in lexicographic
/// order of their generator exponents.
pub fn enumerate_hecke_characters(disc: i64, conductor: &QuadIdeal) -> Result<Vec<HeckeCharacter>, QuadError> {
    let group = Arc::new(ray_class_group(disc, conductor)?);
    Ok(characters_of_group(group))
}

pub fn characters_of_group(group: Arc<RayClassGroup>) -> Vec<HeckeCharacter> {
    let structure = group.structure().to_vec();
    let n = structure.first().copied().unwrap_or(1);
    let mut out: Vec<HeckeCharacter> = Vec::new();
    for t in all_vectors(&structure) {
        let ks: Vec<u64> = t.iter().zip(&structure).map(|(&ti, &ni)| ti * (n / ni)).collect();
        let psi = HeckeCharacter::new(group.clone(), n, &ks);
        if psi.is_primitive() && psi.differs_from_conjugate() {
            out.push(psi);
        }
    }
    let keys: Vec<(u64, Vec<u64>)> = out.iter().map(|p| (p.order, p.exponents.clone())).collect();
    for psi in &mut out {
        if let Some(e) = psi.compose_conjugation() {
            psi.partner = keys.iter().position(|(d, k)| *d == psi.order && *k == e);
        }
    }
    out
}

/// The q-expansion of the weight-one form induced from ψ.
#[derive(Clone, Debug)]
pub struct ThetaSeries {
    pub level: u64,
    pub character: DirichletCharacter,
    /// a_1, …, a_M, all in Q(ζ_m) with m = `cyc_order`.
    pub coefficients: Vec<CycNumber>,
    pub cyc_order: u64,
}

/// Group-ring element Σ c_k·[k] of Z[Z/d].
type GroupRing = Vec<i64>;

fn ring_mul(a: &GroupRing, b: &GroupRing, d: usize) -> GroupRing {
    let mut out = vec![0i64; d];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[(i + j) % d] += x * y;
            }
        }
    }
    out
}

/// a_{p^e} for 0 ≤ e with p^e ≤ m, as group-ring elements.
fn local_coefficients(psi: &HeckeCharacter, p: u64, m: u64) -> Vec<GroupRing> {
    let d = psi.order() as usize;
    let disc = psi.group().disc();
    let primes = primes_above(disc, p);
    let exps: Vec<Option<u64>> = primes.iter().map(|q| psi.exponent_at(q)).collect();
    let inert = primes.len() == 1 && primes[0].content() > 1;
    let mut out = Vec::new();
    let mut pe = 1u64;
    let mut e = 0u64;
    while pe <= m {
        let mut v = vec![0i64; d];
        match (inert, exps.as_slice()) {
            (true, [k]) => {
                if e.is_multiple_of(2) {
                    if let Some(k) = k {
                        v[(e / 2 * k) as usize % d] += 1;
                    } else if e == 0 {
                        v[0] = 1;
                    }
                }
            }
            (false, [k]) => match k {
                Some(k) => v[(e * k) as usize % d] += 1,
                None if e == 0 => v[0] = 1,
                None => {}
            },
            (false, [k1, k2]) => {
                for i in 0..=e {
                    let t1 = if i == 0 { Some(0) } else { k1.map(|k| i * k) };
                    let t2 = if i == e { Some(0) } else { k2.map(|k| (e - i) * k) };
                    if let (Some(a), Some(b)) = (t1, t2) {
                        v[((a + b) % d as u64) as usize] += 1;
                    }
                }
            }
            _ => unreachable!(),
        }
        out.push(v);
        e += 1;
        match pe.checked_mul(p) {
            Some(x) => pe = x,
            None => break,
        }
    }
    out
}

/// a_n = Σ ψ(𝔞) over integral 𝔞 of norm n coprime to 𝔣, for n ≤ M, together
/// with the level |D|·N(𝔣) and nebentypus ε(m) = χ_D(m)·ψ(mO).
pub fn theta_series(psi: &HeckeCharacter, m: usize) -> Result<ThetaSeries, QuadError> {
    if !psi.differs_from_conjugate() {
        return Err(QuadError::Reducible);
    }
    let group = psi.group();
    let disc = group.disc();
    let level = disc.unsigned_abs() * group.conductor().norm();
    let d = psi.order();
    let du = d as usize;

    let character = DirichletCharacter::from_fn(level, |g| {
        let s = u64::from(kronecker(disc, g as i64) == -1);
        let k = psi.exponent_at(&QuadIdeal::rational(disc, g)).expect("coprime to the level");
        ((2 * k + d * s) % (2 * d), 2 * d)
    })
    .expect("valid nebentypus");
    let cyc_order = lcm(d, character.order());

    // smallest-prime-factor sieve, then multiplicativity in Z[Z/d]
    let mut spf = vec![0u64; m + 1];
    for p in primes_up_to(m as u64) {
        let mut k = p as usize;
        while k <= m {
            if spf[k] == 0 {
                spf[k] = p;
            }
            k += p as usize;
        }
    }
    let mut a: Vec<GroupRing> = vec![Vec::new(); m + 1];
    if m >= 1 {
        let mut one = vec![0i64; du];
        one[0] = 1;
        a[1] = one;
    }
    for n in 2..=m {
        let p = spf[n];
        let mut rest = n as u64;
        let mut pe = 1u64;
        while rest.is_multiple_of(p) {
            rest /= p;
            pe *= p;
        }
        if rest == 1 {
            if pe == p {
                for (e, v) in local_coefficients(psi, p, m as u64).into_iter().enumerate().skip(1) {
                    a[p.pow(e as u32) as usize] = v;
                }
            }
            continue;
        }
        a[n] = ring_mul(&a[pe as usize], &a[rest as usize], du);
    }

    let stride = (cyc_order / d) as usize;
    let coefficients = a
        .iter()
        .skip(1)
        .map(|v| {
            let mut counts = vec![0i64; cyc_order as usize];
            for (k, &c) in v.iter().enumerate() {
                counts[k * stride] += c;
            }
            CycNumber::from_power_sum(cyc_order, &counts)
        })
        .collect();
    Ok(ThetaSeries { level, character, coefficients, cyc_order })
}
