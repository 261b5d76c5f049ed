//! The individual decision procedures: non-dihedral and dihedral proofs,
//! order witnesses, and the not-S4 / not-A5 tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{kronecker, primes_up_to, valuation};
use crate::characters::{enumerate_fundamental_discriminants, DirichletCharacter};
use crate::cyclo::{contains_sqrt5, subfield_unramified_at, CycNumber};
use crate::quadfields::{characters_of_group, ideals_of_norm, ray_class_group, theta_series, QuadIdeal};
use crate::store::{coefficient_field_generators, sturm_bound, twist, NewformRecord, StoreError};

use super::invariant::{projective_invariant, OrderClass};

/// Non-rigorous hint used only to order the proof attempts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guess {
    ProbablyDihedral,
    ProbablyA4,
    ProbablyS4,
    ProbablyA5,
}

/// Good primes p ≤ min(M, budget).
pub fn good_primes(r: &NewformRecord, budget: Option<u64>) -> Vec<u64> {
    let cap = budget.map_or(r.precision() as u64, |b| b.min(r.precision() as u64));
    primes_up_to(cap).into_iter().filter(|p| !r.level.is_multiple_of(*p)).collect()
}

pub fn heuristic_guess(r: &NewformRecord) -> Guess {
    let primes = good_primes(r, None);
    let zeros = primes.iter().filter(|&&p| r.a(p).is_zero()).count();
    if !primes.is_empty() && zeros * 5 >= primes.len() * 2 {
        return Guess::ProbablyDihedral;
    }
    let classes: Vec<OrderClass> = primes.iter().map(|&p| projective_invariant(r, p).expect("good prime").order_class).collect();
    if classes.contains(&OrderClass::DihedralOnly) {
        Guess::ProbablyDihedral
    } else if classes.contains(&OrderClass::Five) {
        Guess::ProbablyA5
    } else if classes.contains(&OrderClass::Four) {
        Guess::ProbablyS4
    } else {
        Guess::ProbablyA4
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonDihedralWitness {
    pub disc: i64,
    pub p: u64,
    pub a_p: CycNumber,
}

/// For every quadratic field unramified outside N, the least inert good
/// prime with a_p ≠ 0. On failure, returns the discriminant that got stuck.
pub fn prove_not_dihedral(r: &NewformRecord, budget: Option<u64>) -> Result<Vec<NonDihedralWitness>, i64> {
    let primes = good_primes(r, budget);
    let mut out = Vec::new();
    for d in enumerate_fundamental_discriminants(r.level) {
        let d = d.value();
        let w = primes.iter().find(|&&p| kronecker(d, p as i64) == -1 && !r.a(p).is_zero());
        match w {
            Some(&p) => out.push(NonDihedralWitness { disc: d, p, a_p: r.a(p).clone() }),
            None => return Err(d),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihedralData {
    pub disc: i64,
    pub conductor: QuadIdeal,
    pub psi_order: u64,
    pub psi_exponents: Vec<u64>,
    /// Coefficients compared: a_1 … a_B.
    pub compared_through: u64,
}

/// Search outcome when no theta series matches.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DihedralSearch {
    /// (D, number of conductors, number of characters tried)
    pub tried: Vec<(i64, usize, usize)>,
}

/// Theta series of ψ on Cl_𝔣 agreeing with r through the Sturm bound, if any.
pub fn prove_dihedral(r: &NewformRecord) -> Result<DihedralData, DihedralSearch> {
    let n = r.level;
    let bound = sturm_bound(n).bound;
    let mut search = DihedralSearch::default();
    if (r.precision() as u64) < bound {
        return Err(search);
    }
    for d in enumerate_fundamental_discriminants(n) {
        let d = d.value();
        if d > 0 || !n.is_multiple_of(d.unsigned_abs()) {
            continue;
        }
        let conductors = ideals_of_norm(d, n / d.unsigned_abs());
        let mut count = 0;
        for f in &conductors {
            let group = Arc::new(ray_class_group(d, f).expect("imaginary fundamental discriminant"));
            for psi in characters_of_group(group) {
                count += 1;
                let theta = theta_series(&psi, bound as usize).expect("irreducible by construction");
                if theta.character != r.character {
                    continue;
                }
                if theta.coefficients.iter().zip(&r.coeffs).all(|(x, y)| x == y) {
                    return Ok(DihedralData {
                        disc: d,
                        conductor: *f,
                        psi_order: psi.order(),
                        psi_exponents: psi.exponents().to_vec(),
                        compared_through: bound,
                    });
                }
            }
        }
        search.tried.push((d, conductors.len(), count));
    }
    Err(search)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotS4Witness {
    pub disc: i64,
    pub p: u64,
    pub c_p: CycNumber,
}

/// For every D, the least inert good prime with c_p ∉ {0, 2}.
pub fn prove_not_s4(r: &NewformRecord, budget: Option<u64>) -> Result<Vec<NotS4Witness>, i64> {
    let primes = good_primes(r, budget);
    let mut out = Vec::new();
    for d in enumerate_fundamental_discriminants(r.level) {
        let d = d.value();
        let w = primes.iter().filter(|&&p| kronecker(d, p as i64) == -1).find_map(|&p| {
            let inv = projective_invariant(r, p).expect("good prime");
            (!matches!(inv.order_class, OrderClass::Two | OrderClass::Four)).then_some((p, inv.value))
        });
        match w {
            Some((p, c_p)) => out.push(NotS4Witness { disc: d, p, c_p }),
            None => return Err(d),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotA5Evidence {
    /// The generated coefficient field does not contain √5.
    NoSqrt5 { generators: usize },
    /// After twisting by ξ the generated field is unramified at 5.
    TwistUnramifiedAt5 { xi: DirichletCharacter, twisted_level: u64, generators: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotA5Failure {
    /// √5 lies in the field and the character order is prime to 5, so no twist helps.
    Sqrt5WithoutFivePart,
    /// The twisted coefficient field is ramified at 5.
    RamifiedAt5,
    Precision(StoreError),
}

/// Distinct values, in canonical text order.
fn dedup(gens: Vec<CycNumber>) -> Vec<CycNumber> {
    let mut seen = BTreeMap::new();
    for g in gens {
        seen.entry(g.to_string()).or_insert(g);
    }
    seen.into_values().collect()
}

/// The twisting character ξ = χ^{(5^v − 1)/2}, v = v_5(ord χ), which makes
/// χ·ξ² = χ^{5^v} of order prime to 5.
pub fn five_twist(chi: &DirichletCharacter) -> Option<DirichletCharacter> {
    let v = valuation(chi.order(), 5);
    (v > 0).then(|| chi.pow((5i64.pow(v) - 1) / 2))
}

pub fn prove_not_a5(r: &NewformRecord) -> Result<NotA5Evidence, NotA5Failure> {
    let (m, gens) = coefficient_field_generators(r).map_err(NotA5Failure::Precision)?;
    let gens = dedup(gens);
    if !contains_sqrt5(&gens, m).expect("generators live in Q(ζ_m)") {
        return Ok(NotA5Evidence::NoSqrt5 { generators: gens.len() });
    }
    let Some(xi) = five_twist(&r.character) else {
        return Err(NotA5Failure::Sqrt5WithoutFivePart);
    };
    let twisted = twist(r, &xi);
    let (m2, gens2) = coefficient_field_generators(&twisted).map_err(NotA5Failure::Precision)?;
    let gens2 = dedup(gens2);
    if subfield_unramified_at(&gens2, m2, 5).expect("5 is prime") {
        Ok(NotA5Evidence::TwistUnramifiedAt5 { xi: xi.primitive(), twisted_level: twisted.level, generators: gens2.len() })
    } else {
        Err(NotA5Failure::RamifiedAt5)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub p: u64,
    pub c_p: CycNumber,
    pub order: u64,
}

/// Least good prime p within budget whose c_p has the target order.
pub fn find_order_witness(r: &NewformRecord, target: u64, budget: Option<u64>) -> Option<OrderWitness> {
    good_primes(r, budget).into_iter().find_map(|p| {
        let inv = projective_invariant(r, p).expect("good prime");
        (inv.order_class.order() == Some(target)).then_some(OrderWitness { p, c_p: inv.value, order: target })
    })
}
