//! Independent replay of a certificate against its record.

use std::sync::Arc;

use crate::arith::{is_prime, kronecker};
use crate::characters::{enumerate_fundamental_discriminants, is_fundamental_discriminant};
use crate::cyclo::{contains_sqrt5, subfield_unramified_at};
use crate::quadfields::{ray_class_group, theta_series, HeckeCharacter};
use crate::store::{coefficient_field_generators, sturm_bound, twist, NewformRecord};

use super::certificate::{record_digest, Certificate, NotA5Record, Verdict};
use super::invariant::{projective_invariant, OrderClass};
use super::proofs::five_twist;

/// Outcome of [`verify`]: the number of claims checked and every claim that
/// failed to replay.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub discrepancies: Vec<String>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.discrepancies.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.discrepancies.push(what());
        }
    }
}

fn usable_prime(r: &NewformRecord, cert: &Certificate, p: u64) -> bool {
    is_prime(p) && !r.level.is_multiple_of(p) && p as usize <= r.precision() && cert.config.prime_budget.is_none_or(|b| p <= b)
}

/// Recompute every claim in `cert` from `r`.
pub fn verify(cert: &Certificate, r: &NewformRecord) -> VerifyReport {
    let mut rep = VerifyReport::default();
    rep.check(cert.record_sha256 == record_digest(r), || "record digest does not match".into());
    rep.check(cert.level == r.level && cert.cyc_order == r.cyc_order && cert.precision == r.precision(), || {
        "record header mismatch".into()
    });
    rep.check(cert.character_order == r.character.order() && cert.character_exponents == r.character.exponents(), || {
        "character mismatch".into()
    });
    rep.check(cert.sturm_bound == sturm_bound(r.level).bound, || "wrong Sturm bound".into());

    let discs: Vec<i64> = enumerate_fundamental_discriminants(r.level).iter().map(|d| d.value()).collect();

    for w in &cert.non_dihedral {
        let ok = usable_prime(r, cert, w.p) && kronecker(w.disc, w.p as i64) == -1 && *r.a(w.p) == w.a_p && !w.a_p.is_zero();
        rep.check(ok, || format!("non-dihedral witness D={} p={} does not replay", w.disc, w.p));
    }
    let nd_complete = cert.non_dihedral.iter().map(|w| w.disc).collect::<Vec<_>>() == discs;

    if let Some(w) = &cert.order_witness {
        let ok = usable_prime(r, cert, w.p)
            && projective_invariant(r, w.p).is_ok_and(|inv| inv.value == w.c_p && inv.order_class.order() == Some(w.order));
        rep.check(ok, || format!("order witness p={} does not replay", w.p));
    }

    for w in &cert.not_s4 {
        let ok = usable_prime(r, cert, w.p)
            && kronecker(w.disc, w.p as i64) == -1
            && projective_invariant(r, w.p)
                .is_ok_and(|inv| inv.value == w.c_p && !matches!(inv.order_class, OrderClass::Two | OrderClass::Four));
        rep.check(ok, || format!("not-S4 witness D={} p={} does not replay", w.disc, w.p));
    }
    let s4_complete = cert.not_s4.iter().map(|w| w.disc).collect::<Vec<_>>() == discs;

    match &cert.not_a5 {
        Some(NotA5Record::NoSqrt5 { generators }) => {
            let ok = coefficient_field_generators(r).is_ok_and(|(m, gens)| !contains_sqrt5(&gens, m).unwrap_or(true));
            rep.check(ok, || format!("no-sqrt5 claim ({generators} generators) does not replay"));
        }
        Some(NotA5Record::TwistUnramifiedAt5(t)) => {
            let ok = five_twist(&r.character).is_some_and(|xi| {
                let xi = xi.primitive();
                if xi.modulus() != t.modulus || xi.order() != t.order || xi.exponents() != t.exponents.as_slice() {
                    return false;
                }
                let tw = twist(r, &xi);
                tw.level == t.twisted_level
                    && coefficient_field_generators(&tw).is_ok_and(|(m, gens)| subfield_unramified_at(&gens, m, 5).unwrap_or(false))
            });
            rep.check(ok, || "twist-unramified-at-5 claim does not replay".into());
        }
        None => {}
    }

    if let Some(d) = &cert.dihedral {
        let n = r.level;
        let ok = (|| {
            if d.disc >= 0 || !is_fundamental_discriminant(d.disc) || d.disc.unsigned_abs() * d.conductor.norm() != n {
                return false;
            }
            if d.compared_through < sturm_bound(n).bound || d.compared_through as usize > r.precision() {
                return false;
            }
            let Ok(group) = ray_class_group(d.disc, &d.conductor) else {
                return false;
            };
            let group = Arc::new(group);
            if d.psi_exponents.len() != group.structure().len()
                || d.psi_exponents.iter().zip(group.structure()).any(|(&k, &m)| k * m % d.psi_order != 0)
            {
                return false;
            }
            let psi = HeckeCharacter::new(group, d.psi_order, &d.psi_exponents);
            if psi.order() != d.psi_order || !psi.is_primitive() {
                return false;
            }
            let Ok(theta) = theta_series(&psi, d.compared_through as usize) else {
                return false;
            };
            theta.character == r.character && theta.coefficients.iter().zip(&r.coeffs).all(|(x, y)| x == y)
        })();
        rep.check(ok, || "dihedral theta series does not match through the Sturm bound".into());
    }

    let consistent = match cert.verdict {
        Verdict::A5 => nd_complete && cert.order_witness.as_ref().is_some_and(|w| w.order == 5),
        Verdict::S4 => nd_complete && cert.order_witness.as_ref().is_some_and(|w| w.order == 4),
        Verdict::A4 => nd_complete && s4_complete && cert.not_a5.is_some(),
        Verdict::Dihedral => cert.dihedral.is_some(),
        Verdict::Inconclusive => !cert.inconclusive.is_empty(),
    };
    rep.check(consistent, || format!("evidence is incomplete for verdict {}", cert.verdict));
    rep
}
