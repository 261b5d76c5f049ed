//! Classification of the projective image: dihedral, A4, S4 or A5, with a
//! replayable certificate.

mod certificate;
mod invariant;
mod proofs;
mod verify;

use thiserror::Error;

use crate::store::{sturm_bound, validate_hecke, NewformRecord, StoreError};

pub use certificate::{record_digest, Certificate, ClassifierConfig, NotA5Record, TwistSummary, Verdict, FORMAT_VERSION};
pub use invariant::{order_class_of, order_five_values, projective_invariant, OrderClass, ProjectiveInvariant};
pub use proofs::{
    find_order_witness, five_twist, good_primes, heuristic_guess, prove_dihedral, prove_not_a5, prove_not_dihedral, prove_not_s4,
    DihedralData, DihedralSearch, Guess, NonDihedralWitness, NotA5Evidence, NotA5Failure, NotS4Witness, OrderWitness,
};
pub use verify::{verify, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} divides the level {level}")]
    BadPrime { p: u64, level: u64 },
    #[error("p = {p} exceeds the record precision {precision}")]
    BeyondPrecision { p: u64, precision: usize },
    #[error("record fails {count} Hecke relation(s); first: a_{n}")]
    HeckeViolations { count: usize, n: u64 },
    #[error("strict mode: suspicious bad-prime coefficients at p = {0:?}")]
    BadPrimeCoefficients(Vec<u64>),
    #[error("insufficient precision: {required} coefficients required (Sturm bound of level {level}), {available} available")]
    InsufficientPrecision { level: u64, required: usize, available: usize },
    #[error("certificate line {line}: {msg}")]
    CertificateSyntax { line: usize, msg: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

const REAL_SCOPE: &str = "dihedral suspected, induction source outside implemented scope (possibly real quadratic)";

fn dihedral_failure_reasons(cert: &mut Certificate, stuck: i64, search: &DihedralSearch) {
    cert.inconclusive.push(format!("no inert prime with a_p != 0 for D = {stuck} within the prime budget"));
    let tried: usize = search.tried.iter().map(|t| t.2).sum();
    cert.inconclusive
        .push(format!("no imaginary quadratic theta series matches ({} discriminant(s), {tried} character(s) tried)", search.tried.len()));
    cert.inconclusive.push(REAL_SCOPE.to_string());
}

/// Run the decision procedures in order and assemble a certificate.
///
/// Refuses (returns an error) when the record fails its Hecke relations or
/// has fewer coefficients than the Sturm bound; otherwise always returns a
/// certificate, INCONCLUSIVE when some step could not be completed.
pub fn classify(r: &NewformRecord, config: &ClassifierConfig) -> Result<Certificate, ClassifierError> {
    let bound = sturm_bound(r.level).bound as usize;
    if r.precision() < bound {
        return Err(ClassifierError::InsufficientPrecision { level: r.level, required: bound, available: r.precision() });
    }
    let report = validate_hecke(r);
    if let Some(v) = report.violations.first() {
        return Err(ClassifierError::HeckeViolations { count: report.violations.len(), n: v.n });
    }
    if config.strict && !report.warnings.is_empty() {
        return Err(ClassifierError::BadPrimeCoefficients(report.warnings));
    }

    let mut cert = Certificate::blank(r, *config);
    let guess = heuristic_guess(r);
    let mut dihedral_search = None;
    if guess == Guess::ProbablyDihedral {
        match prove_dihedral(r) {
            Ok(d) => {
                cert.verdict = Verdict::Dihedral;
                cert.dihedral = Some(d);
                return Ok(cert);
            }
            Err(s) => dihedral_search = Some(s),
        }
    }

    let witnesses = match prove_not_dihedral(r, config.prime_budget) {
        Ok(w) => w,
        Err(stuck) => {
            let search = match dihedral_search {
                Some(s) => s,
                None => match prove_dihedral(r) {
                    Ok(d) => {
                        cert.verdict = Verdict::Dihedral;
                        cert.dihedral = Some(d);
                        return Ok(cert);
                    }
                    Err(s) => s,
                },
            };
            dihedral_failure_reasons(&mut cert, stuck, &search);
            return Ok(cert);
        }
    };
    cert.non_dihedral = witnesses;

    let targets: [u64; 2] = if guess == Guess::ProbablyS4 { [4, 5] } else { [5, 4] };
    for t in targets {
        if let Some(w) = find_order_witness(r, t, config.prime_budget) {
            cert.verdict = if t == 5 { Verdict::A5 } else { Verdict::S4 };
            cert.order_witness = Some(w);
            return Ok(cert);
        }
    }

    let not_s4 = prove_not_s4(r, config.prime_budget);
    let not_a5 = prove_not_a5(r);
    match &not_s4 {
        Ok(w) => cert.not_s4 = w.clone(),
        Err(d) => cert.inconclusive.push(format!("no inert prime with c_p outside {{0, 2}} for D = {d} within the prime budget")),
    }
    match &not_a5 {
        Ok(e) => cert.not_a5 = Some(e.into()),
        Err(NotA5Failure::Sqrt5WithoutFivePart) => {
            cert.inconclusive.push("coefficient field contains sqrt(5) but the character order is prime to 5".into())
        }
        Err(NotA5Failure::RamifiedAt5) => cert.inconclusive.push("twisted coefficient field is ramified at 5".into()),
        Err(NotA5Failure::Precision(e)) => cert.inconclusive.push(format!("not-A5 twist test: {e}")),
    }
    if not_s4.is_ok() && not_a5.is_ok() {
        cert.verdict = Verdict::A4;
    }
    Ok(cert)
}
