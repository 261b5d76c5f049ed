//! Imaginary quadratic fields: ideals, class groups, ray class groups, Hecke
//! characters and the theta series they induce.

mod classgroup;
mod forms;
mod hecke;
mod ideal;

use thiserror::Error;

use crate::characters::{is_fundamental_discriminant, FundamentalDiscriminant};

pub use classgroup::{class_group, ray_class_group, ClassGroup, RayClassGroup};
pub use forms::{reduced_forms, QuadForm};
pub use hecke::{characters_of_group, enumerate_hecke_characters, theta_series, HeckeCharacter, ThetaSeries};
pub use ideal::{ideals_of_norm, primes_above, QuadIdeal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("discriminant {0} is not negative (real quadratic fields are not supported)")]
    RealQuadratic(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("({a}, {b}) is not an integral ideal of discriminant {disc}")]
    NotIntegral { disc: i64, a: i64, b: i64 },
    #[error("ideals belong to different fields ({0} vs {1})")]
    FieldMismatch(i64, i64),
    #[error("ideal {0} is not coprime to the modulus")]
    NotCoprime(String),
    #[error("character equals its conjugate under complex conjugation; the induced form is reducible")]
    Reducible,
}

pub(crate) fn check_disc(d: i64) -> Result<FundamentalDiscriminant, QuadError> {
    if d >= 0 {
        return Err(QuadError::RealQuadratic(d));
    }
    if !is_fundamental_discriminant(d) {
        return Err(QuadError::NotFundamental(d));
    }
    Ok(FundamentalDiscriminant::new(d).expect("checked"))
}

/// An element x + y·w of the maximal order, w = (δ + √D)/2, δ = D mod 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
}

impl QuadInt {
    pub const ONE: QuadInt = QuadInt { x: 1, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        QuadInt { x, y }
    }
}

/// Multiplication data for O_K: w² = δ·w + c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Ring {
    pub disc: i64,
    pub delta: i64,
    c: i64,
}

impl Ring {
    pub fn new(disc: i64) -> Self {
        let delta = disc.rem_euclid(2);
        Ring { disc, delta, c: (disc - delta) / 4 }
    }

    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        let (x1, y1, x2, y2) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
        let x = x1 * x2 + self.c as i128 * y1 * y2;
        let y = x1 * y2 + x2 * y1 + self.delta as i128 * y1 * y2;
        QuadInt { x: i64::try_from(x).expect("overflow"), y: i64::try_from(y).expect("overflow") }
    }

    pub fn norm(&self, a: QuadInt) -> i128 {
        let (x, y) = (a.x as i128, a.y as i128);
        x * x + self.delta as i128 * x * y - self.c as i128 * y * y
    }

    pub fn conj(&self, a: QuadInt) -> QuadInt {
        QuadInt { x: a.x + self.delta * a.y, y: -a.y }
    }

    /// Generators of the unit group: −1, or a root of unity of order 4 or 6.
    pub fn unit_generator(&self) -> (QuadInt, u64) {
        match self.disc {
            -4 => (QuadInt::new(0, 1), 4),
            -3 => (QuadInt::new(0, 1), 6),
            _ => (QuadInt::new(-1, 0), 2),
        }
    }
}
