//! The projective order invariant c_p = a_p²/χ(p).

use std::fmt;

use crate::arith::is_prime;
use crate::cyclo::{gauss_sum_5, CycNumber};
use crate::store::NewformRecord;

use super::ClassifierError;

/// Order of the image of Frobenius in PGL_2, as read off from c_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderClass {
    One,
    Two,
    Three,
    Four,
    Five,
    /// Not in the table: the projective image has an element of order ≥ 6,
    /// which only dihedral groups allow.
    DihedralOnly,
}

impl OrderClass {
    pub fn order(self) -> Option<u64> {
        match self {
            OrderClass::One => Some(1),
            OrderClass::Two => Some(2),
            OrderClass::Three => Some(3),
            OrderClass::Four => Some(4),
            OrderClass::Five => Some(5),
            OrderClass::DihedralOnly => None,
        }
    }

    pub fn from_order(n: u64) -> Self {
        match n {
            1 => OrderClass::One,
            2 => OrderClass::Two,
            3 => OrderClass::Three,
            4 => OrderClass::Four,
            5 => OrderClass::Five,
            _ => OrderClass::DihedralOnly,
        }
    }
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order() {
            Some(n) => write!(f, "{n}"),
            None => f.write_str("dihedral_only"),
        }
    }
}

/// (3 + √5)/2 and (3 − √5)/2 in Q(ζ_5).
pub fn order_five_values() -> [CycNumber; 2] {
    let g = gauss_sum_5();
    let three = CycNumber::from_integer(5, 3);
    let half = CycNumber::from_rational(5, &crate::cyclo::Rational::new(1.into(), 2.into()));
    [&(&three + &g) * &half, &(&three - &g) * &half]
}

/// Exact lookup of c in the table 4, 0, 1, 2, (3 ± √5)/2.
pub fn order_class_of(c: &CycNumber) -> OrderClass {
    for (v, class) in [(4, OrderClass::One), (0, OrderClass::Two), (1, OrderClass::Three), (2, OrderClass::Four)] {
        if c.is_integer_value(v) {
            return class;
        }
    }
    if c.as_rational().is_none() && order_five_values().iter().any(|v| v == c) {
        return OrderClass::Five;
    }
    OrderClass::DihedralOnly
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveInvariant {
    pub prime: u64,
    pub value: CycNumber,
    pub order_class: OrderClass,
}

/// c_p for a good prime p ≤ M.
pub fn projective_invariant(r: &NewformRecord, p: u64) -> Result<ProjectiveInvariant, ClassifierError> {
    if !is_prime(p) {
        return Err(ClassifierError::NotPrime(p));
    }
    if r.level.is_multiple_of(p) {
        return Err(ClassifierError::BadPrime { p, level: r.level });
    }
    if p as usize > r.precision() {
        return Err(ClassifierError::BeyondPrecision { p, precision: r.precision() });
    }
    let ap = r.a(p);
    let value = (ap * ap).checked_div(&r.chi(p)).expect("χ(p) is a root of unity");
    let order_class = order_class_of(&value);
    Ok(ProjectiveInvariant { prime: p, value, order_class })
}
