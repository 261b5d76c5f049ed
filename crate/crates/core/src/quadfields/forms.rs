//! Primitive positive definite binary quadratic forms, reduction and
//! composition.

use std::fmt;

use crate::arith::{ext_gcd, gcd};

/// a·x² + b·xy + c·y².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// The principal form of discriminant D.
    pub fn identity(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        QuadForm::new(1, b, (b * b - disc) / 4)
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a.unsigned_abs(), self.b.unsigned_abs()), self.c.unsigned_abs()) == 1
    }

    /// |b| ≤ a ≤ c, with b ≥ 0 when |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }

    /// The unique reduced form properly equivalent to this one.
    pub fn reduce(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        debug_assert!(a > 0 && b * b - 4 * a * c < 0);
        loop {
            // normalise b into (−a, a]
            if b <= -a || b > a {
                let r = b.rem_euclid(2 * a);
                let r = if r > a { r - 2 * a } else { r };
                let k = (r - b) / (2 * a);
                c += k * b + k * k * a;
                b = r;
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        QuadForm::new(a as i64, b as i64, c as i64)
    }

    /// Gauss composition (Cohen, Algorithm 5.4.7), followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        let disc = self.disc() as i128;
        debug_assert_eq!(self.disc(), other.disc());
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let (d, u, _v) = ext_gcd(a2, a1);
            (d, u)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let (d1, x2, y2) = ext_gcd(s, d);
            (d1, x2, -y2)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        QuadForm::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut out = QuadForm::identity(self.disc());
        for _ in 0..e {
            out = out.compose(self);
        }
        out
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// All reduced primitive forms of discriminant D < 0, sorted by (a, b).
pub fn reduced_forms(disc: i64) -> Vec<QuadForm> {
    assert!(disc < 0);
    let mut out = Vec::new();
    let mut a = 1i64;
    // reduced forms satisfy 3a² ≤ |D|
    while 3 * a * a <= -disc {
        for b in -a..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, (b * b - disc) / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}
