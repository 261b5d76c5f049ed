//! Cyclotomic polynomials and the reduction tables used to keep elements of
//! Q(ζ_m) in power-basis normal form.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{divisors, euler_phi, factor};

/// Reduction data for Q(ζ_m): `phi = φ(m)` and, for every exponent
/// `k < m`, the coordinates of ζ_m^k in the basis 1, ζ, …, ζ^{φ-1}.
#[derive(Debug)]
pub(crate) struct CycloData {
    pub phi: usize,
    /// Coefficients of Φ_m, constant term first (monic, length phi + 1).
    pub poly: Vec<i64>,
    /// `powers[k]` for `phi <= k < m`; lower exponents are basis vectors.
    powers: Vec<Vec<i64>>,
}

impl CycloData {
    /// Coordinates of ζ^k with `k` already reduced mod m and `k >= phi`.
    #[inline]
    pub fn high_power(&self, k: usize) -> &[i64] {
        &self.powers[k - self.phi]
    }
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<CycloData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn data(m: u64) -> Arc<CycloData> {
    if let Some(d) = cache().lock().unwrap().get(&m) {
        return d.clone();
    }
    let built = Arc::new(build(m));
    cache().lock().unwrap().entry(m).or_insert(built).clone()
}

fn build(m: u64) -> CycloData {
    let poly = cyclotomic_polynomial(m).as_ref().clone();
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(m as usize - phi);
    // ζ^phi = -(c_0 + c_1 ζ + … + c_{phi-1} ζ^{phi-1}); then shift and fold.
    let mut cur: Vec<i64> = poly[..phi].iter().map(|c| -c).collect();
    for _ in phi..m as usize {
        powers.push(cur.clone());
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for j in 0..phi {
                next[j] -= top * poly[j];
            }
        }
        cur = next;
    }
    CycloData { phi, poly, powers }
}

/// Φ_m with integer coefficients, constant term first.
///
/// Built by recursive division: x^n - 1 = ∏_{d | n} Φ_d, and
/// Φ_m(x) = Φ_{rad m}(x^{m / rad m}).
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let rad: u64 = factor(m).iter().map(|&(p, _)| p).product();
    let poly = if rad != m {
        let base = cyclotomic_polynomial(rad);
        let stride = (m / rad) as usize;
        let mut out = vec![0i64; (base.len() - 1) * stride + 1];
        for (i, &c) in base.iter().enumerate() {
            out[i * stride] = c;
        }
        out
    } else {
        // x^m - 1 divided by Φ_d for every proper divisor d.
        let mut cur = vec![0i64; m as usize + 1];
        cur[0] = -1;
        cur[m as usize] = 1;
        for d in divisors(m) {
            if d == m {
                continue;
            }
            cur = exact_div(&cur, &cyclotomic_polynomial(d));
        }
        cur
    };
    debug_assert_eq!(poly.len() as u64 - 1, euler_phi(m));
    let poly = Arc::new(poly);
    poly_cache().lock().unwrap().insert(m, poly.clone());
    poly
}

/// Exact division by a monic integer polynomial.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}
