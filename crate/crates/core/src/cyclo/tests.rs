use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;

fn z(m: u64, k: i64) -> CycNumber {
    CycNumber::root_of_unity(m, k)
}

fn int(m: u64, n: i64) -> CycNumber {
    CycNumber::from_integer(m, n)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn arith_examples() {
    assert_eq!(&z(4, 1) * &z(4, 1), int(4, -1));
    let s = &(&int(3, 1) + &z(3, 1)) + &z(3, 2);
    assert!(s.is_zero());
    assert_eq!(arith(&int(5, 1), &z(5, 1), ArithOp::Div).unwrap(), z(5, 4));
    assert_eq!(arith(&int(7, 1), &CycNumber::zero(7), ArithOp::Div), Err(CycError::DivisionByZero(7)));
}

#[test]
fn embed_examples() {
    assert_eq!(z(3, 1).embed(6).unwrap(), z(6, 2));
    assert_eq!(int(1, 7).embed(35).unwrap(), int(35, 7));
    assert_eq!(z(4, 1).embed(12).unwrap(), z(12, 3));
    assert_eq!(z(4, 1).embed(6), Err(CycError::NotDivisible { from: 4, to: 6 }));
    // cross-order equality embeds to the common field
    assert_eq!(z(3, 1), z(6, 2));
    assert_ne!(z(3, 1), z(6, 4));
}

#[test]
fn galois_examples() {
    assert_eq!(z(3, 1).galois(2).unwrap(), z(3, 2));
    let r = CycNumber::from_rational(8, &q(-5, 3));
    assert_eq!(r.galois(3).unwrap(), r);
    let g5 = gauss_sum_5();
    assert_eq!(g5.galois(4).unwrap(), g5);
    assert_eq!(g5.galois(2).unwrap(), -&g5);
    assert_eq!(z(6, 1).galois(3), Err(CycError::NotCoprime { a: 3, m: 6 }));
}

#[test]
fn gauss_sum_squares_to_five() {
    let g5 = gauss_sum_5();
    assert_eq!(&g5 * &g5, int(5, 5));
    let g = g5.embed(60).unwrap();
    assert_eq!(&g * &g, int(60, 5));
}

/// Enumeration oracle for the sqrt-5 examples: list the stabiliser of the
/// generators in (Z/m)^x and check whether it also fixes the Gauss sum.
fn stabiliser_fixes_sqrt5(gens: &[CycNumber], m: u64) -> bool {
    let g5 = gauss_sum_5().embed(m).unwrap();
    let gens: Vec<_> = gens.iter().map(|g| g.embed(m).unwrap()).collect();
    (1..m)
        .filter(|a| crate::arith::gcd(*a, m) == 1)
        .filter(|&a| gens.iter().all(|g| g.galois(a as i64).unwrap() == *g))
        .all(|a| g5.galois(a as i64).unwrap() == g5)
}

#[test]
fn contains_sqrt5_examples() {
    assert!(contains_sqrt5(&[z(5, 1)], 5).unwrap());
    assert!(!contains_sqrt5(&[z(3, 1)], 15).unwrap());
    assert!(!stabiliser_fixes_sqrt5(&[z(3, 1)], 15));
    // a = 7: 7 ≡ 1 mod 3, 7 ≡ 2 mod 5 fixes ζ_3 and negates g_5
    assert_eq!(gauss_sum_5().embed(15).unwrap().galois(7).unwrap(), -&gauss_sum_5());
    assert!(contains_sqrt5(&[gauss_sum_5()], 5).unwrap());
    assert!(!contains_sqrt5(&[z(12, 1)], 12).unwrap());
    let c = &z(5, 1) + &z(5, 4);
    assert!(contains_sqrt5(&[c], 5).unwrap());
}

#[test]
fn contains_sqrt5_for_rational_multiples() {
    for (n, d) in [(1, 1), (-3, 2), (7, 11), (100, 3)] {
        let x = &gauss_sum_5() * &CycNumber::from_rational(5, &q(n, d));
        assert!(contains_sqrt5(std::slice::from_ref(&x), 5).unwrap());
        assert!(contains_sqrt5(&[x], 20).unwrap());
    }
}

#[test]
fn unramified_examples() {
    assert!(subfield_unramified_at(&[z(3, 1)], 3, 5).unwrap());
    assert!(!subfield_unramified_at(&[z(5, 1)], 5, 5).unwrap());
    assert!(subfield_unramified_at(&[gauss_sum_5()], 20, 2).unwrap());
    assert!(!subfield_unramified_at(&[gauss_sum_5()], 20, 5).unwrap());
    assert_eq!(subfield_unramified_at(&[z(3, 1)], 3, 4), Err(CycError::NotPrime(4)));
}

#[test]
fn text_round_trip_and_canonical_printing() {
    let x = CycNumber::parse("3/2*z^4 - z + 1", 7).unwrap();
    assert_eq!(x.to_string(), "3/2*z^4 - z + 1");
    assert_eq!(CycNumber::zero(9).to_string(), "0");
    assert_eq!(int(4, -3).to_string(), "-3");
    assert_eq!(z(4, 2).to_string(), "-1");
    // non-canonical input is reduced: z^3 in Q(ζ_4) is -z
    assert_eq!(CycNumber::parse("z^3", 4).unwrap().to_string(), "-z");
    assert_eq!(CycNumber::parse("z^2 + z + 1", 3).unwrap().to_string(), "0");
    assert_eq!(CycNumber::parse("-2*z^5+1/3", 12).unwrap(), { &(&z(12, 5) * &int(12, -2)) + &CycNumber::from_rational(12, &q(1, 3)) });
    for bad in ["", "z^", "3/0", "*z", "2**z", "z^-1", "x", "1 +"] {
        assert!(CycNumber::parse(bad, 5).is_err(), "{bad:?} accepted");
    }
}

#[test]
fn roots_of_unity_detection() {
    assert!(z(12, 5).is_root_of_unity());
    assert!((-&z(15, 2)).is_root_of_unity());
    assert!(!(&z(5, 1) + &z(5, 4)).is_root_of_unity());
    assert!(!CycNumber::zero(3).is_root_of_unity());
    assert!(!int(3, 2).is_root_of_unity());
}

fn arb_cyc(m: u64) -> impl Strategy<Value = CycNumber> {
    let phi = crate::arith::euler_phi(m) as usize;
    prop::collection::vec((-6i64..6, 1i64..4), phi).prop_map(move |cs| {
        let coeffs: Vec<Rational> = cs.into_iter().map(|(n, d)| q(n, d)).collect();
        CycNumber::from_coefficients(m, &coeffs).unwrap()
    })
}

fn arb_order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![1u64, 3, 4, 5, 8, 9, 12, 15, 20])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms((x, y, w) in arb_order().prop_flat_map(|m| (arb_cyc(m), arb_cyc(m), arb_cyc(m)))) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &(&y * &w), &(&x * &y) * &w);
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
        prop_assert!((&(&x - &y) + &y) == x);
    }

    #[test]
    fn inverse_is_inverse(x in arb_order().prop_flat_map(arb_cyc)) {
        prop_assume!(!x.is_zero());
        let one = CycNumber::one(x.order());
        prop_assert_eq!(&x * &x.inverse().unwrap(), one.clone());
        prop_assert_eq!(x.checked_div(&x).unwrap(), one);
    }

    #[test]
    fn galois_is_a_homomorphism((x, y, a, b) in prop::sample::select(vec![5u64, 8, 12, 15])
        .prop_flat_map(|m| {
            let units: Vec<i64> = (1..m as i64).filter(|a| crate::arith::gcd(*a as u64, m) == 1).collect();
            (arb_cyc(m), arb_cyc(m), prop::sample::select(units.clone()), prop::sample::select(units))
        }))
    {
        let m = x.order() as i64;
        prop_assert_eq!(x.galois(a).unwrap().galois(b).unwrap(), x.galois((a * b).rem_euclid(m)).unwrap());
        prop_assert_eq!(x.galois(1).unwrap(), x.clone());
        prop_assert_eq!((&x * &y).galois(a).unwrap(), &x.galois(a).unwrap() * &y.galois(a).unwrap());
        prop_assert_eq!((&x + &y).galois(a).unwrap(), &x.galois(a).unwrap() + &y.galois(a).unwrap());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism((x, y) in prop::sample::select(vec![3u64, 4, 5])
        .prop_flat_map(|m| (arb_cyc(m), arb_cyc(m))), k in 1u64..5)
    {
        let t = x.order() * k;
        let (ex, ey) = (x.embed(t).unwrap(), y.embed(t).unwrap());
        prop_assert_eq!((&x * &y).embed(t).unwrap(), &ex * &ey);
        prop_assert_eq!((&x + &y).embed(t).unwrap(), &ex + &ey);
        prop_assert_eq!(ex == ey, x == y);
    }

    #[test]
    fn text_round_trip(x in arb_order().prop_flat_map(arb_cyc)) {
        let s = x.to_string();
        let back = CycNumber::parse(&s, x.order()).unwrap();
        prop_assert_eq!(back.to_string(), s);
        prop_assert_eq!(back, x);
    }
}
