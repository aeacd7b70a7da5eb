//! Exact arithmetic for the coefficient field Q(q,t) and for truncated
//! polynomials in the series variables u, v.

mod gcd;
mod parse;
mod poly;
mod rat;
mod uv;

pub use gcd::{div_exact_primitive, qt_gcd};
pub use parse::{format_poly, format_rat, parse_rat};
pub use poly::QtPoly;
pub use rat::{power_twist, qt_arith, QtOp, QtRat};
pub use uv::UvPoly;

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    /// Small random elements of Q(q,t): quotients of sparse polynomials
    /// with single-digit exponents and coefficients.
    fn arb_poly() -> impl Strategy<Value = QtPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3), -3i64..4), 0..4).prop_map(|terms| {
            let mut p = QtPoly::zero();
            for ((a, b), c) in terms {
                p.add_term(
                    (a, b),
                    &num::BigRational::from_integer(num::BigInt::from(c)),
                );
            }
            p
        })
    }

    fn arb_rat() -> impl Strategy<Value = QtRat> {
        (arb_poly(), arb_poly())
            .prop_filter_map("nonzero denominator", |(n, d)| QtRat::new(n, d).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            // associativity and distributivity
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn multiplicative_inverse(a in arb_rat()) {
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_idempotence(a in arb_rat()) {
            let renorm = QtRat::new(a.num().clone(), a.den().clone()).unwrap();
            prop_assert_eq!(&a, &renorm);
            // gcd(num, den) is a unit and den's least monomial is positive
            let g = qt_gcd(a.num(), a.den());
            prop_assert!(g.is_one() || a.is_zero());
        }

        #[test]
        fn twist_is_a_ring_homomorphism(a in arb_rat(), b in arb_rat(), n in 1u32..4) {
            prop_assert_eq!(power_twist(&(&a * &b), n), &power_twist(&a, n) * &power_twist(&b, n));
            prop_assert_eq!(power_twist(&(&a + &b), n), &power_twist(&a, n) + &power_twist(&b, n));
        }

        #[test]
        fn format_parse_round_trip(a in arb_rat()) {
            let s = format_rat(&a);
            let back = parse_rat(&s).unwrap();
            prop_assert_eq!(a, back);
        }
    }
}

