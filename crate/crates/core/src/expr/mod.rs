//! Exact univariate rational-function algebra.
//!
//! Everything symbolic in the crate (ODE coefficients, Mobius entries,
//! Riccati coefficients, invariants) is a [`RationalExpr`] over big-integer
//! rationals. No rounding ever happens on this side; floating point only
//! appears through [`RationalExpr::eval`].

mod poly;
mod rational;

pub use poly::Polynomial;
pub(crate) use rational::fmt_q;
pub use rational::RationalExpr;

use num_rational::BigRational;

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Nearest `f64` to an exact rational.
pub fn q_to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Projective comparison of two coefficient triples `(p, q, r)`.
///
/// Two second-order linear ODEs are the same equation when their monic forms
/// `(q/p, r/p)` agree; any overall nonzero factor is irrelevant.
pub fn equal_up_to_factor(
    a: (&RationalExpr, &RationalExpr, &RationalExpr),
    b: (&RationalExpr, &RationalExpr, &RationalExpr),
) -> Result<bool> {
    if a.0.is_zero() || b.0.is_zero() {
        return Err(Error::DegenerateOde);
    }
    let qa = a.1.try_div(a.0)?;
    let ra = a.2.try_div(a.0)?;
    let qb = b.1.try_div(b.0)?;
    let rb = b.2.try_div(b.0)?;
    Ok(qa == qb && ra == rb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(cs: &[i64]) -> Polynomial {
        Polynomial::from_i64s(cs)
    }

    fn rat(n: &[i64], d: &[i64]) -> RationalExpr {
        RationalExpr::new(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let e = rat(&[0, 2, 2], &[0, 2]);
        assert_eq!(e, RationalExpr::from_poly(poly(&[1, 1])));
        assert_eq!(e.denom(), &Polynomial::one());
    }

    #[test]
    fn normalize_zero_numerator() {
        let e = rat(&[], &[5, 0, 0, 1]);
        assert!(e.is_zero());
        assert_eq!(e.denom(), &Polynomial::one());
    }

    #[test]
    fn normalize_by_euclid_gcd() {
        assert_eq!(rat(&[-1, 0, 1], &[-1, 1]), RationalExpr::from_poly(poly(&[1, 1])));
    }

    #[test]
    fn denominator_sign_convention() {
        let e = rat(&[1], &[0, -2]);
        assert_eq!(e.denom(), &poly(&[0, 1]));
        assert_eq!(e.numer().coeffs()[0], q(-1, 2));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RationalExpr::new(poly(&[1]), Polynomial::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(rat(&[1], &[0, 1]).derivative(), rat(&[-1], &[0, 0, 1]));
        // (x^2 - 4)/x^2, the Bessel r/p at n = 2
        assert_eq!(rat(&[-4, 0, 1], &[0, 0, 1]).derivative(), rat(&[8], &[0, 0, 0, 1]));
        assert!(RationalExpr::int(7).derivative().is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let e = rat(&[1, 1], &[-1, 1]);
        assert_eq!(e.eval_exact(&q(3, 1)).unwrap(), q(2, 1));
        assert_eq!(e.eval(3.0).unwrap(), 2.0);
        assert!(matches!(e.eval_exact(&q(1, 1)), Err(Error::Pole { .. })));
        assert!(matches!(e.eval(1.0), Err(Error::Pole { .. })));
        // n(n+1)/(1-x^2) at n = 2
        let leg = rat(&[6], &[1, 0, -1]);
        assert_eq!(leg.eval_exact(&q(0, 1)).unwrap(), q(6, 1));
    }

    #[test]
    fn projective_equality() {
        let one = RationalExpr::one;
        let a = (one(), RationalExpr::zero(), RationalExpr::int(-1));
        let b = (RationalExpr::int(2), RationalExpr::zero(), RationalExpr::int(-2));
        assert!(equal_up_to_factor((&a.0, &a.1, &a.2), (&b.0, &b.1, &b.2)).unwrap());

        // x(x-1) w'' + 1/2 w' + h0 x^2 w  vs  x(1-x) w'' - 1/2 w' - h0 x^2 w
        let h0 = q(3, 1);
        let c = (
            RationalExpr::from_poly(poly(&[0, -1, 1])),
            RationalExpr::frac(1, 2),
            RationalExpr::from_poly(Polynomial::monomial(h0.clone(), 2)),
        );
        let d = (
            RationalExpr::from_poly(poly(&[0, 1, -1])),
            RationalExpr::frac(-1, 2),
            RationalExpr::from_poly(Polynomial::monomial(-h0, 2)),
        );
        assert!(equal_up_to_factor((&c.0, &c.1, &c.2), (&d.0, &d.1, &d.2)).unwrap());

        let e = (one(), RationalExpr::zero(), one());
        let f = (one(), RationalExpr::zero(), RationalExpr::int(-1));
        assert!(!equal_up_to_factor((&e.0, &e.1, &e.2), (&f.0, &f.1, &f.2)).unwrap());
    }

    #[test]
    fn projective_equality_rejects_zero_leading() {
        let z = RationalExpr::zero();
        let o = RationalExpr::one();
        assert_eq!(equal_up_to_factor((&z, &o, &o), (&o, &o, &o)), Err(Error::DegenerateOde));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-4i64..=4, 0..4).prop_map(|cs| Polynomial::from_i64s(&cs))
    }

    fn small_rat() -> impl Strategy<Value = RationalExpr> {
        (small_poly(), small_poly()).prop_filter_map("nonzero den", |(n, d)| RationalExpr::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn derivative_commutes_with_normalize(n in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            // build a non-canonical pair by multiplying through by (x + 2)
            let k = Polynomial::from_i64s(&[2, 1]);
            let e = RationalExpr::new(&n * &k, &d * &k).unwrap();
            prop_assert_eq!(e.normalize().derivative(), e.derivative().normalize());
            prop_assert_eq!(e.normalize().normalize(), e.normalize());
        }

        #[test]
        fn product_rule(a in small_rat(), b in small_rat()) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivative_matches_central_difference(e in small_rat(), x0 in 0.3f64..2.7) {
            let h = 1e-5;
            let (Ok(fp), Ok(fm), Ok(d)) = (e.eval(x0 + h), e.eval(x0 - h), e.derivative().eval(x0)) else {
                return Ok(());
            };
            // skip points near poles, where the difference quotient is ill-conditioned
            let near_pole = (0..=20).any(|k| {
                let x = x0 - 0.01 + 0.001 * k as f64;
                e.denom().eval(x).abs() < 1e-2
            });
            prop_assume!(!near_pole);
            let fd = (fp - fm) / (2.0 * h);
            let rel = (fd - d).abs() / d.abs().max(1.0);
            prop_assert!(rel <= 1e-6, "fd {} vs exact {}", fd, d);
        }
    }
}
