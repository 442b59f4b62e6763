use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Polynomial, Q};
use crate::error::{Error, Result};

/// Ratio of two polynomials in `x`, always held in canonical form:
/// numerator and denominator coprime, denominator monic, and a zero
/// numerator paired with the denominator `1`.
///
/// Because the form is canonical, structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: Polynomial,
    den: Polynomial,
}

impl RationalExpr {
    /// Builds and canonicalizes `num / den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize_parts(num, den))
    }

    fn normalize_parts(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading().expect("nonzero denominator").clone();
        let inv = Q::one() / lc;
        RationalExpr { num: num.scale(&inv), den: den.scale(&inv) }
    }

    /// Re-canonicalizes. Values built through this type are already
    /// canonical, so this is the identity on them.
    pub fn normalize(&self) -> Self {
        Self::normalize_parts(self.num.clone(), self.den.clone())
    }

    pub fn zero() -> Self {
        RationalExpr { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        RationalExpr { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Q::from_integer(c.into()))
    }

    /// `n/d` as a constant expression. Panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::constant(Q::new(n.into(), d.into()))
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalExpr { num: p, den: Polynomial::one() }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.degree() == Some(0) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Quotient rule, result canonical.
    pub fn derivative(&self) -> Self {
        let n1 = self.num.derivative();
        let d1 = self.den.derivative();
        let top = &(&n1 * &self.den) - &(&self.num * &d1);
        let bottom = &self.den * &self.den;
        Self::normalize_parts(top, bottom)
    }

    /// Repeated derivative.
    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.derivative())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::normalize_parts(self.num.scale(c), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize_parts(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Integer power; negative exponents invert (zero base rejected).
    pub fn powi(&self, e: i64) -> Result<Self> {
        let m =
            u32::try_from(e.unsigned_abs()).map_err(|_| Error::InvalidArgument(format!("exponent {e} too large")))?;
        let pos = Self::normalize_parts(self.num.pow(m), self.den.pow(m));
        if e < 0 {
            pos.recip()
        } else {
            Ok(pos)
        }
    }

    /// Substitutes `inner` for `x`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let apply = |p: &Polynomial| -> Self {
            let mut acc = Self::zero();
            for c in p.coeffs().iter().rev() {
                acc = &(&acc * inner) + &Self::constant(c.clone());
            }
            acc
        };
        apply(&self.num).try_div(&apply(&self.den))
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &Q) -> Result<Q> {
        let d = self.den.eval_exact(x);
        if d.is_zero() {
            return Err(Error::Pole { at: fmt_q(x) });
        }
        Ok(self.num.eval_exact(x) / d)
    }

    /// Floating evaluation. A denominator that vanishes to within rounding
    /// of its own term magnitudes is reported as a pole.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let d = self.den.eval(x);
        let scale = self.den.eval_abs_scale(x);
        if d == 0.0 || d.abs() <= 8.0 * f64::EPSILON * scale {
            return Err(Error::Pole { at: format!("{x}") });
        }
        Ok(self.num.eval(x) / d)
    }
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Prints `num` alone for polynomials, otherwise `(num)/(den)`.
impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({self})")
    }
}

impl From<Polynomial> for RationalExpr {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl From<Q> for RationalExpr {
    fn from(c: Q) -> Self {
        Self::constant(c)
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if self.den == rhs.den {
            return RationalExpr::normalize_parts(&self.num + &rhs.num, self.den.clone());
        }
        RationalExpr::normalize_parts(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr::normalize_parts(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $m(self, rhs: RationalExpr) -> RationalExpr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

impl Zero for RationalExpr {
    fn zero() -> Self {
        RationalExpr::zero()
    }
    fn is_zero(&self) -> bool {
        RationalExpr::is_zero(self)
    }
}

impl One for RationalExpr {
    fn one() -> Self {
        RationalExpr::one()
    }
}
