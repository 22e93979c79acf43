//! Exact scalars: arbitrary-precision rationals and the quadratic field Q(sqrt 2).

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Field operations shared by [`Rational`] and [`QExt`].
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// A canonical square root inside the field, if one exists.
    fn sqrt(&self) -> Option<Self>;
    /// The value as a rational, if it is one.
    fn to_rational(&self) -> Option<Rational>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.clone() * &inv)
    }
}

/// Arbitrary-precision rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::integer(1);
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

fn big_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        Rational::integer(n)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }
    fn sqrt(&self) -> Option<Self> {
        let n = big_sqrt_exact(self.numer())?;
        let d = big_sqrt_exact(self.denom())?;
        Some(Rational::from_big(n, d))
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl fmt::Display for Rational {
    /// Always `p/q`, also for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

/// `a + b*sqrt(2)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct QExt {
    pub a: Rational,
    pub b: Rational,
}

impl QExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QExt { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QExt { a, b: Rational::zero() }
    }

    /// `sqrt(2)`.
    pub fn sqrt2() -> Self {
        QExt { a: Rational::zero(), b: Rational::one() }
    }

    /// `1/sqrt(2) = sqrt(2)/2`.
    pub fn inv_sqrt2() -> Self {
        QExt { a: Rational::zero(), b: Rational::new(1, 2) }
    }

    pub fn conj(&self) -> Self {
        QExt { a: self.a.clone(), b: -self.b.clone() }
    }

    /// `a^2 - 2 b^2`.
    pub fn norm(&self) -> Rational {
        self.a.clone() * &self.a - Rational::integer(2) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl Field for QExt {
    fn zero() -> Self {
        QExt::default()
    }
    fn one() -> Self {
        QExt::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        QExt::rational(Rational::integer(n))
    }
    fn from_rational(q: &Rational) -> Self {
        QExt::rational(q.clone())
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Some(QExt { a: c.a * &n, b: c.b * &n })
    }
    /// Root with positive rational part, or positive `b` when the rational part vanishes.
    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(QExt::zero());
        }
        let two = Rational::integer(2);
        let mut cands = Vec::new();
        if self.b.is_zero() {
            if let Some(c) = self.a.sqrt() {
                cands.push(QExt::rational(c));
            }
            if let Some(d) = self.a.try_div(&two).ok().and_then(|h| h.sqrt()) {
                cands.push(QExt { a: Rational::zero(), b: d });
            }
        } else {
            // c^2 = (a +- sqrt(a^2 - 2 b^2)) / 2, d = b / (2c)
            if let Some(s) = self.norm().sqrt() {
                for c2 in [self.a.clone() + &s, self.a.clone() - &s] {
                    if let Some(c) = c2.try_div(&two).ok().and_then(|h| h.sqrt()) {
                        if !c.is_zero() {
                            let d = self.b.try_div(&(two.clone() * &c)).ok()?;
                            cands.push(QExt { a: c, b: d });
                        }
                    }
                }
            }
        }
        cands.into_iter().find(|r| r.clone() * r == *self)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }
}

impl fmt::Display for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

impl fmt::Debug for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{:?}", self.a)
        } else {
            write!(f, "({:?} + {:?}r2)", self.a, self.b)
        }
    }
}

impl From<Rational> for QExt {
    fn from(q: Rational) -> Self {
        QExt::rational(q)
    }
}

macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident, |$x:ident, $y:ident| $body:expr) => {
        impl<'a> $tr<&'a $t> for &'a $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                let ($x, $y) = (self, rhs);
                $body
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                $tr::$m(&self, rhs)
            }
        }
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                $tr::$m(&self, &rhs)
            }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                $tr::$m(self, &rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add, |x, y| Rational(&x.0 + &y.0));
forward_binop!(Rational, Sub, sub, |x, y| Rational(&x.0 - &y.0));
forward_binop!(Rational, Mul, mul, |x, y| Rational(&x.0 * &y.0));
forward_binop!(Rational, Div, div, |x, y| {
    assert!(!y.is_zero(), "division by zero");
    Rational(&x.0 / &y.0)
});

forward_binop!(QExt, Add, add, |x, y| QExt { a: &x.a + &y.a, b: &x.b + &y.b });
forward_binop!(QExt, Sub, sub, |x, y| QExt { a: &x.a - &y.a, b: &x.b - &y.b });
forward_binop!(QExt, Mul, mul, |x, y| {
    let two = Rational::integer(2);
    QExt {
        a: &x.a * &y.a + two * &x.b * &y.b,
        b: &x.a * &y.b + &x.b * &y.a,
    }
});

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl Neg for QExt {
    type Output = QExt;
    fn neg(self) -> QExt {
        QExt { a: -self.a, b: -self.b }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rational_display_is_canonical() {
        assert_eq!(q(6, -4).to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2/1");
        assert_eq!("-3/2".parse::<Rational>().unwrap(), q(-3, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn qext_product_and_inverse() {
        let x = QExt::new(q(1, 1), q(1, 1));
        let y = QExt::new(q(1, 1), q(-1, 1));
        assert_eq!(x.clone() * &y, QExt::from_i64(-1));
        assert_eq!(x.inv().unwrap(), QExt::new(q(-1, 1), q(1, 1)));
        assert!(QExt::zero().inv().is_none());
    }

    #[test]
    fn qext_serializes_as_pair() {
        let x = QExt::new(q(1, 2), q(-3, 1));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"1/2","b":"-3/1"}"#);
        let back: QExt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn qext_square_roots() {
        assert_eq!(QExt::from_rational(&q(1, 2)).sqrt(), Some(QExt::inv_sqrt2()));
        assert_eq!(QExt::from_i64(9).sqrt(), Some(QExt::from_i64(3)));
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        assert_eq!(QExt::new(q(3, 1), q(2, 1)).sqrt(), Some(QExt::new(q(1, 1), q(1, 1))));
        assert_eq!(QExt::from_i64(3).sqrt(), None);
        assert_eq!(QExt::from_i64(-1).sqrt(), None);
    }

    fn small_qext() -> impl Strategy<Value = QExt> {
        (-20i64..20, 1i64..8, -20i64..20, 1i64..8)
            .prop_map(|(a, b, c, d)| QExt::new(q(a, b), q(c, d)))
    }

    proptest! {
        #[test]
        fn qext_field_axioms(x in small_qext(), y in small_qext(), z in small_qext()) {
            prop_assert_eq!((x.clone() * &y) * &z, x.clone() * (y.clone() * &z));
            prop_assert_eq!(x.clone() * (y.clone() + &z), x.clone() * &y + x.clone() * &z);
            prop_assert_eq!(x.clone() * &y, y.clone() * &x);
            if !x.is_zero() {
                prop_assert_eq!(x.clone() * x.inv().unwrap(), QExt::one());
            }
        }

        #[test]
        fn qext_norm_multiplicative(x in small_qext(), y in small_qext()) {
            prop_assert_eq!((x.clone() * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn rational_string_round_trip(n in -1000i64..1000, d in 1i64..1000) {
            let r = q(n, d);
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }

        #[test]
        fn sqrt_of_square_is_root(x in small_qext()) {
            let s = (x.clone() * &x).sqrt().unwrap();
            prop_assert!(s == x || s == -x);
        }
    }
}
