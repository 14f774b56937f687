//! Exact rationals and the factorial family.
//!
//! Three factorial-like symbols appear in the closed forms:
//!
//! - [`shifted_factorial`]`(x, k)` is the ascending product `x(x+1)⋯(x+k)`.
//!   It is the meaning of `(k + i/N)!` at stacky points and of the Virasoro
//!   bracket `[x]_0^k`.
//! - [`frac_factorial`]`(x)` descends `x(x-1)(x-2)⋯` to the representative of
//!   `x mod 1` in `(0, 1]`. It is the ordinary factorial on integers and the
//!   usual `Γ(x+1)/Γ(frac)` normalisation on half-integers.
//! - [`half_step_factorial`]`(x)` descends in steps of one half,
//!   `x(x-½)(x-1)⋯`, i.e. `(2x)!/2^{2x}`. This is the prefactor whose ratio
//!   changes by `x + ½` when one non-stacky point is added to a surface
//!   integral.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::iter::{Product, Sum};
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
///
/// Serialises as `"p/q"`, or `"p"` when `q = 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".to_string()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The value as an `i64`, if it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `1/x`; `None` for zero.
    pub fn checked_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    /// Greatest integer `≤ self`.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_bigint(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"` with an optional leading sign on `p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt> {
            if t.is_empty() || t.starts_with('+') && t.len() == 1 {
                return Err(bad());
            }
            BigInt::from_str(t).map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Rational::from_bigint(parse_int(s)?)),
            Some((p, q)) => {
                if q.starts_with(['-', '+']) {
                    return Err(bad());
                }
                let (p, q) = (parse_int(p)?, parse_int(q)?);
                Rational::from_bigints(p, q).map_err(|_| bad())
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                (self.0).$assign_method(rhs.0);
            }
        }
        impl<'a> $assign_tr<&'a Rational> for Rational {
            fn $assign_method(&mut self, rhs: &'a Rational) {
                (self.0).$assign_method(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ascending product `∏_{m=0}^{k} (x + m)`; the empty product `1` when `k = -1`.
pub fn shifted_factorial(x: &Rational, k: i64) -> Result<Rational> {
    if k < -1 {
        return Err(invalid("shifted_factorial needs k >= -1"));
    }
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..=k {
        acc *= &term;
        term += Rational::one();
    }
    Ok(acc)
}

/// `x(x-1)(x-2)⋯` down to the representative of `x mod 1` in `(0, 1]`.
///
/// Equals `x!` on integers and is `1` on `(-1, 0]`.
pub fn frac_factorial(x: &Rational) -> Result<Rational> {
    if *x <= Rational::integer(-1) {
        return Err(invalid(alloc::format!(
            "frac_factorial needs x > -1, got {x}"
        )));
    }
    let mut acc = Rational::one();
    let mut term = x.clone();
    while term.is_positive() {
        acc *= &term;
        term -= Rational::one();
    }
    Ok(acc)
}

/// `x(x-½)(x-1)⋯` over the positive terms, for `2x` an integer `≥ -1`.
///
/// Equals `(2x)!/2^{2x}` when `x ≥ 0`.
pub fn half_step_factorial(x: &Rational) -> Result<Rational> {
    let twice = x * Rational::integer(2);
    if !twice.is_integer() || twice < Rational::integer(-1) {
        return Err(invalid(alloc::format!(
            "half_step_factorial needs 2x an integer >= -1, got {x}"
        )));
    }
    let half = Rational::new(1, 2);
    let mut acc = Rational::one();
    let mut term = x.clone();
    while term.is_positive() {
        acc *= &term;
        term -= &half;
    }
    Ok(acc)
}

/// `m!! = m(m-2)⋯1` for odd `m ≥ -1`, with `(-1)!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigInt> {
    if m < -1 || m % 2 == 0 {
        return Err(invalid(alloc::format!(
            "double_factorial needs odd m >= -1, got {m}"
        )));
    }
    let mut acc = BigInt::one();
    let mut t = m;
    while t > 1 {
        acc *= t;
        t -= 2;
    }
    Ok(acc)
}

/// `top! / ∏ parts_i!`; the parts must sum to `top`.
pub fn multinomial(top: u64, parts: &[u64]) -> Result<BigInt> {
    let sum: u64 = parts.iter().sum();
    if sum != top {
        return Err(invalid(alloc::format!(
            "multinomial parts sum to {sum}, expected {top}"
        )));
    }
    // Product of binomials keeps every intermediate integral.
    let mut acc = BigInt::one();
    let mut seen = 0u64;
    for &p in parts {
        for j in 1..=p {
            acc *= seen + j;
            acc /= j;
        }
        seen += p;
    }
    Ok(acc)
}

/// Integer factorial as a rational.
pub(crate) fn factorial(n: u64) -> Rational {
    Rational::from_bigint((1..=n).map(BigInt::from).product())
}

/// Formats a slice of rationals as `[a, b, ...]`; used in error messages.
pub(crate) fn fmt_list(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    alloc::format!("[{}]", parts.join(", "))
}
