//! Exact rational numbers.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are kept
//! inline and combined through `i128` intermediates; anything larger spills to
//! a heap-allocated [`BigRational`]. The representation is canonical (a value
//! is `Small` whenever it fits), so structural equality and hashing coincide
//! with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced fraction, denominator > 0, numerator != i64::MIN.
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An exact fraction with arbitrary-precision numerator and positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[inline]
fn fits(n: i128, d: i128) -> bool {
    n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128
}

impl Rational {
    #[inline]
    const fn small(n: i64, d: i64) -> Self {
        Rational(Repr::Small(n, d))
    }

    pub fn zero() -> Self {
        Self::small(0, 1)
    }

    pub fn one() -> Self {
        Self::small(1, 1)
    }

    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Self::small(n, 1)
    }

    /// `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_i128(numer as i128, denom as i128)
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(numer, denom))
    }

    /// Reduce `n / d` (d != 0, both well inside the i128 range).
    fn from_i128(mut n: i128, mut d: i128) -> Self {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Self::zero();
        }
        if d != 1 {
            let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
            if g != 1 {
                n /= g;
                d /= g;
            }
        }
        if fits(n, d) {
            Self::small(n as i64, d as i64)
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            ))))
        }
    }

    /// Already-reduced numerator/denominator pair from i128 parts.
    fn from_reduced_i128(n: i128, d: i128) -> Self {
        if n == 0 {
            return Self::zero();
        }
        if fits(n, d) {
            Self::small(n as i64, d as i64)
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            ))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Self::small(n, d);
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(0, _) => panic!("reciprocal of zero"),
            Repr::Small(n, d) => {
                if *n < 0 {
                    Self::small(-d, -n)
                } else {
                    Self::small(*d, *n)
                }
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Exact conversion of a finite binary float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::from_big)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal rendering with exactly `digits` fractional digits, rounding
    /// half away from zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let big = self.to_big();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = big.numer().abs() * &scale;
        let (mut q, r) = scaled.div_rem(big.denom());
        if r * 2u32 >= *big.denom() {
            q += 1u32;
        }
        let negative = big.is_negative() && !q.is_zero();
        let mut s = q.to_string();
        if digits > 0 {
            if s.len() <= digits {
                s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
            }
            s.insert(s.len() - digits, '.');
        }
        if negative {
            s.insert(0, '-');
        }
        s
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Self::small(n as i64, 1)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        if n <= i64::MAX as u64 {
            Self::small(n as i64, 1)
        } else {
            Self::from_big(BigRational::from_integer(BigInt::from(n)))
        }
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }
}

impl From<&BigInt> for Rational {
    fn from(n: &BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n.clone()))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

fn add_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            if *d1 == 1 && *d2 == 1 {
                return Rational::from_reduced_i128(*n1 as i128 + *n2 as i128, 1);
            }
            if d1 == d2 {
                Rational::from_i128(*n1 as i128 + *n2 as i128, *d1 as i128)
            } else {
                let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
                Rational::from_i128(n1 * d2 + n2 * d1, d1 * d2)
            }
        }
        _ => Rational::from_big(a.to_big() + b.to_big()),
    }
}

fn neg_ref(a: &Rational) -> Rational {
    match &a.0 {
        Repr::Small(n, d) => Rational::small(-n, *d),
        Repr::Big(b) => Rational::from_big(-(**b).clone()),
    }
}

fn sub_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(_, _), Repr::Small(n2, d2)) => add_ref(a, &Rational::small(-n2, *d2)),
        _ => Rational::from_big(a.to_big() - b.to_big()),
    }
}

fn mul_ref(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            if *n1 == 0 || *n2 == 0 {
                return Rational::zero();
            }
            if *d1 == 1 && *d2 == 1 {
                return Rational::from_reduced_i128(*n1 as i128 * *n2 as i128, 1);
            }
            let g1 = gcd_u64(n1.unsigned_abs(), *d2 as u64) as i64;
            let g2 = gcd_u64(n2.unsigned_abs(), *d1 as u64) as i64;
            let n = (n1 / g1) as i128 * (n2 / g2) as i128;
            let d = (d1 / g2) as i128 * (d2 / g1) as i128;
            Rational::from_reduced_i128(n, d)
        }
        _ => Rational::from_big(a.to_big() * b.to_big()),
    }
}

fn div_ref(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero");
    mul_ref(a, &b.recip())
}

macro_rules! binop {
    ($tr:ident, $method:ident, $f:ident, $atr:ident, $amethod:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $atr<&Rational> for Rational {
            #[inline]
            fn $amethod(&mut self, rhs: &Rational) {
                *self = $f(self, rhs);
            }
        }
        impl $atr<Rational> for Rational {
            #[inline]
            fn $amethod(&mut self, rhs: Rational) {
                *self = $f(self, &rhs);
            }
        }
    };
}

binop!(Add, add, add_ref, AddAssign, add_assign);
binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
binop!(Div, div, div_ref, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(self)
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

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
                if d1 == d2 {
                    n1.cmp(n2)
                } else {
                    (*n1 as i128 * *d2 as i128).cmp(&(*n2 as i128 * *d1 as i128))
                }
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
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

    /// Accepts fractions (`-3/4`), decimals (`.049`, `-0.778`, `12.`) and
    /// scientific notation (`1e-12`). Decimals are read exactly.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Self::from_bigints(n, d));
        }
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(pos) => {
                let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
                (&t[..pos], e)
            }
            None => (t, 0),
        };
        let (negative, body) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            numer = -numer;
        }
        let scale = exponent as i64 - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        let value = if scale >= 0 {
            BigRational::from_integer(numer * ten.pow(scale as u32))
        } else {
            BigRational::new(numer, ten.pow((-scale) as u32))
        };
        Ok(Self::from_big(value))
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

/// Shorthand for parsing a literal known to be valid.
pub fn q(s: &str) -> Rational {
    s.parse().expect("valid rational literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(r: &Rational) -> BigRational {
        r.to_big()
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(q(".049"), Rational::new(49, 1000));
        assert_eq!(q("-0.778"), Rational::new(-778, 1000));
        assert_eq!(q("1e-12"), Rational::from_bigints(1.into(), BigInt::from(10u64).pow(12u32)));
        assert_eq!(q("2.5E1"), Rational::from_integer(25));
        assert_eq!(q("6/-8"), Rational::new(-3, 4));
        assert_eq!(q("12."), Rational::from_integer(12));
        assert!("".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("0x10".parse::<Rational>().is_err());
    }

    #[test]
    fn denominators_stay_positive_and_reduced() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numer(), BigInt::from(-3));
        assert_eq!(r.denom(), BigInt::from(2));
        assert_eq!(Rational::new(0, -7), Rational::zero());
    }

    #[test]
    fn overflow_spills_to_big_and_back() {
        let m = Rational::from_integer(i64::MAX);
        let sum = &m + &m;
        assert_eq!(sum.numer(), BigInt::from(i64::MAX) * 2);
        let back = &sum - &m;
        assert_eq!(back, m);
        assert!(matches!(back.0, Repr::Small(_, _)));
        let tiny = Rational::new(1, i64::MAX) * Rational::new(1, i64::MAX);
        assert_eq!(tiny * Rational::from_integer(i64::MAX), Rational::new(1, i64::MAX));
        assert_eq!(Rational::from_integer(i64::MIN).numer(), BigInt::from(i64::MIN));
    }

    #[test]
    fn decimal_rendering_rounds_half_away_from_zero() {
        assert_eq!(Rational::new(1, 8).to_decimal(2), "0.13");
        assert_eq!(Rational::new(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(Rational::new(-1, 1000).to_decimal(2), "0.00");
        assert_eq!(Rational::from_integer(3).to_decimal(0), "3");
        assert_eq!(Rational::new(2, 3).to_decimal(6), "0.666667");
        assert_eq!(Rational::new(189, 100).to_decimal(3), "1.890");
    }

    #[test]
    fn float_conversion_is_exact() {
        let r = Rational::from_f64(0.7071067811865475).unwrap();
        assert_eq!(r.to_f64(), 0.7071067811865475);
        assert_eq!(Rational::from_f64(0.5).unwrap(), Rational::new(1, 2));
        assert!(Rational::from_f64(f64::NAN).is_none());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        prop_oneof![
            (any::<i32>(), 1..1000i64).prop_map(|(n, d)| Rational::new(n as i64, d)),
            (any::<i64>(), 1..i64::MAX).prop_map(|(n, d)| Rational::new(n.max(i64::MIN + 1), d)),
            (any::<i64>(), any::<i64>(), 1..i64::MAX).prop_map(|(a, b, d)| {
                Rational::from_bigints(BigInt::from(a) * BigInt::from(b), BigInt::from(d))
            }),
        ]
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigrational(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
            prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
            prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
            if !b.is_zero() {
                prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
            }
            prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
            prop_assert_eq!(Rational::from(big(&(&a * &b))), &a * &b);
        }

        #[test]
        fn display_parse_round_trip(a in arb_rational()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
        }
    }
}
