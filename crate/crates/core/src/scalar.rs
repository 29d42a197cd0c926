//! Exact scalars: arbitrary-precision rationals, Gaussian rationals, and
//! values of the form `c * e^x` with both `c` and `x` Gaussian rational.

use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n/d` in lowest terms; fails when `d = 0`.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let d = d.into();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(n.into(), d)))
    }

    /// `n/d` for small literals. Panics on a zero denominator.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::new(n, d).expect("zero denominator in literal")
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `n!` as an exact integer.
    pub fn factorial(n: u32) -> Self {
        let mut acc = BigInt::one();
        for i in 2..=n {
            acc *= BigInt::from(i);
        }
        Rational::int(acc)
    }

    /// `n choose r`, zero when `r > n`.
    pub fn binomial(n: u32, r: u32) -> Self {
        if r > n {
            return Rational::zero();
        }
        let mut acc = BigInt::one();
        for i in 0..r {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        Rational::int(acc)
    }

    /// `n! / (n - r)!`, zero when `r > n`.
    pub fn falling(n: u32, r: u32) -> Self {
        if r > n {
            return Rational::zero();
        }
        let mut acc = BigInt::one();
        for i in 0..r {
            acc *= BigInt::from(n - i);
        }
        Rational::int(acc)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("malformed rational '{s}'"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Rational::new(n, d)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $body;
                f(self, rhs)
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add, |a, b| Rational(&a.0 + &b.0));
forward_binop!(Rational, Sub, sub, |a, b| Rational(&a.0 - &b.0));
forward_binop!(Rational, Mul, mul, |a, b| Rational(&a.0 * &b.0));
// Panics on a zero divisor, like the underlying big rational.
forward_binop!(Rational, Div, div, |a, b| Rational(&a.0 / &b.0));

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

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

/// Canonical reduced form of `n/d`.
pub fn rational_normalize(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Rational> {
    Rational::new(n, d)
}

/// Complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    /// `n/d` on the real axis.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::real(Rational::frac(n, d))
    }

    pub fn int(n: i64) -> Self {
        Self::real(Rational::int(n))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = n.recip()?;
        Ok(GaussianRational { re: &self.re * &n, im: -(&self.im * &n) })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::int(n)
    }
}

/// Renders in the operator-expression scalar syntax: `re`, `im i`, or `(re,im)`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{} i", self.im)
        } else {
            write!(f, "({},{})", self.re, self.im)
        }
    }
}

forward_binop!(GaussianRational, Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im
});
forward_binop!(GaussianRational, Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im
});
forward_binop!(GaussianRational, Mul, mul, |a, b| GaussianRational {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re
});
// Panics on a zero divisor; use `checked_div` where that is reachable.
forward_binop!(GaussianRational, Div, div, |a, b| a
    .checked_div(b)
    .expect("division by zero"));

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

/// The value `coeff * e^exponent`.
///
/// A zero coefficient always carries exponent zero, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExpScalar {
    coeff: GaussianRational,
    exponent: GaussianRational,
}

impl ExpScalar {
    pub fn new(coeff: GaussianRational, exponent: GaussianRational) -> Self {
        if coeff.is_zero() {
            ExpScalar::zero()
        } else {
            ExpScalar { coeff, exponent }
        }
    }

    pub fn from_coeff(coeff: GaussianRational) -> Self {
        Self::new(coeff, GaussianRational::zero())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_coeff(GaussianRational::one())
    }

    pub fn coeff(&self) -> &GaussianRational {
        &self.coeff
    }

    pub fn exponent(&self) -> &GaussianRational {
        &self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, other: &ExpScalar) -> ExpScalar {
        ExpScalar::new(&self.coeff * &other.coeff, &self.exponent + &other.exponent)
    }

    /// Sum of two values sharing an exponent; zero is compatible with anything.
    pub fn add(&self, other: &ExpScalar) -> Result<ExpScalar> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.exponent != other.exponent {
            return Err(Error::IncommensurableExponents(
                self.exponent.to_string(),
                other.exponent.to_string(),
            ));
        }
        Ok(ExpScalar::new(&self.coeff + &other.coeff, self.exponent.clone()))
    }

    pub fn neg(&self) -> ExpScalar {
        ExpScalar::new(-&self.coeff, self.exponent.clone())
    }

    pub fn conj(&self) -> ExpScalar {
        ExpScalar::new(self.coeff.conj(), self.exponent.conj())
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeff.to_complex() * self.exponent.to_complex().exp()
    }
}

impl fmt::Display for ExpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_zero() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{} e^{}", self.coeff, self.exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(c: i64, e: (i64, i64)) -> ExpScalar {
        ExpScalar::new(GaussianRational::int(c), GaussianRational::frac(e.0, e.1))
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(rational_normalize(2, 4).unwrap(), Rational::frac(1, 2));
        assert_eq!(rational_normalize(-3, -6).unwrap(), Rational::frac(1, 2));
        let z = rational_normalize(0, 7).unwrap();
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(rational_normalize(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_text() {
        assert_eq!(Rational::frac(-3, 6).to_string(), "-1/2");
        assert_eq!(Rational::int(5).to_string(), "5");
        assert_eq!("6/-4".parse::<Rational>().unwrap(), Rational::frac(-3, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn expscalar_mul_examples() {
        assert_eq!(es(1, (-1, 1)).mul(&es(1, (1, 1))), ExpScalar::one());
        assert_eq!(es(2, (1, 2)).mul(&es(3, (1, 2))), es(6, (1, 1)));
        let z = es(0, (5, 1)).mul(&es(7, (2, 1)));
        assert!(z.is_zero());
        assert!(z.exponent().is_zero());
    }

    #[test]
    fn expscalar_add_examples() {
        assert_eq!(es(1, (2, 1)).add(&es(3, (2, 1))).unwrap(), es(4, (2, 1)));
        assert_eq!(es(5, (3, 1)).add(&ExpScalar::zero()).unwrap(), es(5, (3, 1)));
        assert!(matches!(
            es(1, (1, 1)).add(&es(1, (2, 1))),
            Err(Error::IncommensurableExponents(..))
        ));
    }

    #[test]
    fn factorials_exceed_u64() {
        let f = Rational::factorial(25);
        assert_eq!(f.to_string(), "15511210043330985984000000");
        assert_eq!(Rational::binomial(5, 2), Rational::int(10));
        assert_eq!(Rational::falling(5, 2), Rational::int(20));
        assert!(Rational::binomial(2, 3).is_zero());
    }

    #[test]
    fn gaussian_display_matches_scalar_syntax() {
        assert_eq!(GaussianRational::frac(1, 2).to_string(), "1/2");
        assert_eq!((GaussianRational::i().scale(&Rational::frac(3, 4))).to_string(), "3/4 i");
        let g = GaussianRational::new(Rational::frac(1, 2), Rational::int(-1));
        assert_eq!(g.to_string(), "(1/2,-1)");
    }
}
