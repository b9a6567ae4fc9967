//! Exact scalar types.
//!
//! Every coefficient ring used by the crate implements [`Coeff`], which is a
//! thin bundle of `num-traits` bounds. Polynomials and matrices are generic
//! over it, so the same code serves the 2-local integers, `F_2`, the rationals
//! used while building the formal group law, and plain integers for Chern
//! roots.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient ring bound used by [`crate::poly::Poly`] and [`crate::matrix::Matrix`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A coefficient ring in which every nonzero element is invertible.
pub trait Field: Coeff {
    fn inv(&self) -> Option<Self>;
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// 2-adic valuation of a nonzero integer.
fn val2(n: i128) -> u32 {
    debug_assert!(n != 0);
    n.trailing_zeros()
}

/// An element of `Z_(2)`: a rational number with odd denominator.
///
/// Canonical form: `den` odd and positive, `gcd(num, den) = 1`, zero is `0/1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalInt2 {
    num: i128,
    den: i128,
}

impl LocalInt2 {
    pub fn new(num: i128, den: i128) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        if den % 2 == 0 {
            return None;
        }
        Some(Self { num, den })
    }

    pub const fn from_int(n: i128) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_unit(&self) -> bool {
        self.num % 2 != 0
    }

    /// 2-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        if self.num == 0 {
            None
        } else {
            Some(val2(self.num))
        }
    }

    /// `2^e` as an element of `Z_(2)`.
    pub fn pow2(e: u32) -> Self {
        Self::from_int(1i128 << e)
    }

    /// The unit `u` with `self = 2^v * u`; `None` for zero.
    pub fn unit_part(&self) -> Option<Self> {
        let v = self.valuation()?;
        Some(Self {
            num: self.num >> v,
            den: self.den,
        })
    }

    /// Exact quotient `self / other` when it lies in `Z_(2)`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        // (a/b) / (c/d) = (a d) / (b c)
        let num = mul_checked(self.num, other.den);
        let den = mul_checked(self.den, other.num);
        Self::new(num, den)
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.is_unit() {
            Self::new(self.den, self.num)
        } else {
            None
        }
    }

    /// Reduction modulo 2.
    pub fn mod2(&self) -> F2 {
        F2::new(self.is_unit())
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Converts a rational, returning `None` if the denominator is even or the
    /// value does not fit the fixed-width representation.
    pub fn from_big(q: &BigRational) -> Option<Self> {
        let num = q.numer().to_i128()?;
        let den = q.denom().to_i128()?;
        Self::new(num, den)
    }
}

#[inline]
fn mul_checked(a: i128, b: i128) -> i128 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("Z_(2) arithmetic overflow in {a} * {b}"))
}

#[inline]
fn add_checked(a: i128, b: i128) -> i128 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("Z_(2) arithmetic overflow in {a} + {b}"))
}

impl fmt::Debug for LocalInt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LocalInt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl From<i64> for LocalInt2 {
    fn from(n: i64) -> Self {
        Self::from_int(n as i128)
    }
}

impl Zero for LocalInt2 {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl One for LocalInt2 {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Add for LocalInt2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == 1 && rhs.den == 1 {
            return Self::from_int(add_checked(self.num, rhs.num));
        }
        let g = self.den.gcd(&rhs.den);
        let l = mul_checked(self.den / g, rhs.den);
        let num = add_checked(
            mul_checked(self.num, rhs.den / g),
            mul_checked(rhs.num, self.den / g),
        );
        Self::new(num, l).expect("odd denominators are closed under lcm")
    }
}

impl Sub for LocalInt2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LocalInt2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for LocalInt2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.den == 1 && rhs.den == 1 {
            return Self::from_int(mul_checked(self.num, rhs.num));
        }
        let g1 = self.num.gcd(&rhs.den).max(1);
        let g2 = rhs.num.gcd(&self.den).max(1);
        let num = mul_checked(self.num / g1, rhs.num / g2);
        let den = mul_checked(self.den / g2, rhs.den / g1);
        Self::new(num, den).expect("product of odd denominators is odd")
    }
}

impl AddAssign for LocalInt2 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for LocalInt2 {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for LocalInt2 {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct F2(bool);

impl F2 {
    pub const ZERO: F2 = F2(false);
    pub const ONE: F2 = F2(true);

    pub const fn new(bit: bool) -> Self {
        F2(bit)
    }

    pub fn bit(self) -> bool {
        self.0
    }
}

impl fmt::Debug for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Zero for F2 {
    fn zero() -> Self {
        F2::ZERO
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for F2 {
    fn one() -> Self {
        F2::ONE
    }
}

impl Add for F2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
}

impl Sub for F2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
}

impl Neg for F2 {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl Mul for F2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        F2(self.0 & rhs.0)
    }
}

impl Field for F2 {
    fn inv(&self) -> Option<Self> {
        if self.0 {
            Some(*self)
        } else {
            None
        }
    }
}

/// Odd part test for a big rational, used by the integrality check.
pub fn has_odd_denominator(q: &BigRational) -> bool {
    q.denom().is_odd()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let a = LocalInt2::new(6, -9).unwrap();
        assert_eq!(a.numerator(), -2);
        assert_eq!(a.denominator(), 3);
        assert!(LocalInt2::new(1, 2).is_none());
        assert_eq!(LocalInt2::new(0, 5).unwrap(), LocalInt2::zero());
    }

    #[test]
    fn units_are_odd_numerators() {
        assert!(LocalInt2::new(3, 5).unwrap().is_unit());
        assert!(!LocalInt2::from_int(6).is_unit());
        assert_eq!(LocalInt2::from_int(12).valuation(), Some(2));
        assert_eq!(
            LocalInt2::from_int(12).unit_part(),
            Some(LocalInt2::from_int(3))
        );
        assert_eq!(LocalInt2::from_int(2).unit_inverse(), None);
        assert_eq!(LocalInt2::from_int(3).unit_inverse(), LocalInt2::new(1, 3));
    }

    #[test]
    fn division_stays_local() {
        let four = LocalInt2::from_int(4);
        let two = LocalInt2::from_int(2);
        assert_eq!(four.checked_div(&two), Some(two));
        assert_eq!(two.checked_div(&four), None);
        assert_eq!(
            LocalInt2::from_int(6).checked_div(&LocalInt2::from_int(10)),
            LocalInt2::new(3, 5)
        );
    }

    fn local() -> impl Strategy<Value = LocalInt2> {
        (-50i128..50, 0i128..8).prop_map(|(n, d)| LocalInt2::new(n, 2 * d + 1).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms_hold(a in local(), b in local(), c in local()) {
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, LocalInt2::zero());
            prop_assert_eq!(a.to_big() * b.to_big(), (a * b).to_big());
        }

        #[test]
        fn valuation_is_additive(a in local(), b in local()) {
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                prop_assert_eq!((a * b).valuation(), Some(va + vb));
            }
        }
    }

    #[test]
    fn f2_arithmetic() {
        assert_eq!(F2::ONE + F2::ONE, F2::ZERO);
        assert_eq!(F2::ONE * F2::ONE, F2::ONE);
        assert_eq!(-F2::ONE, F2::ONE);
        assert_eq!(F2::ONE.inv(), Some(F2::ONE));
    }
}
