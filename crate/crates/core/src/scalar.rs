//! Coefficient fields.
//!
//! Everything algebraic is generic over [`Scalar`]. Two fields are provided:
//! [`Complex64`] for numerical work and [`BigRational`] for exact oracle runs
//! (classical identities pinned without rounding).
//!
//! Each field names a [`Scalar::Wide`] companion used where long cancelling
//! sums would otherwise lose digits (composition and inversion). For
//! `Complex64` that is a double-double complex number; the exact field is its
//! own companion.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{One, ToPrimitive, Zero};
use num::traits::FromPrimitive;
use num::BigRational;
use twofloat::TwoFloat;

/// Complex numbers with roughly 106 bits of mantissa per component.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexWide {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl ComplexWide {
    pub fn new(re: TwoFloat, im: TwoFloat) -> Self {
        Self { re, im }
    }
}

/// `a / b` by long division on the leading words. The crate's own quotient
/// forms its residual without a fused multiply-add and keeps only f64 accuracy.
fn wide_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

impl Add for ComplexWide {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ComplexWide {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for ComplexWide {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for ComplexWide {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Div for ComplexWide {
    type Output = Self;

    fn div(self, o: Self) -> Self {
        if o.im == TwoFloat::default() {
            return Self::new(wide_div(self.re, o.re), wide_div(self.im, o.re));
        }
        let den = o.re * o.re + o.im * o.im;
        let re = self.re * o.re + self.im * o.im;
        let im = self.im * o.re - self.re * o.im;
        Self::new(wide_div(re, den), wide_div(im, den))
    }
}

impl Zero for ComplexWide {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        *self == Self::default()
    }
}

impl One for ComplexWide {
    fn one() -> Self {
        Self::new(TwoFloat::from(1.0), TwoFloat::default())
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    type Wide: Scalar;

    fn from_i64(n: i64) -> Self;

    /// Exact conversion where the field allows it; `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_c64(&self) -> Complex64;

    /// `None` when the field cannot hold `z` (non-finite, or non-real in a real field).
    fn from_c64(z: Complex64) -> Option<Self> {
        if z.im == 0.0 {
            Self::from_f64(z.re)
        } else {
            None
        }
    }

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn widen(&self) -> Self::Wide;

    fn narrow(wide: &Self::Wide) -> Self;
}

impl Scalar for Complex64 {
    type Wide = ComplexWide;

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then(|| Complex64::new(x, 0.0))
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_c64(z: Complex64) -> Option<Self> {
        (z.re.is_finite() && z.im.is_finite()).then_some(z)
    }

    fn widen(&self) -> ComplexWide {
        ComplexWide::new(TwoFloat::from(self.re), TwoFloat::from(self.im))
    }

    fn narrow(wide: &ComplexWide) -> Self {
        wide.to_c64()
    }
}

impl Scalar for ComplexWide {
    type Wide = Self;

    fn from_i64(n: i64) -> Self {
        ComplexWide::new(TwoFloat::from_i64(n).unwrap_or_default(), TwoFloat::default())
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then(|| ComplexWide::new(TwoFloat::from(x), TwoFloat::default()))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }

    fn from_c64(z: Complex64) -> Option<Self> {
        (z.re.is_finite() && z.im.is_finite()).then(|| ComplexWide::new(TwoFloat::from(z.re), TwoFloat::from(z.im)))
    }

    fn widen(&self) -> Self {
        *self
    }

    fn narrow(wide: &Self) -> Self {
        *wide
    }
}

impl Scalar for BigRational {
    type Wide = Self;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn widen(&self) -> Self {
        self.clone()
    }

    fn narrow(wide: &Self) -> Self {
        wide.clone()
    }
}

/// `n!` in the field, built by repeated multiplication so rationals stay exact.
pub fn factorial<S: Scalar>(n: usize) -> S {
    (2..=n as i64).fold(S::one(), |acc, k| acc * S::from_i64(k))
}

pub fn factorial_f64(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `ln n!`, used where `n!` itself would overflow a double.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
