//! Scalar backends.
//!
//! Two complex fields are supported: `C64` (pairs of `f64`) and `CQ`
//! (Gaussian rationals, pairs of arbitrary-precision fractions). Most of the
//! crate is generic over [`Scalar`], so the same construction can be run
//! exactly or in floating point.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex<f64>;
pub type CQ = Complex<BigRational>;

/// A commutative ring with the few operations polynomial and matrix code needs.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
}

/// A complex field backend.
pub trait Scalar: Ring + std::ops::Div<Output = Self> + 'static {
    /// True when arithmetic is exact and zero tests are decisive.
    const EXACT: bool;
    /// Backend tag as it appears in data files.
    const TAG: &'static str;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_parts(re: Self, im: Self) -> Self;
    /// Exact backends convert the binary value of the float exactly.
    fn from_c64(z: C64) -> Self;
    fn to_c64(&self) -> C64;
    fn conj(&self) -> Self;
    fn re(&self) -> Self;
    fn im(&self) -> Self;
    fn i() -> Self;

    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Ring for C64 {
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;
    const TAG: &'static str = "f64";

    fn from_i64(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }
    fn from_parts(re: Self, im: Self) -> Self {
        Complex::new(re.re, im.re)
    }
    fn from_c64(z: C64) -> Self {
        z
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn re(&self) -> Self {
        Complex::new(self.re, 0.0)
    }
    fn im(&self) -> Self {
        Complex::new(self.im, 0.0)
    }
    fn i() -> Self {
        Complex::new(0.0, 1.0)
    }
}

impl Ring for CQ {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float required for exact conversion")
}

fn rat_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge numerators and denominators together.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let n: BigInt = q.numer() >> shift;
            let d: BigInt = q.denom() >> shift;
            n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
        }
    }
}

impl Scalar for CQ {
    const EXACT: bool = true;
    const TAG: &'static str = "exact";

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }
    fn from_parts(re: Self, im: Self) -> Self {
        Complex::new(re.re, im.re)
    }
    fn from_c64(z: C64) -> Self {
        Complex::new(rat_from_f64(z.re), rat_from_f64(z.im))
    }
    fn to_c64(&self) -> C64 {
        Complex::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn re(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }
    fn im(&self) -> Self {
        Complex::new(self.im.clone(), BigRational::zero())
    }
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn abs(&self) -> f64 {
        let r = rat_to_f64(&self.re.abs());
        let i = rat_to_f64(&self.im.abs());
        r.hypot(i)
    }
}

/// Gaussian rational from integer numerators and a common denominator.
pub fn cq(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> CQ {
    Complex::new(
        BigRational::new(re_n.into(), re_d.into()),
        BigRational::new(im_n.into(), im_d.into()),
    )
}

/// Lossy conversion between backends, going through `C64` unless the
/// source is already the target type.
pub fn convert<S: Scalar, T: Scalar>(x: &S) -> T {
    if S::EXACT && T::EXACT {
        let any: &dyn std::any::Any = x;
        if let Some(q) = any.downcast_ref::<T>() {
            return q.clone();
        }
    }
    T::from_c64(x.to_c64())
}

/// Rationalize a float when it is (up to `tol`) a fraction with a small
/// denominator. Used to cross-check float eigenvalue certificates exactly.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    for d in 1..=max_den {
        let n = (x * d as f64).round();
        if (n / d as f64 - x).abs() <= tol * (1.0 + x.abs()) {
            return Some(BigRational::new(BigInt::from(n as i64), BigInt::from(d)));
        }
    }
    None
}
