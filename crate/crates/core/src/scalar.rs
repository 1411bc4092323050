//! Complex scalar abstraction shared by the double-precision kernel and the
//! extended-precision oracle.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// A complex field element the iteration kernel can run on.
///
/// Constants are created with [`ComplexScalar::lift`] from an existing value so
/// that types carrying a working precision can propagate it.
pub trait ComplexScalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact conversion of a double-precision constant, matching `self`'s precision.
    fn lift(&self, c: Complex64) -> Self;

    /// Nearest double-precision value.
    fn to_c64(&self) -> Complex64;

    fn is_zero(&self) -> bool;

    /// Modulus rounded to `f64`.
    fn modulus(&self) -> f64;

    /// Natural log of the modulus; finite even when the modulus underflows `f64`.
    fn ln_modulus(&self) -> f64 {
        self.modulus().ln()
    }
}

impl ComplexScalar for Complex64 {
    #[inline]
    fn lift(&self, c: Complex64) -> Self {
        c
    }

    #[inline]
    fn to_c64(&self) -> Complex64 {
        *self
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    #[inline]
    fn modulus(&self) -> f64 {
        self.norm()
    }
}
