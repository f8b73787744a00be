//! Coefficient types: real and complex doubles, plus exact rationals for
//! small oracle checks.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

/// Coefficient ring of a [`GradedElement`](crate::algebra::GradedElement).
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Exact conversion of a structure constant, `None` when not representable.
    fn from_complex(z: Complex64) -> Option<Self>;

    fn conj(&self) -> Self;

    fn to_complex(&self) -> Complex64;

    fn abs_sq(&self) -> f64 {
        self.to_complex().norm_sqr()
    }
}

/// Floating-point coefficients, used by the analyzers.
pub trait FloatScalar: Scalar + Copy {
    fn from_f64(x: f64) -> Self;

    /// Draws a standard normal coefficient (complex: unit variance split
    /// evenly between real and imaginary parts).
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn re(&self) -> f64 {
        self.to_complex().re
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }

    fn conj(&self) -> Self {
        *self
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn abs_sq(&self) -> f64 {
        self * self
    }
}

impl FloatScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_complex(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl FloatScalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

impl Scalar for Rational64 {
    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }

    /// Accepts real values that round-trip exactly (integers and short
    /// dyadic fractions).
    fn from_complex(z: Complex64) -> Option<Self> {
        if z.im != 0.0 || !z.re.is_finite() {
            return None;
        }
        let x = z.re;
        if x.fract() == 0.0 && x.abs() < 9.0e15 {
            return Some(Rational64::from_integer(x as i64));
        }
        let r = Rational64::approximate_float(x)?;
        (r.to_f64() == Some(x)).then_some(r)
    }

    fn conj(&self) -> Self {
        *self
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}
