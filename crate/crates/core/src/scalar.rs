//! Scalar abstraction for loads and subfile lengths.
//!
//! Everything that is a real number in the model (normalized loads, expected
//! subfile sizes, analytic-mode payload lengths) is computed through
//! [`Scalar`], so the same code runs in `f32`, `f64` or exact
//! [`BigRational`] arithmetic. Combinatorial counts stay in [`BigUint`].

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync {
    /// Converts a real parameter. Rational scalars take the exact binary value.
    fn from_real(x: f64) -> Self;

    fn from_count(n: &BigUint) -> Self;

    fn to_f64(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_count(&BigUint::from(n))
    }

    fn powu(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }

    fn from_count(n: &BigUint) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powu(&self, exp: usize) -> Self {
        match i32::try_from(exp) {
            Ok(e) => self.powi(e),
            Err(_) => self.powf(exp as f64),
        }
    }
}

impl Scalar for f32 {
    fn from_real(x: f64) -> Self {
        x as f32
    }

    fn from_count(n: &BigUint) -> Self {
        n.to_f32().unwrap_or(f32::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn powu(&self, exp: usize) -> Self {
        match i32::try_from(exp) {
            Ok(e) => self.powi(e),
            Err(_) => self.powf(exp as f32),
        }
    }
}

impl Scalar for BigRational {
    /// Panics on NaN or infinite input; parameters are validated finite upstream.
    fn from_real(x: f64) -> Self {
        BigRational::from_float(x).expect("finite real parameter")
    }

    fn from_count(n: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(n.clone()))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
