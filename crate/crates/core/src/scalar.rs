//! Scalar abstractions.
//!
//! Two families of numbers show up in this crate. Transcendental work
//! (angles, logarithms, root finding, region sampling) needs a real
//! floating-point type and is written against [`Scalar`]. The coefficient
//! recurrence for `H_m(z)` only needs field arithmetic and is written
//! against [`Coefficient`], which is implemented for `f32`, `f64` and
//! [`BigRational`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Real floating-point type used by the numerical modules.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Coefficient + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + Coefficient + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` literal into `F`.
#[inline]
pub(crate) fn lit<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("f64 literal representable in scalar type")
}

/// `x`, raised to `ulps` machine epsilons when `F` is too coarse for it.
#[inline]
pub(crate) fn tol<F: Scalar>(x: f64, ulps: f64) -> F {
    lit::<F>(x).max(F::epsilon() * lit(ulps))
}

#[inline]
pub(crate) fn to_f64<F: Scalar>(x: F) -> f64 {
    ToPrimitive::to_f64(&x).unwrap_or(f64::NAN)
}

/// Field element usable as a polynomial coefficient.
pub trait Coefficient:
    Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// True for exact arithmetic (no rounding).
    const EXACT: bool;

    /// Whether this value is zero next to coefficients of magnitude `scale`.
    /// Exact types only treat true zero as negligible.
    fn is_negligible(&self, scale: f64, rel_eps: f64) -> bool;

    fn to_f64(&self) -> f64;

    /// Sums a sequence of terms. Float types use compensated summation.
    fn sum_terms<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }

    /// Converts into a floating-point scalar.
    fn to_scalar<F: Scalar>(&self) -> F {
        F::from_f64(self.to_f64()).unwrap_or_else(F::nan)
    }
}

macro_rules! float_coefficient {
    ($t:ty) => {
        impl Coefficient for $t {
            const EXACT: bool = false;

            fn is_negligible(&self, scale: f64, rel_eps: f64) -> bool {
                (*self as f64).abs() <= rel_eps * scale
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            // Neumaier's variant of Kahan summation.
            fn sum_terms<I: IntoIterator<Item = Self>>(terms: I) -> Self {
                let mut sum: $t = 0.0;
                let mut comp: $t = 0.0;
                for x in terms {
                    let t = sum + x;
                    if sum.abs() >= x.abs() {
                        comp += (sum - t) + x;
                    } else {
                        comp += (x - t) + sum;
                    }
                    sum = t;
                }
                sum + comp
            }
        }
    };
}

float_coefficient!(f32);
float_coefficient!(f64);

impl Coefficient for BigRational {
    const EXACT: bool = true;

    fn is_negligible(&self, _scale: f64, _rel_eps: f64) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-2.75"` or
/// `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if negative { -value } else { value })
}
