//! Polynomial sequences `H_m(z)` generated by `1 / (P(t) + z t^r Q(t))`
//! for hyperbolic `P` and `Q`.
//!
//! The numerical modules are generic over the floating-point type and the
//! coefficient recurrence is generic over the field, so `f32`, `f64` and
//! exact rationals all work. The aliases below fix the common choices.

pub mod error;
pub mod expsign;
pub mod hm_seq;
pub mod poly;
pub mod rfunc;
pub mod roots;
pub mod scalar;
pub mod tau_curve;

pub use num_complex::Complex;
pub use num_rational::BigRational;

pub use error::{Error, Result};
pub use hm_seq::{classify_roots, generate_hm, residue_sum, Backend, ClassifyConfig, HmSequence, RootReport};
pub use poly::{make_zero_set, DensePoly, GeneratorSpec, IndexedZeroSet};
pub use rfunc::{hypothesis_report, GridConfig, HypothesisReport};
pub use roots::poly_roots;
pub use scalar::{parse_rational, Coefficient, Scalar};
pub use tau_curve::{trace_curve, TauCurve, TauCurveSample};

pub type Rational = BigRational;

pub type ZeroSet = IndexedZeroSet<f64>;
pub type ExactZeroSet = IndexedZeroSet<Rational>;
pub type Spec = GeneratorSpec<f64>;
pub type ExactSpec = GeneratorSpec<Rational>;
pub type Poly = DensePoly<f64>;
pub type ExactPoly = DensePoly<Rational>;
pub type Sequence = HmSequence<f64>;
pub type ExactSequence = HmSequence<Rational>;
