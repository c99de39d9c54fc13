//! Real polynomials stored by their zeros or by dense coefficients, and the
//! generator triple `(P, Q, r)`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

/// Relative threshold below which a trailing float coefficient is dropped.
pub const DEGREE_EPS: f64 = 1e-12;

/// A hyperbolic polynomial stored as its sorted real zeros.
///
/// Zeros are indexed `-neg_count < k <= pos_count`: `zero_at(0)` is the
/// largest negative zero, `zero_at(1)` the smallest positive one. Repeated
/// entries encode multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexedZeroSet<T> {
    zeros: Vec<T>,
    neg_count: usize,
}

/// Builds an [`IndexedZeroSet`] from an unsorted list of nonzero reals.
pub fn make_zero_set<T: Coefficient>(zeros: impl IntoIterator<Item = T>) -> Result<IndexedZeroSet<T>> {
    let zeros: Vec<T> = zeros.into_iter().collect();
    if zeros.is_empty() {
        return Err(Error::EmptyInput);
    }
    IndexedZeroSet::from_zeros(zeros)
}

impl<T: Coefficient> IndexedZeroSet<T> {
    fn from_zeros(mut zeros: Vec<T>) -> Result<Self> {
        if zeros.iter().any(|z| z.partial_cmp(&T::zero()).is_none()) {
            return Err(Error::Domain("zero is not a number".into()));
        }
        if zeros.iter().any(Zero::is_zero) {
            return Err(Error::ZeroAtOrigin);
        }
        zeros.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
        let neg_count = zeros.iter().take_while(|z| **z < T::zero()).count();
        Ok(Self { zeros, neg_count })
    }

    /// The constant polynomial 1 (no zeros). Used for `Q = 1`.
    pub fn unit() -> Self {
        Self { zeros: Vec::new(), neg_count: 0 }
    }

    pub fn zeros(&self) -> &[T] {
        &self.zeros
    }

    pub fn pos_count(&self) -> usize {
        self.zeros.len() - self.neg_count
    }

    pub fn neg_count(&self) -> usize {
        self.neg_count
    }

    pub fn total(&self) -> usize {
        self.zeros.len()
    }

    /// Zero with signed index `k`, `-neg_count < k <= pos_count`.
    pub fn zero_at(&self, k: isize) -> Option<&T> {
        let pos = self.neg_count as isize - 1 + k;
        if k <= -(self.neg_count as isize) || k > self.pos_count() as isize {
            return None;
        }
        self.zeros.get(pos as usize)
    }

    pub fn positive(&self) -> &[T] {
        &self.zeros[self.neg_count..]
    }

    pub fn negative(&self) -> &[T] {
        &self.zeros[..self.neg_count]
    }

    /// Number of zeros in `(0, x]`, counting multiplicity.
    pub fn count_pos(&self, x: &T) -> Result<usize> {
        if !(*x > T::zero()) {
            return Err(Error::Domain("count_pos needs x > 0".into()));
        }
        Ok(self.positive().iter().take_while(|z| *z <= x).count())
    }

    /// Number of zeros in `[x, 0)`, counting multiplicity.
    pub fn count_neg(&self, x: &T) -> Result<usize> {
        if !(*x < T::zero()) {
            return Err(Error::Domain("count_neg needs x < 0".into()));
        }
        Ok(self.negative().iter().rev().take_while(|z| *z >= x).count())
    }

    /// Multiplicity of `value` among the zeros.
    pub fn multiplicity(&self, value: &T) -> usize {
        self.zeros.iter().filter(|z| *z == value).count()
    }

    /// Monic dense expansion of `prod (t - zero)`.
    pub fn expand(&self) -> DensePoly<T> {
        let mut coeffs = vec![T::one()];
        for zero in &self.zeros {
            let mut next = vec![T::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
                next[i] = next[i].clone() - zero.clone() * c.clone();
            }
            coeffs = next;
        }
        DensePoly::new(coeffs)
    }

    /// Value of the product form at `t`.
    pub fn eval(&self, t: &T) -> T {
        self.zeros.iter().fold(T::one(), |acc, z| acc * (t.clone() - z.clone()))
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> IndexedZeroSet<U> {
        let zeros: Vec<U> = self.zeros.iter().map(f).collect();
        let neg_count = zeros.iter().take_while(|z| **z < U::zero()).count();
        IndexedZeroSet { zeros, neg_count }
    }

    pub fn to_scalar<F: Scalar>(&self) -> IndexedZeroSet<F> {
        self.map(|z| z.to_scalar::<F>())
    }
}

impl<F: Scalar> IndexedZeroSet<F> {
    /// Value of the product form at complex `t`. Exactly zero at stored zeros.
    pub fn eval_complex(&self, t: Complex<F>) -> Complex<F> {
        self.zeros.iter().fold(Complex::new(F::one(), F::zero()), |acc, &z| acc * (t - z))
    }
}

/// Dense real polynomial; `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensePoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> DensePoly<T> {
    /// Builds a polynomial, dropping exact trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Drops trailing coefficients that are negligible relative to the
    /// largest one (only affects float coefficients).
    pub fn trimmed(mut self, rel_eps: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_negligible(scale, rel_eps)) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &T {
        self.coeffs.last().expect("non-empty")
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::zero());
        }
        let mut k = T::zero();
        let coeffs = self.coeffs[1..]
            .iter()
            .map(|c| {
                k = k.clone() + T::one();
                c.clone() * k.clone()
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> DensePoly<U> {
        DensePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_scalar<F: Scalar>(&self) -> DensePoly<F> {
        self.map(|c| c.to_scalar::<F>())
    }
}

impl<F: Scalar> DensePoly<F> {
    /// Horner evaluation at complex `t`.
    pub fn eval_complex(&self, t: Complex<F>) -> Complex<F> {
        self.coeffs.iter().rev().fold(Complex::new(F::zero(), F::zero()), |acc, &c| acc * t + c)
    }

    /// `sum |c_i| |t|^i`, the natural scale for residuals of `p(t)`.
    pub fn abs_eval(&self, modulus: F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, &c| acc * modulus + c.abs())
    }
}

/// The triple `(P, Q, r)` defining `1 / (P(t) + z t^r Q(t))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSpec<T> {
    pub p: IndexedZeroSet<T>,
    pub q: IndexedZeroSet<T>,
    pub r: usize,
}

impl<T: Coefficient> GeneratorSpec<T> {
    pub fn new(p: IndexedZeroSet<T>, q: IndexedZeroSet<T>, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidExponent(r));
        }
        if p.total() == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self { p, q, r })
    }

    /// Convenience constructor from raw zero lists. An empty `q` means `Q = 1`.
    pub fn from_zeros(p: Vec<T>, q: Vec<T>, r: usize) -> Result<Self> {
        let p = make_zero_set(p)?;
        let q = if q.is_empty() { IndexedZeroSet::unit() } else { make_zero_set(q)? };
        Self::new(p, q, r)
    }

    /// `(-1)^(p_+ - q_+)` as `+1` or `-1`.
    pub fn sign_exponent(&self) -> i32 {
        if (self.p.pos_count() + self.q.pos_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Smallest positive zero of `P`.
    pub fn tau1(&self) -> Option<&T> {
        self.p.zero_at(1)
    }

    /// Second smallest positive zero of `P` (counting multiplicity).
    pub fn tau2(&self) -> Option<&T> {
        self.p.zero_at(2)
    }

    /// Degree of `D(t, z)` in `t` for generic `z`: `max(n, r + s)`.
    pub fn d_degree(&self) -> usize {
        self.p.total().max(self.r + self.q.total())
    }

    /// Coefficients `d_i(z) = p_i + z q_{i-r}` of `D(t, z) = P(t) + z t^r Q(t)`.
    pub fn d_coeffs(&self, z: &T) -> DensePoly<T> {
        let p = self.p.expand();
        let q = self.q.expand();
        let coeffs = (0..=self.d_degree())
            .map(|i| {
                let qi = if i >= self.r { q.coeff(i - self.r) } else { T::zero() };
                p.coeff(i) + z.clone() * qi
            })
            .collect();
        DensePoly::new(coeffs)
    }

    pub fn to_scalar<F: Scalar>(&self) -> GeneratorSpec<F> {
        GeneratorSpec { p: self.p.to_scalar(), q: self.q.to_scalar(), r: self.r }
    }
}

impl<F: Scalar> GeneratorSpec<F> {
    /// `t^r Q(t)` at complex `t`.
    pub fn tr_q(&self, t: Complex<F>) -> Complex<F> {
        t.powi(self.r as i32) * self.q.eval_complex(t)
    }

    /// `-P(t) / (t^r Q(t))`, the value of `z` making `t` a root of `D(t, z)`.
    pub fn z_for_root(&self, t: Complex<F>) -> Complex<F> {
        -self.p.eval_complex(t) / self.tr_q(t)
    }
}
