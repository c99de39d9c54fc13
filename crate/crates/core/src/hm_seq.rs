//! The sequence `H_m(z)` defined by `sum H_m(z) t^m = 1 / D(t, z)` with
//! `D(t, z) = P(t) + z t^r Q(t)`, its roots, and the residue form
//! `H_m(z) = sum_k 1 / (P(t_k) R(t_k) t_k^m)` over the roots `t_k` of `D`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{DensePoly, GeneratorSpec, DEGREE_EPS};
use crate::roots::{aberth_roots, poly_roots};
use crate::scalar::{lit, to_f64, Coefficient, Scalar};

/// Pairwise root distance (relative to `max(1, max |t|)`) below which
/// `residue_sum` refuses to run.
pub const MULTIPLE_ROOT_TOL: f64 = 1e-6;
pub const DEFAULT_REAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    ExactRational,
    Float,
}

impl Backend {
    pub fn of<C: Coefficient>() -> Self {
        if C::EXACT {
            Backend::ExactRational
        } else {
            Backend::Float
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::ExactRational => "exact-rational",
            Backend::Float => "float",
        }
    }
}

/// `H_0, ..., H_{m_max}` as polynomials in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct HmSequence<C> {
    pub spec: GeneratorSpec<C>,
    polys: Vec<DensePoly<C>>,
    backend: Backend,
}

/// Runs the recurrence `H_m = -(1/p_0) sum_{i=1}^{min(m, N)} d_i(z) H_{m-i}`
/// with `d_i(z) = p_i + z q_{i-r}` and `N = max(n, r + s)`.
pub fn generate_hm<C: Coefficient>(spec: &GeneratorSpec<C>, m_max: usize) -> HmSequence<C> {
    let p = spec.p.expand();
    let q = spec.q.expand();
    let r = spec.r;
    let big_n = spec.d_degree();
    let p0 = p.coeff(0);
    let neg_inv_p0 = -(C::one() / p0.clone());

    let mut polys: Vec<DensePoly<C>> = Vec::with_capacity(m_max + 1);
    polys.push(DensePoly::constant(C::one() / p0));
    for m in 1..=m_max {
        let top = m.min(big_n);
        let len = m / r + 1;
        let coeffs = (0..len)
            .map(|j| {
                let mut terms = Vec::with_capacity(2 * top);
                for i in 1..=top {
                    let prev = &polys[m - i];
                    let pi = p.coeff(i);
                    if !pi.is_zero() {
                        terms.push(pi * prev.coeff(j));
                    }
                    if i >= r && j >= 1 {
                        let qi = q.coeff(i - r);
                        if !qi.is_zero() {
                            terms.push(qi * prev.coeff(j - 1));
                        }
                    }
                }
                C::sum_terms(terms) * neg_inv_p0.clone()
            })
            .collect();
        polys.push(DensePoly::new(coeffs));
    }
    HmSequence { spec: spec.clone(), polys, backend: Backend::of::<C>() }
}

impl<C: Coefficient> HmSequence<C> {
    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn m_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[DensePoly<C>] {
        &self.polys
    }

    pub fn get(&self, m: usize) -> Result<&DensePoly<C>> {
        self.polys.get(m).ok_or(Error::Index { index: m, max: self.m_max() })
    }

    /// `H_m(z)` in the coefficient type.
    pub fn eval(&self, m: usize, z: &C) -> Result<C> {
        Ok(self.get(m)?.eval(z))
    }

    /// `H_m(z)` at complex `z`, with coefficients rounded to `F`.
    pub fn eval_complex<F: Scalar>(&self, m: usize, z: Complex<F>) -> Result<Complex<F>> {
        Ok(self.get(m)?.to_scalar::<F>().eval_complex(z))
    }

    /// Degree of `H_m` after dropping negligible leading coefficients.
    pub fn degree_observed(&self, m: usize) -> Result<usize> {
        Ok(self.get(m)?.clone().trimmed(DEGREE_EPS).degree())
    }

    /// `sum_{m <= M} H_m(z) t^m` times `D(t, z)`, truncated to degree
    /// `M + deg D`. Equals `1 + O(t^{M+1})` when the recurrence is right.
    pub fn back_multiply(&self, z: &C) -> DensePoly<C> {
        let series = DensePoly::new(self.polys.iter().map(|h| h.eval(z)).collect());
        series.mul(&self.spec.d_coeffs(z))
    }
}

/// `H_m(z)` from the residues of `1 / (t^{m+1} D(t, z))` at the roots of `D`.
///
/// Uses `P(t_k) R(t_k) = -t_k D_t(t_k, z)`, valid at every root.
pub fn residue_sum<F: Scalar>(spec: &GeneratorSpec<F>, z: Complex<F>, m: usize) -> Result<Complex<F>> {
    let p = spec.p.expand();
    let q = spec.q.expand();
    let d: Vec<Complex<F>> = (0..=spec.d_degree())
        .map(|i| {
            let qi = if i >= spec.r { q.coeff(i - spec.r) } else { F::zero() };
            Complex::new(p.coeff(i), F::zero()) + z * qi
        })
        .collect();
    let scale = d.iter().map(|c| c.norm()).fold(F::zero(), F::max);
    let mut d = d;
    while d.len() > 1 && d.last().is_some_and(|c| c.norm() <= lit::<F>(DEGREE_EPS) * scale) {
        d.pop();
    }

    let roots = if z.im == F::zero() {
        poly_roots(&DensePoly::new(d.iter().map(|c| c.re).collect()))?
    } else {
        aberth_roots(&d)?
    };

    let max_mod = roots.iter().map(|t| t.norm()).fold(F::one(), F::max);
    let mut closest = F::infinity();
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            closest = closest.min((*a - *b).norm());
        }
    }
    if closest < lit::<F>(MULTIPLE_ROOT_TOL) * max_mod {
        return Err(Error::MultipleRoot { distance: to_f64(closest) });
    }

    let deriv: Vec<Complex<F>> = d.iter().enumerate().skip(1).map(|(i, c)| *c * lit::<F>(i as f64)).collect();
    let horner = |coeffs: &[Complex<F>], t: Complex<F>| {
        coeffs.iter().rev().fold(Complex::new(F::zero(), F::zero()), |acc, c| acc * t + c)
    };
    let mut sum = Complex::new(F::zero(), F::zero());
    for &t in &roots {
        let pr = -(t * horner(&deriv, t));
        sum = sum + Complex::new(F::one(), F::zero()) / (pr * t.powi(m as i32));
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyConfig {
    /// Endpoint `a`; without it `interval_ok` is not decided.
    pub a: Option<f64>,
    pub sign_exponent: i32,
    pub real_tol: f64,
    /// Defaults to `1e-6 (1 + |a|)`.
    pub interval_tol: Option<f64>,
}

impl ClassifyConfig {
    pub fn new(a: Option<f64>, sign_exponent: i32) -> Self {
        Self { a, sign_exponent, real_tol: DEFAULT_REAL_TOL, interval_tol: None }
    }

    fn interval_tol(&self) -> f64 {
        self.interval_tol.unwrap_or_else(|| 1e-6 * (1.0 + self.a.map_or(0.0, f64::abs)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootFlags {
    pub real: bool,
    /// Real and of sign `sign_exponent`.
    pub sign_ok: bool,
    /// Real and on the far side of `a`; `None` when `a` is unknown.
    pub interval_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub m: usize,
    pub roots: Vec<Complex<f64>>,
    pub flags: Vec<RootFlags>,
    pub max_abs_im: f64,
    pub scale: f64,
    pub all_real: bool,
    /// Every real-classified root has sign `sign_exponent`.
    pub sign_ok: bool,
    /// Every real-classified root satisfies `s * root >= s * a - interval_tol`.
    pub interval_ok: Option<bool>,
    pub degree_observed: usize,
}

/// Roots of `H_m`, sorted by real part, with realness, sign and interval flags.
pub fn classify_roots<C: Coefficient>(seq: &HmSequence<C>, m: usize, cfg: &ClassifyConfig) -> Result<RootReport> {
    let poly = seq.get(m)?.to_scalar::<f64>().trimmed(DEGREE_EPS);
    let degree = poly.degree();
    let mut roots = if degree == 0 { Vec::new() } else { poly_roots(&poly)? };
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let scale = roots.iter().map(|t| t.norm()).fold(1.0, f64::max);
    let max_abs_im = roots.iter().map(|t| t.im.abs()).fold(0.0, f64::max);
    let s = cfg.sign_exponent as f64;
    let itol = cfg.interval_tol();
    let flags: Vec<RootFlags> = roots
        .iter()
        .map(|t| {
            let real = t.im.abs() <= cfg.real_tol * scale;
            RootFlags {
                real,
                sign_ok: real && s * t.re > 0.0,
                interval_ok: cfg.a.map(|a| real && s * t.re >= s * a - itol),
            }
        })
        .collect();
    let real_flags = || flags.iter().filter(|f| f.real);
    Ok(RootReport {
        m,
        max_abs_im,
        scale,
        all_real: max_abs_im <= cfg.real_tol * scale,
        sign_ok: real_flags().all(|f| f.sign_ok),
        interval_ok: cfg.a.map(|_| real_flags().all(|f| f.interval_ok == Some(true))),
        degree_observed: degree,
        roots,
        flags,
    })
}

/// Reports for `m_lo..=m_hi`, computed in parallel.
pub fn classify_range<C: Coefficient>(
    seq: &HmSequence<C>,
    m_lo: usize,
    m_hi: usize,
    cfg: &ClassifyConfig,
) -> Result<Vec<RootReport>> {
    (m_lo..=m_hi).into_par_iter().map(|m| classify_roots(seq, m, cfg)).collect()
}

/// Smallest `m` in the reports from which every later report is all-real.
/// This is what was observed, not a proven threshold.
pub fn observed_real_threshold(reports: &[RootReport]) -> Option<usize> {
    let mut threshold = None;
    for rep in reports.iter().rev() {
        if !rep.all_real {
            break;
        }
        threshold = Some(rep.m);
    }
    threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn example_exact() -> GeneratorSpec<BigRational> {
        let ints = |v: &[i64]| v.iter().map(|&x| q(x, 1)).collect::<Vec<_>>();
        GeneratorSpec::from_zeros(ints(&[-2, 1, 2, 4]), ints(&[-1, 3, 5]), 3).unwrap()
    }

    /// Coefficients of `1/P(t)` by long division.
    fn series_inverse(p: &[BigRational], len: usize) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for m in 0..len {
            let mut acc = if m == 0 { q(1, 1) } else { q(0, 1) };
            for i in 1..=m.min(p.len() - 1) {
                acc -= &p[i] * &out[m - i];
            }
            out.push(acc / &p[0]);
        }
        out
    }

    #[test]
    fn first_terms() {
        let seq = generate_hm(&example_exact(), 5);
        assert_eq!(seq.backend(), Backend::ExactRational);
        assert_eq!(seq.get(0).unwrap().coeffs(), &[q(-1, 16)]);
        assert_eq!(seq.get(1).unwrap().coeffs(), &[q(-5, 64)]);
        let inv = series_inverse(example_exact().p.expand().coeffs(), 6);
        assert_eq!(seq.get(2).unwrap().coeffs(), &[inv[2].clone()]);
        assert_eq!(seq.eval(5, &q(0, 1)).unwrap(), inv[5]);
    }

    #[test]
    fn degree_bound() {
        let seq = generate_hm(&example_exact(), 30);
        for m in 0..=30 {
            assert_eq!(seq.degree_observed(m).unwrap(), m / 3);
        }
    }

    #[test]
    fn float_backend_tracks_exact() {
        let exact = generate_hm(&example_exact(), 20);
        let float = generate_hm(&example_exact().to_scalar::<f64>(), 20);
        assert_eq!(float.backend(), Backend::Float);
        for m in 0..=20 {
            let a = exact.eval_complex(m, Complex::new(-0.7, 0.0)).unwrap().re;
            let b = float.eval(m, &-0.7).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "m={m}: {a} vs {b}");
        }
    }

    #[test]
    fn index_error() {
        let seq = generate_hm(&example_exact(), 3);
        assert_eq!(seq.get(4).unwrap_err(), Error::Index { index: 4, max: 3 });
    }

    #[test]
    fn residue_at_m0_is_inverse_p0() {
        let spec = example_exact().to_scalar::<f64>();
        let v = residue_sum(&spec, Complex::new(-0.83, 0.0), 0).unwrap();
        assert!((v - Complex::new(-1.0 / 16.0, 0.0)).norm() < 1e-9);
        let v = residue_sum(&spec, Complex::new(0.4, 0.9), 0).unwrap();
        assert!((v - Complex::new(-1.0 / 16.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn residue_at_z_zero() {
        let spec = example_exact().to_scalar::<f64>();
        let seq = generate_hm(&spec, 9);
        let v = residue_sum(&spec, Complex::new(0.0, 0.0), 9).unwrap();
        let want = seq.eval(9, &0.0).unwrap();
        assert!((v.re - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }

    #[test]
    fn back_multiplication_is_exact() {
        let seq = generate_hm(&example_exact(), 12);
        let prod = seq.back_multiply(&q(-3, 7));
        assert_eq!(prod.coeff(0), q(1, 1));
        for i in 1..=12 {
            assert_eq!(prod.coeff(i), q(0, 1), "t^{i}");
        }
    }

    #[test]
    fn classify_vacuous_below_r() {
        let seq = generate_hm(&example_exact(), 2);
        let rep = classify_roots(&seq, 2, &ClassifyConfig::new(Some(-0.0589), -1)).unwrap();
        assert!(rep.roots.is_empty());
        assert!(rep.all_real && rep.sign_ok && rep.interval_ok == Some(true));
        assert_eq!(rep.degree_observed, 0);
    }

    #[test]
    fn threshold_scan() {
        let mk = |m, all_real| RootReport {
            m,
            roots: vec![],
            flags: vec![],
            max_abs_im: 0.0,
            scale: 1.0,
            all_real,
            sign_ok: true,
            interval_ok: None,
            degree_observed: 0,
        };
        assert_eq!(observed_real_threshold(&[mk(3, true), mk(4, false), mk(5, true), mk(6, true)]), Some(5));
        assert_eq!(observed_real_threshold(&[mk(3, true), mk(4, false)]), None);
    }
}
