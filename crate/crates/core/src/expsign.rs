//! Sign of the exponential sum `sum_{k=0}^{n-1} w_k^l e^{x w_k}`,
//! `w_k = e^{(2k-1) pi i / n}`, at the abscissae
//! `x = pi (b - l/n) / sin(pi/n)` where its two leading terms are real.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default largest `n` accepted by [`sweep`]. Past this, small `b` mixes
/// magnitudes that double precision cannot resolve.
pub const DEFAULT_MAX_N: usize = 64;
pub const REALNESS_TOL: f64 = 1e-9;

/// Reduces `ell` into `[0, n)`.
pub fn normalize_ell(n: usize, ell: i64) -> usize {
    ell.rem_euclid(n as i64) as usize
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

pub fn admissible_x(n: usize, ell: usize, b: i64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let x = PI * (b as f64 - ell as f64 / nf) / (PI / nf).sin();
    if x < 0.0 {
        return Err(Error::Domain(format!("x = {x} is negative")));
    }
    Ok(x)
}

/// `w_k^l e^{x w_k}`.
pub fn exp_term(n: usize, ell: usize, k: usize, x: f64) -> Complex64 {
    let phase = (2.0 * k as f64 - 1.0) * PI / n as f64;
    let w = Complex64::from_polar(1.0, phase);
    Complex64::from_polar(1.0, ell as f64 * phase) * (w * x).exp()
}

pub fn exp_poly_sum(n: usize, ell: usize, x: f64) -> Complex64 {
    (0..n).map(|k| exp_term(n, ell, k, x)).sum()
}

/// Closed form of the `k = 0` term at the admissible `x`:
/// `(-1)^b e^{pi (b - l/n) cot(pi/n)}`.
pub fn first_term_value(n: usize, ell: usize, b: i64) -> Result<f64> {
    admissible_x(n, ell, b)?;
    let nf = n as f64;
    let sign = if b.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * (PI * (b as f64 - ell as f64 / nf) / (PI / nf).tan()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpSignCase {
    pub n: usize,
    pub ell: usize,
    pub b: i64,
    pub x: f64,
    pub sum_value: f64,
    pub sum_im: f64,
    pub first_term: f64,
    /// `|Im sum| / (1 + |sum|)`.
    pub realness_defect: f64,
    pub sign_match: bool,
}

pub fn check_sign_dominance(n: usize, ell: usize, b: i64) -> Result<ExpSignCase> {
    let ell = normalize_ell(n.max(1), ell as i64);
    let x = admissible_x(n, ell, b)?;
    let first_term = first_term_value(n, ell, b)?;
    let sum = exp_poly_sum(n, ell, x);
    Ok(ExpSignCase {
        n,
        ell,
        b,
        x,
        sum_value: sum.re,
        sum_im: sum.im,
        first_term,
        realness_defect: sum.im.abs() / (1.0 + sum.norm()),
        sign_match: sum.re != 0.0 && sum.re.signum() == first_term.signum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub b_max: i64,
    pub max_n: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { n_min: 2, n_max: 12, b_max: 10, max_n: DEFAULT_MAX_N }
    }
}

/// Every `(n, ell, b)` with `n_min <= n <= n_max`, `0 <= ell < n`,
/// `1 <= b <= b_max`, ordered by `n`, then `ell`, then `b`.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<ExpSignCase>> {
    check_n(cfg.n_min)?;
    if cfg.n_max > cfg.max_n {
        return Err(Error::Domain(format!("n_max {} exceeds the cap {}", cfg.n_max, cfg.max_n)));
    }
    let triples: Vec<(usize, usize, i64)> = (cfg.n_min..=cfg.n_max)
        .flat_map(|n| (0..n).flat_map(move |ell| (1..=cfg.b_max).map(move |b| (n, ell, b))))
        .collect();
    triples.into_par_iter().map(|(n, ell, b)| check_sign_dominance(n, ell, b)).collect()
}
