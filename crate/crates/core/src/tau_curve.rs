//! The curve `t = tau(theta) e^{i theta}`, `0 < theta < pi/r`, on which the
//! angle sum `sum theta_k - sum eta_j - r theta` equals `(p+ - q+ - 1) pi`,
//! and the real parameterization `z(theta) = -P(t) / (t^r Q(t))` along it.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{GeneratorSpec, DEGREE_EPS};
use crate::rfunc::{check_condition2, endpoint_a, find_t_a};
use crate::roots::poly_roots;
use crate::scalar::{lit, to_f64, Scalar};

/// Relative bisection tolerance for `tau`.
pub const TAU_REL_TOL: f64 = 1e-12;
/// Largest accepted `|angle sum residual|` on a traced sample.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Slack on the disk radius when counting roots inside it.
pub const DISK_SLACK: f64 = 1e-8;

/// The angle in `(0, pi)` with `(t - zero) / (conj(t) - zero) = e^{2 i angle}`.
///
/// That ratio is `e^{2i arg(t - zero)}`, so the angle is `arg(t - zero)`,
/// which lies in `(0, pi)` for `Im t > 0`.
pub fn angle_of<F: Scalar>(zero: F, t: Complex<F>) -> Result<F> {
    if !(t.im > F::zero()) {
        return Err(Error::Domain(format!("angle needs Im t > 0, got {}", t.im)));
    }
    Ok(t.im.atan2(t.re - zero))
}

/// `sum theta_k(t) - sum eta_j(t) - r Arg t`, which equals `-Im f(t)`.
pub fn angle_sum<F: Scalar>(spec: &GeneratorSpec<F>, t: Complex<F>) -> Result<F> {
    if !(t.im > F::zero()) {
        return Err(Error::Domain(format!("angle sum needs Im t > 0, got {}", t.im)));
    }
    let theta_sum = spec.p.zeros().iter().fold(F::zero(), |acc, &a| acc + t.im.atan2(t.re - a));
    let eta_sum = spec.q.zeros().iter().fold(F::zero(), |acc, &g| acc + t.im.atan2(t.re - g));
    Ok(theta_sum - eta_sum - lit::<F>(spec.r as f64) * t.arg())
}

fn target_multiple<F: Scalar>(spec: &GeneratorSpec<F>) -> F {
    lit::<F>(spec.p.pos_count() as f64 - spec.q.pos_count() as f64 - 1.0) * F::PI()
}

fn check_theta<F: Scalar>(spec: &GeneratorSpec<F>, theta: F) -> Result<()> {
    let top = F::PI() / lit(spec.r as f64);
    if !(theta > F::zero() && theta < top) {
        return Err(Error::Domain(format!("theta must lie in (0, pi/r), got {theta}")));
    }
    Ok(())
}

/// Left side minus right side of the angle-sum equation at `t = tau e^{i theta}`.
pub fn angle_sum_residual<F: Scalar>(spec: &GeneratorSpec<F>, tau: F, theta: F) -> Result<F> {
    check_theta(spec, theta)?;
    if !(tau > F::zero()) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    Ok(angle_sum(spec, Complex::from_polar(tau, theta))? - target_multiple(spec))
}

/// `f(t) = r Log t + sum Log(t - gamma_j) - sum Log(t - tau_k)`.
pub fn log_func<F: Scalar>(spec: &GeneratorSpec<F>, t: Complex<F>) -> Complex<F> {
    let r = lit::<F>(spec.r as f64);
    let q_part = spec.q.zeros().iter().fold(Complex::new(F::zero(), F::zero()), |acc, &g| acc + (t - g).ln());
    let p_part = spec.p.zeros().iter().fold(Complex::new(F::zero(), F::zero()), |acc, &a| acc + (t - a).ln());
    t.ln() * r + q_part - p_part
}

/// The unique `tau in (0, tau_2)` solving the angle-sum equation at `theta`.
///
/// Bisects on `(1e-12 tau_2, tau_2 (1 - 1e-12))`, where the residual must go
/// from positive to negative.
pub fn solve_tau<F: Scalar>(spec: &GeneratorSpec<F>, theta: F) -> Result<F> {
    check_theta(spec, theta)?;
    let Some(&tau2) = spec.tau2() else {
        return Err(Error::Hypothesis("P needs at least two positive zeros".into()));
    };
    let mut lo = lit::<F>(1e-12) * tau2;
    let mut hi = tau2 * (F::one() - lit(1e-12));
    let f_lo = angle_sum_residual(spec, lo, theta)?;
    let f_hi = angle_sum_residual(spec, hi, theta)?;
    if !(f_lo > F::zero() && f_hi < F::zero()) {
        return Err(Error::Bracket { what: "angle-sum residual", lo: to_f64(lo), hi: to_f64(hi) });
    }
    let tol = lit::<F>(TAU_REL_TOL);
    for _ in 0..200 {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if angle_sum_residual(spec, mid, theta)? > F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / lit(2.0))
}

/// `z(theta)` and the imaginary part left over from evaluating it in
/// complex arithmetic.
pub fn z_of_theta<F: Scalar>(spec: &GeneratorSpec<F>, theta: F) -> Result<(F, F)> {
    let tau = solve_tau(spec, theta)?;
    let z = spec.z_for_root(Complex::from_polar(tau, theta));
    Ok((z.re, z.im))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauCurveSample {
    pub theta: f64,
    pub tau: f64,
    pub z: f64,
    pub residual: f64,
    pub im_z: f64,
    /// Set near `theta = 0` when `tau_1` is a repeated zero.
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauCurve {
    pub samples: Vec<TauCurveSample>,
    /// `tau(0+) = t_a`.
    pub t_a_limit: f64,
    /// `z(0+) = a`.
    pub a_limit: f64,
    pub sign_exponent: i32,
}

/// Checks what the curve machinery needs before solving: `tau_1`, `tau_2`
/// exist, `Q` has no zero in `(0, tau_2]`, and condition (2) holds.
pub fn check_curve_preconditions<F: Scalar>(spec: &GeneratorSpec<F>) -> Result<()> {
    let Some(tau2) = spec.tau2() else {
        return Err(Error::Hypothesis("P needs at least two positive zeros".into()));
    };
    if let Some(g) = spec.q.positive().first() {
        if g <= tau2 {
            return Err(Error::Hypothesis(format!("Q has a zero at {g} inside (0, tau_2 = {tau2}]")));
        }
    }
    let cond2 = check_condition2(spec);
    if !cond2.holds {
        return Err(Error::Hypothesis(format!(
            "negative zero counts violated at x = {}",
            cond2.violation.unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// Samples the curve at `theta_i = i/(n+1) * pi/r`, `i = 1..=n`, and checks
/// that `sign_exponent * z` is positive and strictly increasing.
pub fn trace_curve<F: Scalar>(spec: &GeneratorSpec<F>, n_samples: usize) -> Result<TauCurve> {
    if n_samples < 2 {
        return Err(Error::Domain("need at least 2 samples".into()));
    }
    check_curve_preconditions(spec)?;
    trace_curve_ungated(spec, n_samples)
}

/// [`trace_curve`] without the precondition gate, for exploring specs that
/// fail it. The limits are NaN when `t_a` cannot be bracketed.
pub fn trace_curve_ungated<F: Scalar>(spec: &GeneratorSpec<F>, n_samples: usize) -> Result<TauCurve> {
    if n_samples < 2 {
        return Err(Error::Domain("need at least 2 samples".into()));
    }
    let Some(&tau1) = spec.tau1() else {
        return Err(Error::Hypothesis("P needs at least two positive zeros".into()));
    };
    let (t_a, a) = match find_t_a(spec) {
        Ok(t_a) => (to_f64(t_a), to_f64(endpoint_a(spec, t_a))),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let top = F::PI() / lit(spec.r as f64);

    let multiplicity = spec.p.multiplicity(&tau1).max(1);
    let confidence_floor = 10.0 * f64::EPSILON.powf(1.0 / multiplicity as f64);
    let confidence_floor = if multiplicity > 1 { confidence_floor } else { 0.0 };

    let samples = (1..=n_samples)
        .into_par_iter()
        .map(|i| {
            let theta = top * lit(i as f64) / lit((n_samples + 1) as f64);
            let tau = solve_tau(spec, theta)?;
            let t = Complex::from_polar(tau, theta);
            let z = spec.z_for_root(t);
            let residual = angle_sum_residual(spec, tau, theta)?;
            Ok(TauCurveSample {
                theta: to_f64(theta),
                tau: to_f64(tau),
                z: to_f64(z.re),
                residual: to_f64(residual),
                im_z: to_f64(z.im),
                low_confidence: to_f64(theta) < confidence_floor,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let sign = spec.sign_exponent() as f64;
    for (i, s) in samples.iter().enumerate() {
        let prev_ok = i == 0 || sign * s.z > sign * samples[i - 1].z;
        if !(sign * s.z > 0.0) || !prev_ok {
            return Err(Error::MonotonicityViolation { index: i });
        }
    }

    Ok(TauCurve { samples, t_a_limit: t_a, a_limit: a, sign_exponent: spec.sign_exponent() })
}

/// Roots of `D(t, z(theta))` relative to the disk `|t| <= tau(theta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskSeparation {
    pub holds: bool,
    pub theta: f64,
    pub tau: f64,
    pub z: f64,
    /// Roots within `tau (1 + 1e-8)`.
    pub inside: Vec<[f64; 2]>,
    /// Smallest modulus among the other roots, divided by `tau`.
    pub min_outside_ratio: f64,
}

/// Whether the only roots of `P(t) + z(theta) t^r Q(t)` in the closed disk
/// of radius `tau(theta)` are `tau e^{+-i theta}`.
pub fn check_disk_separation<F: Scalar>(spec: &GeneratorSpec<F>, theta: F) -> Result<DiskSeparation> {
    check_curve_preconditions(spec)?;
    let tau = solve_tau(spec, theta)?;
    let t0 = Complex::from_polar(tau, theta);
    let z = spec.z_for_root(t0).re;
    let d = spec.d_coeffs(&z).trimmed(DEGREE_EPS);
    let roots = poly_roots(&d)?;

    let radius = tau * (F::one() + lit(DISK_SLACK));
    let (inside, outside): (Vec<_>, Vec<_>) = roots.into_iter().partition(|t| t.norm() <= radius);
    let match_tol = lit::<F>(1e-6) * tau;
    let hits_upper = inside.iter().filter(|t| (**t - t0).norm() <= match_tol).count();
    let hits_lower = inside.iter().filter(|t| (**t - t0.conj()).norm() <= match_tol).count();
    let min_outside = outside.iter().map(|t| t.norm()).fold(F::infinity(), F::min);

    Ok(DiskSeparation {
        holds: inside.len() == 2 && hits_upper == 1 && hits_lower == 1 && min_outside > radius,
        theta: to_f64(theta),
        tau: to_f64(tau),
        z: to_f64(z),
        inside: inside.iter().map(|t| [to_f64(t.re), to_f64(t.im)]).collect(),
        min_outside_ratio: to_f64(min_outside / tau),
    })
}
