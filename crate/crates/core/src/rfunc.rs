//! The rational function `R(t) = r - tP'/P + tQ'/Q`, the zero-count and
//! region hypotheses built on it, and the solver for `t_a`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::GeneratorSpec;
use crate::scalar::{lit, to_f64, tol, Coefficient, Scalar};

/// Relative distance to a zero of `P` or `Q` treated as a pole of `R`.
pub const POLE_TOL: f64 = 1e-14;
/// Absolute tolerance of the `t_a` bisection.
pub const T_A_TOL: f64 = 1e-12;

fn check_pole<F: Scalar>(spec: &GeneratorSpec<F>, t: Complex<F>) -> Result<()> {
    let tol = tol::<F>(POLE_TOL, 4.0);
    for &zero in spec.p.zeros().iter().chain(spec.q.zeros()) {
        if (t - zero).norm() <= tol * zero.abs().max(F::one()) {
            return Err(Error::Pole { re: to_f64(t.re), im: to_f64(t.im) });
        }
    }
    Ok(())
}

/// `R(t)` from the partial-fraction form `r - sum t/(t - tau_k) + sum t/(t - gamma_j)`.
pub fn r_func<F: Scalar>(spec: &GeneratorSpec<F>, t: Complex<F>) -> Result<Complex<F>> {
    let r = Complex::new(lit::<F>(spec.r as f64), F::zero());
    if t.re == F::zero() && t.im == F::zero() {
        return Ok(r);
    }
    check_pole(spec, t)?;
    let p_part = spec.p.zeros().iter().fold(Complex::new(F::zero(), F::zero()), |acc, &a| acc + t / (t - a));
    let q_part = spec.q.zeros().iter().fold(Complex::new(F::zero(), F::zero()), |acc, &g| acc + t / (t - g));
    Ok(r - p_part + q_part)
}

/// `R` on the real axis.
pub fn r_real<F: Scalar>(spec: &GeneratorSpec<F>, x: F) -> Result<F> {
    Ok(r_func(spec, Complex::new(x, F::zero()))?.re)
}

/// The weight `w(t) = sum tau_k/|t - tau_k|^2 - sum gamma_j/|t - gamma_j|^2`,
/// so that `Im R(t) = w(t) Im t`.
pub fn im_r_weight<F: Scalar>(spec: &GeneratorSpec<F>, t: Complex<F>) -> Result<F> {
    check_pole(spec, t)?;
    let p_part = spec.p.zeros().iter().fold(F::zero(), |acc, &a| acc + a / (t - a).norm_sqr());
    let q_part = spec.q.zeros().iter().fold(F::zero(), |acc, &g| acc + g / (t - g).norm_sqr());
    Ok(p_part - q_part)
}

/// `R'(x)` on the real axis: `sum tau_k/(x - tau_k)^2 - sum gamma_j/(x - gamma_j)^2`.
pub fn r_prime_real<F: Scalar>(spec: &GeneratorSpec<F>, x: F) -> Result<F> {
    im_r_weight(spec, Complex::new(x, F::zero()))
}

/// Verdict of a zero-count condition with the first violating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub violation: Option<f64>,
}

impl ConditionVerdict {
    fn ok() -> Self {
        Self { holds: true, violation: None }
    }

    fn violated_at<T: Coefficient>(x: &T) -> Self {
        Self { holds: false, violation: Some(x.to_f64()) }
    }
}

/// Condition (1): `n+^Q(x) = 0` on `(0, tau_2]` and `n+^P(x) - n+^Q(x) >= 2`
/// for `x >= tau_2`.
///
/// Both counts are right-continuous step functions, so checking at `tau_2`
/// and at every zero beyond it is exact. Fails without a violation point
/// when `P` has fewer than two positive zeros.
pub fn check_condition1<T: Coefficient>(spec: &GeneratorSpec<T>) -> ConditionVerdict {
    let Some(tau2) = spec.tau2() else {
        return ConditionVerdict { holds: false, violation: None };
    };
    if let Some(gamma) = spec.q.positive().first() {
        if gamma <= tau2 {
            return ConditionVerdict::violated_at(gamma);
        }
    }
    let mut points: Vec<&T> = spec.p.positive().iter().chain(spec.q.positive()).filter(|x| *x >= tau2).collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    points.dedup();
    for x in points {
        let np = spec.p.count_pos(x).expect("x > 0");
        let nq = spec.q.count_pos(x).expect("x > 0");
        if np < nq + 2 {
            return ConditionVerdict::violated_at(x);
        }
    }
    ConditionVerdict::ok()
}

/// Condition (2): `n-^Q(x) - n-^P(x) >= 0` for all `x < 0`, checked at every
/// negative zero, nearest the origin first.
pub fn check_condition2<T: Coefficient>(spec: &GeneratorSpec<T>) -> ConditionVerdict {
    let mut points: Vec<&T> = spec.p.negative().iter().chain(spec.q.negative()).collect();
    points.sort_by(|a, b| b.partial_cmp(a).expect("ordered"));
    points.dedup();
    for x in points {
        let np = spec.p.count_neg(x).expect("x < 0");
        let nq = spec.q.count_neg(x).expect("x < 0");
        if nq < np {
            return ConditionVerdict::violated_at(x);
        }
    }
    ConditionVerdict::ok()
}

/// Sampling parameters for the region checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub radii: usize,
    pub angles: usize,
    /// Excluded boundary band, relative to each extent.
    pub band: f64,
    /// Density multiplier of each refinement level.
    pub refine_factor: usize,
    pub refine_depth: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { radii: 256, angles: 256, band: 1e-3, refine_factor: 4, refine_depth: 3 }
    }
}

/// Open regions on which `Im R > 0` is required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `0 < |t| < tau_2`, `0 < Arg t < pi/r`.
    Sector,
    /// `0 < |t| < t_a`, `0 < Arg t < pi`.
    Semidisk,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Sector => "sector",
            Region::Semidisk => "semidisk",
        }
    }

    fn top_angle<F: Scalar>(self, r: usize) -> F {
        match self {
            Region::Sector => F::PI() / lit(r as f64),
            Region::Semidisk => F::PI(),
        }
    }
}

/// Outcome of sampling `w(t)` over a region. A numerical certificate only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCheckReport {
    pub region: Region,
    pub holds: bool,
    pub min_margin: f64,
    pub argmin: [f64; 2],
    pub grid_size: usize,
    pub boundary_band: f64,
    pub bound: f64,
    pub evaluations: usize,
}

/// One coarse grid sample of the weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionSample {
    pub re: f64,
    pub im: f64,
    pub weight: f64,
    pub region: Region,
}

fn axis<F: Scalar>(lo: F, hi: F, count: usize) -> Vec<F> {
    match count {
        0 => Vec::new(),
        1 => vec![(lo + hi) / lit(2.0)],
        _ => (0..count).map(|i| lo + (hi - lo) * lit::<F>(i as f64) / lit::<F>((count - 1) as f64)).collect(),
    }
}

fn weight_or_neg_inf<F: Scalar>(spec: &GeneratorSpec<F>, t: Complex<F>) -> F {
    im_r_weight(spec, t).unwrap_or_else(|_| F::neg_infinity())
}

/// Samples the weight on a radius-major polar grid. Rows are computed in
/// parallel and returned in grid order.
fn sample_polar<F: Scalar>(spec: &GeneratorSpec<F>, radii: &[F], angles: &[F]) -> Vec<(Complex<F>, F)> {
    radii
        .par_iter()
        .map(|&rho| {
            angles
                .iter()
                .map(|&phi| {
                    let t = Complex::from_polar(rho, phi);
                    (t, weight_or_neg_inf(spec, t))
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// First minimum in grid order; NaN counts as a minimum.
fn grid_min<F: Scalar>(samples: &[(Complex<F>, F)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, (_, w)) in samples.iter().enumerate() {
        match best {
            None => best = Some(i),
            Some(b) if w.is_nan() || *w < samples[b].1 => best = Some(i),
            _ => {}
        }
        if w.is_nan() {
            break;
        }
    }
    best
}

/// Coarse grid samples of `w` over a region, for export.
pub fn sample_region<F: Scalar>(
    spec: &GeneratorSpec<F>,
    region: Region,
    bound: F,
    grid: &GridConfig,
) -> Vec<RegionSample> {
    let band = lit::<F>(grid.band);
    let top = region.top_angle::<F>(spec.r);
    let radii = axis(bound * band, bound * (F::one() - band), grid.radii);
    let angles = axis(top * band, top * (F::one() - band), grid.angles);
    sample_polar(spec, &radii, &angles)
        .into_iter()
        .map(|(t, w)| RegionSample { re: to_f64(t.re), im: to_f64(t.im), weight: to_f64(w), region })
        .collect()
}

/// Samples `w(t) = Im R(t) / Im t` over `region` with outer radius `bound`,
/// refining around the running minimum. `holds` iff every sample is positive.
pub fn check_region<F: Scalar>(
    spec: &GeneratorSpec<F>,
    region: Region,
    bound: F,
    grid: &GridConfig,
) -> Result<RegionCheckReport> {
    if !(bound > F::zero()) {
        return Err(Error::Domain(format!("region bound must be positive, got {bound}")));
    }
    if grid.radii == 0 || grid.angles == 0 {
        return Err(Error::Domain("grid must have at least one radius and one angle".into()));
    }
    let band = lit::<F>(grid.band);
    let top = region.top_angle::<F>(spec.r);
    let (r_lo, r_hi) = (bound * band, bound * (F::one() - band));
    let (a_lo, a_hi) = (top * band, top * (F::one() - band));
    let radii = axis(r_lo, r_hi, grid.radii);
    let angles = axis(a_lo, a_hi, grid.angles);
    let coarse = sample_polar(spec, &radii, &angles);
    let mut evaluations = coarse.len();
    let idx = grid_min(&coarse).expect("non-empty grid");
    let (mut best_t, mut best_w) = coarse[idx];

    let spacing = |lo: F, hi: F, n: usize| if n > 1 { (hi - lo) / lit((n - 1) as f64) } else { hi - lo };
    let mut dr = spacing(r_lo, r_hi, grid.radii);
    let mut da = spacing(a_lo, a_hi, grid.angles);
    let per_side = 2 * grid.refine_factor.max(1) + 1;
    for _ in 0..grid.refine_depth {
        if best_w.is_nan() || best_w <= F::zero() {
            break;
        }
        let (rho, phi) = best_t.to_polar();
        let sub_r = axis((rho - dr).max(r_lo), (rho + dr).min(r_hi), per_side);
        let sub_a = axis((phi - da).max(a_lo), (phi + da).min(a_hi), per_side);
        let fine = sample_polar(spec, &sub_r, &sub_a);
        evaluations += fine.len();
        if let Some(i) = grid_min(&fine) {
            if fine[i].1.is_nan() || fine[i].1 < best_w {
                best_t = fine[i].0;
                best_w = fine[i].1;
            }
        }
        let factor = lit::<F>(grid.refine_factor.max(1) as f64);
        dr = dr / factor;
        da = da / factor;
    }

    Ok(RegionCheckReport {
        region,
        holds: best_w > F::zero(),
        min_margin: to_f64(best_w),
        argmin: [to_f64(best_t.re), to_f64(best_t.im)],
        grid_size: grid.radii * grid.angles,
        boundary_band: grid.band,
        bound: to_f64(bound),
        evaluations,
    })
}

/// Condition (3): `Im R > 0` on the sector of radius `tau2` and opening `pi/r`.
pub fn check_sector<F: Scalar>(spec: &GeneratorSpec<F>, tau2: F, grid: &GridConfig) -> Result<RegionCheckReport> {
    check_region(spec, Region::Sector, tau2, grid)
}

/// Condition (4): `Im R > 0` on the upper semi-disk of radius `t_a`.
pub fn check_semidisk<F: Scalar>(spec: &GeneratorSpec<F>, t_a: F, grid: &GridConfig) -> Result<RegionCheckReport> {
    check_region(spec, Region::Semidisk, t_a, grid)
}

/// The smallest positive zero `t_a` of `P(t) R(t)`.
///
/// Returns `tau_1` when `tau_1 = tau_2`; otherwise bisects `R` on
/// `(tau_1, tau_2)` shrunk by `1e-9 (tau_2 - tau_1)` at each end, relying on
/// `R(tau_1+) = -inf`, `R(tau_2-) = +inf` and monotonicity in between.
pub fn find_t_a<F: Scalar>(spec: &GeneratorSpec<F>) -> Result<F> {
    let (Some(&tau1), Some(&tau2)) = (spec.tau1(), spec.tau2()) else {
        return Err(Error::Hypothesis("P needs at least two positive zeros".into()));
    };
    if tau1 == tau2 {
        return Ok(tau1);
    }
    let eps = tol::<F>(1e-9, 16.0) * (tau2 - tau1);
    let (mut lo, mut hi) = (tau1 + eps, tau2 - eps);
    let f_lo = r_real(spec, lo)?;
    let f_hi = r_real(spec, hi)?;
    if !(f_lo < F::zero() && f_hi > F::zero()) {
        return Err(Error::Bracket { what: "R(t)", lo: to_f64(lo), hi: to_f64(hi) });
    }
    let tol = tol::<F>(T_A_TOL, 4.0);
    while hi - lo > tol {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        // A pole of R strictly inside the bracket would surface here.
        if r_real(spec, mid)? < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / lit(2.0))
}

/// `a = -P(t_a) / (t_a^r Q(t_a))`.
pub fn endpoint_a<F: Scalar>(spec: &GeneratorSpec<F>, t_a: F) -> F {
    spec.z_for_root(Complex::new(t_a, F::zero())).re
}

/// Verdicts and key quantities for the four hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub cond1: ConditionVerdict,
    pub cond2: ConditionVerdict,
    pub cond3: Option<RegionCheckReport>,
    pub cond4: Option<RegionCheckReport>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub t_a: Option<f64>,
    pub a: Option<f64>,
    pub sign_exponent: i32,
    pub all_hold: bool,
    pub notes: Vec<String>,
}

/// Runs conditions (1)-(4) and computes `t_a` and `a`.
///
/// `t_a` is attempted whenever `R` is continuous and monotone on
/// `(tau_1, tau_2)`: no positive zero of `Q` in `(0, tau_2]` and condition
/// (3) holds. Condition (4) is only sampled once `t_a` is known.
pub fn hypothesis_report<F: Scalar>(spec: &GeneratorSpec<F>, grid: &GridConfig) -> HypothesisReport {
    let cond1 = check_condition1(spec);
    let cond2 = check_condition2(spec);
    let tau1 = spec.tau1().copied();
    let tau2 = spec.tau2().copied();
    let mut notes = Vec::new();

    let cond3 = match tau2 {
        Some(tau2) => match check_sector(spec, tau2, grid) {
            Ok(report) => Some(report),
            Err(e) => {
                notes.push(format!("condition 3 not sampled: {e}"));
                None
            }
        },
        None => {
            notes.push("P has fewer than two positive zeros; tau_2 undefined".into());
            None
        }
    };

    let q_clear = match tau2 {
        Some(tau2) => spec.q.positive().first().is_none_or(|g| *g > tau2),
        None => false,
    };
    let cond3_holds = cond3.as_ref().is_some_and(|c| c.holds);
    let t_a = if q_clear && cond3_holds {
        match find_t_a(spec) {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(format!("t_a not found: {e}"));
                None
            }
        }
    } else {
        if tau2.is_some() {
            notes.push("t_a not attempted: R is not known to be continuous and increasing on (tau_1, tau_2)".into());
        }
        None
    };

    let cond4 = t_a.and_then(|t_a| match check_semidisk(spec, t_a, grid) {
        Ok(report) => Some(report),
        Err(e) => {
            notes.push(format!("condition 4 not sampled: {e}"));
            None
        }
    });
    let a = t_a.map(|t| to_f64(endpoint_a(spec, t)));
    let all_hold = cond1.holds && cond2.holds && cond3_holds && cond4.as_ref().is_some_and(|c| c.holds);

    HypothesisReport {
        cond1,
        cond2,
        cond3,
        cond4,
        tau1: tau1.map(to_f64),
        tau2: tau2.map(to_f64),
        t_a: t_a.map(to_f64),
        a,
        sign_exponent: spec.sign_exponent(),
        all_hold,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> GeneratorSpec<f64> {
        GeneratorSpec::from_zeros(vec![-2.0, 1.0, 2.0, 4.0], vec![-1.0, 3.0, 5.0], 3).unwrap()
    }

    fn interlaced() -> GeneratorSpec<f64> {
        GeneratorSpec::from_zeros(vec![1.0, 3.0, 5.0], vec![2.0, 4.0], 3).unwrap()
    }

    fn positive_endpoint() -> GeneratorSpec<f64> {
        GeneratorSpec::from_zeros(vec![1.0, 2.0, 3.0], vec![-3.0, 4.0], 3).unwrap()
    }

    #[test]
    fn r_at_origin_is_r() {
        assert_eq!(r_func(&example(), Complex::new(0.0, 0.0)), Ok(Complex::new(3.0, 0.0)));
    }

    #[test]
    fn r_pole_at_tau1() {
        assert!(matches!(r_func(&example(), Complex::new(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(im_r_weight(&example(), Complex::new(3.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn r_matches_log_derivative_form() {
        // r - t P'/P + t Q'/Q through dense polynomials.
        let spec = example();
        let p = spec.p.expand();
        let q = spec.q.expand();
        let t = Complex::new(0.5, 0.0);
        let want =
            3.0 - 0.5 * p.derivative().eval(&0.5) / p.eval(&0.5) + 0.5 * q.derivative().eval(&0.5) / q.eval(&0.5);
        assert!((r_func(&spec, t).unwrap().re - want).abs() < 1e-13);
    }

    #[test]
    fn condition1_cases() {
        let il = check_condition1(&interlaced());
        assert_eq!(il, ConditionVerdict { holds: false, violation: Some(2.0) });
        assert_eq!(check_condition1(&positive_endpoint()), ConditionVerdict::ok());
        // n+^P(3) - n+^Q(3) = 2 - 1.
        assert_eq!(check_condition1(&example()), ConditionVerdict { holds: false, violation: Some(3.0) });
        let one_pos = GeneratorSpec::from_zeros(vec![1.0, -2.0], vec![-1.0], 2).unwrap();
        assert_eq!(check_condition1(&one_pos), ConditionVerdict { holds: false, violation: None });
    }

    #[test]
    fn condition2_cases() {
        assert_eq!(check_condition2(&example()), ConditionVerdict::ok());
        assert_eq!(check_condition2(&positive_endpoint()), ConditionVerdict::ok());
        assert_eq!(check_condition2(&interlaced()), ConditionVerdict::ok());
        let bad = GeneratorSpec::from_zeros(vec![-1.0, 1.0, 2.0], vec![-3.0], 3).unwrap();
        assert_eq!(check_condition2(&bad), ConditionVerdict { holds: false, violation: Some(-1.0) });
    }

    #[test]
    fn t_a_example() {
        let t_a = find_t_a(&example()).unwrap();
        assert!((t_a - 1.3).abs() <= 0.05, "{t_a}");
        assert!(r_real(&example(), t_a).unwrap().abs() <= 1e-8 * 3.0);
    }

    #[test]
    fn t_a_repeated_tau1() {
        let spec = GeneratorSpec::from_zeros(vec![-1.0, 1.0, 1.0, 4.0], vec![-2.0], 3).unwrap();
        assert_eq!(find_t_a(&spec), Ok(1.0));
    }

    #[test]
    fn t_a_needs_two_positive_zeros() {
        let spec = GeneratorSpec::from_zeros(vec![-1.0, 1.0], vec![-2.0], 3).unwrap();
        assert!(matches!(find_t_a(&spec), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn region_grid_of_one() {
        let grid = GridConfig { radii: 1, angles: 1, ..GridConfig::default() };
        let rep = check_sector(&example(), 2.0, &grid).unwrap();
        assert_eq!(rep.grid_size, 1);
        assert!(rep.holds);
        assert_eq!(sample_region(&example(), Region::Semidisk, 1.3, &grid).len(), 1);
    }

    #[test]
    fn region_detects_negative_weight() {
        // The semidisk of radius 3 reaches past tau_0 = -2 where w < 0.
        let rep =
            check_semidisk(&example(), 3.0, &GridConfig { radii: 64, angles: 64, ..GridConfig::default() }).unwrap();
        assert!(!rep.holds);
        assert!(rep.min_margin < 0.0);
        assert!(rep.argmin[0] < 0.0);
    }

    #[test]
    fn report_on_interlaced_spec_skips_t_a() {
        let rep = hypothesis_report(&interlaced(), &GridConfig { radii: 32, angles: 32, ..GridConfig::default() });
        assert!(!rep.cond1.holds);
        assert_eq!(rep.cond1.violation, Some(2.0));
        assert_eq!(rep.t_a, None);
        assert!(rep.cond4.is_none());
        assert!(!rep.all_hold);
    }

    #[test]
    fn f32_t_a() {
        let spec = example().to_scalar::<f32>();
        let t_a = find_t_a(&spec).unwrap();
        assert!((t_a - 1.29582).abs() < 1e-4);
    }
}
