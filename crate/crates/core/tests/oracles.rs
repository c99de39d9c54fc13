//! Library results against independent computations.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use hypgen_core::hm_seq::classify_roots;
use hypgen_core::rfunc::{endpoint_a, find_t_a, im_r_weight, r_func, r_prime_real, r_real};
use hypgen_core::tau_curve::{angle_of, angle_sum_residual, solve_tau, z_of_theta};
use hypgen_core::{
    generate_hm, poly_roots, residue_sum, trace_curve, BigRational, ClassifyConfig, Complex, Error, ExactSpec, Spec,
};

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

fn example_exact() -> ExactSpec {
    ExactSpec::from_zeros(ints(&[-2, 1, 2, 4]), ints(&[-1, 3, 5]), 3).unwrap()
}

fn example() -> Spec {
    example_exact().to_scalar()
}

fn positive_endpoint() -> Spec {
    Spec::from_zeros(vec![1.0, 2.0, 3.0], vec![-3.0, 4.0], 3).unwrap()
}

/// `[t^m] 1/P(t) = -sum_k 1 / (P'(tau_k) tau_k^{m+1})` for simple zeros.
fn partial_fraction_coeff(zeros: &[f64], m: usize) -> f64 {
    zeros
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let dp: f64 = zeros.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &b)| a - b).product();
            -1.0 / (dp * a.powi(m as i32 + 1))
        })
        .sum()
}

#[test]
fn z_free_terms_match_partial_fractions() {
    let seq = generate_hm(&example_exact(), 25);
    let zeros = [-2.0, 1.0, 2.0, 4.0];
    for m in 0..=25 {
        let got = seq.eval_complex(m, Complex::new(0.0, 0.0)).unwrap().re;
        assert_relative_eq!(got, partial_fraction_coeff(&zeros, m), max_relative = 1e-12);
    }
    // Below r the terms do not depend on z.
    for m in 0..3 {
        assert_eq!(seq.get(m).unwrap().degree(), 0);
    }
}

#[test]
fn angle_matches_conjugate_ratio() {
    for &(re, im, zero) in &[(0.3, 0.2, 1.0), (-2.0, 0.5, 4.0), (5.0, 1e-3, 2.0), (0.1, 3.0, -1.0)] {
        let t = Complex::new(re, im);
        let ratio = (t - zero) / (t.conj() - zero);
        let half = ratio.arg() / 2.0;
        let want = if half < 0.0 { half + PI } else { half };
        assert_relative_eq!(angle_of(zero, t).unwrap(), want, epsilon = 1e-14);
    }
}

#[test]
fn r_prime_matches_finite_difference() {
    let spec = example();
    for x in [0.3, 1.1, 1.5, 1.9, 2.5, -0.5] {
        let h = 1e-6;
        let fd = (r_real(&spec, x + h).unwrap() - r_real(&spec, x - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(r_prime_real(&spec, x).unwrap(), fd, max_relative = 1e-6);
    }
}

#[test]
fn im_r_factorizes() {
    let spec = positive_endpoint();
    for (re, im) in [(0.5, 0.5), (-1.0, 2.0), (3.5, 0.1)] {
        let t = Complex::new(re, im);
        let lhs = r_func(&spec, t).unwrap().im;
        assert_relative_eq!(lhs, im_r_weight(&spec, t).unwrap() * im, max_relative = 1e-12);
    }
}

/// First sign change of `f` on a uniform grid.
fn scan(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut prev = f(lo);
    for i in 1..=n {
        let x = lo + h * i as f64;
        let cur = f(x);
        if prev.signum() != cur.signum() {
            return x - h / 2.0;
        }
        prev = cur;
    }
    panic!("no sign change");
}

#[test]
fn t_a_matches_grid_scan() {
    let spec = example();
    let n = 100_000;
    let scanned = scan(|x| r_real(&spec, x).unwrap(), 1.0 + 1e-9, 2.0 - 1e-9, n);
    let t_a = find_t_a(&spec).unwrap();
    assert!((t_a - scanned).abs() <= 1.0 / n as f64);
    assert!((1.25..=1.35).contains(&t_a));
}

#[test]
fn tau_matches_grid_scan() {
    let spec = example();
    let theta = PI / 6.0;
    let n = 100_000;
    let scanned = scan(|tau| angle_sum_residual(&spec, tau, theta).unwrap(), 1e-9, 2.0 - 1e-9, n);
    let tau = solve_tau(&spec, theta).unwrap();
    assert!((tau - scanned).abs() <= 2.0 / n as f64);
}

#[test]
fn positive_endpoint_quantities() {
    let spec = positive_endpoint();
    let t_a = find_t_a(&spec).unwrap();
    assert_relative_eq!(t_a, 1.239411598622211, epsilon = 1e-9);
    assert!(endpoint_a(&spec, t_a) > 0.0);
    let curve = trace_curve(&spec, 50).unwrap();
    assert_eq!(curve.sign_exponent, 1);
    assert!(curve.samples.windows(2).all(|w| w[1].z > w[0].z));
}

#[test]
fn example_roots_at_m30() {
    let spec = example();
    let a = endpoint_a(&spec, find_t_a(&spec).unwrap());
    let seq = generate_hm(&example_exact(), 30);
    let rep = classify_roots(&seq, 30, &ClassifyConfig::new(Some(a), -1)).unwrap();
    assert!(rep.all_real && rep.sign_ok && rep.interval_ok == Some(true));
    assert_eq!(rep.degree_observed, 10);
}

#[test]
fn roots_follow_the_curve() {
    let spec = example();
    let seq = generate_hm(&example_exact(), 30);
    let rep = classify_roots(&seq, 30, &ClassifyConfig::new(None, -1)).unwrap();
    let top = PI / 3.0;
    for root in &rep.roots {
        let zeta = root.re;
        // z(theta) decreases from a to -inf; bisect z(theta) = zeta.
        let (mut lo, mut hi) = (1e-9, top - 1e-9);
        assert!(z_of_theta(&spec, hi).unwrap().0 < zeta && zeta < z_of_theta(&spec, lo).unwrap().0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if z_of_theta(&spec, mid).unwrap().0 > zeta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = z_of_theta(&spec, 0.5 * (lo + hi)).unwrap().0;
        assert!((z - zeta).abs() <= 1e-3 * zeta.abs().max(1.0), "{zeta} vs {z}");
    }
}

#[test]
fn interlaced_spec_has_non_real_roots() {
    let spec = ExactSpec::from_zeros(ints(&[1, 3, 5]), ints(&[2, 4]), 3).unwrap();
    let seq = generate_hm(&spec, 16);
    let cfg = ClassifyConfig::new(None, -1);
    assert!(!classify_roots(&seq, 16, &cfg).unwrap().all_real);
    let rep15 = classify_roots(&seq, 15, &cfg).unwrap();
    let target = Complex::new(-0.58844, 0.106817);
    assert!(rep15.roots.iter().any(|r| (r - target).norm() < 1e-4));
}

#[test]
fn residue_sum_refuses_double_root_at_a() {
    let spec = example();
    let a = endpoint_a(&spec, find_t_a(&spec).unwrap());
    assert!(matches!(residue_sum(&spec, Complex::new(a, 0.0), 4), Err(Error::MultipleRoot { .. })));
}

#[test]
fn residue_sum_at_complex_z() {
    let spec = example();
    let seq = generate_hm(&example_exact(), 10);
    let z = Complex::new(-0.4, 0.7);
    for m in [1, 5, 10] {
        let want = seq.eval_complex(m, z).unwrap();
        let got = residue_sum(&spec, z, m).unwrap();
        assert!((got - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }
}

#[test]
fn example_p_zeros_from_dense_form() {
    let p = example().p.expand();
    let mut roots: Vec<f64> = poly_roots(&p).unwrap().iter().map(|r| r.re).collect();
    roots.sort_by(f64::total_cmp);
    for (r, want) in roots.iter().zip([-2.0, 1.0, 2.0, 4.0]) {
        assert!((r - want).abs() < 1e-8);
    }
}

#[test]
fn single_precision_pipeline() {
    let spec = example().to_scalar::<f32>();
    let t_a = find_t_a(&spec).unwrap();
    assert!((t_a - 1.2958).abs() < 1e-3);
    let curve = trace_curve(&spec, 20).unwrap();
    assert!(curve.samples.windows(2).all(|w| w[1].z < w[0].z));
}
