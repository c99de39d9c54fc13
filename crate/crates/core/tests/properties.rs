use std::f64::consts::PI;

use hypgen_core::expsign::{admissible_x, check_sign_dominance, exp_poly_sum};
use hypgen_core::poly::make_zero_set;
use hypgen_core::rfunc::{im_r_weight, r_func};
use hypgen_core::roots::{companion_roots, expand_roots};
use hypgen_core::tau_curve::{angle_sum, log_func};
use hypgen_core::{generate_hm, poly_roots, residue_sum, BigRational, Complex, DensePoly, ExactSpec, Spec};
use proptest::prelude::*;

fn nonzero_int() -> impl Strategy<Value = i64> {
    (-10i64..=10).prop_filter("nonzero", |x| *x != 0)
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn example() -> Spec {
    Spec::from_zeros(vec![-2.0, 1.0, 2.0, 4.0], vec![-1.0, 3.0, 5.0], 3).unwrap()
}

fn sorted_re(v: &[Complex<f64>]) -> Vec<f64> {
    let mut out: Vec<f64> = v.iter().map(|c| c.re).collect();
    out.sort_by(f64::total_cmp);
    out
}

proptest! {
    #[test]
    fn product_equals_dense(zeros in prop::collection::vec(nonzero_int(), 1..8), x in -12i64..12) {
        let set = make_zero_set(zeros.into_iter().map(q)).unwrap();
        prop_assert_eq!(set.eval(&q(x)), set.expand().eval(&q(x)));
    }

    #[test]
    fn counts_are_monotone(zeros in prop::collection::vec(nonzero_int(), 1..10)) {
        let set = make_zero_set(zeros.iter().map(|&z| z as f64)).unwrap();
        let mut prev = 0;
        for x in 1..=11 {
            let c = set.count_pos(&(x as f64)).unwrap();
            prop_assert!(c >= prev);
            prev = c;
        }
        prop_assert_eq!(prev, set.pos_count());
        prop_assert!(set.count_pos(&-1.0).is_err());
    }

    #[test]
    fn expand_then_recover(zeros in prop::sample::subsequence((-10i64..=10).filter(|x| *x != 0).collect::<Vec<_>>(), 1..=8)) {
        let set = make_zero_set(zeros.iter().map(|&z| z as f64)).unwrap();
        let p = set.expand();
        let got = sorted_re(&poly_roots(&p).unwrap());
        for (g, want) in got.iter().zip(set.zeros()) {
            prop_assert!((g - want).abs() <= 1e-8, "{} vs {}", g, want);
        }
        let alt = sorted_re(&companion_roots(&p).unwrap());
        for (a, b) in got.iter().zip(&alt) {
            prop_assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn roots_reconstruct_coefficients(coeffs in prop::collection::vec(-1.0f64..1.0, 3..=21)) {
        prop_assume!(coeffs.last().unwrap().abs() > 0.1 && coeffs[0].abs() > 1e-3);
        let p = DensePoly::new(coeffs.clone());
        let roots = poly_roots(&p).unwrap();
        let lead = *coeffs.last().unwrap();
        let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
        let scale = monic.iter().map(|c| c.abs()).fold(1.0, f64::max);
        let rebuilt = expand_roots(&roots);
        for (r, c) in rebuilt.iter().zip(&monic) {
            prop_assert!((r - Complex::new(*c, 0.0)).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn im_r_identity(re in -6.0f64..6.0, im in 0.01f64..4.0) {
        let spec = example();
        let t = Complex::new(re, im);
        let lhs = r_func(&spec, t).unwrap().im;
        let rhs = im_r_weight(&spec, t).unwrap() * im;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn log_func_tracks_angles(re in -6.0f64..6.0, im in 0.01f64..4.0) {
        let spec = example();
        let t = Complex::new(re, im);
        prop_assert!((log_func(&spec, t).im + angle_sum(&spec, t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn residue_identity(re in -3.0f64..3.0, im in -2.0f64..2.0, m in 0usize..=20) {
        let spec = example();
        let z = Complex::new(re, im);
        let seq = generate_hm(&spec, 20);
        match residue_sum(&spec, z, m) {
            Ok(res) => {
                let want = seq.eval_complex(m, z).unwrap();
                prop_assert!((res - want).norm() <= 1e-8 * (1.0 + want.norm()), "{} vs {}", res, want);
            }
            Err(hypgen_core::Error::MultipleRoot { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn degree_bound_on_any_spec(
        p in prop::collection::vec(nonzero_int(), 1..6),
        qz in prop::collection::vec(nonzero_int(), 0..5),
        r in 2usize..5,
    ) {
        let spec = ExactSpec::from_zeros(p.into_iter().map(q).collect(), qz.into_iter().map(q).collect(), r).unwrap();
        let seq = generate_hm(&spec, 24);
        for m in 0..=24 {
            prop_assert!(seq.get(m).unwrap().degree() <= m / r);
        }
    }
}

#[test]
fn exp_sum_is_real_at_admissible_x() {
    for n in 2..=20 {
        for ell in 0..n {
            for b in 1..=20 {
                let s = exp_poly_sum(n, ell, admissible_x(n, ell, b).unwrap());
                assert!(s.im.abs() <= 1e-9 * (1.0 + s.norm()), "n={n} ell={ell} b={b}");
            }
        }
    }
}

#[test]
fn sum_over_first_term_is_positive() {
    for n in 2..=12 {
        for ell in 0..n {
            for b in 1..=10 {
                let c = check_sign_dominance(n, ell, b).unwrap();
                assert!(c.sum_value / c.first_term > 0.0);
            }
        }
    }
}

#[test]
fn float_recurrence_agrees_with_exact() {
    let exact =
        ExactSpec::from_zeros([-2, 1, 2, 4].into_iter().map(q).collect(), [-1, 3, 5].into_iter().map(q).collect(), 3)
            .unwrap();
    let e = generate_hm(&exact, 40);
    let f = generate_hm(&example(), 40);
    let z = Complex::new(-PI / 4.0, 0.0);
    for m in 0..=40 {
        let a = e.eval_complex(m, z).unwrap();
        let b = f.eval_complex(m, z).unwrap();
        assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()), "m={m}");
    }
}
