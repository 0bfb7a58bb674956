use approx::assert_relative_eq;
use proptest::prelude::*;

use elemhyp::basis::{combo_eval, fnj_combo, fnj_series};
use elemhyp::heun::{heun_coeff, heun_eval, heun_params_from, heun_termination, HeunFamilyParams};
use elemhyp::hypergeom::{hyp2f1_closed_general, hyp2f1_closed_m1, hyp2f1_series, HypergeomParams};
use elemhyp::mkz::{gmkz_apply, gmkz_e1, gmkz_moment_abel, mkz_moment, GmkzParams, Monomial};
use elemhyp::numcore::{pochhammer, sum_series, NeumaierSum};
use elemhyp::polylog::{polylog, PolylogOrder};
use elemhyp::EvalPolicy;

fn tight() -> EvalPolicy {
    EvalPolicy::default()
        .with_rel_tol(1e-15)
        .with_max_terms(1_000_000)
}

/// `n+r >= 1` and `alpha >= beta >= 0`.
fn gmkz_params() -> impl Strategy<Value = GmkzParams> {
    (1u32..=10, -3i32..=4, 0.0f64..4.0, 0.0f64..1.0)
        .prop_filter_map("n+r >= 1", |(n, r, alpha, frac)| {
            GmkzParams::new(n, r, alpha, alpha * frac).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_step(r in -5.0f64..5.0, m in 0u32..20) {
        let lhs = pochhammer(r, m + 1);
        let rhs = pochhammer(r, m) * (r + m as f64);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
    }

    #[test]
    fn finite_support_sums_exactly(values in prop::collection::vec(-1e3f64..1e3, 1..20)) {
        let len = values.len();
        let r = sum_series(|k| if k < len { values[k] } else { 0.0 }, &EvalPolicy::default()).unwrap();
        let mut exact = NeumaierSum::default();
        for v in &values {
            exact.add(*v);
        }
        prop_assert_eq!(r.value, exact.value());
        prop_assert!(r.converged && r.terms_used <= EvalPolicy::default().max_terms);
    }

    #[test]
    fn closed_general_matches_series(m in 1u32..=4, dp in 1u32..=4, n in -2.5f64..3.75, x in 0.1f64..0.9) {
        let p = m + dp;
        let params = HypergeomParams::new(m, n, p).unwrap();
        let closed = hyp2f1_closed_general(&params, x).unwrap();
        let series = hyp2f1_series(m as f64, n, p as f64, x, &tight()).unwrap().value;
        prop_assert!((closed - series).abs() <= 1e-8 * series.abs(), "{closed} vs {series}");
        if m == 1 {
            let m1 = hyp2f1_closed_m1(n, p, x).unwrap();
            prop_assert!((closed - m1).abs() <= 1e-11 * m1.abs());
        }
    }

    #[test]
    fn polylog_increasing(k in 1u32..=6, x in 0.01f64..0.98, dx in 1e-4f64..0.01) {
        let k = PolylogOrder::new(k).unwrap();
        let p = EvalPolicy::default();
        prop_assert!(polylog(k, x, &p).unwrap() < polylog(k, x + dx, &p).unwrap());
    }

    #[test]
    fn combo_matches_series(n in 2u32..=8, j in 2u32..=12, x in 0.1f64..0.9) {
        let combo = combo_eval(&fnj_combo(n, j).unwrap(), x, &tight()).unwrap();
        let series = fnj_series(n, j, x, &tight()).unwrap().value;
        prop_assert!((combo - series).abs() <= 1e-8 * series.abs(), "{combo} vs {series}");
    }

    #[test]
    fn combo_has_n_terms(n in 2u32..=8, j in 2u32..=12) {
        prop_assert_eq!(fnj_combo(n, j).unwrap().len(), n as usize);
    }

    #[test]
    fn partition_of_unity(params in gmkz_params(), x in 0.0f64..0.9) {
        let v = gmkz_apply(&params, |_| 1.0, x, &tight()).unwrap().value;
        prop_assert!((v - 1.0).abs() <= 1e-10, "{v}");
    }

    #[test]
    fn moments_are_ordered(n in 1u32..=10, r in 0u32..5, x in 0.0f64..0.9) {
        let p = tight();
        let lo = mkz_moment(n, r + 1, x, &p).unwrap();
        let hi = mkz_moment(n, r, x, &p).unwrap();
        prop_assert!(lo >= -1e-12 && lo <= hi + 1e-12 && hi <= 1.0 + 1e-12, "{lo} {hi}");
    }

    #[test]
    fn second_moment_correction_decreases(n in 1u32..=20, x in 0.05f64..=0.9) {
        let p = tight();
        let c = |n| mkz_moment(n, 2, x, &p).unwrap() - x * x;
        let (a, b) = (c(n), c(n + 1));
        prop_assert!(a > 0.0 && b > 0.0 && b < a, "{a} {b}");
    }

    #[test]
    fn affine_first_moment(n in 1u32..=10, alpha in 0u32..=4, frac in 0.0f64..=1.0, x in 0.0f64..0.95) {
        let alpha = alpha as f64;
        let beta = alpha * frac;
        let params = GmkzParams::new(n, alpha as i32 + 1, alpha, beta).unwrap();
        let v = gmkz_e1(&params, x, &tight()).unwrap();
        let s = beta / (n as f64 + alpha);
        prop_assert!((v - (s + (1.0 - s) * x)).abs() <= 1e-10);
    }

    #[test]
    fn abel_matches_direct(n in 1u32..=8, alpha in 0u32..=3, frac in 0.0f64..=1.0, m in 0u32..=4, x in 0.1f64..0.8) {
        let beta = alpha as f64 * frac;
        let p = tight();
        let abel = gmkz_moment_abel(n, alpha, beta, m, x, &p).unwrap();
        let params = GmkzParams::new(n, alpha as i32 + 1, alpha as f64, beta).unwrap();
        let direct = gmkz_apply(&params, |t| Monomial(m).eval(t), x, &p).unwrap().value;
        prop_assert!((abel - direct).abs() <= 1e-8 * direct.abs(), "{abel} vs {direct}");
    }

    #[test]
    fn heun_parameter_identities(m in 1u32..=4, twice_n in -9i32..=13, dp in 1u32..=4) {
        prop_assume!(twice_n != 0);
        let p = m + dp;
        let fp = HeunFamilyParams::new(m, twice_n as f64 / 2.0, p).unwrap();
        let s = heun_params_from(&fp).unwrap();
        prop_assert_eq!(s.alpha() + s.beta() + 1.0, s.gamma() + s.delta() + s.epsilon());
        prop_assert_eq!(s.gamma() + s.epsilon(), p as f64);
        prop_assert_eq!(s.gamma() + s.delta(), 2.0);
        prop_assert_eq!(s.q(), s.a() * s.alpha() * s.beta() + s.a() * (1.0 - s.delta()) * s.epsilon());
    }
}

#[test]
fn terminating_coefficients_vanish() {
    for r in 1..=4i32 {
        for m in 1..=3u32 {
            for p in [m + 1, m + 2] {
                for n in [3 - 2 * r - m as i32, p as i32 + 2 * r - 2] {
                    if n == 0 {
                        continue;
                    }
                    let fp = HeunFamilyParams::new(m, n as f64, p).unwrap();
                    let stop = heun_termination(&fp).unwrap() as usize;
                    assert!(stop <= r as usize);
                    for k in stop..stop + 6 {
                        assert_eq!(heun_coeff(&fp, k), 0.0, "{m} {n} {p} k={k}");
                    }
                    let pol = EvalPolicy::default();
                    for x in [0.1, 0.3, 0.6] {
                        let base = heun_eval(&fp, x, stop, &pol).unwrap().value;
                        for k in [stop + 1, 40, 200] {
                            let v = heun_eval(&fp, x, k, &pol).unwrap().value;
                            assert_relative_eq!(v, base, max_relative = 1e-14);
                        }
                    }
                }
            }
        }
    }
}
