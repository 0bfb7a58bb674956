use elemhyp::heun::{
    heun_eval, heun_normalization, heun_params_from, heun_resonant_coeff, heun_series_oracle_with,
    heun_termination, HeunFamilyParams,
};
use elemhyp::hypergeom::{hyp2f1_eval, hyp2f1_series, HypergeomParams};
use elemhyp::EvalPolicy;

fn terminating() -> Vec<HeunFamilyParams> {
    let mut out = Vec::new();
    for r in 1..=4i32 {
        for m in 1..=3u32 {
            for p in [m + 1, m + 2] {
                for n in [3 - 2 * r - m as i32, p as i32 + 2 * r - 2] {
                    if n != 0 {
                        out.push(HeunFamilyParams::new(m, n as f64, p).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn terminating_expansions_match_power_series() {
    let p = EvalPolicy::default();
    for fp in terminating() {
        assert!(heun_termination(&fp).is_some());
        let spec = heun_params_from(&fp).unwrap();
        let seed = heun_resonant_coeff(&fp, &p).unwrap();
        assert_eq!(seed.is_some(), spec.gamma() <= 0.0, "{fp:?}");
        let u0 = heun_normalization(&fp, &p).unwrap();
        for x in [0.05, 0.15, 0.25, 0.35, 0.45] {
            let v = heun_eval(&fp, x, 40, &p).unwrap().value / u0;
            let o = heun_series_oracle_with(&spec, x, 600, seed).unwrap();
            assert!((v - o).abs() <= 1e-8 * o.abs(), "{fp:?} x={x}: {v} vs {o}");
        }
    }
}

#[test]
fn leaves_pass_hypergeometric_oracle() {
    let p = EvalPolicy::default()
        .with_rel_tol(1e-15)
        .with_max_terms(1_000_000);
    for (m, n, base) in [(1u32, 2.0, 3u32), (2, 0.5, 4), (3, -1.5, 5)] {
        for k in 0..20 {
            let params = HypergeomParams::new(m, n, base + 2 * k).unwrap();
            for x in [0.1, 0.3, 0.5, 0.7, 0.9] {
                let v = hyp2f1_eval(&params, x, &p).unwrap();
                let s = hyp2f1_series(m as f64, n, params.p() as f64, x, &p)
                    .unwrap()
                    .value;
                assert!(
                    (v - s).abs() <= 1e-8 * s.abs(),
                    "m={m} n={n} p={} x={x}",
                    params.p()
                );
            }
        }
    }
}

#[test]
fn polynomial_cases_terminate() {
    let p = EvalPolicy::default();
    for m in 1..=4u32 {
        for n in [-1.0, -2.0, -3.0] {
            for pp in m + 1..=8 {
                let params = HypergeomParams::new(m, n, pp).unwrap();
                for x in [0.1, 0.5, 0.9] {
                    // finite sum of the defining series
                    let mut term = 1.0;
                    let mut poly = 1.0;
                    for j in 0..(-n as u32) {
                        let j = j as f64;
                        term *= (m as f64 + j) * (n + j) / ((pp as f64 + j) * (j + 1.0)) * x;
                        poly += term;
                    }
                    let s = hyp2f1_series(m as f64, n, pp as f64, x, &p).unwrap();
                    assert!(s.converged);
                    assert!((s.value - poly).abs() <= 1e-14 * poly.abs().max(1.0));
                    let v = hyp2f1_eval(&params, x, &p).unwrap();
                    assert!(
                        (v - poly).abs() <= 1e-10 * poly.abs().max(1.0),
                        "m={m} n={n} p={pp} x={x}"
                    );
                }
            }
        }
    }
}
