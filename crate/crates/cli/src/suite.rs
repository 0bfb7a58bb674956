//! Verification grids. Every entry pits a closed formula (or an expansion)
//! against an independent oracle: a defining series, a direct operator sum,
//! an alternative representation, or an exact count.

use std::cmp::Ordering;

use rayon::prelude::*;

use elemhyp::basis::{combo_eval, expected_basis_set, fnj_combo, fnj_order3_closed, fnj_series};
use elemhyp::heun::{
    heun_eval, heun_normalization, heun_ode_residual, heun_params_from, heun_resonant_coeff,
    heun_series_oracle_with, heun_termination, HeunFamilyParams,
};
use elemhyp::hypergeom::{
    hyp2f1_closed_12, hyp2f1_closed_1m, hyp2f1_closed_general, hyp2f1_closed_m1, hyp2f1_series,
    Form12, Form1m, HypergeomParams,
};
use elemhyp::mkz::{
    gmkz_apply, gmkz_e1, gmkz_moment_abel, ln_direct_moment, ln_moment_e2, mkz_moment,
    mkz_moment_e2, GmkzParams, Monomial,
};
use elemhyp::{EvalPolicy, Result};

use crate::report::Entry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hypergeom,
    Mkz,
    Basis,
    Heun,
    All,
}

impl Suite {
    /// Acceptance criteria covered by the suite.
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Hypergeom => &[1, 2],
            Suite::Mkz => &[3, 5, 6],
            Suite::Basis => &[4],
            Suite::Heun => &[7],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7],
        }
    }
}

type Case = Box<dyn Fn(&EvalPolicy) -> Vec<Entry> + Send + Sync>;

/// Oracle sums run at this tolerance regardless of the evaluation policy.
fn oracle_policy(eval: &EvalPolicy) -> EvalPolicy {
    EvalPolicy {
        rel_tol: 1e-15,
        max_terms: eval.max_terms.max(1_000_000),
        ..*eval
    }
}

fn grid(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|i| i as f64 / 10.0).collect()
}

fn check(
    op: &str,
    inputs: &[(&str, f64)],
    tol: f64,
    result: Result<f64>,
    oracle: Result<f64>,
) -> Entry {
    match (result, oracle) {
        (Ok(r), Ok(o)) => Entry::compare(op, inputs, r, o, tol),
        _ => Entry::failed(op, inputs, tol),
    }
}

fn run(cases: Vec<Case>, eval: &EvalPolicy) -> Vec<Entry> {
    let chunks: Vec<Vec<Entry>> = cases.par_iter().map(|c| c(eval)).collect();
    let mut entries: Vec<Entry> = chunks.into_iter().flatten().collect();
    // stable, so entries with equal keys keep grid order
    entries.sort_by(|a, b| {
        a.operation
            .cmp(&b.operation)
            .then_with(|| input_order(a, b))
    });
    entries
}

fn input_order(a: &Entry, b: &Entry) -> Ordering {
    let key = |e: &Entry| {
        e.inputs
            .iter()
            .map(|(k, v)| (k.clone(), *v))
            .collect::<Vec<_>>()
    };
    let (ka, kb) = (key(a), key(b));
    for ((na, va), (nb, vb)) in ka.iter().zip(&kb) {
        let o = na.cmp(nb).then_with(|| va.total_cmp(vb));
        if o != Ordering::Equal {
            return o;
        }
    }
    ka.len().cmp(&kb.len())
}

pub fn run_suite(suite: Suite, eval: &EvalPolicy) -> Vec<Entry> {
    suite
        .criteria()
        .iter()
        .flat_map(|&c| run_criterion(c, eval))
        .collect()
}

/// Entries for acceptance criterion `c` (1..=7).
pub fn run_criterion(c: u8, eval: &EvalPolicy) -> Vec<Entry> {
    let cases = match c {
        1 => hypergeom_oracle(),
        2 => representations(),
        3 => second_moments(),
        4 => basis_structure(),
        5 => higher_moments(),
        6 => other_operators(),
        7 => heun(),
        _ => Vec::new(),
    };
    run(cases, eval)
}

const N_GRID: [f64; 6] = [-2.5, -1.0, 0.5, 1.0, 2.0, 3.75];

fn hypergeom_oracle() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    for m in 1..=4u32 {
        for p in m + 1..=8 {
            for n in N_GRID {
                cases.push(Box::new(move |eval| {
                    let series = EvalPolicy {
                        rel_tol: 1e-13,
                        ..oracle_policy(eval)
                    };
                    grid(1, 9)
                        .into_iter()
                        .map(|x| {
                            let closed = HypergeomParams::new(m, n, p)
                                .and_then(|hp| hyp2f1_closed_general(&hp, x));
                            let oracle =
                                hyp2f1_series(m as f64, n, p as f64, x, &series).map(|s| s.value);
                            let inputs = [("m", m as f64), ("n", n), ("p", p as f64), ("x", x)];
                            check(
                                "hyp2f1_closed_general_vs_series",
                                &inputs,
                                1e-8,
                                closed,
                                oracle,
                            )
                        })
                        .collect()
                }));
            }
        }
    }
    cases
}

fn representations() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    const TOL: f64 = 1e-10;
    for m in 1..=6u32 {
        for l in 0..=6u32 {
            cases.push(Box::new(move |_| {
                grid(1, 9)
                    .into_iter()
                    .map(|x| {
                        let a = hyp2f1_closed_1m(m, l, x, Form1m::A);
                        let b = hyp2f1_closed_1m(m, l, x, Form1m::B);
                        check(
                            "closed_1m_a_vs_b",
                            &[("m", m as f64), ("l", l as f64), ("x", x)],
                            TOL,
                            a,
                            b,
                        )
                    })
                    .collect()
            }));
        }
    }
    for n in 1..=12u32 {
        cases.push(Box::new(move |_| {
            let mut out = Vec::new();
            for x in grid(1, 9) {
                let v = |f| hyp2f1_closed_12(n, x, f);
                let inputs = [("n", n as f64), ("x", x)];
                out.push(check(
                    "closed_12_v1_vs_v2",
                    &inputs,
                    TOL,
                    v(Form12::V1),
                    v(Form12::V2),
                ));
                out.push(check(
                    "closed_12_v1_vs_v3",
                    &inputs,
                    TOL,
                    v(Form12::V1),
                    v(Form12::V3),
                ));
                out.push(check(
                    "closed_12_v2_vs_v3",
                    &inputs,
                    TOL,
                    v(Form12::V2),
                    v(Form12::V3),
                ));
                // (1,m) family at m = 2, l = n-1 is the (1,2) family
                let via_1m = hyp2f1_closed_1m(2, n - 1, x, Form1m::A);
                out.push(check(
                    "closed_1m_vs_closed_12",
                    &inputs,
                    TOL,
                    via_1m,
                    v(Form12::V1),
                ));
            }
            out
        }));
    }
    for p in 2..=8u32 {
        for n in N_GRID {
            cases.push(Box::new(move |_| {
                grid(1, 9)
                    .into_iter()
                    .map(|x| {
                        let general = HypergeomParams::new(1, n, p)
                            .and_then(|hp| hyp2f1_closed_general(&hp, x));
                        let m1 = hyp2f1_closed_m1(n, p, x);
                        check(
                            "closed_general_vs_m1",
                            &[("n", n), ("p", p as f64), ("x", x)],
                            TOL,
                            general,
                            m1,
                        )
                    })
                    .collect()
            }));
        }
    }
    cases
}

fn direct(params: Result<GmkzParams>, r: u32, x: f64, eval: &EvalPolicy) -> Result<f64> {
    let params = params?;
    Ok(gmkz_apply(&params, |t| Monomial(r).eval(t), x, &oracle_policy(eval))?.value)
}

fn second_moments() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    for n in 1..=10u32 {
        cases.push(Box::new(move |eval| {
            let mut out = Vec::new();
            for x in grid(1, 9) {
                let inputs = [("n", n as f64), ("x", x)];
                let classical = || GmkzParams::classical(n);
                let sum2 = direct(classical(), 2, x, eval);
                let eq11 = mkz_moment_e2(n, x, eval);
                let eq51 = mkz_moment(n, 2, x, eval);
                let copy = |r: &Result<f64>| r.clone();
                out.push(check(
                    "mkz_e2_alkemade_vs_direct",
                    &inputs,
                    1e-8,
                    copy(&eq11),
                    copy(&sum2),
                ));
                out.push(check(
                    "mkz_e2_kernel_vs_direct",
                    &inputs,
                    1e-8,
                    copy(&eq51),
                    copy(&sum2),
                ));
                out.push(check(
                    "mkz_e2_alkemade_vs_kernel",
                    &inputs,
                    1e-8,
                    eq11,
                    eq51,
                ));
                out.push(check(
                    "mkz_e0_direct",
                    &inputs,
                    1e-10,
                    direct(classical(), 0, x, eval),
                    Ok(1.0),
                ));
                out.push(check(
                    "mkz_e1_direct",
                    &inputs,
                    1e-10,
                    direct(classical(), 1, x, eval),
                    Ok(x),
                ));
                out.push(check(
                    "mkz_e1_kernel",
                    &inputs,
                    1e-10,
                    mkz_moment(n, 1, x, eval),
                    Ok(x),
                ));
            }
            out
        }));
    }
    cases
}

fn higher_moments() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    for r in 3..=5u32 {
        for n in 2..=8u32 {
            cases.push(Box::new(move |eval| {
                grid(1, 8)
                    .into_iter()
                    .map(|x| {
                        let inputs = [("n", n as f64), ("r", r as f64), ("x", x)];
                        let sum = direct(GmkzParams::classical(n), r, x, eval);
                        check(
                            "mkz_er_kernel_vs_direct",
                            &inputs,
                            1e-7,
                            mkz_moment(n, r, x, eval),
                            sum,
                        )
                    })
                    .collect()
            }));
        }
    }
    cases
}

fn other_operators() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    for n in 1..=8u32 {
        cases.push(Box::new(move |eval| {
            grid(1, 9)
                .into_iter()
                .map(|x| {
                    let oracle = ln_direct_moment(n, 2, x, &oracle_policy(eval)).map(|s| s.value);
                    check(
                        "ln_e2_vs_beta_series",
                        &[("n", n as f64), ("x", x)],
                        1e-8,
                        ln_moment_e2(n, x, eval),
                        oracle,
                    )
                })
                .collect()
        }));
    }
    for alpha in 0..=4u32 {
        for n in [1u32, 2, 5] {
            let a = alpha as f64;
            for beta in [0.0, a / 2.0, a] {
                cases.push(Box::new(move |eval| {
                    let r = alpha as i32 + 1;
                    grid(0, 9)
                        .into_iter()
                        .map(|x| {
                            let inputs = [("n", n as f64), ("alpha", a), ("beta", beta), ("x", x)];
                            let v =
                                GmkzParams::new(n, r, a, beta).and_then(|g| gmkz_e1(&g, x, eval));
                            let s = beta / (n as f64 + a);
                            check("gmkz_e1_affine", &inputs, 1e-10, v, Ok(s + (1.0 - s) * x))
                        })
                        .collect()
                }));
            }
        }
    }
    for m in 0..=4u32 {
        for n in [1u32, 2, 4] {
            for alpha in [0u32, 1, 3] {
                let a = alpha as f64;
                for beta in [0.0, a / 2.0, a] {
                    cases.push(Box::new(move |eval| {
                        grid(1, 9)
                            .into_iter()
                            .map(|x| {
                                let inputs = [
                                    ("m", m as f64),
                                    ("n", n as f64),
                                    ("alpha", a),
                                    ("beta", beta),
                                    ("x", x),
                                ];
                                let abel = gmkz_moment_abel(n, alpha, beta, m, x, eval);
                                let sum = direct(
                                    GmkzParams::new(n, alpha as i32 + 1, a, beta),
                                    m,
                                    x,
                                    eval,
                                );
                                check("gmkz_abel_vs_direct", &inputs, 1e-8, abel, sum)
                            })
                            .collect()
                    }));
                }
            }
        }
    }
    cases
}

fn basis_structure() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    for n in 2..=8u32 {
        for j in 2..=12u32 {
            cases.push(Box::new(move |eval| {
                let mut out = Vec::new();
                let inputs = [("n", n as f64), ("j", j as f64)];
                let combo = match fnj_combo(n, j) {
                    Ok(c) => c,
                    Err(_) => return vec![Entry::failed("combo_term_count", &inputs, 0.0)],
                };
                out.push(Entry::compare(
                    "combo_term_count",
                    &inputs,
                    combo.len() as f64,
                    n as f64,
                    0.0,
                ));
                let same = (combo.basis_set() == expected_basis_set(n, j)) as u8 as f64;
                out.push(Entry::compare("combo_basis_set", &inputs, same, 1.0, 0.0));
                for x in grid(1, 9) {
                    let inputs = [("n", n as f64), ("j", j as f64), ("x", x)];
                    let series = fnj_series(n, j, x, &oracle_policy(eval)).map(|s| s.value);
                    out.push(check(
                        "combo_vs_series",
                        &inputs,
                        1e-8,
                        combo_eval(&combo, x, eval),
                        series,
                    ));
                }
                out
            }));
        }
    }
    for n in 2..=8u32 {
        cases.push(Box::new(move |eval| {
            grid(1, 9)
                .into_iter()
                .map(|x| {
                    let combo = fnj_combo(n, 3).and_then(|c| combo_eval(&c, x, eval));
                    check(
                        "combo_vs_order3_closed",
                        &[("n", n as f64), ("x", x)],
                        1e-9,
                        combo,
                        fnj_order3_closed(n, x),
                    )
                })
                .collect()
        }));
    }
    cases
}

/// Family members whose expansion terminates after `r <= 4` terms.
pub fn heun_terminating_grid() -> Vec<(u32, f64, u32)> {
    let mut out = Vec::new();
    for r in 1..=4i32 {
        for m in 1..=3u32 {
            for p in [m + 1, m + 2] {
                let n = (3 - 2 * r - m as i32) as f64;
                if n != 0.0 {
                    out.push((m, n, p));
                }
                out.push((m, (p as i32 + 2 * r - 2) as f64, p));
            }
        }
    }
    out
}

pub const HEUN_NON_TERMINATING: [(u32, f64, u32); 4] =
    [(1, 2.0, 3), (2, 0.5, 4), (1, 0.5, 3), (3, 1.5, 5)];

const ORACLE_TERMS: usize = 600;
const HEUN_X: [f64; 5] = [0.05, 0.15, 0.25, 0.35, 0.45];

/// Normalized expansion against the power series at 0. When `γ` is a
/// nonpositive integer the free coefficient is taken from the expansion's
/// own Taylor coefficient.
pub fn heun_oracle_pair(
    fp: &HeunFamilyParams,
    x: f64,
    eval: &EvalPolicy,
) -> (Result<f64>, Result<f64>) {
    let u0 = heun_normalization(fp, eval);
    let value = u0
        .clone()
        .and_then(|u0| Ok(heun_eval(fp, x, 40, eval)?.value / u0));
    let oracle = heun_params_from(fp).and_then(|spec| {
        let resonant = heun_resonant_coeff(fp, eval)?;
        heun_series_oracle_with(&spec, x, ORACLE_TERMS, resonant)
    });
    (value, oracle)
}

fn heun() -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();
    let terminating = heun_terminating_grid();
    let all: Vec<(u32, f64, u32)> = terminating
        .iter()
        .copied()
        .chain(HEUN_NON_TERMINATING)
        .collect();
    for (m, n, p) in all.clone() {
        cases.push(Box::new(move |_| {
            let inputs = [("m", m as f64), ("n", n), ("p", p as f64)];
            let Ok(spec) = HeunFamilyParams::new(m, n, p).and_then(|fp| heun_params_from(&fp))
            else {
                return vec![Entry::failed("heun_parameters", &inputs, 0.0)];
            };
            let (al, be, ga, de, ep, a, q) = (
                spec.alpha(),
                spec.beta(),
                spec.gamma(),
                spec.delta(),
                spec.epsilon(),
                spec.a(),
                spec.q(),
            );
            vec![
                Entry::compare(
                    "heun_fuchs_condition",
                    &inputs,
                    al + be + 1.0,
                    ga + de + ep,
                    0.0,
                ),
                Entry::compare("heun_gamma_plus_epsilon", &inputs, ga + ep, p as f64, 0.0),
                Entry::compare("heun_gamma_plus_delta", &inputs, ga + de, 2.0, 0.0),
                Entry::compare(
                    "heun_accessory",
                    &inputs,
                    q,
                    a * al * be + a * (1.0 - de) * ep,
                    0.0,
                ),
            ]
        }));
    }
    for (m, n, p) in terminating {
        cases.push(Box::new(move |eval| {
            let mut out = Vec::new();
            let inputs = [("m", m as f64), ("n", n), ("p", p as f64)];
            let Ok(fp) = HeunFamilyParams::new(m, n, p) else {
                return vec![Entry::failed("heun_k_independence", &inputs, 1e-14)];
            };
            let r = heun_termination(&fp).unwrap_or(0) as usize;
            let at = |k: usize| heun_eval(&fp, 0.3, k.max(1), eval).map(|s| s.value);
            out.push(check(
                "heun_k_independence",
                &inputs,
                1e-14,
                at(r),
                at(r + 20),
            ));
            out.push(check("heun_k_independence", &inputs, 1e-14, at(r), at(40)));
            for x in HEUN_X {
                let inputs = [("m", m as f64), ("n", n), ("p", p as f64), ("x", x)];
                let (v, o) = heun_oracle_pair(&fp, x, eval);
                out.push(check(
                    "heun_terminating_vs_power_series",
                    &inputs,
                    1e-8,
                    v,
                    o,
                ));
            }
            out
        }));
    }
    for (m, n, p) in HEUN_NON_TERMINATING {
        cases.push(Box::new(move |eval| {
            let Ok(fp) = HeunFamilyParams::new(m, n, p) else {
                return vec![Entry::failed(
                    "heun_series_vs_power_series",
                    &[("m", m as f64), ("n", n), ("p", p as f64)],
                    1e-6,
                )];
            };
            HEUN_X
                .into_iter()
                .map(|x| {
                    let inputs = [("m", m as f64), ("n", n), ("p", p as f64), ("x", x)];
                    let (v, o) = heun_oracle_pair(&fp, x, eval);
                    check("heun_series_vs_power_series", &inputs, 1e-6, v, o)
                })
                .collect()
        }));
    }
    for (m, n, p) in all {
        cases.push(Box::new(move |eval| {
            [0.1, 0.2, 0.3, 0.4]
                .into_iter()
                .map(|x| {
                    let inputs = [("m", m as f64), ("n", n), ("p", p as f64), ("x", x)];
                    let res = HeunFamilyParams::new(m, n, p)
                        .and_then(|fp| heun_ode_residual(&fp, x, 1e-4, 40, eval))
                        .map(|r| r.relative);
                    check("heun_ode_relative_residual", &inputs, 1e-3, res, Ok(0.0))
                })
                .collect()
        }));
    }
    cases
}
