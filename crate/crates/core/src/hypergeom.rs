//! Gauss hypergeometric function `₂F₁(m,n;p;x)` with positive integers
//! `m`, `p >= m+1` and real `n`.
//!
//! [`hyp2f1_series`] sums the defining series and is the oracle for every
//! closed form. The closed forms are finite sums of powers, binomials and
//! `log(1-x)`:
//!
//! - [`hyp2f1_closed_general`]: triple sum over power integrals `∫_{1-x}^1 s^{i+k-n} ds`
//! - [`hyp2f1_closed_m1`]: the `m = 1` specialization
//! - [`hyp2f1_closed_1m`]: `₂F₁(1,m;m+l+1;x)` in a difference form and a Taylor-remainder form
//! - [`hyp2f1_closed_12`]: three forms of `₂F₁(1,2;n+2;x)`
//!
//! All closed forms carry a prefactor `x^{1-p}` multiplying a sum that vanishes
//! to order `p-1` at the origin, so they are evaluated in double-double and
//! [`hyp2f1_eval`] routes small arguments to the series.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::numcore::{
    binomial_dd, factorial_dd, pochhammer_dd, power_integral_dd, sum_series, Dd, EvalPolicy,
    SeriesResult,
};

/// Parameters `(m, n, p)` of `₂F₁(m,n;p;·)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeomParams {
    m: u32,
    n: f64,
    p: u32,
}

impl HypergeomParams {
    pub fn new(m: u32, n: f64, p: u32) -> Result<Self> {
        if m < 1 {
            return Err(invalid(format!("m must be a positive integer, got {m}")));
        }
        if p < m + 1 {
            return Err(invalid(format!(
                "p must satisfy p >= m+1, got m={m}, p={p}"
            )));
        }
        if !n.is_finite() {
            return Err(invalid(format!("n must be finite, got {n}")));
        }
        Ok(HypergeomParams { m, n, p })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

/// Form used for `₂F₁(1,m;m+l+1;x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form1m {
    /// Sum of differences `((1-x)^{m+l-1-i} - (1-x)^l)/(i-m+1)`.
    A,
    /// Taylor-remainder form with the polynomial `Q_l`.
    B,
}

/// Form used for `₂F₁(1,2;n+2;x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form12 {
    /// Continuation of the repeated-derivative representation.
    V1,
    /// Binomial-difference form.
    V2,
    /// Taylor-remainder form.
    V3,
}

/// Evaluation route chosen by [`hyp2f1_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Closed12,
    Closed1m,
    ClosedM1,
    ClosedGeneral,
}

/// Digits the double-double closed forms may lose before the dispatcher
/// prefers the series.
const LOSS_BUDGET_DIGITS: f64 = 18.0;

fn check_open_unit(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{what} requires 0 < x < 1, got {x}")))
    }
}

fn is_nonpositive_integer(c: f64) -> bool {
    c <= 0.0 && c.fract() == 0.0
}

/// Sums `Σ (a)_j (b)_j / ((c)_j j!) x^j` term by term.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64, policy: &EvalPolicy) -> Result<SeriesResult> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(domain(format!("series requires |x| < 1, got {x}")));
    }
    if is_nonpositive_integer(c) {
        return Err(domain(format!(
            "c must not be zero or a negative integer, got {c}"
        )));
    }
    let mut t = 1.0;
    sum_series(
        |k| {
            if k > 0 {
                let j = (k - 1) as f64;
                t *= (a + j) * (b + j) * x / ((c + j) * (j + 1.0));
            }
            t
        },
        policy,
    )?
    .require_converged()
}

fn log1m(x: f64) -> Dd {
    (Dd::ONE - x).ln()
}

fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn closed_general_dd(params: &HypergeomParams, x: f64) -> Dd {
    let (m, p) = (params.m, params.p);
    let n = Dd::from(params.n);
    let big_l = log1m(x);
    let xd = Dd::from(x);
    let deg = p - m - 1;
    // the innermost integrals depend on i + k only
    let integrals: Vec<Dd> = (0..=deg + m - 1)
        .map(|s| power_integral_dd(Dd::from(s) - n, big_l))
        .collect();
    let mut total = Dd::ZERO;
    for k in 0..m {
        let mut over_j = Dd::ZERO;
        for j in 0..=deg {
            let mut over_i = Dd::ZERO;
            for i in 0..=j {
                over_i += binomial_dd(j, i) * sign(i) * integrals[(i + k) as usize];
            }
            over_j += binomial_dd(deg, j) * sign(j) * xd.powi((deg - j) as i32) * over_i;
        }
        total += binomial_dd(m - 1, k) * sign(k) * over_j;
    }
    // (m)_{p-m} / (p-m-1)! = (p-1) C(p-2, m-1)
    let prefactor = binomial_dd(p - 2, m - 1) * ((p - 1) as f64);
    prefactor * total / xd.powi((p - 1) as i32)
}

/// The general closed form of `₂F₁(m,n;p;x)` as a triple sum of power integrals.
pub fn hyp2f1_closed_general(params: &HypergeomParams, x: f64) -> Result<f64> {
    check_open_unit(x, "closed form")?;
    Ok(closed_general_dd(params, x).to_f64())
}

pub(crate) fn closed_m1_dd(n: f64, p: u32, x: f64) -> Dd {
    let n = Dd::from(n);
    let big_l = log1m(x);
    let xm1 = Dd::from(x) - 1.0;
    let mut total = Dd::ZERO;
    for i in 0..=p - 2 {
        total += binomial_dd(p - 2, i)
            * xm1.powi((p - 2 - i) as i32)
            * power_integral_dd(Dd::from(i) - n, big_l);
    }
    total * ((p - 1) as f64) / Dd::from(x).powi((p - 1) as i32)
}

/// `₂F₁(1,n;p;x)` for `p >= 2`.
pub fn hyp2f1_closed_m1(n: f64, p: u32, x: f64) -> Result<f64> {
    if p < 2 {
        return Err(invalid(format!("p must be at least 2, got {p}")));
    }
    if !n.is_finite() {
        return Err(invalid(format!("n must be finite, got {n}")));
    }
    check_open_unit(x, "closed form")?;
    Ok(closed_m1_dd(n, p, x).to_f64())
}

pub(crate) fn closed_1m_dd(m: u32, l: u32, x: f64, form: Form1m) -> Dd {
    let xd = Dd::from(x);
    let y = Dd::ONE - x;
    let big_l = y.ln();
    let x_pow = xd.powi((m + l) as i32);
    let poch = pochhammer_dd(Dd::from(m), l + 1);
    let log_part = poch * sign(l + 1) / factorial_dd(l) * y.powi(l as i32) * big_l / x_pow;
    match form {
        Form1m::A => {
            let top = m + l - 1;
            let y_l = y.powi(l as i32);
            let mut total = Dd::ZERO;
            for i in 0..=top {
                if i == m - 1 {
                    continue;
                }
                let denom = i as i64 - m as i64 + 1;
                total += binomial_dd(top, i) * sign(top - i) / Dd::from(denom)
                    * (y.powi((top - i) as i32) - y_l);
            }
            log_part + total * ((m + l) as f64) / x_pow
        }
        Form1m::B => {
            let mut q = Dd::ZERO;
            for j in 1..=l {
                let mut inner = Dd::ZERO;
                for i in 0..j {
                    inner += binomial_dd(l, i) * sign(i) / ((j - i) as f64);
                }
                q += xd.powi(j as i32) * inner;
            }
            let mut braces = q * sign(l + 1) / factorial_dd(l);
            for i in 0..m.saturating_sub(1) {
                braces -= xd.powi((l + i + 1) as i32) / pochhammer_dd(Dd::from(i + 1), l + 1);
            }
            log_part + poch * braces / x_pow
        }
    }
}

/// `₂F₁(1,m;m+l+1;x)` for integers `m >= 1`, `l >= 0`.
pub fn hyp2f1_closed_1m(m: u32, l: u32, x: f64, form: Form1m) -> Result<f64> {
    if m < 1 {
        return Err(invalid(format!("m must be at least 1, got {m}")));
    }
    check_open_unit(x, "closed form")?;
    Ok(closed_1m_dd(m, l, x, form).to_f64())
}

pub(crate) fn closed_12_dd(n: u32, x: f64, form: Form12) -> Dd {
    let xd = Dd::from(x);
    let y = Dd::ONE - x;
    let big_l = y.ln();
    let nf = n as f64;
    let outer = sign(n) * (nf + 1.0) / xd.powi((n + 1) as i32);
    let head = y.powi((n - 1) as i32) * (xd + big_l * nf);
    match form {
        Form12::V1 => {
            let mut s = Dd::ZERO;
            for j in 1..n {
                s += Dd::from(sign(j) * (n - j) as f64) / (j as f64)
                    * xd.powi(j as i32)
                    * y.powi((n - j - 1) as i32);
            }
            outer * (head - s)
        }
        Form12::V2 => {
            let y_n1 = y.powi((n - 1) as i32);
            let mut s = Dd::ZERO;
            for i in 2..=n {
                s += binomial_dd(n, i) * sign(i) / ((i - 1) as f64)
                    * (y.powi((n - i) as i32) - y_n1);
            }
            outer * (head + s)
        }
        Form12::V3 => {
            let mut s = Dd::ZERO;
            for j in 1..n {
                let mut inner = Dd::ZERO;
                for i in 0..j {
                    inner += binomial_dd(n - 1, i) * sign(i) / ((j - i) as f64);
                }
                s += xd.powi(j as i32) * inner;
            }
            outer * nf * (y.powi((n - 1) as i32) * big_l + s) - Dd::from(nf + 1.0) / xd
        }
    }
}

/// `₂F₁(1,2;n+2;x)` for integer `n >= 1`.
pub fn hyp2f1_closed_12(n: u32, x: f64, form: Form12) -> Result<f64> {
    if n < 1 {
        return Err(invalid(format!("n must be at least 1, got {n}")));
    }
    check_open_unit(x, "closed form")?;
    Ok(closed_12_dd(n, x, form).to_f64())
}

fn positive_integer(v: f64) -> Option<u32> {
    (v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64).then_some(v as u32)
}

/// Most specific closed form applicable to `params`, ignoring the argument.
pub fn closed_method(params: &HypergeomParams) -> Method {
    if params.m == 1 {
        match positive_integer(params.n) {
            Some(2) if params.p >= 3 => Method::Closed12,
            Some(k) if params.p > k => Method::Closed1m,
            _ => Method::ClosedM1,
        }
    } else {
        Method::ClosedGeneral
    }
}

/// Route [`hyp2f1_eval`] takes for `(params, x)`.
pub fn select_method(params: &HypergeomParams, x: f64, policy: &EvalPolicy) -> Method {
    if x < policy.x_switch || x <= 0.0 {
        return Method::Series;
    }
    // x^{1-p} against alternating binomial sums of size ~2^{p-1}
    let loss = (params.p - 1) as f64 * (1.0 / x * 2.0).log10();
    if loss > LOSS_BUDGET_DIGITS {
        return Method::Series;
    }
    closed_method(params)
}

pub(crate) fn eval_closed_dd(params: &HypergeomParams, x: f64, method: Method) -> Dd {
    match method {
        Method::Closed12 => closed_12_dd(params.p - 2, x, Form12::V1),
        Method::Closed1m => {
            let k = params.n as u32;
            closed_1m_dd(k, params.p - k - 1, x, Form1m::A)
        }
        Method::ClosedM1 => closed_m1_dd(params.n, params.p, x),
        Method::ClosedGeneral | Method::Series => closed_general_dd(params, x),
    }
}

/// Evaluates `₂F₁(m,n;p;x)` on `[0, 1)`: the series below `policy.x_switch`
/// (or when the closed form would lose too many digits), otherwise the most
/// specific closed form.
pub fn hyp2f1_eval(params: &HypergeomParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    Ok(hyp2f1_eval_traced(params, x, policy)?.0)
}

/// Double-double variant of [`hyp2f1_eval`] for callers that combine the
/// value with further cancelling terms. The series route is only f64 accurate.
pub(crate) fn hyp2f1_eval_dd(params: &HypergeomParams, x: f64, policy: &EvalPolicy) -> Result<Dd> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!("hyp2f1_eval requires 0 <= x < 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(Dd::ONE);
    }
    match select_method(params, x, policy) {
        Method::Series => {
            let r = hyp2f1_series(params.m as f64, params.n, params.p as f64, x, policy)?;
            Ok(Dd::from(r.value))
        }
        method => Ok(eval_closed_dd(params, x, method)),
    }
}

/// [`hyp2f1_eval`] together with the route taken.
pub fn hyp2f1_eval_traced(
    params: &HypergeomParams,
    x: f64,
    policy: &EvalPolicy,
) -> Result<(f64, Method)> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!("hyp2f1_eval requires 0 <= x < 1, got {x}")));
    }
    if x == 0.0 {
        return Ok((1.0, Method::Series));
    }
    match select_method(params, x, policy) {
        Method::Series => {
            let r = hyp2f1_series(params.m as f64, params.n, params.p as f64, x, policy)?;
            Ok((r.value, Method::Series))
        }
        method => Ok((eval_closed_dd(params, x, method).to_f64(), method)),
    }
}
