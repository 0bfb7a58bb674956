//! Shared numerical kernel: Pochhammer symbols, binomials, a
//! convergence-controlled series summation engine, and the power integral
//! `∫_{1-x}^1 s^e ds` underlying the general closed form.

pub mod dd;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
pub use dd::Dd;

/// Controls truncation of every series evaluated in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPolicy {
    /// Relative size below which a term counts as negligible.
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Number of successive negligible terms required before stopping.
    pub consecutive_small: usize,
    /// Below this argument, closed forms defer to the defining series.
    pub x_switch: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy {
            rel_tol: 1e-12,
            max_terms: 100_000,
            consecutive_small: 3,
            x_switch: 0.05,
        }
    }
}

impl EvalPolicy {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        EvalPolicy { rel_tol, ..self }
    }

    pub fn with_max_terms(self, max_terms: usize) -> Self {
        EvalPolicy { max_terms, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(invalid(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(invalid("max_terms must be at least 1"));
        }
        if self.consecutive_small == 0 {
            return Err(invalid("consecutive_small must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.x_switch) {
            return Err(invalid(format!(
                "x_switch must lie in [0, 1), got {}",
                self.x_switch
            )));
        }
        Ok(())
    }
}

/// Outcome of a truncated series summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
    /// Magnitude of the last included term (or the extrapolation difference
    /// for accelerated sums).
    pub trunc_err_est: f64,
}

impl SeriesResult {
    /// The value if the summation converged, otherwise [`Error::NotConverged`].
    pub fn converged_value(&self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                terms: self.terms_used,
                last: self.trunc_err_est,
            })
        }
    }

    pub(crate) fn require_converged(self) -> Result<Self> {
        self.converged_value().map(|_| self)
    }
}

/// Absolute floor below which a partial sum is treated as zero.
pub const ABS_FLOOR: f64 = 1e-300;

/// Rising factorial `(r)_m = r(r+1)…(r+m-1)`, with `(r)_0 = 1`.
pub fn pochhammer(r: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (r + i as f64))
}

/// Generalized binomial coefficient `a(a-1)…(a-k+1)/k!` for real `a`.
pub fn gen_binomial(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a - i as f64) / (i as f64 + 1.0))
}

/// Exact binomial coefficient when it fits in 128 bits.
pub fn binomial_exact(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n-i) / (i+1) is always integral at this point
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, k)` in double-double: exact integers for `n <= 64`, a multiplicative
/// product beyond.
pub(crate) fn binomial_dd(n: u32, k: u32) -> Dd {
    if n <= 64 {
        if let Some(v) = binomial_exact(n, k) {
            return Dd::from(v);
        }
    }
    if k > n {
        return Dd::ZERO;
    }
    let k = k.min(n - k);
    (0..k).fold(Dd::ONE, |acc, i| acc * ((n - i) as f64) / ((i + 1) as f64))
}

pub fn binomial(n: u32, k: u32) -> f64 {
    binomial_dd(n, k).to_f64()
}

/// Rising factorial in double-double; exact for integer `r` while the result
/// fits in 106 bits.
pub(crate) fn pochhammer_dd(r: Dd, m: u32) -> Dd {
    (0..m).fold(Dd::ONE, |acc, i| acc * (r + i as f64))
}

pub(crate) fn factorial_dd(n: u32) -> Dd {
    pochhammer_dd(Dd::ONE, n)
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums `term(0) + term(1) + …` until `policy.consecutive_small` successive
/// terms each satisfy `|term| <= rel_tol·|partial sum|`, or `max_terms` is
/// reached (then `converged` is false). Terms are requested in order, so the
/// generator may carry a ratio recurrence.
pub fn sum_series<F>(mut term: F, policy: &EvalPolicy) -> Result<SeriesResult>
where
    F: FnMut(usize) -> f64,
{
    let mut acc = NeumaierSum::default();
    let mut run = 0usize;
    let mut last = 0.0f64;
    for k in 0..policy.max_terms {
        let t = term(k);
        if !t.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        acc.add(t);
        last = t.abs();
        let partial = acc.value().abs();
        let small = last <= policy.rel_tol * partial || (partial < ABS_FLOOR && last < ABS_FLOOR);
        if small {
            run += 1;
            if run >= policy.consecutive_small {
                return Ok(SeriesResult {
                    value: acc.value(),
                    terms_used: k + 1,
                    converged: true,
                    trunc_err_est: last,
                });
            }
        } else {
            run = 0;
        }
    }
    Ok(SeriesResult {
        value: acc.value(),
        terms_used: policy.max_terms,
        converged: false,
        trunc_err_est: last,
    })
}

/// Sums a series whose partial sums behave like `S + a₁/K + a₂/K² + …`
/// (terms decaying algebraically with an integer-power expansion), using
/// Richardson extrapolation over partial sums at `K₀, 2K₀, 4K₀, …`.
///
/// `term` is called once for each index in increasing order and may fail.
pub fn richardson_series<F>(mut term: F, k0: usize, policy: &EvalPolicy) -> Result<SeriesResult>
where
    F: FnMut(usize) -> Result<f64>,
{
    const MIN_LEVELS: usize = 3;
    let k0 = k0.max(1);
    let mut acc = NeumaierSum::default();
    let mut next = 0usize;
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut best = (f64::NAN, f64::INFINITY);
    let mut level = 0usize;
    loop {
        let target = k0 << level;
        if target > policy.max_terms {
            break;
        }
        while next < target {
            let t = term(next)?;
            if !t.is_finite() {
                return Err(Error::NonFinite { index: next });
            }
            acc.add(t);
            next += 1;
        }
        let mut row = vec![acc.value()];
        for j in 1..=level {
            let f = (1u64 << j) as f64;
            let prev = &table[level - 1];
            row.push((f * row[j - 1] - prev[j - 1]) / (f - 1.0));
        }
        if level >= 1 {
            let est = row[level];
            let diff = (est - table[level - 1][level - 1]).abs();
            if diff < best.1 {
                best = (est, diff);
            }
            if level + 1 >= MIN_LEVELS && diff <= policy.rel_tol * est.abs().max(ABS_FLOOR) {
                return Ok(SeriesResult {
                    value: est,
                    terms_used: next,
                    converged: true,
                    trunc_err_est: diff,
                });
            }
        }
        table.push(row);
        level += 1;
        if level > 20 {
            break;
        }
    }
    let value = if best.0.is_nan() { acc.value() } else { best.0 };
    Ok(SeriesResult {
        value,
        terms_used: next,
        converged: false,
        trunc_err_est: best.1,
    })
}

/// Distance from `-1` below which the logarithmic branch is used.
const LOG_BRANCH: f64 = 1e-9;

/// `∫_{1-x}^{1} s^e ds`: `(1-(1-x)^{e+1})/(e+1)`, or `-log(1-x)` at `e = -1`.
pub fn power_integral(e: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!(
            "power_integral requires 0 < x < 1, got {x}"
        )));
    }
    let log1mx = (Dd::ONE - x).ln();
    Ok(power_integral_dd(Dd::from(e), log1mx).to_f64())
}

/// Double-double kernel of [`power_integral`], given `log(1-x)`.
pub(crate) fn power_integral_dd(e: Dd, log1mx: Dd) -> Dd {
    let e1 = e + 1.0;
    if e1.to_f64().abs() < LOG_BRANCH {
        -log1mx
    } else {
        -(e1 * log1mx).expm1() / e1
    }
}
