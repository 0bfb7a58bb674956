//! Polylogarithms `Li_k(x) = Σ_{j≥1} x^j / j^k` and termwise derivatives of
//! that series.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::numcore::{factorial_dd, sum_series, Dd, EvalPolicy, NeumaierSum};

/// Order `k >= 1` of a polylogarithm; `Li_1(x) = -log(1-x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PolylogOrder(u32);

impl PolylogOrder {
    pub fn new(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(invalid("polylogarithm order must be at least 1"));
        }
        Ok(PolylogOrder(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

const EDGE: f64 = 1.0 - 1e-6;

/// `Li_k(x)` for `|x| <= 1 - 1e-6`, and for `x = 1` when `k >= 2`.
pub fn polylog(order: PolylogOrder, x: f64, policy: &EvalPolicy) -> Result<f64> {
    let k = order.get();
    if k == 1 {
        if x.abs() > EDGE {
            return Err(domain(format!("Li_1 requires |x| <= 1-1e-6, got {x}")));
        }
        return Ok(-(-x).ln_1p());
    }
    if x == 1.0 {
        return Ok(zeta_with_tail(k, policy));
    }
    if x.is_nan() || x.abs() > EDGE {
        return Err(domain(format!(
            "Li_{k} requires |x| <= 1-1e-6 or x = 1, got {x}"
        )));
    }
    let mut pw = 1.0;
    sum_series(
        |i| {
            pw *= x;
            pw / ((i + 1) as f64).powi(k as i32)
        },
        policy,
    )?
    .converged_value()
}

/// `Σ_{j≤N} j^{-k}` plus the midpoint tail `∫_{N+1/2}^∞ t^{-k} dt`.
fn zeta_with_tail(k: u32, policy: &EvalPolicy) -> f64 {
    let terms = policy.max_terms.min(1_000_000);
    let mut acc = NeumaierSum::default();
    // small terms first
    for j in (1..=terms).rev() {
        acc.add((j as f64).powi(-(k as i32)));
    }
    let edge = terms as f64 + 0.5;
    acc.add(edge.powi(1 - k as i32) / (k as f64 - 1.0));
    acc.value()
}

/// Double-double `Li_k(x)` for `0 <= x < 1`.
pub(crate) fn polylog_dd(k: u32, x: f64) -> Result<Dd> {
    if k == 1 {
        return Ok(-(Dd::ONE - x).ln());
    }
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!(
            "Li_{k} evaluation requires 0 <= x < 1, got {x}"
        )));
    }
    const MAX: usize = 2_000_000;
    let xd = Dd::from(x);
    let mut pw = Dd::ONE;
    let mut sum = Dd::ZERO;
    let mut small = 0;
    for j in 1..=MAX {
        pw *= xd;
        let term = pw / Dd::from(j as f64).powi(k as i32);
        sum += term;
        if term.hi().abs() <= 1e-34 * sum.hi().abs() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if pw.hi() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NotConverged {
        terms: MAX,
        last: (pw / Dd::from(MAX as f64).powi(k as i32)).to_f64(),
    })
}

/// `(Li_j)^{(d)}(x) / d! = Σ_{k≥0} C(k+d, k) x^k / (k+d)^j`.
///
/// Working with the `d!`-scaled series keeps the factorial out of the float
/// sum; [`polylog_derivative_series`] multiplies it back.
pub(crate) fn polylog_derivative_scaled(
    j: u32,
    d: u32,
    x: f64,
    policy: &EvalPolicy,
) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!(
            "derivative series requires 0 <= x < 1, got {x}"
        )));
    }
    if d < 1 {
        return Err(invalid("derivative order must be at least 1"));
    }
    let df = d as f64;
    let mut t = df.powi(-(j as i32));
    sum_series(
        |k| {
            if k > 0 {
                let kk = (k - 1) as f64;
                let ratio = (kk + df) / (kk + df + 1.0);
                t *= (kk + df + 1.0) / (kk + 1.0) * x * ratio.powi(j as i32);
            }
            t
        },
        policy,
    )?
    .converged_value()
}

/// The `d`-th derivative of `Li_j` at `x`, from the termwise-differentiated
/// series `Σ_{k≥0} (k+d)!/k! · x^k/(k+d)^j`. `Li_0(x) = x/(1-x)`.
pub fn polylog_derivative_series(j: u32, d: u32, x: f64, policy: &EvalPolicy) -> Result<f64> {
    let scaled = polylog_derivative_scaled(j, d, x, policy)?;
    Ok((factorial_dd(d) * scaled).to_f64())
}
