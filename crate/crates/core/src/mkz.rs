//! Meyer-König and Zeller type operators: direct summation of the operators
//! and the closed moment formulas built on `₂F₁`, `f_{n,j}` and polylogarithm
//! derivatives.

use serde::{Deserialize, Serialize};

use crate::basis::{build_combo, combo_eval_dd, fnj_series_dd};
use crate::error::{domain, invalid, Result};
use crate::hypergeom::{hyp2f1_eval_dd, HypergeomParams};
use crate::numcore::{binomial_dd, sum_series, Dd, EvalPolicy, SeriesResult};
use crate::polylog::polylog_derivative_scaled;

/// Parameters of `M_{n,r}^{α,β} f(x) = (1-x)^{n+r} Σ_k C(n+r+k-1,k) x^k f((k+β)/(n+k+α))`.
/// The classical operator is `(r, α, β) = (1, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmkzParams {
    n: u32,
    r: i32,
    alpha: f64,
    beta: f64,
}

impl GmkzParams {
    pub fn new(n: u32, r: i32, alpha: f64, beta: f64) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n must be a positive integer"));
        }
        if (n as i64 + r as i64) < 1 {
            return Err(invalid(format!(
                "n + r must be at least 1, got n={n}, r={r}"
            )));
        }
        if !(alpha.is_finite() && beta.is_finite() && alpha >= beta && beta >= 0.0) {
            return Err(invalid(format!(
                "need alpha >= beta >= 0, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(GmkzParams { n, r, alpha, beta })
    }

    /// The classical operator `M_n`.
    pub fn classical(n: u32) -> Result<Self> {
        Self::new(n, 1, 0.0, 0.0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> i32 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn nr(&self) -> u32 {
        (self.n as i64 + self.r as i64) as u32
    }
}

/// The test function `e_r(t) = t^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial(pub u32);

impl Monomial {
    pub fn eval(self, t: f64) -> f64 {
        t.powi(self.0 as i32)
    }
}

fn check_half_open(x: f64) -> Result<()> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("x must lie in [0, 1), got {x}")))
    }
}

fn check_open(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("x must lie in (0, 1), got {x}")))
    }
}

// Internal sums feed alternating combinations; run them tighter than the caller asked.
fn inner(policy: &EvalPolicy) -> EvalPolicy {
    policy.with_rel_tol(policy.rel_tol.min(1e-16))
}

/// Direct summation of `M_{n,r}^{α,β} f(x)`.
pub fn gmkz_apply<F>(params: &GmkzParams, f: F, x: f64, policy: &EvalPolicy) -> Result<SeriesResult>
where
    F: Fn(f64) -> f64,
{
    check_half_open(x)?;
    policy.validate()?;
    let nr = params.nr() as f64;
    let (n, a, b) = (params.n as f64, params.alpha, params.beta);
    let mut w = (1.0 - x).powi(params.nr() as i32);
    sum_series(
        |k| {
            let kf = k as f64;
            if k > 0 {
                w *= (nr + kf - 1.0) / kf * x;
            }
            w * f((kf + b) / (n + kf + a))
        },
        policy,
    )?
    .require_converged()
}

/// `M_n e_2(x) = x² + x(1-x)²/(n+1) · ₂F₁(1,2;n+2;x)`.
pub fn mkz_moment_e2(n: u32, x: f64, policy: &EvalPolicy) -> Result<f64> {
    check_half_open(x)?;
    if n < 1 {
        return Err(invalid("n must be a positive integer"));
    }
    let f = hyp2f1_eval_dd(&HypergeomParams::new(1, 2.0, n + 2)?, x, policy)?;
    let y = 1.0 - x;
    Ok((Dd::from(x) * x + f * (x * y * y) / (n + 1) as f64).to_f64())
}

/// Digits the combo route may lose to its `x^{-n}` prefactor before the
/// double-double series is preferred.
const COMBO_LOSS_DIGITS: f64 = 20.0;

fn fnj_dd(n: u32, j: u32, x: f64, policy: &EvalPolicy) -> Result<Dd> {
    match j {
        0 => Ok((Dd::ONE - x).powi(-(n as i32) - 1)),
        1 => Ok(Dd::ONE / (Dd::from(n) * (Dd::ONE - x).powi(n as i32))),
        _ => {
            let loss = n as f64 * (1.0 / x).log10() + j as f64 * (n as f64).log10();
            if x >= policy.x_switch && loss <= COMBO_LOSS_DIGITS {
                combo_eval_dd(&build_combo(n, j), x)
            } else {
                fnj_series_dd(n, j, x)
            }
        }
    }
}

/// `M_n e_r(x) = 1 + (1-x)^{n+1} Σ_{j=1}^{r} C(r,j)(-n)^j f_{n,j}(x)`, with
/// `f_{n,j}` from the exact polylogarithm combos.
pub fn mkz_moment(n: u32, r: u32, x: f64, policy: &EvalPolicy) -> Result<f64> {
    if n < 1 {
        return Err(invalid("n must be a positive integer"));
    }
    if r == 0 {
        return Ok(1.0);
    }
    check_open(x)?;
    policy.validate()?;
    let nd = Dd::from(n);
    let mut sum = Dd::ZERO;
    for j in 1..=r {
        let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += binomial_dd(r, j) * nd.powi(j as i32) * sgn * fnj_dd(n, j, x, policy)?;
    }
    Ok((Dd::ONE + (Dd::ONE - x).powi(n as i32 + 1) * sum).to_f64())
}

/// `L_n e_2(x) = x² + 2x(1-x)²/(n+2) · ₂F₁(1,3;n+3;x)`.
pub fn ln_moment_e2(n: u32, x: f64, policy: &EvalPolicy) -> Result<f64> {
    check_half_open(x)?;
    if n < 1 {
        return Err(invalid("n must be a positive integer"));
    }
    // ₂F₁(1,3;n+3;x) is the (m, l) = (3, n-1) case of the 1,m family
    let f = hyp2f1_eval_dd(&HypergeomParams::new(1, 3.0, n + 3)?, x, policy)?;
    let y = 1.0 - x;
    Ok((Dd::from(x) * x + f * (2.0 * x * y * y) / (n + 2) as f64).to_f64())
}

/// Direct summation of `L_n e_r(x) = Σ_k m_{n,k}(x) μ_k` with
/// `m_{n,k}(x) = C(n+k,k)(1-x)^{n+1}x^k`, `μ_0 = e_r(0)` and, for `k >= 1`,
/// the Beta moment `μ_k = ∫ t^r t^{k-1}(1-t)^{n-1}/B(k,n) dt = (k)_r/(n+k)_r`.
pub fn ln_direct_moment(n: u32, r: u32, x: f64, policy: &EvalPolicy) -> Result<SeriesResult> {
    check_half_open(x)?;
    policy.validate()?;
    if n < 1 {
        return Err(invalid("n must be a positive integer"));
    }
    let nf = n as f64;
    let mut w = (1.0 - x).powi(n as i32 + 1);
    sum_series(
        |k| {
            let kf = k as f64;
            if k == 0 {
                return w * if r == 0 { 1.0 } else { 0.0 };
            }
            w *= (nf + kf) / kf * x;
            let mu: f64 = (0..r)
                .map(|i| (kf + i as f64) / (nf + kf + i as f64))
                .product();
            w * mu
        },
        policy,
    )?
    .require_converged()
}

fn integral_alpha(alpha: f64) -> Result<u32> {
    if alpha >= 0.0 && alpha.fract() == 0.0 && alpha <= 1e6 {
        Ok(alpha as u32)
    } else {
        Err(domain(format!(
            "alpha must be a nonnegative integer here, got {alpha}"
        )))
    }
}

/// `M_{n,r}^{α,β} e_1(x)` from its two-term `₂F₁` representation; `α` must
/// be a nonnegative integer so both `₂F₁` factors are elementary.
pub fn gmkz_e1(params: &GmkzParams, x: f64, policy: &EvalPolicy) -> Result<f64> {
    check_half_open(x)?;
    let alpha = integral_alpha(params.alpha)?;
    let (n, b) = (params.n, params.beta);
    let shift = alpha as f64 - params.r as f64;
    let f1 = hyp2f1_eval_dd(&HypergeomParams::new(1, shift, n + 1 + alpha)?, x, policy)?;
    let f2 = hyp2f1_eval_dd(
        &HypergeomParams::new(1, shift + 1.0, n + 2 + alpha)?,
        x,
        policy,
    )?;
    let na = Dd::from(n + alpha);
    let t1 = Dd::from(b) / na * f1;
    let t2 = (Dd::from(params.nr()) - b) / (na + 1.0) * x * f2;
    Ok((t1 + t2).to_f64())
}

/// `M_{n,α+1}^{α,β} e_m(x)` by Abel's device: with `N = n+α`,
/// `(1-x)^{N+1}/N! Σ_j (-1)^j C(m,j)(N-β)^j (Li_j)^{(N)}(x)`.
///
/// `(Li_j)^{(N)}/N!` is summed directly, so the factorial cancels exactly.
pub fn gmkz_moment_abel(
    n: u32,
    alpha: u32,
    beta: f64,
    m: u32,
    x: f64,
    policy: &EvalPolicy,
) -> Result<f64> {
    check_open(x)?;
    policy.validate()?;
    if n < 1 {
        return Err(invalid("n must be a positive integer"));
    }
    if !(beta >= 0.0 && beta <= alpha as f64) {
        return Err(invalid(format!(
            "need alpha >= beta >= 0, got alpha={alpha}, beta={beta}"
        )));
    }
    let big_n = n + alpha;
    let y = Dd::ONE - x;
    let shift = Dd::from(big_n) - beta;
    let tight = inner(policy);
    // j = 0: (Li_0)^{(N)}/N! = (1-x)^{-(N+1)}
    let mut sum = y.powi(-(big_n as i32) - 1);
    for j in 1..=m {
        let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
        let d = polylog_derivative_scaled(j, big_n, x, &tight)?;
        sum += binomial_dd(m, j) * shift.powi(j as i32) * sgn * d;
    }
    Ok((y.powi(big_n as i32 + 1) * sum).to_f64())
}
