//! A family of general Heun equations whose solution expands in elementary
//! `₂F₁(m,n;p+2k;x)`:
//!
//! `u(x) = Σ_k c_k ₂F₁(m,n;p+2k;x)`, with
//! `c_k = ((m+n-1)/2)_k ((p-m)/2)_k ((p-n)/2)_k / (k! (p/2)_k ((p+1)/2)_k)`,
//!
//! plus an independent Frobenius power-series solver for the equation itself.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::hypergeom::{hyp2f1_eval, HypergeomParams};
use crate::numcore::{richardson_series, Dd, EvalPolicy, NeumaierSum, SeriesResult};

/// Parameters of `u'' + (γ/x + δ/(x-1) + ε/(x-a)) u' + (αβx - q)/(x(x-1)(x-a)) u = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunSpec {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    epsilon: f64,
    a: f64,
    q: f64,
}

const FUCHS_TOL: f64 = 1e-12;

impl HeunSpec {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        epsilon: f64,
        a: f64,
        q: f64,
    ) -> Result<Self> {
        let all = [alpha, beta, gamma, delta, epsilon, a, q];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("Heun parameters must be finite"));
        }
        if a == 0.0 || a == 1.0 {
            return Err(invalid(format!(
                "singular point a must differ from 0 and 1, got {a}"
            )));
        }
        let lhs = alpha + beta + 1.0;
        let rhs = gamma + delta + epsilon;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        if (lhs - rhs).abs() > FUCHS_TOL * scale {
            return Err(invalid(format!(
                "Fuchsian condition alpha+beta+1 = gamma+delta+epsilon fails: {lhs} vs {rhs}"
            )));
        }
        Ok(HeunSpec {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            a,
            q,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// `(m, n, p)` with `m >= 1`, `p >= m+1`, real `n != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunFamilyParams {
    m: u32,
    n: f64,
    p: u32,
}

impl HeunFamilyParams {
    pub fn new(m: u32, n: f64, p: u32) -> Result<Self> {
        if m < 1 {
            return Err(invalid("m must be a positive integer"));
        }
        if p < m + 1 {
            return Err(invalid(format!(
                "p must satisfy p >= m+1, got m={m}, p={p}"
            )));
        }
        if !n.is_finite() || n == 0.0 {
            return Err(invalid(format!("n must be finite and nonzero, got {n}")));
        }
        Ok(HeunFamilyParams { m, n, p })
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

    fn leaf(&self, k: usize) -> Result<HypergeomParams> {
        HypergeomParams::new(self.m, self.n, self.p + 2 * k as u32)
    }

    /// Upper and lower Pochhammer bases of `c_k`.
    fn bases(&self) -> ([f64; 3], [f64; 2]) {
        let (m, n, p) = (self.m as f64, self.n, self.p as f64);
        (
            [(m + n - 1.0) / 2.0, (p - m) / 2.0, (p - n) / 2.0],
            [p / 2.0, (p + 1.0) / 2.0],
        )
    }
}

/// `α=m, β=n, γ=p+1-m-n, δ=m+n-p+1, ε=m+n-1, a=1/2, q=(mn-(m+n-p)(m+n-1))/2`.
pub fn heun_params_from(fp: &HeunFamilyParams) -> Result<HeunSpec> {
    let (m, n, p) = (fp.m as f64, fp.n, fp.p as f64);
    HeunSpec::new(
        m,
        n,
        p + 1.0 - m - n,
        m + n - p + 1.0,
        m + n - 1.0,
        0.5,
        (m * n - (m + n - p) * (m + n - 1.0)) / 2.0,
    )
}

const INT_TOL: f64 = 1e-12;

fn positive_integer(v: f64) -> Option<u32> {
    let r = v.round();
    ((v - r).abs() <= INT_TOL && r >= 1.0 && r <= u32::MAX as f64).then_some(r as u32)
}

/// Smallest `r >= 1` with `m+n = 3-2r` or `n-p = 2r-2`: the expansion then
/// stops after `r` terms.
pub fn heun_termination(fp: &HeunFamilyParams) -> Option<u32> {
    let (m, n, p) = (fp.m as f64, fp.n, fp.p as f64);
    let r1 = positive_integer((3.0 - m - n) / 2.0);
    let r2 = positive_integer((n - p + 2.0) / 2.0);
    match (r1, r2) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Iterator over `c_0, c_1, …` by the term ratio; exact zeros past termination.
struct Coeffs {
    top: [f64; 3],
    bottom: [f64; 2],
    stop: Option<u32>,
    k: usize,
    c: f64,
}

impl Coeffs {
    fn new(fp: &HeunFamilyParams) -> Self {
        let (top, bottom) = fp.bases();
        Coeffs {
            top,
            bottom,
            stop: heun_termination(fp),
            k: 0,
            c: 1.0,
        }
    }
}

impl Iterator for Coeffs {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let k = self.k;
        if k > 0 {
            let j = (k - 1) as f64;
            let num: f64 = self.top.iter().map(|t| t + j).product();
            let den: f64 = self.bottom.iter().map(|b| b + j).product::<f64>() * (j + 1.0);
            self.c *= num / den;
        }
        self.k += 1;
        match self.stop {
            Some(r) if k >= r as usize => Some(0.0),
            _ => Some(self.c),
        }
    }
}

/// `c_k`, the weight of `₂F₁(m,n;p+2k;x)`.
pub fn heun_coeff(fp: &HeunFamilyParams, k: usize) -> f64 {
    Coeffs::new(fp).nth(k).unwrap_or(0.0)
}

/// `Σ_{k<K} c_k ₂F₁(m,n;p+2k;x)`, plain truncation.
pub fn heun_partial_sum(
    fp: &HeunFamilyParams,
    x: f64,
    terms: usize,
    policy: &EvalPolicy,
) -> Result<f64> {
    let mut acc = NeumaierSum::default();
    for (k, c) in Coeffs::new(fp).take(terms).enumerate() {
        if c != 0.0 {
            acc.add(c * hyp2f1_eval(&fp.leaf(k)?, x, policy)?);
        }
    }
    Ok(acc.value())
}

/// Smallest start for the doubling sequence of partial sums.
const MIN_START: usize = 16;

/// Sums `Σ_k c_k g(k)` exactly when the expansion terminates, otherwise by
/// extrapolating partial sums at `K, 2K, 4K, …` (the coefficients decay like
/// `k^{-2}` with an expansion in integer powers of `1/k`).
fn expansion_sum<G>(
    fp: &HeunFamilyParams,
    terms: usize,
    policy: &EvalPolicy,
    mut g: G,
) -> Result<SeriesResult>
where
    G: FnMut(usize) -> Result<f64>,
{
    if let Some(r) = heun_termination(fp) {
        let mut acc = NeumaierSum::default();
        for (k, c) in Coeffs::new(fp).take(r as usize).enumerate() {
            acc.add(c * g(k)?);
        }
        return Ok(SeriesResult {
            value: acc.value(),
            terms_used: r as usize,
            converged: true,
            trunc_err_est: 0.0,
        });
    }
    let mut coeffs = Coeffs::new(fp);
    richardson_series(
        |k| {
            let c = coeffs.next().unwrap_or(0.0);
            Ok(c * g(k)?)
        },
        terms.max(MIN_START),
        policy,
    )
}

/// `u(x) = Σ_k c_k ₂F₁(m,n;p+2k;x)`; not normalized to `u(0) = 1`.
///
/// Terminating expansions are summed exactly (independent of `terms`);
/// otherwise `terms` is the first partial sum of the extrapolation sequence.
pub fn heun_eval(
    fp: &HeunFamilyParams,
    x: f64,
    terms: usize,
    policy: &EvalPolicy,
) -> Result<SeriesResult> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!("heun_eval requires 0 <= x < 1, got {x}")));
    }
    if terms < 1 {
        return Err(invalid("truncation order must be at least 1"));
    }
    policy.validate()?;
    expansion_sum(fp, terms, policy, |k| hyp2f1_eval(&fp.leaf(k)?, x, policy))?.require_converged()
}

/// `u(0) = ₃F₂((p-m)/2, (p-n)/2, (m+n-1)/2; p/2, (p+1)/2; 1) = Σ_k c_k`.
pub fn heun_normalization(fp: &HeunFamilyParams, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    expansion_sum(fp, MIN_START, policy, |_| Ok(1.0))?.converged_value()
}

/// Taylor coefficient of `x^j` in the (unnormalized) expansion:
/// `Σ_k c_k (m)_j (n)_j / ((p+2k)_j j!)`.
pub fn expansion_taylor_coeff(fp: &HeunFamilyParams, j: u32, policy: &EvalPolicy) -> Result<f64> {
    let (m, n) = (fp.m as f64, fp.n);
    let leaf = |k: usize| -> Result<f64> {
        let c = (fp.p as usize + 2 * k) as f64;
        Ok((0..j)
            .map(|i| {
                let i = i as f64;
                (m + i) * (n + i) / ((c + i) * (i + 1.0))
            })
            .product())
    };
    expansion_sum(fp, MIN_START, policy, leaf)?.converged_value()
}

/// Normalized Taylor coefficient `d_{1-γ}` of `u(x)/u(0)` when `γ` is a
/// nonpositive integer, `None` otherwise. Terminating expansions give it in
/// double-double precision; the power series needs that much because its
/// recurrence amplifies an error in this seed along the growing solution.
pub fn heun_resonant_coeff(fp: &HeunFamilyParams, policy: &EvalPolicy) -> Result<Option<Dd>> {
    let gamma = heun_params_from(fp)?.gamma;
    if !(gamma <= 0.0 && gamma.fract() == 0.0) {
        return Ok(None);
    }
    let j = (1.0 - gamma) as u32;
    let Some(r) = heun_termination(fp) else {
        let u0 = heun_normalization(fp, policy)?;
        return Ok(Some(Dd::from(expansion_taylor_coeff(fp, j, policy)? / u0)));
    };
    let (m, n) = (fp.m as f64, fp.n);
    let (top, bottom) = fp.bases();
    let mut c = Dd::ONE;
    let mut num = Dd::ZERO;
    let mut den = Dd::ZERO;
    for k in 0..r as usize {
        if k > 0 {
            let i = (k - 1) as f64;
            for t in top {
                c *= Dd::from(t + i);
            }
            for b in bottom {
                c = c / Dd::from(b + i);
            }
            c = c / Dd::from(i + 1.0);
        }
        let cp = (fp.p as usize + 2 * k) as f64;
        let mut leaf = Dd::ONE;
        for i in 0..j {
            let i = i as f64;
            leaf =
                leaf * Dd::from(m + i) * Dd::from(n + i) / (Dd::from(cp + i) * Dd::from(i + 1.0));
        }
        num += c * leaf;
        den += c;
    }
    Ok(Some(num / den))
}

/// Power-series solution at 0 with `u(0) = 1`, summed to `x^N`.
pub fn heun_series_oracle(spec: &HeunSpec, x: f64, terms: usize) -> Result<f64> {
    heun_series_oracle_with(spec, x, terms, None)
}

/// As [`heun_series_oracle`]; when `γ` is a nonpositive integer the
/// coefficient of `x^{1-γ}` is not fixed by the recurrence and must be given
/// in `resonant` (the recurrence must also be compatible, i.e. no logarithmic
/// solution).
///
/// Coefficients follow `a(j+1)(j+γ) d_{j+1} = [q + j((j-1+γ)(1+a) + aδ + ε)] d_j
/// - (j-1+α)(j-1+β) d_{j-1}`, run in double-double: for solutions analytic
/// beyond `|a|` the coefficients are the recurrence's minimal solution and
/// rounding errors grow like `a^{-j}`.
pub fn heun_series_oracle_with(
    spec: &HeunSpec,
    x: f64,
    terms: usize,
    resonant: Option<Dd>,
) -> Result<f64> {
    let radius = spec.a.abs().min(1.0);
    if x.is_nan() || x.abs() >= radius {
        return Err(domain(format!(
            "power series needs |x| < {radius}, got {x}"
        )));
    }
    if terms < 2 {
        return Err(invalid("oracle needs at least two terms"));
    }
    let HeunSpec {
        alpha,
        beta,
        gamma,
        delta,
        epsilon,
        a,
        q,
    } = *spec;
    let mut prev = Dd::ZERO;
    let mut cur = Dd::ONE;
    let mut pw = Dd::ONE;
    let mut acc = Dd::ONE;
    for j in 0..terms {
        let jf = Dd::from(j as u32);
        let rhs = (Dd::from(q) + jf * ((jf - 1.0 + gamma) * (1.0 + a) + a * delta + epsilon)) * cur
            - (jf - 1.0 + alpha) * (jf - 1.0 + beta) * prev;
        let next = if (j as f64 + gamma).abs() < INT_TOL {
            let jf = j as f64;
            let scale = (q.abs() + jf * jf * (1.0 + a.abs() + delta.abs() + epsilon.abs()))
                * cur.to_f64().abs()
                + ((jf + alpha.abs()) * (jf + beta.abs())) * prev.to_f64().abs();
            if rhs.to_f64().abs() > 1e-9 * scale.max(1.0) {
                return Err(domain(format!(
                    "gamma = {gamma}: the solution regular at 0 has a logarithmic term"
                )));
            }
            resonant.ok_or_else(|| {
                domain(format!(
                    "gamma = {gamma} leaves the coefficient of x^{} free",
                    j + 1
                ))
            })?
        } else {
            rhs / (Dd::from(a) * (jf + 1.0) * (jf + gamma))
        };
        prev = cur;
        cur = next;
        pw = pw * x;
        acc += cur * pw;
    }
    Ok(acc.to_f64())
}

/// Finite-difference check of the equation at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    /// Left side of the equation.
    pub residual: f64,
    /// `|u''| + |(γ/x + δ/(x-1) + ε/(x-a)) u'| + |(αβx-q)/(x(x-1)(x-a)) u|`.
    pub scale: f64,
    pub relative: f64,
}

/// Number of doubling levels for the fixed extrapolation used by the
/// finite-difference check; a fixed scheme keeps the result smooth in `x`.
const FD_LEVELS: usize = 7;

fn heun_eval_fixed(
    fp: &HeunFamilyParams,
    x: f64,
    terms: usize,
    policy: &EvalPolicy,
) -> Result<f64> {
    if heun_termination(fp).is_some() {
        return Ok(heun_eval(fp, x, terms, policy)?.value);
    }
    let k0 = terms.max(MIN_START);
    let mut coeffs = Coeffs::new(fp);
    let mut acc = NeumaierSum::default();
    let mut table: Vec<f64> = Vec::new();
    let mut next = 0;
    for level in 0..FD_LEVELS {
        while next < k0 << level {
            let c = coeffs.next().unwrap_or(0.0);
            acc.add(c * hyp2f1_eval(&fp.leaf(next)?, x, policy)?);
            next += 1;
        }
        let mut row = vec![acc.value()];
        for j in 1..=level {
            let f = (1u64 << j) as f64;
            row.push((f * row[j - 1] - table[j - 1]) / (f - 1.0));
        }
        table = row;
    }
    Ok(table[FD_LEVELS - 1])
}

/// Residual of the expansion in the differential equation at `x`, with
/// derivatives from 5-point central differences at spacing `h`.
pub fn heun_ode_residual(
    fp: &HeunFamilyParams,
    x: f64,
    h: f64,
    terms: usize,
    policy: &EvalPolicy,
) -> Result<OdeResidual> {
    if !(1e-5..=1e-3).contains(&h) {
        return Err(domain(format!("step must lie in [1e-5, 1e-3], got {h}")));
    }
    let spec = heun_params_from(fp)?;
    if !(x > 2.0 * h && x < spec.a - 2.0 * h) {
        return Err(domain(format!(
            "x = {x} is too close to a singular point for step {h}"
        )));
    }
    let u = |t: f64| heun_eval_fixed(fp, t, terms, policy);
    let (fm2, fm1, f0, f1, f2) = (
        u(x - 2.0 * h)?,
        u(x - h)?,
        u(x)?,
        u(x + h)?,
        u(x + 2.0 * h)?,
    );
    let d1 = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
    let d2 = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    let p = spec.gamma / x + spec.delta / (x - 1.0) + spec.epsilon / (x - spec.a);
    let qq = (spec.alpha * spec.beta * x - spec.q) / (x * (x - 1.0) * (x - spec.a));
    let residual = d2 + p * d1 + qq * f0;
    let scale = d2.abs() + (p * d1).abs() + (qq * f0).abs();
    Ok(OdeResidual {
        residual,
        scale,
        relative: residual.abs() / scale.max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fp(m: u32, n: f64, p: u32) -> HeunFamilyParams {
        HeunFamilyParams::new(m, n, p).unwrap()
    }

    fn policy() -> EvalPolicy {
        EvalPolicy::default()
    }

    #[test]
    fn parameter_examples() {
        let s = heun_params_from(&fp(1, 2.0, 3)).unwrap();
        assert_eq!(
            (
                s.alpha(),
                s.beta(),
                s.gamma(),
                s.delta(),
                s.epsilon(),
                s.a(),
                s.q()
            ),
            (1.0, 2.0, 1.0, 1.0, 2.0, 0.5, 1.0)
        );
        let s = heun_params_from(&fp(2, 0.5, 4)).unwrap();
        assert_eq!(s.alpha() + s.beta() + 1.0, 3.5);
        assert_eq!(s.gamma() + s.delta() + s.epsilon(), 3.5);
        assert_eq!(heun_params_from(&fp(2, -1.0, 4)).unwrap().epsilon(), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(HeunFamilyParams::new(0, 1.0, 3).is_err());
        assert!(HeunFamilyParams::new(2, 1.0, 2).is_err());
        assert!(HeunFamilyParams::new(1, 0.0, 3).is_err());
        assert!(HeunSpec::new(1.0, 1.0, 1.0, 1.0, 2.0, 0.5, 0.0).is_err());
        assert!(HeunSpec::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(heun_coeff(&fp(1, 0.5, 3), 0), 1.0);
        assert_eq!(heun_coeff(&fp(2, -1.0, 4), 1), 0.0);
        assert_relative_eq!(
            heun_coeff(&fp(1, 2.0, 3), 1),
            1.0 / 6.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn termination_examples() {
        assert_eq!(heun_termination(&fp(2, -1.0, 4)), Some(1));
        assert_eq!(heun_termination(&fp(1, 5.0, 3)), Some(2));
        assert_eq!(heun_termination(&fp(1, 0.5, 3)), None);
        assert_eq!(heun_termination(&fp(1, 5.0 + 1e-13, 3)), Some(2));
        for k in 2..8 {
            assert_eq!(heun_coeff(&fp(1, 5.0, 3), k), 0.0);
        }
    }

    #[test]
    fn terminating_value() {
        let f = fp(2, -1.0, 4);
        for k in [1, 3, 40] {
            let v = heun_eval(&f, 0.6, k, &policy()).unwrap();
            assert!(v.converged);
            assert_relative_eq!(v.value, 0.7, max_relative = 1e-15);
        }
        assert_eq!(heun_normalization(&f, &policy()).unwrap(), 1.0);
    }

    #[test]
    fn value_at_zero_is_normalization() {
        let f = fp(1, 2.0, 3);
        let p = policy();
        assert_relative_eq!(
            heun_eval(&f, 0.0, 40, &p).unwrap().value,
            heun_normalization(&f, &p).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn normalization_matches_long_partial_sums() {
        // Σ c_k with c_k ~ C k^{-2}: compare with 2e5 terms plus a k^{-1} tail
        let f = fp(1, 2.0, 3);
        let n = 200_000;
        let mut acc = NeumaierSum::default();
        let cs: Vec<f64> = Coeffs::new(&f).take(n).collect();
        cs.iter().for_each(|&c| acc.add(c));
        let tail = cs[n - 1] * (n as f64 - 1.0).powi(2) / (n as f64 - 0.5);
        assert_relative_eq!(
            heun_normalization(&f, &policy()).unwrap(),
            acc.value() + tail,
            max_relative = 1e-8
        );
    }

    #[test]
    fn oracle_examples() {
        let s = heun_params_from(&fp(2, -1.0, 4)).unwrap();
        assert_relative_eq!(
            heun_series_oracle(&s, 0.3, 50).unwrap(),
            0.85,
            max_relative = 1e-14
        );
        assert_eq!(heun_series_oracle(&s, 0.0, 10).unwrap(), 1.0);
        assert!(heun_series_oracle(&s, 0.5, 10).is_err());
        assert!(heun_series_oracle(&s, 0.3, 1).is_err());
    }

    #[test]
    fn oracle_needs_free_coefficient_at_resonance() {
        let f = fp(1, 5.0, 3);
        let s = heun_params_from(&f).unwrap();
        assert_eq!(s.gamma(), -2.0);
        assert!(heun_series_oracle(&s, 0.2, 40).is_err());
        let p = policy();
        let u0 = heun_normalization(&f, &p).unwrap();
        let d3 = expansion_taylor_coeff(&f, 3, &p).unwrap() / u0;
        let exact = heun_resonant_coeff(&f, &p).unwrap().unwrap();
        assert_relative_eq!(exact.to_f64(), d3, max_relative = 1e-14);
        let v = heun_series_oracle_with(&s, 0.2, 60, Some(exact)).unwrap();
        let e = heun_eval(&f, 0.2, 4, &p).unwrap().value / u0;
        assert_relative_eq!(v, e, max_relative = 1e-12);
    }

    #[test]
    fn terminating_cases_solve_the_equation() {
        let p = policy();
        for f in [fp(2, -1.0, 4), fp(1, -2.0, 5), fp(3, -4.0, 6)] {
            let r = heun_ode_residual(&f, 0.3, 1e-4, 40, &p).unwrap();
            assert!(r.relative <= 1e-6, "{f:?}: {r:?}");
        }
        assert!(heun_ode_residual(&fp(2, -1.0, 4), 0.5, 1e-4, 40, &p).is_err());
    }

    #[test]
    fn taylor_coefficients_of_terminating_case() {
        // ₂F₁(2,-1;4;x) = 1 - x/2
        let f = fp(2, -1.0, 4);
        let p = policy();
        assert_eq!(expansion_taylor_coeff(&f, 0, &p).unwrap(), 1.0);
        assert_relative_eq!(
            expansion_taylor_coeff(&f, 1, &p).unwrap(),
            -0.5,
            max_relative = 1e-15
        );
        assert_eq!(expansion_taylor_coeff(&f, 2, &p).unwrap(), 0.0);
    }
}
