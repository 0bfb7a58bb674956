//! Exact symbolic representation of `x^n f_{n,j}(x)`, where
//! `f_{n,j}(x) = Σ_{k≥0} C(n+k,k) x^k / (n+k)^j`, as a rational linear
//! combination of power ratios, `log(1-x)` and polylogarithms.
//!
//! Combos for `j = 2` are read off the elementary closed form; higher `j`
//! follow by integrating against `t^{-1}`, which maps every basis element
//! back into the basis with rational weights.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::numcore::{binomial_dd, sum_series, Dd, EvalPolicy, SeriesResult};
use crate::polylog::polylog_dd;

/// A member of the fixed basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisFunction {
    /// `(1-(1-x)^i)/(1-x)^i`, `i >= 1`.
    PowRatio(u32),
    /// `log(1-x)`.
    LogTerm,
    /// `Li_k(x)`, `k >= 2`.
    Poly(u32),
}

impl BasisFunction {
    /// Value at `x` in double-double precision, `0 <= x < 1`.
    pub(crate) fn eval_dd(self, x: f64) -> Result<Dd> {
        let y = Dd::ONE - x;
        Ok(match self {
            BasisFunction::PowRatio(i) => {
                let yi = y.powi(i as i32);
                (Dd::ONE - yi) / yi
            }
            BasisFunction::LogTerm => y.ln(),
            BasisFunction::Poly(k) => polylog_dd(k, x)?,
        })
    }

    pub fn eval(self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(domain(format!("basis functions need 0 <= x < 1, got {x}")));
        }
        Ok(self.eval_dd(x)?.to_f64())
    }
}

impl fmt::Display for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisFunction::PowRatio(i) => write!(f, "(1-(1-x)^{i})/(1-x)^{i}"),
            BasisFunction::LogTerm => write!(f, "log(1-x)"),
            BasisFunction::Poly(k) => write!(f, "Li_{k}(x)"),
        }
    }
}

/// `x^n f_{n,j}(x) = Σ coef_b · b(x)` with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicCombo {
    n: u32,
    j: u32,
    terms: BTreeMap<BasisFunction, BigRational>,
}

impl SymbolicCombo {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn terms(&self) -> &BTreeMap<BasisFunction, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: BasisFunction) -> Option<&BigRational> {
        self.terms.get(&b)
    }

    pub fn basis_set(&self) -> BTreeSet<BasisFunction> {
        self.terms.keys().copied().collect()
    }

    pub fn to_doc(&self) -> SymbolicDoc {
        let terms = self
            .terms
            .iter()
            .map(|(b, c)| {
                let (basis, i, k) = match *b {
                    BasisFunction::PowRatio(i) => ("pow_ratio", Some(i), None),
                    BasisFunction::LogTerm => ("log", None, None),
                    BasisFunction::Poly(k) => ("polylog", None, Some(k)),
                };
                TermDoc {
                    basis: basis.to_string(),
                    i,
                    k,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                }
            })
            .collect();
        SymbolicDoc {
            n: self.n,
            j: self.j,
            terms,
        }
    }

    fn add_term(&mut self, b: BasisFunction, c: BigRational) {
        let slot = self.terms.entry(b).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }
}

impl fmt::Display for SymbolicCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} f_{{{},{}}}(x) =", self.n, self.n, self.j)?;
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i == 0 {
                ""
            } else {
                "+"
            };
            write!(f, " {sign} {}·{b}", c.abs())?;
        }
        Ok(())
    }
}

/// Serializable form of a combo; coefficients are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicDoc {
    pub n: u32,
    pub j: u32,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub basis: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    pub num: String,
    pub den: String,
}

/// Closed forms for the two elementary kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FnjBase {
    n: u32,
    j: u32,
}

impl FnjBase {
    /// `j = 0`: `(1-x)^{-(n+1)}`; `j = 1`: `1/(n (1-x)^n)`.
    pub fn eval(&self, x: f64) -> f64 {
        let y = 1.0 - x;
        match self.j {
            0 => y.powi(-(self.n as i32 + 1)),
            _ => 1.0 / (self.n as f64 * y.powi(self.n as i32)),
        }
    }
}

pub fn fnj_base(n: u32, j: u32) -> Result<FnjBase> {
    if n < 1 {
        return Err(invalid("n must be at least 1"));
    }
    if j > 1 {
        return Err(invalid(format!(
            "closed base case exists only for j in {{0,1}}, got {j}"
        )));
    }
    Ok(FnjBase { n, j })
}

fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn binomial_big(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

fn base_combo(n: u32) -> SymbolicCombo {
    let mut c = SymbolicCombo {
        n,
        j: 2,
        terms: BTreeMap::new(),
    };
    for i in 1..n {
        let coef = rat(
            binomial_big(n - 1, i) * sign(n - 1 + i),
            BigInt::from(n) * i,
        );
        c.add_term(BasisFunction::PowRatio(i), coef);
    }
    c.add_term(BasisFunction::LogTerm, rat(-sign(n - 1), n));
    c
}

/// One application of `g ↦ ∫_0^x g(t)/t dt` to a combo, raising `j` by one.
pub fn integrate_step(c: &SymbolicCombo) -> SymbolicCombo {
    let mut out = SymbolicCombo {
        n: c.n,
        j: c.j + 1,
        terms: BTreeMap::new(),
    };
    for (b, coef) in &c.terms {
        match *b {
            BasisFunction::PowRatio(i) => {
                // (1-(1-t)^i)/(t(1-t)^i) = Σ_{s=1}^{i} (1-t)^{-s}
                for s in 2..=i {
                    out.add_term(BasisFunction::PowRatio(s - 1), coef / BigInt::from(s - 1));
                }
                out.add_term(BasisFunction::LogTerm, -coef.clone());
            }
            BasisFunction::LogTerm => out.add_term(BasisFunction::Poly(2), -coef.clone()),
            BasisFunction::Poly(k) => out.add_term(BasisFunction::Poly(k + 1), coef.clone()),
        }
    }
    out
}

type ComboCache = RwLock<HashMap<(u32, u32), Arc<SymbolicCombo>>>;

fn cache() -> &'static ComboCache {
    static CACHE: OnceLock<ComboCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Combo for any `n >= 1`, `j >= 2`. For `n = 1` the result is simply `-log(1-x)`
/// lifted through the polylogarithms.
pub(crate) fn build_combo(n: u32, j: u32) -> Arc<SymbolicCombo> {
    if let Some(c) = cache().read().unwrap().get(&(n, j)) {
        return c.clone();
    }
    let built = if j == 2 {
        base_combo(n)
    } else {
        integrate_step(&build_combo(n, j - 1))
    };
    // a racing writer computed the same value; keep whichever landed first
    cache()
        .write()
        .unwrap()
        .entry((n, j))
        .or_insert_with(|| Arc::new(built))
        .clone()
}

/// The exact combo for `x^n f_{n,j}(x)`, `n >= 2`, `j >= 2`.
pub fn fnj_combo(n: u32, j: u32) -> Result<SymbolicCombo> {
    if n < 2 {
        return Err(invalid(format!(
            "combos are defined for n >= 2, got n = {n}"
        )));
    }
    if j < 2 {
        return Err(invalid(format!(
            "combos are defined for j >= 2, got j = {j}"
        )));
    }
    Ok((*build_combo(n, j)).clone())
}

/// The basis that the structure theorem predicts for `(n, j)`.
pub fn expected_basis_set(n: u32, j: u32) -> BTreeSet<BasisFunction> {
    let mut s = BTreeSet::new();
    if j <= n {
        s.extend((1..=n - j + 1).map(BasisFunction::PowRatio));
        s.insert(BasisFunction::LogTerm);
        s.extend((2..j).map(BasisFunction::Poly));
    } else if j == n + 1 {
        s.insert(BasisFunction::LogTerm);
        s.extend((2..=n).map(BasisFunction::Poly));
    } else {
        s.extend((j - n..j).map(BasisFunction::Poly));
    }
    s
}

fn rational_dd(r: &BigRational) -> Dd {
    Dd::from(r.numer()) / Dd::from(r.denom())
}

pub(crate) fn combo_eval_dd(c: &SymbolicCombo, x: f64) -> Result<Dd> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("combo evaluation needs 0 < x < 1, got {x}")));
    }
    let mut acc = Dd::ZERO;
    for (b, coef) in &c.terms {
        acc += rational_dd(coef) * b.eval_dd(x)?;
    }
    Ok(acc / Dd::from(x).powi(c.n as i32))
}

/// `f_{n,j}(x) = x^{-n} Σ coef_b b(x)` for `0 < x < 1`.
///
/// The sum cancels to `O(x^n)`, so the basis values and the accumulation are
/// carried in double-double before rounding once.
pub fn combo_eval(c: &SymbolicCombo, x: f64, policy: &EvalPolicy) -> Result<f64> {
    policy.validate()?;
    Ok(combo_eval_dd(c, x)?.to_f64())
}

/// Direct summation of `f_{n,j}(x) = Σ_{k≥0} C(n+k,k) x^k/(n+k)^j`.
pub fn fnj_series(n: u32, j: u32, x: f64, policy: &EvalPolicy) -> Result<SeriesResult> {
    if n < 1 {
        return Err(invalid("n must be at least 1"));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(domain(format!("series needs 0 <= x < 1, got {x}")));
    }
    let nf = n as f64;
    let mut t = nf.powi(-(j as i32));
    sum_series(
        |k| {
            if k > 0 {
                let m = nf + (k - 1) as f64;
                t *= (m + 1.0) / k as f64 * x * (m / (m + 1.0)).powi(j as i32);
            }
            t
        },
        policy,
    )?
    .require_converged()
}

/// Double-double summation of the same series; used where the result feeds
/// further cancellation. Converges for any `0 <= x < 1`, slowly near 1.
pub(crate) fn fnj_series_dd(n: u32, j: u32, x: f64) -> Result<Dd> {
    const MAX: usize = 1_000_000;
    let nd = Dd::from(n);
    let mut t = nd.powi(-(j as i32));
    let mut sum = t;
    let mut small = 0;
    for k in 1..MAX {
        let m = nd + (k - 1) as f64;
        t = t * (m + 1.0) / k as f64 * x * (m / (m + 1.0)).powi(j as i32);
        sum += t;
        if t.hi().abs() <= 1e-33 * sum.hi().abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(crate::Error::NotConverged {
        terms: MAX,
        last: t.to_f64(),
    })
}

/// `f_{n,2}` transcribed from its elementary closed form.
pub fn fnj_order2_closed(n: u32, x: f64) -> Result<f64> {
    if n < 1 || !(x > 0.0 && x < 1.0) {
        return Err(domain(format!(
            "need n >= 1 and 0 < x < 1, got n = {n}, x = {x}"
        )));
    }
    let y = Dd::ONE - x;
    let mut s = Dd::ZERO;
    for i in 1..n {
        let yi = y.powi(i as i32);
        s += binomial_dd(n - 1, i) * f64::from(sign(i) as i32) / f64::from(i)
            * ((Dd::ONE - yi) / yi);
    }
    s -= y.ln();
    let pre = f64::from(sign(n - 1) as i32) / (Dd::from(n) * Dd::from(x).powi(n as i32));
    Ok((pre * s).to_f64())
}

/// `f_{n,3}` transcribed from its closed form with the inner `l`-sum and `Li_2`.
pub fn fnj_order3_closed(n: u32, x: f64) -> Result<f64> {
    if n < 1 || !(x > 0.0 && x < 1.0) {
        return Err(domain(format!(
            "need n >= 1 and 0 < x < 1, got n = {n}, x = {x}"
        )));
    }
    let y = Dd::ONE - x;
    let log = y.ln();
    let mut s = Dd::ZERO;
    for i in 1..n {
        let mut bracket = Dd::ZERO;
        for l in 0..i.saturating_sub(1) {
            let e = i - l - 1;
            let ye = y.powi(e as i32);
            bracket += (Dd::ONE - ye) / (Dd::from(e) * ye);
        }
        bracket -= log;
        s += binomial_dd(n - 1, i) * f64::from(sign(i) as i32) / f64::from(i) * bracket;
    }
    s += polylog_dd(2, x)?;
    let pre = f64::from(sign(n - 1) as i32) / (Dd::from(n) * Dd::from(x).powi(n as i32));
    Ok((pre * s).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use BasisFunction::*;

    fn policy() -> EvalPolicy {
        EvalPolicy::default().with_rel_tol(1e-15)
    }

    #[test]
    fn base_examples() {
        assert_eq!(fnj_base(2, 1).unwrap().eval(0.5), 2.0);
        assert_eq!(fnj_base(1, 0).unwrap().eval(0.0), 1.0);
        assert_eq!(fnj_base(3, 0).unwrap().eval(0.5), 16.0);
        assert!(fnj_base(0, 1).is_err());
        assert!(fnj_base(2, 2).is_err());
    }

    #[test]
    fn order_two_combo_for_n_two() {
        let c = fnj_combo(2, 2).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.coefficient(PowRatio(1)), Some(&rat(1, 2)));
        assert_eq!(c.coefficient(LogTerm), Some(&rat(1, 2)));
    }

    #[test]
    fn order_three_combo_for_n_two() {
        // T(PowRatio(1)) = -log; T(log) = -Li_2
        let c = fnj_combo(2, 3).unwrap();
        assert_eq!(c.coefficient(LogTerm), Some(&rat(-1, 2)));
        assert_eq!(c.coefficient(Poly(2)), Some(&rat(-1, 2)));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn five_terms_for_n_five() {
        assert_eq!(fnj_combo(5, 3).unwrap().len(), 5);
    }

    #[test]
    fn preconditions() {
        assert!(fnj_combo(1, 2).is_err());
        assert!(fnj_combo(3, 1).is_err());
        let c = fnj_combo(3, 3).unwrap();
        assert!(combo_eval(&c, 0.0, &policy()).is_err());
        assert!(combo_eval(&c, 1.0, &policy()).is_err());
        assert!(fnj_series(2, 2, 1.0, &policy()).is_err());
    }

    #[test]
    fn structure_matches_theorem() {
        for n in 2..=8 {
            for j in 2..=12 {
                let c = fnj_combo(n, j).unwrap();
                assert_eq!(c.len(), n as usize, "n={n} j={j}");
                assert_eq!(c.basis_set(), expected_basis_set(n, j), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn agrees_with_series() {
        let p = policy();
        let v = combo_eval(&fnj_combo(2, 2).unwrap(), 0.5, &p).unwrap();
        assert_relative_eq!(
            v,
            fnj_series(2, 2, 0.5, &p).unwrap().value,
            max_relative = 1e-12
        );
        let v = combo_eval(&fnj_combo(3, 4).unwrap(), 0.3, &p).unwrap();
        assert_relative_eq!(
            v,
            fnj_series(3, 4, 0.3, &p).unwrap().value,
            max_relative = 1e-9
        );
    }

    #[test]
    fn value_near_zero() {
        let p = policy();
        // beyond n = 6 the x^n cancellation at x = 1e-3 exceeds double-double range
        for n in 2..=6 {
            for j in 2..=12 {
                // f(x) = 1/n^j + x (n+1)/(n+1)^j + O(x^2); the linear term alone is
                // about 1e-3 relative here, so compare against both leading terms
                let x = 1e-3;
                let v = combo_eval(&fnj_combo(n, j).unwrap(), x, &p).unwrap();
                let f0 = (n as f64).powi(-(j as i32));
                let f1 = (n as f64 + 1.0).powi(1 - j as i32);
                assert!(((v - f0 - f1 * x) / f0).abs() < 1e-4, "n={n} j={j} v={v}");
            }
        }
    }

    #[test]
    fn series_examples() {
        let p = policy();
        assert_relative_eq!(
            fnj_series(2, 1, 0.5, &p).unwrap().value,
            2.0,
            max_relative = 1e-13
        );
        assert_eq!(fnj_series(3, 2, 0.0, &p).unwrap().value, 1.0 / 9.0);
        assert_relative_eq!(
            fnj_series(4, 0, 0.5, &p).unwrap().value,
            32.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn closed_forms_match_combos() {
        let p = policy();
        for n in 2..=8 {
            for x in [0.1, 0.35, 0.7, 0.9] {
                let c2 = combo_eval(&fnj_combo(n, 2).unwrap(), x, &p).unwrap();
                assert_relative_eq!(c2, fnj_order2_closed(n, x).unwrap(), max_relative = 1e-12);
                let c3 = combo_eval(&fnj_combo(n, 3).unwrap(), x, &p).unwrap();
                assert_relative_eq!(c3, fnj_order3_closed(n, x).unwrap(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn doc_round_trips_terms() {
        let doc = fnj_combo(3, 2).unwrap().to_doc();
        assert_eq!(doc.terms.len(), 3);
        let pr: Vec<_> = doc
            .terms
            .iter()
            .filter(|t| t.basis == "pow_ratio")
            .collect();
        assert_eq!(pr.len(), 2);
        assert!(doc
            .terms
            .iter()
            .any(|t| t.basis == "log" && t.i.is_none() && t.k.is_none()));
    }

    #[test]
    fn concurrent_construction_is_consistent() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| fnj_combo(7, 11).unwrap()))
            .collect();
        let combos: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(combos.windows(2).all(|w| w[0] == w[1]));
    }
}
