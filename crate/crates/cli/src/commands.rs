use std::fs;
use std::io;

use serde::Serialize;
use thiserror::Error;

use elemhyp::basis::{combo_eval, fnj_base, fnj_combo, fnj_series};
use elemhyp::heun::{
    heun_eval, heun_normalization, heun_ode_residual, heun_termination, HeunFamilyParams,
};
use elemhyp::hypergeom::{
    closed_method, hyp2f1_closed_12, hyp2f1_closed_1m, hyp2f1_closed_general, hyp2f1_closed_m1,
    hyp2f1_eval, hyp2f1_series, Form12, Form1m, HypergeomParams, Method,
};
use elemhyp::mkz::{
    gmkz_apply, gmkz_e1, gmkz_moment_abel, ln_direct_moment, ln_moment_e2, mkz_moment,
    mkz_moment_e2, GmkzParams, Monomial,
};
use elemhyp::EvalPolicy;

use crate::args::{
    Cli, Command, FnjArgs, Format, HeunArgs, Hyp2f1Args, MethodArg, MomentArgs, Operator, Route,
    SuiteArg, VariantArg, VerifyArgs,
};
use crate::json;
use crate::report::{rel_diff, Report};
use crate::suite::{run_suite, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<elemhyp::Error> for CliError {
    fn from(e: elemhyp::Error) -> Self {
        match e {
            elemhyp::Error::Domain(_) | elemhyp::Error::InvalidParams(_) => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// What a command wants written to standard output, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

pub fn policy_from(cli: &Cli) -> Result<EvalPolicy, CliError> {
    let mut policy = EvalPolicy::default();
    if let Some(t) = cli.rel_tol {
        policy.rel_tol = t;
    }
    if let Some(m) = cli.max_terms {
        policy.max_terms = m;
    }
    policy.validate()?;
    Ok(policy)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let policy = policy_from(cli)?;
    match &cli.command {
        Command::Hyp2f1(a) => hyp2f1(a, &policy),
        Command::Moment(a) => moment(a, &policy),
        Command::Fnj(a) => fnj(a, &policy),
        Command::Heun(a) => heun(a, &policy),
        Command::Verify(a) => verify(a, &policy),
    }
}

#[derive(Serialize)]
struct Value {
    value: f64,
}

#[derive(Serialize)]
struct Compared {
    value: f64,
    series: f64,
    rel_err: f64,
}

fn form_1m(v: Option<VariantArg>) -> Result<Form1m, CliError> {
    match v {
        None | Some(VariantArg::A) => Ok(Form1m::A),
        Some(VariantArg::B) => Ok(Form1m::B),
        Some(_) => Err(CliError::Invalid(
            "variant must be A or B for this family".into(),
        )),
    }
}

fn form_12(v: Option<VariantArg>) -> Result<Form12, CliError> {
    match v {
        None | Some(VariantArg::V1) => Ok(Form12::V1),
        Some(VariantArg::V2) => Ok(Form12::V2),
        Some(VariantArg::V3) => Ok(Form12::V3),
        Some(_) => Err(CliError::Invalid(
            "variant must be 1, 2 or 3 for this family".into(),
        )),
    }
}

fn closed_value(
    params: &HypergeomParams,
    x: f64,
    variant: Option<VariantArg>,
) -> Result<f64, CliError> {
    let (n, p) = (params.n(), params.p());
    let method = closed_method(params);
    if variant.is_some() && !matches!(method, Method::Closed1m | Method::Closed12) {
        return Err(CliError::Invalid(
            "variants exist only for the (1,m) and (1,2) families".into(),
        ));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(match method {
        Method::Closed12 => hyp2f1_closed_12(p - 2, x, form_12(variant)?)?,
        Method::Closed1m => {
            let k = n as u32;
            hyp2f1_closed_1m(k, p - k - 1, x, form_1m(variant)?)?
        }
        Method::ClosedM1 => hyp2f1_closed_m1(n, p, x)?,
        Method::ClosedGeneral | Method::Series => hyp2f1_closed_general(params, x)?,
    })
}

fn hyp2f1(a: &Hyp2f1Args, policy: &EvalPolicy) -> Result<Outcome, CliError> {
    let params = HypergeomParams::new(a.m, a.n, a.p)?;
    if !(0.0..1.0).contains(&a.x) {
        return Err(CliError::Invalid(format!(
            "x must lie in [0, 1), got {}",
            a.x
        )));
    }
    let series = || -> Result<f64, CliError> {
        Ok(hyp2f1_series(a.m as f64, a.n, a.p as f64, a.x, policy)?.value)
    };
    let value = match a.method {
        MethodArg::Series => series()?,
        MethodArg::Closed => closed_value(&params, a.x, a.variant)?,
        MethodArg::Auto => {
            if a.variant.is_some() {
                closed_value(&params, a.x, a.variant)?
            } else {
                hyp2f1_eval(&params, a.x, policy)?
            }
        }
    };
    let out = if a.compare {
        let s = series()?;
        json::line(&Compared {
            value,
            series: s,
            rel_err: rel_diff(value, s),
        })
    } else {
        json::line(&Value { value })
    };
    Ok(Outcome::ok(out?))
}

#[derive(Serialize)]
struct Both {
    value: f64,
    closed: f64,
    series: f64,
    rel_err: f64,
}

fn moment_closed(a: &MomentArgs, policy: &EvalPolicy) -> Result<f64, CliError> {
    if a.r == 0 {
        return Ok(1.0);
    }
    match a.operator {
        Operator::Mkz if a.r == 2 => Ok(mkz_moment_e2(a.n, a.x, policy)?),
        Operator::Mkz => Ok(mkz_moment(a.n, a.r, a.x, policy)?),
        Operator::Ln if a.r == 2 => Ok(ln_moment_e2(a.n, a.x, policy)?),
        Operator::Ln => Err(CliError::Invalid(
            "the ln operator has a closed form only for r = 2".into(),
        )),
        Operator::Gmkz => {
            let params = GmkzParams::new(a.n, a.rop, a.alpha, a.beta)?;
            let alpha = a.alpha as i64;
            if a.r == 1 {
                Ok(gmkz_e1(&params, a.x, policy)?)
            } else if a.alpha.fract() == 0.0 && a.rop as i64 == alpha + 1 {
                Ok(gmkz_moment_abel(
                    a.n,
                    alpha as u32,
                    a.beta,
                    a.r,
                    a.x,
                    policy,
                )?)
            } else {
                Err(CliError::Invalid(
                    "gmkz closed form needs r = 1, or an integer alpha with rop = alpha + 1".into(),
                ))
            }
        }
    }
}

fn moment_series(a: &MomentArgs, policy: &EvalPolicy) -> Result<f64, CliError> {
    let e = |t: f64| Monomial(a.r).eval(t);
    Ok(match a.operator {
        Operator::Mkz => gmkz_apply(&GmkzParams::classical(a.n)?, e, a.x, policy)?.value,
        Operator::Ln => ln_direct_moment(a.n, a.r, a.x, policy)?.value,
        Operator::Gmkz => {
            gmkz_apply(
                &GmkzParams::new(a.n, a.rop, a.alpha, a.beta)?,
                e,
                a.x,
                policy,
            )?
            .value
        }
    })
}

fn moment(a: &MomentArgs, policy: &EvalPolicy) -> Result<Outcome, CliError> {
    if !(0.0..1.0).contains(&a.x) {
        return Err(CliError::Invalid(format!(
            "x must lie in [0, 1), got {}",
            a.x
        )));
    }
    let out = match a.route {
        Route::Closed => json::line(&Value {
            value: moment_closed(a, policy)?,
        }),
        Route::Series => json::line(&Value {
            value: moment_series(a, policy)?,
        }),
        Route::Both => {
            let closed = moment_closed(a, policy)?;
            let series = moment_series(a, policy)?;
            json::line(&Both {
                value: closed,
                closed,
                series,
                rel_err: rel_diff(closed, series),
            })
        }
    };
    Ok(Outcome::ok(out?))
}

#[derive(Serialize)]
struct FnjValues {
    combo: f64,
    series: f64,
    rel_err: f64,
}

#[derive(Serialize)]
struct FnjBaseValues {
    closed: f64,
    series: f64,
    rel_err: f64,
}

fn fnj(a: &FnjArgs, policy: &EvalPolicy) -> Result<Outcome, CliError> {
    if a.emit_symbolic {
        let combo = fnj_combo(a.n, a.j)?;
        return Ok(Outcome::ok(json::line(&combo.to_doc())?));
    }
    let Some(x) = a.x else {
        return Err(CliError::Invalid("give --x or --emit-symbolic".into()));
    };
    let series = fnj_series(a.n, a.j, x, policy)?.value;
    let out = if a.j <= 1 {
        let closed = fnj_base(a.n, a.j)?.eval(x);
        json::line(&FnjBaseValues {
            closed,
            series,
            rel_err: rel_diff(closed, series),
        })
    } else {
        let combo = combo_eval(&fnj_combo(a.n, a.j)?, x, policy)?;
        json::line(&FnjValues {
            combo,
            series,
            rel_err: rel_diff(combo, series),
        })
    };
    Ok(Outcome::ok(out?))
}

#[derive(Serialize)]
struct HeunOut {
    value: f64,
    termination: Option<u32>,
    normalization: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ode_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ode_residual_abs: Option<f64>,
}

/// Finite-difference step for `--check-ode`.
const ODE_STEP: f64 = 1e-4;

fn heun(a: &HeunArgs, policy: &EvalPolicy) -> Result<Outcome, CliError> {
    let fp = HeunFamilyParams::new(a.m, a.n, a.p)?;
    let u = heun_eval(&fp, a.x, a.terms, policy)?.value;
    let u0 = heun_normalization(&fp, policy)?;
    let value = if a.normalized { u / u0 } else { u };
    let (rel, abs) = if a.check_ode {
        let r = heun_ode_residual(&fp, a.x, ODE_STEP, a.terms, policy)?;
        (Some(r.relative), Some(r.residual.abs()))
    } else {
        (None, None)
    };
    let out = json::line(&HeunOut {
        value,
        termination: heun_termination(&fp),
        normalization: u0,
        ode_residual: rel,
        ode_residual_abs: abs,
    })?;
    Ok(Outcome::ok(out))
}

fn verify(a: &VerifyArgs, policy: &EvalPolicy) -> Result<Outcome, CliError> {
    let suite = match a.suite {
        SuiteArg::Hypergeom => Suite::Hypergeom,
        SuiteArg::Mkz => Suite::Mkz,
        SuiteArg::Basis => Suite::Basis,
        SuiteArg::Heun => Suite::Heun,
        SuiteArg::All => Suite::All,
    };
    let report = Report::new(run_suite(suite, policy));
    let text = match a.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv(),
    };
    let code = if report.all_passed() { 0 } else { 1 };
    if !report.all_passed() {
        eprintln!(
            "verify: {} of {} checks failed (max rel_err {:e})",
            report.summary.total - report.summary.passed,
            report.summary.total,
            report.summary.max_rel_err
        );
    }
    match &a.out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(Outcome {
                stdout: String::new(),
                code,
            })
        }
        None => Ok(Outcome { stdout: text, code }),
    }
}
