use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "elemhyp",
    version,
    about = "Elementary hypergeometric functions, MKZ moments and Heun expansions"
)]
pub struct Cli {
    /// Relative tolerance for series truncation.
    #[arg(long, global = true, env = "ELEMHYP_REL_TOL")]
    pub rel_tol: Option<f64>,

    /// Hard cap on the number of series terms.
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate 2F1(m, n; p; x).
    Hyp2f1(Hyp2f1Args),
    /// Moments of MKZ-type operators.
    Moment(MomentArgs),
    /// The kernel series f_{n,j} and its polylogarithm combination.
    Fnj(FnjArgs),
    /// Heun function expansion in elementary 2F1 terms.
    Heun(HeunArgs),
    /// Run a verification sweep and emit a report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Closed,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "1")]
    V1,
    #[value(name = "2")]
    V2,
    #[value(name = "3")]
    V3,
}

#[derive(Debug, Args)]
pub struct Hyp2f1Args {
    #[arg(long)]
    pub m: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub n: f64,
    #[arg(long)]
    pub p: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    /// Representation for the (1,m) and (1,2) families.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Also report the series value and the relative difference.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Mkz,
    Ln,
    Gmkz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Closed,
    Series,
    Both,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long, value_enum)]
    pub operator: Operator,
    #[arg(long)]
    pub n: u32,
    /// Degree of the monomial test function e_r.
    #[arg(long)]
    pub r: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// The generalized operator's own index r (gmkz only).
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub rop: i32,
    #[arg(long, value_enum, default_value = "closed")]
    pub route: Route,
}

#[derive(Debug, Args)]
pub struct FnjArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub j: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Print the exact rational combination instead of values.
    #[arg(long)]
    pub emit_symbolic: bool,
}

#[derive(Debug, Args)]
pub struct HeunArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub n: f64,
    #[arg(long)]
    pub p: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    /// Divide by u(0) so that the result is 1 at the origin.
    #[arg(long)]
    pub normalized: bool,
    /// Add the finite-difference residual in the differential equation.
    #[arg(long)]
    pub check_ode: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Hypergeom,
    Mkz,
    Basis,
    Heun,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
