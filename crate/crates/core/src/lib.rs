//! Elementary representations of Gauss hypergeometric functions with integer
//! parameters, moments of Meyer-König–Zeller type operators, and hypergeometric
//! expansions of a family of Heun functions.
//!
//! Every closed form in this crate is paired with an independent series oracle:
//!
//! - [`hypergeom`]: `₂F₁(m,n;p;x)` closed forms and a stability-aware dispatcher
//! - [`polylog`]: `Li_k(x)` and termwise derivatives of the polylogarithm series
//! - [`basis`]: exact-rational combinations representing `xⁿ·f_{n,j}(x)`
//! - [`mkz`]: MKZ-type operators and their moments
//! - [`heun`]: the Heun expansion in elementary `₂F₁` functions
//!
//! Closed forms are evaluated internally in double-double arithmetic
//! ([`numcore::dd`]) because their `x^{1-p}` prefactors amplify rounding error
//! by many orders of magnitude at small `x`.

pub mod basis;
mod error;
pub mod heun;
pub mod hypergeom;
pub mod mkz;
pub mod numcore;
pub mod polylog;

pub use error::{Error, Result};
pub use numcore::{EvalPolicy, SeriesResult};
