//! Exact equivariant Iwasawa-theoretic computations: truncated p-adic
//! cyclotomic coefficients, group rings, equivariant power series, Fitting
//! ideals, abstract p-adic 1-motives, equivariant L-values and the
//! verification harness built on top of them.

pub mod arith;
pub mod coeff;
pub mod error;
pub mod fitcalc;
pub mod grp;
pub mod harness;
pub mod iwasawa;
pub mod lfun;
pub mod motive;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
