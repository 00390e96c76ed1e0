//! Marked lambda calculus with exact shortest and longest complete
//! developments.
//!
//! - [`term`]: terms, substitution, α-equivalence.
//! - [`reduction`]: one-step reduction of marked redexes and traces.
//! - [`metrics`]: the closed-form lengths `h`, `g` and multiplicities `m_x`, `n_x`.
//! - [`strategy`]: the strategies `H` and `G` realising those lengths.
//! - [`essential`]: the essential-redex predicate.
//! - [`oracle`]: brute-force development search, residual labels, term generation.
//! - [`syntax`]: parser and printer.
//! - [`properties`]: the invariant suite run by `devlab check`.
//! - [`cli`]: the `devlab` command line.

pub mod cli;
pub mod error;
pub mod essential;
pub mod metrics;
pub mod oracle;
pub mod properties;
pub mod reduction;
pub mod strategy;
pub mod syntax;
pub mod term;

pub use error::{Error, Result};
pub use metrics::{Count, Extent};
pub use reduction::Trace;
pub use term::{Path, Step, Term, VarName};
