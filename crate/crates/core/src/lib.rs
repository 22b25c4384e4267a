//! Cumulative-time signal temporal logic: formulas, offline robustness, and
//! online monitoring with interval-valued robust satisfaction.

pub mod bench;
pub mod bound;
pub mod eval;
pub mod formula;
pub mod io;
pub mod monitor;
pub mod parser;
pub mod scenario;
pub mod signal;
pub mod sliding;

pub use bound::{validate, BoundFormula, NodeId, TimeInterval, ValidationError};
pub use eval::{
    characteristic, max_tau, robustness, robustness_trace, satisfies, secondary_signal, EvalError,
};
pub use formula::{AffineExpr, Cmp, Formula, Interval, Predicate, Term};
pub use parser::{parse, ParseError, SourceSpan};
pub use signal::{Signal, SignalError, VarBounds};
