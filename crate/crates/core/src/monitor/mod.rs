//! Online monitoring over a growing prefix.
//!
//! Two monitors share the same sample intake and verdict rule:
//! [`MonitorState`] maintains per-node final values incrementally and
//! resolves the root interval with windowed queries, while [`NaiveMonitor`]
//! recomputes the root interval from scratch after every sample.

mod naive;
mod rosi;
mod worklist;

use std::fmt;

use thiserror::Error;

use crate::bound::{BoundFormula, PredicateBounds};
use crate::eval::satisfies;
use crate::signal::{check_row, Signal, SignalError, VarBounds};

pub use naive::{rosi_naive, rosi_naive_node, NaiveMonitor};
pub use rosi::{rosi_max, rosi_max_tau, rosi_min, rosi_neg, Rosi};
pub use worklist::{new_monitor, MonitorState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::True => "true",
            Outcome::False => "false",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Root interval at the time of the verdict.
    pub rosi: Rosi,
    /// Index of the sample whose arrival decided the outcome.
    pub decided_at: Option<usize>,
}

impl Verdict {
    pub fn is_final(&self) -> bool {
        self.outcome != Outcome::Unknown
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MonitorError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("sample {index}: {var} = {value} lies outside the declared range [{lo}, {hi}]")]
    OutOfBounds {
        index: usize,
        var: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
}

/// Common interface of the incremental and the recomputing monitor.
pub trait Monitor {
    /// Feeds the next sample. Once the verdict is final further samples are
    /// ignored and the final verdict is returned unchanged.
    fn push_sample(&mut self, sample: &[f64]) -> Result<Verdict, MonitorError>;

    /// Verdict at end of stream.
    fn finalize(&self) -> Verdict;

    fn verdict(&self) -> Verdict;

    /// Current interval of the root at `t = 0`.
    fn root(&self) -> Rosi;

    /// Number of samples accepted so far.
    fn samples_seen(&self) -> usize;
}

/// Sample buffer and verdict bookkeeping shared by both monitors.
#[derive(Debug, Clone)]
pub(crate) struct Stream {
    pub formula: BoundFormula,
    pub bounds: PredicateBounds,
    pub data: Vec<f64>,
    pub len: usize,
    pub verdict: Verdict,
}

impl Stream {
    pub fn new(formula: BoundFormula, bounds: &VarBounds, root: Rosi) -> Self {
        let bounds = formula.predicate_bounds(bounds);
        Stream {
            formula,
            bounds,
            data: Vec::new(),
            len: 0,
            verdict: Verdict {
                outcome: Outcome::Unknown,
                rosi: root,
                decided_at: None,
            },
        }
    }

    pub fn arity(&self) -> usize {
        self.formula.schema().len()
    }

    pub fn sample(&self, t: usize) -> &[f64] {
        let a = self.arity();
        &self.data[t * a..(t + 1) * a]
    }

    /// Validates and stores a sample.
    pub fn accept(&mut self, sample: &[f64]) -> Result<(), MonitorError> {
        check_row(self.formula.schema(), self.len, sample)?;
        if let Some(c) = self.bounds.violation(sample) {
            let (lo, hi) = self.bounds.column(c);
            return Err(MonitorError::OutOfBounds {
                index: self.len,
                var: self.formula.schema()[c].clone(),
                value: sample[c],
                lo,
                hi,
            });
        }
        self.data.extend_from_slice(sample);
        self.len += 1;
        Ok(())
    }

    /// Applies the verdict rule to the root interval after the latest sample.
    pub fn decide(&mut self, root: Rosi) -> Verdict {
        let index = self.len - 1;
        let outcome = if root.lb > 0.0 {
            Outcome::True
        } else if root.ub < 0.0 {
            Outcome::False
        } else if index >= self.formula.horizon() {
            // Everything the root reads is known, so the interval is a point
            // at zero; robustness gives no sign and the boolean semantics
            // decides.
            let sig = Signal::from_flat(
                self.formula.schema().to_vec(),
                self.formula.step(),
                self.data.clone(),
            );
            if satisfies(&self.formula, &sig, 0).expect("horizon is covered") {
                Outcome::True
            } else {
                Outcome::False
            }
        } else {
            Outcome::Unknown
        };
        self.verdict = Verdict {
            outcome,
            rosi: root,
            decided_at: (outcome != Outcome::Unknown).then_some(index),
        };
        self.verdict
    }
}
