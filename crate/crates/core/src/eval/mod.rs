//! Offline evaluation over complete traces: qualitative satisfaction, the
//! characteristic function, and quantitative robustness.
//!
//! The functions here follow the semantic definitions literally, one
//! recursive call per (node, instant). They serve as the reference the
//! windowed evaluators are checked against. [`robustness_trace`] is the fast
//! batch path.

mod batch;

use std::cmp::Ordering;

use thiserror::Error;

use crate::bound::{validate, BoundFormula, NodeId, NodeKind, ValidationError};
use crate::formula::{Formula, Predicate};
use crate::signal::Signal;

pub(crate) use batch::{eval_range, AtomSource, Side};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluating at t={t} needs samples up to {needed}, trace has {len}")]
    InsufficientTrace { t: usize, needed: usize, len: usize },
    #[error("formula horizon {horizon} does not fit in a trace of {len} samples")]
    EmptyAdmissibleRange { horizon: usize, len: usize },
    #[error("signal schema {got:?} differs from the formula's schema {expected:?}")]
    SchemaMismatch {
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("signal step {got} differs from the formula's step {expected}")]
    StepMismatch { expected: f64, got: f64 },
    #[error("rank {k} outside 1..={len}")]
    RankOutOfRange { k: usize, len: usize },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// `+1` when the formula holds, `-1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Characteristic {
    Positive,
    Negative,
}

impl Characteristic {
    pub fn value(self) -> i8 {
        match self {
            Characteristic::Positive => 1,
            Characteristic::Negative => -1,
        }
    }
}

pub(crate) fn check_signal(f: &BoundFormula, sig: &Signal) -> Result<(), EvalError> {
    if f.schema() != sig.schema() {
        return Err(EvalError::SchemaMismatch {
            expected: f.schema().to_vec(),
            got: sig.schema().to_vec(),
        });
    }
    if f.step() != sig.step() {
        return Err(EvalError::StepMismatch {
            expected: f.step(),
            got: sig.step(),
        });
    }
    Ok(())
}

fn check_window(f: &BoundFormula, sig: &Signal, t: usize) -> Result<(), EvalError> {
    check_signal(f, sig)?;
    let needed = t + f.horizon();
    if needed >= sig.len() {
        return Err(EvalError::InsufficientTrace {
            t,
            needed,
            len: sig.len(),
        });
    }
    Ok(())
}

pub fn satisfies(f: &BoundFormula, sig: &Signal, t: usize) -> Result<bool, EvalError> {
    check_window(f, sig, t)?;
    Ok(sat(f, f.root(), sig, t))
}

pub fn characteristic(
    f: &BoundFormula,
    sig: &Signal,
    t: usize,
) -> Result<Characteristic, EvalError> {
    Ok(if satisfies(f, sig, t)? {
        Characteristic::Positive
    } else {
        Characteristic::Negative
    })
}

pub fn robustness(f: &BoundFormula, sig: &Signal, t: usize) -> Result<f64, EvalError> {
    check_window(f, sig, t)?;
    Ok(rob(f, f.root(), sig, t))
}

fn sat(f: &BoundFormula, id: NodeId, sig: &Signal, t: usize) -> bool {
    match f.kind(id) {
        NodeKind::True => true,
        NodeKind::Atom(a) => a.holds(sig.sample(t)),
        NodeKind::Not(a) => !sat(f, *a, sig, t),
        NodeKind::And(a, b) => sat(f, *a, sig, t) && sat(f, *b, sig, t),
        NodeKind::Or(a, b) => sat(f, *a, sig, t) || sat(f, *b, sig, t),
        NodeKind::Eventually(i, a) => (t + i.lo..=t + i.hi).any(|u| sat(f, *a, sig, u)),
        NodeKind::Always(i, a) => (t + i.lo..=t + i.hi).all(|u| sat(f, *a, sig, u)),
        NodeKind::Until(i, a, b) => {
            (t + i.lo..=t + i.hi).any(|u| sat(f, *b, sig, u) && (t..u).all(|v| sat(f, *a, sig, v)))
        }
        NodeKind::Cumulative {
            interval, k, child, ..
        } => {
            // count * step >= tau  <=>  count >= ceil(tau / step)
            let count = (t + interval.lo..=t + interval.hi)
                .filter(|&u| sat(f, *child, sig, u))
                .count();
            count >= *k
        }
    }
}

fn rob(f: &BoundFormula, id: NodeId, sig: &Signal, t: usize) -> f64 {
    match f.kind(id) {
        NodeKind::True => f64::INFINITY,
        NodeKind::Atom(a) => a.value(sig.sample(t)),
        NodeKind::Not(a) => -rob(f, *a, sig, t),
        NodeKind::And(a, b) => rob(f, *a, sig, t).min(rob(f, *b, sig, t)),
        NodeKind::Or(a, b) => rob(f, *a, sig, t).max(rob(f, *b, sig, t)),
        NodeKind::Eventually(i, a) => (t + i.lo..=t + i.hi)
            .map(|u| rob(f, *a, sig, u))
            .fold(f64::NEG_INFINITY, f64::max),
        NodeKind::Always(i, a) => (t + i.lo..=t + i.hi)
            .map(|u| rob(f, *a, sig, u))
            .fold(f64::INFINITY, f64::min),
        NodeKind::Until(i, a, b) => (t + i.lo..=t + i.hi)
            .map(|u| {
                let prefix = (t..u)
                    .map(|v| rob(f, *a, sig, v))
                    .fold(f64::INFINITY, f64::min);
                rob(f, *b, sig, u).min(prefix)
            })
            .fold(f64::NEG_INFINITY, f64::max),
        NodeKind::Cumulative {
            interval, k, child, ..
        } => {
            let vals: Vec<f64> = (t + interval.lo..=t + interval.hi)
                .map(|u| rob(f, *child, sig, u))
                .collect();
            max_tau(&vals, *k).expect("validated rank")
        }
    }
}

/// The k-th largest entry: sort descending and take position k.
pub fn max_tau(values: &[f64], k: usize) -> Result<f64, EvalError> {
    if k == 0 || k > values.len() {
        return Err(EvalError::RankOutOfRange {
            k,
            len: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    Ok(sorted[k - 1])
}

/// `y(t) = mu(x(t)) - c` for every sample of the trace.
pub fn secondary_signal(p: &Predicate, sig: &Signal) -> Result<Vec<f64>, EvalError> {
    let bound = validate(&Formula::Atom(p.clone()), sig.schema(), sig.step())?;
    let NodeKind::Atom(atom) = bound.kind(bound.root()) else {
        unreachable!("a single atom binds to an atom node")
    };
    Ok(sig.samples().map(|s| atom.value(s)).collect())
}

struct Complete<'a>(&'a Signal);

impl AtomSource for Complete<'_> {
    fn atom_value(
        &self,
        _id: NodeId,
        atom: &crate::bound::BoundAtom,
        t: usize,
        _side: Side,
    ) -> f64 {
        atom.value(self.0.sample(t))
    }
}

/// Robustness at every `t` with `t + horizon <= n - 1`, computed layer by
/// layer with the sliding-window aggregators.
pub fn robustness_trace(f: &BoundFormula, sig: &Signal) -> Result<Vec<(usize, f64)>, EvalError> {
    check_signal(f, sig)?;
    let h = f.horizon();
    if h >= sig.len() {
        return Err(EvalError::EmptyAdmissibleRange {
            horizon: h,
            len: sig.len(),
        });
    }
    let last = sig.len() - 1 - h;
    let vals = eval_range(f, f.root(), 0, last, Side::Lower, &Complete(sig));
    Ok(vals.into_iter().enumerate().collect())
}
