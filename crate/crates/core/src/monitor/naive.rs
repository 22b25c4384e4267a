use super::{Monitor, MonitorError, Rosi, Stream, Verdict};
use crate::bound::{BoundAtom, BoundFormula, NodeId, PredicateBounds};
use crate::eval::{eval_range, AtomSource, Side};
use crate::signal::VarBounds;

/// Atom values over a partial trace; instants past the prefix take the
/// node's declared range.
struct Prefix<'a> {
    data: &'a [f64],
    arity: usize,
    len: usize,
    bounds: &'a PredicateBounds,
}

impl AtomSource for Prefix<'_> {
    fn atom_value(&self, id: NodeId, atom: &BoundAtom, t: usize, side: Side) -> f64 {
        if t < self.len {
            atom.value(&self.data[t * self.arity..(t + 1) * self.arity])
        } else {
            let (lo, hi) = self.bounds.unknown(id);
            match side {
                Side::Lower => lo,
                Side::Upper => hi,
            }
        }
    }
}

fn node_interval(f: &BoundFormula, id: NodeId, prefix: &Prefix<'_>, t: usize) -> Rosi {
    let lb = eval_range(f, id, t, t, Side::Lower, prefix)[0];
    let ub = eval_range(f, id, t, t, Side::Upper, prefix)[0];
    Rosi::new(lb, ub)
}

/// Interval of `f` at `t` over the row-major prefix `data`, recomputed from
/// scratch. Unknown instants range over the declared variable bounds.
pub fn rosi_naive(f: &BoundFormula, data: &[f64], t: usize, bounds: &VarBounds) -> Rosi {
    rosi_naive_node(f, f.root(), data, t, bounds)
}

/// Same as [`rosi_naive`] for the subformula at node `id`.
pub fn rosi_naive_node(
    f: &BoundFormula,
    id: NodeId,
    data: &[f64],
    t: usize,
    bounds: &VarBounds,
) -> Rosi {
    let pb = f.predicate_bounds(bounds);
    let arity = f.schema().len();
    let prefix = Prefix {
        data,
        arity,
        len: data.len() / arity,
        bounds: &pb,
    };
    node_interval(f, id, &prefix, t)
}

/// Baseline monitor that re-evaluates the whole formula after every sample.
#[derive(Debug, Clone)]
pub struct NaiveMonitor {
    stream: Stream,
}

impl NaiveMonitor {
    pub fn new(formula: BoundFormula, bounds: &VarBounds) -> Self {
        let mut stream = Stream::new(formula, bounds, Rosi::unbounded());
        stream.verdict.rosi = Self::compute(&stream);
        NaiveMonitor { stream }
    }

    fn compute(s: &Stream) -> Rosi {
        let prefix = Prefix {
            data: &s.data,
            arity: s.arity(),
            len: s.len,
            bounds: &s.bounds,
        };
        node_interval(&s.formula, s.formula.root(), &prefix, 0)
    }
}

impl Monitor for NaiveMonitor {
    fn push_sample(&mut self, sample: &[f64]) -> Result<Verdict, MonitorError> {
        if self.stream.verdict.is_final() {
            return Ok(self.stream.verdict);
        }
        self.stream.accept(sample)?;
        let root = Self::compute(&self.stream);
        Ok(self.stream.decide(root))
    }

    fn finalize(&self) -> Verdict {
        self.stream.verdict
    }

    fn verdict(&self) -> Verdict {
        self.stream.verdict
    }

    fn root(&self) -> Rosi {
        self.stream.verdict.rosi
    }

    fn samples_seen(&self) -> usize {
        self.stream.len
    }
}
