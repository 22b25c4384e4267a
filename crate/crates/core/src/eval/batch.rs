//! Layer-by-layer evaluation of a node over a contiguous range of instants.
//!
//! Each node materializes its values on `[start, end]` from its children's
//! values on the shifted ranges. Evaluating on a lower-bound or upper-bound
//! trace of atom values gives the componentwise interval semantics; `Not`
//! swaps the side it asks its child for.

use crate::bound::{BoundAtom, BoundFormula, NodeId, NodeKind};
use crate::sliding::{Extremum, SlidingExtremum, SlidingKth};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Lower,
    Upper,
}

impl Side {
    pub(crate) fn flip(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

pub(crate) trait AtomSource {
    fn atom_value(&self, id: NodeId, atom: &BoundAtom, t: usize, side: Side) -> f64;
}

/// Values of node `id` at every instant in `start..=end`.
pub(crate) fn eval_range(
    f: &BoundFormula,
    id: NodeId,
    start: usize,
    end: usize,
    side: Side,
    src: &dyn AtomSource,
) -> Vec<f64> {
    debug_assert!(start <= end);
    match f.kind(id) {
        NodeKind::True => vec![f64::INFINITY; end - start + 1],
        NodeKind::Atom(a) => (start..=end)
            .map(|t| src.atom_value(id, a, t, side))
            .collect(),
        NodeKind::Not(a) => {
            let mut v = eval_range(f, *a, start, end, side.flip(), src);
            v.iter_mut().for_each(|x| *x = -*x);
            v
        }
        NodeKind::And(a, b) | NodeKind::Or(a, b) => {
            let is_and = matches!(f.kind(id), NodeKind::And(..));
            let l = eval_range(f, *a, start, end, side, src);
            let r = eval_range(f, *b, start, end, side, src);
            l.into_iter()
                .zip(r)
                .map(|(x, y)| if is_and { x.min(y) } else { x.max(y) })
                .collect()
        }
        NodeKind::Eventually(i, a) | NodeKind::Always(i, a) => {
            let mode = if matches!(f.kind(id), NodeKind::Eventually(..)) {
                Extremum::Max
            } else {
                Extremum::Min
            };
            let child = eval_range(f, *a, start + i.lo, end + i.hi, side, src);
            let mut engine = SlidingExtremum::new(i.width(), mode);
            child
                .into_iter()
                .filter_map(|v| engine.push(v))
                .map(|(_, v)| v)
                .collect()
        }
        NodeKind::Cumulative {
            interval, k, child, ..
        } => {
            let vals = eval_range(f, *child, start + interval.lo, end + interval.hi, side, src);
            let mut engine = SlidingKth::new(*k, interval.width()).expect("validated rank");
            vals.into_iter()
                .filter_map(|v| engine.push(v))
                .map(|(_, v)| v)
                .collect()
        }
        NodeKind::Until(i, a, b) => {
            let right = eval_range(f, *b, start + i.lo, end + i.hi, side, src);
            let left = if i.hi > 0 {
                eval_range(f, *a, start, end + i.hi - 1, side, src)
            } else {
                Vec::new()
            };
            (0..=end - start)
                .map(|s| until_at(&left, &right, s, i.lo, i.hi))
                .collect()
        }
    }
}

/// Until at relative instant `s`, where `left[j]` is the left operand at
/// `start + j` and `right[j]` the right operand at `start + lo + j`.
fn until_at(left: &[f64], right: &[f64], s: usize, lo: usize, hi: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut prefix = f64::INFINITY;
    for d in 0..=hi {
        if d >= lo {
            best = best.max(right[s + d - lo].min(prefix));
        }
        if d == hi {
            break;
        }
        prefix = prefix.min(left[s + d]);
        // Every later candidate is capped by the running prefix minimum.
        if prefix <= best {
            break;
        }
    }
    best
}
