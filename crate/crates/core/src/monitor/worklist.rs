//! Incremental monitor.
//!
//! After `n` samples every node `v` with sample span `[lo, hi]` splits its
//! time axis into three zones:
//!
//! * final, `t <= n - 1 - hi`: every sample the entry reads is known, so the
//!   entry is a point. These are appended once per sample and kept in a
//!   range-min/max array.
//! * unknown, `t >= n - lo`: nothing the entry reads is known, so it equals
//!   the node's constant all-unknown interval.
//! * partial, in between: evaluated on demand and memoized until the next
//!   sample.
//!
//! Windowed queries over partial entries use a nesting property. Because
//! every sample respects the declared bounds, an entry only widens when one
//! of its known inputs is replaced by an unknown one. Past a per-node chain
//! start `c`, entry `t + 1` is a superset of entry `t`, so lower bounds
//! decrease and upper bounds increase along the chain. The min or max over
//! any stretch of the chain then needs only its two endpoints.

use std::collections::HashMap;

use super::{Monitor, MonitorError, Rosi, Stream, Verdict};
use crate::bound::{validate, BoundFormula, NodeId, NodeKind, TimeInterval, ValidationError};
use crate::formula::Formula;
use crate::signal::VarBounds;
use crate::sliding::{AppendRmq, Extremum, RankedWindow, SlidingExtremum, SlidingKth};

/// Rank windows kept per cumulative node.
const RANKER_POOL: usize = 6;

#[derive(Debug, Clone)]
enum Engine {
    Direct,
    Extremum(SlidingExtremum),
    Kth(SlidingKth),
}

#[derive(Debug, Clone)]
struct Ranker {
    window: RankedWindow,
    last_used: u64,
}

impl Ranker {
    /// Inclusive range of final indices held, as `(start, end)`; empty
    /// windows have `end = start - 1`.
    fn range(&self) -> (i64, i64) {
        (
            self.window.first_id() as i64,
            self.window.next_id() as i64 - 1,
        )
    }
}

#[derive(Debug, Clone)]
struct NodeState {
    span: TimeInterval,
    unknown: Rosi,
    finals: AppendRmq,
    engine: Engine,
    /// Child finals consumed by the sliding engine.
    fed: usize,
    chain: i64,
    rankers: Vec<Ranker>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Min,
    Max,
}

impl Mode {
    fn identity(self) -> Rosi {
        match self {
            Mode::Min => Rosi::point(f64::INFINITY),
            Mode::Max => Rosi::point(f64::NEG_INFINITY),
        }
    }

    fn combine(self, a: Rosi, b: Rosi) -> Rosi {
        match self {
            Mode::Min => a.min(b),
            Mode::Max => a.max(b),
        }
    }

    fn opposite(self) -> Mode {
        match self {
            Mode::Min => Mode::Max,
            Mode::Max => Mode::Min,
        }
    }
}

/// Incremental monitor for one formula anchored at `t = 0`.
#[derive(Debug, Clone)]
pub struct MonitorState {
    stream: Stream,
    nodes: Vec<NodeState>,
    memo: HashMap<(usize, usize), Rosi>,
    clock: u64,
}

/// Validates `f` and builds a monitor for it.
pub fn new_monitor(
    f: &Formula,
    schema: &[String],
    step: f64,
    bounds: &VarBounds,
) -> Result<MonitorState, ValidationError> {
    Ok(MonitorState::new(validate(f, schema, step)?, bounds))
}

impl MonitorState {
    pub fn new(formula: BoundFormula, bounds: &VarBounds) -> Self {
        let stream = Stream::new(formula, bounds, Rosi::unbounded());
        let f = &stream.formula;
        let nodes = f
            .nodes()
            .map(|(id, node)| {
                let engine = match node.kind {
                    NodeKind::Eventually(i, _) => {
                        Engine::Extremum(SlidingExtremum::new(i.width(), Extremum::Max))
                    }
                    NodeKind::Always(i, _) => {
                        Engine::Extremum(SlidingExtremum::new(i.width(), Extremum::Min))
                    }
                    NodeKind::Cumulative { interval, k, .. } => {
                        Engine::Kth(SlidingKth::new(k, interval.width()).expect("validated rank"))
                    }
                    _ => Engine::Direct,
                };
                NodeState {
                    span: node.span,
                    unknown: Rosi::from_pair(stream.bounds.unknown(id)),
                    finals: AppendRmq::new(),
                    engine,
                    fed: 0,
                    chain: 0,
                    rankers: Vec::new(),
                }
            })
            .collect();
        let mut m = MonitorState {
            stream,
            nodes,
            memo: HashMap::new(),
            clock: 0,
        };
        m.refresh();
        m.stream.verdict.rosi = m.query(0, 0);
        m
    }

    pub fn formula(&self) -> &BoundFormula {
        &self.stream.formula
    }

    /// Entries of node `id` over its horizon, as `(t, interval)`.
    pub fn worklist(&mut self, id: NodeId) -> Vec<(usize, Rosi)> {
        match self.stream.formula.node(id).horizon {
            Some(h) => (h.lo..=h.hi).map(|t| (t, self.query(id.0, t))).collect(),
            None => Vec::new(),
        }
    }

    /// Entry of node `id` at `t` for the current prefix.
    pub fn entry(&mut self, id: NodeId, t: usize) -> Rosi {
        self.query(id.0, t)
    }

    fn n(&self) -> i64 {
        self.stream.len as i64
    }

    fn final_end(&self, id: usize) -> i64 {
        self.n() - 1 - self.nodes[id].span.hi as i64
    }

    fn unknown_start(&self, id: usize) -> i64 {
        self.n() - self.nodes[id].span.lo as i64
    }

    /// Appends the newly final entries of every node, children first.
    fn advance(&mut self) {
        for id in (0..self.nodes.len()).rev() {
            let target = self.final_end(id);
            let kind = self.stream.formula.kind(NodeId(id));
            let (head, tail) = self.nodes.split_at_mut(id + 1);
            let node = &mut head[id];
            let child = |c: NodeId| &tail[c.0 - id - 1].finals;
            match kind {
                NodeKind::Eventually(i, a)
                | NodeKind::Always(i, a)
                | NodeKind::Cumulative {
                    interval: i,
                    child: a,
                    ..
                } => {
                    let src = child(*a);
                    while i.lo + node.fed < src.len() {
                        let v = src.get(i.lo + node.fed);
                        node.fed += 1;
                        let out = match &mut node.engine {
                            Engine::Extremum(e) => e.push(v),
                            Engine::Kth(e) => e.push(v),
                            Engine::Direct => unreachable!("windowed node has an engine"),
                        };
                        if let Some((t, v)) = out {
                            debug_assert_eq!(t, node.finals.len());
                            node.finals.push(v);
                        }
                    }
                }
                _ => {
                    while (node.finals.len() as i64) <= target {
                        let t = node.finals.len();
                        let v = match kind {
                            NodeKind::True => f64::INFINITY,
                            NodeKind::Atom(atom) => atom.value(self.stream.sample(t)),
                            NodeKind::Not(a) => -child(*a).get(t),
                            NodeKind::And(a, b) => child(*a).get(t).min(child(*b).get(t)),
                            NodeKind::Or(a, b) => child(*a).get(t).max(child(*b).get(t)),
                            NodeKind::Until(i, a, b) => {
                                until_final(child(*a), child(*b), t, i.lo, i.hi)
                            }
                            _ => unreachable!(),
                        };
                        node.finals.push(v);
                    }
                }
            }
        }
    }

    /// Recomputes chain starts and drops memoized partial entries.
    fn refresh(&mut self) {
        self.memo.clear();
        let n = self.n();
        for id in (0..self.nodes.len()).rev() {
            let c = |c: &NodeId| self.nodes[c.0].chain;
            let u_child = |c: &NodeId| n - self.nodes[c.0].span.lo as i64;
            let chain = match self.stream.formula.kind(NodeId(id)) {
                NodeKind::True => 0,
                NodeKind::Atom(_) => n - 1,
                NodeKind::Not(a) => c(a),
                NodeKind::And(a, b) | NodeKind::Or(a, b) => c(a).max(c(b)),
                NodeKind::Eventually(i, a)
                | NodeKind::Always(i, a)
                | NodeKind::Cumulative {
                    interval: i,
                    child: a,
                    ..
                } => (c(a) - i.lo as i64).min(u_child(a) - 1 - i.hi as i64),
                NodeKind::Until(i, a, b) => {
                    if i.hi == 0 {
                        c(b) - i.lo as i64
                    } else {
                        c(a).max(c(b) - i.lo as i64)
                    }
                }
            };
            self.nodes[id].chain = chain.min(self.unknown_start(id));
        }
    }

    fn query(&mut self, id: usize, t: usize) -> Rosi {
        let kind = self.stream.formula.kind(NodeId(id));
        if matches!(kind, NodeKind::True) {
            return Rosi::point(f64::INFINITY);
        }
        let ti = t as i64;
        if ti <= self.final_end(id) {
            return Rosi::point(self.nodes[id].finals.get(t));
        }
        if ti >= self.unknown_start(id) {
            return self.nodes[id].unknown;
        }
        if let Some(r) = self.memo.get(&(id, t)) {
            return *r;
        }
        let r = match *kind {
            NodeKind::Not(a) => -self.query(a.0, t),
            NodeKind::And(a, b) => self.query(a.0, t).min(self.query(b.0, t)),
            NodeKind::Or(a, b) => self.query(a.0, t).max(self.query(b.0, t)),
            NodeKind::Eventually(i, a) => self.range(a.0, t + i.lo, t + i.hi, Mode::Max),
            NodeKind::Always(i, a) => self.range(a.0, t + i.lo, t + i.hi, Mode::Min),
            NodeKind::Until(i, a, b) => self.until_partial(t, i, a.0, b.0),
            NodeKind::Cumulative {
                interval, k, child, ..
            } => self.cumulative_partial(id, t, interval, k, child.0),
            NodeKind::True | NodeKind::Atom(_) => unreachable!("atoms have no partial zone"),
        };
        self.memo.insert((id, t), r);
        r
    }

    /// Min or max of the entries of `id` over `x..=y`.
    fn range(&mut self, id: usize, x: usize, y: usize, mode: Mode) -> Rosi {
        match *self.stream.formula.kind(NodeId(id)) {
            NodeKind::True => return Rosi::point(f64::INFINITY),
            NodeKind::Not(a) => return -self.range(a.0, x, y, mode.opposite()),
            NodeKind::And(a, b) if mode == Mode::Min => {
                return self.range(a.0, x, y, mode).min(self.range(b.0, x, y, mode))
            }
            NodeKind::Or(a, b) if mode == Mode::Max => {
                return self.range(a.0, x, y, mode).max(self.range(b.0, x, y, mode))
            }
            _ => {}
        }
        let (x, y) = (x as i64, y as i64);
        let f = self.final_end(id);
        let u = self.unknown_start(id);
        let mut acc = mode.identity();
        if x <= f {
            let (lo, hi) = self.nodes[id].finals.range(x as usize, y.min(f) as usize);
            let v = if mode == Mode::Min { lo } else { hi };
            acc = mode.combine(acc, Rosi::point(v));
        }
        if y >= u {
            acc = mode.combine(acc, self.nodes[id].unknown);
        }
        let (p0, q) = (x.max(f + 1), y.min(u - 1));
        if p0 > q {
            return acc;
        }
        let c = self.nodes[id].chain;
        for t in p0..=q.min(c - 1) {
            let r = self.query(id, t as usize);
            acc = mode.combine(acc, r);
        }
        let p = p0.max(c);
        if p <= q {
            let first = self.query(id, p as usize);
            let last = self.query(id, q as usize);
            // Along the chain lower bounds fall and upper bounds rise.
            let r = match mode {
                Mode::Min => Rosi::new(last.lb, first.ub),
                Mode::Max => Rosi::new(first.lb, last.ub),
            };
            acc = mode.combine(acc, r);
        }
        acc
    }

    fn until_partial(&mut self, t: usize, i: TimeInterval, a: usize, b: usize) -> Rosi {
        let u2 = self.unknown_start(b);
        let mut best = Rosi::point(f64::NEG_INFINITY);
        let mut prefix = Rosi::point(f64::INFINITY);
        for d in 0..=i.hi {
            let tp = t + d;
            if d >= i.lo {
                let r = self.query(b, tp);
                best = best.max(r.min(prefix));
                // Later right-hand entries repeat this unknown value under a
                // prefix minimum that can only shrink.
                if tp as i64 >= u2 {
                    break;
                }
            }
            if d == i.hi {
                break;
            }
            prefix = prefix.min(self.query(a, tp));
            if prefix.lb <= best.lb && prefix.ub <= best.ub {
                break;
            }
        }
        best
    }

    fn cumulative_partial(
        &mut self,
        id: usize,
        t: usize,
        i: TimeInterval,
        k: usize,
        child: usize,
    ) -> Rosi {
        let (lo, hi) = ((t + i.lo) as i64, (t + i.hi) as i64);
        let fc = self.final_end(child);
        let uc = self.unknown_start(child);
        let mut lbs = Vec::new();
        let mut ubs = Vec::new();
        for s in lo.max(fc + 1)..=hi.min(uc - 1) {
            let r = self.query(child, s as usize);
            lbs.push((r.lb, 1));
            ubs.push((r.ub, 1));
        }
        let m = (hi - lo.max(uc) + 1).max(0) as usize;
        if m > 0 {
            let u = self.nodes[child].unknown;
            lbs.push((u.lb, m));
            ubs.push((u.ub, m));
        }
        lbs.sort_by(|a, b| b.0.total_cmp(&a.0));
        ubs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let a_end = hi.min(fc);
        let known = (a_end - lo + 1).max(0) as usize;
        // The two bounds usually need ranks far apart, so each side picks
        // the pooled window already parked nearest its own rank.
        let mut bound = |runs: &[(f64, usize)], ascending: bool| {
            let mut held: Option<Ranker> = None;
            let v = kth_union(runs, k, ascending, |r| {
                if r == 0 {
                    f64::INFINITY
                } else if r > known {
                    f64::NEG_INFINITY
                } else {
                    held.get_or_insert_with(|| {
                        self.ranker(id, child, lo as usize, a_end as usize, r)
                    })
                    .window
                    .kth_largest(r)
                }
            });
            if let Some(w) = held {
                self.nodes[id].rankers.push(w);
            }
            v
        };
        let lb = bound(&lbs, true);
        let ub = bound(&ubs, false);
        Rosi::new(lb, ub)
    }

    /// Takes a rank window out of the pool of `id`, positioned over child
    /// finals `x..=y` and about to be asked for rank `rank`. The caller
    /// returns it to the pool.
    fn ranker(&mut self, id: usize, child: usize, x: usize, y: usize, rank: usize) -> Ranker {
        self.clock += 1;
        let (xi, yi) = (x as i64, y as i64);
        let reusable = |r: &Ranker| {
            let (s, e) = r.range();
            xi >= s && yi >= e && xi <= e + 1
        };
        let rebuild = (yi - xi + 1) + rank as i64;
        let pool = &mut self.nodes[id].rankers;
        let pool_room = pool.len() < RANKER_POOL;
        let cost = |r: &Ranker| {
            let (s, e) = r.range();
            if reusable(r) {
                (xi - s) + (yi - e) + (r.window.top_len() as i64 - rank as i64).abs()
            } else {
                rebuild
            }
        };
        // A rank far from where a window is parked is paid again on every
        // sample, so while there is room a second window is parked there.
        let far = |r: &Ranker| {
            pool_room && 8 * r.window.top_len().abs_diff(rank) > r.window.len().max(64)
        };
        let best = (0..pool.len())
            .filter(|&j| !far(&pool[j]))
            .min_by_key(|&j| cost(&pool[j]));
        let mut r = match best {
            Some(j) if cost(&pool[j]) < rebuild => pool.swap_remove(j),
            _ if pool.len() < RANKER_POOL => Ranker {
                window: RankedWindow::new(),
                last_used: 0,
            },
            _ => {
                let lru = (0..pool.len())
                    .min_by_key(|&j| pool[j].last_used)
                    .expect("pool is full");
                pool.swap_remove(lru)
            }
        };
        r.last_used = self.clock;
        if !reusable(&r) {
            r.window = RankedWindow::new();
            r.window.reset_at(x as u64);
        }
        let finals = &self.nodes[child].finals;
        while (r.window.first_id() as usize) < x {
            r.window.pop_front();
        }
        while (r.window.next_id() as usize) <= y {
            let idx = r.window.next_id() as usize;
            r.window.push(finals.get(idx));
        }
        r
    }
}

/// k-th largest of `A ∪ B`, where `rank(r)` is the r-th largest of `A` and
/// `B` is given as runs `(value, count)` sorted in decreasing value.
///
/// The answer is `max_j min(B_j, A_{k-j})` over `j` elements taken from `B`,
/// with `X_0 = +inf` and ranks past the end giving `-inf`. Inside a run `B_j`
/// is constant while `A_{k-j}` grows with `j`, so only run ends matter.
/// Scanning up in `j` stops once `B` binds, scanning down once `A` binds;
/// either direction gives the same value.
fn kth_union(
    runs: &[(f64, usize)],
    k: usize,
    ascending: bool,
    mut rank: impl FnMut(usize) -> f64,
) -> f64 {
    if ascending {
        let mut best = rank(k);
        let mut taken = 0;
        for &(v, count) in runs {
            if v <= best || taken >= k {
                break;
            }
            taken = (taken + count).min(k);
            best = best.max(v.min(rank(k - taken)));
        }
        return best;
    }
    let mut ends = vec![(f64::INFINITY, 0)];
    let mut taken = 0;
    for &(v, count) in runs {
        if taken >= k {
            break;
        }
        taken = (taken + count).min(k);
        ends.push((v, taken));
    }
    let mut best = f64::NEG_INFINITY;
    for &(b, j) in ends.iter().rev() {
        if b <= best {
            continue;
        }
        let a = rank(k - j);
        best = best.max(b.min(a));
        if a <= b {
            break;
        }
    }
    best
}

fn until_final(left: &AppendRmq, right: &AppendRmq, t: usize, lo: usize, hi: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut prefix = f64::INFINITY;
    for d in 0..=hi {
        if d >= lo {
            best = best.max(right.get(t + d).min(prefix));
        }
        if d == hi {
            break;
        }
        prefix = prefix.min(left.get(t + d));
        if prefix <= best {
            break;
        }
    }
    best
}

impl Monitor for MonitorState {
    fn push_sample(&mut self, sample: &[f64]) -> Result<Verdict, MonitorError> {
        if self.stream.verdict.is_final() {
            return Ok(self.stream.verdict);
        }
        self.stream.accept(sample)?;
        self.advance();
        self.refresh();
        let root = self.query(0, 0);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Cmp, Interval, Predicate};
    use crate::monitor::{rosi_naive, NaiveMonitor, Outcome};

    const INF: f64 = f64::INFINITY;

    fn nested() -> MonitorState {
        let f = Formula::always(
            Interval::new(0.0, 2.0),
            Formula::cumulative(
                Interval::new(1.0, 5.0),
                3.0,
                Formula::atom(Predicate::simple("x", Cmp::Gt, 0.0)),
            ),
        );
        new_monitor(&f, &["x".to_string()], 1.0, &VarBounds::default()).unwrap()
    }

    fn entries(m: &mut MonitorState, id: usize) -> Vec<Rosi> {
        m.worklist(NodeId(id)).into_iter().map(|(_, r)| r).collect()
    }

    #[test]
    fn nested_run() {
        let mut m = nested();
        assert_eq!(m.root(), Rosi::unbounded());
        for v in [2.0, -1.0, 7.0, 10.0, -5.0] {
            assert_eq!(m.push_sample(&[v]).unwrap().outcome, Outcome::Unknown);
        }
        assert_eq!(
            entries(&mut m, 1),
            vec![
                Rosi::new(-1.0, 7.0),
                Rosi::new(-5.0, 10.0),
                Rosi::unbounded()
            ]
        );
        assert_eq!(m.root(), Rosi::new(-INF, 7.0));

        m.push_sample(&[15.0]).unwrap();
        assert_eq!(
            entries(&mut m, 1),
            vec![
                Rosi::point(7.0),
                Rosi::new(7.0, 10.0),
                Rosi::new(-5.0, 15.0)
            ]
        );
        assert_eq!(m.root(), Rosi::new(-5.0, 7.0));

        let v = m.push_sample(&[8.0]).unwrap();
        assert_eq!(
            entries(&mut m, 1),
            vec![Rosi::point(7.0), Rosi::point(8.0), Rosi::new(8.0, 10.0)]
        );
        assert_eq!(v.outcome, Outcome::True);
        assert_eq!(v.decided_at, Some(6));
        assert_eq!(v.rosi, Rosi::point(7.0));
        // Later samples leave a final verdict untouched.
        assert_eq!(m.push_sample(&[-2.0]).unwrap(), v);
        assert_eq!(m.finalize(), v);
    }

    #[test]
    fn declared_bounds_shape_the_initial_interval() {
        let f = Formula::atom(Predicate::simple("v", Cmp::Le, 2.0));
        let b = VarBounds::default().with("v", 0.0, 2.5).unwrap();
        let m = new_monitor(&f, &["v".to_string()], 1.0, &b).unwrap();
        assert_eq!(m.root(), Rosi::new(-0.5, 2.0));
    }

    #[test]
    fn contradiction_with_point_bounds_decides_on_first_sample() {
        let p = Formula::atom(Predicate::simple("x", Cmp::Ge, 1.0));
        let f = Formula::eventually(
            Interval::new(0.0, 5.0),
            Formula::and(p.clone(), Formula::not(p)),
        );
        let b = VarBounds::default().with("x", 3.0, 3.0).unwrap();
        let mut m = new_monitor(&f, &["x".to_string()], 1.0, &b).unwrap();
        assert_eq!(m.root(), Rosi::point(-2.0));
        let v = m.push_sample(&[3.0]).unwrap();
        assert_eq!((v.outcome, v.decided_at), (Outcome::False, Some(0)));
    }

    #[test]
    fn zero_robustness_falls_back_to_boolean_semantics() {
        let f = Formula::always(
            Interval::new(0.0, 0.0),
            Formula::atom(Predicate::simple("x", Cmp::Ge, 0.0)),
        );
        let mut m = new_monitor(&f, &["x".to_string()], 1.0, &VarBounds::default()).unwrap();
        let v = m.push_sample(&[0.0]).unwrap();
        assert_eq!(v.outcome, Outcome::True);
        assert_eq!(v.rosi, Rosi::point(0.0));

        let strict = Formula::atom(Predicate::simple("x", Cmp::Gt, 0.0));
        let mut m = new_monitor(&strict, &["x".to_string()], 1.0, &VarBounds::default()).unwrap();
        assert_eq!(m.push_sample(&[0.0]).unwrap().outcome, Outcome::False);
    }

    #[test]
    fn stream_ending_early_stays_unknown() {
        let mut m = nested();
        for v in [2.0, -1.0, 7.0] {
            m.push_sample(&[v]).unwrap();
        }
        let v = m.finalize();
        assert_eq!(v.outcome, Outcome::Unknown);
        assert!(!v.rosi.is_point());
        assert_eq!(v.decided_at, None);
    }

    #[test]
    fn rejects_bad_samples() {
        let f = Formula::atom(Predicate::simple("v", Cmp::Le, 2.0));
        let b = VarBounds::default().with("v", 0.0, 2.5).unwrap();
        let mut m = new_monitor(&f, &["v".to_string()], 1.0, &b).unwrap();
        assert!(matches!(
            m.push_sample(&[3.0]),
            Err(MonitorError::OutOfBounds { index: 0, .. })
        ));
        assert!(matches!(
            m.push_sample(&[1.0, 2.0]),
            Err(MonitorError::Signal(_))
        ));
        assert!(matches!(
            m.push_sample(&[f64::NAN]),
            Err(MonitorError::Signal(_))
        ));
        assert_eq!(m.samples_seen(), 0);
    }

    #[test]
    fn agrees_with_naive_on_mixed_formula() {
        let x = |c| Formula::atom(Predicate::simple("x", Cmp::Gt, c));
        let y = |c| Formula::atom(Predicate::simple("y", Cmp::Le, c));
        let f = Formula::or(
            Formula::until(
                Interval::new(1.0, 4.0),
                Formula::not(y(3.0)),
                Formula::cumulative(Interval::new(0.0, 3.0), 2.0, Formula::and(x(0.0), y(5.0))),
            ),
            Formula::eventually(
                Interval::new(2.0, 5.0),
                Formula::always(Interval::new(0.0, 2.0), x(-1.0)),
            ),
        );
        let schema = ["x".to_string(), "y".to_string()];
        let bounds = VarBounds::default().with("y", -10.0, 10.0).unwrap();
        let bound = validate(&f, &schema, 1.0).unwrap();
        let mut m = MonitorState::new(bound.clone(), &bounds);
        let mut naive = NaiveMonitor::new(bound.clone(), &bounds);
        let rows = [
            [1.0, 4.0],
            [-2.0, 6.0],
            [0.5, -1.0],
            [3.0, 9.0],
            [-1.5, 2.0],
            [2.0, 2.0],
            [0.0, -7.0],
            [4.0, 1.0],
            [-3.0, 3.0],
            [1.0, 0.0],
        ];
        let mut data = Vec::new();
        assert_eq!(m.root(), naive.root());
        for row in rows {
            data.extend_from_slice(&row);
            let a = m.push_sample(&row).unwrap();
            let b = naive.push_sample(&row).unwrap();
            assert_eq!(a, b);
            if !a.is_final() {
                assert_eq!(a.rosi, rosi_naive(&bound, &data, 0, &bounds));
            }
        }
    }
}
