//! Formulas bound to a signal schema and sampling step.
//!
//! Binding resolves variable names to column indices, converts interval
//! endpoints from time units to sample offsets, derives the integer rank
//! `k = ceil(tau / step)` of every cumulative node, and precomputes the
//! per-node horizons the evaluators and monitors rely on.

use std::fmt;

use thiserror::Error;

use crate::formula::{Cmp, Formula, Interval, Predicate};
use crate::signal::{check_schema, check_step, SignalError, VarBounds};

/// Closed interval of sample offsets. Width counts sampled instants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeInterval {
    pub lo: usize,
    pub hi: usize,
}

impl TimeInterval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "interval [{lo},{hi}] is inverted");
        TimeInterval { lo, hi }
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn shift(&self, by: TimeInterval) -> TimeInterval {
        TimeInterval::new(self.lo + by.lo, self.hi + by.hi)
    }

    pub fn contains(&self, t: usize) -> bool {
        self.lo <= t && t <= self.hi
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ValidationError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("predicate `{0}` references no variable")]
    ConstantPredicate(String),
    #[error("cumulative threshold must be positive, got {0}")]
    NonPositiveTau(f64),
    #[error("node {node}: threshold {tau} exceeds window length {limit}")]
    TauOutOfRange { node: NodeId, tau: f64, limit: f64 },
    #[error("interval {0} is invalid (endpoints must be finite, non-negative, lo <= hi)")]
    InvalidInterval(Interval),
    #[error("interval endpoint {value} is not a multiple of the step {step}")]
    NonIntegralBound { value: f64, step: f64 },
    #[error("predicate constant in `{0}` is not finite")]
    NonFiniteConstant(String),
}

/// Atomic predicate with variables resolved to schema columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundAtom {
    pub predicate: Predicate,
    /// `(column, coefficient)`; `None` column marks a constant term.
    terms: Vec<(Option<usize>, f64)>,
}

impl BoundAtom {
    fn lhs(&self, sample: &[f64]) -> f64 {
        let mut acc = 0.0;
        for &(col, coef) in &self.terms {
            acc += match col {
                _ if coef == 0.0 => 0.0,
                Some(c) => coef * sample[c],
                None => coef,
            };
        }
        acc
    }

    fn orient(&self, lhs: f64) -> f64 {
        match self.predicate.cmp {
            Cmp::Ge | Cmp::Gt => lhs - self.predicate.rhs,
            Cmp::Le | Cmp::Lt => self.predicate.rhs - lhs,
        }
    }

    /// Secondary-signal value `mu(x) - c` in normalized orientation; this is
    /// the robustness of the predicate at the sample.
    pub fn value(&self, sample: &[f64]) -> f64 {
        self.orient(self.lhs(sample))
    }

    pub fn holds(&self, sample: &[f64]) -> bool {
        let v = self.value(sample);
        if self.predicate.cmp.is_strict() {
            v > 0.0
        } else {
            v >= 0.0
        }
    }

    /// Infimum and supremum of [`value`](Self::value) over the box of
    /// variable ranges. The summation order matches `value`, so rounding
    /// keeps every in-range sample inside the returned pair.
    pub fn value_range(&self, columns: &[(f64, f64)]) -> (f64, f64) {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for &(col, coef) in &self.terms {
            let (a, b) = match col {
                _ if coef == 0.0 => (0.0, 0.0),
                Some(c) => {
                    let (vl, vh) = columns[c];
                    if coef > 0.0 {
                        (coef * vl, coef * vh)
                    } else {
                        (coef * vh, coef * vl)
                    }
                }
                None => (coef, coef),
            };
            lo += a;
            hi += b;
        }
        match self.predicate.cmp {
            Cmp::Ge | Cmp::Gt => (self.orient(lo), self.orient(hi)),
            Cmp::Le | Cmp::Lt => (self.orient(hi), self.orient(lo)),
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().filter_map(|&(c, _)| c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    True,
    Atom(BoundAtom),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Until(TimeInterval, NodeId, NodeId),
    Eventually(TimeInterval, NodeId),
    Always(TimeInterval, NodeId),
    Cumulative {
        interval: TimeInterval,
        tau: f64,
        /// Effective rank, `ceil(tau / step)`.
        k: usize,
        child: NodeId,
    },
}

impl NodeKind {
    pub fn children(&self) -> Vec<NodeId> {
        match *self {
            NodeKind::True | NodeKind::Atom(_) => vec![],
            NodeKind::Not(a)
            | NodeKind::Eventually(_, a)
            | NodeKind::Always(_, a)
            | NodeKind::Cumulative { child: a, .. } => vec![a],
            NodeKind::And(a, b) | NodeKind::Or(a, b) | NodeKind::Until(_, a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    /// Offsets `[lo, hi]`, relative to the evaluation instant, of the samples
    /// this subformula reads.
    pub span: TimeInterval,
    /// Instants at which this node is needed to evaluate the root at 0.
    /// `None` for the left operand of an `U[a,0]`, which is never read.
    pub horizon: Option<TimeInterval>,
}

/// A formula validated against a schema and step. Nodes are stored in
/// pre-order, so the root is `NodeId(0)` and every child has a larger id than
/// its parent.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundFormula {
    source: Formula,
    schema: Vec<String>,
    step: f64,
    nodes: Vec<Node>,
}

const SNAP_TOL: f64 = 1e-9;

fn snap(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= SNAP_TOL * r.abs().max(1.0)).then_some(r)
}

/// Converts a time-unit interval to sample offsets.
pub fn to_samples(i: Interval, step: f64) -> Result<TimeInterval, ValidationError> {
    if !(i.lo.is_finite() && i.hi.is_finite() && i.lo >= 0.0 && i.lo <= i.hi) {
        return Err(ValidationError::InvalidInterval(i));
    }
    let conv = |v: f64| snap(v / step).ok_or(ValidationError::NonIntegralBound { value: v, step });
    Ok(TimeInterval::new(
        conv(i.lo)? as usize,
        conv(i.hi)? as usize,
    ))
}

/// `ceil(tau / step)`, tolerating representation error when the quotient is
/// an integer up to rounding.
pub fn rank_for(tau: f64, step: f64) -> usize {
    let q = tau / step;
    snap(q).unwrap_or_else(|| q.ceil()) as usize
}

pub fn validate(
    f: &Formula,
    schema: &[String],
    step: f64,
) -> Result<BoundFormula, ValidationError> {
    check_schema(schema)?;
    check_step(step)?;
    let mut nodes = Vec::new();
    lower(f, schema, step, &mut nodes)?;
    let mut bound = BoundFormula {
        source: f.clone(),
        schema: schema.to_vec(),
        step,
        nodes,
    };
    bound.assign_horizons();
    Ok(bound)
}

fn placeholder() -> Node {
    Node {
        kind: NodeKind::True,
        span: TimeInterval::new(0, 0),
        horizon: None,
    }
}

fn lower(
    f: &Formula,
    schema: &[String],
    step: f64,
    nodes: &mut Vec<Node>,
) -> Result<NodeId, ValidationError> {
    let id = NodeId(nodes.len());
    nodes.push(placeholder());
    let sub = |g: &Formula, nodes: &mut Vec<Node>| lower(g, schema, step, nodes);
    let kind = match f {
        Formula::True => NodeKind::True,
        Formula::Atom(p) => NodeKind::Atom(bind_atom(p, schema)?),
        Formula::Not(a) => NodeKind::Not(sub(a, nodes)?),
        Formula::And(a, b) => {
            let a = sub(a, nodes)?;
            NodeKind::And(a, sub(b, nodes)?)
        }
        Formula::Or(a, b) => {
            let a = sub(a, nodes)?;
            NodeKind::Or(a, sub(b, nodes)?)
        }
        Formula::Until(i, a, b) => {
            let i = to_samples(*i, step)?;
            let a = sub(a, nodes)?;
            NodeKind::Until(i, a, sub(b, nodes)?)
        }
        Formula::Eventually(i, a) => NodeKind::Eventually(to_samples(*i, step)?, sub(a, nodes)?),
        Formula::Always(i, a) => NodeKind::Always(to_samples(*i, step)?, sub(a, nodes)?),
        Formula::Cumulative(i, tau, a) => {
            let interval = to_samples(*i, step)?;
            if *tau <= 0.0 || !tau.is_finite() {
                return Err(ValidationError::NonPositiveTau(*tau));
            }
            let k = rank_for(*tau, step);
            if k > interval.width() {
                return Err(ValidationError::TauOutOfRange {
                    node: id,
                    tau: *tau,
                    limit: interval.width() as f64 * step,
                });
            }
            NodeKind::Cumulative {
                interval,
                tau: *tau,
                k,
                child: sub(a, nodes)?,
            }
        }
    };
    let span = match &kind {
        NodeKind::True | NodeKind::Atom(_) => TimeInterval::new(0, 0),
        NodeKind::Not(a) => nodes[a.0].span,
        NodeKind::And(a, b) | NodeKind::Or(a, b) => {
            let (sa, sb) = (nodes[a.0].span, nodes[b.0].span);
            TimeInterval::new(sa.lo.min(sb.lo), sa.hi.max(sb.hi))
        }
        NodeKind::Eventually(i, a) | NodeKind::Always(i, a) => nodes[a.0].span.shift(*i),
        NodeKind::Cumulative {
            interval, child, ..
        } => nodes[child.0].span.shift(*interval),
        NodeKind::Until(i, a, b) => {
            let right = nodes[b.0].span.shift(*i);
            if i.hi == 0 {
                right
            } else {
                let left = nodes[a.0].span.shift(TimeInterval::new(0, i.hi - 1));
                TimeInterval::new(left.lo.min(right.lo), left.hi.max(right.hi))
            }
        }
    };
    nodes[id.0] = Node {
        kind,
        span,
        horizon: None,
    };
    Ok(id)
}

fn bind_atom(p: &Predicate, schema: &[String]) -> Result<BoundAtom, ValidationError> {
    if !p.rhs.is_finite() || p.lhs.terms.iter().any(|t| !t.coef.is_finite()) {
        return Err(ValidationError::NonFiniteConstant(p.to_string()));
    }
    let mut terms = Vec::with_capacity(p.lhs.terms.len());
    for t in &p.lhs.terms {
        let col = match &t.var {
            Some(v) => Some(
                schema
                    .iter()
                    .position(|s| s == v)
                    .ok_or_else(|| ValidationError::UnknownVariable(v.clone()))?,
            ),
            None => None,
        };
        terms.push((col, t.coef));
    }
    if terms.iter().all(|(c, _)| c.is_none()) {
        return Err(ValidationError::ConstantPredicate(p.to_string()));
    }
    Ok(BoundAtom {
        predicate: p.clone(),
        terms,
    })
}

impl BoundFormula {
    fn assign_horizons(&mut self) {
        self.nodes[0].horizon = Some(TimeInterval::new(0, 0));
        for id in 0..self.nodes.len() {
            let Some(h) = self.nodes[id].horizon else {
                continue;
            };
            let kind = self.nodes[id].kind.clone();
            match kind {
                NodeKind::True | NodeKind::Atom(_) => {}
                NodeKind::Not(a) => self.nodes[a.0].horizon = Some(h),
                NodeKind::And(a, b) | NodeKind::Or(a, b) => {
                    self.nodes[a.0].horizon = Some(h);
                    self.nodes[b.0].horizon = Some(h);
                }
                NodeKind::Eventually(i, a) | NodeKind::Always(i, a) => {
                    self.nodes[a.0].horizon = Some(h.shift(i))
                }
                NodeKind::Cumulative {
                    interval, child, ..
                } => self.nodes[child.0].horizon = Some(h.shift(interval)),
                NodeKind::Until(i, a, b) => {
                    self.nodes[b.0].horizon = Some(h.shift(i));
                    self.nodes[a.0].horizon =
                        (i.hi > 0).then(|| h.shift(TimeInterval::new(0, i.hi - 1)));
                }
            }
        }
    }

    /// The formula this was bound from.
    pub fn formula(&self) -> &Formula {
        &self.source
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn kind(&self, id: NodeId) -> &NodeKind {
        &self.nodes[id.0].kind
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    /// Largest sample index read when the root is evaluated at `t = 0`.
    pub fn horizon(&self) -> usize {
        self.nodes[0].span.hi
    }

    pub fn node_horizons(&self) -> Vec<Option<TimeInterval>> {
        self.nodes.iter().map(|n| n.horizon).collect()
    }

    /// Per-node `(inf, sup)` of the node's value when nothing is known,
    /// derived for atoms from the variable ranges. Non-atom entries hold the
    /// all-unknown interval of that node.
    pub fn predicate_bounds(&self, bounds: &VarBounds) -> PredicateBounds {
        let columns: Vec<(f64, f64)> = self.schema.iter().map(|v| bounds.get(v)).collect();
        let mut out = vec![(f64::NEG_INFINITY, f64::INFINITY); self.nodes.len()];
        for id in (0..self.nodes.len()).rev() {
            out[id] = match &self.nodes[id].kind {
                NodeKind::True => (f64::INFINITY, f64::INFINITY),
                NodeKind::Atom(a) => a.value_range(&columns),
                NodeKind::Not(a) => {
                    let (l, u) = out[a.0];
                    (-u, -l)
                }
                NodeKind::And(a, b) => (out[a.0].0.min(out[b.0].0), out[a.0].1.min(out[b.0].1)),
                NodeKind::Or(a, b) => (out[a.0].0.max(out[b.0].0), out[a.0].1.max(out[b.0].1)),
                NodeKind::Eventually(_, a) | NodeKind::Always(_, a) => out[a.0],
                NodeKind::Cumulative { child, .. } => out[child.0],
                NodeKind::Until(i, a, b) => {
                    if i.lo == 0 {
                        out[b.0]
                    } else {
                        (out[a.0].0.min(out[b.0].0), out[a.0].1.min(out[b.0].1))
                    }
                }
            };
        }
        PredicateBounds {
            columns,
            unknown: out,
        }
    }
}

/// Value ranges for unknown future samples: per column, and per node the
/// interval that node takes when every sample it reads is unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateBounds {
    columns: Vec<(f64, f64)>,
    unknown: Vec<(f64, f64)>,
}

impl PredicateBounds {
    pub fn unknown(&self, id: NodeId) -> (f64, f64) {
        self.unknown[id.0]
    }

    pub fn column(&self, c: usize) -> (f64, f64) {
        self.columns[c]
    }

    /// Column of the first value outside its declared range, if any.
    pub fn violation(&self, sample: &[f64]) -> Option<usize> {
        sample
            .iter()
            .zip(&self.columns)
            .position(|(v, (lo, hi))| v < lo || v > hi)
    }
}
