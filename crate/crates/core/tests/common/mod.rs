//! Random formulas and signals shared by the integration suites.
#![allow(dead_code)]

use ctstl::bound::NodeKind;
use ctstl::{
    secondary_signal, AffineExpr, BoundFormula, Cmp, Formula, Interval, Predicate, Signal, Term,
    VarBounds,
};
use rand::seq::IndexedRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 2] = ["x", "y"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn schema() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

fn cmp(r: &mut impl Rng) -> Cmp {
    *[Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge].choose(r).unwrap()
}

pub fn predicate(r: &mut impl Rng) -> Predicate {
    let lhs = match r.random_range(0..4) {
        0 => AffineExpr {
            terms: vec![
                Term {
                    coef: 1.0,
                    var: Some("x".into()),
                },
                Term {
                    coef: r.random_range(-2..=2) as f64,
                    var: Some("y".into()),
                },
            ],
        },
        1 => AffineExpr::var("y"),
        _ => AffineExpr::var("x"),
    };
    Predicate::new(lhs, cmp(r), r.random_range(-3..=3) as f64)
}

fn interval(r: &mut impl Rng, shape: Shape) -> Interval {
    let a = r.random_range(0..=shape.max_lo);
    let b = a + r.random_range(0..=shape.max_extra);
    Interval::new(a as f64, b as f64)
}

/// Interval size limits: `lo <= max_lo`, `hi - lo <= max_extra`.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_lo: usize,
    pub max_extra: usize,
}

pub const SMALL: Shape = Shape {
    max_lo: 3,
    max_extra: 4,
};
pub const WIDE: Shape = Shape {
    max_lo: 6,
    max_extra: 12,
};

/// Random formula of depth at most `depth` (a lone atom has depth 1).
pub fn formula(r: &mut impl Rng, depth: usize) -> Formula {
    formula_with(r, depth, SMALL)
}

pub fn formula_with(r: &mut impl Rng, depth: usize, shape: Shape) -> Formula {
    if depth <= 1 || r.random_bool(0.1) {
        return if r.random_bool(0.05) {
            Formula::True
        } else {
            Formula::atom(predicate(r))
        };
    }
    let d = depth - 1;
    match r.random_range(0..7) {
        0 => Formula::not(formula_with(r, d, shape)),
        1 => Formula::and(formula_with(r, d, shape), formula_with(r, d, shape)),
        2 => Formula::or(formula_with(r, d, shape), formula_with(r, d, shape)),
        3 => Formula::until(
            interval(r, shape),
            formula_with(r, d, shape),
            formula_with(r, d, shape),
        ),
        4 => Formula::eventually(interval(r, shape), formula_with(r, d, shape)),
        5 => Formula::always(interval(r, shape), formula_with(r, d, shape)),
        _ => {
            let i = interval(r, shape);
            let w = (i.hi - i.lo) as usize + 1;
            let k = r.random_range(1..=w) as f64;
            // Fractional thresholds exercise the rank rounding.
            let tau = if r.random_bool(0.3) { k - 0.5 } else { k };
            Formula::cumulative(i, tau, formula_with(r, d, shape))
        }
    }
}

/// Integer-valued two-variable signal.
pub fn signal(r: &mut impl Rng, len: usize, lo: i32, hi: i32) -> Signal {
    let rows = (0..len)
        .map(|_| {
            VARS.iter()
                .map(|_| r.random_range(lo..=hi) as f64)
                .collect()
        })
        .collect();
    Signal::new(schema(), 1.0, rows).unwrap()
}

/// Either no bounds, or ranges that contain every value `signal` can emit.
pub fn bounds(r: &mut impl Rng, lo: i32, hi: i32) -> VarBounds {
    let mut b = VarBounds::default();
    for v in VARS {
        match r.random_range(0..3) {
            0 => {}
            1 => b.set(v, lo as f64, hi as f64).unwrap(),
            _ => b
                .set(v, (lo - r.random_range(0..3)) as f64, f64::INFINITY)
                .unwrap(),
        }
    }
    b
}

pub fn seed_from(r: &mut impl RngCore) -> u64 {
    r.next_u64()
}

/// Shifts every sample so that each predicate's secondary signal moves by
/// strictly less than `budget`.
pub fn perturb(bf: &BoundFormula, sig: &Signal, noise: &[f64], budget: f64) -> Signal {
    let arity = sig.schema().len();
    let rows: Vec<Vec<f64>> = sig
        .samples()
        .enumerate()
        .map(|(t, s)| {
            (0..arity)
                .map(|j| s[j] + noise[(t * arity + j) % noise.len()])
                .collect()
        })
        .collect();
    let raw = Signal::new(sig.schema().to_vec(), sig.step(), rows).unwrap();
    let mut worst: f64 = 0.0;
    for (id, _) in bf.nodes() {
        if let NodeKind::Atom(atom) = bf.kind(id) {
            let a = secondary_signal(&atom.predicate, sig).unwrap();
            let b = secondary_signal(&atom.predicate, &raw).unwrap();
            worst = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(worst, f64::max);
        }
    }
    let s = if worst > 0.0 { budget / worst } else { 0.0 };
    let rows = sig
        .samples()
        .enumerate()
        .map(|(t, x)| {
            (0..arity)
                .map(|j| x[j] + s * noise[(t * arity + j) % noise.len()])
                .collect()
        })
        .collect();
    Signal::new(sig.schema().to_vec(), sig.step(), rows).unwrap()
}
