//! Abstract syntax of CT-STL formulas as written by the user.
//!
//! Interval endpoints and cumulative thresholds are kept in the signal's time
//! units here. Conversion to sample offsets happens in [`crate::bound`].

use std::fmt;

/// Closed time interval `[lo, hi]` in time units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    /// Strict comparisons are the negation of a non-strict base predicate.
    pub fn is_strict(self) -> bool {
        matches!(self, Cmp::Lt | Cmp::Gt)
    }
}

/// One summand of an affine expression: `coef * var`, or a bare constant
/// when `var` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub var: Option<String>,
}

/// `Σ coef_i · x_i + Σ constants`, kept in the order the user wrote it.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineExpr {
    pub terms: Vec<Term>,
}

impl AffineExpr {
    pub fn var(name: impl Into<String>) -> Self {
        AffineExpr {
            terms: vec![Term {
                coef: 1.0,
                var: Some(name.into()),
            }],
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().filter_map(|t| t.var.as_deref())
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coef.is_sign_negative();
            let magnitude = term.coef.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match &term.var {
                Some(v) if magnitude == 1.0 => write!(f, "{v}")?,
                Some(v) => write!(f, "{magnitude}*{v}")?,
                None => write!(f, "{magnitude}")?,
            }
        }
        Ok(())
    }
}

/// Atomic predicate `lhs cmp rhs`.
///
/// Normalized form: `>=`/`>` give the secondary value `lhs - rhs`, `<=`/`<`
/// give `rhs - lhs`. Non-strict predicates hold when the value is `>= 0`;
/// strict ones are the negation of the opposite non-strict predicate and hold
/// when the value is `> 0`. Robustness is the value in both cases.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub lhs: AffineExpr,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Predicate {
    pub fn new(lhs: AffineExpr, cmp: Cmp, rhs: f64) -> Self {
        Predicate { lhs, cmp, rhs }
    }

    /// Shorthand for the single-variable predicates used throughout tests.
    pub fn simple(var: &str, cmp: Cmp, rhs: f64) -> Self {
        Predicate::new(AffineExpr::var(var), cmp, rhs)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.cmp.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    /// The constant `true`; robustness `+inf`.
    True,
    Atom(Predicate),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Interval, Box<Formula>, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Always(Interval, Box<Formula>),
    /// `C[I]^tau φ`: φ holds for at least `tau` time units within `t + I`.
    Cumulative(Interval, f64, Box<Formula>),
}

impl Formula {
    pub fn atom(p: Predicate) -> Self {
        Formula::Atom(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn until(i: Interval, a: Formula, b: Formula) -> Self {
        Formula::Until(i, Box::new(a), Box::new(b))
    }

    pub fn eventually(i: Interval, f: Formula) -> Self {
        Formula::Eventually(i, Box::new(f))
    }

    pub fn always(i: Interval, f: Formula) -> Self {
        Formula::Always(i, Box::new(f))
    }

    pub fn cumulative(i: Interval, tau: f64, f: Formula) -> Self {
        Formula::Cumulative(i, tau, Box::new(f))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::Atom(_) => vec![],
            Formula::Not(a)
            | Formula::Eventually(_, a)
            | Formula::Always(_, a)
            | Formula::Cumulative(_, _, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => vec![a, b],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Until(..)
        )
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    fn fmt_prefix_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() || matches!(self, Formula::Atom(_)) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Canonical text; `parse(&f.to_string())` rebuilds `f` exactly.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                a.fmt_prefix_operand(f)
            }
            Formula::And(a, b) => {
                a.fmt_operand(f)?;
                f.write_str(" && ")?;
                b.fmt_operand(f)
            }
            Formula::Or(a, b) => {
                a.fmt_operand(f)?;
                f.write_str(" || ")?;
                b.fmt_operand(f)
            }
            Formula::Until(i, a, b) => {
                a.fmt_operand(f)?;
                write!(f, " U{i} ")?;
                b.fmt_operand(f)
            }
            Formula::Eventually(i, a) => {
                write!(f, "F{i} ")?;
                a.fmt_prefix_operand(f)
            }
            Formula::Always(i, a) => {
                write!(f, "G{i} ")?;
                a.fmt_prefix_operand(f)
            }
            Formula::Cumulative(i, tau, a) => {
                write!(f, "C{i}^{tau} ")?;
                a.fmt_prefix_operand(f)
            }
        }
    }
}
