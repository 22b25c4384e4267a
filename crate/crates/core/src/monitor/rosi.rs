use std::fmt;
use std::ops::Neg;

use crate::sliding::SlidingError;

/// Robust satisfaction interval: every completion of the observed prefix has
/// robustness in `[lb, ub]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rosi {
    pub lb: f64,
    pub ub: f64,
}

impl Rosi {
    pub fn new(lb: f64, ub: f64) -> Self {
        debug_assert!(lb <= ub, "inverted interval [{lb}, {ub}]");
        Rosi { lb, ub }
    }

    pub fn point(v: f64) -> Self {
        Rosi { lb: v, ub: v }
    }

    pub fn unbounded() -> Self {
        Rosi::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub(crate) fn from_pair((lb, ub): (f64, f64)) -> Self {
        Rosi { lb, ub }
    }

    pub fn is_point(&self) -> bool {
        self.lb == self.ub
    }

    /// True when `other` lies inside `self`.
    pub fn contains(&self, other: &Rosi) -> bool {
        self.lb <= other.lb && other.ub <= self.ub
    }

    pub fn contains_value(&self, v: f64) -> bool {
        self.lb <= v && v <= self.ub
    }

    pub fn min(self, o: Rosi) -> Rosi {
        Rosi {
            lb: self.lb.min(o.lb),
            ub: self.ub.min(o.ub),
        }
    }

    pub fn max(self, o: Rosi) -> Rosi {
        Rosi {
            lb: self.lb.max(o.lb),
            ub: self.ub.max(o.ub),
        }
    }
}

impl Neg for Rosi {
    type Output = Rosi;

    fn neg(self) -> Rosi {
        Rosi {
            lb: -self.ub,
            ub: -self.lb,
        }
    }
}

impl fmt::Display for Rosi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lb, self.ub)
    }
}

pub fn rosi_neg(a: Rosi) -> Rosi {
    -a
}

pub fn rosi_min(a: Rosi, b: Rosi) -> Rosi {
    a.min(b)
}

pub fn rosi_max(a: Rosi, b: Rosi) -> Rosi {
    a.max(b)
}

/// Componentwise k-th largest: `(k-th largest lb, k-th largest ub)`.
pub fn rosi_max_tau(windows: &[Rosi], k: usize) -> Result<Rosi, SlidingError> {
    if k == 0 || k > windows.len() {
        return Err(SlidingError::RankOutOfRange {
            k,
            width: windows.len(),
        });
    }
    let kth = |mut v: Vec<f64>| {
        v.sort_by(|a, b| b.total_cmp(a));
        v[k - 1]
    };
    Ok(Rosi {
        lb: kth(windows.iter().map(|r| r.lb).collect()),
        ub: kth(windows.iter().map(|r| r.ub).collect()),
    })
}
