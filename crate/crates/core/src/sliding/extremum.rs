use std::collections::VecDeque;

use super::SlidingError;
use crate::bound::TimeInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    /// True when `a` should evict `b` from the back of the deque.
    fn dominates(self, a: f64, b: f64) -> bool {
        match self {
            Extremum::Max => a >= b,
            Extremum::Min => a <= b,
        }
    }
}

/// Monotonic-deque window extremum over the last `w` pushed values.
#[derive(Debug, Clone)]
pub struct SlidingExtremum {
    deque: VecDeque<(usize, f64)>,
    width: usize,
    mode: Extremum,
    pushed: usize,
}

impl SlidingExtremum {
    pub fn new(width: usize, mode: Extremum) -> Self {
        assert!(width >= 1);
        SlidingExtremum {
            deque: VecDeque::new(),
            width,
            mode,
            pushed: 0,
        }
    }

    /// Returns `(window start index, extremum)` once `w` values are buffered.
    pub fn push(&mut self, value: f64) -> Option<(usize, f64)> {
        let idx = self.pushed;
        self.pushed += 1;
        while matches!(self.deque.back(), Some(&(_, b)) if self.mode.dominates(value, b)) {
            self.deque.pop_back();
        }
        self.deque.push_back((idx, value));
        if self.pushed < self.width {
            return None;
        }
        let start = self.pushed - self.width;
        while matches!(self.deque.front(), Some(&(i, _)) if i < start) {
            self.deque.pop_front();
        }
        Some((start, self.deque.front().expect("window is non-empty").1))
    }
}

pub fn sliding_extremum_batch(
    trace: &[f64],
    interval: TimeInterval,
    mode: Extremum,
) -> Result<Vec<(usize, f64)>, SlidingError> {
    if interval.hi >= trace.len() {
        return Err(SlidingError::WindowExceedsTrace {
            hi: interval.hi,
            len: trace.len(),
        });
    }
    let mut engine = SlidingExtremum::new(interval.width(), mode);
    Ok(trace[interval.lo..]
        .iter()
        .filter_map(|&v| engine.push(v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_max() {
        assert_eq!(
            sliding_extremum_batch(&[2.0, -1.0, 7.0], TimeInterval::new(0, 1), Extremum::Max)
                .unwrap(),
            vec![(0, 2.0), (1, 7.0)]
        );
    }

    #[test]
    fn min_is_negated_max() {
        let trace = [3.0, -2.0, 8.0, 8.0, 0.5, -7.0, 1.0];
        let neg: Vec<f64> = trace.iter().map(|v| -v).collect();
        let i = TimeInterval::new(1, 3);
        let min = sliding_extremum_batch(&trace, i, Extremum::Min).unwrap();
        let max = sliding_extremum_batch(&neg, i, Extremum::Max).unwrap();
        let flipped: Vec<_> = max.into_iter().map(|(t, v)| (t, -v)).collect();
        assert_eq!(min, flipped);
    }

    #[test]
    fn infinities_are_ordinary_entries() {
        let trace = [f64::NEG_INFINITY, 1.0, f64::INFINITY, 0.0];
        assert_eq!(
            sliding_extremum_batch(&trace, TimeInterval::new(0, 1), Extremum::Min).unwrap(),
            vec![(0, f64::NEG_INFINITY), (1, 1.0), (2, 0.0)]
        );
    }
}
