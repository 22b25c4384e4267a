//! k-th largest over a sliding window with two heaps and lazy deletion.
//!
//! The top heap is a min-heap holding the `r` largest live entries, so its
//! root is the r-th largest. The rest heap is a max-heap holding everything
//! else. Entries carry their arrival id; an entry is dead once its id falls
//! below the id of the oldest live value, and dead entries are discarded when
//! they reach a heap root.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use super::SlidingError;
use crate::bound::TimeInterval;

#[derive(Debug, Clone, Copy)]
struct Key {
    value: f64,
    id: u64,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.id.cmp(&other.id))
    }
}

/// FIFO multiset that answers rank queries. Moving the queried rank by `d`
/// costs `O(d log n)`; pushes and pops are `O(log n)` amortized.
#[derive(Debug, Clone, Default)]
pub struct RankedWindow {
    top: BinaryHeap<Reverse<Key>>,
    rest: BinaryHeap<Key>,
    values: VecDeque<f64>,
    first_id: u64,
    next_id: u64,
    top_live: usize,
}

impl RankedWindow {
    pub fn new() -> Self {
        RankedWindow::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Arrival id the next pushed value will get.
    pub fn next_id(&self) -> u64 {
        self.next_id
    }

    /// Arrival id of the oldest live value.
    pub fn first_id(&self) -> u64 {
        self.first_id
    }

    /// Restarts the id sequence at `id`; the window must be empty.
    pub fn reset_at(&mut self, id: u64) {
        debug_assert!(self.values.is_empty());
        self.top.clear();
        self.rest.clear();
        self.first_id = id;
        self.next_id = id;
        self.top_live = 0;
    }

    pub fn push(&mut self, value: f64) {
        let key = Key {
            value,
            id: self.next_id,
        };
        self.next_id += 1;
        self.values.push_back(value);
        // With an empty top heap the new value may be smaller than entries
        // in the rest heap; the next rank query rebalances.
        match self.top.peek() {
            Some(Reverse(root)) if key >= *root => {
                self.top.push(Reverse(key));
                self.top_live += 1;
            }
            _ => self.rest.push(key),
        }
        self.purge();
    }

    pub fn pop_front(&mut self) -> Option<f64> {
        let value = self.values.pop_front()?;
        let key = Key {
            value,
            id: self.first_id,
        };
        self.first_id += 1;
        match self.top.peek() {
            Some(Reverse(root)) if key >= *root => self.top_live -= 1,
            _ => {}
        }
        self.purge();
        Some(value)
    }

    /// The `r`-th largest live value, `1 <= r <= len`.
    pub fn kth_largest(&mut self, r: usize) -> f64 {
        assert!(
            r >= 1 && r <= self.len(),
            "rank {r} outside 1..={}",
            self.len()
        );
        while self.top_live > r {
            let Reverse(k) = self.top.pop().expect("live entry in top heap");
            self.rest.push(k);
            self.top_live -= 1;
            self.purge();
        }
        while self.top_live < r {
            let k = self.rest.pop().expect("live entry in rest heap");
            self.top.push(Reverse(k));
            self.top_live += 1;
            self.purge();
        }
        self.top.peek().expect("rank >= 1").0.value
    }

    /// Number of live entries currently held in the top heap.
    pub fn top_len(&self) -> usize {
        self.top_live
    }

    fn purge(&mut self) {
        let first = self.first_id;
        while matches!(self.top.peek(), Some(Reverse(k)) if k.id < first) {
            self.top.pop();
        }
        while matches!(self.rest.peek(), Some(k) if k.id < first) {
            self.rest.pop();
        }
        // Dead entries buried below live roots are dropped in bulk once they
        // make up most of the storage.
        let stored = self.top.len() + self.rest.len();
        if stored > 2 * self.values.len() + 64 {
            self.top.retain(|Reverse(k)| k.id >= first);
            self.rest.retain(|k| k.id >= first);
        }
    }
}

/// Streaming k-th largest over the last `w` pushed values.
#[derive(Debug, Clone)]
pub struct SlidingKth {
    window: RankedWindow,
    k: usize,
    width: usize,
    pushed: usize,
}

impl SlidingKth {
    pub fn new(k: usize, width: usize) -> Result<Self, SlidingError> {
        if k == 0 || k > width {
            return Err(SlidingError::RankOutOfRange { k, width });
        }
        Ok(SlidingKth {
            window: RankedWindow::new(),
            k,
            width,
            pushed: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Pushes a value; once `w` values are buffered returns the index of the
    /// first value in the window together with the window's k-th largest.
    pub fn push(&mut self, value: f64) -> Option<(usize, f64)> {
        self.window.push(value);
        self.pushed += 1;
        if self.window.len() > self.width {
            self.window.pop_front();
        }
        if self.window.len() < self.width {
            return None;
        }
        let v = self.window.kth_largest(self.k);
        Some((self.pushed - self.width, v))
    }

    pub fn top_len(&self) -> usize {
        self.window.top_len()
    }

    pub fn live(&self) -> usize {
        self.window.len()
    }
}

/// `(t, k-th largest of trace[t+lo ..= t+hi])` for every `t` whose window
/// fits inside the trace.
pub fn sliding_kth_batch(
    trace: &[f64],
    interval: TimeInterval,
    k: usize,
) -> Result<Vec<(usize, f64)>, SlidingError> {
    if interval.hi >= trace.len() {
        return Err(SlidingError::WindowExceedsTrace {
            hi: interval.hi,
            len: trace.len(),
        });
    }
    let mut engine = SlidingKth::new(k, interval.width())?;
    Ok(trace[interval.lo..]
        .iter()
        .filter_map(|&v| engine.push(v))
        .collect())
}
