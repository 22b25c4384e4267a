/// Append-only array with `O(log n)` range minimum and maximum queries.
#[derive(Debug, Clone, Default)]
pub struct AppendRmq {
    len: usize,
    cap: usize,
    // Segment tree over `cap` leaves; node i holds (min, max) of its range.
    tree: Vec<(f64, f64)>,
}

const EMPTY: (f64, f64) = (f64::INFINITY, f64::NEG_INFINITY);

fn merge(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.min(b.0), a.1.max(b.1))
}

impl AppendRmq {
    pub fn new() -> Self {
        AppendRmq::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> f64 {
        assert!(i < self.len);
        self.tree[self.cap + i].0
    }

    pub fn push(&mut self, v: f64) {
        if self.len == self.cap {
            self.grow();
        }
        let mut i = self.cap + self.len;
        self.len += 1;
        self.tree[i] = (v, v);
        while i > 1 {
            i /= 2;
            self.tree[i] = merge(self.tree[2 * i], self.tree[2 * i + 1]);
        }
    }

    fn grow(&mut self) {
        let cap = (self.cap * 2).max(16);
        let mut tree = vec![EMPTY; 2 * cap];
        for i in 0..self.len {
            tree[cap + i] = self.tree[self.cap + i];
        }
        for i in (1..cap).rev() {
            tree[i] = merge(tree[2 * i], tree[2 * i + 1]);
        }
        self.cap = cap;
        self.tree = tree;
    }

    /// `(min, max)` over indices `lo..=hi`; `(inf, -inf)` when empty.
    pub fn range(&self, lo: usize, hi: usize) -> (f64, f64) {
        if lo > hi || lo >= self.len {
            return EMPTY;
        }
        let hi = hi.min(self.len - 1);
        let mut acc = EMPTY;
        let mut l = lo + self.cap;
        let mut r = hi + self.cap + 1;
        while l < r {
            if l & 1 == 1 {
                acc = merge(acc, self.tree[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc = merge(acc, self.tree[r]);
            }
            l /= 2;
            r /= 2;
        }
        acc
    }
}
