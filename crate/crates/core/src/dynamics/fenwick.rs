//! Binary indexed tree over non-negative site rates.

#[derive(Debug, Clone)]
pub(crate) struct RateTree {
    tree: Vec<f64>,
    values: Vec<f64>,
    positive: usize,
    updates: usize,
}

/// Rebuild from the stored values after this many point updates so that
/// rounding errors in the partial sums cannot accumulate.
const REBUILD_EVERY: usize = 1 << 20;

impl RateTree {
    pub fn new(values: Vec<f64>) -> Self {
        let mut out = Self {
            tree: vec![0.0; values.len() + 1],
            positive: values.iter().filter(|&&v| v > 0.0).count(),
            values,
            updates: 0,
        };
        out.rebuild();
        out
    }

    fn rebuild(&mut self) {
        let n = self.values.len();
        self.tree.iter_mut().for_each(|t| *t = 0.0);
        for i in 1..=n {
            self.tree[i] += self.values[i - 1];
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                self.tree[parent] += self.tree[i];
            }
        }
        self.updates = 0;
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Number of entries with a strictly positive rate.
    #[inline]
    pub fn positive(&self) -> usize {
        self.positive
    }

    pub fn set(&mut self, i: usize, value: f64) {
        let old = self.values[i];
        if old == value {
            return;
        }
        match (old > 0.0, value > 0.0) {
            (false, true) => self.positive += 1,
            (true, false) => self.positive -= 1,
            _ => {}
        }
        self.values[i] = value;
        let delta = value - old;
        let n = self.values.len();
        let mut k = i + 1;
        while k <= n {
            self.tree[k] += delta;
            k += k & k.wrapping_neg();
        }
        self.updates += 1;
        if self.updates >= REBUILD_EVERY {
            self.rebuild();
        }
    }

    pub fn total(&self) -> f64 {
        let mut k = self.values.len();
        let mut sum = 0.0;
        while k > 0 {
            sum += self.tree[k];
            k -= k & k.wrapping_neg();
        }
        sum.max(0.0)
    }

    /// Index `i` such that the prefix sum through `i - 1` is at most `target`
    /// and the prefix sum through `i` exceeds it. Only entries with positive
    /// rate are ever returned.
    pub fn find(&self, target: f64) -> usize {
        let n = self.values.len();
        let mut pos = 0;
        let mut rem = target;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        if pos < n && self.values[pos] > 0.0 {
            return pos;
        }
        self.find_exact(target)
    }

    /// Linear fallback for targets that land on a zero-rate entry through
    /// rounding in the partial sums.
    fn find_exact(&self, target: f64) -> usize {
        let mut acc = 0.0;
        let mut last = None;
        for (i, &v) in self.values.iter().enumerate() {
            if v > 0.0 {
                acc += v;
                last = Some(i);
                if acc > target {
                    return i;
                }
            }
        }
        last.expect("find called on a tree without positive entries")
    }
}
