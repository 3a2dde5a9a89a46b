use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{recurrence_step, stirling2_triangle, Triangle};

/// Memo of computed triangles keyed by `(n_max, order)`.
///
/// Higher orders are built from the largest cached lower order with the same
/// `n_max`, and every intermediate order is kept.
#[derive(Debug, Default)]
pub struct TriangleCache {
    entries: Mutex<HashMap<(usize, usize), Arc<Triangle>>>,
}

static GLOBAL: OnceLock<TriangleCache> = OnceLock::new();

/// The process-wide cache used by the convenience functions in this crate.
pub fn global_cache() -> &'static TriangleCache {
    GLOBAL.get_or_init(TriangleCache::default)
}

impl TriangleCache {
    pub fn new() -> TriangleCache {
        TriangleCache::default()
    }

    /// `S^(m)` over `0..=n_max`.
    pub fn get(&self, n_max: usize, m: usize) -> Arc<Triangle> {
        if let Some(t) = self.lookup(n_max, m) {
            return t;
        }
        if m == 0 {
            return self.insert(Triangle::identity(n_max));
        }
        let base = match self.lookup(n_max, 1) {
            Some(b) => b,
            None => self.insert(stirling2_triangle(n_max)),
        };
        let mut start = base.clone();
        {
            let map = self.entries.lock().unwrap();
            for j in (2..m).rev() {
                if let Some(t) = map.get(&(n_max, j)) {
                    start = t.clone();
                    break;
                }
            }
        }
        let mut cur = start;
        while cur.order() < m {
            cur = self.insert(recurrence_step(&cur, &base));
        }
        cur
    }

    pub fn lookup(&self, n_max: usize, m: usize) -> Option<Arc<Triangle>> {
        self.entries.lock().unwrap().get(&(n_max, m)).cloned()
    }

    /// Stores a triangle; an existing entry under the same key wins.
    pub fn insert(&self, t: Triangle) -> Arc<Triangle> {
        let key = (t.n_max(), t.order());
        let mut map = self.entries.lock().unwrap();
        map.entry(key).or_insert_with(|| Arc::new(t)).clone()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::{higher_stirling, StirlingMethod};

    #[test]
    fn cached_orders_match_direct_computation() {
        let cache = TriangleCache::new();
        let t5 = cache.get(6, 5);
        assert_eq!(*t5, higher_stirling(6, 5, StirlingMethod::MatrixPower));
        // orders 1..=5 are all retained
        assert_eq!(cache.len(), 5);
        let t3 = cache.get(6, 3);
        assert_eq!(*t3, higher_stirling(6, 3, StirlingMethod::Recurrence));
        assert_eq!(cache.len(), 5);
        let t7 = cache.get(6, 7);
        assert_eq!(*t7, higher_stirling(6, 7, StirlingMethod::BinaryPower));
    }

    #[test]
    fn order_zero_is_identity() {
        let cache = TriangleCache::new();
        assert_eq!(*cache.get(4, 0), Triangle::identity(4));
    }

    #[test]
    fn concurrent_requests_agree() {
        let cache = Arc::new(TriangleCache::new());
        let handles: Vec<_> = (1..=6)
            .map(|m| {
                let c = cache.clone();
                std::thread::spawn(move || (m, c.get(7, m)))
            })
            .collect();
        for h in handles {
            let (m, t) = h.join().unwrap();
            assert_eq!(*t, higher_stirling(7, m, StirlingMethod::MatrixPower));
        }
    }
}
