//! Per-peer segment cache: FIFO for derived segments, pinned base segments.

use std::collections::{HashMap, VecDeque};

use tseries_core::{Interval, Segment};

pub type SegmentKey = (String, usize);

#[derive(Debug, Clone)]
pub struct PeerCache {
    capacity: usize,
    queue: VecDeque<SegmentKey>,
    derived: HashMap<SegmentKey, Segment<f64>>,
    base: HashMap<SegmentKey, Segment<f64>>,
}

impl PeerCache {
    pub fn new(capacity: usize) -> PeerCache {
        PeerCache {
            capacity,
            queue: VecDeque::new(),
            derived: HashMap::new(),
            base: HashMap::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Derived segments currently cached.
    pub fn len(&self) -> usize {
        self.derived.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derived.is_empty() && self.base.is_empty()
    }

    /// Base segments are loaded once and never evicted.
    pub fn pin(&mut self, seg: Segment<f64>) {
        self.base
            .insert((seg.series_name().to_string(), seg.index()), seg);
    }

    /// Insert a derived segment. Returns the segments that left the cache:
    /// the previous version under the same key, or the FIFO victim.
    pub fn insert(&mut self, seg: Segment<f64>) -> Vec<Segment<f64>> {
        let key = (seg.series_name().to_string(), seg.index());
        if let Some(old) = self.derived.insert(key.clone(), seg) {
            return vec![old];
        }
        self.queue.push_back(key);
        let mut evicted = Vec::new();
        while self.derived.len() > self.capacity {
            let victim = self.queue.pop_front().expect("queue tracks entries");
            evicted.extend(self.derived.remove(&victim));
        }
        evicted
    }

    /// A segment of `name` whose valid interval is exactly `valid`.
    pub fn find(&self, name: &str, valid: Interval) -> Option<&Segment<f64>> {
        self.segments()
            .find(|s| s.series_name() == name && s.valid() == valid)
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment<f64>> {
        self.base.values().chain(self.derived.values())
    }
}
