//! Distributed hash table over the ring: each key's record lives at the
//! successor of its hash.

use std::collections::BTreeMap;

use crate::ring::{PeerId, Ring};

/// One advertised piece of a series: `peer` holds `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub peer: PeerId,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct Dht {
    ring: Ring,
    /// Records stored at each ring position.
    stores: Vec<BTreeMap<String, Vec<Entry>>>,
}

impl Dht {
    pub fn new(ring: Ring) -> Dht {
        let stores = vec![BTreeMap::new(); ring.len()];
        Dht { ring, stores }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    fn route(&self, from: usize, key: &str) -> (usize, u32) {
        self.ring.find_successor(from, self.ring.key_id(key))
    }

    /// Ring position responsible for `key`.
    pub fn owner(&self, key: &str) -> usize {
        self.ring.successor_of(self.ring.key_id(key))
    }

    /// Append `entry` to the record of `key` unless already present.
    /// Returns the routing hop count from ring position `from`.
    pub fn put(&mut self, from: usize, key: &str, entry: Entry) -> u32 {
        let (owner, hops) = self.route(from, key);
        let list = self.stores[owner].entry(key.to_string()).or_default();
        if !list.contains(&entry) {
            list.push(entry);
        }
        hops
    }

    pub fn lookup(&self, from: usize, key: &str) -> (Vec<Entry>, u32) {
        let (owner, hops) = self.route(from, key);
        let entries = self.stores[owner].get(key).cloned().unwrap_or_default();
        (entries, hops)
    }

    /// Remove `entry`; the key disappears with its last entry. Removing an
    /// absent entry does nothing.
    pub fn remove(&mut self, from: usize, key: &str, entry: Entry) -> u32 {
        let (owner, hops) = self.route(from, key);
        if let Some(list) = self.stores[owner].get_mut(key) {
            list.retain(|e| *e != entry);
            if list.is_empty() {
                self.stores[owner].remove(key);
            }
        }
        hops
    }

    /// Every `(key, entry)` pair, sorted.
    pub fn all_entries(&self) -> Vec<(String, Entry)> {
        let mut out: Vec<(String, Entry)> = self
            .stores
            .iter()
            .flat_map(|s| {
                s.iter()
                    .flat_map(|(k, list)| list.iter().map(move |e| (k.clone(), *e)))
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_empty(&self) -> bool {
        self.stores.iter().all(BTreeMap::is_empty)
    }
}
