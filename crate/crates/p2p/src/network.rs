//! The simulated peer network: ring, DHT, peer caches and loaded base
//! series.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use tseries_core::segment::split;
use tseries_core::{Calendar, Interval, Segment, SegmentSpec, Series};

use crate::cache::PeerCache;
use crate::config::SimConfig;
use crate::dht::{Dht, Entry};
use crate::error::{Result, SimError};
use crate::ring::{hash_key, PeerId, Ring};

#[derive(Debug, Clone)]
pub struct Peer {
    pub id: PeerId,
    pub cache: PeerCache,
}

/// Where the segments of a loaded base series live.
#[derive(Debug, Clone)]
pub struct BaseInfo {
    pub extent: Interval,
    pub calendar: Arc<Calendar>,
    /// Peer (creation index) holding each segment ordinal.
    pub holders: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Network {
    config: SimConfig,
    spec: Option<SegmentSpec>,
    dht: Dht,
    peers: Vec<Peer>,
    bases: BTreeMap<String, BaseInfo>,
    trace: Vec<String>,
    violations: Vec<String>,
}

impl Network {
    pub fn new(config: SimConfig) -> Result<Network> {
        config.validate()?;
        let ring = Ring::new(config.peers, config.m_bits);
        let peers = (0..config.peers)
            .map(|i| Peer {
                id: ring.id_at(ring.position_of(i)),
                cache: PeerCache::new(config.cache_capacity),
            })
            .collect();
        let spec = match config.seg_len {
            Some(len) => Some(SegmentSpec::new(len, config.overlap)?),
            None => None,
        };
        Ok(Network {
            spec,
            dht: Dht::new(ring),
            peers,
            bases: BTreeMap::new(),
            trace: Vec::new(),
            violations: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// Segmentation in use; fixed by the configuration or by the first
    /// loaded series.
    pub fn spec(&self) -> Option<SegmentSpec> {
        self.spec
    }

    pub fn peers(&self) -> &[Peer] {
        &self.peers
    }

    pub fn peer_id(&self, peer: usize) -> PeerId {
        self.peers[peer].id
    }

    pub fn peer_index(&self, id: PeerId) -> usize {
        self.peers
            .iter()
            .position(|p| p.id == id)
            .expect("known peer id")
    }

    pub fn client(&self) -> usize {
        self.config.client
    }

    pub fn dht(&self) -> &Dht {
        &self.dht
    }

    pub fn base(&self, name: &str) -> Option<&BaseInfo> {
        self.bases.get(name)
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<String> {
        std::mem::take(&mut self.trace)
    }

    /// Coherence failures seen so far (only checked when
    /// `check_invariants` is set).
    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    fn log(&mut self, line: impl FnOnce() -> String) {
        if self.config.trace {
            self.trace.push(line());
        }
    }

    fn pos(&self, peer: usize) -> usize {
        self.dht.ring().position_of(peer)
    }

    /// Split `series` and place segment `k` on the `(k + hash(name)) mod P`-th
    /// peer in ring order. Base segments are pinned in their holder's cache.
    pub fn load_base(&mut self, series: &Series) -> Result<()> {
        let name = series.name().to_string();
        if self.bases.contains_key(&name) {
            return Err(SimError::AlreadyLoaded(name));
        }
        let spec = match self.spec {
            Some(spec) => spec,
            None => {
                let len = series.len().div_ceil(self.config.peers);
                let spec = SegmentSpec::new(len, self.config.overlap)?;
                self.spec = Some(spec);
                spec
            }
        };
        let p = self.config.peers;
        let rotation = (hash_key(&name, 64) % p as u64) as usize;
        let mut holders = Vec::new();
        for seg in split(series, spec) {
            let ordinal = seg.index();
            let pos = (ordinal + rotation) % p;
            let peer = self.dht.ring().peer_at(pos);
            holders.resize(ordinal + 1, peer);
            holders[ordinal] = peer;
            let entry = self.entry_for(peer, &seg);
            self.peers[peer].cache.pin(seg);
            let hops = self.dht.put(pos, &name, entry);
            self.log(|| format!("put {name} peer={} [{},{}] hops={hops}", entry.peer, entry.start, entry.end));
            self.check();
        }
        self.bases.insert(
            name,
            BaseInfo {
                extent: series.interval(),
                calendar: series.calendar().clone(),
                holders,
            },
        );
        Ok(())
    }

    fn entry_for(&self, peer: usize, seg: &Segment<f64>) -> Entry {
        Entry {
            peer: self.peers[peer].id,
            start: seg.valid().start,
            end: seg.valid().end,
        }
    }

    /// DHT lookup issued by `from`; returns the entries and the hop count.
    pub fn lookup(&mut self, from: usize, key: &str) -> (Vec<Entry>, u32) {
        let (entries, hops) = self.dht.lookup(self.pos(from), key);
        let id = self.peers[from].id;
        let found = entries.len();
        self.log(|| format!("lookup {key} from={id} hops={hops} entries={found}"));
        (entries, hops)
    }

    /// Cache `seg` at `peer` and advertise it. Segments pushed out of the
    /// cache are withdrawn from the DHT unless an identical copy remains.
    pub fn publish(&mut self, peer: usize, seg: Segment<f64>) {
        let name = seg.series_name().to_string();
        let entry = self.entry_for(peer, &seg);
        let from = self.pos(peer);
        for old in self.peers[peer].cache.insert(seg) {
            let old_entry = self.entry_for(peer, &old);
            if self.peers[peer]
                .cache
                .find(old.series_name(), old.valid())
                .is_none()
            {
                let hops = self.dht.remove(from, old.series_name(), old_entry);
                self.log(|| {
                    format!(
                        "remove {} peer={} [{},{}] hops={hops}",
                        old.series_name(),
                        old_entry.peer,
                        old_entry.start,
                        old_entry.end
                    )
                });
            }
        }
        let hops = self.dht.put(from, &name, entry);
        self.log(|| format!("put {name} peer={} [{},{}] hops={hops}", entry.peer, entry.start, entry.end));
        self.check();
    }

    /// The segment behind `entry`, read from its peer's cache.
    pub fn fetch(&self, key: &str, entry: &Entry) -> Option<Segment<f64>> {
        let peer = self.peer_index(entry.peer);
        self.peers[peer]
            .cache
            .find(key, Interval {
                start: entry.start,
                end: entry.end,
            })
            .cloned()
    }

    pub(crate) fn note_task(&mut self, peer: usize, what: impl FnOnce() -> String) {
        let id = self.peers[peer].id;
        self.log(|| format!("task peer={id} {}", what()));
    }

    /// DHT entries equal the union of what the peers cache.
    pub fn check_coherence(&self) -> std::result::Result<(), String> {
        let advertised: BTreeSet<(String, Entry)> = self.dht.all_entries().into_iter().collect();
        let cached: BTreeSet<(String, Entry)> = self
            .peers
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                p.cache
                    .segments()
                    .map(move |s| (s.series_name().to_string(), self.entry_for(i, s)))
            })
            .collect();
        if advertised == cached {
            return Ok(());
        }
        let stale: Vec<_> = advertised.difference(&cached).take(3).collect();
        let hidden: Vec<_> = cached.difference(&advertised).take(3).collect();
        Err(format!("advertised but not cached: {stale:?}; cached but not advertised: {hidden:?}"))
    }

    fn check(&mut self) {
        if self.config.check_invariants {
            if let Err(e) = self.check_coherence() {
                self.violations.push(e);
            }
        }
    }
}
