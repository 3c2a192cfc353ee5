//! Simulation constants, loadable from TOML.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use tseries_core::expr::Op;

use crate::error::{Result, SimError};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub peers: usize,
    /// Identifier bits of the ring.
    pub m_bits: u32,
    /// Segment length; `None` splits the series evenly over the peers.
    pub seg_len: Option<usize>,
    pub overlap: usize,
    /// Derived segments each peer keeps.
    pub cache_capacity: usize,
    pub seed: u64,
    /// Creation index of the peer issuing queries.
    pub client: usize,
    /// Fixed part of a DHT lookup, ms.
    pub lookup_base_ms: f64,
    /// Added per routing hop, ms.
    pub hop_ms: f64,
    /// Per-entry compute cost of each operator, ms. Missing operators use
    /// `default_c_op`.
    pub c_op: BTreeMap<String, f64>,
    pub default_c_op: f64,
    pub bandwidth_bytes_per_ms: f64,
    pub t_q_ms: f64,
    /// Compute segments on a thread pool.
    pub concurrent: bool,
    /// Check DHT/cache coherence after every event.
    pub check_invariants: bool,
    /// Record one line per DHT operation and peer task.
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            peers: 8,
            m_bits: 32,
            seg_len: None,
            overlap: 128,
            cache_capacity: 1024,
            seed: 0,
            client: 0,
            lookup_base_ms: 5.5,
            hop_ms: 1.0,
            c_op: BTreeMap::new(),
            default_c_op: 0.02,
            bandwidth_bytes_per_ms: 125_000.0,
            t_q_ms: 0.5,
            concurrent: false,
            check_invariants: false,
            trace: false,
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<SimConfig> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<SimConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
        SimConfig::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(SimError::Config(m.to_string()));
        if self.peers == 0 {
            return fail("peers must be >= 1");
        }
        if !(1..=64).contains(&self.m_bits) {
            return fail("m_bits must be in 1..=64");
        }
        if self.m_bits < 64 && (self.peers as u128) > 1u128 << self.m_bits {
            return fail("more peers than ring identifiers");
        }
        if self.cache_capacity == 0 {
            return fail("cache_capacity must be >= 1");
        }
        if self.client >= self.peers {
            return fail("client must name an existing peer");
        }
        if self.seg_len.is_some_and(|l| self.overlap >= l) {
            return fail("overlap must be smaller than seg_len");
        }
        if !(self.bandwidth_bytes_per_ms > 0.0) {
            return fail("bandwidth must be > 0");
        }
        for name in self.c_op.keys() {
            if Op::from_name(name).is_none() {
                return Err(SimError::Config(format!("unknown operator {name} in c_op")));
            }
        }
        Ok(())
    }

    pub fn cost_of(&self, op: Op) -> f64 {
        self.c_op
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(op.name()))
            .map_or(self.default_c_op, |(_, &c)| c)
    }

    pub fn lookup_ms(&self, hops: u32) -> f64 {
        self.lookup_base_ms + self.hop_ms * f64::from(hops)
    }
}
