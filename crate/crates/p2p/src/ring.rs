//! Chord identifier ring with finger-table routing.

use std::fmt;

use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeerId(pub u64);

impl fmt::Display for PeerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// SHA-256 of `key`, first 8 bytes big-endian, truncated to `m` bits.
pub fn hash_key(key: &str, m: u32) -> u64 {
    let digest = Sha256::digest(key.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    let h = u64::from_be_bytes(bytes);
    if m >= 64 {
        h
    } else {
        h & ((1u64 << m) - 1)
    }
}

/// `x` in the ring interval `(a, b]`.
fn in_half_open(x: u64, a: u64, b: u64) -> bool {
    if a < b {
        a < x && x <= b
    } else {
        x > a || x <= b
    }
}

/// `x` in the ring interval `(a, b)`.
fn in_open(x: u64, a: u64, b: u64) -> bool {
    if a < b {
        a < x && x < b
    } else if a == b {
        x != a
    } else {
        x > a || x < b
    }
}

/// Peers ordered by identifier. Positions index into `ids`.
#[derive(Debug, Clone)]
pub struct Ring {
    m: u32,
    ids: Vec<u64>,
    /// Creation index of the peer at each ring position.
    owners: Vec<usize>,
    fingers: Vec<Vec<usize>>,
}

impl Ring {
    /// Peer `i` takes the identifier `hash("peer-i")`, rehashed with a
    /// suffix on collision.
    pub fn new(peers: usize, m: u32) -> Ring {
        assert!(peers >= 1 && (1..=64).contains(&m));
        assert!(m >= 64 || (peers as u128) <= 1u128 << m, "more peers than identifiers");
        let mut taken = std::collections::HashSet::new();
        let mut assigned: Vec<(u64, usize)> = (0..peers)
            .map(|i| {
                let mut id = hash_key(&format!("peer-{i}"), m);
                let mut salt = 0;
                while !taken.insert(id) {
                    salt += 1;
                    id = hash_key(&format!("peer-{i}#{salt}"), m);
                }
                (id, i)
            })
            .collect();
        assigned.sort_unstable();
        let ids: Vec<u64> = assigned.iter().map(|&(id, _)| id).collect();
        let owners = assigned.iter().map(|&(_, i)| i).collect();
        let mut ring = Ring {
            m,
            ids,
            owners,
            fingers: Vec::new(),
        };
        ring.fingers = (0..peers)
            .map(|pos| {
                (0..m)
                    .map(|j| ring.successor_of(ring.ids[pos].wrapping_add(1u64 << j) & ring.mask()))
                    .collect()
            })
            .collect();
        ring
    }

    fn mask(&self) -> u64 {
        if self.m >= 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id_at(&self, pos: usize) -> PeerId {
        PeerId(self.ids[pos])
    }

    /// Creation index of the peer at ring position `pos`.
    pub fn peer_at(&self, pos: usize) -> usize {
        self.owners[pos]
    }

    /// Ring position of the peer created as number `peer`.
    pub fn position_of(&self, peer: usize) -> usize {
        self.owners
            .iter()
            .position(|&o| o == peer)
            .expect("peer exists")
    }

    /// Position of the first identifier `>= key`, wrapping around.
    pub fn successor_of(&self, key: u64) -> usize {
        match self.ids.binary_search(&key) {
            Ok(pos) => pos,
            Err(pos) if pos == self.ids.len() => 0,
            Err(pos) => pos,
        }
    }

    pub fn key_id(&self, key: &str) -> u64 {
        hash_key(key, self.m)
    }

    /// Route from position `from` to the owner of `key` through finger
    /// tables. Returns the owner position and the number of forwarding hops.
    pub fn find_successor(&self, from: usize, key: u64) -> (usize, u32) {
        let n = self.ids.len();
        if n == 1 {
            return (0, 0);
        }
        let pred = (from + n - 1) % n;
        if in_half_open(key, self.ids[pred], self.ids[from]) {
            return (from, 0);
        }
        let mut node = from;
        let mut hops = 0;
        loop {
            let succ = self.fingers[node][0];
            if in_half_open(key, self.ids[node], self.ids[succ]) {
                return (succ, hops + 1);
            }
            let next = self.closest_preceding(node, key);
            if next == node {
                return (succ, hops + 1);
            }
            node = next;
            hops += 1;
        }
    }

    fn closest_preceding(&self, node: usize, key: u64) -> usize {
        self.fingers[node]
            .iter()
            .rev()
            .copied()
            .find(|&f| in_open(self.ids[f], self.ids[node], key))
            .unwrap_or(node)
    }
}
