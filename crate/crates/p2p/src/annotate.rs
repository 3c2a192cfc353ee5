//! Tree annotation and pruning: per segment, a depth-first walk that stops
//! at the shallowest node some peer already caches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tseries_core::expr::canonicalize;
use tseries_core::segment::locate;
use tseries_core::{ExprNode, Interval};

use crate::dht::Entry;
use crate::error::{Result, SimError};
use crate::network::Network;
use crate::ring::PeerId;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedTree {
    pub name: String,
    /// Peer chosen to supply this node, with the interval it advertises.
    pub assign: Option<(PeerId, Interval)>,
    /// Empty once the node is assigned.
    pub children: Vec<AnnotatedTree>,
}

impl AnnotatedTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Self::node_count).sum::<usize>()
    }

    pub fn annotated_count(&self) -> usize {
        usize::from(self.assign.is_some())
            + self.children.iter().map(Self::annotated_count).sum::<usize>()
    }

    /// Nodes below annotated nodes. Always zero for trees built here.
    pub fn surviving_descendants(&self) -> usize {
        if self.assign.is_some() {
            self.node_count() - 1
        } else {
            self.children.iter().map(Self::surviving_descendants).sum()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPlan {
    pub ordinal: usize,
    pub tree: AnnotatedTree,
}

/// Pick one of `entries` covering `need`, uniformly at random.
pub(crate) fn choose(entries: &[Entry], need: Interval, rng: &mut ChaCha8Rng) -> Option<Entry> {
    let covering: Vec<&Entry> = entries
        .iter()
        .filter(|e| e.start <= need.start && e.end >= need.end)
        .collect();
    if covering.is_empty() {
        return None;
    }
    Some(*covering[rng.random_range(0..covering.len())])
}

/// Annotate `query` for every segment overlapping `interval`. Lookups are
/// issued by the client peer.
pub fn annotate(
    net: &mut Network,
    query: &ExprNode,
    interval: Interval,
    seed: u64,
) -> Result<Vec<SegmentPlan>> {
    let spec = net
        .spec()
        .ok_or_else(|| SimError::Config("segment length unknown: set seg_len or load a series".into()))?;
    let query = canonicalize(query);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(locate(interval, spec)
        .into_iter()
        .map(|ordinal| {
            let core = spec.core(ordinal);
            let need = Interval {
                start: core.start.max(interval.start),
                end: (core.end - 1).min(interval.end),
            };
            SegmentPlan {
                ordinal,
                tree: visit(net, &query, need, &mut rng),
            }
        })
        .collect())
}

fn visit(net: &mut Network, node: &ExprNode, need: Interval, rng: &mut ChaCha8Rng) -> AnnotatedTree {
    let name = node.to_string();
    let (entries, _) = net.lookup(net.client(), &name);
    match choose(&entries, need, rng) {
        Some(e) => AnnotatedTree {
            name,
            assign: Some((e.peer, Interval { start: e.start, end: e.end })),
            children: Vec::new(),
        },
        None => AnnotatedTree {
            name,
            assign: None,
            children: node
                .children()
                .iter()
                .map(|c| visit(net, c, need, rng))
                .collect(),
        },
    }
}
