//! Distributed execution of a query over the simulated network.
//!
//! Atomic sub-queries run per segment on the peer holding the base segment,
//! starting from the deepest cached node found by a depth-first lookup.
//! Multi-series operators run at the client over assembled inputs. Every
//! computed segment is cached and published by the peer that computed it.

use std::collections::HashMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tseries_core::expr::{apply, canonical_name, decompose, PlanNode};
use tseries_core::segment::{locate, split_partial};
use tseries_core::{Error, ExprNode, Interval, Segment, SegmentSpec, Series, Value};

use crate::annotate::choose;
use crate::dht::Entry;
use crate::error::{Result, SimError};
use crate::network::Network;
use crate::probe::{ExecStats, TimingProbe};

const CELL_BYTES: usize = std::mem::size_of::<f64>();

#[derive(Debug, Clone)]
pub struct Execution {
    pub series: Series,
    pub probe: TimingProbe,
    pub stats: ExecStats,
}

/// Run `query` over `interval`. Random peer choices draw from `seed`.
pub fn execute(net: &mut Network, query: &ExprNode, interval: Interval, seed: u64) -> Result<Execution> {
    let started = Instant::now();
    let spec = net
        .spec()
        .ok_or_else(|| SimError::Config("no base series loaded".into()))?;
    let decomposition = decompose(query);

    let bases = query.base_names();
    let mut extent = None;
    let mut calendar = None;
    for name in &bases {
        let info = net
            .base(name)
            .ok_or_else(|| Error::UnknownBaseSeries(name.clone()))?;
        match extent {
            None => {
                extent = Some(info.extent);
                calendar = Some(info.calendar.clone());
            }
            Some(e) if e != info.extent => {
                return Err(Error::CalendarMismatch(format!(
                    "{name} covers [{},{}], other inputs [{},{}]",
                    info.extent.start, info.extent.end, e.start, e.end
                ))
                .into())
            }
            _ => {}
        }
    }
    let extent = extent.expect("expressions reference at least one base series");
    if !extent.covers(&interval) {
        return Err(Error::IntervalOutOfRange {
            start: interval.start,
            end: interval.end,
            lo: extent.start,
            hi: extent.end,
        }
        .into());
    }
    for atomic in &decomposition.atomics {
        let lookback = atomic.total_lookback();
        if lookback > spec.overlap {
            return Err(SimError::InfeasibleWindow {
                expr: atomic.to_string(),
                lookback,
                overlap: spec.overlap,
            });
        }
    }

    let peers = net.peers().len();
    let mut run = Run {
        net,
        spec,
        extent,
        calendar: calendar.expect("set with extent"),
        atomics: &decomposition.atomics,
        rng: ChaCha8Rng::seed_from_u64(seed),
        stats: ExecStats::default(),
        t_r: 0.0,
        peer_busy: vec![0.0; peers],
        client_busy: 0.0,
        memo: HashMap::new(),
    };
    let series = run
        .resolve(&decomposition.plan, interval)?
        .with_name(canonical_name(query));

    let mut stats = run.stats;
    stats.segments = locate(interval, spec).len();
    let cfg = run.net.config();
    let t_r = run.t_r;
    let t_p = run.peer_busy.iter().copied().fold(0.0, f64::max) + run.client_busy;
    let t_q = cfg.t_q_ms;
    let t_net = stats.bytes_shipped as f64 / cfg.bandwidth_bytes_per_ms;
    let probe = TimingProbe {
        peers,
        t_index: t_r / stats.segments as f64,
        t_r,
        t_p,
        t_q,
        t_net,
        t_p2p: t_r + t_p + t_q + t_net,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Execution {
        series,
        probe,
        stats,
    })
}

struct Run<'a> {
    net: &'a mut Network,
    spec: SegmentSpec,
    extent: Interval,
    calendar: std::sync::Arc<tseries_core::Calendar>,
    atomics: &'a [ExprNode],
    rng: ChaCha8Rng,
    stats: ExecStats,
    t_r: f64,
    peer_busy: Vec<f64>,
    client_busy: f64,
    memo: HashMap<String, Series>,
}

/// Per-segment work of an atomic chain, fixed before computing.
struct Task {
    need: Interval,
    /// Chain depth of the cached node the work starts from.
    depth: usize,
    source: Segment<f64>,
    compute_peer: usize,
}

fn to_expr(node: &PlanNode, atomics: &[ExprNode]) -> ExprNode {
    match node {
        PlanNode::Atomic(i) => atomics[*i].clone(),
        PlanNode::Op {
            op,
            params,
            children,
        } => ExprNode::op(
            *op,
            params.clone(),
            children.iter().map(|c| to_expr(c, atomics)).collect(),
        ),
    }
}

/// Apply the chain nodes above `depth`, bottom-up. Returns every computed
/// segment, root last.
fn climb(chain: &[&ExprNode], task: &Task) -> Result<Vec<Segment<f64>>> {
    let mut out: Vec<Segment<f64>> = Vec::with_capacity(task.depth);
    for node in chain[..task.depth].iter().rev() {
        let ExprNode::Op { op, params, .. } = node else {
            unreachable!("only the chain bottom is a base series");
        };
        let input = out.last().unwrap_or(&task.source);
        let next = input.map(node.to_string(), node.lookback(), |local| {
            apply(*op, params, &[local])
        })?;
        out.push(next);
    }
    Ok(out)
}

impl Run<'_> {
    fn lookup(&mut self, key: &str) -> Vec<Entry> {
        let client = self.net.client();
        let (entries, hops) = self.net.lookup(client, key);
        self.stats.lookups += 1;
        self.t_r += self.net.config().lookup_ms(hops);
        entries
    }

    fn ship(&mut self, bytes: usize, from: usize, to: usize) {
        if from != to {
            self.stats.bytes_shipped += bytes;
        }
    }

    fn need(&self, ordinal: usize, range: Interval) -> Interval {
        let core = self.spec.core(ordinal);
        Interval {
            start: core.start.max(range.start),
            end: (core.end - 1).min(range.end),
        }
    }

    fn remembered(&self, name: &str, range: Interval) -> Option<Series> {
        let hit = self.memo.get(name)?;
        hit.interval()
            .covers(&range)
            .then(|| hit.slice(range).expect("covered"))
    }

    fn resolve(&mut self, node: &PlanNode, range: Interval) -> Result<Series> {
        let name = canonical_name(&to_expr(node, self.atomics));
        if let Some(series) = self.remembered(&name, range) {
            return Ok(series);
        }
        let series = match node {
            PlanNode::Atomic(i) => self.atomic(*i, &name, range)?,
            PlanNode::Op { .. } => self.client_op(node, &name, range)?,
        };
        self.memo.insert(name, series.clone());
        Ok(series)
    }

    fn series_from(&self, name: &str, range: Interval, values: Vec<Value<f64>>) -> Result<Series> {
        Ok(Series::new(name, self.calendar.clone(), range.start, values)?)
    }

    /// Multi-series operator (or an operator above one) computed at the
    /// client. Cached segments are reused; missing ones are computed over
    /// their hull and published.
    fn client_op(&mut self, node: &PlanNode, name: &str, range: Interval) -> Result<Series> {
        let PlanNode::Op {
            op,
            params,
            children,
        } = node
        else {
            unreachable!("atomic nodes are resolved per segment");
        };
        let client = self.net.client();
        let mut hits: HashMap<usize, Segment<f64>> = HashMap::new();
        let mut missing: Vec<Interval> = Vec::new();
        for ordinal in locate(range, self.spec) {
            let need = self.need(ordinal, range);
            let entries = self.lookup(name);
            match choose(&entries, need, &mut self.rng) {
                Some(entry) => {
                    let seg = self.net.fetch(name, &entry).expect("advertised segment is cached");
                    self.stats.hits += 1;
                    let holder = self.net.peer_index(entry.peer);
                    self.ship(need.len() * CELL_BYTES, holder, client);
                    hits.insert(ordinal, seg);
                }
                None => missing.push(need),
            }
        }

        let mut computed = None;
        if let (Some(first), Some(last)) = (missing.first(), missing.last()) {
            let lookback = to_expr(node, self.atomics).lookback();
            let hull = Interval {
                start: first.start.saturating_sub(lookback).max(self.extent.start),
                end: last.end,
            };
            let inputs = children
                .iter()
                .map(|c| self.resolve(c, hull))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Series> = inputs.iter().collect();
            let result = apply(*op, params, &refs)?.with_name(name);
            self.stats.op_executions += 1;
            self.client_busy += self.net.config().cost_of(*op) * hull.len() as f64;
            self.net.note_task(client, || format!("{name} [{},{}]", hull.start, hull.end));

            let valid = Interval {
                start: if hull.start == self.extent.start {
                    hull.start
                } else {
                    hull.start + lookback
                },
                end: hull.end,
            };
            for seg in split_partial(&result, self.spec, self.extent, valid) {
                let publishable = seg
                    .core_interval()
                    .and_then(|core| core.intersect(&valid))
                    .is_some();
                if publishable {
                    self.net.publish(client, seg);
                }
            }
            computed = Some(result);
        }

        let values = (range.start..=range.end)
            .map(|t| match hits.get(&self.spec.ordinal_of(t)) {
                Some(seg) => seg.value_at(t).unwrap_or(Value::Unknown),
                None => computed
                    .as_ref()
                    .and_then(|c| c.at(t))
                    .unwrap_or(Value::Unknown),
            })
            .collect();
        self.series_from(name, range, values)
    }

    /// Unary chain over one base series, evaluated segment by segment.
    fn atomic(&mut self, index: usize, name: &str, range: Interval) -> Result<Series> {
        let atomics = self.atomics;
        let mut chain: Vec<&ExprNode> = vec![&atomics[index]];
        while let Some(child) = chain.last().and_then(|n| n.children().first()) {
            chain.push(child);
        }
        let mut margins = vec![0usize; chain.len()];
        for d in 1..chain.len() {
            margins[d] = margins[d - 1] + chain[d - 1].lookback();
        }
        let base_name = chain.last().expect("non-empty").to_string();
        let holders = self
            .net
            .base(&base_name)
            .map(|b| b.holders.clone())
            .ok_or_else(|| Error::UnknownBaseSeries(base_name.clone()))?;

        let mut tasks = Vec::new();
        for ordinal in locate(range, self.spec) {
            let need = self.need(ordinal, range);
            let mut found = None;
            for (depth, node) in chain.iter().enumerate() {
                let key = node.to_string();
                let entries = self.lookup(&key);
                let required = Interval {
                    start: need.start.saturating_sub(margins[depth]).max(self.extent.start),
                    end: need.end,
                };
                if let Some(entry) = choose(&entries, required, &mut self.rng) {
                    found = Some((depth, key, entry));
                    break;
                }
            }
            let Some((depth, key, entry)) = found else {
                return Err(Error::CoverageGap(vec![(need.start, need.end)]).into());
            };
            let source = self.net.fetch(&key, &entry).expect("advertised segment is cached");
            self.stats.hits += 1;
            let holder = self.net.peer_index(entry.peer);
            let compute_peer = if depth == 0 {
                holder
            } else {
                holders[ordinal.min(holders.len() - 1)]
            };
            if depth > 0 {
                self.ship(source.byte_size(), holder, compute_peer);
            }
            tasks.push(Task {
                need,
                depth,
                source,
                compute_peer,
            });
        }

        let climbed: Vec<Result<Vec<Segment<f64>>>> = if self.net.config().concurrent {
            tasks.par_iter().map(|t| climb(&chain, t)).collect()
        } else {
            tasks.iter().map(|t| climb(&chain, t)).collect()
        };

        let client = self.net.client();
        let mut values = Vec::with_capacity(range.len());
        for (task, computed) in tasks.iter().zip(climbed) {
            let computed = computed?;
            for (seg, node) in computed.iter().zip(chain[..task.depth].iter().rev()) {
                let op = node.operator().expect("operator node");
                self.stats.op_executions += 1;
                self.peer_busy[task.compute_peer] +=
                    self.net.config().cost_of(op) * seg.local_series().len() as f64;
                self.net.note_task(task.compute_peer, || {
                    format!("{} #{}", seg.series_name(), seg.index())
                });
                self.net.publish(task.compute_peer, seg.clone());
            }
            let root = computed.last().unwrap_or(&task.source);
            self.ship(task.need.len() * CELL_BYTES, task.compute_peer, client);
            values.extend((task.need.start..=task.need.end).map(|t| root.value_at(t).unwrap_or(Value::Unknown)));
        }
        self.series_from(name, range, values)
    }
}
