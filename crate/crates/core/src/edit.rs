//! Randomized editing of a single level: estimate the distribution of
//! alternative-path lengths, then delete and insert edges and nodes at
//! the configured rates. New edges are placed by sampling a distance from
//! that distribution, which is what keeps clustering and distance-based
//! properties stable under editing.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::config::EditConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Empirical distribution of the second-shortest-path length over the
/// edges of a graph: for an edge {u,v}, the hop length of the shortest
/// u-v path avoiding the edge itself. Lengths are >= 2; edges with no
/// alternative path within the search horizon fall into the unreachable
/// bucket.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpathDistribution {
    /// (distance, probability), ascending by distance.
    pub probabilities: Vec<(usize, f64)>,
    pub unreachable_mass: f64,
    pub sample_size: usize,
    /// Set when the graph had no edges to sample.
    pub degenerate: bool,
}

impl SpathDistribution {
    /// Draws a distance; `None` is the unreachable bucket.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<usize> {
        let mut x = rng.random::<f64>();
        for &(d, p) in &self.probabilities {
            if x < p {
                return Some(d);
            }
            x -= p;
        }
        None
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().map(|&(_, p)| p).sum::<f64>() + self.unreachable_mass
    }
}

/// Length of the shortest u-v path that avoids the edge {u,v} itself,
/// searched to `horizon` hops. `None` when no such path is found.
pub fn spath(g: &Graph, u: NodeId, v: NodeId, horizon: usize) -> Result<Option<usize>> {
    if !g.has_edge(u, v) {
        return Err(Error::EdgeNotFound(u, v));
    }
    let mut seen: std::collections::HashSet<NodeId> = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(u);
    queue.push_back((u, 0usize));
    while let Some((x, d)) = queue.pop_front() {
        if d == horizon {
            continue;
        }
        for (y, _) in g.neighbors(x) {
            // Skip the edge under test, in either direction.
            if (x == u && y == v) || (x == v && y == u) {
                continue;
            }
            if y == v {
                return Ok(Some(d + 1));
            }
            if seen.insert(y) {
                queue.push_back((y, d + 1));
            }
        }
    }
    Ok(None)
}

/// Estimates the spath distribution by sampling edges uniformly with
/// replacement. An edgeless graph yields a degenerate distribution with
/// all mass in the unreachable bucket.
pub fn estimate_spath_distribution<R: Rng>(
    g: &Graph,
    cfg: &EditConfig,
    rng: &mut R,
) -> SpathDistribution {
    let samples = cfg.spath_samples(g.edge_count()).max(1);
    if g.edge_count() == 0 {
        return SpathDistribution {
            probabilities: Vec::new(),
            unreachable_mass: 1.0,
            sample_size: samples,
            degenerate: true,
        };
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut unreachable = 0usize;
    for _ in 0..samples {
        let (u, v) = g.random_edge(rng).expect("non-empty edge set");
        match spath(g, u, v, cfg.bfs_horizon).expect("sampled edge exists") {
            Some(d) => *counts.entry(d).or_default() += 1,
            None => unreachable += 1,
        }
    }
    SpathDistribution {
        probabilities: counts
            .into_iter()
            .map(|(d, c)| (d, c as f64 / samples as f64))
            .collect(),
        unreachable_mass: unreachable as f64 / samples as f64,
        sample_size: samples,
        degenerate: false,
    }
}

/// Inserts one edge from `u` to a node at a distance drawn from `dist`.
///
/// An unreachable draw is redrawn up to `loop_safety_factor` times and
/// then falls back to a uniform non-neighbor target. Returns the inserted
/// edge, or `None` when no eligible endpoint was found within the
/// attempt budget.
pub fn insert_edge_at_distance<R: Rng>(
    g: &mut Graph,
    u: NodeId,
    dist: &SpathDistribution,
    cfg: &EditConfig,
    rng: &mut R,
) -> Option<(NodeId, NodeId)> {
    insert_edge_impl(g, u, u, dist, cfg, false, rng)
}

/// Like [`insert_edge_at_distance`], but distances are measured from
/// `origin` rather than from `u`. Used when wiring a freshly inserted
/// node, whose edges should land in the vicinity of its attachment
/// point rather than fan out from the (still nearly edgeless) node
/// itself.
pub fn insert_edge_near<R: Rng>(
    g: &mut Graph,
    u: NodeId,
    origin: NodeId,
    dist: &SpathDistribution,
    cfg: &EditConfig,
    rng: &mut R,
) -> Option<(NodeId, NodeId)> {
    insert_edge_impl(g, u, origin, dist, cfg, false, rng)
}

fn insert_edge_impl<R: Rng>(
    g: &mut Graph,
    u: NodeId,
    origin: NodeId,
    dist: &SpathDistribution,
    cfg: &EditConfig,
    degree_weighted: bool,
    rng: &mut R,
) -> Option<(NodeId, NodeId)> {
    if !g.has_node(u) || !g.has_node(origin) {
        return None;
    }
    for _ in 0..cfg.loop_safety_factor {
        let mut drawn = None;
        for _ in 0..cfg.loop_safety_factor {
            if let Some(d) = dist.sample(rng) {
                drawn = Some(d);
                break;
            }
        }
        match drawn {
            Some(d) => {
                let d = d.min(cfg.bfs_horizon);
                let (candidates, truncated) =
                    candidates_at_distance(g, u, origin, d, cfg.bfs_visit_budget);
                if !candidates.is_empty() {
                    let v = if degree_weighted {
                        pick_degree_weighted(g, &candidates, rng)
                    } else {
                        candidates[rng.random_range(0..candidates.len())]
                    };
                    return finish_insert(g, u, v, rng);
                }
                if truncated {
                    // The scan budget ran out before the shell was reached;
                    // approximate a distance-d target with a length-d random
                    // walk, which stays in the origin's vicinity at O(d)
                    // cost regardless of graph size.
                    for _ in 0..cfg.loop_safety_factor {
                        if let Some(v) = random_walk_target(g, u, origin, d, rng) {
                            return finish_insert(g, u, v, rng);
                        }
                    }
                }
                // Genuinely empty shell: redraw the distance and try again.
            }
            None => {
                // Fall back to any non-neighbor so editing always progresses.
                for _ in 0..cfg.loop_safety_factor {
                    let v = g.random_node(rng).ok()?;
                    if v != u && !g.has_edge(u, v) {
                        return finish_insert(g, u, v, rng);
                    }
                }
                return None;
            }
        }
    }
    None
}

/// Walks `d` uniform random steps from `origin` and returns the endpoint
/// if it is a valid new neighbor for `u`. Used when exact shell
/// enumeration would exceed the scan budget.
fn random_walk_target<R: Rng>(
    g: &Graph,
    u: NodeId,
    origin: NodeId,
    d: usize,
    rng: &mut R,
) -> Option<NodeId> {
    let mut here = origin;
    let mut prev = None;
    for _ in 0..d {
        let nbrs: Vec<NodeId> = g.neighbors(here).map(|(y, _)| y).collect();
        // Avoid immediately backtracking so the walk makes progress.
        let step: Vec<NodeId> = if nbrs.len() > 1 {
            nbrs.into_iter().filter(|&y| Some(y) != prev).collect()
        } else {
            nbrs
        };
        if step.is_empty() {
            return None;
        }
        prev = Some(here);
        here = step[rng.random_range(0..step.len())];
    }
    if here != u && here != origin && !g.has_edge(u, here) {
        Some(here)
    } else {
        None
    }
}

/// Picks a candidate with probability proportional to its degree,
/// falling back to a uniform pick when all candidates are isolated.
fn pick_degree_weighted<R: Rng>(g: &Graph, candidates: &[NodeId], rng: &mut R) -> NodeId {
    let total: u64 = candidates.iter().map(|&c| g.degree(c) as u64).sum();
    if total == 0 {
        return candidates[rng.random_range(0..candidates.len())];
    }
    let mut ticket = rng.random_range(0..total);
    for &c in candidates {
        let w = g.degree(c) as u64;
        if ticket < w {
            return c;
        }
        ticket -= w;
    }
    candidates[candidates.len() - 1]
}

/// Non-neighbors of `u` at hop distance exactly `d` from `origin`, found
/// by a BFS that gives up once it has scanned `budget` adjacency entries.
/// The flag reports whether the budget cut the search short.
fn candidates_at_distance(
    g: &Graph,
    u: NodeId,
    origin: NodeId,
    d: usize,
    budget: usize,
) -> (Vec<NodeId>, bool) {
    let mut seen: std::collections::HashSet<NodeId> = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let mut out = Vec::new();
    let mut scanned = 0usize;
    seen.insert(origin);
    queue.push_back((origin, 0usize));
    while let Some((x, dx)) = queue.pop_front() {
        if dx == d {
            continue;
        }
        for (y, _) in g.neighbors(x) {
            scanned += 1;
            if scanned > budget {
                return (out, true);
            }
            if seen.insert(y) {
                if dx + 1 == d {
                    if y != u && !g.has_edge(u, y) {
                        out.push(y);
                    }
                } else {
                    queue.push_back((y, dx + 1));
                }
            }
        }
    }
    (out, false)
}

fn finish_insert<R: Rng>(
    g: &mut Graph,
    u: NodeId,
    v: NodeId,
    rng: &mut R,
) -> Option<(NodeId, NodeId)> {
    // Annotation resampled from a uniformly drawn existing edge.
    let annotation = g
        .random_edge(rng)
        .ok()
        .and_then(|(a, b)| g.edge_annotation(a, b).map(<[u8]>::to_vec));
    g.add_edge(u, v, 1.0).ok()?;
    if annotation.is_some() {
        g.set_edge_annotation(u, v, annotation);
    }
    Some(crate::graph::edge_key(u, v))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditRecord {
    EdgeDeleted { u: NodeId, v: NodeId },
    EdgeInserted { u: NodeId, v: NodeId },
    NodeInserted { id: NodeId },
    NodeDeleted { id: NodeId },
    Reconnected { u: NodeId, v: NodeId },
}

/// Goals that a sampling loop could not reach within its attempt budget.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Shortfall {
    pub kind: String,
    pub goal: u64,
    pub achieved: u64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct EditLog {
    pub level: usize,
    pub records: Vec<EditRecord>,
    pub shortfalls: Vec<Shortfall>,
}

impl EditLog {
    pub fn count(&self, pred: impl Fn(&EditRecord) -> bool) -> usize {
        self.records.iter().filter(|r| pred(r)).count()
    }
}

fn scaled_goal(base: u64, growth: f64) -> u64 {
    (base as f64 * (1.0 + growth)).round().max(0.0) as u64
}

fn mutual_neighbor_count(g: &Graph, u: NodeId, v: NodeId) -> usize {
    let (a, b) = if g.degree(u) <= g.degree(v) { (u, v) } else { (v, u) };
    g.neighbors(a).filter(|&(x, _)| g.has_edge(x, b)).count()
}

/// Adds one edge from every smaller component to the largest, between
/// uniformly chosen representatives.
pub fn reconnect_components<R: Rng>(g: &mut Graph, rng: &mut R, log: &mut EditLog) {
    let comps = g.connected_components();
    if comps.len() < 2 {
        return;
    }
    let largest = &comps[0];
    for comp in &comps[1..] {
        let u = comp[rng.random_range(0..comp.len())];
        let v = largest[rng.random_range(0..largest.len())];
        if g.add_edge(u, v, 1.0).is_ok() {
            log.records.push(EditRecord::Reconnected { u, v });
        }
    }
}

/// One editing pass over a level: edge deletions, optional connectivity
/// repair, edge insertions, node insertions, node deletions, in that
/// order. Pure function of (graph, level, cfg, rng state).
pub fn edit_edges_and_nodes<R: Rng>(
    g: &Graph,
    level: usize,
    cfg: &EditConfig,
    rng: &mut R,
) -> (Graph, EditLog) {
    let mut g = g.clone();
    let mut log = EditLog {
        level,
        ..EditLog::default()
    };
    let eer = cfg.edge_rate(level);
    let ner = cfg.node_rate(level);
    if eer == 0.0 && ner == 0.0 {
        return (g, log);
    }

    let draw = |n: usize, p: f64, rng: &mut R| -> u64 {
        Binomial::new(n as u64, p).expect("valid rate").sample(rng)
    };
    let e_d = draw(g.edge_count(), eer, rng);
    let e_a = scaled_goal(draw(g.edge_count(), eer, rng), cfg.edge_growth(level));
    let n_d = draw(g.node_count(), ner, rng);
    let n_a = scaled_goal(draw(g.node_count(), ner, rng), cfg.node_growth(level));

    let dist = if e_a > 0 || n_a > 0 {
        Some(estimate_spath_distribution(&g, cfg, rng))
    } else {
        None
    };
    let avg_deg = if g.node_count() > 0 {
        2.0 * g.edge_count() as f64 / g.node_count() as f64
    } else {
        0.0
    };

    // Edge deletions, with the optional acceptance filters. Rejections by
    // the filters are retried, so the attempt cap is scaled by an estimate
    // of the mean acceptance probability; otherwise filtered deletion
    // would fall short of its goal and edge mass would drift upward.
    let mut accept_estimate = 1.0_f64;
    if (cfg.deferential_detachment || cfg.mutual_neighbor_protection) && g.edge_count() > 0 {
        let probe = g.edge_count().min(64);
        let mut total = 0.0;
        for _ in 0..probe {
            let (u, v) = g.random_edge(rng).expect("graph has edges");
            let mut p = 1.0_f64;
            if cfg.deferential_detachment {
                p *= (avg_deg / (g.degree(u) as f64 * g.degree(v) as f64)).min(1.0);
            }
            if cfg.mutual_neighbor_protection {
                let m = mutual_neighbor_count(&g, u, v);
                if m > 0 {
                    p *= (0.5 / m as f64).min(1.0);
                }
            }
            total += p;
        }
        accept_estimate = (total / probe as f64).max(1e-3);
    }
    let mut deleted = 0u64;
    let mut attempts = 0u64;
    let max_attempts = ((e_d as f64 / accept_estimate).ceil() as u64)
        .saturating_mul(cfg.loop_safety_factor as u64);
    while deleted < e_d && attempts < max_attempts {
        attempts += 1;
        let (u, v) = match g.random_edge(rng) {
            Ok(e) => e,
            Err(_) => break,
        };
        if cfg.deferential_detachment {
            let p = (avg_deg / (g.degree(u) as f64 * g.degree(v) as f64)).min(1.0);
            if rng.random::<f64>() >= p {
                continue;
            }
        }
        if cfg.mutual_neighbor_protection {
            let m = mutual_neighbor_count(&g, u, v);
            if m > 0 && rng.random::<f64>() >= (0.5 / m as f64).min(1.0) {
                continue;
            }
        }
        g.remove_edge(u, v).expect("sampled edge exists");
        log.records.push(EditRecord::EdgeDeleted { u, v });
        deleted += 1;
    }
    if deleted < e_d {
        log.shortfalls.push(Shortfall {
            kind: "edge_deletions".into(),
            goal: e_d,
            achieved: deleted,
        });
    }

    if cfg.enforce_connectivity {
        reconnect_components(&mut g, rng, &mut log);
    }

    // Edge insertions from uniform anchors.
    let mut added = 0u64;
    let mut attempts = 0u64;
    let max_attempts = e_a.saturating_mul(cfg.loop_safety_factor as u64);
    while added < e_a && attempts < max_attempts {
        attempts += 1;
        let u = match g.random_node(rng) {
            Ok(u) => u,
            Err(_) => break,
        };
        if let Some((a, b)) =
            insert_edge_at_distance(&mut g, u, dist.as_ref().expect("estimated"), cfg, rng)
        {
            log.records.push(EditRecord::EdgeInserted { u: a, v: b });
            added += 1;
        }
    }
    if added < e_a {
        log.shortfalls.push(Shortfall {
            kind: "edge_insertions".into(),
            goal: e_a,
            achieved: added,
        });
    }

    // Node insertions: resample the degree (and attributes) of an
    // existing source node, connect to a uniform anchor, then place the
    // remaining edges by distance sampling.
    for _ in 0..n_a {
        let (anchor, source) = match (g.random_node(rng), g.random_node(rng)) {
            (Ok(a), Ok(s)) => (a, s),
            _ => break,
        };
        let target_degree = g.degree(source);
        let new = g.fresh_node();
        if let (Some(src), Some(dst)) = (g.attrs(source).cloned(), g.attrs_mut(new)) {
            *dst = src;
        }
        log.records.push(EditRecord::NodeInserted { id: new });
        if target_degree == 0 {
            continue;
        }
        g.add_edge(new, anchor, 1.0).expect("fresh node, no duplicate");
        log.records.push(EditRecord::EdgeInserted { u: new, v: anchor });
        let mut inner_attempts = 0u64;
        let budget = (target_degree as u64).saturating_mul(cfg.loop_safety_factor as u64);
        while g.degree(new) < target_degree && inner_attempts < budget {
            inner_attempts += 1;
            let dist = dist.as_ref().expect("estimated");
            // Prefer targets in the vicinity of the attachment point; when
            // that neighborhood is exhausted (dense graphs cap it at the
            // anchor's non-neighbors), measure from the new node instead.
            let w = cfg.degree_weighted_wiring;
            let inserted = match insert_edge_impl(&mut g, new, anchor, dist, cfg, w, rng) {
                Some(e) => Some(e),
                None => insert_edge_impl(&mut g, new, new, dist, cfg, w, rng),
            };
            if let Some((a, b)) = inserted {
                log.records.push(EditRecord::EdgeInserted { u: a, v: b });
            }
        }
    }

    // Node deletions with incident edges.
    for _ in 0..n_d {
        let id = match g.random_node(rng) {
            Ok(id) => id,
            Err(_) => break,
        };
        g.remove_node(id).expect("sampled node exists");
        log.records.push(EditRecord::NodeDeleted { id });
    }

    (g, log)
}
