//! One level of hierarchy construction: seed selection, aggregation, and
//! the termination test. Coarse node ids reuse the seed's fine id, so an
//! identity aggregation (every node a seed) reproduces the input graph.

use std::collections::{BTreeMap, HashMap};

use crate::config::EditConfig;
use crate::error::{Error, Result};
use crate::graph::{edge_key, Graph, NodeId};

/// Links a coarse graph to the next-finer graph it was built from.
#[derive(Clone, Debug, Default)]
pub struct Projection {
    /// Coarse node -> fine nodes of its aggregate; the seed is first.
    pub node_map: BTreeMap<NodeId, Vec<NodeId>>,
    /// Coarse edge -> fine edges crossing between the two aggregates.
    pub edge_map: BTreeMap<(NodeId, NodeId), Vec<(NodeId, NodeId)>>,
    /// Coarse node -> fine edges internal to its aggregate.
    pub internal_edges: BTreeMap<NodeId, Vec<(NodeId, NodeId)>>,
}

#[derive(Clone, Debug)]
pub struct HierarchyLevel {
    pub level_index: usize,
    pub graph: Graph,
    /// Absent at level 0.
    pub projection_to_finer: Option<Projection>,
}

/// Seed (C) and non-seed (F) sets. Every F node has a neighbor in C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSplit {
    pub seeds: Vec<NodeId>,
    pub others: Vec<NodeId>,
}

/// Splits the node set into seeds and non-seeds.
///
/// Pass 1 walks nodes in descending weighted-degree order (ties by id)
/// and takes a node as a seed unless it already has a seed neighbor.
/// Pass 2 promotes any remaining node with no seed neighbor.
pub fn select_seeds(g: &Graph) -> Result<SeedSplit> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by(|&a, &b| {
        g.weighted_degree(b)
            .partial_cmp(&g.weighted_degree(a))
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut is_seed: HashMap<NodeId, bool> = g.nodes().map(|u| (u, false)).collect();
    for &u in &order {
        let dominated = g.neighbors(u).any(|(v, _)| is_seed[&v]);
        if !dominated {
            is_seed.insert(u, true);
        }
    }
    for &u in &order {
        if !is_seed[&u] && !g.neighbors(u).any(|(v, _)| is_seed[&v]) {
            is_seed.insert(u, true);
        }
    }
    let mut seeds = Vec::new();
    let mut others = Vec::new();
    for u in g.nodes() {
        if is_seed[&u] {
            seeds.push(u);
        } else {
            others.push(u);
        }
    }
    Ok(SeedSplit { seeds, others })
}

/// Aggregates the graph around the given seeds. Each non-seed joins the
/// neighboring seed with the highest-weight edge (ties by smallest seed
/// id). Parallel fine edges between two aggregates merge into one coarse
/// edge whose weight is the sum of the crossing weights; intra-aggregate
/// edges accrue to the coarse node's internal edge weight.
pub fn aggregate(g: &Graph, split: &SeedSplit) -> Result<(Graph, Projection)> {
    let mut assignment: HashMap<NodeId, NodeId> = HashMap::new();
    for &s in &split.seeds {
        assignment.insert(s, s);
    }
    for &u in &split.others {
        let mut best: Option<(f64, NodeId)> = None;
        for (v, w) in g.neighbors(u) {
            if !assignment.contains_key(&v) || assignment[&v] != v {
                continue;
            }
            // Seed neighbors only; prefer higher weight, then smaller id.
            best = match best {
                None => Some((w, v)),
                Some((bw, bv)) => {
                    if w > bw || (w == bw && v < bv) {
                        Some((w, v))
                    } else {
                        Some((bw, bv))
                    }
                }
            };
        }
        match best {
            Some((_, seed)) => {
                assignment.insert(u, seed);
            }
            None => return Err(Error::NoSeedNeighbor(u)),
        }
    }

    let mut proj = Projection::default();
    let mut coarse = Graph::new();
    for &s in &split.seeds {
        proj.node_map.insert(s, vec![s]);
        proj.internal_edges.insert(s, Vec::new());
        coarse.ensure_node(s);
    }
    for &u in &split.others {
        proj.node_map.get_mut(&assignment[&u]).unwrap().push(u);
    }
    for (s, members) in &proj.node_map {
        let a = coarse.attrs_mut(*s).unwrap();
        a.size = members.iter().map(|&u| g.size(u)).sum();
        a.internal_edge_weight = members.iter().map(|&u| g.internal_edge_weight(u)).sum();
        a.annotation = g.attrs(*s).and_then(|na| na.annotation.clone());
    }

    let mut coarse_weights: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
    for (u, v, w) in g.edges() {
        let (a, b) = (assignment[&u], assignment[&v]);
        if a == b {
            coarse.attrs_mut(a).unwrap().internal_edge_weight += w;
            proj.internal_edges.get_mut(&a).unwrap().push((u, v));
        } else {
            let key = edge_key(a, b);
            *coarse_weights.entry(key).or_insert(0.0) += w;
            proj.edge_map.entry(key).or_default().push((u, v));
        }
    }
    for ((a, b), w) in coarse_weights {
        coarse.add_edge(a, b, w)?;
        // Coarse edge annotation: carried over from the first crossing edge.
        let (fu, fv) = proj.edge_map[&(a, b)][0];
        if let Some(ann) = g.edge_annotation(fu, fv) {
            coarse.set_edge_annotation(a, b, Some(ann.to_vec()));
        }
    }
    Ok((coarse, proj))
}

/// Coarsen, with seeds chosen automatically.
pub fn coarsen(g: &Graph) -> Result<(Graph, Projection)> {
    let split = select_seeds(g)?;
    aggregate(g, &split)
}

/// Whether another level should be built below `level`: stop on a single
/// node, on density at or above the configured threshold, or when no
/// edits are configured at any coarser level.
pub fn should_coarsen(g: &Graph, level: usize, cfg: &EditConfig) -> bool {
    if g.node_count() <= 1 {
        return false;
    }
    if g.density() >= cfg.max_density {
        return false;
    }
    cfg.has_edits_beyond(level)
}

/// Builds the full hierarchy for a graph under the given configuration.
/// Level 0 is the input graph.
pub fn build_hierarchy(g: &Graph, cfg: &EditConfig) -> Result<Vec<HierarchyLevel>> {
    let mut levels = vec![HierarchyLevel {
        level_index: 0,
        graph: g.clone(),
        projection_to_finer: None,
    }];
    while should_coarsen(&levels.last().unwrap().graph, levels.len() - 1, cfg) {
        let (coarse, proj) = coarsen(&levels.last().unwrap().graph)?;
        // A graph of isolated seeds aggregates to itself; stop rather
        // than stack identical levels.
        if coarse.node_count() >= levels.last().unwrap().graph.node_count() {
            break;
        }
        levels.push(HierarchyLevel {
            level_index: levels.len(),
            graph: coarse,
            projection_to_finer: Some(proj),
        });
    }
    Ok(levels)
}
