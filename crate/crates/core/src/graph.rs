//! Undirected weighted simple graph with the traversal, sampling, and
//! mutation primitives the rest of the crate is built on.
//!
//! Nodes carry a `size` (how many finest-level nodes they aggregate; 1 at
//! the finest level), an accumulated internal edge weight, and an optional
//! opaque annotation. Edges carry a positive weight and an optional
//! annotation. Neighbor lists are flat vectors in insertion order, which
//! is deterministic for a deterministic operation sequence and keeps
//! traversal cache-friendly; `nodes()` and `edges()` iterate in sorted
//! order. Uniform sampling is O(1) through parallel index vectors
//! maintained alongside the adjacency structure.

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};

pub type NodeId = u64;

#[derive(Clone, Debug, PartialEq)]
pub struct NodeAttrs {
    /// Number of finest-level nodes this node aggregates.
    pub size: u64,
    /// Total weight of finest-level edges absorbed inside the aggregate.
    pub internal_edge_weight: f64,
    pub annotation: Option<Vec<u8>>,
}

impl Default for NodeAttrs {
    fn default() -> Self {
        NodeAttrs {
            size: 1,
            internal_edge_weight: 0.0,
            annotation: None,
        }
    }
}

/// Normalized edge key: smaller endpoint first.
#[inline]
pub fn edge_key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: HashMap<NodeId, Vec<(NodeId, f64)>>,
    attrs: HashMap<NodeId, NodeAttrs>,
    edge_annotations: HashMap<(NodeId, NodeId), Vec<u8>>,
    node_list: Vec<NodeId>,
    node_pos: HashMap<NodeId, usize>,
    edge_list: Vec<(NodeId, NodeId)>,
    edge_pos: HashMap<(NodeId, NodeId), usize>,
    next_id: NodeId,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        if self.node_count() != other.node_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        self.nodes().eq(other.nodes())
            && self
                .edge_list
                .iter()
                .all(|&(u, v)| self.edge_weight(u, v) == other.edge_weight(u, v))
            && self.nodes().all(|u| self.attrs[&u] == other.attrs[&u])
            && self.edge_annotations == other.edge_annotations
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Builds a finest-level graph (unit sizes and weights) from an edge list.
    pub fn from_edges<I: IntoIterator<Item = (NodeId, NodeId)>>(edges: I) -> Result<Self> {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.ensure_node(u);
            g.ensure_node(v);
            g.add_edge(u, v, 1.0)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_list.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_list.len()
    }

    pub fn has_node(&self, u: NodeId) -> bool {
        self.adj.contains_key(&u)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edge_pos.contains_key(&edge_key(u, v))
    }

    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.adj
            .get(&u)?
            .iter()
            .find(|&&(x, _)| x == v)
            .map(|&(_, w)| w)
    }

    /// Sorted node iteration.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        let mut ids = self.node_list.clone();
        ids.sort_unstable();
        ids.into_iter()
    }

    /// Deterministic (sorted) edge iteration with weights, smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        let mut out: Vec<(NodeId, NodeId, f64)> = self
            .edge_list
            .iter()
            .map(|&(u, v)| (u, v, self.edge_weight(u, v).expect("indexed edge")))
            .collect();
        out.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out.into_iter()
    }

    /// Neighbor iteration in insertion order (deterministic for a
    /// deterministic operation sequence).
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.adj.get(&u).into_iter().flatten().copied()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj.get(&u).map_or(0, |n| n.len())
    }

    pub fn weighted_degree(&self, u: NodeId) -> f64 {
        self.adj.get(&u).map_or(0.0, |n| n.iter().map(|&(_, w)| w).sum())
    }

    /// Inserts a fresh node with an id above every id ever used.
    pub fn fresh_node(&mut self) -> NodeId {
        let id = self.next_id;
        self.ensure_node(id);
        id
    }

    /// Inserts a node with an explicit id; no-op if present.
    pub fn ensure_node(&mut self, id: NodeId) {
        if self.adj.contains_key(&id) {
            return;
        }
        self.adj.insert(id, Vec::new());
        self.attrs.insert(id, NodeAttrs::default());
        self.node_pos.insert(id, self.node_list.len());
        self.node_list.push(id);
        self.next_id = self.next_id.max(id + 1);
    }

    pub fn remove_node(&mut self, id: NodeId) -> Result<()> {
        let nbrs: Vec<NodeId> = self
            .adj
            .get(&id)
            .ok_or(Error::NodeNotFound(id))?
            .iter()
            .map(|&(v, _)| v)
            .collect();
        for v in nbrs {
            self.remove_edge(id, v)?;
        }
        self.adj.remove(&id);
        self.attrs.remove(&id);
        let pos = self.node_pos.remove(&id).expect("node index in sync");
        let last = self.node_list.pop().expect("node list non-empty");
        if last != id {
            self.node_list[pos] = last;
            self.node_pos.insert(last, pos);
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: f64) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.has_node(u) {
            return Err(Error::NodeNotFound(u));
        }
        if !self.has_node(v) {
            return Err(Error::NodeNotFound(v));
        }
        if !(weight > 0.0) {
            return Err(Error::InvalidWeight(weight));
        }
        let key = edge_key(u, v);
        if self.edge_pos.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        self.adj.get_mut(&u).unwrap().push((v, weight));
        self.adj.get_mut(&v).unwrap().push((u, weight));
        self.edge_pos.insert(key, self.edge_list.len());
        self.edge_list.push(key);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        let key = edge_key(u, v);
        let pos = self
            .edge_pos
            .remove(&key)
            .ok_or(Error::EdgeNotFound(key.0, key.1))?;
        let drop_from = |list: &mut Vec<(NodeId, f64)>, target: NodeId| {
            let i = list
                .iter()
                .position(|&(x, _)| x == target)
                .expect("adjacency in sync with edge index");
            list.swap_remove(i);
        };
        drop_from(self.adj.get_mut(&u).unwrap(), v);
        drop_from(self.adj.get_mut(&v).unwrap(), u);
        self.edge_annotations.remove(&key);
        let last = self.edge_list.pop().expect("edge list non-empty");
        if last != key {
            self.edge_list[pos] = last;
            self.edge_pos.insert(last, pos);
        }
        Ok(())
    }

    pub fn attrs(&self, u: NodeId) -> Option<&NodeAttrs> {
        self.attrs.get(&u)
    }

    pub fn attrs_mut(&mut self, u: NodeId) -> Option<&mut NodeAttrs> {
        self.attrs.get_mut(&u)
    }

    pub fn size(&self, u: NodeId) -> u64 {
        self.attrs.get(&u).map_or(0, |a| a.size)
    }

    pub fn internal_edge_weight(&self, u: NodeId) -> f64 {
        self.attrs.get(&u).map_or(0.0, |a| a.internal_edge_weight)
    }

    pub fn edge_annotation(&self, u: NodeId, v: NodeId) -> Option<&[u8]> {
        self.edge_annotations
            .get(&edge_key(u, v))
            .map(Vec::as_slice)
    }

    pub fn set_edge_annotation(&mut self, u: NodeId, v: NodeId, annotation: Option<Vec<u8>>) {
        let key = edge_key(u, v);
        match annotation {
            Some(a) => {
                self.edge_annotations.insert(key, a);
            }
            None => {
                self.edge_annotations.remove(&key);
            }
        }
    }

    pub fn max_node_id(&self) -> Option<NodeId> {
        self.node_list.iter().max().copied()
    }

    /// Uniform draw from the node set.
    pub fn random_node<R: Rng>(&self, rng: &mut R) -> Result<NodeId> {
        if self.node_list.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(self.node_list[rng.random_range(0..self.node_list.len())])
    }

    /// Uniform draw from the edge set.
    pub fn random_edge<R: Rng>(&self, rng: &mut R) -> Result<(NodeId, NodeId)> {
        if self.edge_list.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(self.edge_list[rng.random_range(0..self.edge_list.len())])
    }

    /// Unweighted BFS from `source`, stopping at hop distance `horizon`.
    /// Returns (node, distance) pairs in visit order; the source is first
    /// with distance 0. Visit order is deterministic.
    pub fn bfs_distances(&self, source: NodeId, horizon: usize) -> Result<Vec<(NodeId, usize)>> {
        if !self.has_node(source) {
            return Err(Error::NodeNotFound(source));
        }
        let mut out = Vec::new();
        let mut seen: HashMap<NodeId, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(source, 0);
        queue.push_back((source, 0usize));
        while let Some((u, d)) = queue.pop_front() {
            out.push((u, d));
            if d == horizon {
                continue;
            }
            for (v, _) in self.neighbors(u) {
                if !seen.contains_key(&v) {
                    seen.insert(v, d + 1);
                    queue.push_back((v, d + 1));
                }
            }
        }
        Ok(out)
    }

    /// |E| / (n(n-1)/2); 0 by definition when n < 2.
    pub fn density(&self) -> f64 {
        let n = self.node_count();
        if n < 2 {
            return 0.0;
        }
        let possible = n as f64 * (n as f64 - 1.0) / 2.0;
        self.edge_count() as f64 / possible
    }

    /// Connected components, largest first; ties broken by smallest
    /// minimum node id. Each component is sorted.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        let mut seen: HashMap<NodeId, ()> = HashMap::new();
        for start in self.nodes() {
            if seen.contains_key(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::new();
            seen.insert(start, ());
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for (v, _) in self.neighbors(u) {
                    if !seen.contains_key(&v) {
                        seen.insert(v, ());
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        // Node iteration is in ascending id order, so among equal-size
        // components the one containing the smallest id comes first.
        comps.sort_by(|a, b| b.len().cmp(&a.len()));
        comps
    }

    /// Induced subgraph on the largest connected component, ids and
    /// attributes preserved. Empty graph maps to an empty graph.
    pub fn largest_component(&self) -> Graph {
        match self.connected_components().into_iter().next() {
            Some(comp) => self.induced_subgraph(&comp),
            None => Graph::new(),
        }
    }

    /// Induced subgraph on `nodes` (ids, attributes, and weights kept).
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut g = Graph::new();
        for &u in nodes {
            if let Some(a) = self.attrs.get(&u) {
                g.ensure_node(u);
                *g.attrs_mut(u).unwrap() = a.clone();
            }
        }
        for &u in nodes {
            for (v, w) in self.neighbors(u) {
                if u < v && g.has_node(v) {
                    g.add_edge(u, v, w).expect("induced edge is valid");
                    if let Some(a) = self.edge_annotation(u, v) {
                        g.set_edge_annotation(u, v, Some(a.to_vec()));
                    }
                }
            }
        }
        g.next_id = self.next_id;
        g
    }

    /// Structural invariant check: endpoints exist, keys normalized,
    /// index vectors in sync, sizes and weights in range.
    pub fn validate(&self) -> Result<()> {
        if self.node_list.len() != self.adj.len() {
            return Err(Error::InvalidAdjustment("node index out of sync".into()));
        }
        for (&u, nbrs) in &self.adj {
            if self.size(u) < 1 {
                return Err(Error::InvalidAdjustment(format!("node {u} has size 0")));
            }
            for &(v, w) in nbrs {
                if u == v {
                    return Err(Error::SelfLoop(u));
                }
                if !self.adj.contains_key(&v) {
                    return Err(Error::NodeNotFound(v));
                }
                if !(w > 0.0) {
                    return Err(Error::InvalidWeight(w));
                }
                if self.edge_weight(v, u) != Some(w) {
                    return Err(Error::InvalidAdjustment(format!(
                        "asymmetric edge {u}-{v}"
                    )));
                }
                if u < v && !self.edge_pos.contains_key(&(u, v)) {
                    return Err(Error::InvalidAdjustment(format!(
                        "edge {u}-{v} missing from index"
                    )));
                }
            }
        }
        if self.edge_list.len() != self.edge_pos.len()
            || self.edge_list.len() * 2 != self.adj.values().map(|n| n.len()).sum::<usize>()
        {
            return Err(Error::InvalidAdjustment("edge index out of sync".into()));
        }
        Ok(())
    }
}
