//! Structural statistics for a single graph and normalized ensemble
//! comparisons. Distance-based and spectral statistics are computed on
//! the largest connected component when the graph is disconnected, and
//! the report is flagged accordingly.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::vcycle::SCHEMA_VERSION;

/// Global transitivity: 3 * triangles / connected triples; 0 when the
/// graph has no connected triples.
pub fn transitivity(g: &Graph) -> f64 {
    let mut closed = 0u64; // sum over edges of common-neighbor counts = 3T
    for (u, v, _) in g.edges() {
        let (a, b) = if g.degree(u) <= g.degree(v) { (u, v) } else { (v, u) };
        closed += g.neighbors(a).filter(|&(x, _)| g.has_edge(x, b)).count() as u64;
    }
    let triples: u64 = g
        .nodes()
        .map(|u| {
            let d = g.degree(u) as u64;
            d * (d - 1) / 2
        })
        .sum();
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

/// Mean of the per-node local clustering coefficients (0 for degree < 2).
pub fn avg_local_clustering(g: &Graph) -> f64 {
    if g.node_count() == 0 {
        return 0.0;
    }
    let total: f64 = g
        .nodes()
        .map(|u| {
            let nbrs: Vec<NodeId> = g.neighbors(u).map(|(v, _)| v).collect();
            let d = nbrs.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for i in 0..d {
                for j in (i + 1)..d {
                    if g.has_edge(nbrs[i], nbrs[j]) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (d * (d - 1)) as f64
        })
        .sum();
    total / g.node_count() as f64
}

/// Newman-Girvan modularity of a partition (node -> community).
pub fn modularity(g: &Graph, communities: &HashMap<NodeId, usize>) -> f64 {
    let two_m: f64 = 2.0 * g.edges().map(|(_, _, w)| w).sum::<f64>();
    if two_m == 0.0 {
        return 0.0;
    }
    let n_comms = communities.values().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0.0f64; n_comms];
    let mut total_deg = vec![0.0f64; n_comms];
    for (u, v, w) in g.edges() {
        if communities[&u] == communities[&v] {
            internal[communities[&u]] += w;
        }
    }
    for u in g.nodes() {
        total_deg[communities[&u]] += g.weighted_degree(u);
    }
    internal
        .iter()
        .zip(total_deg.iter())
        .map(|(&i, &t)| 2.0 * i / two_m - (t / two_m).powi(2))
        .sum()
}

/// Louvain community detection; returns the node -> community map and
/// its modularity. Node visit order is shuffled with the provided rng.
pub fn modularity_louvain<R: Rng>(g: &Graph, rng: &mut R) -> Result<(HashMap<NodeId, usize>, f64)> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    // Work representation allowing self-loops for the aggregation phase.
    let ids: Vec<NodeId> = g.nodes().collect();
    let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let n = ids.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut self_loops = vec![0.0f64; n];
    for (u, v, w) in g.edges() {
        let (iu, iv) = (index[&u], index[&v]);
        adj[iu].push((iv, w));
        adj[iv].push((iu, w));
    }
    // membership[level][meta-node] chains down to original nodes.
    let mut node_of: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let two_m: f64 = 2.0 * g.edges().map(|(_, _, w)| w).sum::<f64>();

    loop {
        let cur_n = adj.len();
        let mut community: Vec<usize> = (0..cur_n).collect();
        let mut comm_total: Vec<f64> = (0..cur_n)
            .map(|i| adj[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loops[i])
            .collect();
        let degrees: Vec<f64> = comm_total.clone();
        let mut order: Vec<usize> = (0..cur_n).collect();
        order.shuffle(rng);
        let mut improved_any = false;
        loop {
            let mut moved = false;
            for &u in &order {
                let cu = community[u];
                // Weight from u to each neighboring community.
                let mut to_comm: HashMap<usize, f64> = HashMap::new();
                for &(v, w) in &adj[u] {
                    if v != u {
                        *to_comm.entry(community[v]).or_insert(0.0) += w;
                    }
                }
                comm_total[cu] -= degrees[u];
                let base = to_comm.get(&cu).copied().unwrap_or(0.0);
                let mut best = (cu, 0.0f64);
                let mut cands: Vec<(usize, f64)> = to_comm.into_iter().collect();
                cands.sort_by(|a, b| a.0.cmp(&b.0));
                for (c, w_uc) in cands {
                    let gain = (w_uc - base) - degrees[u] * (comm_total[c] - comm_total[cu]) / two_m;
                    if gain > best.1 + 1e-12 {
                        best = (c, gain);
                    }
                }
                comm_total[best.0] += degrees[u];
                if best.0 != cu {
                    community[u] = best.0;
                    moved = true;
                    improved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        if !improved_any {
            break;
        }
        // Aggregate communities into meta-nodes.
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        for &c in &community {
            let next = relabel.len();
            relabel.entry(c).or_insert(next);
        }
        let new_n = relabel.len();
        if new_n == cur_n {
            break;
        }
        let mut new_nodes: Vec<Vec<usize>> = vec![Vec::new(); new_n];
        for (u, members) in node_of.iter().enumerate() {
            new_nodes[relabel[&community[u]]].extend_from_slice(members);
        }
        let mut new_self = vec![0.0f64; new_n];
        let mut new_weights: Vec<HashMap<usize, f64>> = vec![HashMap::new(); new_n];
        for u in 0..cur_n {
            let cu = relabel[&community[u]];
            new_self[cu] += self_loops[u];
            for &(v, w) in &adj[u] {
                let cv = relabel[&community[v]];
                if cu == cv {
                    if u < v {
                        new_self[cu] += w;
                    }
                } else {
                    *new_weights[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        adj = new_weights
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, f64)> = m.into_iter().collect();
                v.sort_by_key(|&(i, _)| i);
                v
            })
            .collect();
        self_loops = new_self;
        node_of = new_nodes;
    }

    let mut partition: HashMap<NodeId, usize> = HashMap::new();
    for (c, members) in node_of.iter().enumerate() {
        for &m in members {
            partition.insert(ids[m], c);
        }
    }
    let q = modularity(g, &partition);
    Ok((partition, q))
}

/// Exact betweenness centrality (Brandes), normalized by (n-1)(n-2)/2.
pub fn betweenness(g: &Graph) -> HashMap<NodeId, f64> {
    let ids: Vec<NodeId> = g.nodes().collect();
    let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let n = ids.len();
    let adj: Vec<Vec<usize>> = ids
        .iter()
        .map(|&u| g.neighbors(u).map(|(v, _)| index[&v]).collect())
        .collect();
    let mut centrality = vec![0.0f64; n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    for s in 0..n {
        stack.clear();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    let norm = if n > 2 {
        (n - 1) as f64 * (n - 2) as f64 / 2.0 * 2.0
    } else {
        1.0
    };
    // Each unordered pair is counted from both endpoints, hence the
    // doubled denominator above.
    ids.iter()
        .enumerate()
        .map(|(i, &u)| (u, centrality[i] / norm))
        .collect()
}

/// Eigenvector centrality by power iteration on A + I (the shift removes
/// sign oscillation on bipartite graphs without changing the principal
/// eigenvector). L2-normalized.
pub fn eigenvector_centrality(
    g: &Graph,
    tol: f64,
    max_iter: usize,
) -> Result<HashMap<NodeId, f64>> {
    let ids: Vec<NodeId> = g.nodes().collect();
    let n = ids.len();
    if n == 0 {
        return Ok(HashMap::new());
    }
    let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut x = vec![1.0f64 / (n as f64).sqrt(); n];
    for iter in 0..max_iter {
        let mut next = x.clone(); // the +I term
        for (i, &u) in ids.iter().enumerate() {
            for (v, w) in g.neighbors(u) {
                next[index[&v]] += w * x[i];
            }
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut next {
            *v /= norm;
        }
        let diff: f64 = next
            .iter()
            .zip(x.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        x = next;
        if diff < tol * n as f64 {
            return Ok(ids.iter().enumerate().map(|(i, &u)| (u, x[i])).collect());
        }
        let _ = iter;
    }
    Err(Error::NonConvergence(max_iter))
}

/// Exact all-sources BFS distance statistics on a connected graph:
/// (mean eccentricity, mean pairwise distance, harmonic mean distance).
pub fn distance_stats(g: &Graph) -> (f64, f64, f64) {
    let n = g.node_count();
    if n < 2 {
        return (0.0, 0.0, 0.0);
    }
    let mut ecc_sum = 0.0f64;
    let mut dist_sum = 0.0f64;
    let mut inv_sum = 0.0f64;
    for u in g.nodes() {
        let dists = g.bfs_distances(u, usize::MAX).expect("node exists");
        let mut ecc = 0usize;
        for &(v, d) in &dists {
            if d > ecc {
                ecc = d;
            }
            if v > u {
                dist_sum += d as f64;
                inv_sum += 1.0 / d as f64;
            }
        }
        ecc_sum += ecc as f64;
    }
    let pairs = (n * (n - 1) / 2) as f64;
    (ecc_sum / n as f64, dist_sum / pairs, pairs / inv_sum)
}

/// Pearson correlation of degrees over edge-end pairs (both orientations).
/// `None` when the degrees at edge ends have zero variance.
pub fn newman_assortativity(g: &Graph) -> Option<f64> {
    let m = g.edge_count();
    if m == 0 {
        return None;
    }
    let mut sx = 0.0f64;
    let mut sxx = 0.0f64;
    let mut sxy = 0.0f64;
    for (u, v, _) in g.edges() {
        let (du, dv) = (g.degree(u) as f64, g.degree(v) as f64);
        sx += du + dv;
        sxx += du * du + dv * dv;
        sxy += 2.0 * du * dv;
    }
    let count = 2.0 * m as f64;
    let mean = sx / count;
    let var = sxx / count - mean * mean;
    if var <= 1e-12 {
        return None;
    }
    Some((sxy / count - mean * mean) / var)
}

/// Sum over edges of the endpoint degree product.
pub fn s_metric(g: &Graph) -> f64 {
    g.edges()
        .map(|(u, v, _)| g.degree(u) as f64 * g.degree(v) as f64)
        .sum()
}

/// Discrete maximum-likelihood power-law exponent over degrees >= 1 with
/// d_min fixed at 1: alpha = 1 + N / sum(ln(d_i / 0.5)).
pub fn powerlaw_exponent(g: &Graph) -> Result<f64> {
    let degrees: Vec<usize> = g.nodes().map(|u| g.degree(u)).filter(|&d| d >= 1).collect();
    if degrees.len() < 10 {
        return Err(Error::DegenerateDegrees);
    }
    if degrees.iter().all(|&d| d == degrees[0]) {
        return Err(Error::DegenerateDegrees);
    }
    let sum: f64 = degrees.iter().map(|&d| (d as f64 / 0.5).ln()).sum();
    Ok(1.0 + degrees.len() as f64 / sum)
}

/// Survival form of the degree distribution: fraction of nodes with
/// degree >= k, for k = 0..=max degree. Starts at 1.0 and is
/// nonincreasing.
pub fn degree_survival(g: &Graph) -> Vec<(usize, f64)> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let max_deg = g.nodes().map(|u| g.degree(u)).max().unwrap_or(0);
    let mut counts = vec![0usize; max_deg + 1];
    for u in g.nodes() {
        counts[g.degree(u)] += 1;
    }
    let mut out = Vec::with_capacity(max_deg + 1);
    let mut at_least = n;
    for (k, &c) in counts.iter().enumerate() {
        out.push((k, at_least as f64 / n as f64));
        at_least -= c;
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: String,
    pub num_nodes: usize,
    pub num_edges: usize,
    pub num_components: usize,
    /// True when structural metrics were computed on the largest
    /// component because the graph was disconnected.
    pub used_largest_component: bool,
    pub avg_degree: f64,
    pub clustering: f64,
    pub avg_local_clustering: f64,
    pub modularity: f64,
    pub avg_betweenness: f64,
    pub avg_eigenvector_centrality: f64,
    pub mean_eccentricity: f64,
    pub avg_distance: f64,
    pub harmonic_avg_distance: f64,
    pub powerlaw_exponent: Option<f64>,
    pub newman_assortativity: Option<f64>,
    pub s_metric: f64,
    pub degree_cdf: Vec<(usize, f64)>,
}

impl MetricsReport {
    pub fn compute(g: &Graph, seed: u64) -> Result<MetricsReport> {
        if g.edge_count() == 0 {
            return Err(Error::NoEdges);
        }
        let comps = g.connected_components();
        let disconnected = comps.len() > 1;
        let lc;
        let work = if disconnected {
            lc = g.largest_component();
            &lc
        } else {
            g
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, q) = modularity_louvain(work, &mut rng)?;
        let bc = betweenness(work);
        let ec = eigenvector_centrality(work, 1e-8, 1000)?;
        // Sum in node order: map iteration order varies per process and
        // float addition is order-sensitive, which would break
        // byte-stable output.
        let avg_betweenness =
            work.nodes().map(|u| bc[&u]).sum::<f64>() / bc.len() as f64;
        let avg_ec = work.nodes().map(|u| ec[&u]).sum::<f64>() / ec.len() as f64;
        let (mean_ecc, avg_dist, harmonic) = distance_stats(work);
        Ok(MetricsReport {
            schema_version: SCHEMA_VERSION.to_string(),
            num_nodes: g.node_count(),
            num_edges: g.edge_count(),
            num_components: comps.len(),
            used_largest_component: disconnected,
            avg_degree: 2.0 * g.edge_count() as f64 / g.node_count() as f64,
            clustering: transitivity(work),
            avg_local_clustering: avg_local_clustering(work),
            modularity: q,
            avg_betweenness,
            avg_eigenvector_centrality: avg_ec,
            mean_eccentricity: mean_ecc,
            avg_distance: avg_dist,
            harmonic_avg_distance: harmonic,
            powerlaw_exponent: powerlaw_exponent(work).ok(),
            newman_assortativity: newman_assortativity(work),
            s_metric: s_metric(work),
            degree_cdf: degree_survival(work),
        })
    }

    /// Scalar metrics by name, in a fixed order.
    pub fn scalars(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("num_nodes", Some(self.num_nodes as f64)),
            ("num_edges", Some(self.num_edges as f64)),
            ("avg_degree", Some(self.avg_degree)),
            ("clustering", Some(self.clustering)),
            ("avg_local_clustering", Some(self.avg_local_clustering)),
            ("modularity", Some(self.modularity)),
            ("avg_betweenness", Some(self.avg_betweenness)),
            (
                "avg_eigenvector_centrality",
                Some(self.avg_eigenvector_centrality),
            ),
            ("mean_eccentricity", Some(self.mean_eccentricity)),
            ("avg_distance", Some(self.avg_distance)),
            ("harmonic_avg_distance", Some(self.harmonic_avg_distance)),
            ("powerlaw_exponent", self.powerlaw_exponent),
            ("newman_assortativity", self.newman_assortativity),
            ("s_metric", Some(self.s_metric)),
            ("num_components", Some(self.num_components as f64)),
        ]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricSummary {
    pub name: String,
    pub original: Option<f64>,
    /// True when replica values are expressed relative to the original
    /// (original maps to 1.0); false means raw values.
    pub normalized: bool,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub lo_whisker: f64,
    pub hi_whisker: f64,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub schema_version: String,
    pub replica_count: usize,
    pub metrics: Vec<MetricSummary>,
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Normalizes replica metric values to the original (1.0 = original) and
/// summarizes each as a boxplot: median, quartiles, and whiskers at the
/// most extreme points within 1.5 IQR of the box. Metrics whose original
/// value is 0 or undefined are reported raw.
pub fn compare_ensemble(
    original: &MetricsReport,
    replicas: &[MetricsReport],
) -> Result<EnsembleSummary> {
    if replicas.len() < 2 {
        return Err(Error::InvalidConfig(
            "ensemble comparison requires at least 2 replicas".into(),
        ));
    }
    let orig = original.scalars();
    let mut metrics = Vec::new();
    for (i, &(name, orig_val)) in orig.iter().enumerate() {
        let mut values: Vec<f64> = replicas
            .iter()
            .filter_map(|r| r.scalars()[i].1)
            .filter(|v| v.is_finite())
            .collect();
        if values.is_empty() {
            continue;
        }
        let normalized = matches!(orig_val, Some(o) if o != 0.0);
        if let (true, Some(o)) = (normalized, orig_val) {
            for v in &mut values {
                *v /= o;
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q1 = percentile(&values, 0.25);
        let median = percentile(&values, 0.5);
        let q3 = percentile(&values, 0.75);
        let iqr = q3 - q1;
        let lo_bound = q1 - 1.5 * iqr;
        let hi_bound = q3 + 1.5 * iqr;
        let lo_whisker = values
            .iter()
            .copied()
            .find(|&v| v >= lo_bound)
            .unwrap_or(q1);
        let hi_whisker = values
            .iter()
            .rev()
            .copied()
            .find(|&v| v <= hi_bound)
            .unwrap_or(q3);
        metrics.push(MetricSummary {
            name: name.to_string(),
            original: orig_val,
            normalized,
            median,
            q1,
            q3,
            lo_whisker,
            hi_whisker,
            n: values.len(),
        });
    }
    Ok(EnsembleSummary {
        schema_version: SCHEMA_VERSION.to_string(),
        replica_count: replicas.len(),
        metrics,
    })
}

impl EnsembleSummary {
    /// One row per metric: name, original, median, q1, q3, whiskers.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "metric,original,median,q1,q3,lo_whisker,hi_whisker,normalized")?;
        for m in &self.metrics {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                m.name,
                m.original.map_or(String::new(), |v| v.to_string()),
                m.median,
                m.q1,
                m.q3,
                m.lo_whisker,
                m.hi_whisker,
                m.normalized
            )?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k4_minus_edge() -> Graph {
        Graph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn transitivity_examples() {
        let t3 = Graph::from_edges([(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(transitivity(&t3), 1.0);
        let star = Graph::from_edges([(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(transitivity(&star), 0.0);
        // 2 triangles, 8 connected triples.
        assert!((transitivity(&k4_minus_edge()) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn trivial_partition_has_zero_modularity() {
        let g = k4_minus_edge();
        let part: HashMap<NodeId, usize> = g.nodes().map(|u| (u, 0)).collect();
        assert!(modularity(&g, &part).abs() < 1e-12);
    }

    #[test]
    fn louvain_separates_bridged_cliques() {
        let mut edges = Vec::new();
        for base in [0u64, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((0, 4));
        let g = Graph::from_edges(edges).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (part, q) = modularity_louvain(&g, &mut rng).unwrap();
        // Exact Q of the two-block partition: 2*(6/13) - 2*(25/26)^2... via formula
        let two_block: HashMap<NodeId, usize> =
            g.nodes().map(|u| (u, if u < 4 { 0 } else { 1 })).collect();
        let q_expected = modularity(&g, &two_block);
        assert!(q_expected > 0.4);
        assert!(q >= q_expected - 1e-9, "q = {q}, expected >= {q_expected}");
        assert_eq!(part[&0], part[&3]);
        assert_eq!(part[&4], part[&7]);
        assert_ne!(part[&0], part[&4]);
    }

    #[test]
    fn louvain_rejects_edgeless_graph() {
        let mut g = Graph::new();
        g.ensure_node(0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            modularity_louvain(&g, &mut rng),
            Err(Error::NoEdges)
        ));
    }

    #[test]
    fn p3_center_betweenness_is_one() {
        let g = Graph::from_edges([(0, 1), (1, 2)]).unwrap();
        let bc = betweenness(&g);
        assert!((bc[&1] - 1.0).abs() < 1e-12);
        assert!(bc[&0].abs() < 1e-12);
    }

    #[test]
    fn c4_eigenvector_centralities_are_equal() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let ec = eigenvector_centrality(&g, 1e-8, 1000).unwrap();
        for u in g.nodes() {
            assert!((ec[&u] - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn p4_distance_stats() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 3)]).unwrap();
        let (ecc, avg, harmonic) = distance_stats(&g);
        assert!((avg - 10.0 / 6.0).abs() < 1e-12);
        assert!((ecc - (3.0 + 2.0 + 2.0 + 3.0) / 4.0).abs() < 1e-12);
        // harmonic mean = 6 / (1+1/2+1/3+1+1/2+1)
        let expected = 6.0 / (1.0 + 0.5 + 1.0 / 3.0 + 1.0 + 0.5 + 1.0);
        assert!((harmonic - expected).abs() < 1e-12);
    }

    #[test]
    fn assortativity_undefined_for_regular_graphs() {
        let c4 = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(newman_assortativity(&c4), None);
    }

    #[test]
    fn assortativity_matches_direct_pearson_on_p4() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 3)]).unwrap();
        // Ordered edge-end degree pairs: (1,2),(2,1),(2,2),(2,2),(2,1),(1,2)
        let xs = [1.0, 2.0, 2.0, 2.0, 2.0, 1.0f64];
        let ys = [2.0, 1.0, 2.0, 2.0, 1.0, 2.0f64];
        let n = 6.0;
        let mx = xs.iter().sum::<f64>() / n;
        let cov = xs
            .iter()
            .zip(ys.iter())
            .map(|(x, y)| (x - mx) * (y - mx))
            .sum::<f64>()
            / n;
        let var = xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>() / n;
        let expected = cov / var;
        let got = newman_assortativity(&g).unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got}, want {expected}");
    }

    #[test]
    fn s_metric_examples() {
        let t3 = Graph::from_edges([(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(s_metric(&t3), 12.0);
        let star = Graph::from_edges([(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(s_metric(&star), 16.0);
        let p4 = Graph::from_edges([(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(s_metric(&p4), 8.0);
    }

    #[test]
    fn powerlaw_rejects_constant_degrees() {
        let c12 = Graph::from_edges((0..12).map(|i| (i, (i + 1) % 12))).unwrap();
        assert!(matches!(
            powerlaw_exponent(&c12),
            Err(Error::DegenerateDegrees)
        ));
    }

    #[test]
    fn degree_survival_is_monotone_from_one() {
        let g = k4_minus_edge();
        let cdf = degree_survival(&g);
        assert_eq!(cdf[0].1, 1.0);
        for w in cdf.windows(2) {
            assert!(w[1].1 <= w[0].1);
        }
    }

    #[test]
    fn identical_replicas_normalize_to_one() {
        let g = k4_minus_edge();
        let orig = MetricsReport::compute(&g, 0).unwrap();
        let reps = vec![orig.clone(), orig.clone(), orig.clone()];
        let summary = compare_ensemble(&orig, &reps).unwrap();
        for m in &summary.metrics {
            if m.normalized {
                assert!((m.median - 1.0).abs() < 1e-12, "{}", m.name);
                assert!((m.q3 - m.q1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_symmetric_replicas_have_median_one() {
        let g = k4_minus_edge();
        let orig = MetricsReport::compute(&g, 0).unwrap();
        let mut lo = orig.clone();
        let mut hi = orig.clone();
        lo.clustering = orig.clustering * 0.8;
        hi.clustering = orig.clustering * 1.2;
        let summary = compare_ensemble(&orig, &[lo, hi]).unwrap();
        let m = summary.get("clustering").unwrap();
        assert!((m.median - 1.0).abs() < 1e-12);
    }

    #[test]
    fn comparison_is_permutation_invariant() {
        let g = k4_minus_edge();
        let orig = MetricsReport::compute(&g, 0).unwrap();
        let mut a = orig.clone();
        a.avg_degree *= 1.1;
        let mut b = orig.clone();
        b.avg_degree *= 0.9;
        let s1 = compare_ensemble(&orig, &[a.clone(), b.clone(), orig.clone()]).unwrap();
        let s2 = compare_ensemble(&orig, &[orig.clone(), b, a]).unwrap();
        for (x, y) in s1.metrics.iter().zip(s2.metrics.iter()) {
            assert_eq!(x.median, y.median);
            assert_eq!(x.q1, y.q1);
        }
    }
}
