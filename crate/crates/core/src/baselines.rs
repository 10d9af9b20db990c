//! Comparison generators, parameterized to match an input graph: random
//! graphs, preferential attachment, small-world, expected-degree, and
//! single-round edge rewiring/swapping.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

/// G(n, p): every pair is an edge independently with probability p.
/// Uses geometric skipping over the pair sequence, so sparse graphs cost
/// O(n + m) rather than O(n^2).
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.ensure_node(i as NodeId);
    }
    if p <= 0.0 || n < 2 {
        return g;
    }
    if p >= 1.0 {
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i as NodeId, j as NodeId, 1.0).unwrap();
            }
        }
        return g;
    }
    let lp = (1.0 - p).ln();
    let mut v: i64 = 1;
    let mut w: i64 = -1;
    let n = n as i64;
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / lp).floor() as i64;
        while w >= v && v < n {
            w -= v;
            v += 1;
        }
        if v < n {
            g.add_edge(w as NodeId, v as NodeId, 1.0).unwrap();
        }
    }
    g
}

/// Preferential attachment with m edges per arriving node, seeded with an
/// m-node edgeless core; the first arrival connects to all core nodes.
pub fn barabasi_albert<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
    assert!(m >= 1 && m < n, "requires 1 <= m < n");
    let mut g = Graph::new();
    for i in 0..n {
        g.ensure_node(i as NodeId);
    }
    // Endpoint pool: each node appears once per incident edge, which makes
    // uniform draws from it degree-proportional.
    let mut pool: Vec<NodeId> = Vec::with_capacity(2 * m * n);
    for i in 0..m {
        g.add_edge(m as NodeId, i as NodeId, 1.0).unwrap();
        pool.push(m as NodeId);
        pool.push(i as NodeId);
    }
    for u in (m + 1)..n {
        let u = u as NodeId;
        let mut targets = Vec::with_capacity(m);
        while targets.len() < m {
            let t = pool[rng.random_range(0..pool.len())];
            if t != u && !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            g.add_edge(u, t, 1.0).unwrap();
            pool.push(u);
            pool.push(t);
        }
    }
    g
}

/// Ring lattice with k nearest neighbors (k even), each edge rewired with
/// probability p by replacing its clockwise endpoint with a random node.
pub fn watts_strogatz<R: Rng>(n: usize, k: usize, p: f64, rng: &mut R) -> Graph {
    assert!(k % 2 == 0 && k < n, "requires even k < n");
    let mut g = Graph::new();
    for i in 0..n {
        g.ensure_node(i as NodeId);
    }
    for i in 0..n {
        for j in 1..=(k / 2) {
            let v = ((i + j) % n) as NodeId;
            g.add_edge(i as NodeId, v, 1.0).unwrap();
        }
    }
    if p <= 0.0 {
        return g;
    }
    for i in 0..n {
        for j in 1..=(k / 2) {
            let u = i as NodeId;
            let v = ((i + j) % n) as NodeId;
            if !g.has_edge(u, v) || rng.random::<f64>() >= p {
                continue;
            }
            // Bounded retry; skip the rewire if no eligible target turns up.
            for _ in 0..10 {
                let w = rng.random_range(0..n) as NodeId;
                if w != u && !g.has_edge(u, w) {
                    g.remove_edge(u, v).unwrap();
                    g.add_edge(u, w, 1.0).unwrap();
                    break;
                }
            }
        }
    }
    g
}

/// Expected-degree model: pair {i, j} is an edge with probability
/// min(1, d_i d_j / sum(d)).
pub fn chung_lu<R: Rng>(degrees: &[f64], rng: &mut R) -> Graph {
    let mut g = Graph::new();
    for i in 0..degrees.len() {
        g.ensure_node(i as NodeId);
    }
    let total: f64 = degrees.iter().sum();
    if total <= 0.0 {
        return g;
    }
    for i in 0..degrees.len() {
        for j in (i + 1)..degrees.len() {
            let p = (degrees[i] * degrees[j] / total).min(1.0);
            if rng.random::<f64>() < p {
                g.add_edge(i as NodeId, j as NodeId, 1.0).unwrap();
            }
        }
    }
    g
}

/// Rewires `fraction` of the edges: each chosen edge keeps one endpoint
/// and moves the other to a uniform random non-neighbor. |E| is preserved.
pub fn edge_rewire<R: Rng>(g: &Graph, fraction: f64, rng: &mut R) -> Graph {
    let mut out = g.clone();
    let goal = (fraction * g.edge_count() as f64).round() as usize;
    let mut done = 0;
    let mut attempts = 0;
    while done < goal && attempts < goal.saturating_mul(10).max(1) {
        attempts += 1;
        let (u, v) = match out.random_edge(rng) {
            Ok(e) => e,
            Err(_) => break,
        };
        let keep = if rng.random::<bool>() { u } else { v };
        let w = match out.random_node(rng) {
            Ok(w) => w,
            Err(_) => break,
        };
        if w == keep || out.has_edge(keep, w) {
            continue;
        }
        out.remove_edge(u, v).unwrap();
        out.add_edge(keep, w, 1.0).unwrap();
        done += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SwapOutcome {
    pub goal: usize,
    pub achieved: usize,
}

impl SwapOutcome {
    pub fn complete(&self) -> bool {
        self.achieved >= self.goal
    }
}

/// Degree-preserving edge swaps: pairs {x1,x2},{y1,y2} become
/// {x1,y1},{x2,y2}. `fraction` is the share of edges touched, so the
/// number of swaps is half that many edges. Swaps creating self-loops or
/// duplicates are rejected, and with `preserve_connectivity` swaps that
/// disconnect the graph are rolled back. Gives up after 10x the goal in
/// attempts and reports the partial outcome.
pub fn edge_swap<R: Rng>(
    g: &Graph,
    fraction: f64,
    preserve_connectivity: bool,
    rng: &mut R,
) -> (Graph, SwapOutcome) {
    let mut out = g.clone();
    let goal = ((fraction * g.edge_count() as f64) / 2.0).round() as usize;
    let was_connected = g.connected_components().len() <= 1;
    let mut done = 0;
    let mut attempts = 0;
    while done < goal && attempts < goal.saturating_mul(10).max(1) {
        attempts += 1;
        let (x1, x2) = match out.random_edge(rng) {
            Ok(e) => e,
            Err(_) => break,
        };
        let (y1, y2) = match out.random_edge(rng) {
            Ok(e) => e,
            Err(_) => break,
        };
        if x1 == y1 || x1 == y2 || x2 == y1 || x2 == y2 {
            continue;
        }
        if out.has_edge(x1, y1) || out.has_edge(x2, y2) {
            continue;
        }
        out.remove_edge(x1, x2).unwrap();
        out.remove_edge(y1, y2).unwrap();
        out.add_edge(x1, y1, 1.0).unwrap();
        out.add_edge(x2, y2, 1.0).unwrap();
        if preserve_connectivity && was_connected && out.connected_components().len() > 1 {
            out.remove_edge(x1, y1).unwrap();
            out.remove_edge(x2, y2).unwrap();
            out.add_edge(x1, x2, 1.0).unwrap();
            out.add_edge(y1, y2, 1.0).unwrap();
            continue;
        }
        done += 1;
    }
    (out, SwapOutcome { goal, achieved: done })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn er_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(erdos_renyi(10, 0.0, &mut rng).edge_count(), 0);
        assert_eq!(erdos_renyi(10, 1.0, &mut rng).edge_count(), 45);
    }

    #[test]
    fn er_edge_count_matches_binomial_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 300;
        let p = 0.05;
        let pairs = (n * (n - 1) / 2) as f64;
        let samples = 500;
        let mean: f64 = (0..samples)
            .map(|_| erdos_renyi(n, p, &mut rng).edge_count() as f64)
            .sum::<f64>()
            / samples as f64;
        let expected = p * pairs;
        let sigma = (pairs * p * (1.0 - p)).sqrt() / (samples as f64).sqrt();
        assert!(
            (mean - expected).abs() < 3.0 * sigma,
            "mean {mean}, expected {expected}"
        );
    }

    #[test]
    fn ba_edge_count_is_forced_by_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = barabasi_albert(300, 10, &mut rng);
        assert_eq!(g.edge_count(), (300 - 10) * 10);
        let tree = barabasi_albert(5, 1, &mut rng);
        assert_eq!(tree.edge_count(), 4);
        assert_eq!(tree.connected_components().len(), 1);
    }

    #[test]
    fn ws_ring_lattice_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = watts_strogatz(250, 4, 0.0, &mut rng);
        assert_eq!(g.edge_count(), 500);
        for u in g.nodes() {
            assert_eq!(g.degree(u), 4);
        }
    }

    #[test]
    fn ws_rewiring_preserves_edge_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = watts_strogatz(100, 6, 0.2, &mut rng);
        assert_eq!(g.edge_count(), 300);
    }

    #[test]
    fn chung_lu_matches_expected_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let degs = [2.0, 2.0, 2.0];
        let samples = 2000;
        let mut totals = [0.0f64; 3];
        for _ in 0..samples {
            let g = chung_lu(&degs, &mut rng);
            for i in 0..3 {
                totals[i] += g.degree(i as NodeId) as f64;
            }
        }
        // Each pair probability is min(1, 4/6) = 2/3, expected degree 4/3;
        // the model caps at the target only asymptotically for small n.
        let p = (degs[0] * degs[1] / 6.0f64).min(1.0);
        let expected = 2.0 * p;
        let sigma = (2.0 * p * (1.0 - p) / samples as f64).sqrt();
        for t in totals {
            let mean = t / samples as f64;
            assert!(
                (mean - expected).abs() < 4.0 * sigma,
                "mean {mean}, expected {expected}"
            );
        }
    }

    #[test]
    fn edge_swap_preserves_degrees_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = erdos_renyi(80, 0.08, &mut rng);
        let (swapped, outcome) = edge_swap(&g, 0.3, false, &mut rng);
        assert!(outcome.achieved > 0);
        for u in g.nodes() {
            assert_eq!(g.degree(u), swapped.degree(u));
        }
        assert_eq!(g.edge_count(), swapped.edge_count());
    }

    #[test]
    fn edge_rewire_preserves_edge_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = erdos_renyi(80, 0.08, &mut rng);
        let rewired = edge_rewire(&g, 0.3, &mut rng);
        assert_eq!(g.edge_count(), rewired.edge_count());
    }

    #[test]
    fn generators_are_deterministic_under_fixed_seed() {
        let a = barabasi_albert(50, 3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = barabasi_albert(50, 3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let a = watts_strogatz(50, 4, 0.3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = watts_strogatz(50, 4, 0.3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
