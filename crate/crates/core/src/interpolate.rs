//! Projects an edited coarse graph back to the finer level. Surviving
//! aggregates and edge pre-images are reproduced verbatim; new coarse
//! nodes clone a randomly chosen existing aggregate under fresh ids, and
//! new coarse edges materialize a resampled number of fine edges via a
//! random matching between the two aggregates.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coarsen::Projection;
use crate::error::{Error, Result};
use crate::graph::{edge_key, Graph, NodeId};

pub fn interpolate<R: Rng>(
    coarse_edited: &Graph,
    proj: &Projection,
    fine: &Graph,
    rng: &mut R,
) -> Result<Graph> {
    let mut surviving: Vec<NodeId> = Vec::new();
    let mut new_coarse: Vec<NodeId> = Vec::new();
    for u in coarse_edited.nodes() {
        if proj.node_map.contains_key(&u) {
            surviving.push(u);
        } else {
            new_coarse.push(u);
        }
    }
    if surviving.is_empty() {
        return Err(Error::NoTemplate);
    }

    let mut out = Graph::new();
    let mut next_fresh = fine.max_node_id().map_or(0, |m| m + 1);
    // Coarse node -> fine members in the output graph.
    let mut members: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();

    let copy_node = |out: &mut Graph, id: NodeId, from: NodeId| {
        out.ensure_node(id);
        if let Some(a) = fine.attrs(from) {
            *out.attrs_mut(id).unwrap() = a.clone();
        }
    };

    for &u in &surviving {
        let agg = &proj.node_map[&u];
        for &f in agg {
            copy_node(&mut out, f, f);
        }
        for &(a, b) in &proj.internal_edges[&u] {
            let w = fine.edge_weight(a, b).expect("internal edge exists in fine");
            out.add_edge(a, b, w)?;
            if let Some(ann) = fine.edge_annotation(a, b) {
                out.set_edge_annotation(a, b, Some(ann.to_vec()));
            }
        }
        members.insert(u, agg.clone());
    }

    // New aggregates: clone the internal wiring of a random existing one.
    for &u in &new_coarse {
        let template = surviving[rng.random_range(0..surviving.len())];
        let agg = &proj.node_map[&template];
        let mut relabel: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        let mut fresh_members = Vec::with_capacity(agg.len());
        for &f in agg {
            let id = next_fresh;
            next_fresh += 1;
            copy_node(&mut out, id, f);
            relabel.insert(f, id);
            fresh_members.push(id);
        }
        for &(a, b) in &proj.internal_edges[&template] {
            let w = fine.edge_weight(a, b).expect("internal edge exists in fine");
            out.add_edge(relabel[&a], relabel[&b], w)?;
        }
        members.insert(u, fresh_members);
    }

    let surviving_edges: Vec<(NodeId, NodeId)> = coarse_edited
        .edges()
        .map(|(a, b, _)| (a, b))
        .filter(|k| proj.edge_map.contains_key(k))
        .collect();

    for (a, b, _) in coarse_edited.edges() {
        if let Some(pre) = proj.edge_map.get(&(a, b)) {
            for &(x, y) in pre {
                let w = fine.edge_weight(x, y).expect("crossing edge exists in fine");
                out.add_edge(x, y, w)?;
                if let Some(ann) = fine.edge_annotation(x, y) {
                    out.set_edge_annotation(x, y, Some(ann.to_vec()));
                }
            }
        } else {
            // New coarse edge: resample the pre-image size of an existing
            // coarse edge and insert a random matching of that many pairs.
            let l = if !surviving_edges.is_empty() {
                let k = surviving_edges[rng.random_range(0..surviving_edges.len())];
                proj.edge_map[&k].len()
            } else if !proj.edge_map.is_empty() {
                let keys: Vec<_> = proj.edge_map.keys().copied().collect();
                proj.edge_map[&keys[rng.random_range(0..keys.len())]].len()
            } else {
                1
            };
            let side_a = &members[&a];
            let side_b = &members[&b];
            let mut us: Vec<NodeId> = (0..l)
                .map(|_| side_a[rng.random_range(0..side_a.len())])
                .collect();
            let mut vs: Vec<NodeId> = (0..l)
                .map(|_| side_b[rng.random_range(0..side_b.len())])
                .collect();
            us.shuffle(rng);
            vs.shuffle(rng);
            let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
            for (&x, &y) in us.iter().zip(vs.iter()) {
                // Duplicate and self pairs are discarded, not retried.
                if x == y || !seen.insert(edge_key(x, y)) || out.has_edge(x, y) {
                    continue;
                }
                out.add_edge(x, y, 1.0)?;
            }
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarsen::coarsen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_graph() -> Graph {
        // Two triangles bridged, plus a pendant: coarsens nontrivially.
        Graph::from_edges([
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (2, 3),
            (5, 6),
        ])
        .unwrap()
    }

    #[test]
    fn unedited_round_trip_is_identity() {
        let g = sample_graph();
        let (coarse, proj) = coarsen(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let back = interpolate(&coarse, &proj, &g, &mut rng).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn deleted_coarse_node_drops_its_preimage() {
        let g = sample_graph();
        let (mut coarse, proj) = coarsen(&g).unwrap();
        let victim = coarse.nodes().next().unwrap();
        let pre = proj.node_map[&victim].clone();
        coarse.remove_node(victim).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let back = interpolate(&coarse, &proj, &g, &mut rng).unwrap();
        assert_eq!(back.node_count(), g.node_count() - pre.len());
        for f in pre {
            assert!(!back.has_node(f));
        }
        back.validate().unwrap();
    }

    #[test]
    fn new_coarse_node_clones_a_uniform_aggregate() {
        // Aggregates of fine sizes 3 and 5; a new coarse node should clone
        // each with probability 1/2 over seeds.
        let mut fine = Graph::new();
        for i in 0..8 {
            fine.ensure_node(i);
        }
        let mut proj = Projection::default();
        proj.node_map.insert(0, vec![0, 1, 2]);
        proj.node_map.insert(3, vec![3, 4, 5, 6, 7]);
        proj.internal_edges.insert(0, vec![]);
        proj.internal_edges.insert(3, vec![]);
        let mut coarse = Graph::new();
        coarse.ensure_node(0);
        coarse.ensure_node(3);
        coarse.fresh_node();
        let mut three = 0;
        let runs = 2000;
        for seed in 0..runs {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let back = interpolate(&coarse, &proj, &fine, &mut rng).unwrap();
            match back.node_count() {
                11 => three += 1,
                13 => {}
                n => panic!("unexpected node count {n}"),
            }
        }
        let frac = three as f64 / runs as f64;
        assert!((frac - 0.5).abs() < 0.05, "clone size-3 fraction {frac}");
    }

    #[test]
    fn fully_new_coarse_graph_is_rejected() {
        let fine = sample_graph();
        let proj = Projection::default();
        let mut coarse = Graph::new();
        coarse.ensure_node(100);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(
            interpolate(&coarse, &proj, &fine, &mut rng),
            Err(Error::NoTemplate)
        ));
    }

    #[test]
    fn new_coarse_edge_materializes_fine_edges() {
        let g = sample_graph();
        let (mut coarse, proj) = coarsen(&g).unwrap();
        // Insert a brand-new coarse edge between two non-adjacent coarse
        // nodes if possible; otherwise between any two.
        let ids: Vec<_> = coarse.nodes().collect();
        let mut pair = None;
        'outer: for &a in &ids {
            for &b in &ids {
                if a < b && !coarse.has_edge(a, b) {
                    pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        if let Some((a, b)) = pair {
            coarse.add_edge(a, b, 1.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let back = interpolate(&coarse, &proj, &g, &mut rng).unwrap();
            let sa: Vec<_> = proj.node_map[&a].clone();
            let sb: Vec<_> = proj.node_map[&b].clone();
            let crossing = back
                .edges()
                .filter(|&(x, y, _)| {
                    (sa.contains(&x) && sb.contains(&y)) || (sa.contains(&y) && sb.contains(&x))
                })
                .count();
            assert!(crossing >= 1);
            back.validate().unwrap();
        }
    }
}
