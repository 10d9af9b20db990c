//! Edit configuration: per-level node/edge edit rates, optional feature
//! switches, and sampling parameters. Levels beyond the configured lists
//! default to rate 0, which is also what stops the coarsening recursion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EditConfig {
    /// NER per level, finest first.
    pub node_edit_rates: Vec<f64>,
    /// EER per level, finest first.
    pub edge_edit_rates: Vec<f64>,
    /// Signed imbalance of node additions over deletions, per level.
    pub node_growth_rates: Vec<f64>,
    /// Signed imbalance of edge additions over deletions, per level.
    pub edge_growth_rates: Vec<f64>,
    pub bfs_horizon: usize,
    /// Edges sampled when estimating the alternative-path-length
    /// distribution; defaults to min(|E|, 1000).
    pub spath_sample_size: Option<usize>,
    pub deferential_detachment: bool,
    pub mutual_neighbor_protection: bool,
    /// When wiring a freshly inserted node, pick targets within the
    /// sampled-distance shell proportionally to degree instead of
    /// uniformly. A deleted node's edges disproportionately touched
    /// high-degree neighbors; weighting the replacement's attachments the
    /// same way keeps degree-degree structure stable under repeated
    /// editing. No-op on graphs with near-constant degree.
    pub degree_weighted_wiring: bool,
    pub enforce_connectivity: bool,
    /// Density at which coarsening stops; a coarse graph at or above this
    /// density is discarded, since distance-guided edits degenerate on
    /// near-cliques.
    pub max_density: f64,
    /// Sampling loops give up after this multiple of their goal.
    pub loop_safety_factor: usize,
    /// Adjacency entries an insertion search may scan before falling back
    /// to a uniform target; keeps per-edge cost bounded on large graphs.
    pub bfs_visit_budget: usize,
    pub rng_seed: u64,
}

impl Default for EditConfig {
    fn default() -> Self {
        EditConfig {
            node_edit_rates: Vec::new(),
            edge_edit_rates: Vec::new(),
            node_growth_rates: Vec::new(),
            edge_growth_rates: Vec::new(),
            bfs_horizon: 20,
            spath_sample_size: None,
            deferential_detachment: false,
            mutual_neighbor_protection: false,
            degree_weighted_wiring: false,
            enforce_connectivity: false,
            max_density: 0.5,
            loop_safety_factor: 10,
            bfs_visit_budget: 500,
            rng_seed: 0,
        }
    }
}

impl EditConfig {
    /// P1: edits at the two finest levels, 8% then 7%, nodes and edges alike.
    /// The presets enable degree-aware deletion and degree-weighted wiring
    /// so that repeated editing does not flatten the degree distribution.
    pub fn preset_p1() -> Self {
        EditConfig {
            node_edit_rates: vec![0.08, 0.07],
            edge_edit_rates: vec![0.08, 0.07],
            deferential_detachment: true,
            degree_weighted_wiring: true,
            ..EditConfig::default()
        }
    }

    /// P2: edits at five and more levels, 5% at the finest tapering to 1%,
    /// then 1% at every coarser level.
    pub fn preset_p2() -> Self {
        let mut rates = vec![0.05, 0.04, 0.03, 0.02];
        rates.extend(std::iter::repeat(0.01).take(12));
        EditConfig {
            node_edit_rates: rates.clone(),
            edge_edit_rates: rates,
            deferential_detachment: true,
            degree_weighted_wiring: true,
            ..EditConfig::default()
        }
    }

    pub fn node_rate(&self, level: usize) -> f64 {
        self.node_edit_rates.get(level).copied().unwrap_or(0.0)
    }

    pub fn edge_rate(&self, level: usize) -> f64 {
        self.edge_edit_rates.get(level).copied().unwrap_or(0.0)
    }

    pub fn node_growth(&self, level: usize) -> f64 {
        self.node_growth_rates.get(level).copied().unwrap_or(0.0)
    }

    pub fn edge_growth(&self, level: usize) -> f64 {
        self.edge_growth_rates.get(level).copied().unwrap_or(0.0)
    }

    /// True if any edit rate at a level strictly coarser than `level` is
    /// nonzero.
    pub fn has_edits_beyond(&self, level: usize) -> bool {
        let beyond = |rates: &[f64]| {
            rates
                .iter()
                .enumerate()
                .any(|(i, &r)| i > level && r > 0.0)
        };
        beyond(&self.node_edit_rates) || beyond(&self.edge_edit_rates)
    }

    pub fn spath_samples(&self, edge_count: usize) -> usize {
        self.spath_sample_size.unwrap_or_else(|| edge_count.min(1000))
    }

    pub fn validate(&self) -> Result<()> {
        let check_rates = |name: &str, rates: &[f64]| -> Result<()> {
            for (i, &r) in rates.iter().enumerate() {
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::InvalidConfig(format!(
                        "{name}[{i}] = {r} is outside [0, 1]"
                    )));
                }
            }
            Ok(())
        };
        check_rates("node_edit_rates", &self.node_edit_rates)?;
        check_rates("edge_edit_rates", &self.edge_edit_rates)?;
        let check_growth = |name: &str, rates: &[f64]| -> Result<()> {
            for (i, &r) in rates.iter().enumerate() {
                if !(-1.0..=1.0).contains(&r) {
                    return Err(Error::InvalidConfig(format!(
                        "{name}[{i}] = {r} is outside [-1, 1]"
                    )));
                }
            }
            Ok(())
        };
        check_growth("node_growth_rates", &self.node_growth_rates)?;
        check_growth("edge_growth_rates", &self.edge_growth_rates)?;
        if self.bfs_horizon == 0 {
            return Err(Error::InvalidConfig("bfs_horizon must be >= 1".into()));
        }
        if self.loop_safety_factor == 0 {
            return Err(Error::InvalidConfig(
                "loop_safety_factor must be >= 1".into(),
            ));
        }
        if self.bfs_visit_budget == 0 {
            return Err(Error::InvalidConfig(
                "bfs_visit_budget must be >= 1".into(),
            ));
        }
        if self.spath_sample_size == Some(0) {
            return Err(Error::InvalidConfig(
                "spath_sample_size must be >= 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.max_density) {
            return Err(Error::InvalidConfig(format!(
                "max_density = {} is outside [0, 1]",
                self.max_density
            )));
        }
        Ok(())
    }
}
