//! Discrete-time SEIR simulation on graphs, used to check that replicas
//! reproduce the original network's epidemic behavior.

use std::io::Write;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum InitialInfected {
    /// Draw this many distinct nodes uniformly at random.
    Count(usize),
    Nodes(Vec<NodeId>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeirParams {
    pub latent_mean: usize,
    /// When set, the latent period is uniform over {mean-1, mean, mean+1}.
    pub latent_jitter: bool,
    pub infectious_mean: usize,
    pub infectious_jitter: bool,
    pub transmission_prob_per_day: f64,
    pub horizon_days: usize,
    pub initial_infected: InitialInfected,
}

impl Default for SeirParams {
    fn default() -> Self {
        SeirParams {
            latent_mean: 2,
            latent_jitter: true,
            infectious_mean: 9,
            infectious_jitter: true,
            transmission_prob_per_day: 0.5,
            horizon_days: 100,
            initial_infected: InitialInfected::Count(1),
        }
    }
}

impl SeirParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.transmission_prob_per_day) {
            return Err(Error::InvalidConfig(
                "transmission_prob_per_day must be in [0, 1]".into(),
            ));
        }
        if self.horizon_days == 0 {
            return Err(Error::InvalidConfig("horizon_days must be >= 1".into()));
        }
        let min_latent = self.latent_mean - if self.latent_jitter { 1 } else { 0 };
        let min_inf = self.infectious_mean - if self.infectious_jitter { 1 } else { 0 };
        if self.latent_mean < 1 || min_latent < 1 || self.infectious_mean < 1 || min_inf < 1 {
            return Err(Error::InvalidConfig("durations must be >= 1 day".into()));
        }
        Ok(())
    }

    fn draw(&self, mean: usize, jitter: bool, rng: &mut impl Rng) -> usize {
        if jitter {
            mean - 1 + rng.random_range(0..3usize)
        } else {
            mean
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum State {
    Susceptible,
    /// Becomes infectious on the stored day.
    Exposed { onset: usize, duration: usize },
    /// Recovers on the stored day.
    Infectious { recovery: usize },
    Recovered,
}

/// Runs one SEIR epidemic and returns the incidence series: new
/// infectious cases per day, with the initial cases counted on day 0.
/// Transmission on day t is resolved against the day t-1 states; a node
/// exposed on day t becomes infectious on day t + latent period.
pub fn run_seir<R: Rng>(g: &Graph, params: &SeirParams, rng: &mut R) -> Result<Vec<usize>> {
    params.validate()?;
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let ids: Vec<NodeId> = g.nodes().collect();
    let index: std::collections::HashMap<NodeId, usize> =
        ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let seeds: Vec<usize> = match &params.initial_infected {
        InitialInfected::Count(k) => {
            if *k > ids.len() {
                return Err(Error::InvalidConfig(format!(
                    "cannot seed {k} infections in a {}-node graph",
                    ids.len()
                )));
            }
            sample(rng, ids.len(), *k).into_iter().collect()
        }
        InitialInfected::Nodes(list) => list
            .iter()
            .map(|u| index.get(u).copied().ok_or(Error::NodeNotFound(*u)))
            .collect::<Result<Vec<_>>>()?,
    };

    let mut state = vec![State::Susceptible; ids.len()];
    let mut incidence = vec![0usize; params.horizon_days];
    for &s in &seeds {
        if state[s] == State::Susceptible {
            let d = params.draw(params.infectious_mean, params.infectious_jitter, rng);
            state[s] = State::Infectious { recovery: d };
            incidence[0] += 1;
        }
    }

    let p = params.transmission_prob_per_day;
    for day in 1..params.horizon_days {
        // Transmitters: nodes infectious as of the end of the previous day.
        let transmitters: Vec<usize> = (0..ids.len())
            .filter(|&i| matches!(state[i], State::Infectious { .. }))
            .collect();
        // Scheduled transitions for this day.
        for i in 0..ids.len() {
            match state[i] {
                State::Exposed { onset, duration } if onset == day => {
                    state[i] = State::Infectious {
                        recovery: day + duration,
                    };
                    incidence[day] += 1;
                }
                State::Infectious { recovery } if recovery == day => {
                    state[i] = State::Recovered;
                }
                _ => {}
            }
        }
        for &i in &transmitters {
            for (v, _) in g.neighbors(ids[i]) {
                let j = index[&v];
                if state[j] == State::Susceptible && (p >= 1.0 || rng.random_bool(p)) {
                    let latent = params.draw(params.latent_mean, params.latent_jitter, rng);
                    let duration =
                        params.draw(params.infectious_mean, params.infectious_jitter, rng);
                    state[j] = State::Exposed {
                        onset: day + latent,
                        duration,
                    };
                }
            }
        }
    }
    Ok(incidence)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpidemicSummary {
    pub horizon_days: usize,
    pub total_runs: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl EpidemicSummary {
    /// Day of the mean curve's maximum, and that maximum.
    pub fn peak(&self) -> (usize, f64) {
        let mut best = (0usize, f64::MIN);
        for (d, &m) in self.mean.iter().enumerate() {
            if m > best.1 {
                best = (d, m);
            }
        }
        best
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "day,mean,std")?;
        for d in 0..self.horizon_days {
            writeln!(w, "{},{},{}", d, self.mean[d], self.std[d])?;
        }
        Ok(())
    }
}

/// Pools `runs_per_graph` independent epidemics on each graph and returns
/// the per-day mean and population standard deviation of incidence. Run
/// seeds derive from base_seed, so the result is independent of how runs
/// are scheduled.
pub fn epidemic_ensemble(
    graphs: &[Graph],
    params: &SeirParams,
    runs_per_graph: usize,
    base_seed: u64,
) -> Result<EpidemicSummary> {
    if graphs.is_empty() || runs_per_graph == 0 {
        return Err(Error::InvalidConfig(
            "epidemic ensemble needs at least one graph and one run".into(),
        ));
    }
    params.validate()?;
    let series: Vec<Vec<usize>> = (0..graphs.len() * runs_per_graph)
        .into_par_iter()
        .map(|task| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(task as u64));
            run_seir(&graphs[task / runs_per_graph], params, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = series.len() as f64;
    let horizon = params.horizon_days;
    let mut mean = vec![0.0f64; horizon];
    let mut std = vec![0.0f64; horizon];
    for s in &series {
        for (d, &v) in s.iter().enumerate() {
            mean[d] += v as f64;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    for s in &series {
        for (d, &v) in s.iter().enumerate() {
            std[d] += (v as f64 - mean[d]).powi(2);
        }
    }
    for v in &mut std {
        *v = (*v / n).sqrt();
    }
    Ok(EpidemicSummary {
        horizon_days: horizon,
        total_runs: series.len(),
        mean,
        std,
    })
}
