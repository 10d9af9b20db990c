//! Multiscale network replication: coarsen a graph level by level,
//! apply randomized edits at each scale, and interpolate back to obtain
//! synthetic networks that preserve the original's structure at every
//! resolution. Also ships the statistics used to validate replicas,
//! classical baseline generators, and an SEIR epidemic simulator.

pub mod baselines;
pub mod coarsen;
pub mod config;
pub mod edit;
pub mod epidemics;
pub mod error;
pub mod graph;
pub mod interpolate;
pub mod io;
pub mod metrics;
pub mod vcycle;

pub use config::EditConfig;
pub use error::{Error, Result};
pub use graph::{Graph, NodeAttrs, NodeId};
pub use metrics::{EnsembleSummary, MetricsReport};
pub use vcycle::{generate_ensemble, replicate, ReplicaReport, SCHEMA_VERSION};
