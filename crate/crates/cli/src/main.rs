//! `netrep`: replicate a network into an ensemble of randomized
//! synthetic variants, compute structural metrics, generate classical
//! baseline graphs, and run SEIR epidemics over graph ensembles.
//!
//! All stochastic subcommands are fully determined by `--seed`; running
//! the same invocation twice produces byte-identical output files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use netrep_core::baselines::{barabasi_albert, chung_lu, erdos_renyi, watts_strogatz};
use netrep_core::epidemics::{epidemic_ensemble, InitialInfected, SeirParams};
use netrep_core::graph::Graph;
use netrep_core::io::{read_edge_list_file, write_edge_list, write_edge_list_file};
use netrep_core::metrics::{compare_ensemble, EnsembleSummary, MetricsReport};
use netrep_core::vcycle::{evolve, generate_ensemble, keep_connected, AdjustFn};
use netrep_core::EditConfig;

#[derive(Parser)]
#[command(name = "netrep", version, about)]
struct Cli {
    /// Worker threads for ensemble generation; defaults to the number of
    /// available cores. Output does not depend on this value.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an ensemble of replicas from an input edge list.
    Replicate {
        /// Input edge list: one "u v" pair per line, '#' comments.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Number of replicas to generate (at least 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        count: u32,
        #[arg(long)]
        out_dir: PathBuf,
        /// Base seed; replica i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep each replica connected by retaining its largest component.
        #[arg(long)]
        keep_connected: bool,
    },
    /// Compute the structural metrics report for one graph.
    Metrics {
        #[arg(long)]
        input: PathBuf,
        /// Output JSON path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the randomized community-detection pass.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare an original graph against replica edge lists.
    Compare {
        #[arg(long)]
        original: PathBuf,
        /// Replica edge-list files (at least 2).
        #[arg(long, num_args = 2.., required = true)]
        replicas: Vec<PathBuf>,
        /// Summary JSON path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary CSV path (one row per metric).
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a classical baseline graph.
    Baseline {
        #[command(subcommand)]
        model: BaselineModel,
    },
    /// Run an SEIR epidemic ensemble over one or more graphs.
    Epidemic {
        /// Graph edge-list files.
        #[arg(long, num_args = 1.., required = true)]
        graphs: Vec<PathBuf>,
        /// Simulation runs per graph.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        runs: u32,
        /// Output CSV (day, mean incidence, std); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        latent_mean: usize,
        #[arg(long, default_value_t = 9)]
        infectious_mean: usize,
        /// Use the exact mean durations instead of +-1 day jitter.
        #[arg(long)]
        no_jitter: bool,
        #[arg(long, default_value_t = 0.5)]
        transmission_prob: f64,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        /// Number of initially infected nodes, drawn uniformly per run.
        #[arg(long, default_value_t = 1)]
        initial_infected: usize,
    },
    /// Iterated replication: each step edits the previous step's output.
    Evolve {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct ConfigArgs {
    /// JSON config file with keys mirroring the library's EditConfig.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset: p1 (8%/7% at the two finest levels) or p2
    /// (5% tapering to 1%, then 1% at every coarser level).
    #[arg(long, value_parser = ["p1", "p2"])]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum BaselineModel {
    /// Erdos-Renyi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Barabasi-Albert preferential attachment with m edges per new node.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Watts-Strogatz ring lattice (even k) with rewiring probability p.
    Ws {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chung-Lu random graph matching another graph's degree sequence.
    ChungLu {
        /// Graph whose degree sequence to match.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl ConfigArgs {
    fn load(&self) -> Result<EditConfig, String> {
        let cfg = match (&self.config, self.preset.as_deref()) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text)
                    .map_err(|e| format!("{}: invalid config: {e}", path.display()))?
            }
            (None, Some("p1")) => EditConfig::preset_p1(),
            (None, Some("p2")) => EditConfig::preset_p2(),
            (None, _) => EditConfig::default(),
        };
        let cfg: EditConfig = cfg;
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

/// Top-level wrapper for JSON artifacts: the command line that produced
/// the file, followed by the payload (which carries schema_version).
#[derive(Serialize)]
struct Artifact<T: Serialize> {
    invocation: Vec<String>,
    #[serde(flatten)]
    payload: T,
}

fn artifact<T: Serialize>(payload: T) -> Artifact<T> {
    Artifact {
        invocation: std::env::args().collect(),
        payload,
    }
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<(Graph, Vec<String>), String> {
    read_edge_list_file(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run() -> Result<(), String> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    match cli.command {
        Command::Replicate {
            input,
            config,
            count,
            out_dir,
            seed,
            keep_connected: keep,
        } => {
            let cfg = config.load()?;
            let (g, labels) = load_graph(&input)?;
            fs::create_dir_all(&out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
            let adjust: Option<&AdjustFn> = if keep { Some(&keep_connected) } else { None };
            let reports = generate_ensemble(&g, &cfg, count as usize, seed, adjust)
                .map_err(|e| e.to_string())?;
            let mut metric_reports = Vec::with_capacity(reports.len());
            for (i, rep) in reports.iter().enumerate() {
                let edges = out_dir.join(format!("replica_{i}.edges"));
                write_edge_list_file(&rep.replica, &edges, Some(&labels))
                    .map_err(|e| format!("{}: {e}", edges.display()))?;
                write_json(rep, Some(&out_dir.join(format!("replica_{i}.report.json"))))?;
                metric_reports.push(
                    MetricsReport::compute(&rep.replica, rep.rng_seed).map_err(|e| e.to_string())?,
                );
            }
            let original = MetricsReport::compute(&g, seed).map_err(|e| e.to_string())?;
            let summary = compare_ensemble(&original, &metric_reports).map_err(|e| e.to_string())?;
            // Replicate outputs carry no invocation echo so that results
            // are byte-identical regardless of --jobs and --out-dir.
            write_json(&summary, Some(&out_dir.join("ensemble_summary.json")))?;
            write_summary_csv(&summary, &out_dir.join("ensemble_summary.csv"))?;
            Ok(())
        }
        Command::Metrics { input, out, seed } => {
            let (g, _) = load_graph(&input)?;
            let report = MetricsReport::compute(&g, seed).map_err(|e| e.to_string())?;
            write_json(&artifact(&report), out.as_deref())
        }
        Command::Compare {
            original,
            replicas,
            out,
            out_csv,
            seed,
        } => {
            let (g, _) = load_graph(&original)?;
            let orig = MetricsReport::compute(&g, seed).map_err(|e| e.to_string())?;
            let mut reports = Vec::with_capacity(replicas.len());
            for (i, path) in replicas.iter().enumerate() {
                let (r, _) = load_graph(path)?;
                reports
                    .push(MetricsReport::compute(&r, seed.wrapping_add(i as u64 + 1))
                        .map_err(|e| e.to_string())?);
            }
            let summary = compare_ensemble(&orig, &reports).map_err(|e| e.to_string())?;
            if let Some(csv) = &out_csv {
                write_summary_csv(&summary, csv)?;
            }
            write_json(&artifact(&summary), out.as_deref())
        }
        Command::Baseline { model } => {
            let (g, out) = match model {
                BaselineModel::Er { n, p, out, seed } => {
                    (erdos_renyi(n, p, &mut ChaCha8Rng::seed_from_u64(seed)), out)
                }
                BaselineModel::Ba { n, m, out, seed } => (
                    barabasi_albert(n, m, &mut ChaCha8Rng::seed_from_u64(seed)),
                    out,
                ),
                BaselineModel::Ws { n, k, p, out, seed } => (
                    watts_strogatz(n, k, p, &mut ChaCha8Rng::seed_from_u64(seed)),
                    out,
                ),
                BaselineModel::ChungLu { input, out, seed } => {
                    let (g, _) = load_graph(&input)?;
                    let degrees: Vec<f64> = g.nodes().map(|u| g.degree(u) as f64).collect();
                    (chung_lu(&degrees, &mut ChaCha8Rng::seed_from_u64(seed)), out)
                }
            };
            // The generating invocation rides along as a comment line,
            // which every edge-list reader skips.
            let mut buf = Vec::new();
            use std::io::Write;
            writeln!(buf, "# netrep {}", argv_tail()).map_err(|e| e.to_string())?;
            write_edge_list(&g, &mut buf, None).map_err(|e| e.to_string())?;
            fs::write(&out, buf).map_err(|e| format!("{}: {e}", out.display()))
        }
        Command::Epidemic {
            graphs,
            runs,
            out,
            seed,
            latent_mean,
            infectious_mean,
            no_jitter,
            transmission_prob,
            horizon,
            initial_infected,
        } => {
            let mut loaded = Vec::with_capacity(graphs.len());
            for path in &graphs {
                loaded.push(load_graph(path)?.0);
            }
            let params = SeirParams {
                latent_mean,
                latent_jitter: !no_jitter,
                infectious_mean,
                infectious_jitter: !no_jitter,
                transmission_prob_per_day: transmission_prob,
                horizon_days: horizon,
                initial_infected: InitialInfected::Count(initial_infected),
            };
            let summary = epidemic_ensemble(&loaded, &params, runs as usize, seed)
                .map_err(|e| e.to_string())?;
            let mut buf = Vec::new();
            use std::io::Write;
            writeln!(buf, "# netrep {}", argv_tail()).map_err(|e| e.to_string())?;
            summary.write_csv(&mut buf).map_err(|e| e.to_string())?;
            match out {
                Some(path) => fs::write(&path, buf).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", String::from_utf8_lossy(&buf));
                    Ok(())
                }
            }
        }
        Command::Evolve {
            input,
            config,
            steps,
            out_dir,
            seed,
        } => {
            let cfg = config.load()?;
            let (g, labels) = load_graph(&input)?;
            fs::create_dir_all(&out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let trajectory =
                evolve(&g, &cfg, steps as usize, None, &mut rng).map_err(|e| e.to_string())?;
            for (i, step) in trajectory.iter().enumerate() {
                let path = out_dir.join(format!("step_{}.edges", i + 1));
                write_edge_list_file(step, &path, Some(&labels))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(())
        }
    }
}

fn write_summary_csv(summary: &EnsembleSummary, path: &Path) -> Result<(), String> {
    let mut buf = Vec::new();
    summary.write_csv(&mut buf).map_err(|e| e.to_string())?;
    fs::write(path, buf).map_err(|e| format!("{}: {e}", path.display()))
}

fn argv_tail() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
