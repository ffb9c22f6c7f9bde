//! Experiment harness CLI.
//!
//! One subcommand per experiment family; every run is fully determined by
//! its flags (and `AVGCASE_THREADS`, which only changes scheduling, never
//! results). Records go to CSV or JSON with the full configuration embedded,
//! plus an optional SVG plot of the primary statistic.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 property
//! violation detected by a property-checking experiment.

mod plot;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use avgcase::binpack::PackAlgo;
use avgcase::record::{write_records, ExperimentRecord, OutputFormat};
use avgcase::rng::Rng;
use avgcase::{Error, Result};

#[derive(Parser)]
#[command(
    name = "avgcase",
    version,
    about = "Seeded average-case algorithm experiments",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Master seed; each trial derives an independent substream from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of trials (instances) to run.
    #[arg(long, default_value_t = 10, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write an SVG plot of the primary statistic here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Ffd,
    Tm,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphsExperiment {
    /// Bisection-cut concentration on G(n, p).
    ErBisection,
    /// Top-k-degrees recovery of a planted clique.
    PlantedClique,
    /// Common-neighbor recovery of a planted bisection.
    PlantedBisection,
    /// Greedy clique size on G(n, 1/2).
    GreedyClique,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Optimal stopping vs. the prophet benchmark on random discrete instances.
    Prophet {
        /// Maximum number of stages per instance.
        #[arg(long, default_value_t = 6, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        stages: u64,
        /// Maximum support size per stage distribution.
        #[arg(long = "support-size", default_value_t = 4, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        support_size: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// First-pivot QuickSort comparisons vs. the exact expectation.
    Quicksort {
        /// Array lengths to sweep (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "100", allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        n: Vec<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Linear-probing insertion cost vs. the geometric baseline.
    Probing {
        /// Table capacity (slots).
        #[arg(long, default_value_t = 65536, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(2..))]
        capacity: u64,
        /// Load factors to sweep (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.75,0.9")]
        alphas: Vec<f64>,
        /// Insertions measured around each target load.
        #[arg(long, default_value_t = 2048, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// FFD / Truncate-and-Match packing on uniform random instances.
    Binpack {
        /// Items per instance.
        #[arg(long, default_value_t = 1000, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Which packing algorithms to run.
        #[arg(long, value_enum, default_value_t = AlgoArg::Both)]
        algo: AlgoArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Convex hull size of uniform point sets.
    Hull {
        /// Point counts to sweep (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "1000", allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        n: Vec<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Stitch tours of uniform points, with optional exact comparison.
    Tsp {
        /// Points per trial.
        #[arg(long, default_value_t = 1024, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(3..))]
        n: u64,
        /// Also compute the exact Held-Karp tour (n <= 14).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Random-graph and planted-model experiments.
    Graphs {
        /// Which graph experiment to run.
        #[arg(value_enum)]
        experiment: GraphsExperiment,
        /// Vertex count.
        #[arg(long, default_value_t = 200, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(4..))]
        n: u64,
        /// Intra-cluster / overall edge probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Inter-cluster edge probability (planted bisection).
        #[arg(long, default_value_t = 0.25)]
        q: f64,
        /// Planted clique size (defaults to ceil(3*sqrt(n ln n))).
        #[arg(long)]
        k: Option<u64>,
        /// Random bisections sampled per trial (er-bisection).
        #[arg(long, default_value_t = 10000, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Dump the trial-0 graph as an edge list to this path.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.cmd) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PropertyViolation(_) => 3,
        Error::Io(_) => 1,
        Error::InvalidParameter(_)
        | Error::InvalidLoadFactor(_)
        | Error::OddVertexCount(_)
        | Error::TooFewPoints { .. }
        | Error::TooManyPoints { .. }
        | Error::EmptyInput => 2,
        _ => 1,
    }
}

/// Worker count from AVGCASE_THREADS (0 = serial); defaults to the
/// available parallelism. Only scheduling depends on this, never results.
fn thread_count() -> usize {
    match std::env::var("AVGCASE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => 1,
            Ok(t) => t,
        },
        Err(_) => std::thread::available_parallelism().map_or(1, |p| p.get()),
    }
}

fn run(cmd: Cmd) -> Result<()> {
    let threads = thread_count();
    match cmd {
        Cmd::Prophet {
            stages,
            support_size,
            common,
        } => {
            let records = avgcase::stopping::prophet_experiment(
                stages as usize,
                support_size as usize,
                common.trials,
                common.seed,
                threads,
            )?;
            let config = vec![
                ("experiment".into(), "prophet".into()),
                ("stages".into(), stages.to_string()),
                ("support-size".into(), support_size.to_string()),
            ];
            emit(&records, &config, &common, ("instance", "ratio"))
        }
        Cmd::Quicksort { n, common } => {
            let mut records = Vec::new();
            for &len in &n {
                records.push(avgcase::sorting::quicksort_experiment(
                    len as usize,
                    common.trials,
                    common.seed,
                    threads,
                )?);
            }
            let config = vec![
                ("experiment".into(), "quicksort".into()),
                ("n".into(), join(&n)),
            ];
            emit(&records, &config, &common, ("n", "trial_mean"))
        }
        Cmd::Probing {
            capacity,
            alphas,
            window,
            common,
        } => {
            let records = avgcase::hashing::probing_experiment(
                capacity as usize,
                &alphas,
                common.trials,
                window as usize,
                common.seed,
                threads,
            )?;
            let config = vec![
                ("experiment".into(), "probing".into()),
                ("capacity".into(), capacity.to_string()),
                (
                    "alphas".into(),
                    alphas
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                ("window".into(), window.to_string()),
            ];
            emit(&records, &config, &common, ("alpha", "mean_insert_probes"))
        }
        Cmd::Binpack { n, algo, common } => {
            let pack_algo = match algo {
                AlgoArg::Ffd => PackAlgo::Ffd,
                AlgoArg::Tm => PackAlgo::Tm,
                AlgoArg::Both => PackAlgo::Both,
            };
            let records = avgcase::binpack::binpack_experiment(
                n as usize,
                common.trials,
                pack_algo,
                common.seed,
                threads,
            )?;
            let config = vec![
                ("experiment".into(), "binpack".into()),
                ("n".into(), n.to_string()),
                ("algo".into(), format!("{algo:?}").to_lowercase()),
            ];
            emit(&records, &config, &common, ("trial", "ratio"))
        }
        Cmd::Hull { n, common } => {
            let mut records = Vec::new();
            for &len in &n {
                records.push(avgcase::geometry::hull_size_experiment(
                    len as usize,
                    common.trials,
                    common.seed,
                    threads,
                )?);
            }
            let config = vec![
                ("experiment".into(), "hull".into()),
                ("n".into(), join(&n)),
            ];
            emit(&records, &config, &common, ("n", "mean_hull_size"))
        }
        Cmd::Tsp { n, oracle, common } => {
            let records = avgcase::tsp::sqrt_n_experiment(
                n as usize,
                common.trials,
                oracle,
                common.seed,
                threads,
            )?;
            let config = vec![
                ("experiment".into(), "tsp".into()),
                ("n".into(), n.to_string()),
                ("oracle".into(), oracle.to_string()),
            ];
            emit(&records, &config, &common, ("trial", "length_over_sqrt_n"))
        }
        Cmd::Graphs {
            experiment,
            n,
            p,
            q,
            k,
            samples,
            dump,
            common,
        } => {
            let n = n as usize;
            let clique_k = k.map(|v| v as usize).unwrap_or_else(|| {
                (3.0 * (n as f64 * (n as f64).ln()).sqrt()).ceil() as usize
            });
            let (records, plot_xy) = match experiment {
                GraphsExperiment::ErBisection => (
                    avgcase::graphs::er_bisection_experiment(
                        n,
                        p,
                        samples,
                        common.trials,
                        common.seed,
                        threads,
                    )?,
                    ("trial", "mean_cut"),
                ),
                GraphsExperiment::PlantedClique => (
                    vec![avgcase::graphs::planted_clique_experiment(
                        n,
                        clique_k,
                        common.trials,
                        common.seed,
                        threads,
                    )?],
                    ("n", "success_rate"),
                ),
                GraphsExperiment::PlantedBisection => (
                    vec![avgcase::graphs::planted_bisection_experiment(
                        n,
                        p,
                        q,
                        common.trials,
                        common.seed,
                        threads,
                    )?],
                    ("n", "success_rate"),
                ),
                GraphsExperiment::GreedyClique => (
                    vec![avgcase::graphs::greedy_clique_experiment(
                        n,
                        common.trials,
                        common.seed,
                        threads,
                    )?],
                    ("n", "success_rate"),
                ),
            };
            if let Some(path) = &dump {
                dump_graph(experiment, n, p, q, clique_k, common.seed, path)?;
            }
            let config = vec![
                ("experiment".into(), format!("graphs-{}", slug(experiment))),
                ("n".into(), n.to_string()),
                ("p".into(), p.to_string()),
                ("q".into(), q.to_string()),
                ("k".into(), clique_k.to_string()),
                ("samples".into(), samples.to_string()),
            ];
            emit(&records, &config, &common, plot_xy)
        }
    }
}

fn slug(e: GraphsExperiment) -> &'static str {
    match e {
        GraphsExperiment::ErBisection => "er-bisection",
        GraphsExperiment::PlantedClique => "planted-clique",
        GraphsExperiment::PlantedBisection => "planted-bisection",
        GraphsExperiment::GreedyClique => "greedy-clique",
    }
}

/// Writes the trial-0 graph of the experiment as an edge list.
fn dump_graph(
    experiment: GraphsExperiment,
    n: usize,
    p: f64,
    q: f64,
    k: usize,
    seed: u64,
    path: &PathBuf,
) -> Result<()> {
    let mut rng = Rng::substream(seed, 0);
    let graph = match experiment {
        GraphsExperiment::ErBisection => avgcase::graphs::gen_er(n, p, &mut rng)?,
        GraphsExperiment::GreedyClique => avgcase::graphs::gen_er(n, 0.5, &mut rng)?,
        GraphsExperiment::PlantedClique => avgcase::graphs::gen_planted_clique(n, k, &mut rng)?,
        GraphsExperiment::PlantedBisection => {
            avgcase::graphs::gen_planted_bisection(n, p, q, &mut rng)?
        }
    };
    let mut file = std::fs::File::create(path)?;
    graph.write_edge_list(&mut file)?;
    Ok(())
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes records (with the config embedded) and the optional plot.
fn emit(
    records: &[ExperimentRecord],
    config: &[(String, String)],
    common: &CommonArgs,
    plot_xy: (&str, &str),
) -> Result<()> {
    let mut config = config.to_vec();
    config.push(("seed".into(), common.seed.to_string()));
    config.push(("trials".into(), common.trials.to_string()));
    config.push((
        "format".into(),
        match common.format {
            FormatArg::Csv => "csv".into(),
            FormatArg::Json => "json".into(),
        },
    ));

    let mut buf: Vec<u8> = Vec::new();
    match common.format {
        FormatArg::Csv => {
            for (key, value) in &config {
                writeln!(buf, "# {key}={value}")?;
            }
            write_records(records, OutputFormat::Csv, &mut buf)?;
        }
        FormatArg::Json => {
            writeln!(buf, "{{")?;
            let pairs: Vec<String> = config
                .iter()
                .map(|(k, v)| format!("\"{k}\": \"{v}\""))
                .collect();
            writeln!(buf, "\"config\": {{{}}},", pairs.join(", "))?;
            write!(buf, "\"records\": ")?;
            write_records(records, OutputFormat::Json, &mut buf)?;
            writeln!(buf, "}}")?;
        }
    }
    match &common.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }

    if let Some(path) = &common.plot {
        let (x_col, y_col) = plot_xy;
        let points: Vec<(f64, f64)> = records
            .iter()
            .filter_map(|r| Some((r.get(x_col)?, r.get(y_col)?)))
            .collect();
        let title = config
            .first()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| "experiment".into());
        let svg = plot::render(&format!("{title}: {y_col} vs {x_col}"), x_col, y_col, &points);
        std::fs::write(path, svg)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::PropertyViolation("x".into())), 3);
        assert_eq!(
            exit_code(&Error::Io(std::io::Error::other("disk gone"))),
            1
        );
        assert_eq!(exit_code(&Error::InvalidParameter("bad".into())), 2);
        assert_eq!(exit_code(&Error::InvalidLoadFactor(1.5)), 2);
        assert_eq!(exit_code(&Error::OddVertexCount(7)), 2);
        assert_eq!(exit_code(&Error::NotAPermutation), 1);
    }

    #[test]
    fn thread_env_contract() {
        // 0 means serial; garbage means serial; a number is taken as-is.
        // (Checked via the parser logic, not the process env, to stay
        // hermetic.)
        let parse = |v: &str| match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => 1usize,
            Ok(t) => t,
        };
        assert_eq!(parse("0"), 1);
        assert_eq!(parse("junk"), 1);
        assert_eq!(parse("6"), 6);
    }
}
