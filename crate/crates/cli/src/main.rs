use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cutnpeel::codec::{compression_report, decode, encode, read_model, write_model};
use cutnpeel::cost::{relative_cost, total_cost, CostBreakdown, Universe};
use cutnpeel::synth::{add_noise, er_objects_per_kind, gen_er, plant, PlantSpec};
use cutnpeel::{mine_report, Algorithm, DriverConfig, MiningReport, NearBiclique, ObjectSubset, TemporalGraph};

#[derive(Parser)]
#[command(
    name = "cutnpeel",
    version,
    about = "Near bi-clique mining and lossless compression for temporal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine near bi-cliques and write them as JSON lines.
    Mine {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        mining: MiningArgs,
        /// Bi-clique records (JSON lines); stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Summary report (JSON); stderr when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Score a set of bi-cliques against a graph.
    Cost {
        #[arg(long)]
        input: PathBuf,
        /// JSON lines as written by `mine`.
        #[arg(long)]
        bicliques: PathBuf,
    },
    /// Mine, then write the graph as a bi-clique model.
    Compress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        mining: MiningArgs,
    },
    /// Rebuild the canonical edge list from a model.
    Decompress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Write a synthetic edge list.
    Generate {
        /// Uniform random graph with this many edges.
        #[arg(long, conflicts_with = "plant")]
        er_edges: Option<u64>,
        /// Comma-separated WxHxT[:fill] blocks.
        #[arg(long, value_delimiter = ',')]
        plant: Vec<PlantSpec>,
        /// Random edges added on top of the plants.
        #[arg(long, default_value_t = 0)]
        noise: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Planted subsets as JSON lines.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Time mining on uniform random graphs of growing size.
    Bench {
        /// `2^a..2^b` (every `--step` exponents) or a comma list of edge counts.
        #[arg(long, default_value = "2^16..2^20")]
        sizes: String,
        #[arg(long, default_value_t = 2)]
        step: u32,
        #[command(flatten)]
        mining: MiningArgs,
    },
}

#[derive(Args, Clone)]
struct MiningArgs {
    #[arg(long, default_value = "cutnpeel")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 80)]
    iters: u32,
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    /// Seeds the cut labelings (and the graphs of `bench`).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mine the partitions of each cut in parallel.
    #[arg(long)]
    parallel: bool,
}

impl MiningArgs {
    fn config(&self) -> Result<DriverConfig> {
        let config = DriverConfig {
            max_iterations: self.iters,
            threshold_decay: self.alpha,
            seed: self.seed,
            parallel: self.parallel,
            ..Default::default()
        };
        config.validate()?;
        Ok(config)
    }
}

/// One mined bi-clique, one JSON line.
#[derive(Serialize, Deserialize)]
struct BicliqueRecord {
    sources: Vec<u32>,
    destinations: Vec<u32>,
    timestamps: Vec<u32>,
    edge_count: u64,
    missing_count: u64,
    acceptance_saving: f64,
    density: f64,
}

impl From<&NearBiclique> for BicliqueRecord {
    fn from(b: &NearBiclique) -> Self {
        BicliqueRecord {
            sources: b.objects.sources.clone(),
            destinations: b.objects.destinations.clone(),
            timestamps: b.objects.timestamps.clone(),
            edge_count: b.edge_count,
            missing_count: b.missing_count,
            acceptance_saving: b.acceptance_saving,
            density: b.density(),
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    input: Option<&'a Path>,
    algorithm: Algorithm,
    config: &'a DriverConfig,
    num_objects: [u32; 3],
    num_edges: usize,
    num_bicliques: usize,
    relative_cost: f64,
    cost: CostBreakdown,
    residual_edges: usize,
    iterations: &'a [cutnpeel::driver::IterationStats],
    elapsed_seconds: f64,
}

fn summary<'a>(input: Option<&'a Path>, report: &'a MiningReport) -> Summary<'a> {
    Summary {
        input,
        algorithm: report.algorithm,
        config: &report.config,
        num_objects: [
            report.universe.num_sources,
            report.universe.num_destinations,
            report.universe.num_timestamps,
        ],
        num_edges: report.universe.num_edges as usize,
        num_bicliques: report.bicliques.len(),
        relative_cost: report.relative_cost,
        cost: report.cost,
        residual_edges: report.residual_edges,
        iterations: &report.iterations,
        elapsed_seconds: report.elapsed_seconds,
    }
}

fn load_graph(path: &Path) -> Result<TemporalGraph> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    TemporalGraph::load_edge_list(BufReader::new(file), None)
        .with_context(|| format!("cannot parse {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_sizes(spec: &str, step: u32) -> Result<Vec<u64>> {
    let pow = |s: &str| -> Result<u32> {
        s.trim()
            .strip_prefix("2^")
            .and_then(|e| e.parse().ok())
            .with_context(|| format!("expected 2^k, found {s:?}"))
    };
    if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (pow(lo)?, pow(hi)?);
        if lo > hi || hi > 40 || step == 0 {
            bail!("bad size range {spec:?}");
        }
        Ok((lo..=hi).step_by(step as usize).map(|e| 1u64 << e).collect())
    } else {
        spec.split(',')
            .map(|s| match pow(s) {
                Ok(e) => Ok(1u64 << e),
                Err(_) => s.trim().parse::<u64>().with_context(|| format!("bad size {s:?}")),
            })
            .collect()
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mine {
            input,
            mining,
            output,
            report,
        } => {
            let config = mining.config()?;
            let graph = load_graph(&input)?;
            let result = mine_report(&graph, mining.algorithm, &config)?;
            let mut out = sink(output.as_deref())?;
            for b in &result.bicliques {
                serde_json::to_writer(&mut out, &BicliqueRecord::from(b))?;
                writeln!(out)?;
            }
            out.flush()?;
            let text = serde_json::to_string_pretty(&summary(Some(&input), &result))?;
            match report {
                Some(p) => writeln!(create(&p)?, "{text}")?,
                None => eprintln!("{text}"),
            }
        }
        Command::Cost { input, bicliques } => {
            let graph = load_graph(&input)?;
            let file = File::open(&bicliques).with_context(|| format!("cannot read {}", bicliques.display()))?;
            let mut subsets = Vec::new();
            for (n, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let r: BicliqueRecord =
                    serde_json::from_str(&line).with_context(|| format!("{}:{}", bicliques.display(), n + 1))?;
                subsets.push(ObjectSubset::new(r.sources, r.destinations, r.timestamps));
            }
            let cost = total_cost(&graph, &subsets)?;
            let rel = relative_cost(&cost, &Universe::of(&graph))?;
            let out = serde_json::json!({ "num_bicliques": subsets.len(), "cost": cost, "relative_cost": rel });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Compress { input, output, mining } => {
            let config = mining.config()?;
            let graph = load_graph(&input)?;
            let result = mine_report(&graph, mining.algorithm, &config)?;
            let subsets: Vec<ObjectSubset> = result.bicliques.iter().map(|b| b.objects.clone()).collect();
            let mut out = create(&output)?;
            write_model(&encode(&graph, &subsets)?, &mut out)?;
            out.flush()?;
            let rep = compression_report(&graph, &subsets)?;
            let out = serde_json::json!({ "num_bicliques": subsets.len(), "report": rep });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Decompress { input, output } => {
            let file = File::open(&input).with_context(|| format!("cannot read {}", input.display()))?;
            let graph = decode(&read_model(BufReader::new(file))?)?;
            let mut out = create(&output)?;
            graph.write_edge_list(&mut out)?;
            out.flush()?;
        }
        Command::Generate {
            er_edges,
            plant: specs,
            noise,
            seed,
            output,
            truth,
        } => {
            let (graph, planted) = match er_edges {
                Some(n) => (gen_er(n, seed)?, Vec::new()),
                None if !specs.is_empty() => {
                    let (g, t) = plant(None, &specs, seed)?;
                    (add_noise(&g, noise, seed.wrapping_add(1))?, t)
                }
                None => bail!("pass --er-edges or --plant"),
            };
            let mut out = sink(output.as_deref())?;
            graph.write_edge_list(&mut out)?;
            out.flush()?;
            if let Some(p) = truth {
                let mut t = create(&p)?;
                for s in &planted {
                    serde_json::to_writer(&mut t, s)?;
                    writeln!(t)?;
                }
                t.flush()?;
            }
        }
        Command::Bench { sizes, step, mining } => {
            let config = mining.config()?;
            let mut out = BufWriter::new(io::stdout().lock());
            for edges in parse_sizes(&sizes, step)? {
                let start = Instant::now();
                let graph = gen_er(edges, mining.seed)?;
                let generate_seconds = start.elapsed().as_secs_f64();
                let result = mine_report(&graph, mining.algorithm, &config)?;
                let row = serde_json::json!({
                    "edges": edges,
                    "objects_per_kind": er_objects_per_kind(edges),
                    "generate_seconds": generate_seconds,
                    "mine_seconds": result.elapsed_seconds,
                    "num_bicliques": result.bicliques.len(),
                    "relative_cost": result.relative_cost,
                });
                writeln!(out, "{row}")?;
                out.flush()?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
