use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use landnav::harness::{
    eval_retrieval, generate_world, load_episodes, load_scenes, read_results, report_from_results,
    run_benchmark, write_dataset, Approach, BenchmarkOutput, ProviderFactory, RunConfig,
    SyntheticSuite, SyntheticWorld, WorldParams,
};
use landnav::providers::{rank_goal_candidates, Oracle};
use landnav::topomap::build_graph;
use landnav::{Error, Result};

#[derive(Parser)]
#[command(
    name = "landnav",
    version,
    about = "Landmark-guided path selection on topological maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one topological graph per scan from episode trajectories.
    BuildMap {
        #[arg(long)]
        episodes: PathBuf,
        #[arg(long)]
        viewpoints: PathBuf,
        /// Output directory; graphs are written as `<scan>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a seeded synthetic world with labels and episodes.
    GenWorld {
        #[arg(long, default_value_t = 40)]
        nodes: usize,
        #[arg(long, default_value_t = 2.6)]
        branching: f64,
        #[arg(long, default_value_t = 24)]
        landmark_types: usize,
        #[arg(long, default_value_t = 20)]
        episodes: usize,
        #[arg(long, default_value_t = 5)]
        max_hops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        scene_id: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the episodes as `episodes.json` + `viewpoints.json` in this directory.
        #[arg(long)]
        export_dataset: Option<PathBuf>,
    },
    /// Precision@k of goal retrieval over every landmark type of a world, or the top-k
    /// nodes for one phrase.
    Retrieve {
        #[arg(long)]
        world: PathBuf,
        #[arg(long)]
        landmark: Option<String>,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Run the pipeline over the scenes named in a config file. With a single
    /// `--episode`, its trace is printed instead of the report table.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Only run these episode ids.
        #[arg(long = "episode")]
        episodes: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run a synthetic benchmark with oracle providers.
    Bench {
        #[arg(long, default_value_t = 5)]
        scenes: usize,
        #[arg(long, default_value_t = 21)]
        episodes: usize,
        #[arg(long, default_value_t = 40)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// `I` (alignment) or `II` (rating).
        #[arg(long, default_value = "I")]
        approach: String,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render the report table from a results file.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        csv: bool,
    },
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, serde_json::to_string_pretty(value)?).map_err(|e| Error::io(path, e))
}

fn parse_approach(s: &str) -> Result<Approach> {
    match s {
        "I" | "1" | "alignment" => Ok(Approach::Alignment),
        "II" | "2" | "rating" => Ok(Approach::Rating),
        _ => Err(Error::Config(format!("unknown approach `{s}`"))),
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::BuildMap {
            episodes,
            viewpoints,
            out,
        } => {
            let eps = load_episodes(&episodes, &viewpoints)?;
            let mut by_scan: std::collections::BTreeMap<String, Vec<_>> = Default::default();
            for e in eps {
                by_scan.entry(e.scene_id.clone()).or_default().push(e);
            }
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            for (scan, eps) in by_scan {
                let graph = build_graph(&eps, &scan)?;
                let path = out.join(format!("{scan}.json"));
                graph.save(&path)?;
                println!(
                    "{scan}: {} nodes, {} edges -> {}",
                    graph.node_count(),
                    graph.edge_count(),
                    path.display()
                );
            }
        }
        Command::GenWorld {
            nodes,
            branching,
            landmark_types,
            episodes,
            max_hops,
            seed,
            scene_id,
            out,
            export_dataset,
        } => {
            let mut params = WorldParams::new(nodes, branching, landmark_types, episodes, seed);
            params.max_hops = max_hops;
            if let Some(id) = scene_id {
                params = params.scene_id(id);
            }
            let world = generate_world(&params)?;
            world.save(&out)?;
            if let Some(dir) = export_dataset {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                write_dataset(
                    &world.episodes,
                    &dir.join("episodes.json"),
                    &dir.join("viewpoints.json"),
                )?;
            }
            println!(
                "{}: {} nodes, {} edges, {} episodes -> {}",
                world.scene_id(),
                world.graph.node_count(),
                world.graph.edge_count(),
                world.episodes.len(),
                out.display()
            );
        }
        Command::Retrieve { world, landmark, k } => {
            let world = SyntheticWorld::load(&world)?;
            let oracle = Oracle::new(world.labels.clone());
            match landmark {
                Some(landmark) => {
                    for (i, s) in rank_goal_candidates(&world.graph, &landmark, k, &oracle)?
                        .iter()
                        .enumerate()
                    {
                        println!("{}\t{}\t{:.4}", i + 1, s.node_id, s.score);
                    }
                }
                None => {
                    let r = eval_retrieval(&world.graph, &world.labels, k, &oracle)?;
                    for (l, p) in &r.per_landmark {
                        println!("{l}\t{p:.3}");
                    }
                    println!("mean precision@{k}: {:.4}", r.mean_precision);
                }
            }
        }
        Command::Run {
            config,
            out,
            episodes,
            workers,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if !episodes.is_empty() {
                cfg.episodes = episodes;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let output = run_and_write(&cfg, &out)?;
            match output.traces.as_slice() {
                [trace] if cfg.episodes.len() == 1 => {
                    println!("{}", serde_json::to_string_pretty(trace)?)
                }
                _ => print!("{}", output.report.render_text()),
            }
        }
        Command::Bench {
            scenes,
            episodes,
            nodes,
            seed,
            k,
            approach,
            noise,
            workers,
            out,
        } => {
            let mut suite = SyntheticSuite::new(scenes, episodes, seed);
            suite.nodes = nodes;
            let mut cfg = RunConfig {
                k,
                approach: parse_approach(&approach)?,
                seed,
                workers,
                synthetic: Some(suite),
                ..RunConfig::default()
            };
            cfg.providers.noise = noise;
            cfg.providers.noise_seed = seed;
            print!("{}", run_and_write(&cfg, &out)?.report.render_text());
        }
        Command::Report { results, csv } => {
            let report = report_from_results(&read_results(&results)?)?;
            if csv {
                print!("{}", report.render_csv());
            } else {
                print!("{}", report.render_text());
            }
        }
    }
    Ok(())
}

fn run_and_write(cfg: &RunConfig, out: &Path) -> Result<BenchmarkOutput> {
    cfg.validate()?;
    let scenes = load_scenes(cfg)?;
    let factory = ProviderFactory::from_settings(&cfg.providers)?;
    let output = run_benchmark(cfg, &scenes, &factory)?;
    output.write(out)?;
    write_json(&out.join("config.json"), cfg)?;
    Ok(output)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
