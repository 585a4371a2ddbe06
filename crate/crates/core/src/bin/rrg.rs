use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use rainbow_regular::coloring::{
    greedy_random_coloring, read_coloring, recolor_near_short_cycles, verify_proper_gamma,
    write_coloring,
};
use rainbow_regular::genreg::sample_simple_regular;
use rainbow_regular::graph::{read_edge_list, write_edge_list, EdgeId, SimpleGraph};
use rainbow_regular::harness::{sweep, write_outputs, SweepConfig};
use rainbow_regular::localstruct::{
    bfs_ball, verify_local_sparsity, vertices_near_short_cycles, BallClass,
};
use rainbow_regular::rcverify::{
    constructive_rainbow_search, default_max_len, find_rainbow_path, ConstructiveConfig,
    PathSearch,
};
use rainbow_regular::trees::{adversarial_min_m, ColoredDaryTree, SearchMode, TreeEdge};
use rainbow_regular::Params;

#[derive(Parser)]
#[command(
    name = "rrg",
    version,
    about = "rainbow coloring of random regular graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderKind {
    Id,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyModeArg {
    Exhaustive,
    Budget,
    Constructive,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeModeArg {
    Exhaustive,
    Search,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a uniform random r-regular simple graph, write its edge list
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = rainbow_regular::genreg::DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
    },
    /// Ball classification histogram, short-cycle census, sparsity findings
    Inspect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        k1: f64,
        /// Sparsity set-size bound (the derived t0 is below 3 at desk scale)
        #[arg(long, default_value_t = 8)]
        t0: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: usize,
    },
    /// Greedy distance-constrained coloring, or audit one with --verify
    Color {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        k1: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OrderKind::Id)]
        order: OrderKind,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Audit an existing coloring instead of producing one
        #[arg(long, default_value_t = false)]
        verify: bool,
        #[arg(long, required_if_eq("verify", "true"))]
        coloring: Option<PathBuf>,
        /// Skip the fresh-color patch around short cycles
        #[arg(long, default_value_t = false)]
        skip_patch: bool,
    },
    /// Rainbow-connectivity verdicts, one JSON line per pair
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyModeArg::Budget)]
        mode: VerifyModeArg,
        /// "all" or "sample:N"
        #[arg(long, default_value = "all")]
        pairs: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2.0)]
        k1: f64,
        /// 0 means the (n, r)-derived default
        #[arg(long, default_value_t = 0)]
        max_len: usize,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
    /// Minimize the rainbow leaf-pair count over colored d-ary tree pairs
    TreeLemma {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = TreeModeArg::Search)]
        mode: TreeModeArg,
        /// Annealing iterations per restart
        #[arg(long, default_value_t = 100_000)]
        iters: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a sweep from a TOML config; writes trials.jsonl + aggregate.csv
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// 0 uses one thread per core
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

fn load_graph(path: &PathBuf) -> Result<SimpleGraph, String> {
    let f = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_edge_list(&mut BufReader::new(f)).map_err(|e| e.to_string())
}

fn graph_params(g: &SimpleGraph, k1: f64) -> Result<Params, String> {
    let r = g
        .regularity()
        .ok_or_else(|| "graph is not regular".to_string())?;
    Params::new(g.n(), r, k1).map_err(|e| e.to_string())
}

fn print_tree(label: &str, t: &ColoredDaryTree) {
    println!("{label}:");
    for level in 1..=t.levels() {
        let colors: Vec<String> = (0..t.level_width(level))
            .map(|pos| t.color(TreeEdge { level, pos }).to_string())
            .collect();
        println!("  level {level}: {}", colors.join(" "));
    }
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Gen {
            n,
            r,
            seed,
            out,
            max_attempts,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, attempts) =
                sample_simple_regular(n, r, &mut rng, max_attempts).map_err(|e| e.to_string())?;
            let f = File::create(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            let mut w = BufWriter::new(f);
            write_edge_list(&g, &mut w).map_err(|e| e.to_string())?;
            w.flush().map_err(|e| e.to_string())?;
            eprintln!("generated n={n} r={r} seed={seed} attempts={attempts}");
            Ok(())
        }
        Command::Inspect {
            input,
            k1,
            t0,
            budget,
        } => {
            let g = load_graph(&input)?;
            let params = graph_params(&g, k1)?;
            let mut histogram = [0usize; 3];
            for v in 0..g.n() {
                match bfs_ball(&g, v, params.k).class() {
                    BallClass::TreeLike => histogram[0] += 1,
                    BallClass::Unicyclic => histogram[1] += 1,
                    BallClass::Multicyclic => histogram[2] += 1,
                }
            }
            println!(
                "{}",
                json!({
                    "type": "ball_histogram",
                    "depth": params.k,
                    "k_r": params.k_r,
                    "tree_like": histogram[0],
                    "unicyclic": histogram[1],
                    "multicyclic": histogram[2],
                })
            );
            let on_cycle = vertices_near_short_cycles(&g, 0, 10).len();
            let near = vertices_near_short_cycles(&g, 10, 10).len();
            println!(
                "{}",
                json!({
                    "type": "short_cycles",
                    "max_cycle": 10,
                    "vertices_on_cycles": on_cycle,
                    "vertices_within_10": near,
                })
            );
            let report = verify_local_sparsity(&g, t0.max(3), budget);
            println!(
                "{}",
                json!({
                    "type": "sparsity",
                    "t0": t0.max(3),
                    "violations": report.violations,
                    "exhausted": report.exhausted,
                })
            );
            Ok(())
        }
        Command::Color {
            input,
            k1,
            seed,
            order,
            out,
            verify,
            coloring,
            skip_patch,
        } => {
            let g = load_graph(&input)?;
            let params = graph_params(&g, k1)?;
            if verify {
                let path = coloring.ok_or("--coloring is required with --verify")?;
                let f = File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                let c = read_coloring(&mut BufReader::new(f)).map_err(|e| e.to_string())?;
                match verify_proper_gamma(&g, &c, params.k) {
                    None => {
                        println!(
                            "{}",
                            json!({"type": "proper_gamma", "k": params.k, "proper": true})
                        );
                        Ok(())
                    }
                    Some((e, f)) => {
                        println!(
                            "{}",
                            json!({
                                "type": "proper_gamma", "k": params.k, "proper": false,
                                "edge_a": e, "edge_b": f,
                            })
                        );
                        Err(format!("edges {e} and {f} share a color within distance"))
                    }
                }
            } else {
                let out = out.ok_or("--out is required when producing a coloring")?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut edge_order: Vec<EdgeId> = (0..g.m()).collect();
                if matches!(order, OrderKind::Random) {
                    edge_order.shuffle(&mut rng);
                }
                let run = greedy_random_coloring(&g, &edge_order, params.k, params.q, &mut rng)
                    .map_err(|e| e.to_string())?;
                let final_coloring = if skip_patch {
                    run.coloring
                } else {
                    recolor_near_short_cycles(&g, &run.coloring, 10, 10)
                };
                let f = File::create(&out).map_err(|e| format!("{}: {e}", out.display()))?;
                let mut w = BufWriter::new(f);
                write_coloring(&final_coloring, &mut w).map_err(|e| e.to_string())?;
                w.flush().map_err(|e| e.to_string())?;
                eprintln!(
                    "colored m={} k={} q={} extra={} min_available={}",
                    g.m(),
                    params.k,
                    params.q,
                    final_coloring.extra_colors(),
                    run.available_sizes.iter().min().copied().unwrap_or(0),
                );
                Ok(())
            }
        }
        Command::Verify {
            graph,
            coloring,
            mode,
            pairs,
            seed,
            k1,
            max_len,
            budget,
        } => {
            let g = load_graph(&graph)?;
            let f = File::open(&coloring).map_err(|e| format!("{}: {e}", coloring.display()))?;
            let c = read_coloring(&mut BufReader::new(f)).map_err(|e| e.to_string())?;
            if c.len() != g.m() {
                return Err(format!(
                    "coloring covers {} edges, graph has {}",
                    c.len(),
                    g.m()
                ));
            }
            let pair_list: Vec<(usize, usize)> = if pairs == "all" {
                (0..g.n())
                    .flat_map(|x| (x + 1..g.n()).map(move |y| (x, y)))
                    .collect()
            } else if let Some(count) = pairs.strip_prefix("sample:") {
                let count: usize = count
                    .parse()
                    .map_err(|_| format!("bad pair spec: {pairs}"))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut set = std::collections::BTreeSet::new();
                while set.len() < count {
                    let x = rand::Rng::gen_range(&mut rng, 0..g.n());
                    let y = rand::Rng::gen_range(&mut rng, 0..g.n());
                    if x != y {
                        set.insert((x.min(y), x.max(y)));
                    }
                }
                set.into_iter().collect()
            } else {
                return Err(format!("bad pair spec: {pairs} (use all or sample:N)"));
            };
            let r = g.regularity().unwrap_or(3);
            let cap = if max_len == 0 {
                default_max_len(g.n(), r)
            } else {
                max_len
            };
            let params = graph_params(&g, k1)?;
            let cfg = ConstructiveConfig::for_scale(g.n());
            for (x, y) in pair_list {
                let (status, path_len, nodes) = match mode {
                    VerifyModeArg::Exhaustive | VerifyModeArg::Budget => {
                        let (len_cap, node_cap) = match mode {
                            VerifyModeArg::Exhaustive => (g.n() - 1, u64::MAX),
                            _ => (cap, budget),
                        };
                        let out = find_rainbow_path(&g, &c, x, y, len_cap, node_cap);
                        match out.result {
                            PathSearch::Found(p) => {
                                ("connected", Some(p.len()), out.nodes_searched)
                            }
                            PathSearch::NotFound { exhaustive: true } => {
                                ("not_connected", None, out.nodes_searched)
                            }
                            PathSearch::NotFound { exhaustive: false } => {
                                ("unknown", None, out.nodes_searched)
                            }
                        }
                    }
                    VerifyModeArg::Constructive => {
                        let out = constructive_rainbow_search(&g, &c, x, y, &params, &cfg);
                        match out.result {
                            Ok(p) => ("connected", Some(p.len()), 0),
                            Err(_) => ("unknown", None, 0),
                        }
                    }
                };
                println!(
                    "{}",
                    json!({
                        "x": x, "y": y, "status": status,
                        "path_len": path_len, "nodes_searched": nodes,
                    })
                );
            }
            Ok(())
        }
        Command::TreeLemma {
            d,
            ell,
            mode,
            iters,
            restarts,
            seed,
        } => {
            let mode = match mode {
                TreeModeArg::Exhaustive => SearchMode::Exhaustive,
                TreeModeArg::Search => SearchMode::LocalSearch { restarts, iters },
            };
            let res = adversarial_min_m(d, ell, mode, seed).map_err(|e| e.to_string())?;
            println!("m = {}", res.m);
            print_tree("T1", &res.t1);
            print_tree("T2", &res.t2);
            Ok(())
        }
        Command::Sweep {
            config,
            out_dir,
            workers,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            let cfg = SweepConfig::from_toml_str(&text).map_err(|e| e.to_string())?;
            let result = sweep(&cfg, workers).map_err(|e| e.to_string())?;
            write_outputs(&result, &out_dir).map_err(|e| e.to_string())?;
            for a in &result.aggregates {
                println!(
                    "cell n={} r={} k1={}: {}/{} connected ({:.1}%)",
                    a.n,
                    a.r,
                    a.k1,
                    a.connected,
                    a.trials,
                    100.0 * a.success_rate
                );
            }
            eprintln!("wrote {}", out_dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // die quietly when a pipe downstream closes early (e.g. | head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
