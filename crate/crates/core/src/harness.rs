//! Experiment driver: seeded, reproducible trials of the full pipeline
//! (generate, color, patch, verify) over (n, r, K1) cells, aggregate
//! emission, palette-size probing, short-cycle statistics, and the binomial
//! tail bounds used to size statistical tolerances.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{greedy_random_coloring, recolor_near_short_cycles, ColoringError};
use crate::genreg::{sample_simple_regular, GenError};
use crate::graph::{diameter, EdgeId, SimpleGraph};
use crate::localstruct::{
    bfs_ball, vertices_near_short_cycles, BallClass, LocalStructError, Params,
};
use crate::rcverify::{
    constructive_rainbow_search, default_max_len, find_rainbow_path, ConstructiveConfig,
    PathSearch,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("bad config: {0}")]
    Config(String),
    #[error("toml parse error: {0}")]
    Toml(String),
    #[error("graph must be regular for this operation")]
    NotRegular,
    #[error("q range [{lo}, {hi}] must sit above the palette guard {floor}")]
    BadQRange { lo: usize, hi: usize, floor: usize },
    #[error("max_k must be between 3 and 10 (got {0})")]
    BadMaxK(usize),
    #[error("i/o: {0}")]
    Io(String),
}

/// One sweep cell: a graph scale plus the coloring constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellConfig {
    pub n: usize,
    pub r: usize,
    pub k1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Budget,
    Constructive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    #[serde(default = "default_mode")]
    pub mode: VerifyMode,
    /// Sampled pairs per trial for n above the all-pairs threshold.
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    /// Witness length cap; 0 means the (n, r)-derived default.
    #[serde(default)]
    pub max_len: usize,
    /// Node budget per pair for the budgeted search.
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Rejection budget for graph generation.
    #[serde(default = "default_gen_attempts")]
    pub gen_max_attempts: usize,
}

fn default_mode() -> VerifyMode {
    VerifyMode::Budget
}

fn default_pairs() -> usize {
    200
}

fn default_budget() -> u64 {
    2_000_000
}

fn default_gen_attempts() -> usize {
    10_000
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            mode: default_mode(),
            pairs: default_pairs(),
            max_len: 0,
            budget: default_budget(),
            gen_max_attempts: default_gen_attempts(),
        }
    }
}

/// Below this vertex count trials check every unordered pair.
pub const ALL_PAIRS_THRESHOLD: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub master_seed: u64,
    pub trials: usize,
    pub cells: Vec<CellConfig>,
    #[serde(default)]
    pub verify: VerifySettings,
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<SweepConfig, HarnessError> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| HarnessError::Toml(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.cells.is_empty() {
            return Err(HarnessError::Config("no cells".into()));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be positive".into()));
        }
        for c in &self.cells {
            if c.n < 2 || c.r < 3 {
                return Err(HarnessError::Config(format!(
                    "cell n={} r={} out of range",
                    c.n, c.r
                )));
            }
            if (c.n * c.r) % 2 != 0 {
                return Err(HarnessError::Config(format!(
                    "cell n={} r={} has odd point count",
                    c.n, c.r
                )));
            }
        }
        if self.verify.pairs == 0 {
            return Err(HarnessError::Config("verify.pairs must be positive".into()));
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Per-trial seed derivation: two chained splitmix64 steps over the master
/// seed, cell index and trial index, so any trial can be reproduced alone.
pub fn trial_seed(master_seed: u64, cell: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(master_seed.wrapping_add(cell as u64)).wrapping_add(trial as u64))
}

/// Everything observed in one trial. Wall time is kept in memory but not
/// serialized, so emitted files are byte-identical across reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub r: usize,
    pub k1: f64,
    pub trial: usize,
    pub seed: u64,
    pub k_r: f64,
    pub k: usize,
    pub q: usize,
    pub t0: f64,
    pub gen_attempts: Option<usize>,
    pub coloring_completed: bool,
    pub min_available: Option<usize>,
    pub extra_colors: Option<usize>,
    pub colors_used: Option<usize>,
    pub verdict: String,
    pub pairs_checked: usize,
    pub pairs_connected: usize,
    pub sampled: bool,
    pub diameter: Option<usize>,
    pub treelike_fraction: Option<f64>,
    pub short_cycle_vertices: Option<usize>,
    #[serde(skip)]
    pub wall_ms: u64,
}

fn raw_derived(n: usize, r: usize, k1: f64) -> (f64, usize, usize, f64) {
    let ln_n = (n as f64).ln();
    let base = ((r.max(2) - 1) as f64).ln();
    let k_r = (k1 * ln_n).ln() / base;
    let k = if k_r < 0.0 { 0 } else { k_r.floor() as usize };
    let q = (k1 * k1 * r as f64 * ln_n).ceil().max(1.0) as usize;
    (k_r, k, q, ln_n / base / 10.0)
}

/// Runs the whole pipeline for one cell and seed: generate, color, patch,
/// measure, verify. Failures are recorded in the verdict, never panicked.
pub fn run_trial(cell: &CellConfig, verify: &VerifySettings, trial: usize, seed: u64) -> TrialRecord {
    let start = Instant::now();
    let (k_r, k, q, t0) = raw_derived(cell.n, cell.r, cell.k1);
    let mut record = TrialRecord {
        n: cell.n,
        r: cell.r,
        k1: cell.k1,
        trial,
        seed,
        k_r,
        k,
        q,
        t0,
        gen_attempts: None,
        coloring_completed: false,
        min_available: None,
        extra_colors: None,
        colors_used: None,
        verdict: String::new(),
        pairs_checked: 0,
        pairs_connected: 0,
        sampled: false,
        diameter: None,
        treelike_fraction: None,
        short_cycle_vertices: None,
        wall_ms: 0,
    };
    let done = |mut rec: TrialRecord, verdict: &str, start: Instant| {
        rec.verdict = verdict.to_string();
        rec.wall_ms = start.elapsed().as_millis() as u64;
        rec
    };

    let params = match Params::new(cell.n, cell.r, cell.k1) {
        Ok(p) => p,
        Err(LocalStructError::PaletteGuard { .. }) => {
            return done(record, "params_rejected", start)
        }
        Err(_) => return done(record, "params_rejected", start),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, attempts) = match sample_simple_regular(cell.n, cell.r, &mut rng, verify.gen_max_attempts)
    {
        Ok(out) => out,
        Err(GenError::AttemptsExhausted { attempts }) => {
            record.gen_attempts = Some(attempts);
            return done(record, "gen_failed", start);
        }
        Err(_) => return done(record, "gen_failed", start),
    };
    record.gen_attempts = Some(attempts);

    let order: Vec<EdgeId> = (0..g.m()).collect();
    let run = match greedy_random_coloring(&g, &order, params.k, params.q, &mut rng) {
        Ok(run) => run,
        Err(ColoringError::ColorExhausted { .. }) => {
            return done(record, "color_exhausted", start)
        }
        Err(_) => return done(record, "color_exhausted", start),
    };
    record.coloring_completed = true;
    record.min_available = run.available_sizes.iter().min().copied();
    let coloring = recolor_near_short_cycles(&g, &run.coloring, 10, 10);
    record.extra_colors = Some(coloring.extra_colors());
    record.colors_used = Some(coloring.distinct_colors());

    record.diameter = diameter(&g);
    let treelike = (0..g.n())
        .filter(|&v| bfs_ball(&g, v, params.k).class() == BallClass::TreeLike)
        .count();
    record.treelike_fraction = Some(treelike as f64 / g.n() as f64);
    record.short_cycle_vertices = Some(vertices_near_short_cycles(&g, 10, 10).len());

    // pair selection: everything at small n, a seeded sample at scale
    let pairs: Vec<(usize, usize)> = if g.n() <= ALL_PAIRS_THRESHOLD {
        (0..g.n())
            .flat_map(|x| (x + 1..g.n()).map(move |y| (x, y)))
            .collect()
    } else {
        record.sampled = true;
        let mut set = std::collections::BTreeSet::new();
        while set.len() < verify.pairs {
            let x = rng.gen_range(0..g.n());
            let y = rng.gen_range(0..g.n());
            if x != y {
                set.insert((x.min(y), x.max(y)));
            }
        }
        set.into_iter().collect()
    };

    let max_len = if verify.max_len == 0 {
        default_max_len(g.n(), cell.r)
    } else {
        verify.max_len
    };
    let cons_cfg = ConstructiveConfig::for_scale(g.n());
    // every connected verdict is backed by a re-validated witness
    let witness_ok = |p: &crate::graph::Path, x: usize, y: usize| {
        assert!(crate::rcverify::is_rainbow_path(&coloring, p));
        assert_eq!(p.first(), x);
        assert_eq!(p.last(), y);
        true
    };
    let mut verdict = "connected";
    for &(x, y) in &pairs {
        record.pairs_checked += 1;
        let ok = match verify.mode {
            VerifyMode::Exhaustive => {
                match find_rainbow_path(&g, &coloring, x, y, g.n() - 1, u64::MAX).result {
                    PathSearch::Found(p) => witness_ok(&p, x, y),
                    PathSearch::NotFound { .. } => {
                        verdict = "not_connected";
                        false
                    }
                }
            }
            VerifyMode::Budget => {
                match find_rainbow_path(&g, &coloring, x, y, max_len, verify.budget).result {
                    PathSearch::Found(p) => witness_ok(&p, x, y),
                    PathSearch::NotFound { exhaustive } => {
                        verdict = if exhaustive { "not_connected" } else { "unknown" };
                        false
                    }
                }
            }
            VerifyMode::Constructive => {
                match constructive_rainbow_search(&g, &coloring, x, y, &params, &cons_cfg).result {
                    Ok(p) => witness_ok(&p, x, y),
                    Err(_) => {
                        // a constructive failure is not a disconnection proof
                        verdict = "unknown";
                        false
                    }
                }
            }
        };
        if ok {
            record.pairs_connected += 1;
        } else {
            break;
        }
    }
    done(record, verdict, start)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellAggregate {
    pub n: usize,
    pub r: usize,
    pub k1: f64,
    pub trials: usize,
    pub connected: usize,
    pub success_rate: f64,
    pub gen_failures: usize,
    pub color_failures: usize,
    pub mean_diameter_ratio: f64,
    pub mean_treelike_fraction: f64,
    pub mean_short_cycle_vertices: f64,
    pub mean_min_available: f64,
    pub mean_extra_colors: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<CellAggregate>,
}

fn aggregate_cell(cell: &CellConfig, records: &[&TrialRecord]) -> CellAggregate {
    let trials = records.len();
    let connected = records.iter().filter(|r| r.verdict == "connected").count();
    let mean_of = |f: &dyn Fn(&TrialRecord) -> Option<f64>| {
        let vals: Vec<f64> = records.iter().filter_map(|r| f(r)).collect();
        if vals.is_empty() {
            0.0
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    };
    let log_base = ((cell.r - 1) as f64).ln();
    CellAggregate {
        n: cell.n,
        r: cell.r,
        k1: cell.k1,
        trials,
        connected,
        success_rate: connected as f64 / trials.max(1) as f64,
        gen_failures: records.iter().filter(|r| r.verdict == "gen_failed").count(),
        color_failures: records
            .iter()
            .filter(|r| r.verdict == "color_exhausted")
            .count(),
        mean_diameter_ratio: mean_of(&|r| {
            r.diameter.map(|d| d as f64 / ((cell.n as f64).ln() / log_base))
        }),
        mean_treelike_fraction: mean_of(&|r| r.treelike_fraction),
        mean_short_cycle_vertices: mean_of(&|r| r.short_cycle_vertices.map(|v| v as f64)),
        mean_min_available: mean_of(&|r| r.min_available.map(|v| v as f64)),
        mean_extra_colors: mean_of(&|r| r.extra_colors.map(|v| v as f64)),
    }
}

/// Runs every (cell, trial) task, fanning out across `workers` threads
/// (0 = library default). Records come back in cell-major trial order, so
/// output bytes do not depend on the worker count.
pub fn sweep(cfg: &SweepConfig, workers: usize) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let tasks: Vec<(usize, usize)> = (0..cfg.cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let run_task = |&(c, t): &(usize, usize)| {
        run_trial(
            &cfg.cells[c],
            &cfg.verify,
            t,
            trial_seed(cfg.master_seed, c, t),
        )
    };
    let records: Vec<TrialRecord> = if workers == 1 {
        tasks.iter().map(run_task).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        pool.install(|| {
            use rayon::prelude::*;
            tasks.par_iter().map(run_task).collect()
        })
    };
    let aggregates = cfg
        .cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let cell_records: Vec<&TrialRecord> =
                records[c * cfg.trials..(c + 1) * cfg.trials].iter().collect();
            aggregate_cell(cell, &cell_records)
        })
        .collect();
    Ok(SweepResult {
        records,
        aggregates,
    })
}

/// One JSON object per line, in trial order.
pub fn trials_jsonl(records: &[TrialRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn aggregate_csv(aggregates: &[CellAggregate]) -> String {
    let mut out = String::from(
        "n,r,k1,trials,connected,success_rate,gen_failures,color_failures,\
         mean_diameter_ratio,mean_treelike_fraction,mean_short_cycle_vertices,\
         mean_min_available,mean_extra_colors\n",
    );
    for a in aggregates {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            a.n,
            a.r,
            a.k1,
            a.trials,
            a.connected,
            a.success_rate,
            a.gen_failures,
            a.color_failures,
            a.mean_diameter_ratio,
            a.mean_treelike_fraction,
            a.mean_short_cycle_vertices,
            a.mean_min_available,
            a.mean_extra_colors,
        ));
    }
    out
}

pub fn write_outputs(result: &SweepResult, out_dir: &std::path::Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::Io(e.to_string()))?;
    let write = |name: &str, data: &str| -> Result<(), HarnessError> {
        let mut f = std::fs::File::create(out_dir.join(name))
            .map_err(|e| HarnessError::Io(e.to_string()))?;
        f.write_all(data.as_bytes())
            .map_err(|e| HarnessError::Io(e.to_string()))
    };
    write("trials.jsonl", &trials_jsonl(&result.records))?;
    write("aggregate.csv", &aggregate_csv(&result.aggregates))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    /// Smallest q in range whose smoothed success rate clears 90%.
    pub min_q: Option<usize>,
    /// (q, raw success rate) at each evaluated point, ascending in q.
    pub evaluated: Vec<(usize, f64)>,
    /// The same curve, monotone-smoothed by a running maximum.
    pub smoothed: Vec<(usize, f64)>,
}

/// Bisects over the palette size for the smallest q where at least 90% of
/// seeded runs both finish the greedy coloring and verify rainbow
/// connected.
pub fn probe_min_q(
    g: &SimpleGraph,
    k: usize,
    seeds: usize,
    q_lo: usize,
    q_hi: usize,
    master_seed: u64,
) -> Result<ProbeResult, HarnessError> {
    let r = g.regularity().ok_or(HarnessError::NotRegular)?;
    let floor = 3 * (r.max(2) - 1).pow(k as u32);
    if q_lo <= floor || q_hi < q_lo {
        return Err(HarnessError::BadQRange {
            lo: q_lo,
            hi: q_hi,
            floor,
        });
    }
    let order: Vec<EdgeId> = (0..g.m()).collect();
    let max_len = default_max_len(g.n(), r.max(3));
    let success_rate = |q: usize| -> f64 {
        let mut ok = 0;
        for s in 0..seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, q, s));
            let Ok(run) = greedy_random_coloring(g, &order, k, q, &mut rng) else {
                continue;
            };
            let all = (0..g.n()).all(|x| {
                (x + 1..g.n()).all(|y| {
                    matches!(
                        find_rainbow_path(g, &run.coloring, x, y, max_len, 2_000_000).result,
                        PathSearch::Found(_)
                    )
                })
            });
            if all {
                ok += 1;
            }
        }
        ok as f64 / seeds.max(1) as f64
    };

    let mut evaluated = std::collections::BTreeMap::new();
    let eval = |q: usize, map: &mut std::collections::BTreeMap<usize, f64>| -> f64 {
        if let Some(&rate) = map.get(&q) {
            return rate;
        }
        let rate = success_rate(q);
        map.insert(q, rate);
        rate
    };

    let (mut lo, mut hi) = (q_lo, q_hi);
    let min_q = if eval(q_hi, &mut evaluated) < 0.9 {
        None
    } else {
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if eval(mid, &mut evaluated) >= 0.9 {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    };
    let evaluated: Vec<(usize, f64)> = evaluated.into_iter().collect();
    let mut smoothed = Vec::with_capacity(evaluated.len());
    let mut best = 0.0f64;
    for &(q, rate) in &evaluated {
        best = best.max(rate);
        smoothed.push((q, best));
    }
    Ok(ProbeResult {
        min_q,
        evaluated,
        smoothed,
    })
}

/// Exact count of cycles of each length 3..=max_k, one count per length.
/// Each cycle is enumerated once, rooted at its smallest vertex.
pub fn count_cycles_up_to(g: &SimpleGraph, max_k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; max_k + 1];
    let mut in_path = vec![false; g.n()];
    let mut path: Vec<usize> = Vec::new();

    fn extend(
        g: &SimpleGraph,
        root: usize,
        max_k: usize,
        path: &mut Vec<usize>,
        in_path: &mut Vec<bool>,
        counts: &mut Vec<u64>,
    ) {
        let v = *path.last().unwrap();
        for &w in g.neighbors(v) {
            if w == root && path.len() >= 3 {
                if path[1] < v {
                    counts[path.len()] += 1;
                }
                continue;
            }
            if w <= root || in_path[w] {
                continue;
            }
            if path.len() < max_k {
                path.push(w);
                in_path[w] = true;
                extend(g, root, max_k, path, in_path, counts);
                in_path[w] = false;
                path.pop();
            }
        }
    }

    for root in 0..g.n() {
        path.clear();
        path.push(root);
        in_path[root] = true;
        extend(g, root, max_k, &mut path, &mut in_path, &mut counts);
        in_path[root] = false;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleKStat {
    pub k: usize,
    pub mean: f64,
    pub sd: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub theory: f64,
    pub ci_overlaps_theory: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleStats {
    pub samples: usize,
    pub per_k: Vec<CycleKStat>,
}

/// Monte-Carlo means of the number of k-cycles in sampled graphs, with a
/// 95% CLT interval, against the limit (r-1)^k / (2k).
pub fn cycle_stats(
    samples: usize,
    n: usize,
    r: usize,
    max_k: usize,
    master_seed: u64,
) -> Result<CycleStats, HarnessError> {
    if !(3..=10).contains(&max_k) {
        return Err(HarnessError::BadMaxK(max_k));
    }
    if n < 2 || r < 3 || (n * r) % 2 != 0 {
        return Err(HarnessError::Config(format!("bad scale n={n} r={r}")));
    }
    let mut per_sample: Vec<Vec<u64>> = Vec::with_capacity(samples);
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, 0, s));
        let (g, _) = sample_simple_regular(n, r, &mut rng, 100_000)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        per_sample.push(count_cycles_up_to(&g, max_k));
    }
    let per_k = (3..=max_k)
        .map(|k| {
            let vals: Vec<f64> = per_sample.iter().map(|c| c[k] as f64).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                / (vals.len() as f64 - 1.0).max(1.0);
            let sd = var.sqrt();
            let half = 1.96 * sd / (vals.len() as f64).sqrt();
            let theory = ((r - 1) as f64).powi(k as i32) / (2.0 * k as f64);
            CycleKStat {
                k,
                mean,
                sd,
                ci_low: mean - half,
                ci_high: mean + half,
                theory,
                ci_overlaps_theory: mean - half <= theory && theory <= mean + half,
            }
        })
        .collect();
    Ok(CycleStats { samples, per_k })
}

/// Parameters of a binomial tail query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialTail {
    pub n: u64,
    pub p: f64,
    pub alpha: f64,
}

impl BinomialTail {
    pub fn new(n: u64, p: f64, alpha: f64) -> Result<Self, HarnessError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(HarnessError::Config(format!("p={p} outside [0,1]")));
        }
        Ok(BinomialTail { n, p, alpha })
    }
}

/// Standard Chernoff-style binomial tail bounds:
/// Pr(Bin(n,p) <= alpha np) <= exp(-(1-alpha)^2 np / 2) for 0 <= alpha <= 1,
/// Pr(Bin(n,p) >= alpha np) <= (e/alpha)^(alpha np)     for alpha >= 1.
/// Each side is `None` when alpha is outside its validity range.
pub fn binomial_tail_bounds(b: &BinomialTail) -> (Option<f64>, Option<f64>) {
    let np = b.n as f64 * b.p;
    let lower = (0.0..=1.0)
        .contains(&b.alpha)
        .then(|| (-(1.0 - b.alpha).powi(2) * np / 2.0).exp());
    let upper = (b.alpha >= 1.0)
        .then(|| (std::f64::consts::E / b.alpha).powf(b.alpha * np));
    (lower, upper)
}
