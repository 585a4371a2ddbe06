//! Distance-constrained sequential random edge coloring: every edge draws a
//! color uniformly from the palette minus the colors already used within
//! edge-distance k, plus the fresh-color patch around short cycles, the
//! proper-coloring audit, and an exact enumeration of the process law on
//! tiny instances.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::graph::{edges_within_distance, EdgeId, GraphError, SimpleGraph};
use crate::localstruct::vertices_near_short_cycles;

pub type ColorId = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColoringError {
    #[error("order must be a permutation of the {m} edge ids")]
    BadOrder { m: usize },
    #[error("all {q} colors forbidden at step {position} (edge {edge})")]
    ColorExhausted {
        position: usize,
        edge: EdgeId,
        q: usize,
    },
    #[error("instance too large for exact enumeration: q^m = {size:e} > 1e6")]
    InstanceTooLarge { size: f64 },
    #[error("coloring has {got} entries, graph has {want} edges")]
    WrongLength { got: usize, want: usize },
    #[error("bad coloring data: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A total edge coloring over palette [0, q) plus `extra_colors` fresh
/// colors appended by the short-cycle patch (ids q .. q+extra_colors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    q: usize,
    colors: Vec<ColorId>,
    extra_colors: usize,
}

impl EdgeColoring {
    pub fn new(q: usize, colors: Vec<ColorId>, extra_colors: usize) -> Result<Self, ColoringError> {
        if let Some(&c) = colors.iter().find(|&&c| c >= q + extra_colors) {
            return Err(ColoringError::Format(format!(
                "color {c} outside palette {q}+{extra_colors}"
            )));
        }
        Ok(EdgeColoring {
            q,
            colors,
            extra_colors,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn extra_colors(&self) -> usize {
        self.extra_colors
    }

    pub fn color(&self, e: EdgeId) -> ColorId {
        self.colors[e]
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn distinct_colors(&self) -> usize {
        let mut seen = vec![false; self.q + self.extra_colors];
        let mut count = 0;
        for &c in &self.colors {
            if !seen[c] {
                seen[c] = true;
                count += 1;
            }
        }
        count
    }
}

/// Output of the greedy pass: the coloring plus the available-set size
/// observed at every step (indexed by position in the coloring order).
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub coloring: EdgeColoring,
    pub available_sizes: Vec<usize>,
}

fn check_permutation(order: &[EdgeId], m: usize) -> Result<(), ColoringError> {
    if order.len() != m {
        return Err(ColoringError::BadOrder { m });
    }
    let mut seen = vec![false; m];
    for &e in order {
        if e >= m || seen[e] {
            return Err(ColoringError::BadOrder { m });
        }
        seen[e] = true;
    }
    Ok(())
}

/// Colors the colors of already-colored edges within edge-distance k of `e`.
fn forbidden_colors(
    g: &SimpleGraph,
    e: EdgeId,
    k: usize,
    assigned: &[Option<ColorId>],
) -> Vec<ColorId> {
    if k == 0 {
        return Vec::new();
    }
    edges_within_distance(g, e, k)
        .expect("edge id is valid")
        .into_iter()
        .filter_map(|f| assigned[f])
        .collect()
}

/// Sequentially colors the edges in `order`, drawing each color uniformly
/// from the palette [0, q) minus the colors already used within
/// edge-distance k. Deterministic given the rng state. Fails with
/// `ColorExhausted` when the forbidden set covers the whole palette.
pub fn greedy_random_coloring<R: Rng>(
    g: &SimpleGraph,
    order: &[EdgeId],
    k: usize,
    q: usize,
    rng: &mut R,
) -> Result<GreedyRun, ColoringError> {
    assert!(q >= 1);
    check_permutation(order, g.m())?;
    let mut assigned: Vec<Option<ColorId>> = vec![None; g.m()];
    let mut available_sizes = Vec::with_capacity(g.m());
    let mut blocked = vec![false; q];
    for (position, &e) in order.iter().enumerate() {
        blocked.iter_mut().for_each(|b| *b = false);
        for c in forbidden_colors(g, e, k, &assigned) {
            blocked[c] = true;
        }
        let available: Vec<ColorId> = (0..q).filter(|&c| !blocked[c]).collect();
        if available.is_empty() {
            return Err(ColoringError::ColorExhausted { position, edge: e, q });
        }
        available_sizes.push(available.len());
        assigned[e] = Some(available[rng.gen_range(0..available.len())]);
    }
    let colors = assigned.into_iter().map(Option::unwrap).collect();
    Ok(GreedyRun {
        coloring: EdgeColoring::new(q, colors, 0)?,
        available_sizes,
    })
}

/// Audits the distance-k proper-coloring property: returns the first pair
/// of distinct edges within edge-distance k sharing a color, or `None` if
/// the coloring is proper.
pub fn verify_proper_gamma(
    g: &SimpleGraph,
    coloring: &EdgeColoring,
    k: usize,
) -> Option<(EdgeId, EdgeId)> {
    if k == 0 {
        return None;
    }
    for e in 0..g.m() {
        for f in edges_within_distance(g, e, k).expect("edge id is valid") {
            if f > e && coloring.color(f) == coloring.color(e) {
                return Some((e, f));
            }
        }
    }
    None
}

/// Gives every edge within edge-distance `radius` of a cycle of length at
/// most `max_cycle` a brand-new color (one fresh color per edge, ids >= q);
/// all other edges keep theirs. Fresh colors are assigned in ascending
/// edge-id order, so the patch is deterministic.
pub fn recolor_near_short_cycles(
    g: &SimpleGraph,
    coloring: &EdgeColoring,
    radius: usize,
    max_cycle: usize,
) -> EdgeColoring {
    assert!(radius >= 1);
    assert_eq!(coloring.len(), g.m());
    // an edge is within edge-distance `radius` of a cycle edge exactly when
    // one of its endpoints is within vertex-distance radius-1 of a cycle
    // vertex
    let near = vertices_near_short_cycles(g, radius - 1, max_cycle);
    let mut is_near = vec![false; g.n()];
    for v in near {
        is_near[v] = true;
    }
    let mut colors = coloring.colors().to_vec();
    let mut next = coloring.q() + coloring.extra_colors();
    let mut extra = coloring.extra_colors();
    for e in 0..g.m() {
        let (u, v) = g.edge(e);
        if is_near[u] || is_near[v] {
            colors[e] = next;
            next += 1;
            extra += 1;
        }
    }
    EdgeColoring::new(coloring.q(), colors, extra).expect("fresh colors stay in range")
}

/// The exact law of the sequential coloring process on a tiny instance:
/// every total coloring it can produce, with its probability (the product
/// of 1/a_i over the available-set sizes along the way).
#[derive(Debug, Clone)]
pub struct ProcessDistribution {
    pub q: usize,
    /// Outcomes as (colors by edge id, probability).
    pub outcomes: Vec<(Vec<ColorId>, BigRational)>,
}

impl ProcessDistribution {
    pub fn total_probability(&self) -> BigRational {
        self.outcomes
            .iter()
            .fold(BigRational::zero(), |acc, (_, p)| acc + p)
    }

    /// max over edges e, colors x and conditionings C (the colors of all
    /// other edges) of Pr(c(e)=x | C).
    pub fn max_conditional_color_probability(&self) -> BigRational {
        let m = match self.outcomes.first() {
            Some((c, _)) => c.len(),
            None => return BigRational::zero(),
        };
        let mut best = BigRational::zero();
        for e in 0..m {
            // group outcomes by the colors of all edges except e
            let mut groups: BTreeMap<Vec<ColorId>, (BigRational, BTreeMap<ColorId, BigRational>)> =
                BTreeMap::new();
            for (colors, p) in &self.outcomes {
                let mut key = colors.clone();
                key.remove(e);
                let entry = groups
                    .entry(key)
                    .or_insert_with(|| (BigRational::zero(), BTreeMap::new()));
                entry.0 += p;
                *entry
                    .1
                    .entry(colors[e])
                    .or_insert_with(BigRational::zero) += p;
            }
            for (_, (total, per_color)) in groups {
                for (_, mass) in per_color {
                    let cond = mass / total.clone();
                    if cond > best {
                        best = cond;
                    }
                }
            }
        }
        best
    }
}

/// Enumerates the whole process tree of the sequential coloring on a tiny
/// instance (guarded by q^m <= 10^6). Probabilities sum to one.
pub fn process_distribution_exact(
    g: &SimpleGraph,
    order: &[EdgeId],
    k: usize,
    q: usize,
) -> Result<ProcessDistribution, ColoringError> {
    assert!(q >= 1);
    check_permutation(order, g.m())?;
    let size = (q as f64).powi(g.m() as i32);
    if size > 1e6 {
        return Err(ColoringError::InstanceTooLarge { size });
    }
    let mut outcomes = Vec::new();
    let mut assigned: Vec<Option<ColorId>> = vec![None; g.m()];

    fn recurse(
        g: &SimpleGraph,
        order: &[EdgeId],
        k: usize,
        q: usize,
        step: usize,
        prob: BigRational,
        assigned: &mut Vec<Option<ColorId>>,
        outcomes: &mut Vec<(Vec<ColorId>, BigRational)>,
    ) {
        if step == order.len() {
            let colors = assigned.iter().map(|c| c.unwrap()).collect();
            outcomes.push((colors, prob));
            return;
        }
        let e = order[step];
        let mut blocked = vec![false; q];
        for c in forbidden_colors(g, e, k, assigned) {
            blocked[c] = true;
        }
        let available: Vec<ColorId> = (0..q).filter(|&c| !blocked[c]).collect();
        if available.is_empty() {
            // dead branch: the process would fail here; it carries no mass
            // only when q is large enough, which callers guard for
            return;
        }
        let share = prob / BigRational::from(BigInt::from(available.len()));
        for c in available {
            assigned[e] = Some(c);
            recurse(g, order, k, q, step + 1, share.clone(), assigned, outcomes);
            assigned[e] = None;
        }
    }

    recurse(
        g,
        order,
        k,
        q,
        0,
        BigRational::one(),
        &mut assigned,
        &mut outcomes,
    );
    Ok(ProcessDistribution { q, outcomes })
}

/// Writes the coloring file format: header "m q extra", then one line
/// "edge_id color" per edge in ascending edge-id order.
pub fn write_coloring<W: Write>(c: &EdgeColoring, w: &mut W) -> Result<(), ColoringError> {
    let mut buf = format!("{} {} {}\n", c.len(), c.q(), c.extra_colors());
    for (e, &color) in c.colors().iter().enumerate() {
        buf.push_str(&format!("{} {}\n", e, color));
    }
    w.write_all(buf.as_bytes())
        .map_err(|e| ColoringError::Io(e.to_string()))
}

pub fn read_coloring<R: BufRead>(r: &mut R) -> Result<EdgeColoring, ColoringError> {
    let mut lines = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| ColoringError::Io(e.to_string()))?;
        if !line.trim().is_empty() {
            lines.push(line);
        }
    }
    if lines.is_empty() {
        return Err(ColoringError::Format("empty file".into()));
    }
    let header: Vec<usize> = lines[0]
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| ColoringError::Format(e.to_string()))?;
    let [m, q, extra] = header[..] else {
        return Err(ColoringError::Format("header must be: m q extra".into()));
    };
    if lines.len() != m + 1 {
        return Err(ColoringError::Format(format!(
            "expected {m} edge lines, found {}",
            lines.len() - 1
        )));
    }
    let mut colors = vec![usize::MAX; m];
    for (i, line) in lines[1..].iter().enumerate() {
        let parts: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| ColoringError::Format(e.to_string()))?;
        let [edge, color] = parts[..] else {
            return Err(ColoringError::Format(format!("bad line: {line:?}")));
        };
        if edge != i {
            return Err(ColoringError::Format(format!(
                "edge ids must be ascending from 0, got {edge} at line {}",
                i + 2
            )));
        }
        colors[edge] = color;
    }
    EdgeColoring::new(q, colors, extra)
}
