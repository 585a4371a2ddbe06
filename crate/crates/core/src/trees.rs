//! Counting oracles for colored complete d-ary trees: the pair count
//! m(T1, T2) of leaf pairs whose combined root paths are rainbow,
//! adversarial minimization over color-identification patterns (exhaustive
//! enumeration and simulated annealing), the frozen binary family achieving
//! m = 2^l, separation checks, and maximum rainbow leaf matchings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{edges_within_distance, SimpleGraph};
use crate::matching::hopcroft_karp;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("need d >= 2, levels >= 1 and root arity in {{d, d+1}}")]
    BadShape,
    #[error("trees have different shapes")]
    ShapeMismatch,
    #[error("color table does not match the tree shape")]
    BadColors,
    #[error("identification pattern is not a partial injection")]
    BadPattern,
    #[error("search space has ~{estimate:e} patterns, over the 1e7 guard")]
    SearchSpaceTooLarge { estimate: f64 },
    #[error("too many colors for the search masks ({0} > 256)")]
    TooManyColors(usize),
}

/// An edge of a complete d-ary tree, addressed by level (1-based, the number
/// of vertices from the root to the edge) and position within the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub level: usize,
    pub pos: usize,
}

/// A complete d-ary tree of a given height with abstract edge colors. The
/// root has `root_arity` children (d, or d+1 in the ball-of-a-regular-graph
/// setting); every other internal vertex has exactly d. Edges at level i
/// occupy positions 0 .. root_arity * d^(i-1); the edge at (i, p) leads to
/// the level-i vertex p, whose children sit at positions p*d .. (p+1)*d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredDaryTree {
    d: usize,
    levels: usize,
    root_arity: usize,
    colors: Vec<Vec<u32>>,
}

impl ColoredDaryTree {
    pub fn with_colors(
        d: usize,
        levels: usize,
        root_arity: usize,
        colors: Vec<Vec<u32>>,
    ) -> Result<Self, TreeError> {
        if d < 2 || levels < 1 || !(root_arity == d || root_arity == d + 1) {
            return Err(TreeError::BadShape);
        }
        if colors.len() != levels {
            return Err(TreeError::BadColors);
        }
        let mut width = root_arity;
        for level in &colors {
            if level.len() != width {
                return Err(TreeError::BadColors);
            }
            width *= d;
        }
        Ok(ColoredDaryTree {
            d,
            levels,
            root_arity,
            colors,
        })
    }

    /// A rainbow tree: globally distinct colors 0, 1, 2, ... in level order.
    pub fn rainbow(d: usize, levels: usize, root_arity: usize) -> Self {
        let mut colors = Vec::with_capacity(levels);
        let mut next = 0u32;
        let mut width = root_arity;
        for _ in 0..levels {
            colors.push((next..next + width as u32).collect());
            next += width as u32;
            width *= d;
        }
        ColoredDaryTree::with_colors(d, levels, root_arity, colors).expect("shape is valid")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn root_arity(&self) -> usize {
        self.root_arity
    }

    pub fn level_width(&self, level: usize) -> usize {
        self.root_arity * self.d.pow((level - 1) as u32)
    }

    pub fn edge_count(&self) -> usize {
        (1..=self.levels).map(|i| self.level_width(i)).sum()
    }

    pub fn leaf_count(&self) -> usize {
        self.level_width(self.levels)
    }

    pub fn color(&self, e: TreeEdge) -> u32 {
        self.colors[e.level - 1][e.pos]
    }

    pub fn set_color(&mut self, e: TreeEdge, c: u32) {
        self.colors[e.level - 1][e.pos] = c;
    }

    /// Edges on the path from leaf `leaf` up to the root, deepest first.
    pub fn leaf_path(&self, leaf: usize) -> Vec<TreeEdge> {
        let mut pos = leaf;
        (0..self.levels)
            .map(|up| {
                let e = TreeEdge {
                    level: self.levels - up,
                    pos,
                };
                pos /= self.d;
                e
            })
            .collect()
    }

    pub fn leaf_path_colors(&self, leaf: usize) -> Vec<u32> {
        self.leaf_path(leaf).iter().map(|&e| self.color(e)).collect()
    }

    /// Which root subtree the leaf belongs to.
    pub fn leaf_root_subtree(&self, leaf: usize) -> usize {
        leaf / self.d.pow((self.levels - 1) as u32)
    }

    pub fn is_rainbow(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.colors
            .iter()
            .flatten()
            .all(|&c| seen.insert(c))
    }

    fn flat_index(&self, e: TreeEdge) -> usize {
        (1..e.level).map(|i| self.level_width(i)).sum::<usize>() + e.pos
    }

    fn from_flat(&self, mut idx: usize) -> TreeEdge {
        for level in 1..=self.levels {
            let w = self.level_width(level);
            if idx < w {
                return TreeEdge { level, pos: idx };
            }
            idx -= w;
        }
        unreachable!("flat index out of range")
    }

    /// The tree as a plain graph; graph edge ids equal flat tree-edge
    /// indices (level-major order).
    fn to_graph(&self) -> SimpleGraph {
        // vertex ids: root 0, then level by level in position order
        let mut offset = vec![0usize; self.levels + 1];
        offset[1] = 1;
        for level in 1..self.levels {
            offset[level + 1] = offset[level] + self.level_width(level);
        }
        let vertex = |level: usize, pos: usize| {
            if level == 0 {
                0
            } else {
                offset[level] + pos
            }
        };
        let mut edges = Vec::with_capacity(self.edge_count());
        for level in 1..=self.levels {
            for pos in 0..self.level_width(level) {
                let parent = if level == 1 {
                    0
                } else {
                    vertex(level - 1, pos / self.d)
                };
                edges.push((parent, vertex(level, pos)));
            }
        }
        let n = offset[self.levels] + self.level_width(self.levels);
        SimpleGraph::from_edges(n, &edges).expect("tree is simple")
    }
}

/// The count of leaf pairs (v, w) whose combined root paths carry all
/// distinct colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCount {
    pub m: u64,
}

fn check_same_shape(t1: &ColoredDaryTree, t2: &ColoredDaryTree) -> Result<(), TreeError> {
    if t1.d == t2.d && t1.levels == t2.levels && t1.root_arity == t2.root_arity {
        Ok(())
    } else {
        Err(TreeError::ShapeMismatch)
    }
}

/// Exact m(T1, T2): iterates all leaf pairs and tests the combined path
/// colors for distinctness.
pub fn m_pairs(t1: &ColoredDaryTree, t2: &ColoredDaryTree) -> Result<PairCount, TreeError> {
    check_same_shape(t1, t2)?;
    let paths1: Vec<Vec<u32>> = (0..t1.leaf_count())
        .map(|v| {
            let mut c = t1.leaf_path_colors(v);
            c.sort_unstable();
            c
        })
        .collect();
    let paths2: Vec<Vec<u32>> = (0..t2.leaf_count())
        .map(|w| {
            let mut c = t2.leaf_path_colors(w);
            c.sort_unstable();
            c
        })
        .collect();
    let distinct = |c: &[u32]| c.windows(2).all(|w| w[0] != w[1]);
    let ok1: Vec<bool> = paths1.iter().map(|c| distinct(c)).collect();
    let ok2: Vec<bool> = paths2.iter().map(|c| distinct(c)).collect();
    let mut m = 0u64;
    for (p1, &r1) in paths1.iter().zip(&ok1) {
        if !r1 {
            continue;
        }
        for (p2, &r2) in paths2.iter().zip(&ok2) {
            if r2 && sorted_disjoint(p1, p2) {
                m += 1;
            }
        }
    }
    debug_assert!(m <= (t1.leaf_count() * t2.leaf_count()) as u64);
    Ok(PairCount { m })
}

fn sorted_disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// A partial injection from the edges of T2 to the edges of T1 (flat
/// level-major indices), recording which T2 edges share a color with which
/// T1 edges. With T1 rainbow, a pattern determines m(T1, T2) up to
/// relabeling, which makes it the canonical search space for the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentificationPattern {
    pub map: Vec<Option<usize>>,
}

impl IdentificationPattern {
    pub fn empty(edges: usize) -> Self {
        IdentificationPattern {
            map: vec![None; edges],
        }
    }

    pub fn is_valid(&self, t1_edges: usize) -> bool {
        let mut used = vec![false; t1_edges];
        for target in self.map.iter().flatten() {
            if *target >= t1_edges || used[*target] {
                return false;
            }
            used[*target] = true;
        }
        true
    }
}

/// Realizes a pattern as a pair of rainbow trees: T1 canonical rainbow, T2
/// reusing T1's color for identified edges and fresh colors elsewhere.
pub fn trees_from_pattern(
    d: usize,
    levels: usize,
    pattern: &IdentificationPattern,
) -> Result<(ColoredDaryTree, ColoredDaryTree), TreeError> {
    let t1 = ColoredDaryTree::rainbow(d, levels, d);
    let edges = t1.edge_count();
    if pattern.map.len() != edges || !pattern.is_valid(edges) {
        return Err(TreeError::BadPattern);
    }
    let mut t2 = t1.clone();
    for flat in 0..edges {
        let e = t2.from_flat(flat);
        let color = match pattern.map[flat] {
            Some(target) => target as u32,
            None => (edges + flat) as u32,
        };
        t2.set_color(e, color);
    }
    Ok((t1, t2))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Mask256([u64; 4]);

impl Mask256 {
    fn set(&mut self, bit: usize) {
        self.0[bit / 64] |= 1 << (bit % 64);
    }

    fn intersects(&self, other: &Mask256) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .any(|(a, b)| a & b != 0)
    }
}

/// Search state over patterns with incremental leaf-mask maintenance. T1 is
/// the canonical rainbow tree (colors = flat indices); T2 colors live in
/// [0, 2E): identified edges reuse T1 ids, fresh edges use E + flat index.
struct PatternSearch {
    d: usize,
    levels: usize,
    edges: usize,
    t1_masks: Vec<Mask256>,
    col2: Vec<u32>,
    used1: Vec<bool>,
    identified: Vec<usize>,
    leaf_masks: Vec<Mask256>,
}

impl PatternSearch {
    fn new(d: usize, levels: usize) -> Result<Self, TreeError> {
        let t1 = ColoredDaryTree::rainbow(d, levels, d);
        let edges = t1.edge_count();
        if 2 * edges > 256 {
            return Err(TreeError::TooManyColors(2 * edges));
        }
        let leaf_count = t1.leaf_count();
        let t1_masks = (0..leaf_count)
            .map(|v| {
                let mut mask = Mask256::default();
                for e in t1.leaf_path(v) {
                    mask.set(t1.flat_index(e));
                }
                mask
            })
            .collect();
        let col2: Vec<u32> = (0..edges).map(|e| (edges + e) as u32).collect();
        let mut s = PatternSearch {
            d,
            levels,
            edges,
            t1_masks,
            col2,
            used1: vec![false; edges],
            identified: Vec::new(),
            leaf_masks: vec![Mask256::default(); leaf_count],
        };
        for leaf in 0..leaf_count {
            s.leaf_masks[leaf] = s.mask_of_leaf(leaf);
        }
        Ok(s)
    }

    fn flat_level(&self, flat: usize) -> (usize, usize) {
        let mut idx = flat;
        let mut width = self.d;
        for level in 1..=self.levels {
            if idx < width {
                return (level, idx);
            }
            idx -= width;
            width *= self.d;
        }
        unreachable!()
    }

    fn leaf_path_flat(&self, leaf: usize) -> Vec<usize> {
        // flat indices of the leaf's path edges
        let mut out = Vec::with_capacity(self.levels);
        let mut pos = leaf;
        let mut offset: usize = (1..self.levels)
            .map(|i| self.d.pow(i as u32))
            .sum();
        let mut width = self.d.pow(self.levels as u32);
        for _ in 0..self.levels {
            out.push(offset + pos);
            pos /= self.d;
            width /= self.d;
            offset = offset.saturating_sub(width);
        }
        out
    }

    fn mask_of_leaf(&self, leaf: usize) -> Mask256 {
        let mut mask = Mask256::default();
        for flat in self.leaf_path_flat(leaf) {
            mask.set(self.col2[flat] as usize);
        }
        mask
    }

    /// Leaves under the edge at `flat`.
    fn leaf_range(&self, flat: usize) -> std::ops::Range<usize> {
        let (level, pos) = self.flat_level(flat);
        let span = self.d.pow((self.levels - level) as u32);
        pos * span..(pos + 1) * span
    }

    fn set_edge_color(&mut self, flat: usize, color: u32) {
        self.col2[flat] = color;
        for leaf in self.leaf_range(flat) {
            self.leaf_masks[leaf] = self.mask_of_leaf(leaf);
        }
    }

    fn pair_count(&self) -> u64 {
        let mut m = 0u64;
        for w in &self.leaf_masks {
            for v in &self.t1_masks {
                if !v.intersects(w) {
                    m += 1;
                }
            }
        }
        m
    }

    fn identify(&mut self, flat: usize, target: usize) {
        debug_assert!(!self.used1[target]);
        self.used1[target] = true;
        self.identified.push(flat);
        self.set_edge_color(flat, target as u32);
    }

    fn unidentify(&mut self, flat: usize) {
        let target = self.col2[flat] as usize;
        debug_assert!(target < self.edges);
        self.used1[target] = false;
        self.identified.retain(|&f| f != flat);
        self.set_edge_color(flat, (self.edges + flat) as u32);
    }

    fn pattern(&self) -> IdentificationPattern {
        let map = self
            .col2
            .iter()
            .map(|&c| {
                let c = c as usize;
                (c < self.edges).then_some(c)
            })
            .collect();
        IdentificationPattern { map }
    }

    /// First-improvement descent over single add/remove/retarget moves,
    /// repeated until no move improves; returns the local minimum.
    fn polish(&mut self) -> u64 {
        let mut current = self.pair_count();
        loop {
            let mut improved = false;
            for flat in 0..self.edges {
                let old_target = {
                    let c = self.col2[flat] as usize;
                    (c < self.edges).then_some(c)
                };
                if let Some(old) = old_target {
                    self.unidentify(flat);
                    let removed = self.pair_count();
                    if removed < current {
                        current = removed;
                        improved = true;
                        continue;
                    }
                    let mut best_here: Option<(usize, u64)> = None;
                    for t in 0..self.edges {
                        if self.used1[t] {
                            continue;
                        }
                        self.identify(flat, t);
                        let m = self.pair_count();
                        if m < current && best_here.is_none_or(|(_, b)| m < b) {
                            best_here = Some((t, m));
                        }
                        self.unidentify(flat);
                    }
                    match best_here {
                        Some((t, m)) => {
                            self.identify(flat, t);
                            current = m;
                            improved = true;
                        }
                        None => self.identify(flat, old),
                    }
                } else {
                    let mut best_here: Option<(usize, u64)> = None;
                    for t in 0..self.edges {
                        if self.used1[t] {
                            continue;
                        }
                        self.identify(flat, t);
                        let m = self.pair_count();
                        if m < current && best_here.is_none_or(|(_, b)| m < b) {
                            best_here = Some((t, m));
                        }
                        self.unidentify(flat);
                    }
                    if let Some((t, m)) = best_here {
                        self.identify(flat, t);
                        current = m;
                        improved = true;
                    }
                }
            }
            if !improved {
                return current;
            }
        }
    }
}

/// How to minimize m over tree pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Enumerate every identification pattern (guarded at ~1e7 patterns).
    Exhaustive,
    /// Simulated annealing over patterns, restarted `restarts` times with
    /// derived seeds, `iters` iterations each; best over all restarts.
    LocalSearch { restarts: usize, iters: usize },
}

#[derive(Debug, Clone)]
pub struct AdversarialResult {
    pub t1: ColoredDaryTree,
    pub t2: ColoredDaryTree,
    pub m: u64,
    pub pattern: IdentificationPattern,
}

fn pattern_space_estimate(edges: usize) -> f64 {
    // sum over k of C(E,k)^2 * k!
    let e = edges as f64;
    let mut total = 0.0;
    let mut term = 1.0f64; // k = 0
    for k in 0..=edges {
        total += term;
        if total > 1e18 {
            return total;
        }
        let kf = k as f64;
        term *= (e - kf) * (e - kf) / (kf + 1.0);
    }
    total
}

/// Minimizes m(T1, T2) over pairs of rainbow trees by searching the space
/// of color-identification patterns. Returns the minimizing (or best found)
/// pair; both returned trees are rainbow.
pub fn adversarial_min_m(
    d: usize,
    levels: usize,
    mode: SearchMode,
    seed: u64,
) -> Result<AdversarialResult, TreeError> {
    let mut search = PatternSearch::new(d, levels)?;
    let edges = search.edges;
    let mut best_m = u64::MAX;
    let mut best_pattern = IdentificationPattern::empty(edges);

    match mode {
        SearchMode::Exhaustive => {
            let estimate = pattern_space_estimate(edges);
            if estimate > 1e7 {
                return Err(TreeError::SearchSpaceTooLarge { estimate });
            }
            fn recurse(
                s: &mut PatternSearch,
                flat: usize,
                best_m: &mut u64,
                best_pattern: &mut IdentificationPattern,
            ) {
                if flat == s.edges {
                    let m = s.pair_count();
                    if m < *best_m {
                        *best_m = m;
                        *best_pattern = s.pattern();
                    }
                    return;
                }
                recurse(s, flat + 1, best_m, best_pattern);
                for target in 0..s.edges {
                    if !s.used1[target] {
                        s.identify(flat, target);
                        recurse(s, flat + 1, best_m, best_pattern);
                        s.unidentify(flat);
                    }
                }
            }
            recurse(&mut search, 0, &mut best_m, &mut best_pattern);
        }
        SearchMode::LocalSearch { restarts, iters } => {
            for restart in 0..restarts.max(1) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
                // fresh random pattern
                for flat in search.identified.clone() {
                    search.unidentify(flat);
                }
                for flat in 0..edges {
                    if rng.gen_bool(0.5) {
                        let free: Vec<usize> =
                            (0..edges).filter(|&t| !search.used1[t]).collect();
                        if !free.is_empty() {
                            let t = free[rng.gen_range(0..free.len())];
                            search.identify(flat, t);
                        }
                    }
                }
                let mut current = search.pair_count();
                if current < best_m {
                    best_m = current;
                    best_pattern = search.pattern();
                }
                // geometric annealing schedule, fixed for reproducibility:
                // T0 = d^levels, T_end = 0.05
                let t0 = (d.pow(levels as u32) as f64).max(1.0);
                let t_end = 0.05f64;
                let alpha = (t_end / t0).powf(1.0 / iters.max(1) as f64);
                let mut temp = t0;
                for _ in 0..iters {
                    temp *= alpha;
                    let unidentified: Vec<usize> = (0..edges)
                        .filter(|&f| search.col2[f] as usize >= edges)
                        .collect();
                    let move_kind = rng.gen_range(0..3);
                    let applied: Option<(usize, Option<usize>)> = match move_kind {
                        0 if !unidentified.is_empty() => {
                            let flat = unidentified[rng.gen_range(0..unidentified.len())];
                            let free: Vec<usize> =
                                (0..edges).filter(|&t| !search.used1[t]).collect();
                            if free.is_empty() {
                                None
                            } else {
                                let t = free[rng.gen_range(0..free.len())];
                                search.identify(flat, t);
                                Some((flat, None))
                            }
                        }
                        1 if !search.identified.is_empty() => {
                            let flat =
                                search.identified[rng.gen_range(0..search.identified.len())];
                            let old = search.col2[flat] as usize;
                            search.unidentify(flat);
                            Some((flat, Some(old)))
                        }
                        2 if !search.identified.is_empty() => {
                            let flat =
                                search.identified[rng.gen_range(0..search.identified.len())];
                            let old = search.col2[flat] as usize;
                            let free: Vec<usize> =
                                (0..edges).filter(|&t| !search.used1[t]).collect();
                            if free.is_empty() {
                                None
                            } else {
                                let t = free[rng.gen_range(0..free.len())];
                                search.unidentify(flat);
                                search.identify(flat, t);
                                Some((flat, Some(old)))
                            }
                        }
                        _ => None,
                    };
                    let Some((flat, old_target)) = applied else {
                        continue;
                    };
                    let proposed = search.pair_count();
                    let accept = proposed <= current
                        || rng.gen_bool(
                            (-((proposed - current) as f64) / temp).exp().clamp(0.0, 1.0),
                        );
                    if accept {
                        current = proposed;
                        if current < best_m {
                            best_m = current;
                            best_pattern = search.pattern();
                        }
                    } else {
                        // revert
                        let now = search.col2[flat] as usize;
                        if now < edges {
                            search.unidentify(flat);
                        }
                        if let Some(old) = old_target {
                            search.identify(flat, old);
                        }
                    }
                }
                let polished = search.polish();
                if polished < best_m {
                    best_m = polished;
                    best_pattern = search.pattern();
                }
            }
        }
    }

    let (t1, t2) = trees_from_pattern(d, levels, &best_pattern)?;
    debug_assert_eq!(m_pairs(&t1, &t2)?.m, best_m);
    Ok(AdversarialResult {
        t1,
        t2,
        m: best_m,
        pattern: best_pattern,
    })
}

/// The frozen binary family with m(T1, T2) = 2^levels: T2's edge at
/// (level i, pos p) reuses T1's color at (level i, p xor (2^i - 2)), i.e.
/// all path bits flipped except the last. Every T2 leaf then has exactly
/// one rainbow partner, the complementary T1 leaf.
pub fn binary_counterexample(levels: usize) -> (ColoredDaryTree, ColoredDaryTree) {
    assert!(levels >= 1);
    let t1 = ColoredDaryTree::rainbow(2, levels, 2);
    let mut t2 = t1.clone();
    for level in 1..=levels {
        let flip = (1usize << level) - 2;
        for pos in 0..t1.level_width(level) {
            let partner = TreeEdge {
                level,
                pos: pos ^ flip,
            };
            t2.set_color(TreeEdge { level, pos }, t1.color(partner));
        }
    }
    (t1, t2)
}

/// Checks that edges at tree edge-distance <= l never share a color;
/// returns the first violating pair otherwise.
pub fn check_l_separated(t: &ColoredDaryTree, l: usize) -> Option<(TreeEdge, TreeEdge)> {
    if l == 0 {
        return None;
    }
    let g = t.to_graph();
    for e in 0..g.m() {
        for f in edges_within_distance(&g, e, l).expect("edge id valid") {
            if f > e && t.color(t.from_flat(e)) == t.color(t.from_flat(f)) {
                return Some((t.from_flat(e), t.from_flat(f)));
            }
        }
    }
    None
}

/// A bijection between leaf subsets S1 of T1 and S2 of T2 such that every
/// matched pair has rainbow combined root paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafMatching {
    pub pairs: Vec<(usize, usize)>,
}

impl LeafMatching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn s1(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(v, _)| v).collect()
    }

    pub fn s2(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(_, w)| w).collect()
    }
}

/// Maximum matching over rainbow-compatible leaf pairs. Trees with root
/// arity d+1 are reduced by ignoring the last root subtree of each, per the
/// counting argument's setup.
pub fn max_rainbow_matching(
    t1: &ColoredDaryTree,
    t2: &ColoredDaryTree,
) -> Result<LeafMatching, TreeError> {
    check_same_shape(t1, t2)?;
    let keep = |t: &ColoredDaryTree, leaf: usize| {
        t.root_arity == t.d || t.leaf_root_subtree(leaf) != t.root_arity - 1
    };
    let leaves1: Vec<usize> = (0..t1.leaf_count()).filter(|&v| keep(t1, v)).collect();
    let leaves2: Vec<usize> = (0..t2.leaf_count()).filter(|&w| keep(t2, w)).collect();
    let paths1: Vec<Vec<u32>> = leaves1
        .iter()
        .map(|&v| {
            let mut c = t1.leaf_path_colors(v);
            c.sort_unstable();
            c
        })
        .collect();
    let paths2: Vec<Vec<u32>> = leaves2
        .iter()
        .map(|&w| {
            let mut c = t2.leaf_path_colors(w);
            c.sort_unstable();
            c
        })
        .collect();
    let distinct = |c: &[u32]| c.windows(2).all(|w| w[0] != w[1]);
    let adjacency: Vec<Vec<usize>> = paths1
        .iter()
        .map(|p1| {
            if !distinct(p1) {
                return Vec::new();
            }
            paths2
                .iter()
                .enumerate()
                .filter(|(_, p2)| distinct(p2) && sorted_disjoint(p1, p2))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let assignment = hopcroft_karp(&adjacency, leaves2.len());
    let pairs = assignment
        .into_iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| (leaves1[i], leaves2[j])))
        .collect();
    Ok(LeafMatching { pairs })
}
