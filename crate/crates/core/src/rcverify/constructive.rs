//! The constructive route to a rainbow x-y path, following the coloring
//! scheme's existence argument: take the radius-k balls at both endpoints,
//! match their leaves so matched root paths share no color, grow pruned
//! layers from the matched leaves, then grow disjoint connector trees and
//! scan for a crossing edge whose assembled path is rainbow end to end.

use super::is_rainbow_path;
use crate::coloring::EdgeColoring;
use crate::graph::{EdgeId, Path, SimpleGraph, VertexId};
use crate::localstruct::{bfs_ball, BallStructure, Params};
use crate::matching::hopcroft_karp;

/// Desk-scale thresholds for the pipeline. The asymptotic leaf and tree
/// targets of the underlying argument are replaced by configurable values
/// that keep every stage nontrivial at practical n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructiveConfig {
    /// Layer growth stops once a layer holds this many vertices.
    pub inner_target: usize,
    /// Connector trees grow until a frontier reaches this many leaves.
    pub outer_target: usize,
    /// How many matched pairs to try as connector-tree roots.
    pub min_connectors: usize,
    /// Hard cap on layer-growth rounds.
    pub max_rounds: usize,
    /// When the balls overlap at off-ball distance h <= this, retry with a
    /// deeper ball instead of discounting shared leaves.
    pub overlap_depth_bonus: usize,
}

impl ConstructiveConfig {
    pub fn for_scale(n: usize) -> Self {
        let n_f = n as f64;
        ConstructiveConfig {
            inner_target: (n_f.ln().ceil() as usize).max(1),
            outer_target: ((n_f.powf(0.6).ceil() as usize).min(n / 10)).max(2),
            min_connectors: 10,
            max_rounds: 10,
            overlap_depth_bonus: 5,
        }
    }
}

/// Which stage of the pipeline starved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructiveStage {
    /// The balls overlapped closely, and the direct ball path through the
    /// deepened ball was not rainbow.
    OverlapPath,
    /// No pair of leaves with color-disjoint root paths.
    LeafMatching,
    /// The outward layers from the source side died out.
    LayerGrowthA,
    /// The outward layers from the target side died out.
    LayerGrowthB,
    /// No matched pair could grow both connector trees to target size.
    ConnectorTrees,
    /// Trees grew, but no edge joins their frontiers.
    CrossingEdges,
    /// Crossing edges exist, but none closes a rainbow path.
    RainbowCheck,
}

/// Everything the pipeline built along the way, kept for inspection and
/// for auditing the pruning record.
#[derive(Debug, Clone)]
pub struct ConstructiveSearchState {
    pub depth: usize,
    pub ball_x: BallStructure,
    pub ball_y: Option<BallStructure>,
    pub overlap_discounted: bool,
    /// Matched leaf pairs (leaf of the x-ball, leaf of the y-ball).
    pub leaf_matching: Vec<(VertexId, VertexId)>,
    /// Layer vertex lists, round by round, starting at the matched leaves.
    pub a_layers: Vec<Vec<VertexId>>,
    pub b_layers: Vec<Vec<VertexId>>,
    /// The layer-to-layer injection, per round, as (b-vertex, a-vertex).
    pub injections: Vec<Vec<(VertexId, VertexId)>>,
    /// Candidate edges rejected by the membership or rainbow-extension
    /// tests during layer growth.
    pub excluded_edges: Vec<EdgeId>,
    /// Size of the exclusion set R when connector growth started.
    pub exclusion_size: usize,
    pub connector_pairs_attempted: usize,
    pub connector_pairs_grown: usize,
    pub crossing_candidates: usize,
}

#[derive(Debug, Clone)]
pub struct ConstructiveOutcome {
    pub result: Result<Path, ConstructiveStage>,
    pub state: ConstructiveSearchState,
}

struct GrowthNode {
    vertex: VertexId,
    pair: usize,
    /// Full vertex route from the ball root to this vertex.
    route: Vec<VertexId>,
    /// Sorted colors along the route.
    colors: Vec<usize>,
}

fn sorted_disjoint(a: &[usize], b: &[usize]) -> bool {
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

fn sorted_insert(v: &mut Vec<usize>, c: usize) {
    let pos = v.partition_point(|&x| x < c);
    v.insert(pos, c);
}

fn sorted_contains(v: &[usize], c: usize) -> bool {
    v.binary_search(&c).is_ok()
}

struct LeafInfo {
    vertex: VertexId,
    route: Vec<VertexId>,
    colors: Vec<usize>,
}

fn leaf_infos(
    ball: &BallStructure,
    coloring: &EdgeColoring,
    skip: Option<&BallStructure>,
) -> Vec<LeafInfo> {
    ball.leaves()
        .iter()
        .filter(|&&u| skip.is_none_or(|other| !other.contains(u)))
        .filter_map(|&u| {
            let path = ball.root_path(u).ok()?;
            let mut colors: Vec<usize> =
                path.edge_ids().iter().map(|&e| coloring.color(e)).collect();
            colors.sort_unstable();
            if colors.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            Some(LeafInfo {
                vertex: u,
                route: path.reversed().vertices().to_vec(),
                colors,
            })
        })
        .collect()
}

struct Connector {
    vertices: Vec<VertexId>,
    parent: Vec<Option<usize>>,
    edge: Vec<Option<EdgeId>>,
    frontier: Vec<usize>,
}

impl Connector {
    /// Route from the tree root to node `idx`, as (vertices, edge colors).
    fn route_to(&self, idx: usize, coloring: &EdgeColoring) -> (Vec<VertexId>, Vec<usize>) {
        let mut verts = Vec::new();
        let mut colors = Vec::new();
        let mut cur = Some(idx);
        while let Some(i) = cur {
            verts.push(self.vertices[i]);
            if let Some(e) = self.edge[i] {
                colors.push(coloring.color(e));
            }
            cur = self.parent[i];
        }
        verts.reverse();
        colors.reverse();
        (verts, colors)
    }
}

/// Grows a BFS tree from `root` avoiding `used` vertices until the frontier
/// reaches `target`; newly claimed vertices stay marked in `used`.
fn grow_connector(
    g: &SimpleGraph,
    root: VertexId,
    used: &mut [bool],
    target: usize,
    depth_cap: usize,
) -> Option<Connector> {
    let mut tree = Connector {
        vertices: vec![root],
        parent: vec![None],
        edge: vec![None],
        frontier: vec![0],
    };
    for _ in 0..depth_cap {
        if tree.frontier.len() >= target {
            return Some(tree);
        }
        let mut next = Vec::new();
        for &ni in &tree.frontier {
            let v = tree.vertices[ni];
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                if !used[w] {
                    used[w] = true;
                    tree.vertices.push(w);
                    tree.parent.push(Some(ni));
                    tree.edge.push(Some(e));
                    next.push(tree.vertices.len() - 1);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        tree.frontier = next;
    }
    (tree.frontier.len() >= target).then_some(tree)
}

/// Runs the constructive pipeline for one vertex pair. On success the
/// returned path starts at x, ends at y, and is verified rainbow; on
/// failure the tag names the first stage that starved. The search state is
/// returned either way.
pub fn constructive_rainbow_search(
    g: &SimpleGraph,
    coloring: &EdgeColoring,
    x: VertexId,
    y: VertexId,
    params: &Params,
    cfg: &ConstructiveConfig,
) -> ConstructiveOutcome {
    assert_ne!(x, y);
    assert_eq!(coloring.len(), g.m());
    let depth = params.k.max(1);
    let ball_x = bfs_ball(g, x, depth);

    let mut state = ConstructiveSearchState {
        depth,
        ball_x: ball_x.clone(),
        ball_y: None,
        overlap_discounted: false,
        leaf_matching: Vec::new(),
        a_layers: Vec::new(),
        b_layers: Vec::new(),
        injections: Vec::new(),
        excluded_edges: Vec::new(),
        exclusion_size: 0,
        connector_pairs_attempted: 0,
        connector_pairs_grown: 0,
        crossing_candidates: 0,
    };

    // y inside the ball: the BFS tree path is rainbow by the distance-k
    // proper-coloring property
    if ball_x.contains(y) {
        let path = ball_x.root_path(y).expect("y is a member").reversed();
        debug_assert!(is_rainbow_path(coloring, &path));
        return ConstructiveOutcome {
            result: Ok(path),
            state,
        };
    }

    let ball_y = bfs_ball(g, y, depth);
    state.ball_y = Some(ball_y.clone());
    let overlap = ball_y.members().iter().any(|&v| ball_x.contains(v));
    let mut discount = false;
    if overlap {
        // h: distance from y to the nearest vertex of the x-ball
        let h = ball_y
            .members()
            .iter()
            .filter(|&&v| ball_x.contains(v))
            .filter_map(|&v| ball_y.distance_to_root(v))
            .min()
            .expect("overlap is nonempty");
        if h <= cfg.overlap_depth_bonus {
            // deepen the ball so y falls inside; the longer tree path is no
            // longer guaranteed rainbow, so it must be checked
            let deep = bfs_ball(g, x, depth + cfg.overlap_depth_bonus);
            state.depth = depth + cfg.overlap_depth_bonus;
            state.ball_x = deep.clone();
            if deep.contains(y) {
                let path = deep.root_path(y).expect("y is a member").reversed();
                if is_rainbow_path(coloring, &path) {
                    return ConstructiveOutcome {
                        result: Ok(path),
                        state,
                    };
                }
            }
            return ConstructiveOutcome {
                result: Err(ConstructiveStage::OverlapPath),
                state,
            };
        }
        discount = true;
        state.overlap_discounted = true;
    }

    // leaf matching: pair leaves whose root paths share no color (and no
    // vertex, when the balls overlap)
    let infos_x = leaf_infos(&ball_x, coloring, discount.then_some(&ball_y));
    let infos_y = leaf_infos(&ball_y, coloring, discount.then_some(&ball_x));
    let compatible = |a: &LeafInfo, b: &LeafInfo| {
        if !sorted_disjoint(&a.colors, &b.colors) {
            return false;
        }
        !discount || a.route.iter().all(|v| !b.route.contains(v))
    };
    let adj: Vec<Vec<usize>> = infos_x
        .iter()
        .map(|a| {
            infos_y
                .iter()
                .enumerate()
                .filter(|(_, b)| compatible(a, b))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let assignment = hopcroft_karp(&adj, infos_y.len());
    let pairs: Vec<(usize, usize)> = assignment
        .into_iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| (i, j)))
        .collect();
    if pairs.is_empty() {
        return ConstructiveOutcome {
            result: Err(ConstructiveStage::LeafMatching),
            state,
        };
    }
    state.leaf_matching = pairs
        .iter()
        .map(|&(i, j)| (infos_x[i].vertex, infos_y[j].vertex))
        .collect();

    // A-side layer growth from the matched x-leaves. A vertex contributes
    // its forward neighbors only if every one of them passes both the
    // membership test and the rainbow-extension test; one bad neighbor
    // spoils the vertex.
    let mut in_a = vec![false; g.n()];
    let mut a_nodes: Vec<GrowthNode> = pairs
        .iter()
        .enumerate()
        .map(|(pi, &(i, _))| {
            in_a[infos_x[i].vertex] = true;
            GrowthNode {
                vertex: infos_x[i].vertex,
                pair: pi,
                route: infos_x[i].route.clone(),
                colors: infos_x[i].colors.clone(),
            }
        })
        .collect();
    let partner_colors: Vec<Vec<usize>> = pairs.iter().map(|&(_, j)| infos_y[j].colors.clone()).collect();
    let mut a_rounds: Vec<Vec<usize>> = vec![(0..a_nodes.len()).collect()];
    let mut a_children: Vec<Vec<usize>> = vec![Vec::new(); a_nodes.len()];

    while a_rounds.last().unwrap().len() < cfg.inner_target
        && a_rounds.len() <= cfg.max_rounds
    {
        let current = a_rounds.last().unwrap().clone();
        let mut next = Vec::new();
        for node_idx in current {
            let (v, pair, prev_vertex) = {
                let node = &a_nodes[node_idx];
                // routes always hold at least [root, vertex]
                (node.vertex, node.pair, node.route[node.route.len() - 2])
            };
            // forward neighbors: all but the route predecessor
            let mut additions = Vec::new();
            let mut spoiled = false;
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                if w == prev_vertex {
                    continue;
                }
                // (b) membership
                if ball_x.contains(w) || ball_y.contains(w) || in_a[w] {
                    state.excluded_edges.push(e);
                    spoiled = true;
                    break;
                }
                // (c) rainbow extension against the pair's y-side path
                let c = coloring.color(e);
                if sorted_contains(&a_nodes[node_idx].colors, c)
                    || sorted_contains(&partner_colors[pair], c)
                {
                    state.excluded_edges.push(e);
                    spoiled = true;
                    break;
                }
                additions.push((w, e, c));
            }
            if spoiled {
                continue;
            }
            for (w, _e, c) in additions {
                debug_assert!(!in_a[w]);
                in_a[w] = true;
                let node = &a_nodes[node_idx];
                let mut route = node.route.clone();
                route.push(w);
                let mut colors = node.colors.clone();
                sorted_insert(&mut colors, c);
                a_nodes.push(GrowthNode {
                    vertex: w,
                    pair,
                    route,
                    colors,
                });
                a_children[node_idx].push(a_nodes.len() - 1);
                a_children.push(Vec::new());
                next.push(a_nodes.len() - 1);
            }
        }
        if next.is_empty() {
            break;
        }
        a_rounds.push(next);
    }
    state.a_layers = a_rounds
        .iter()
        .map(|round| round.iter().map(|&i| a_nodes[i].vertex).collect())
        .collect();
    if a_rounds.last().unwrap().is_empty() {
        return ConstructiveOutcome {
            result: Err(ConstructiveStage::LayerGrowthA),
            state,
        };
    }

    // B-side growth, mirroring the rounds and keeping the injection: b's
    // forward neighbors are zipped with its partner's children, and the
    // vertex only grows if every zipped pair passes the color-disjointness
    // test
    let mut in_b = vec![false; g.n()];
    let mut b_nodes: Vec<GrowthNode> = pairs
        .iter()
        .enumerate()
        .map(|(pi, &(_, j))| {
            in_b[infos_y[j].vertex] = true;
            GrowthNode {
                vertex: infos_y[j].vertex,
                pair: pi,
                route: infos_y[j].route.clone(),
                colors: infos_y[j].colors.clone(),
            }
        })
        .collect();
    // partner[i]: the a-node matched with b-node i
    let mut b_partner: Vec<usize> = (0..b_nodes.len()).collect();
    let mut b_rounds: Vec<Vec<usize>> = vec![(0..b_nodes.len()).collect()];
    let rounds = a_rounds.len() - 1;
    for _ in 0..rounds {
        let current = b_rounds.last().unwrap().clone();
        let mut next = Vec::new();
        for b_idx in current {
            let a_idx = b_partner[b_idx];
            let a_kids = &a_children[a_idx];
            if a_kids.is_empty() {
                continue; // the partner was spoiled; do not grow from here
            }
            let (v, prev_vertex) = {
                let node = &b_nodes[b_idx];
                (node.vertex, node.route[node.route.len() - 2])
            };
            let forward: Vec<(VertexId, EdgeId)> = g
                .neighbors(v)
                .iter()
                .zip(g.incident_edges(v))
                .filter(|&(&w, _)| w != prev_vertex)
                .map(|(&w, &e)| (w, e))
                .collect();
            // all-or-nothing: every forward neighbor must pass membership
            // and color checks against its zipped partner child
            if forward.len() > a_kids.len() {
                state.excluded_edges.extend(forward.iter().map(|&(_, e)| e));
                continue;
            }
            let mut accepted = Vec::new();
            let mut ok = true;
            for (zipped, &(w, e)) in forward.iter().enumerate() {
                let a_child = a_kids[zipped];
                if in_a[w] || ball_x.contains(w) || ball_y.contains(w) || in_b[w] {
                    state.excluded_edges.push(e);
                    ok = false;
                    break;
                }
                let c = coloring.color(e);
                let b_node = &b_nodes[b_idx];
                if sorted_contains(&b_node.colors, c) {
                    state.excluded_edges.push(e);
                    ok = false;
                    break;
                }
                let mut extended = b_node.colors.clone();
                sorted_insert(&mut extended, c);
                if !sorted_disjoint(&extended, &a_nodes[a_child].colors) {
                    state.excluded_edges.push(e);
                    ok = false;
                    break;
                }
                accepted.push((w, e, c, a_child));
            }
            if !ok {
                continue;
            }
            for (w, _e, c, a_child) in accepted {
                debug_assert!(!in_b[w]);
                in_b[w] = true;
                let node = &b_nodes[b_idx];
                let mut route = node.route.clone();
                route.push(w);
                let mut colors = node.colors.clone();
                sorted_insert(&mut colors, c);
                b_nodes.push(GrowthNode {
                    vertex: w,
                    pair: node.pair,
                    route,
                    colors,
                });
                b_partner.push(a_child);
                next.push(b_nodes.len() - 1);
            }
        }
        if next.is_empty() {
            break;
        }
        b_rounds.push(next);
    }
    state.b_layers = b_rounds
        .iter()
        .map(|round| round.iter().map(|&i| b_nodes[i].vertex).collect())
        .collect();
    state.injections = b_rounds
        .iter()
        .map(|round| {
            round
                .iter()
                .map(|&i| (b_nodes[i].vertex, a_nodes[b_partner[i]].vertex))
                .collect()
        })
        .collect();

    // connector tips: the matched (b, a) pairs of the last populated round
    let tips: Vec<(usize, usize)> = b_rounds
        .last()
        .unwrap()
        .iter()
        .map(|&i| (i, b_partner[i]))
        .collect();
    if tips.is_empty() {
        return ConstructiveOutcome {
            result: Err(ConstructiveStage::LayerGrowthB),
            state,
        };
    }

    // exclusion set R: both balls plus every grown layer vertex
    let mut used = vec![false; g.n()];
    for &v in ball_x.members().iter().chain(ball_y.members()) {
        used[v] = true;
    }
    for node in a_nodes.iter().chain(b_nodes.iter()) {
        used[node.vertex] = true;
    }
    state.exclusion_size = used.iter().filter(|&&b| b).count();

    let r_degree = g.regularity().unwrap_or(3).max(3);
    let depth_cap = super::default_max_len(g.n(), r_degree);
    let mut any_grown = false;
    let mut any_crossing = false;

    for &(b_idx, a_idx) in tips.iter().take(cfg.min_connectors.max(1)) {
        state.connector_pairs_attempted += 1;
        let a_tip = a_nodes[a_idx].vertex;
        let b_tip = b_nodes[b_idx].vertex;
        let Some(tree_x) = grow_connector(g, a_tip, &mut used, cfg.outer_target, depth_cap)
        else {
            continue;
        };
        let Some(tree_y) = grow_connector(g, b_tip, &mut used, cfg.outer_target, depth_cap)
        else {
            continue;
        };
        any_grown = true;
        state.connector_pairs_grown += 1;

        let mut y_frontier = std::collections::HashMap::new();
        for &ni in &tree_y.frontier {
            y_frontier.insert(tree_y.vertices[ni], ni);
        }
        let a_colors = &a_nodes[a_idx].colors;
        let b_colors = &b_nodes[b_idx].colors;
        for &xi in &tree_x.frontier {
            let xv = tree_x.vertices[xi];
            for (&w, &e) in g.neighbors(xv).iter().zip(g.incident_edges(xv)) {
                let Some(&yi) = y_frontier.get(&w) else {
                    continue;
                };
                any_crossing = true;
                state.crossing_candidates += 1;
                // the middle segment must be rainbow and color-disjoint
                // from both matched root paths
                let (xv_route, xv_colors) = tree_x.route_to(xi, coloring);
                let (yv_route, yv_colors) = tree_y.route_to(yi, coloring);
                let mut middle: Vec<usize> = xv_colors;
                middle.push(coloring.color(e));
                middle.extend(yv_colors);
                let mut sorted_middle = middle.clone();
                sorted_middle.sort_unstable();
                if sorted_middle.windows(2).any(|p| p[0] == p[1]) {
                    continue;
                }
                if !sorted_disjoint(&sorted_middle, a_colors)
                    || !sorted_disjoint(&sorted_middle, b_colors)
                {
                    continue;
                }
                // assemble x .. a_tip .. xv - w .. b_tip .. y
                let mut vertices = a_nodes[a_idx].route.clone();
                vertices.extend(xv_route.into_iter().skip(1));
                vertices.extend(yv_route.into_iter().rev());
                let mut b_route = b_nodes[b_idx].route.clone();
                b_route.pop();
                vertices.extend(b_route.into_iter().rev());
                let Ok(path) = Path::from_vertices(g, vertices) else {
                    continue; // self-intersection is possible under overlap
                };
                if !is_rainbow_path(coloring, &path) {
                    continue;
                }
                debug_assert_eq!(path.first(), x);
                debug_assert_eq!(path.last(), y);
                return ConstructiveOutcome {
                    result: Ok(path),
                    state,
                };
            }
        }
    }

    let stage = if !any_grown {
        ConstructiveStage::ConnectorTrees
    } else if !any_crossing {
        ConstructiveStage::CrossingEdges
    } else {
        ConstructiveStage::RainbowCheck
    };
    ConstructiveOutcome {
        result: Err(stage),
        state,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::greedy_random_coloring;
    use crate::genreg::sample_simple_regular;
    use crate::graph::EdgeId;
    use crate::rcverify::{find_rainbow_path, PathSearch};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // the raw greedy coloring: at desk scale the short-cycle patch would
    // hand every edge a fresh color and trivialize these tests
    fn pipeline_coloring(
        g: &SimpleGraph,
        params: &Params,
        rng: &mut ChaCha8Rng,
    ) -> EdgeColoring {
        let order: Vec<EdgeId> = (0..g.m()).collect();
        let run = greedy_random_coloring(g, &order, params.k, params.q, rng).unwrap();
        run.coloring
    }

    #[test]
    fn inside_ball_pairs_use_the_tree_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g, _) = sample_simple_regular(100, 4, &mut rng, 10_000).unwrap();
        let params = Params::new(100, 4, 2.0).unwrap();
        let coloring = pipeline_coloring(&g, &params, &mut rng);
        let cfg = ConstructiveConfig::for_scale(100);
        let y = g.neighbors(0)[0];
        let out = constructive_rainbow_search(&g, &coloring, 0, y, &params, &cfg);
        let path = out.result.expect("adjacent pair lies inside the ball");
        assert_eq!(path.len(), 1);
        assert!(is_rainbow_path(&coloring, &path));
    }

    #[test]
    fn statistical_success_on_medium_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (g, _) = sample_simple_regular(200, 4, &mut rng, 10_000).unwrap();
        let params = Params::new(200, 4, 2.0).unwrap();
        let coloring = pipeline_coloring(&g, &params, &mut rng);
        let cfg = ConstructiveConfig::for_scale(200);
        let mut successes = 0;
        let trials = 40;
        for t in 0..trials {
            let x = (t * 7) % g.n();
            let y = (t * 13 + 29) % g.n();
            if x == y {
                continue;
            }
            let out = constructive_rainbow_search(&g, &coloring, x, y, &params, &cfg);
            if let Ok(path) = &out.result {
                successes += 1;
                assert!(is_rainbow_path(&coloring, path));
                assert_eq!(path.first(), x);
                assert_eq!(path.last(), y);
                path.validate(&g).unwrap();
                // the path never touches an edge its own pruning rejected
                for e in path.edge_ids() {
                    assert!(!out.state.excluded_edges.contains(e));
                }
            }
        }
        assert!(
            successes * 10 >= trials * 8,
            "only {successes}/{trials} pairs succeeded"
        );
    }

    #[test]
    fn layers_stay_disjoint_from_exclusions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (g, _) = sample_simple_regular(300, 4, &mut rng, 10_000).unwrap();
        let params = Params::new(300, 4, 2.0).unwrap();
        let coloring = pipeline_coloring(&g, &params, &mut rng);
        // force a couple of growth rounds by demanding a large layer
        let cfg = ConstructiveConfig {
            inner_target: 40,
            ..ConstructiveConfig::for_scale(300)
        };
        for (x, y) in [(0usize, 150usize), (10, 200), (20, 250)] {
            let out = constructive_rainbow_search(&g, &coloring, x, y, &params, &cfg);
            let st = &out.state;
            let mut seen = std::collections::HashSet::new();
            for layer in st.a_layers.iter().chain(st.b_layers.iter()) {
                for &v in layer {
                    assert!(seen.insert(v), "layers overlap at vertex {v}");
                }
            }
            if let Some(by) = &st.ball_y {
                for layer in st.a_layers.iter().skip(1).chain(st.b_layers.iter().skip(1)) {
                    for &v in layer {
                        assert!(!st.ball_x.contains(v));
                        assert!(!by.contains(v));
                    }
                }
            }
            // matched root paths share no color
            for &(u, w) in &st.leaf_matching {
                let pu = st.ball_x.root_path(u).unwrap();
                let pw = st.ball_y.as_ref().unwrap().root_path(w).unwrap();
                let mut cu: Vec<usize> =
                    pu.edge_ids().iter().map(|&e| coloring.color(e)).collect();
                let mut cw: Vec<usize> =
                    pw.edge_ids().iter().map(|&e| coloring.color(e)).collect();
                cu.sort_unstable();
                cw.sort_unstable();
                assert!(sorted_disjoint(&cu, &cw));
            }
        }
    }

    #[test]
    fn overlap_discount_branch_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (g, _) = sample_simple_regular(60, 4, &mut rng, 10_000).unwrap();
        let params = Params::new(60, 4, 2.0).unwrap();
        let coloring = pipeline_coloring(&g, &params, &mut rng);
        // forcing the bonus to zero sends every overlapping pair through
        // the leaf-discount route
        let cfg = ConstructiveConfig {
            overlap_depth_bonus: 0,
            ..ConstructiveConfig::for_scale(60)
        };
        let mut exercised = 0;
        for x in 0..g.n() {
            for y in x + 1..g.n() {
                let d = crate::graph::vertex_distance(&g, x, y).unwrap().unwrap();
                if d != params.k + 1 {
                    continue;
                }
                let out = constructive_rainbow_search(&g, &coloring, x, y, &params, &cfg);
                if out.state.overlap_discounted {
                    exercised += 1;
                    if let Ok(path) = &out.result {
                        assert!(is_rainbow_path(&coloring, path));
                        path.validate(&g).unwrap();
                        assert_eq!(path.first(), x);
                        assert_eq!(path.last(), y);
                    }
                }
                if exercised >= 10 {
                    return;
                }
            }
        }
        assert!(exercised > 0, "no overlapping pair found to exercise");
    }

    #[test]
    fn never_succeeds_where_exhaustive_search_refutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..6 {
            let (g, _) = sample_simple_regular(24, 4, &mut rng, 10_000).unwrap();
            let params = Params::new(24, 4, 2.0).unwrap();
            // deliberately poor colorings: far too few colors for comfort
            let colors = (0..g.m())
                .map(|_| rand::Rng::gen_range(&mut rng, 0..3))
                .collect();
            let coloring = EdgeColoring::new(3, colors, 0).unwrap();
            let cfg = ConstructiveConfig::for_scale(24);
            for x in 0..6 {
                for y in 12..18 {
                    let out = constructive_rainbow_search(&g, &coloring, x, y, &params, &cfg);
                    if let Ok(path) = &out.result {
                        assert!(is_rainbow_path(&coloring, path));
                        let check =
                            find_rainbow_path(&g, &coloring, x, y, g.n() - 1, u64::MAX);
                        assert!(
                            matches!(check.result, PathSearch::Found(_)),
                            "constructive found a path where exhaustive search proves none"
                        );
                    }
                }
            }
        }
    }
}
