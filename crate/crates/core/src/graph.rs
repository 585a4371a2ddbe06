//! Core graph representation: simple graphs with dense edge ids, BFS
//! distances, diameter, and the edge-list interchange format.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex id {0} out of range")]
    InvalidVertex(VertexId),
    #[error("edge id {0} out of range")]
    InvalidEdge(EdgeId),
    #[error("loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph is not regular")]
    NotRegular,
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("repeated vertex {0} in path")]
    RepeatedVertex(VertexId),
    #[error("path needs at least one vertex")]
    EmptyPath,
    #[error("bad edge-list data: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
}

/// An immutable simple graph. Edges carry dense, stable ids in insertion
/// order; adjacency lists are sorted ascending with `incident` aligned so
/// that `incident[v][i]` is the edge to `adjacency[v][i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adjacency: Vec<Vec<VertexId>>,
    incident: Vec<Vec<EdgeId>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl SimpleGraph {
    /// Builds a graph from an edge list. Pairs are normalized to (min, max);
    /// edge ids follow the input order. Rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::InvalidVertex(u));
            }
            if v >= n {
                return Err(GraphError::InvalidVertex(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            norm.push((u.min(v), u.max(v)));
        }
        let mut seen = norm.clone();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in norm.iter().enumerate() {
            adjacency[u].push(v);
            adjacency[v].push(u);
            incident[u].push(id);
            incident[v].push(id);
        }
        for v in 0..n {
            let mut order: Vec<usize> = (0..adjacency[v].len()).collect();
            order.sort_unstable_by_key(|&i| adjacency[v][i]);
            adjacency[v] = order.iter().map(|&i| adjacency[v][i]).collect();
            incident[v] = order.iter().map(|&i| incident[v][i]).collect();
        }
        Ok(SimpleGraph {
            n,
            adjacency,
            incident,
            edges: norm,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    /// Edge ids aligned with `neighbors(v)`.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let i = self.adjacency[u].binary_search(&v).ok()?;
        Some(self.incident[u][i])
    }

    /// The common degree, if every vertex has the same one.
    pub fn regularity(&self) -> Option<usize> {
        let r = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == r).then_some(r)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v))
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<(), GraphError> {
        if e < self.edges.len() {
            Ok(())
        } else {
            Err(GraphError::InvalidEdge(e))
        }
    }

    /// BFS distances from `src`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Multi-source BFS distances, truncated at `depth`.
    pub fn multi_source_distances(&self, sources: &[VertexId], depth: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            if d == depth {
                continue;
            }
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    // Small named families, used throughout the tests and the tree oracles.

    pub fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn path_graph(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        SimpleGraph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        SimpleGraph::from_edges(n, &edges).expect("clique is simple")
    }

    /// Star with hub 0 and `leaves` leaf vertices.
    pub fn star(leaves: usize) -> SimpleGraph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        SimpleGraph::from_edges(leaves + 1, &edges).expect("star is simple")
    }
}

/// A simple path: an ordered vertex sequence plus the edge ids between
/// consecutive vertices (one shorter). A single vertex is the empty path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<VertexId>,
    edge_ids: Vec<EdgeId>,
}

impl Path {
    /// Builds and validates a path from its vertex sequence.
    pub fn from_vertices(g: &SimpleGraph, vertices: Vec<VertexId>) -> Result<Path, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyPath);
        }
        let mut seen = vertices.clone();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::RepeatedVertex(w[0]));
            }
        }
        let mut edge_ids = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            g.check_vertex(w[0])?;
            g.check_vertex(w[1])?;
            let e = g
                .edge_between(w[0], w[1])
                .ok_or(GraphError::NotAdjacent(w[0], w[1]))?;
            edge_ids.push(e);
        }
        Ok(Path { vertices, edge_ids })
    }

    pub(crate) fn from_parts(vertices: Vec<VertexId>, edge_ids: Vec<EdgeId>) -> Path {
        debug_assert_eq!(vertices.len(), edge_ids.len() + 1);
        Path { vertices, edge_ids }
    }

    pub fn single(v: VertexId) -> Path {
        Path {
            vertices: vec![v],
            edge_ids: Vec::new(),
        }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        Path {
            vertices: self.vertices.iter().rev().copied().collect(),
            edge_ids: self.edge_ids.iter().rev().copied().collect(),
        }
    }

    /// Re-checks the path invariants against `g`.
    pub fn validate(&self, g: &SimpleGraph) -> Result<(), GraphError> {
        let rebuilt = Path::from_vertices(g, self.vertices.clone())?;
        if rebuilt.edge_ids == self.edge_ids {
            Ok(())
        } else {
            Err(GraphError::Format("edge ids do not match vertices".into()))
        }
    }
}

/// Shortest-path distance between two vertices; `None` if disconnected.
pub fn vertex_distance(
    g: &SimpleGraph,
    u: VertexId,
    v: VertexId,
) -> Result<Option<usize>, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![None; g.n()];
    dist[u] = Some(0);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &w in g.neighbors(x) {
            if dist[w].is_none() {
                if w == v {
                    return Ok(Some(d + 1));
                }
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

/// Distance between two edges: min over endpoints of vertex distance, plus
/// one. Incident edges have distance 1; an edge has distance 0 to itself.
/// `None` if the edges lie in different components.
pub fn edge_distance(g: &SimpleGraph, e: EdgeId, f: EdgeId) -> Result<Option<usize>, GraphError> {
    g.check_edge(e)?;
    g.check_edge(f)?;
    if e == f {
        return Ok(Some(0));
    }
    let (a, b) = g.edge(e);
    let (c, d) = g.edge(f);
    let mut best: Option<usize> = None;
    for u in [a, b] {
        for v in [c, d] {
            if let Some(x) = vertex_distance(g, u, v)? {
                best = Some(best.map_or(x, |y| y.min(x)));
            }
        }
    }
    Ok(best.map(|x| x + 1))
}

/// Max over connected pairs of shortest-path distance; `None` if the graph
/// is disconnected (infinite diameter).
pub fn diameter(g: &SimpleGraph) -> Option<usize> {
    let mut diam = 0;
    for v in 0..g.n() {
        let dist = g.bfs_distances(v);
        for d in &dist {
            match d {
                Some(x) => diam = diam.max(*x),
                None => return None,
            }
        }
    }
    Some(diam)
}

/// All edges f != e with edge_distance(e, f) <= k, sorted by edge id.
///
/// Uses a truncated multi-source BFS from the endpoints of `e`: an edge is
/// within distance k exactly when one of its endpoints is within vertex
/// distance k-1 of an endpoint of `e`.
pub fn edges_within_distance(
    g: &SimpleGraph,
    e: EdgeId,
    k: usize,
) -> Result<Vec<EdgeId>, GraphError> {
    g.check_edge(e)?;
    assert!(k >= 1, "k must be at least 1");
    let (u, v) = g.edge(e);
    let dist = g.multi_source_distances(&[u, v], k - 1);
    let mut out = Vec::new();
    let mut seen = vec![false; g.m()];
    seen[e] = true;
    for (w, d) in dist.iter().enumerate() {
        if d.is_some() {
            for &f in g.incident_edges(w) {
                if !seen[f] {
                    seen[f] = true;
                    out.push(f);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Writes the edge-list text format: first line "n r", then one line "u v"
/// per edge in edge-id order. Requires a regular graph.
pub fn write_edge_list<W: Write>(g: &SimpleGraph, w: &mut W) -> Result<(), GraphError> {
    let r = g.regularity().ok_or(GraphError::NotRegular)?;
    let mut buf = format!("{} {}\n", g.n(), r);
    for &(u, v) in g.edges() {
        buf.push_str(&format!("{} {}\n", u, v));
    }
    w.write_all(buf.as_bytes())
        .map_err(|e| GraphError::Io(e.to_string()))
}

/// Reads the edge-list text format and validates the header against the
/// reconstructed graph.
pub fn read_edge_list<R: BufRead>(r: &mut R) -> Result<SimpleGraph, GraphError> {
    let mut lines = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
        if !line.trim().is_empty() {
            lines.push(line);
        }
    }
    if lines.is_empty() {
        return Err(GraphError::Format("empty file".into()));
    }
    let parse_pair = |s: &str| -> Result<(usize, usize), GraphError> {
        let mut it = s.split_whitespace();
        let a = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Format(format!("bad line: {s:?}")))?;
        let b = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Format(format!("bad line: {s:?}")))?;
        if it.next().is_some() {
            return Err(GraphError::Format(format!("trailing tokens: {s:?}")));
        }
        Ok((a, b))
    };
    let (n, r_header) = parse_pair(&lines[0])?;
    let mut edges = Vec::with_capacity(lines.len() - 1);
    for line in &lines[1..] {
        edges.push(parse_pair(line)?);
    }
    let g = SimpleGraph::from_edges(n, &edges)?;
    match g.regularity() {
        Some(r) if r == r_header => Ok(g),
        _ => Err(GraphError::Format(format!(
            "header degree {r_header} does not match graph"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(
            SimpleGraph::from_edges(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            SimpleGraph::from_edges(2, &[(0, 2)]),
            Err(GraphError::InvalidVertex(2))
        );
    }

    #[test]
    fn vertex_distance_examples() {
        let p3 = SimpleGraph::path_graph(3);
        assert_eq!(vertex_distance(&p3, 0, 2).unwrap(), Some(2));
        assert_eq!(vertex_distance(&p3, 1, 1).unwrap(), Some(0));
        let c6 = SimpleGraph::cycle(6);
        assert_eq!(vertex_distance(&c6, 0, 3).unwrap(), Some(3));
        let two = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(vertex_distance(&two, 0, 3).unwrap(), None);
        assert!(vertex_distance(&two, 0, 9).is_err());
    }

    #[test]
    fn edge_distance_examples() {
        let c6 = SimpleGraph::cycle(6);
        let id = |u, v| c6.edge_between(u, v).unwrap();
        assert_eq!(edge_distance(&c6, id(0, 1), id(1, 2)).unwrap(), Some(1));
        assert_eq!(edge_distance(&c6, id(0, 1), id(2, 3)).unwrap(), Some(2));
        assert_eq!(edge_distance(&c6, id(0, 1), id(3, 4)).unwrap(), Some(3));
        assert_eq!(edge_distance(&c6, id(0, 1), id(0, 1)).unwrap(), Some(0));
    }

    #[test]
    fn edge_distance_symmetric_and_incidence() {
        let g = SimpleGraph::complete(5);
        for e in 0..g.m() {
            for f in 0..g.m() {
                let d1 = edge_distance(&g, e, f).unwrap();
                let d2 = edge_distance(&g, f, e).unwrap();
                assert_eq!(d1, d2);
                if e != f {
                    let (a, b) = g.edge(e);
                    let (c, d) = g.edge(f);
                    let share = a == c || a == d || b == c || b == d;
                    assert_eq!(d1 == Some(1), share);
                }
            }
        }
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&SimpleGraph::complete(4)), Some(1));
        assert_eq!(diameter(&SimpleGraph::path_graph(5)), Some(4));
        assert_eq!(diameter(&SimpleGraph::cycle(6)), Some(3));
        let two = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(diameter(&two), None);
    }

    #[test]
    fn edges_within_distance_examples() {
        let c6 = SimpleGraph::cycle(6);
        let id = |u, v| c6.edge_between(u, v).unwrap();
        let near = edges_within_distance(&c6, id(0, 1), 2).unwrap();
        let expect: Vec<EdgeId> = {
            let mut v = vec![id(1, 2), id(5, 0), id(2, 3), id(4, 5)];
            v.sort_unstable();
            v
        };
        assert_eq!(near, expect);

        let star = SimpleGraph::star(4);
        let near = edges_within_distance(&star, 0, 1).unwrap();
        assert_eq!(near, vec![1, 2, 3]);
    }

    #[test]
    fn edges_within_distance_matches_pairwise_oracle() {
        // independent route: test every edge pair against the definition
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let (g, _) = crate::genreg::sample_simple_regular(60, 4, &mut rng, 10_000).unwrap();
        for k in 1..=3 {
            for e in (0..g.m()).step_by(7) {
                let fast = edges_within_distance(&g, e, k).unwrap();
                let slow: Vec<EdgeId> = (0..g.m())
                    .filter(|&f| {
                        f != e && edge_distance(&g, e, f).unwrap().is_some_and(|d| d <= k)
                    })
                    .collect();
                assert_eq!(fast, slow, "e={e} k={k}");
            }
        }
    }

    #[test]
    fn edges_within_distance_regular_bound() {
        // |edges within k| <= 2 * sum_{d=1..k} (r-1)^d on regular graphs
        let g = SimpleGraph::complete(6); // 5-regular
        let r = 5usize;
        for k in 1..=3 {
            let bound: usize = (1..=k).map(|d| (r - 1).pow(d as u32)).sum::<usize>() * 2;
            for e in 0..g.m() {
                let cnt = edges_within_distance(&g, e, k).unwrap().len();
                assert!(cnt <= bound, "k={k} e={e}: {cnt} > {bound}");
            }
        }
    }

    #[test]
    fn path_validation() {
        let c6 = SimpleGraph::cycle(6);
        let p = Path::from_vertices(&c6, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.first(), 0);
        assert_eq!(p.last(), 3);
        p.validate(&c6).unwrap();
        assert_eq!(p.reversed().vertices(), &[3, 2, 1, 0]);
        assert!(Path::from_vertices(&c6, vec![0, 2]).is_err());
        assert!(Path::from_vertices(&c6, vec![0, 1, 0]).is_err());
        assert_eq!(Path::single(4).len(), 0);
    }

    /// Independent all-pairs oracle for the diameter cross-check.
    fn floyd_warshall_diameter(g: &SimpleGraph) -> Option<usize> {
        let n = g.n();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        for &(u, v) in g.edges() {
            d[u][v] = 1;
            d[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k].saturating_add(d[k][j]);
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        let mut diam = 0;
        for i in 0..n {
            for j in 0..n {
                if d[i][j] >= inf {
                    return None;
                }
                diam = diam.max(d[i][j]);
            }
        }
        Some(diam)
    }

    #[test]
    fn diameter_matches_floyd_warshall() {
        let graphs = [
            SimpleGraph::cycle(9),
            SimpleGraph::path_graph(7),
            SimpleGraph::complete(6),
            SimpleGraph::star(5),
            SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(diameter(g), floyd_warshall_diameter(g));
        }
    }

    proptest::proptest! {
        /// edge_distance is symmetric, and equals 1 exactly for distinct
        /// edges sharing a vertex, on arbitrary simple graphs.
        #[test]
        fn edge_distance_symmetry_property(
            n in 3usize..9,
            picks in proptest::collection::vec((0usize..8, 0usize..8), 2..20),
        ) {
            let edges: Vec<(usize, usize)> = picks
                .into_iter()
                .map(|(u, v)| (u % n, v % n))
                .filter(|&(u, v)| u != v)
                .collect();
            let mut dedup = edges
                .iter()
                .map(|&(u, v)| (u.min(v), u.max(v)))
                .collect::<Vec<_>>();
            dedup.sort_unstable();
            dedup.dedup();
            proptest::prop_assume!(!dedup.is_empty());
            let g = SimpleGraph::from_edges(n, &dedup).unwrap();
            for e in 0..g.m() {
                for f in 0..g.m() {
                    let d1 = edge_distance(&g, e, f).unwrap();
                    proptest::prop_assert_eq!(d1, edge_distance(&g, f, e).unwrap());
                    if e != f {
                        let (a, b) = g.edge(e);
                        let (c, d) = g.edge(f);
                        let share = a == c || a == d || b == c || b == d;
                        proptest::prop_assert_eq!(d1 == Some(1), share);
                    }
                }
            }
        }

        /// Writing then reading a regular graph is the identity, and the
        /// bytes survive a second round trip unchanged.
        #[test]
        fn edge_list_round_trip_property(n in 3usize..40) {
            let g = SimpleGraph::cycle(n);
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let g2 = read_edge_list(&mut buf.as_slice()).unwrap();
            proptest::prop_assert_eq!(&g, &g2);
            let mut buf2 = Vec::new();
            write_edge_list(&g2, &mut buf2).unwrap();
            proptest::prop_assert_eq!(buf, buf2);
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = SimpleGraph::cycle(6);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("6 2\n"));
        let g2 = read_edge_list(&mut buf.as_slice()).unwrap();
        assert_eq!(g, g2);
        let mut buf2 = Vec::new();
        write_edge_list(&g2, &mut buf2).unwrap();
        assert_eq!(buf, buf2, "round trip must be bit-exact");
    }

    #[test]
    fn edge_list_rejects_irregular() {
        let g = SimpleGraph::path_graph(3);
        let mut buf = Vec::new();
        assert_eq!(write_edge_list(&g, &mut buf), Err(GraphError::NotRegular));
        let text = "3 2\n0 1\n1 2\n";
        assert!(read_edge_list(&mut text.as_bytes()).is_err());
    }
}
