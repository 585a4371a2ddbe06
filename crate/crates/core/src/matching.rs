//! Maximum bipartite matching (Hopcroft-Karp).

use std::collections::VecDeque;

/// Maximum matching of a bipartite graph given as adjacency from the left
/// side; returns `pair_left[u] = Some(v)` assignments. O(E sqrt(V)).
pub fn hopcroft_karp(adj: &[Vec<usize>], right_size: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut pair_left: Vec<Option<usize>> = vec![None; left];
    let mut pair_right: Vec<Option<usize>> = vec![None; right_size];
    let mut dist: Vec<usize> = vec![0; left];
    const INF: usize = usize::MAX;

    loop {
        // BFS phase: layer free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left {
            if pair_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found_augmenting = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match pair_right[v] {
                    None => found_augmenting = true,
                    Some(u2) => {
                        if dist[u2] == INF {
                            dist[u2] = dist[u] + 1;
                            queue.push_back(u2);
                        }
                    }
                }
            }
        }
        if !found_augmenting {
            break;
        }
        // DFS phase: augment along layered paths
        fn try_augment(
            u: usize,
            adj: &[Vec<usize>],
            pair_left: &mut [Option<usize>],
            pair_right: &mut [Option<usize>],
            dist: &mut [usize],
        ) -> bool {
            for i in 0..adj[u].len() {
                let v = adj[u][i];
                let ok = match pair_right[v] {
                    None => true,
                    Some(u2) => {
                        dist[u2] == dist[u].wrapping_add(1)
                            && try_augment(u2, adj, pair_left, pair_right, dist)
                    }
                };
                if ok {
                    pair_left[u] = Some(v);
                    pair_right[v] = Some(u);
                    return true;
                }
            }
            dist[u] = INF;
            false
        }
        for u in 0..left {
            if pair_left[u].is_none() && dist[u] == 0 {
                try_augment(u, adj, &mut pair_left, &mut pair_right, &mut dist);
            }
        }
    }
    pair_left
}
