//! Exact rainbow connection number for tiny graphs by exhaustive search
//! over canonical colorings.

use thiserror::Error;

use super::is_rainbow_connected;
use crate::coloring::EdgeColoring;
use crate::graph::SimpleGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RcExactError {
    #[error("graph is disconnected; rc is undefined")]
    Disconnected,
    #[error("graph has {m} edges; the exact search is limited to 12")]
    TooManyEdges { m: usize },
    #[error("no rainbow-connecting coloring with up to {cap} colors")]
    CapExceeded { cap: usize },
}

/// The smallest palette size q for which some q-coloring makes `g` rainbow
/// connected. Enumerates colorings in canonical numbering (first edge gets
/// color 0, every later edge at most one above the running maximum), so
/// each coloring is tested once up to color relabeling.
pub fn rc_exact(g: &SimpleGraph, cap: usize) -> Result<usize, RcExactError> {
    assert!(cap >= 1);
    if g.m() > 12 {
        return Err(RcExactError::TooManyEdges { m: g.m() });
    }
    if g.n() > 1 && crate::graph::diameter(g).is_none() {
        return Err(RcExactError::Disconnected);
    }
    let m = g.m();
    for q in 1..=cap.min(m.max(1)) {
        let mut colors = vec![0usize; m];
        if try_colorings(g, q, 0, 0, &mut colors) {
            return Ok(q);
        }
    }
    Err(RcExactError::CapExceeded { cap })
}

fn try_colorings(
    g: &SimpleGraph,
    q: usize,
    edge: usize,
    used: usize,
    colors: &mut Vec<usize>,
) -> bool {
    if edge == g.m() {
        let coloring = EdgeColoring::new(q, colors.clone(), 0).expect("colors < q");
        return is_rainbow_connected(g, &coloring, g.n().saturating_sub(1), u64::MAX)
            .is_connected();
    }
    // canonical numbering: a new color may only be one above those in use
    let limit = used.min(q - 1);
    for c in 0..=limit {
        colors[edge] = c;
        if try_colorings(g, q, edge + 1, used.max(c + 1), colors) {
            return true;
        }
    }
    false
}
