use std::collections::VecDeque;

use super::graph::{EdgeEnd, EmbeddedGraph};
use super::map::{EdgeTarget, GraphMapRecord};

/// A rotation-preserving graph homeomorphism conjugating two graph maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub vertex_map: Vec<usize>,
    /// Image edge and whether the orientation flips, per edge.
    pub edge_map: Vec<(usize, bool)>,
}

/// Extends `d1 -> d2` to a dart bijection commuting with the rotation and
/// with end reversal, or `None` if the graphs disagree.
fn propagate(g1: &EmbeddedGraph, g2: &EmbeddedGraph, d1: EdgeEnd, d2: EdgeEnd) -> Option<Vec<usize>> {
    let n = g1.dart_count();
    let mut fwd = vec![usize::MAX; n];
    let mut back = vec![usize::MAX; n];
    let mut queue = VecDeque::from([(d1, d2)]);
    while let Some((a, b)) = queue.pop_front() {
        let (ia, ib) = (a.dart(), b.dart());
        if fwd[ia] != usize::MAX || back[ib] != usize::MAX {
            if fwd[ia] == ib && back[ib] == ia {
                continue;
            }
            return None;
        }
        if g1.degree(g1.end_vertex(a)) != g2.degree(g2.end_vertex(b)) {
            return None;
        }
        fwd[ia] = ib;
        back[ib] = ia;
        queue.push_back((g1.sigma(a), g2.sigma(b)));
        queue.push_back((a.opposite(), b.opposite()));
    }
    fwd.iter().all(|&x| x != usize::MAX).then_some(fwd)
}

fn witness_from_darts(g1: &EmbeddedGraph, g2: &EmbeddedGraph, darts: &[usize]) -> Option<Witness> {
    let mut vertex_map = vec![usize::MAX; g1.vertex_count()];
    for (d, &img) in darts.iter().enumerate() {
        let v = g1.end_vertex(EdgeEnd::from_dart(d));
        let w = g2.end_vertex(EdgeEnd::from_dart(img));
        if vertex_map[v] != usize::MAX && vertex_map[v] != w {
            return None;
        }
        vertex_map[v] = w;
    }
    let edge_map = (0..g1.edge_count())
        .map(|e| {
            let img = EdgeEnd::from_dart(darts[2 * e]);
            (img.edge, img.side != super::graph::Side::From)
        })
        .collect();
    Some(Witness { vertex_map, edge_map })
}

fn conjugates(w: &Witness, m1: &GraphMapRecord, m2: &GraphMapRecord) -> bool {
    let vertices_ok = (0..w.vertex_map.len()).all(|v| {
        let hv = w.vertex_map[v];
        w.vertex_map[m1.vertex_map[v]] == m2.vertex_map[hv] && m1.local_degree[v] == m2.local_degree[hv]
    });
    let edges_ok = (0..w.edge_map.len()).all(|e| {
        let (he, hflip) = w.edge_map[e];
        let (EdgeTarget::Edge { edge: ge, reversed: gflip }, EdgeTarget::Edge { edge: g2e, reversed: g2flip }) =
            (m1.edge_map[e], m2.edge_map[he])
        else {
            return false;
        };
        let (hge, hgflip) = w.edge_map[ge];
        hge == g2e && (gflip ^ hgflip) == (hflip ^ g2flip)
    });
    vertices_ok && edges_ok
}

/// All rotation-preserving homeomorphisms `h: G1 -> G2` with
/// `h . g1 = g2 . h`. The infinity vertex, when present, is the anchor and
/// must map to the infinity vertex of `G2`.
pub fn find_equivalences(
    g1: &EmbeddedGraph,
    m1: &GraphMapRecord,
    g2: &EmbeddedGraph,
    m2: &GraphMapRecord,
) -> Vec<Witness> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Vec::new();
    }
    if g1.edge_count() == 0 {
        let w = Witness { vertex_map: (0..g1.vertex_count()).collect(), edge_map: Vec::new() };
        return if g1.vertex_count() == 1 && conjugates(&w, m1, m2) { vec![w] } else { Vec::new() };
    }
    let (anchor1, candidates): (usize, Vec<usize>) = match (g1.infinity_vertex(), g2.infinity_vertex()) {
        (Some(a), Some(b)) => (a, vec![b]),
        (None, None) => {
            let a = (0..g1.vertex_count()).find(|&v| g1.degree(v) > 0).expect("graph has edges");
            (a, (0..g2.vertex_count()).collect())
        }
        _ => return Vec::new(),
    };
    let Some(&d1) = g1.rotation[anchor1].first() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for b in candidates {
        for &d2 in &g2.rotation[b] {
            let Some(darts) = propagate(g1, g2, d1, d2) else {
                continue;
            };
            if let Some(w) = witness_from_darts(g1, g2, &darts) {
                if conjugates(&w, m1, m2) {
                    out.push(w);
                }
            }
        }
    }
    out
}
