use super::faces::{trace_faces, FaceSet};
use super::graph::{EdgeEnd, EmbeddedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeTarget {
    /// The edge maps onto `edge`; `reversed` swaps which ends correspond.
    Edge { edge: usize, reversed: bool },
    /// The edge collapses onto a vertex (never valid for a graph map).
    Vertex(usize),
}

/// A self-map of an embedded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMapRecord {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<EdgeTarget>,
    pub local_degree: Vec<u32>,
}

impl GraphMapRecord {
    pub fn identity(g: &EmbeddedGraph) -> Self {
        GraphMapRecord {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).map(|edge| EdgeTarget::Edge { edge, reversed: false }).collect(),
            local_degree: vec![1; g.vertex_count()],
        }
    }

    /// Image of an edge end, `None` when its edge collapses.
    pub fn image_end(&self, end: EdgeEnd) -> Option<EdgeEnd> {
        match self.edge_map.get(end.edge)? {
            EdgeTarget::Edge { edge, reversed } => {
                Some(EdgeEnd::new(*edge, if *reversed { end.side.flip() } else { end.side }))
            }
            EdgeTarget::Vertex(_) => None,
        }
    }

    pub fn image_edge(&self, e: usize) -> Option<usize> {
        match self.edge_map.get(e)? {
            EdgeTarget::Edge { edge, .. } => Some(*edge),
            EdgeTarget::Vertex(_) => None,
        }
    }

    /// Whether `e` is mapped onto itself with its orientation.
    pub fn fixes_edge(&self, e: usize) -> bool {
        self.edge_map.get(e) == Some(&EdgeTarget::Edge { edge: e, reversed: false })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl MapReport {
    fn from_violations(violations: Vec<String>) -> Self {
        MapReport { ok: violations.is_empty(), violations }
    }
}

/// Structural check: vertices to vertices, every edge onto a single edge
/// compatibly with its endpoints, local degrees at least 1.
pub fn is_graph_map(g: &EmbeddedGraph, m: &GraphMapRecord) -> MapReport {
    let mut v = Vec::new();
    if m.vertex_map.len() != g.vertex_count() {
        v.push(format!("vertex map has {} entries for {} vertices", m.vertex_map.len(), g.vertex_count()));
    }
    if m.edge_map.len() != g.edge_count() {
        v.push(format!("edge map has {} entries for {} edges", m.edge_map.len(), g.edge_count()));
    }
    if m.local_degree.len() != g.vertex_count() {
        v.push(format!("local degrees given for {} of {} vertices", m.local_degree.len(), g.vertex_count()));
    }
    if !v.is_empty() {
        return MapReport::from_violations(v);
    }
    for (x, &y) in m.vertex_map.iter().enumerate() {
        if y >= g.vertex_count() {
            v.push(format!("vertex {x} maps to missing vertex {y}"));
        }
        if m.local_degree[x] == 0 {
            v.push(format!("vertex {x} has local degree 0"));
        }
    }
    for (e, target) in m.edge_map.iter().enumerate() {
        match *target {
            EdgeTarget::Vertex(y) => v.push(format!("edge {e} collapses onto vertex {y}")),
            EdgeTarget::Edge { edge, reversed } => {
                let Some(img) = g.edges.get(edge) else {
                    v.push(format!("edge {e} maps to missing edge {edge}"));
                    continue;
                };
                let (a, b) = (g.edges[e].from, g.edges[e].to);
                let (ia, ib) = if reversed { (img.to, img.from) } else { (img.from, img.to) };
                if m.vertex_map.get(a) != Some(&ia) || m.vertex_map.get(b) != Some(&ib) {
                    v.push(format!("edge {e} maps to edge {edge} but its endpoints do not map to that edge's ends"));
                }
            }
        }
    }
    MapReport::from_violations(v)
}

/// A corner at a preimage vertex together with the image corners it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerRange {
    pub corner: usize,
    pub image_vertex: usize,
    /// Rotation slot at the image vertex where the range starts.
    pub start: usize,
    /// Number of image corners covered, between 1 and the image degree.
    pub len: usize,
}

impl CornerRange {
    fn covers(&self, slot: usize, degree: usize) -> bool {
        (slot + degree - self.start) % degree < self.len
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExtensionReport {
    pub ok: bool,
    /// Pairs of corners (by dart of their first edge end) in a common face
    /// whose image ranges overlap; a corner paired with itself wraps around.
    pub overlaps: Vec<(usize, usize)>,
    pub diagnostics: Vec<String>,
}

/// Image corner range of every corner of `g`.
pub fn corner_ranges(g: &EmbeddedGraph, m: &GraphMapRecord, faces: &FaceSet) -> Result<Vec<CornerRange>, String> {
    faces
        .corners
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let a = m.image_end(c.first).ok_or_else(|| format!("edge {} collapses", c.first.edge))?;
            let b = m.image_end(c.second).ok_or_else(|| format!("edge {} collapses", c.second.edge))?;
            let (y, pa) = g.slot(a);
            let (yb, pb) = g.slot(b);
            if y != yb || y != m.vertex_map[c.vertex] {
                return Err(format!("corner at vertex {} does not map to a single image vertex", c.vertex));
            }
            let d = g.degree(y);
            let len = (pb + d - pa + d - 1) % d + 1;
            Ok(CornerRange { corner: i, image_vertex: y, start: pa, len })
        })
        .collect()
}

/// Combinatorial regular-extension test: around each vertex the image ranges
/// wind exactly `local degree` times, and inside each face the ranges of
/// corners over a common image vertex do not overlap.
pub fn check_regular_extension(g: &EmbeddedGraph, m: &GraphMapRecord) -> ExtensionReport {
    let structural = is_graph_map(g, m);
    if !structural.ok {
        return ExtensionReport { ok: false, overlaps: Vec::new(), diagnostics: structural.violations };
    }
    let faces = match trace_faces(g) {
        Ok(f) => f,
        Err(e) => return ExtensionReport { ok: false, overlaps: Vec::new(), diagnostics: vec![e.to_string()] },
    };
    let ranges = match corner_ranges(g, m, &faces) {
        Ok(r) => r,
        Err(e) => return ExtensionReport { ok: false, overlaps: Vec::new(), diagnostics: vec![e] },
    };
    let mut diagnostics = Vec::new();
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            continue;
        }
        let total: usize = g.rotation[v].iter().map(|end| ranges[end.dart()].len).sum();
        let y = m.vertex_map[v];
        let expected = m.local_degree[v] as usize * g.degree(y);
        if total != expected {
            diagnostics.push(format!(
                "corners at vertex {v} wind {total} image corners, local degree {} needs {expected}",
                m.local_degree[v]
            ));
        }
    }
    let mut overlaps = Vec::new();
    for face in &faces.faces {
        for (i, &a) in face.iter().enumerate() {
            let ra = &ranges[a];
            let d = g.degree(ra.image_vertex);
            if ra.len > d {
                overlaps.push((a, a));
            }
            for &b in &face[i + 1..] {
                let rb = &ranges[b];
                if rb.image_vertex != ra.image_vertex {
                    continue;
                }
                if (0..d).any(|s| ra.covers(s, d) && rb.covers(s, d)) {
                    overlaps.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    overlaps.sort_unstable();
    ExtensionReport { ok: diagnostics.is_empty() && overlaps.is_empty(), overlaps, diagnostics }
}
