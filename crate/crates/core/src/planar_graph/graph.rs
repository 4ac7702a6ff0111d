use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complex_poly::SpherePoint;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Infinity,
    Root,
    Pole,
    Prepole,
    RootPreimage,
}

impl VertexKind {
    pub fn name(&self) -> &'static str {
        match self {
            VertexKind::Infinity => "infinity",
            VertexKind::Root => "root",
            VertexKind::Pole => "pole",
            VertexKind::Prepole => "prepole",
            VertexKind::RootPreimage => "root-preimage",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "infinity" => VertexKind::Infinity,
            "root" => VertexKind::Root,
            "pole" => VertexKind::Pole,
            "prepole" => VertexKind::Prepole,
            "root-preimage" => VertexKind::RootPreimage,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexRecord {
    pub id: usize,
    pub kind: VertexKind,
    pub position: Option<SpherePoint>,
    /// First level of the pullback that contains the vertex.
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    From,
    To,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::From => Side::To,
            Side::To => Side::From,
        }
    }
}

/// One end of an edge; also used as a dart (the end's half of the edge).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: usize,
    pub side: Side,
}

impl EdgeEnd {
    pub fn new(edge: usize, side: Side) -> Self {
        EdgeEnd { edge, side }
    }

    pub fn dart(self) -> usize {
        2 * self.edge + usize::from(self.side == Side::To)
    }

    pub fn from_dart(d: usize) -> Self {
        EdgeEnd { edge: d / 2, side: if d % 2 == 0 { Side::From } else { Side::To } }
    }

    pub fn opposite(self) -> Self {
        EdgeEnd { edge: self.edge, side: self.side.flip() }
    }
}

/// A connected planar graph with a counterclockwise rotation system.
///
/// Vertex and edge ids equal their positions in the vectors. `geometry`, when
/// present, holds one polyline per edge running from its `from` vertex to its
/// `to` vertex; polylines ending at the infinity vertex stop at a far sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedGraph {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub rotation: Vec<Vec<EdgeEnd>>,
    pub geometry: Option<Vec<Vec<Complex64>>>,
    slots: Vec<(usize, usize)>,
}

impl EmbeddedGraph {
    pub fn new(
        vertices: Vec<VertexRecord>,
        edges: Vec<EdgeRecord>,
        rotation: Vec<Vec<EdgeEnd>>,
        geometry: Option<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedGraph(m));
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return bad(format!("vertex ids must be 0..{} in order (found {} at {i})", vertices.len(), v.id));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.id != i {
                return bad(format!("edge ids must be 0..{} in order (found {} at {i})", edges.len(), e.id));
            }
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return bad(format!("edge {i} has a missing endpoint"));
            }
        }
        if rotation.len() != vertices.len() {
            return bad(format!("rotation lists {} vertices, graph has {}", rotation.len(), vertices.len()));
        }
        let mut slots = vec![(usize::MAX, usize::MAX); 2 * edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, end) in rot.iter().enumerate() {
                let Some(e) = edges.get(end.edge) else {
                    return bad(format!("rotation at vertex {v} names missing edge {}", end.edge));
                };
                let at = match end.side {
                    Side::From => e.from,
                    Side::To => e.to,
                };
                if at != v {
                    return bad(format!("rotation at vertex {v} lists an end of edge {} that lies at vertex {at}", e.id));
                }
                if slots[end.dart()].0 != usize::MAX {
                    return bad(format!("edge end {:?} of edge {} appears twice in the rotation", end.side, e.id));
                }
                slots[end.dart()] = (v, i);
            }
        }
        if let Some(d) = slots.iter().position(|s| s.0 == usize::MAX) {
            let end = EdgeEnd::from_dart(d);
            return bad(format!("edge end {:?} of edge {} is missing from the rotation", end.side, end.edge));
        }
        if let Some(geo) = &geometry {
            if geo.len() != edges.len() {
                return bad(format!("geometry has {} polylines for {} edges", geo.len(), edges.len()));
            }
        }
        let g = EmbeddedGraph { vertices, edges, rotation, geometry, slots };
        if !g.is_connected() {
            return bad("graph is not connected".into());
        }
        Ok(g)
    }

    /// Builds the rotation from edge polylines: counterclockwise departure
    /// angles at finite vertices, reversed asymptotic directions at infinity.
    /// Also returns the vertices where two angles are closer than `1e-6`.
    pub fn with_geometry(
        vertices: Vec<VertexRecord>,
        edges: Vec<EdgeRecord>,
        geometry: Vec<Vec<Complex64>>,
    ) -> Result<(Self, Vec<usize>)> {
        let (rotation, flagged) = rotation_from_geometry(&vertices, &edges, &geometry)?;
        Ok((Self::new(vertices, edges, rotation, Some(geometry))?, flagged))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Vertex carrying the edge end.
    pub fn end_vertex(&self, end: EdgeEnd) -> usize {
        let e = &self.edges[end.edge];
        match end.side {
            Side::From => e.from,
            Side::To => e.to,
        }
    }

    /// `(vertex, index in its rotation)` of a dart.
    pub fn slot(&self, end: EdgeEnd) -> (usize, usize) {
        self.slots[end.dart()]
    }

    /// Next edge end counterclockwise at the same vertex.
    pub fn sigma(&self, end: EdgeEnd) -> EdgeEnd {
        let (v, i) = self.slot(end);
        let rot = &self.rotation[v];
        rot[(i + 1) % rot.len()]
    }

    pub fn sigma_inv(&self, end: EdgeEnd) -> EdgeEnd {
        let (v, i) = self.slot(end);
        let rot = &self.rotation[v];
        rot[(i + rot.len() - 1) % rot.len()]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn infinity_vertex(&self) -> Option<usize> {
        self.vertices.iter().position(|v| v.kind == VertexKind::Infinity)
    }

    /// Vertices adjacent to `v`, with repetitions for parallel edges.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation[v].iter().map(move |end| self.end_vertex(end.opposite()))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let keep = vec![true; self.edges.len()];
        self.component(0, &keep).0.iter().all(|&b| b)
    }

    /// Vertices and edges reachable from `start` through edges with `keep[e]`.
    pub fn component(&self, start: usize, keep: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let mut seen_v = vec![false; self.vertices.len()];
        let mut seen_e = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([start]);
        seen_v[start] = true;
        while let Some(v) = queue.pop_front() {
            for end in &self.rotation[v] {
                if !keep[end.edge] {
                    continue;
                }
                seen_e[end.edge] = true;
                let w = self.end_vertex(end.opposite());
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (seen_v, seen_e)
    }

    /// The subgraph on the kept edges and their endpoints plus `extra`
    /// vertices, renumbered in order; rotations keep their relative order.
    pub fn subgraph(&self, keep_edges: &[bool], extra: &[usize]) -> Result<Subgraph> {
        let mut keep_v = vec![false; self.vertices.len()];
        for &v in extra {
            keep_v[v] = true;
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if keep_edges[e] {
                keep_v[edge.from] = true;
                keep_v[edge.to] = true;
            }
        }
        let vertex_old: Vec<usize> = (0..self.vertices.len()).filter(|&v| keep_v[v]).collect();
        let edge_old: Vec<usize> = (0..self.edges.len()).filter(|&e| keep_edges[e]).collect();
        let mut vnew = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in vertex_old.iter().enumerate() {
            vnew[v] = i;
        }
        let mut enew = vec![usize::MAX; self.edges.len()];
        for (i, &e) in edge_old.iter().enumerate() {
            enew[e] = i;
        }
        let vertices = vertex_old
            .iter()
            .enumerate()
            .map(|(i, &v)| VertexRecord { id: i, ..self.vertices[v].clone() })
            .collect();
        let edges = edge_old
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let old = &self.edges[e];
                EdgeRecord { id: i, from: vnew[old.from], to: vnew[old.to], level: old.level }
            })
            .collect();
        let rotation = vertex_old
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|end| keep_edges[end.edge])
                    .map(|end| EdgeEnd::new(enew[end.edge], end.side))
                    .collect()
            })
            .collect();
        let geometry = self.geometry.as_ref().map(|g| edge_old.iter().map(|&e| g[e].clone()).collect());
        Ok(Subgraph { graph: EmbeddedGraph::new(vertices, edges, rotation, geometry)?, vertex_old, edge_old })
    }
}

/// A subgraph with the ids its vertices and edges had in the parent graph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: EmbeddedGraph,
    pub vertex_old: Vec<usize>,
    pub edge_old: Vec<usize>,
}

/// Angular gap below which two edge ends at a vertex are flagged.
pub const DEGENERATE_GAP: f64 = 1e-6;
/// Angles closer than this are ordered by edge id.
const TIE: f64 = 1e-9;

/// Counterclockwise rotation from polylines; see [`EmbeddedGraph::with_geometry`].
pub fn rotation_from_geometry(
    vertices: &[VertexRecord],
    edges: &[EdgeRecord],
    geometry: &[Vec<Complex64>],
) -> Result<(Vec<Vec<EdgeEnd>>, Vec<usize>)> {
    let mut ends: Vec<Vec<(f64, EdgeEnd)>> = vec![Vec::new(); vertices.len()];
    for (e, edge) in edges.iter().enumerate() {
        let line = &geometry[e];
        if line.len() < 2 {
            return Err(Error::MalformedGraph(format!("edge {e} has fewer than two polyline samples")));
        }
        for side in [Side::From, Side::To] {
            let v = if side == Side::From { edge.from } else { edge.to };
            let samples: Box<dyn Iterator<Item = &Complex64>> = match side {
                Side::From => Box::new(line.iter()),
                Side::To => Box::new(line.iter().rev()),
            };
            let angle = match vertices[v].position {
                Some(SpherePoint::Finite(p)) => {
                    let scale = p.norm().max(1.0);
                    let q = samples
                        .skip(1)
                        .find(|q| (*q - p).norm() > 1e-12 * scale)
                        .ok_or_else(|| Error::MalformedGraph(format!("edge {e} does not leave vertex {v}")))?;
                    (q - p).arg()
                }
                Some(SpherePoint::Infinity) => {
                    let far = *samples.take(1).next().expect("nonempty");
                    -far.arg()
                }
                None => return Err(Error::MalformedGraph(format!("vertex {v} has no position"))),
            };
            ends[v].push((angle.rem_euclid(2.0 * PI), EdgeEnd::new(e, side)));
        }
    }
    let mut flagged = Vec::new();
    let rotation = ends
        .into_iter()
        .enumerate()
        .map(|(v, mut list)| {
            list.sort_by(|a, b| {
                if (a.0 - b.0).abs() <= TIE {
                    a.1.cmp(&b.1)
                } else {
                    a.0.total_cmp(&b.0)
                }
            });
            let n = list.len();
            if n > 1 {
                let tight = (0..n).any(|i| {
                    let gap = if i + 1 < n { list[i + 1].0 - list[i].0 } else { list[0].0 + 2.0 * PI - list[i].0 };
                    gap < DEGENERATE_GAP
                });
                if tight {
                    flagged.push(v);
                }
            }
            list.into_iter().map(|(_, end)| end).collect()
        })
        .collect();
    Ok((rotation, flagged))
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn sigma_cycles_around_a_vertex() {
        let g = star(3);
        let e0 = EdgeEnd::new(0, Side::From);
        assert_eq!(g.sigma(g.sigma(g.sigma(e0))), e0);
        assert_eq!(g.sigma_inv(g.sigma(e0)), e0);
        assert_eq!(g.end_vertex(e0.opposite()), 1);
    }

    #[test]
    fn missing_rotation_entry_is_rejected() {
        let g = star(2);
        let mut rotation = g.rotation.clone();
        rotation[0].pop();
        let err = EmbeddedGraph::new(g.vertices.clone(), g.edges.clone(), rotation, None).unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)));
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let vertices = (0..4).map(|i| vertex(i, VertexKind::Root)).collect();
        let edges = vec![edge(0, 0, 1), edge(1, 2, 3)];
        let rotation = vec![
            vec![EdgeEnd::new(0, Side::From)],
            vec![EdgeEnd::new(0, Side::To)],
            vec![EdgeEnd::new(1, Side::From)],
            vec![EdgeEnd::new(1, Side::To)],
        ];
        assert!(EmbeddedGraph::new(vertices, edges, rotation, None).is_err());
    }

    #[test]
    fn rotation_from_geometry_is_counterclockwise() {
        let at = |id, z: Complex64, kind| VertexRecord { id, kind, position: Some(SpherePoint::Finite(z)), level: 0 };
        let vertices = vec![
            at(0, Complex64::new(0.0, 0.0), VertexKind::Pole),
            at(1, Complex64::new(1.0, 0.0), VertexKind::Root),
            at(2, Complex64::new(0.0, 1.0), VertexKind::Root),
            at(3, Complex64::new(-1.0, 0.0), VertexKind::Root),
        ];
        let edges = vec![edge(0, 0, 3), edge(1, 0, 1), edge(2, 0, 2)];
        let geometry = vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
        ];
        let (g, flagged) = EmbeddedGraph::with_geometry(vertices, edges, geometry).unwrap();
        let order: Vec<usize> = g.rotation[0].iter().map(|e| e.edge).collect();
        assert_eq!(order, vec![1, 2, 0]);
        assert!(flagged.is_empty());
    }

    #[test]
    fn subgraph_keeps_relative_order() {
        let g = star(4);
        let sub = g.subgraph(&[true, false, true, true], &[]).unwrap();
        assert_eq!(sub.graph.edge_count(), 3);
        assert_eq!(sub.edge_old, vec![0, 2, 3]);
        let order: Vec<usize> = sub.graph.rotation[0].iter().map(|e| e.edge).collect();
        assert_eq!(order, vec![0, 1, 2]);
    }
}
