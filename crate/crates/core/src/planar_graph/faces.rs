use super::graph::{EdgeEnd, EmbeddedGraph};
use crate::error::{Error, Result};

/// The sector at a vertex from one edge end counterclockwise to the next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corner {
    pub vertex: usize,
    pub first: EdgeEnd,
    pub second: EdgeEnd,
    pub face: usize,
}

/// Faces of an embedded graph. Corners are indexed by the dart of their
/// first edge end, so every dart starts exactly one corner.
#[derive(Clone, Debug)]
pub struct FaceSet {
    pub corners: Vec<Corner>,
    /// Corner indices of each face in boundary order.
    pub faces: Vec<Vec<usize>>,
}

impl FaceSet {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Corners of `v` in rotation order.
    pub fn corners_at<'a>(&'a self, g: &'a EmbeddedGraph, v: usize) -> impl Iterator<Item = &'a Corner> + 'a {
        g.rotation[v].iter().map(move |end| &self.corners[end.dart()])
    }
}

/// Traces the faces as orbits of `end -> sigma(opposite(end))`.
pub fn trace_faces(g: &EmbeddedGraph) -> Result<FaceSet> {
    let n = g.dart_count();
    let mut face_of = vec![usize::MAX; n];
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        let first = EdgeEnd::from_dart(start).opposite();
        if face_of[first.dart()] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut corners = Vec::new();
        let mut d = EdgeEnd::from_dart(start);
        loop {
            let c = d.opposite();
            if face_of[c.dart()] != usize::MAX {
                if face_of[c.dart()] == id && c == first {
                    break;
                }
                return Err(Error::MalformedGraph("inconsistent rotation: face orbits overlap".into()));
            }
            face_of[c.dart()] = id;
            corners.push(c.dart());
            d = g.sigma(c);
        }
        faces.push(corners);
    }
    if g.edge_count() == 0 {
        faces.push(Vec::new());
    }
    let corners = (0..n)
        .map(|dart| {
            let first = EdgeEnd::from_dart(dart);
            Corner { vertex: g.end_vertex(first), first, second: g.sigma(first), face: face_of[dart] }
        })
        .collect();
    let set = FaceSet { corners, faces };
    let euler = g.vertex_count() as i64 - g.edge_count() as i64 + set.face_count() as i64;
    if euler != 2 {
        return Err(Error::MalformedGraph(format!("rotation is not planar: V - E + F = {euler}")));
    }
    Ok(set)
}
