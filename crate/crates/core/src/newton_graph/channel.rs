use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complex_poly::{RationalMap, SpherePoint};
use crate::dynamics::{trace_all_fixed_rays, FixedClass, MapAnalysis, RayOptions, RayPolyline};
use crate::error::{Error, Result};
use crate::planar_graph::{trace_faces, EdgeEnd, EdgeRecord, EmbeddedGraph, Side, VertexKind, VertexRecord};
use crate::tolerance::Tolerances;

/// The invariant star of fixed internal rays joining the roots to infinity.
#[derive(Clone, Debug)]
pub struct ChannelDiagram {
    /// Vertex 0 is infinity, then the roots in fixed point order; edge `i`
    /// is ray `i` oriented from its root to infinity.
    pub graph: EmbeddedGraph,
    pub rays: Vec<RayPolyline>,
    pub degree: usize,
    /// Vertices with nearly coincident edge directions.
    pub flagged: Vec<usize>,
}

pub fn build_channel_diagram(f: &RationalMap, tol: &Tolerances) -> Result<ChannelDiagram> {
    channel_diagram(&MapAnalysis::new(f, tol)?, &RayOptions::default())
}

pub fn channel_diagram(an: &MapAnalysis, opts: &RayOptions) -> Result<ChannelDiagram> {
    for rec in &an.fixed {
        if rec.location.finite().is_some() && rec.class != FixedClass::Superattracting {
            return Err(Error::Input(format!(
                "the channel diagram needs simple roots; the fixed point {} is {}",
                rec.location,
                rec.class.name()
            )));
        }
    }
    let rays = trace_all_fixed_rays(an, opts)?;
    let mut vertices =
        vec![VertexRecord { id: 0, kind: VertexKind::Infinity, position: Some(SpherePoint::Infinity), level: 0 }];
    let mut vertex_of_root = vec![usize::MAX; an.fixed.len()];
    for (i, rec) in an.fixed.iter().enumerate() {
        if rec.location.finite().is_some() {
            vertex_of_root[i] = vertices.len();
            vertices.push(VertexRecord { id: vertices.len(), kind: VertexKind::Root, position: Some(rec.location), level: 0 });
        }
    }
    let edges = rays
        .iter()
        .enumerate()
        .map(|(id, r)| EdgeRecord { id, from: vertex_of_root[r.root_index], to: 0, level: 0 })
        .collect();
    let geometry = rays.iter().map(|r| r.points.clone()).collect();
    let (graph, flagged) = EmbeddedGraph::with_geometry(vertices, edges, geometry)?;
    Ok(ChannelDiagram { graph, rays, degree: an.map.degree(), flagged })
}

/// Poles and finite fixed points seen from one face of a channel diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCensus {
    pub face: usize,
    /// Poles inside the face, with multiplicity.
    pub poles: u32,
    /// Distinct finite fixed points on the boundary.
    pub boundary_fixed: usize,
}

#[derive(Clone, Debug)]
pub struct PoleCensus {
    pub faces: Vec<FaceCensus>,
    /// Poles whose face could not be determined.
    pub unplaced: Vec<Complex64>,
}

impl PoleCensus {
    /// Each face with `p` poles has `p + 1` fixed points on its boundary.
    pub fn satisfies_face_law(&self) -> bool {
        self.unplaced.is_empty() && self.faces.iter().all(|c| c.boundary_fixed as u32 == c.poles + 1)
    }
}

/// Closed polygon of a face boundary. Passages through infinity are closed
/// by clockwise arcs beyond the far samples, matching the reversed rotation
/// there.
fn face_polygon(g: &EmbeddedGraph, corners: &[usize]) -> Result<Vec<Complex64>> {
    let geo = g.geometry.as_ref().ok_or_else(|| Error::MalformedGraph("face polygons need edge geometry".into()))?;
    let mut poly: Vec<Complex64> = Vec::new();
    for &c in corners {
        let end = EdgeEnd::from_dart(c);
        let line = &geo[end.edge];
        match end.side {
            Side::To => poly.extend(line.iter().copied()),
            Side::From => poly.extend(line.iter().rev().copied()),
        }
        let v = g.end_vertex(end);
        if g.vertices[v].kind != VertexKind::Infinity {
            continue;
        }
        let next = g.sigma(end);
        let out = &geo[next.edge];
        let b = if next.side == Side::From { out[0] } else { out[out.len() - 1] };
        let a = *poly.last().expect("nonempty polyline");
        let mut sweep = (a.arg() - b.arg()).rem_euclid(2.0 * PI);
        if next == end && sweep < 1e-12 {
            sweep = 2.0 * PI;
        }
        let (ra, rb) = (2.0 * a.norm(), 2.0 * b.norm());
        let steps = ((sweep / (2.0 * PI)) * 256.0).ceil().max(1.0) as usize;
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            poly.push(Complex64::from_polar(ra * (rb / ra).powf(t), a.arg() - t * sweep));
        }
    }
    Ok(poly)
}

fn winding_number(poly: &[Complex64], q: Complex64) -> i64 {
    let n = poly.len();
    let total: f64 = (0..n).map(|i| ((poly[(i + 1) % n] - q) / (poly[i] - q)).arg()).sum();
    (total / (2.0 * PI)).round() as i64
}

/// Places every pole of the map in a face of the diagram by winding numbers.
pub fn face_pole_census(cd: &ChannelDiagram, an: &MapAnalysis) -> Result<PoleCensus> {
    let g = &cd.graph;
    let faces = trace_faces(g)?;
    let polygons = faces.faces.iter().map(|f| face_polygon(g, f)).collect::<Result<Vec<_>>>()?;
    let mut census: Vec<FaceCensus> = faces
        .faces
        .iter()
        .enumerate()
        .map(|(face, corners)| {
            let mut fixed: Vec<usize> = corners
                .iter()
                .map(|&c| g.end_vertex(EdgeEnd::from_dart(c)))
                .filter(|&v| g.vertices[v].kind == VertexKind::Root)
                .collect();
            fixed.sort_unstable();
            fixed.dedup();
            FaceCensus { face, poles: 0, boundary_fixed: fixed.len() }
        })
        .collect();
    let mut unplaced = Vec::new();
    for pole in &an.poles {
        let inside: Vec<usize> = (0..polygons.len()).filter(|&i| winding_number(&polygons[i], pole.z) != 0).collect();
        match inside.as_slice() {
            [i] => census[*i].poles += pole.mult,
            _ => unplaced.push(pole.z),
        }
    }
    Ok(PoleCensus { faces: census, unplaced })
}
