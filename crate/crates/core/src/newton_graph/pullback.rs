use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;
use rayon::prelude::*;

use super::channel::{channel_diagram, ChannelDiagram};
use crate::complex_poly::{RationalMap, RootOptions, SpherePoint};
use crate::dynamics::{canonical_cmp, same_point, Lifter, MapAnalysis, RayOptions};
use crate::error::{Error, Result};
use crate::planar_graph::{EdgeRecord, EdgeTarget, EmbeddedGraph, GraphMapRecord, VertexKind, VertexRecord};
use crate::tolerance::Tolerances;

/// Rays for the pipeline run out to this modulus, so that lifts ending at
/// poles of high order still approach them closely.
pub const PIPELINE_FAR_RADIUS: f64 = 1e12;
/// Polylines are refined towards their finite endpoints down to this
/// relative distance before lifting.
const ENDPOINT_REFINEMENT: f64 = 1e-12;
/// A lifted endpoint must be this much closer to its vertex than to any
/// other candidate.
const SNAP_RATIO: f64 = 0.25;
const SNAP_LIMIT: f64 = 1e-3;

/// One level `Δn`: the component of `f^-n(Δ)` containing infinity. Ids of
/// `Δn` are a prefix of the ids of `Δ(n+1)`, so `map` (the action of `f`)
/// is a self-map of the graph.
#[derive(Clone, Debug)]
pub struct NewtonGraphLevel {
    pub n: usize,
    pub graph: EmbeddedGraph,
    pub map: GraphMapRecord,
    pub contains_all_poles: bool,
    pub contains_all_critical_points: bool,
    /// Lifted edges outside the component of infinity, kept for later levels.
    pub detached_edges: usize,
    /// Vertices with nearly coincident edge directions.
    pub flagged: Vec<usize>,
}

#[derive(Clone, Debug)]
struct PoolVertex {
    position: SpherePoint,
    kind: VertexKind,
    image: usize,
    local_degree: u32,
    joined: Option<usize>,
}

#[derive(Clone, Debug)]
struct PoolEdge {
    from: usize,
    to: usize,
    image: usize,
    points: Vec<Complex64>,
    joined: Option<usize>,
    lifted: bool,
}

struct Lift {
    from: usize,
    to: usize,
    points: Vec<Complex64>,
}

/// Iterated pullback of the channel diagram. All lifts found so far are
/// kept; each level is the component of infinity among them.
pub struct Pullback {
    an: MapAnalysis,
    channel: ChannelDiagram,
    vertices: Vec<PoolVertex>,
    edges: Vec<PoolEdge>,
    /// Universe vertices over each vertex, in canonical order.
    preimages: BTreeMap<usize, Vec<usize>>,
    levels: Vec<NewtonGraphLevel>,
}

impl Pullback {
    pub fn new(f: &RationalMap, tol: &Tolerances) -> Result<Self> {
        let an = MapAnalysis::new(f, tol)?;
        let opts = RayOptions { far_radius: PIPELINE_FAR_RADIUS, ..RayOptions::default() };
        let channel = channel_diagram(&an, &opts)?;
        Self::from_channel(an, channel)
    }

    pub fn from_channel(an: MapAnalysis, channel: ChannelDiagram) -> Result<Self> {
        let g = &channel.graph;
        let vertices = g
            .vertices
            .iter()
            .map(|v| {
                let position = v.position.expect("channel diagram vertices have positions");
                PoolVertex { position, kind: v.kind, image: v.id, local_degree: an.local_degree_at(position), joined: Some(0) }
            })
            .collect();
        let geo = g.geometry.as_ref().expect("channel diagram has geometry");
        let edges = g
            .edges
            .iter()
            .map(|e| PoolEdge {
                from: e.from,
                to: e.to,
                image: e.id,
                points: geo[e.id].clone(),
                joined: Some(0),
                lifted: false,
            })
            .collect();
        let mut p = Pullback { an, channel, vertices, edges, preimages: BTreeMap::new(), levels: Vec::new() };
        let level = p.build_level(0)?;
        p.levels.push(level);
        Ok(p)
    }

    pub fn analysis(&self) -> &MapAnalysis {
        &self.an
    }

    pub fn channel(&self) -> &ChannelDiagram {
        &self.channel
    }

    pub fn levels(&self) -> &[NewtonGraphLevel] {
        &self.levels
    }

    pub fn current(&self) -> &NewtonGraphLevel {
        self.levels.last().expect("level 0 exists")
    }

    pub fn into_levels(self) -> Vec<NewtonGraphLevel> {
        self.levels
    }

    /// Computes the next level.
    pub fn advance(&mut self) -> Result<&NewtonGraphLevel> {
        let n = self.levels.len() - 1;
        let mut to_lift: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].joined.is_some() && !self.edges[e].lifted).collect();
        to_lift.sort_by_key(|&e| (self.edges[e].joined, e));

        let needed: BTreeSet<usize> = to_lift
            .iter()
            .flat_map(|&e| [self.edges[e].from, self.edges[e].to])
            .filter(|y| !self.preimages.contains_key(y))
            .collect();
        let opts = RootOptions::default();
        let f = &self.an.map;
        let found: Vec<(usize, Result<Vec<(SpherePoint, u32)>>)> =
            needed.into_par_iter().map(|y| (y, f.preimages(self.vertices[y].position, &opts))).collect();
        for (y, pre) in found {
            let pre = pre.map_err(|e| Error::Pullback { edge: usize::MAX, reason: format!("preimages of vertex {y}: {e}") })?;
            self.resolve_preimages(y, pre);
        }

        let lifted: Vec<Result<Vec<Lift>>> = to_lift.par_iter().map(|&e| self.lift_edge(e)).collect();
        for (&e, lifts) in to_lift.iter().zip(lifted) {
            let lifts = lifts?;
            let mut itself = 0;
            for l in lifts {
                let old = &self.edges[e];
                if old.image == e && l.from == old.from && l.to == old.to {
                    itself += 1;
                    continue;
                }
                self.edges.push(PoolEdge { from: l.from, to: l.to, image: e, points: l.points, joined: None, lifted: false });
            }
            if self.edges[e].image == e && itself != 1 {
                return Err(Error::Pullback { edge: e, reason: format!("invariant edge has {itself} invariant lifts") });
            }
            self.edges[e].lifted = true;
        }

        self.join_component(n + 1);
        let level = self.build_level(n + 1)?;
        self.levels.push(level);
        Ok(self.current())
    }

    fn resolve_preimages(&mut self, y: usize, mut pre: Vec<(SpherePoint, u32)>) {
        pre.sort_by(|a, b| match (a.0, b.0) {
            (SpherePoint::Finite(x), SpherePoint::Finite(z)) => canonical_cmp(x, z),
            (SpherePoint::Finite(_), SpherePoint::Infinity) => std::cmp::Ordering::Less,
            (SpherePoint::Infinity, SpherePoint::Finite(_)) => std::cmp::Ordering::Greater,
            _ => std::cmp::Ordering::Equal,
        });
        let image_kind = self.vertices[y].kind;
        let merge = self.an.tol.merge;
        let ids = pre
            .into_iter()
            .map(|(p, mult)| {
                let fixed = (image_kind == VertexKind::Infinity || image_kind == VertexKind::Root)
                    && same_point(&p, &self.vertices[y].position, merge);
                if fixed {
                    self.vertices[y].local_degree = mult;
                    return y;
                }
                let kind = match image_kind {
                    VertexKind::Infinity => VertexKind::Pole,
                    VertexKind::Pole | VertexKind::Prepole => VertexKind::Prepole,
                    VertexKind::Root | VertexKind::RootPreimage => VertexKind::RootPreimage,
                };
                self.vertices.push(PoolVertex { position: p, kind, image: y, local_degree: mult, joined: None });
                self.vertices.len() - 1
            })
            .collect();
        self.preimages.insert(y, ids);
    }

    /// Samples of an edge strictly between its vertices, refined towards
    /// finite endpoints.
    fn lift_source(&self, e: usize) -> Vec<Complex64> {
        let edge = &self.edges[e];
        let pts = &edge.points;
        let from = self.vertices[edge.from].position.finite();
        let to = self.vertices[edge.to].position.finite();
        let lo = usize::from(from.is_some());
        let hi = pts.len() - usize::from(to.is_some());
        let interior = &pts[lo..hi];
        let mut out = Vec::with_capacity(interior.len() + 80);
        if let Some(p) = from {
            out.extend(approach(p, interior[0]).into_iter().rev());
        }
        out.extend_from_slice(interior);
        if let Some(p) = to {
            out.extend(approach(p, interior[interior.len() - 1]));
        }
        out
    }

    fn lift_edge(&self, e: usize) -> Result<Vec<Lift>> {
        let fail = |reason: String| Error::Pullback { edge: e, reason };
        let edge = &self.edges[e];
        let src = self.lift_source(e);
        if src.len() < 2 {
            return Err(fail("edge polyline has no interior samples".into()));
        }
        let m = src.len() / 2;
        let f = &self.an.map;
        let mut starts = f
            .preimages(SpherePoint::Finite(src[m]), &RootOptions::default())
            .map_err(|err| fail(format!("preimages of the midpoint: {err}")))?;
        if starts.len() != f.degree() || starts.iter().any(|(p, k)| *k != 1 || p.is_infinite()) {
            return Err(Error::LiftAmbiguity(format!("edge {e}: midpoint {} is a critical value", src[m])));
        }
        starts.sort_by(|a, b| canonical_cmp(a.0.finite().unwrap(), b.0.finite().unwrap()));
        let lifter = Lifter::new(f);
        let backward_src: Vec<Complex64> = src[..=m].iter().rev().copied().collect();
        let from_candidates = &self.preimages[&edge.from];
        let to_candidates = &self.preimages[&edge.to];
        starts
            .into_iter()
            .map(|(p, _)| {
                let z0 = p.finite().expect("finite start");
                let forward = lifter.lift(&src[m..], z0).map_err(|err| fail(err.to_string()))?;
                let backward = lifter.lift(&backward_src, z0).map_err(|err| fail(err.to_string()))?;
                let mut line: Vec<Complex64> = backward.into_iter().rev().collect();
                line.extend_from_slice(&forward[1..]);
                let from = self.snap(e, line[0], from_candidates)?;
                let to = self.snap(e, line[line.len() - 1], to_candidates)?;
                let mut points = Vec::with_capacity(line.len() + 2);
                if let Some(z) = self.vertices[from].position.finite() {
                    points.push(z);
                }
                points.extend(line);
                if let Some(z) = self.vertices[to].position.finite() {
                    points.push(z);
                }
                Ok(Lift { from, to, points })
            })
            .collect()
    }

    /// The candidate vertex a lifted endpoint converges to.
    fn snap(&self, e: usize, z: Complex64, candidates: &[usize]) -> Result<usize> {
        let here = SpherePoint::Finite(z);
        let mut dist: Vec<(f64, usize)> =
            candidates.iter().map(|&c| (here.chordal_distance(&self.vertices[c].position), c)).collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        let Some(&(best, id)) = dist.first() else {
            return Err(Error::Pullback { edge: e, reason: "endpoint vertex has no preimages".into() });
        };
        let second = dist.get(1).map_or(f64::INFINITY, |d| d.0);
        if best > SNAP_LIMIT || best > SNAP_RATIO * second {
            return Err(Error::LiftAmbiguity(format!(
                "edge {e}: lifted endpoint {z} is {best:.3e} from the nearest preimage vertex and {second:.3e} from the next"
            )));
        }
        Ok(id)
    }

    /// Marks everything newly reachable from infinity as joining at `n`.
    fn join_component(&mut self, n: usize) {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.from].push(i);
            incident[e.to].push(i);
        }
        let mut queue: VecDeque<usize> = (0..self.vertices.len()).filter(|&v| self.vertices[v].joined.is_some()).collect();
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                if self.edges[e].joined.is_none() {
                    self.edges[e].joined = Some(n);
                }
                for w in [self.edges[e].from, self.edges[e].to] {
                    if self.vertices[w].joined.is_none() {
                        self.vertices[w].joined = Some(n);
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    fn build_level(&self, n: usize) -> Result<NewtonGraphLevel> {
        let mut vids: Vec<usize> = (0..self.vertices.len()).filter(|&v| self.vertices[v].joined.is_some()).collect();
        vids.sort_by_key(|&v| (self.vertices[v].joined, v));
        let mut eids: Vec<usize> = (0..self.edges.len()).filter(|&e| self.edges[e].joined.is_some()).collect();
        eids.sort_by_key(|&e| (self.edges[e].joined, e));
        let mut vnew = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in vids.iter().enumerate() {
            vnew[v] = i;
        }
        let mut enew = vec![usize::MAX; self.edges.len()];
        for (i, &e) in eids.iter().enumerate() {
            enew[e] = i;
        }
        let vertices = vids
            .iter()
            .enumerate()
            .map(|(id, &v)| {
                let pv = &self.vertices[v];
                VertexRecord { id, kind: pv.kind, position: Some(pv.position), level: pv.joined.unwrap_or(n) }
            })
            .collect();
        let edges = eids
            .iter()
            .enumerate()
            .map(|(id, &e)| {
                let pe = &self.edges[e];
                EdgeRecord { id, from: vnew[pe.from], to: vnew[pe.to], level: pe.joined.unwrap_or(n) }
            })
            .collect();
        let geometry = eids.iter().map(|&e| self.edges[e].points.clone()).collect();
        let (graph, flagged) = EmbeddedGraph::with_geometry(vertices, edges, geometry)?;

        let missing = |what: &str, id: usize| Error::Pullback { edge: id, reason: format!("image of {what} {id} is not in level {n}") };
        let vertex_map = vids
            .iter()
            .map(|&v| Some(vnew[self.vertices[v].image]).filter(|&x| x != usize::MAX).ok_or_else(|| missing("vertex", v)))
            .collect::<Result<Vec<_>>>()?;
        let edge_map = eids
            .iter()
            .map(|&e| {
                Some(enew[self.edges[e].image])
                    .filter(|&x| x != usize::MAX)
                    .map(|edge| EdgeTarget::Edge { edge, reversed: false })
                    .ok_or_else(|| missing("edge", e))
            })
            .collect::<Result<Vec<_>>>()?;
        let local_degree = vids.iter().map(|&v| self.vertices[v].local_degree).collect();
        let map = GraphMapRecord { vertex_map, edge_map, local_degree };

        let tol = self.an.tol.landing;
        let has_vertex_at = |p: &SpherePoint| graph.vertices.iter().any(|v| v.position.is_some_and(|q| same_point(&q, p, tol)));
        let contains_all_poles = self.an.poles.iter().all(|p| has_vertex_at(&SpherePoint::Finite(p.z)));
        let contains_all_critical_points = self.an.critical.iter().all(|(c, _)| has_vertex_at(c));
        Ok(NewtonGraphLevel {
            n,
            detached_edges: self.edges.len() - eids.len(),
            graph,
            map,
            contains_all_poles,
            contains_all_critical_points,
            flagged,
        })
    }
}

/// Points from `q` towards the vertex `p`, halving the distance each time.
fn approach(p: Complex64, q: Complex64) -> Vec<Complex64> {
    let floor = ENDPOINT_REFINEMENT * p.norm().max(1.0);
    let mut out = Vec::new();
    let mut h = (q - p) * 0.5;
    while h.norm() > floor && out.len() < 64 {
        out.push(p + h);
        h *= 0.5;
    }
    out
}

/// One pullback step; `pullback` must be at the level to extend.
pub fn pull_back(pullback: &mut Pullback) -> Result<&NewtonGraphLevel> {
    pullback.advance()
}

/// Smallest `n <= max_n` such that `Δn` contains every pole.
pub fn poles_connect_level(f: &RationalMap, max_n: usize, tol: &Tolerances) -> Result<usize> {
    let mut p = Pullback::new(f, tol)?;
    loop {
        let level = p.current();
        if level.contains_all_poles {
            return Ok(level.n);
        }
        if level.n >= max_n {
            return Err(Error::NonTermination {
                max_level: max_n,
                reason: "some poles are not yet connected to the channel diagram (undecided)".into(),
            });
        }
        p.advance()?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_poly::{newton_map, Polynomial};
    use crate::planar_graph::{is_graph_map, trace_faces};

    fn unity(d: usize) -> RationalMap {
        let mut coeffs = vec![0.0; d + 1];
        coeffs[0] = -1.0;
        coeffs[d] = 1.0;
        newton_map(&Polynomial::from_real(&coeffs)).unwrap()
    }

    #[test]
    fn first_pullback_of_the_unity_cubic() {
        let mut p = Pullback::new(&unity(3), &Tolerances::default()).unwrap();
        let l1 = p.advance().unwrap().clone();
        // the three rays, plus two more lifts of each ending at the pole 0:
        // one from the root and one from its other preimage
        assert_eq!(l1.graph.edge_count(), 9);
        assert_eq!(l1.graph.vertex_count(), 8);
        assert_eq!(l1.graph.vertices.iter().filter(|v| v.kind == VertexKind::RootPreimage).count(), 3);
        let pole = l1.graph.vertices.iter().position(|v| v.kind == VertexKind::Pole).unwrap();
        assert!(l1.graph.vertices[pole].position.unwrap().finite().unwrap().norm() < 1e-9);
        assert_eq!(l1.graph.degree(pole), 6);
        assert!(l1.contains_all_poles);
        assert!(l1.contains_all_critical_points);
        assert!(is_graph_map(&l1.graph, &l1.map).ok);
        trace_faces(&l1.graph).unwrap();
    }

    #[test]
    fn levels_are_nested() {
        let mut p = Pullback::new(&unity(3), &Tolerances::default()).unwrap();
        p.advance().unwrap();
        p.advance().unwrap();
        let levels = p.levels();
        for w in levels.windows(2) {
            let (a, b) = (&w[0].graph, &w[1].graph);
            assert!(a.vertex_count() <= b.vertex_count());
            for v in &a.vertices {
                assert_eq!(b.vertices[v.id].position, v.position);
            }
            for e in &a.edges {
                assert_eq!((b.edges[e.id].from, b.edges[e.id].to), (e.from, e.to));
            }
            // every new edge maps onto an edge of the previous level
            for (e, t) in w[1].map.edge_map.iter().enumerate() {
                let EdgeTarget::Edge { edge, .. } = *t else { panic!() };
                assert!(edge < a.edge_count(), "edge {e}");
            }
        }
    }

    #[test]
    fn poles_connect_at_level_one() {
        assert_eq!(poles_connect_level(&unity(3), 5, &Tolerances::default()).unwrap(), 1);
    }
}
