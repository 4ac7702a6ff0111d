use serde_json::{json, Map, Value};

use crate::planar_graph::{
    check_regular_extension, is_graph_map, EdgeEnd, EmbeddedGraph, GraphMapRecord, VertexKind,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub name: String,
    pub pass: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub verdicts: Vec<ConditionVerdict>,
    pub overall: bool,
    /// Degree of the channel diagram, when one was identified.
    pub degree: Option<usize>,
    /// The level `N` of a Newton graph, when it exists.
    pub level: Option<usize>,
}

impl ValidationReport {
    fn new(verdicts: Vec<ConditionVerdict>, degree: Option<usize>, level: Option<usize>) -> Self {
        let overall = verdicts.iter().all(|v| v.pass);
        ValidationReport { verdicts, overall, degree, level }
    }

    pub fn verdict(&self, name: &str) -> Option<&ConditionVerdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.verdicts.iter().filter(|v| !v.pass).map(|v| v.name.as_str()).collect()
    }

    /// `{condition: {pass, evidence}}` plus `overall`, `degree` and `level`.
    pub fn to_json(&self) -> Value {
        let conditions: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|v| (v.name.clone(), json!({"pass": v.pass, "evidence": v.evidence})))
            .collect();
        json!({"conditions": conditions, "overall": self.overall, "degree": self.degree, "level": self.level})
    }
}

fn verdict(name: &str, pass: bool, evidence: impl Into<String>) -> ConditionVerdict {
    ConditionVerdict { name: name.into(), pass, evidence: evidence.into() }
}

pub const CHANNEL_CONDITIONS: [&str; 4] = ["1-edge-bound", "2-star", "3-attached", "4-parallel-edges"];
pub const NEWTON_CONDITIONS: [&str; 7] = [
    "1-invariant-channel-diagram",
    "2-branch",
    "3-degree-sum",
    "4-level",
    "5-connected",
    "6-regular-extension",
    "7-saturated",
];

/// The vertex every edge is incident to; the infinity vertex if it is one.
fn star_center(g: &EmbeddedGraph) -> Option<usize> {
    let incident_to_all = |v: usize| g.edges.iter().all(|e| e.from == v || e.to == v);
    if let Some(inf) = g.infinity_vertex() {
        if incident_to_all(inf) {
            return Some(inf);
        }
    }
    (0..g.vertex_count()).find(|&v| incident_to_all(v))
}

/// The four conditions of an abstract channel diagram. The center `v0` is
/// the infinity vertex when present, otherwise the vertex on every edge.
pub fn validate_abstract_channel_diagram(g: &EmbeddedGraph) -> ValidationReport {
    let n = g.vertex_count();
    let l = g.edge_count();
    let d = n.saturating_sub(1);
    let mut verdicts = vec![verdict(
        CHANNEL_CONDITIONS[0],
        d >= 3 && l <= 2 * d - 2,
        format!("degree {d}, {l} edges, bound {}", (2 * d).saturating_sub(2)),
    )];
    let Some(v0) = star_center(g) else {
        verdicts.push(verdict(CHANNEL_CONDITIONS[1], false, "no vertex lies on every edge"));
        verdicts.push(verdict(CHANNEL_CONDITIONS[2], false, "no center"));
        verdicts.push(verdict(CHANNEL_CONDITIONS[3], false, "no center"));
        return ValidationReport::new(verdicts, Some(d), None);
    };
    let loops: Vec<usize> = g.edges.iter().filter(|e| e.from == e.to).map(|e| e.id).collect();
    verdicts.push(verdict(
        CHANNEL_CONDITIONS[1],
        loops.is_empty(),
        if loops.is_empty() { format!("every edge joins v0 = {v0} to another vertex") } else { format!("loops at v0: {loops:?}") },
    ));
    let lonely: Vec<usize> = (0..n).filter(|&v| v != v0 && g.degree(v) == 0).collect();
    verdicts.push(verdict(
        CHANNEL_CONDITIONS[2],
        lonely.is_empty(),
        if lonely.is_empty() { "every vertex is joined to v0".to_string() } else { format!("vertices not joined to v0: {lonely:?}") },
    ));

    // Two edges to the same vertex split the rotation at v0 into two arcs;
    // each arc must reach some third vertex.
    let rot = &g.rotation[v0];
    let far = |end: &EdgeEnd| g.end_vertex(end.opposite());
    let mut empty_sides = Vec::new();
    for i in 0..rot.len() {
        for j in i + 1..rot.len() {
            let vk = far(&rot[i]);
            if far(&rot[j]) != vk || vk == v0 {
                continue;
            }
            let inner = rot[i + 1..j].iter().any(|e| far(e) != vk);
            let outer = rot[j + 1..].iter().chain(&rot[..i]).any(|e| far(e) != vk);
            if !(inner && outer) {
                empty_sides.push((rot[i].edge, rot[j].edge));
            }
        }
    }
    verdicts.push(verdict(
        CHANNEL_CONDITIONS[3],
        empty_sides.is_empty(),
        if empty_sides.is_empty() {
            "every pair of parallel edges separates vertices".to_string()
        } else {
            format!("parallel edges bounding a region without vertices: {empty_sides:?}")
        },
    ));
    ValidationReport::new(verdicts, Some(d), None)
}

/// The seven conditions of an abstract Newton graph for a self-map `m` of `g`.
pub fn validate_abstract_newton_graph(g: &EmbeddedGraph, m: &GraphMapRecord) -> ValidationReport {
    let structural = is_graph_map(g, m);
    if !structural.ok {
        let why = format!("not a graph map: {}", structural.violations.join("; "));
        let verdicts = NEWTON_CONDITIONS.iter().map(|c| verdict(c, false, why.clone())).collect();
        return ValidationReport::new(verdicts, None, None);
    }
    let mut verdicts = Vec::with_capacity(7);

    // (1) the invariant channel diagram
    let in_delta: Vec<bool> = (0..g.edge_count()).map(|e| m.fixes_edge(e)).collect();
    let mut delta_vertex = vec![false; g.vertex_count()];
    for e in g.edges.iter().filter(|e| in_delta[e.id]) {
        delta_vertex[e.from] = true;
        delta_vertex[e.to] = true;
    }
    let moved: Vec<usize> = (0..g.vertex_count()).filter(|&v| delta_vertex[v] && m.vertex_map[v] != v).collect();
    let delta_edges = in_delta.iter().filter(|&&b| b).count();
    let sub = if delta_edges > 0 { g.subgraph(&in_delta, &[]).ok() } else { None };
    let channel = sub.as_ref().map(|s| validate_abstract_channel_diagram(&s.graph));
    let v0 = sub.as_ref().and_then(|s| star_center(&s.graph).map(|c| s.vertex_old[c]));
    let d = channel.as_ref().and_then(|c| c.degree);
    let pass1 = channel.as_ref().is_some_and(|c| c.overall) && moved.is_empty() && delta_edges < g.edge_count();
    let evidence1 = match &channel {
        None => "the fixed edges do not form a connected graph".to_string(),
        Some(c) => format!(
            "{delta_edges} fixed edges of {}, degree {}, channel diagram {}{}",
            g.edge_count(),
            c.degree.unwrap_or(0),
            if c.overall { "valid".to_string() } else { format!("fails {:?}", c.failed()) },
            if moved.is_empty() { String::new() } else { format!(", vertices not fixed: {moved:?}") },
        ),
    };
    verdicts.push(verdict(NEWTON_CONDITIONS[0], pass1, evidence1));
    let (Some(v0), Some(d)) = (v0, d) else {
        for c in &NEWTON_CONDITIONS[1..] {
            verdicts.push(verdict(c, false, "no invariant channel diagram"));
        }
        return ValidationReport::new(verdicts, d, None);
    };

    // (2) branching at the roots
    let mut problems = Vec::new();
    let has_outer = |v: usize| g.rotation[v].iter().any(|end| !in_delta[end.edge]);
    if has_outer(v0) {
        problems.push(format!("v0 = {v0} has edges outside the channel diagram"));
    }
    for v in (0..g.vertex_count()).filter(|&v| delta_vertex[v] && v != v0) {
        let to_center = g.rotation[v].iter().filter(|end| in_delta[end.edge] && g.end_vertex(end.opposite()) == v0).count();
        let k = m.local_degree[v] as usize;
        if k < 2 || to_center != k - 1 {
            problems.push(format!("vertex {v}: {to_center} channel edges, local degree {k}"));
        }
        if !has_outer(v) {
            problems.push(format!("vertex {v} has no edge outside the channel diagram"));
        }
    }
    verdicts.push(verdict(
        NEWTON_CONDITIONS[1],
        problems.is_empty(),
        if problems.is_empty() { "every root has local degree one more than its channel edges".into() } else { problems.join("; ") },
    ));

    // (3) Riemann-Hurwitz count
    let total: u32 = m.local_degree.iter().map(|k| k - 1).sum();
    verdicts.push(verdict(
        NEWTON_CONDITIONS[2],
        total as usize == 2 * d - 2,
        format!("sum of (local degree - 1) = {total}, 2d - 2 = {}", 2 * d - 2),
    ));

    // (4) the level N
    let level = newton_level(g, m, &delta_vertex, &in_delta);
    verdicts.push(match level {
        Ok(n) => verdict(NEWTON_CONDITIONS[3], true, format!("N = {n}")),
        Err(ref why) => verdict(NEWTON_CONDITIONS[3], false, why.clone()),
    });

    // (5) the closure of the complement of the channel diagram is connected
    let outer: Vec<bool> = in_delta.iter().map(|b| !b).collect();
    let start = g.edges.iter().find(|e| outer[e.id]).map(|e| e.from);
    let connected = start.is_some_and(|s| {
        let (_, reached) = g.component(s, &outer);
        (0..g.edge_count()).all(|e| !outer[e] || reached[e])
    });
    verdicts.push(verdict(
        NEWTON_CONDITIONS[4],
        connected,
        format!("{} edges outside the channel diagram{}", outer.iter().filter(|&&b| b).count(), if connected { ", connected" } else { ", disconnected" }),
    ));

    // (6) regular extension
    let ext = check_regular_extension(g, m);
    verdicts.push(verdict(
        NEWTON_CONDITIONS[5],
        ext.ok,
        if ext.ok {
            "corner ranges are disjoint in every face".to_string()
        } else {
            format!("overlapping corners {:?}; {}", ext.overlaps, ext.diagnostics.join("; "))
        },
    ));

    // (7) saturation
    verdicts.push(match level {
        Ok(n) => match saturation(g, m, &in_delta, n) {
            Ok(()) => verdict(NEWTON_CONDITIONS[6], true, format!("the graph is the full {n}-fold pullback component")),
            Err(why) => verdict(NEWTON_CONDITIONS[6], false, why),
        },
        Err(_) => verdict(NEWTON_CONDITIONS[6], false, "no level N"),
    });
    ValidationReport::new(verdicts, Some(d), level.ok())
}

/// `N` with `g^(N-1)` sending every critical vertex into the channel diagram
/// (minimal), checked against `g^N(G) ⊆ Δ`.
fn newton_level(g: &EmbeddedGraph, m: &GraphMapRecord, delta_vertex: &[bool], in_delta: &[bool]) -> Result<usize, String> {
    let critical: Vec<usize> = (0..g.vertex_count()).filter(|&v| m.local_degree[v] > 1).collect();
    let mut points = critical.clone();
    let mut n0 = None;
    for n in 0..=g.vertex_count() {
        if points.iter().all(|&v| delta_vertex[v]) {
            n0 = Some(n);
            break;
        }
        points.iter_mut().for_each(|v| *v = m.vertex_map[*v]);
    }
    let Some(n0) = n0 else {
        return Err("some critical vertex never maps into the channel diagram".into());
    };
    let n = n0 + 1;
    let escaped: Vec<usize> = (0..g.edge_count())
        .filter(|&e| {
            let mut x = e;
            for _ in 0..n {
                x = m.image_edge(x).expect("graph map");
            }
            !in_delta[x]
        })
        .collect();
    if escaped.is_empty() {
        Ok(n)
    } else {
        Err(format!("N = {n} from the critical vertices, but edges {escaped:?} are not mapped into the channel diagram by g^N"))
    }
}

/// The levels `Γk` (component of the channel diagram among edges with
/// `g^k(e) ∈ Δ`) must be locally complete pullbacks of each other, and
/// `ΓN` must be the whole graph.
fn saturation(g: &EmbeddedGraph, m: &GraphMapRecord, in_delta: &[bool], n: usize) -> Result<(), String> {
    let anchor = g.edges.iter().find(|e| in_delta[e.id]).map(|e| e.from).ok_or("empty channel diagram")?;
    let mut depth = vec![usize::MAX; g.edge_count()];
    for (e, d) in depth.iter_mut().enumerate() {
        let mut x = e;
        for k in 0..=n {
            if in_delta[x] {
                *d = k;
                break;
            }
            x = m.image_edge(x).expect("graph map");
        }
    }
    let mut previous_edges: Vec<bool> = in_delta.to_vec();
    for k in 1..=n {
        let keep: Vec<bool> = depth.iter().map(|&d| d <= k).collect();
        let (vertices, edges) = g.component(anchor, &keep);
        for v in (0..g.vertex_count()).filter(|&v| vertices[v]) {
            let y = m.vertex_map[v];
            for target in g.rotation[y].iter().filter(|t| previous_edges[t.edge]) {
                let count = g.rotation[v]
                    .iter()
                    .filter(|end| edges[end.edge] && m.image_end(**end) == Some(*target))
                    .count();
                if count != m.local_degree[v] as usize {
                    return Err(format!(
                        "level {k}: vertex {v} has {count} edge ends over the end of edge {} at vertex {y}, local degree {}",
                        target.edge, m.local_degree[v]
                    ));
                }
            }
        }
        previous_edges = edges;
    }
    let missing: Vec<usize> = (0..g.edge_count()).filter(|&e| !previous_edges[e]).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(format!("edges {missing:?} are not in the {n}-fold pullback component"))
    }
}

/// Vertex kinds allowed at level `n`, checked by forward iteration of the map.
pub fn vertex_typing_violations(g: &EmbeddedGraph, m: &GraphMapRecord, n: usize) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| {
            let kind = g.vertices[v].kind;
            let mut x = v;
            let mut steps = 0;
            while g.vertices[x].kind != VertexKind::Infinity && g.vertices[x].kind != VertexKind::Root && steps <= n {
                x = m.vertex_map[x];
                steps += 1;
            }
            let end = g.vertices[x].kind;
            let ok = match kind {
                VertexKind::Infinity | VertexKind::Root => steps == 0,
                VertexKind::Pole => end == VertexKind::Infinity && steps == 1,
                VertexKind::Prepole => end == VertexKind::Infinity && (2..=n).contains(&steps),
                VertexKind::RootPreimage => end == VertexKind::Root && (1..=n).contains(&steps),
            };
            !ok
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_graph::{EdgeRecord, EdgeTarget, Side, VertexRecord};

    fn vertex(id: usize, kind: VertexKind) -> VertexRecord {
        VertexRecord { id, kind, position: None, level: 0 }
    }

    fn edge(id: usize, from: usize, to: usize) -> EdgeRecord {
        EdgeRecord { id, from, to, level: 0 }
    }

    /// Star with center 0 = infinity; `targets[i]` is the leaf of edge `i`,
    /// edges listed counterclockwise at the center.
    fn star(leaves: usize, targets: &[usize]) -> EmbeddedGraph {
        let mut vertices = vec![vertex(0, VertexKind::Infinity)];
        vertices.extend((1..=leaves).map(|i| vertex(i, VertexKind::Root)));
        let edges: Vec<EdgeRecord> = targets.iter().enumerate().map(|(i, &t)| edge(i, t, 0)).collect();
        let mut rotation = vec![Vec::new(); leaves + 1];
        rotation[0] = (0..targets.len()).map(|i| EdgeEnd::new(i, Side::To)).collect();
        for (i, &t) in targets.iter().enumerate() {
            rotation[t].push(EdgeEnd::new(i, Side::From));
        }
        // leaves with two edges keep them in the mirror order of the center
        for r in rotation.iter_mut().skip(1) {
            r.reverse();
        }
        EmbeddedGraph::new(vertices, edges, rotation, None).unwrap()
    }

    #[test]
    fn three_star_is_a_channel_diagram() {
        let rep = validate_abstract_channel_diagram(&star(3, &[1, 2, 3]));
        assert!(rep.overall, "{rep:?}");
        assert_eq!(rep.degree, Some(3));
    }

    #[test]
    fn adjacent_parallel_edges_fail_condition_four() {
        let rep = validate_abstract_channel_diagram(&star(3, &[1, 1, 2, 3]));
        assert_eq!(rep.failed(), vec!["4-parallel-edges"]);
    }

    #[test]
    fn separated_parallel_edges_pass() {
        let rep = validate_abstract_channel_diagram(&star(3, &[1, 2, 1, 3]));
        assert!(rep.overall, "{rep:?}");
    }

    #[test]
    fn edge_between_leaves_fails_condition_two() {
        let vertices = (0..4).map(|i| vertex(i, if i == 0 { VertexKind::Infinity } else { VertexKind::Root })).collect();
        let edges = vec![edge(0, 1, 0), edge(1, 2, 0), edge(2, 3, 0), edge(3, 1, 2)];
        let rotation = vec![
            vec![EdgeEnd::new(0, Side::To), EdgeEnd::new(1, Side::To), EdgeEnd::new(2, Side::To)],
            vec![EdgeEnd::new(0, Side::From), EdgeEnd::new(3, Side::From)],
            vec![EdgeEnd::new(1, Side::From), EdgeEnd::new(3, Side::To)],
            vec![EdgeEnd::new(2, Side::From)],
        ];
        let g = EmbeddedGraph::new(vertices, edges, rotation, None).unwrap();
        let rep = validate_abstract_channel_diagram(&g);
        assert!(rep.failed().contains(&"2-star"), "{rep:?}");
    }

    #[test]
    fn too_many_edges_fail_condition_one() {
        let rep = validate_abstract_channel_diagram(&star(3, &[1, 2, 3, 1, 2]));
        assert!(rep.failed().contains(&"1-edge-bound"));
    }

    #[test]
    fn a_bare_channel_diagram_is_not_a_newton_graph() {
        let g = star(3, &[1, 2, 3]);
        let m = GraphMapRecord { local_degree: vec![1, 2, 2, 2], ..GraphMapRecord::identity(&g) };
        let rep = validate_abstract_newton_graph(&g, &m);
        assert!(!rep.overall);
        // the channel diagram may not be the whole graph
        assert!(rep.failed().contains(&"1-invariant-channel-diagram"));
    }

    #[test]
    fn non_graph_maps_fail_every_condition() {
        let g = star(3, &[1, 2, 3]);
        let mut m = GraphMapRecord::identity(&g);
        m.edge_map[0] = EdgeTarget::Vertex(0);
        let rep = validate_abstract_newton_graph(&g, &m);
        assert_eq!(rep.failed().len(), 7);
    }
}
