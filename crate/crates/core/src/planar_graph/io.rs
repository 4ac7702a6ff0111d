//! Graph JSON and DOT formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::graph::{EdgeEnd, EdgeRecord, EmbeddedGraph, Side, VertexKind, VertexRecord};
use super::map::{EdgeTarget, GraphMapRecord};
use crate::complex_poly::SpherePoint;
use crate::error::{Error, Result};

pub fn complex_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn end_json(g: &EmbeddedGraph, end: EdgeEnd) -> Value {
    let e = &g.edges[end.edge];
    if e.from == e.to {
        let side = if end.side == Side::From { "from" } else { "to" };
        json!({"edge": end.edge, "end": side})
    } else {
        json!(end.edge)
    }
}

/// Graph (and optional map) in the graph JSON schema.
pub fn graph_to_json(g: &EmbeddedGraph, map: Option<&GraphMapRecord>, with_geometry: bool) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| {
            let mut o = Map::new();
            o.insert("id".into(), json!(v.id));
            o.insert("kind".into(), json!(v.kind.name()));
            o.insert("level".into(), json!(v.level));
            if let Some(SpherePoint::Finite(z)) = v.position {
                o.insert("re".into(), json!(z.re));
                o.insert("im".into(), json!(z.im));
            }
            Value::Object(o)
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| {
            let mut o = Map::new();
            o.insert("id".into(), json!(e.id));
            o.insert("from".into(), json!(e.from));
            o.insert("to".into(), json!(e.to));
            o.insert("level".into(), json!(e.level));
            if let (true, Some(geo)) = (with_geometry, &g.geometry) {
                o.insert("points".into(), Value::Array(geo[e.id].iter().map(|&z| complex_json(z)).collect()));
            }
            Value::Object(o)
        })
        .collect();
    let rotation: Map<String, Value> = g
        .rotation
        .iter()
        .enumerate()
        .map(|(v, rot)| (v.to_string(), Value::Array(rot.iter().map(|&end| end_json(g, end)).collect())))
        .collect();
    let mut out = Map::new();
    out.insert("vertices".into(), Value::Array(vertices));
    out.insert("edges".into(), Value::Array(edges));
    out.insert("rotation".into(), Value::Object(rotation));
    if let Some(m) = map {
        out.insert("map".into(), map_to_json(m));
    }
    Value::Object(out)
}

pub fn map_to_json(m: &GraphMapRecord) -> Value {
    let vertices: Map<String, Value> = m.vertex_map.iter().enumerate().map(|(i, &y)| (i.to_string(), json!(y))).collect();
    let edges: Map<String, Value> = m
        .edge_map
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let v = match *t {
                EdgeTarget::Edge { edge, reversed } => json!({"edge": edge, "reversed": reversed}),
                EdgeTarget::Vertex(y) => json!({ "vertex": y }),
            };
            (i.to_string(), v)
        })
        .collect();
    let degrees: Map<String, Value> =
        m.local_degree.iter().enumerate().map(|(i, &k)| (i.to_string(), json!(k))).collect();
    json!({"vertices": vertices, "edges": edges, "local_degree": degrees})
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn get_usize(o: &Value, key: &str, ctx: &str) -> Result<usize> {
    o.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| input(format!("{ctx}: missing or non-integer \"{key}\"")))
}

fn get_f64(o: &Value, key: &str, ctx: &str) -> Result<f64> {
    o.get(key).and_then(Value::as_f64).ok_or_else(|| input(format!("{ctx}: missing or non-numeric \"{key}\"")))
}

pub fn complex_from_json(o: &Value, ctx: &str) -> Result<Complex64> {
    Ok(Complex64::new(get_f64(o, "re", ctx)?, get_f64(o, "im", ctx)?))
}

/// Objects keyed by decimal ids, read into a dense vector.
fn keyed<T>(v: &Value, n: usize, what: &str, read: impl Fn(&Value, &str) -> Result<T>) -> Result<Vec<T>> {
    let obj = v.as_object().ok_or_else(|| input(format!("{what} must be an object keyed by id")))?;
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    for (k, val) in obj {
        let i: usize = k.parse().map_err(|_| input(format!("{what}: key \"{k}\" is not an id")))?;
        if i >= n {
            return Err(input(format!("{what}: id {i} out of range")));
        }
        slots[i] = Some(read(val, &format!("{what}[{k}]"))?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| input(format!("{what}: no entry for id {i}"))))
        .collect()
}

fn sorted_by_id(items: &[Value], what: &str) -> Result<Vec<Value>> {
    let mut with_ids: Vec<(usize, Value)> =
        items.iter().map(|o| Ok((get_usize(o, "id", what)?, o.clone()))).collect::<Result<_>>()?;
    with_ids.sort_by_key(|(id, _)| *id);
    Ok(with_ids.into_iter().map(|(_, o)| o).collect())
}

/// Reads the graph JSON schema; the map is returned when present.
pub fn graph_from_json(v: &Value) -> Result<(EmbeddedGraph, Option<GraphMapRecord>)> {
    let vertices_json = v.get("vertices").and_then(Value::as_array).ok_or_else(|| input("missing \"vertices\" array"))?;
    let edges_json = v.get("edges").and_then(Value::as_array).ok_or_else(|| input("missing \"edges\" array"))?;
    let vertices = sorted_by_id(vertices_json, "vertex")?
        .iter()
        .map(|o| {
            let id = get_usize(o, "id", "vertex")?;
            let ctx = format!("vertex {id}");
            let kind_name = o.get("kind").and_then(Value::as_str).ok_or_else(|| input(format!("{ctx}: missing \"kind\"")))?;
            let kind = VertexKind::parse(kind_name).ok_or_else(|| input(format!("{ctx}: unknown kind \"{kind_name}\"")))?;
            let level = o.get("level").and_then(Value::as_u64).unwrap_or(0) as usize;
            let position = match (o.get("re"), kind) {
                (Some(_), _) => Some(SpherePoint::Finite(complex_from_json(o, &ctx)?)),
                (None, VertexKind::Infinity) => Some(SpherePoint::Infinity),
                (None, _) => None,
            };
            Ok(VertexRecord { id, kind, position, level })
        })
        .collect::<Result<Vec<_>>>()?;
    let sorted_edges = sorted_by_id(edges_json, "edge")?;
    let edges = sorted_edges
        .iter()
        .map(|o| {
            Ok(EdgeRecord {
                id: get_usize(o, "id", "edge")?,
                from: get_usize(o, "from", "edge")?,
                to: get_usize(o, "to", "edge")?,
                level: o.get("level").and_then(Value::as_u64).unwrap_or(0) as usize,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let geometry = if sorted_edges.iter().all(|o| o.get("points").is_some()) && !sorted_edges.is_empty() {
        Some(
            sorted_edges
                .iter()
                .map(|o| {
                    o["points"]
                        .as_array()
                        .ok_or_else(|| input("edge points must be an array"))?
                        .iter()
                        .map(|p| complex_from_json(p, "edge point"))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let n = vertices.len();
    let rotation = match v.get("rotation") {
        Some(r) => keyed(r, n, "rotation", |list, ctx| {
            let v: usize = ctx.trim_start_matches("rotation[").trim_end_matches(']').parse().unwrap_or(usize::MAX);
            list.as_array()
                .ok_or_else(|| input(format!("{ctx} must be an array")))?
                .iter()
                .map(|item| parse_end(item, v, &edges, ctx))
                .collect()
        })?,
        None => return Err(input("missing \"rotation\"")),
    };
    let graph = EmbeddedGraph::new(vertices, edges, rotation, geometry)?;
    let map = match v.get("map") {
        Some(m) => Some(map_from_json(m, &graph)?),
        None => None,
    };
    Ok((graph, map))
}

fn parse_end(item: &Value, v: usize, edges: &[EdgeRecord], ctx: &str) -> Result<EdgeEnd> {
    if let Some(e) = item.as_u64() {
        let e = e as usize;
        let rec = edges.get(e).ok_or_else(|| input(format!("{ctx}: unknown edge {e}")))?;
        if rec.from == rec.to {
            return Err(input(format!("{ctx}: loop edge {e} needs an explicit end")));
        }
        let side = if rec.from == v { Side::From } else { Side::To };
        return Ok(EdgeEnd::new(e, side));
    }
    let e = get_usize(item, "edge", ctx)?;
    let side = match item.get("end").and_then(Value::as_str) {
        Some("from") => Side::From,
        Some("to") => Side::To,
        _ => return Err(input(format!("{ctx}: edge end must be \"from\" or \"to\""))),
    };
    Ok(EdgeEnd::new(e, side))
}

pub fn map_from_json(m: &Value, g: &EmbeddedGraph) -> Result<GraphMapRecord> {
    let vertex_map = keyed(
        m.get("vertices").ok_or_else(|| input("map: missing \"vertices\""))?,
        g.vertex_count(),
        "map.vertices",
        |x, ctx| x.as_u64().map(|y| y as usize).ok_or_else(|| input(format!("{ctx} must be a vertex id"))),
    )?;
    let edge_map = keyed(
        m.get("edges").ok_or_else(|| input("map: missing \"edges\""))?,
        g.edge_count(),
        "map.edges",
        |x, ctx| {
            if let Some(y) = x.get("vertex") {
                let y = y.as_u64().ok_or_else(|| input(format!("{ctx}: vertex must be an id")))?;
                return Ok(EdgeTarget::Vertex(y as usize));
            }
            Ok(EdgeTarget::Edge {
                edge: get_usize(x, "edge", ctx)?,
                reversed: x.get("reversed").and_then(Value::as_bool).unwrap_or(false),
            })
        },
    )?;
    let local_degree = keyed(
        m.get("local_degree").ok_or_else(|| input("map: missing \"local_degree\""))?,
        g.vertex_count(),
        "map.local_degree",
        |x, ctx| x.as_u64().map(|k| k as u32).ok_or_else(|| input(format!("{ctx} must be an integer"))),
    )?;
    Ok(GraphMapRecord { vertex_map, edge_map, local_degree })
}

/// DOT rendering; each edge carries the rotation slots of its two ends.
pub fn graph_to_dot(g: &EmbeddedGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {name} {{");
    for v in &g.vertices {
        let label = match v.position {
            Some(SpherePoint::Finite(z)) => format!("{} {}\\n{:.6}{:+.6}i", v.kind.name(), v.id, z.re, z.im),
            _ => format!("{} {}", v.kind.name(), v.id),
        };
        let _ = writeln!(out, "  v{} [kind=\"{}\", level={}, label=\"{}\"];", v.id, v.kind.name(), v.level, label);
    }
    for e in &g.edges {
        let from_slot = g.slot(EdgeEnd::new(e.id, Side::From)).1;
        let to_slot = g.slot(EdgeEnd::new(e.id, Side::To)).1;
        let _ = writeln!(
            out,
            "  v{} -- v{} [id={}, level={}, from_slot={}, to_slot={}];",
            e.from, e.to, e.id, e.level, from_slot, to_slot
        );
    }
    out.push_str("}\n");
    out
}

/// Rotation as plain edge lists, for reports.
pub fn rotation_summary(g: &EmbeddedGraph) -> BTreeMap<usize, Vec<usize>> {
    g.rotation.iter().enumerate().map(|(v, rot)| (v, rot.iter().map(|e| e.edge).collect())).collect()
}
