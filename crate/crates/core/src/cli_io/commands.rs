use std::path::Path;

use serde_json::{json, Value};

use super::json::canonical_json;
use crate::complex_poly::{RationalMap, SpherePoint};
use crate::dynamics::{
    is_newton_map, is_postcritically_fixed, Fate, FixedPointRecord, LawIndex, MapAnalysis, RayOptions,
};
use crate::error::{Error, Result};
use crate::newton_graph::{
    channel_diagram, face_pole_census, newton_graph_level, validate_abstract_newton_graph, NewtonGraphRun,
    ValidationReport,
};
use crate::planar_graph::io::{complex_json, graph_from_json, graph_to_dot, graph_to_json};
use crate::planar_graph::{find_equivalences, Witness};
use crate::thurston::{
    obstruction_verdict, orbifold_signature, thurston_matrix, LiftData, NonnegMatrix, ObstructionReport,
    OrbifoldMapData, OrbifoldSignature,
};
use crate::tolerance::Tolerances;

pub fn point_json(p: SpherePoint) -> Value {
    match p {
        SpherePoint::Finite(z) => complex_json(z),
        SpherePoint::Infinity => json!("inf"),
    }
}

fn fixed_json(r: &FixedPointRecord) -> Value {
    let law = match r.index {
        LawIndex::Root(m) => json!(m),
        LawIndex::Infinity => json!("inf"),
        LawIndex::Violated => Value::Null,
    };
    json!({
        "location": point_json(r.location),
        "multiplier": complex_json(r.multiplier),
        "class": r.class.name(),
        "law_index": law,
    })
}

/// Fixed points, critical orbits and the postcritically fixed verdict.
pub fn cmd_analyze(f: &RationalMap, tol: &Tolerances) -> Result<Value> {
    let newton = is_newton_map(f, tol);
    if !newton.is_newton {
        return Err(Error::NotNewtonMap { reason: newton.diagnostics.join("; "), multiplier: None });
    }
    let pcf = is_postcritically_fixed(f, tol.max_iterations, tol)?;
    let critical: Vec<Value> = pcf
        .critical
        .iter()
        .map(|c| {
            let fate = match c.fate {
                Fate::Lands { fixed_index, steps } => json!({"lands_on": fixed_index, "steps": steps}),
                Fate::Unresolved => json!("unresolved"),
            };
            let shown: Vec<Value> = c.orbit.iter().take(16).map(|p| point_json(*p)).collect();
            json!({
                "location": point_json(c.location),
                "local_degree": c.local_degree,
                "orbit": shown,
                "orbit_length": c.orbit.len(),
                "fate": fate,
            })
        })
        .collect();
    Ok(json!({
        "degree": f.degree(),
        "fixed_points": newton.fixed_points.iter().map(fixed_json).collect::<Vec<_>>(),
        "critical_points": critical,
        "postcritically_fixed": pcf.is_postcritically_fixed(),
        "landing_steps": pcf.landing_steps,
    }))
}

/// Everything written by the `newton-graph` command, as file name and contents.
#[derive(Clone, Debug)]
pub struct NewtonGraphOutput {
    pub run: NewtonGraphRun,
    pub files: Vec<(String, String)>,
    pub summary: Value,
}

pub fn cmd_newton_graph(f: &RationalMap, max_level: usize, tol: &Tolerances) -> Result<NewtonGraphOutput> {
    let run = newton_graph_level(f, max_level, tol)?;
    let mut files = Vec::new();
    for level in &run.levels {
        let mut g = graph_to_json(&level.graph, Some(&level.map), false);
        g["level"] = json!(level.n);
        files.push((format!("delta_{}.json", level.n), canonical_json(&g)));
        files.push((format!("delta_{}.dot", level.n), graph_to_dot(&level.graph, &format!("delta_{}", level.n))));
    }
    files.push(("validation.json".into(), canonical_json(&run.report.to_json())));
    let an = MapAnalysis::new(f, tol)?;
    let census = face_pole_census(&run.channel, &an)?;
    let levels: Vec<Value> = run
        .levels
        .iter()
        .map(|l| {
            json!({
                "n": l.n,
                "vertices": l.graph.vertex_count(),
                "edges": l.graph.edge_count(),
                "contains_all_poles": l.contains_all_poles,
                "contains_all_critical_points": l.contains_all_critical_points,
                "flagged_vertices": l.flagged,
            })
        })
        .collect();
    let faces: Vec<Value> = census
        .faces
        .iter()
        .map(|c| json!({"face": c.face, "poles": c.poles, "boundary_fixed": c.boundary_fixed}))
        .collect();
    let summary = json!({
        "degree": f.degree(),
        "n": run.n,
        "poles_level": run.poles_level,
        "levels": levels,
        "valid": run.report.overall,
        "channel_faces": faces,
        "face_law": census.satisfies_face_law(),
    });
    files.push(("summary.json".into(), canonical_json(&summary)));
    Ok(NewtonGraphOutput { run, files, summary })
}

pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// Channel diagram polylines, or the edges of a pullback level when it has
/// geometry.
pub fn overlay_lines(f: &RationalMap, level: usize, tol: &Tolerances) -> Result<Vec<Vec<num_complex::Complex64>>> {
    if level == 0 {
        let an = MapAnalysis::new(f, tol)?;
        let cd = channel_diagram(&an, &RayOptions::default())?;
        return Ok(cd.rays.into_iter().map(|r| r.points).collect());
    }
    let mut p = crate::newton_graph::Pullback::new(f, tol)?;
    while p.current().n < level {
        p.advance()?;
    }
    Ok(p.current().graph.geometry.clone().unwrap_or_default())
}

pub fn cmd_validate(graph: &Value) -> Result<ValidationReport> {
    let (g, m) = graph_from_json(graph)?;
    let m = m.ok_or_else(|| Error::Input("the graph file has no \"map\"".into()))?;
    Ok(validate_abstract_newton_graph(&g, &m))
}

pub fn witness_json(w: &Witness) -> Value {
    let edges: Vec<Value> = w.edge_map.iter().map(|&(e, rev)| json!({"edge": e, "reversed": rev})).collect();
    json!({"vertices": w.vertex_map, "edges": edges})
}

pub fn cmd_equivalence(a: &Value, b: &Value) -> Result<Vec<Witness>> {
    let (g1, m1) = graph_from_json(a)?;
    let (g2, m2) = graph_from_json(b)?;
    let (m1, m2) = match (m1, m2) {
        (Some(m1), Some(m2)) => (m1, m2),
        _ => return Err(Error::Input("both graph files need a \"map\"".into())),
    };
    Ok(find_equivalences(&g1, &m1, &g2, &m2))
}

/// Lift data, or a matrix given directly.
pub fn cmd_thurston(v: &Value) -> Result<ObstructionReport> {
    let m = if v.get("lifts").is_some() { thurston_matrix(&LiftData::from_json(v)?)? } else { NonnegMatrix::from_json(v)? };
    obstruction_verdict(&m)
}

pub fn cmd_orbifold(v: &Value) -> Result<(OrbifoldMapData, OrbifoldSignature)> {
    let data = OrbifoldMapData::from_json(v)?;
    let sig = orbifold_signature(&data)?;
    Ok((data, sig))
}
