use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// One preimage component of a curve: the curve it is isotopic to, if any,
/// and the degree of the map restricted to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftComponent {
    pub target: Option<usize>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftDatum {
    pub source: usize,
    pub components: Vec<LiftComponent>,
}

/// Lifts of every curve of a multicurve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftData {
    pub curves: usize,
    pub lifts: Vec<LiftDatum>,
}

impl LiftData {
    /// `{"curves": n, "lifts": [{"source": i, "components": [{"target": j | null, "degree": k}]}]}`
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Input(format!("lift data: {m}"));
        let curves = v.get("curves").and_then(Value::as_u64).ok_or_else(|| bad("missing \"curves\""))? as usize;
        let lifts = v.get("lifts").and_then(Value::as_array).ok_or_else(|| bad("missing \"lifts\""))?;
        let lifts = lifts
            .iter()
            .map(|l| {
                let source = l.get("source").and_then(Value::as_u64).ok_or_else(|| bad("lift without \"source\""))?;
                let comps = l.get("components").and_then(Value::as_array).ok_or_else(|| bad("lift without \"components\""))?;
                let components = comps
                    .iter()
                    .map(|c| {
                        let target = match c.get("target") {
                            None | Some(Value::Null) => None,
                            Some(t) => Some(t.as_u64().ok_or_else(|| bad("target must be an index or null"))? as usize),
                        };
                        let degree = c.get("degree").and_then(Value::as_u64).ok_or_else(|| bad("component without \"degree\""))?;
                        let degree = u32::try_from(degree).map_err(|_| bad("degree too large"))?;
                        Ok(LiftComponent { target, degree })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(LiftDatum { source: source as usize, components })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LiftData { curves, lifts })
    }

    pub fn to_json(&self) -> Value {
        let lifts: Vec<Value> = self
            .lifts
            .iter()
            .map(|l| {
                let comps: Vec<Value> =
                    l.components.iter().map(|c| json!({"target": c.target, "degree": c.degree})).collect();
                json!({"source": l.source, "components": comps})
            })
            .collect();
        json!({"curves": self.curves, "lifts": lifts})
    }

    /// Curves whose full preimage does not have total degree `d`.
    pub fn degree_mismatches(&self, d: u32) -> Vec<usize> {
        (0..self.curves)
            .filter(|&i| {
                let total: u64 = self
                    .lifts
                    .iter()
                    .filter(|l| l.source == i)
                    .flat_map(|l| &l.components)
                    .map(|c| c.degree as u64)
                    .sum();
                total != d as u64
            })
            .collect()
    }
}

/// Square matrix with nonnegative entries, with labels for its rows.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegMatrix {
    pub labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl NonnegMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Input(format!("row {i} has {} entries, expected {n}", r.len())));
            }
            if let Some(x) = r.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return Err(Error::Input(format!("row {i} has the entry {x}; entries must be finite and nonnegative")));
            }
        }
        let labels = (0..n).map(|i| format!("gamma{i}")).collect();
        Ok(NonnegMatrix { labels, rows })
    }

    pub fn zeros(n: usize) -> Self {
        NonnegMatrix::new(vec![vec![0.0; n]; n]).expect("zero matrix")
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        NonnegMatrix::new(self.rows.iter().map(|r| r.iter().map(|x| c * x).collect()).collect())
    }

    /// A bare array of rows, or an object with a `"matrix"` member.
    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.get("matrix").unwrap_or(v);
        let rows = rows.as_array().ok_or_else(|| Error::Input("matrix must be an array of rows".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Input("matrix rows must be arrays".into()))?
                    .iter()
                    .map(|x| x.as_f64().ok_or_else(|| Error::Input("matrix entries must be numbers".into())))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        NonnegMatrix::new(rows)
    }

    pub fn to_json(&self) -> Value {
        json!({"labels": self.labels, "matrix": self.rows})
    }

    fn support(&self) -> DiGraph<(), ()> {
        let n = self.size();
        let mut g = DiGraph::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for i in 0..n {
            for j in 0..n {
                if self.rows[i][j] > 0.0 {
                    g.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        g
    }
}

/// `M[j][i]` is the sum of `1/k` over the components of the preimage of
/// curve `i` isotopic to curve `j`, mapped with degree `k`.
pub fn thurston_matrix(data: &LiftData) -> Result<NonnegMatrix> {
    let n = data.curves;
    let mut m = NonnegMatrix::zeros(n);
    for l in &data.lifts {
        if l.source >= n {
            return Err(Error::Input(format!("lift source {} but only {n} curves", l.source)));
        }
        for c in &l.components {
            if c.degree == 0 {
                return Err(Error::Input(format!("component of curve {} with degree 0", l.source)));
            }
            match c.target {
                Some(j) if j >= n => return Err(Error::Input(format!("lift target {j} but only {n} curves"))),
                Some(j) => m.rows[j][l.source] += 1.0 / c.degree as f64,
                None => {}
            }
        }
    }
    Ok(m)
}

/// Every ordered pair of indices is joined by a path in the support, where
/// a diagonal pair counts as joined by the empty path.
pub fn is_irreducible(m: &NonnegMatrix) -> bool {
    m.size() <= 1 || tarjan_scc(&m.support()).len() == 1
}

const EIGEN_TOL: f64 = 1e-12;
const EIGEN_MAX_ITER: usize = 200_000;

/// Spectral radius. The matrix splits into diagonal blocks along the
/// strongly connected components of its support; on each block the shifted
/// matrix `B + cI` is primitive, and power iteration is stopped once the
/// Collatz-Wielandt bounds agree.
pub fn leading_eigenvalue(m: &NonnegMatrix) -> Result<f64> {
    let mut best: f64 = 0.0;
    for comp in tarjan_scc(&m.support()) {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        let block: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| m.rows[i][j]).collect()).collect();
        best = best.max(irreducible_radius(&block)?);
    }
    Ok(best)
}

fn irreducible_radius(b: &[Vec<f64>]) -> Result<f64> {
    let n = b.len();
    if n == 1 {
        return Ok(b[0][0]);
    }
    let shift = (0..n).map(|j| (0..n).map(|i| b[i][j]).sum::<f64>()).fold(0.0, f64::max);
    if shift == 0.0 {
        return Ok(0.0);
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..EIGEN_MAX_ITER {
        for i in 0..n {
            y[i] = shift * x[i] + (0..n).map(|j| b[i][j] * x[j]).sum::<f64>();
        }
        lo = f64::INFINITY;
        hi = 0.0;
        for i in 0..n {
            let r = y[i] / x[i];
            lo = f64::min(lo, r);
            hi = f64::max(hi, r);
        }
        if hi - lo <= EIGEN_TOL * hi {
            return Ok(((lo + hi) / 2.0 - shift).max(0.0));
        }
        let s: f64 = y.iter().sum();
        for i in 0..n {
            x[i] = y[i] / s;
        }
    }
    Err(Error::Convergence {
        reason: format!("power iteration bounds still {lo} and {hi} apart after {EIGEN_MAX_ITER} steps"),
        estimate: (lo + hi) / 2.0 - shift,
    })
}

pub const OBSTRUCTION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub matrix: NonnegMatrix,
    pub eigenvalue: f64,
    pub irreducible: bool,
    pub obstruction_candidate: bool,
}

impl ObstructionReport {
    pub fn verdict(&self) -> &'static str {
        if self.obstruction_candidate {
            "obstruction candidate"
        } else {
            "no obstruction"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.matrix.to_json(),
            "eigenvalue": self.eigenvalue,
            "irreducible": self.irreducible,
            "verdict": self.verdict(),
        })
    }
}

/// An irreducible multicurve with leading eigenvalue at least one.
pub fn obstruction_verdict(m: &NonnegMatrix) -> Result<ObstructionReport> {
    let eigenvalue = leading_eigenvalue(m)?;
    let irreducible = is_irreducible(m);
    Ok(ObstructionReport {
        matrix: m.clone(),
        eigenvalue,
        irreducible,
        obstruction_candidate: irreducible && eigenvalue >= 1.0 - OBSTRUCTION_TOL,
    })
}
