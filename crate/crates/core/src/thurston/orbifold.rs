use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::CheckedSub;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::planar_graph::{EmbeddedGraph, GraphMapRecord};

/// A finite marked set with a self-map and local degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldMapData {
    pub points: Vec<String>,
    pub map: Vec<usize>,
    pub degree: Vec<u32>,
}

impl OrbifoldMapData {
    pub fn new(points: Vec<String>, map: Vec<usize>, degree: Vec<u32>) -> Result<Self> {
        let n = points.len();
        if map.len() != n || degree.len() != n {
            return Err(Error::Input(format!("{n} points but {} images and {} degrees", map.len(), degree.len())));
        }
        if let Some(i) = map.iter().position(|&x| x >= n) {
            return Err(Error::Input(format!("{} maps outside the marked set", points[i])));
        }
        if let Some(i) = degree.iter().position(|&k| k == 0) {
            return Err(Error::Input(format!("{} has local degree 0", points[i])));
        }
        Ok(OrbifoldMapData { points, map, degree })
    }

    /// `{"points": [..], "map": {point: image}, "degree": {point: k}}`;
    /// points may be strings or numbers, and missing degrees are 1.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: String| Error::Input(format!("orbifold data: {m}"));
        let name = |x: &Value| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(bad(format!("point names must be strings or numbers, got {other}"))),
        };
        let points = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"points\"".into()))?
            .iter()
            .map(name)
            .collect::<Result<Vec<_>>>()?;
        let index = |s: &str| points.iter().position(|p| p == s).ok_or_else(|| bad(format!("unknown point {s}")));
        let map_obj = v.get("map").and_then(Value::as_object).ok_or_else(|| bad("missing \"map\"".into()))?;
        let mut map = vec![usize::MAX; points.len()];
        for (k, img) in map_obj {
            map[index(k)?] = index(&name(img)?)?;
        }
        if let Some(i) = map.iter().position(|&x| x == usize::MAX) {
            return Err(bad(format!("no image for {}", points[i])));
        }
        let mut degree = vec![1u32; points.len()];
        if let Some(obj) = v.get("degree").and_then(Value::as_object) {
            for (k, d) in obj {
                let d = d.as_u64().and_then(|d| u32::try_from(d).ok()).ok_or_else(|| bad(format!("bad degree at {k}")))?;
                degree[index(k)?] = d;
            }
        }
        OrbifoldMapData::new(points, map, degree)
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> =
            self.points.iter().zip(&self.map).map(|(p, &x)| (p.clone(), json!(self.points[x]))).collect();
        let degree: Map<String, Value> = self.points.iter().zip(&self.degree).map(|(p, &k)| (p.clone(), json!(k))).collect();
        json!({"points": self.points, "map": map, "degree": degree})
    }

    /// All vertices of a graph with its self-map, named `v<id>`.
    pub fn from_graph_map(g: &EmbeddedGraph, m: &GraphMapRecord) -> Result<Self> {
        let points = g.vertices.iter().map(|v| format!("v{}", v.id)).collect();
        OrbifoldMapData::new(points, m.vertex_map.clone(), m.local_degree.clone())
    }

    /// Forward orbits of the points of local degree above one.
    pub fn critical_orbits(&self) -> Result<Self> {
        let mut keep = vec![false; self.points.len()];
        for start in (0..self.points.len()).filter(|&i| self.degree[i] > 1) {
            let mut x = start;
            while !keep[x] {
                keep[x] = true;
                x = self.map[x];
            }
        }
        self.restrict(&keep)
    }

    /// The sub-marking on `keep`, which must be forward invariant.
    pub fn restrict(&self, keep: &[bool]) -> Result<Self> {
        let new_id: Vec<Option<usize>> = keep
            .iter()
            .scan(0, |next, &k| {
                Some(k.then(|| {
                    *next += 1;
                    *next - 1
                }))
            })
            .collect();
        let mut points = Vec::new();
        let mut map = Vec::new();
        let mut degree = Vec::new();
        for i in (0..self.points.len()).filter(|&i| keep[i]) {
            let img = new_id[self.map[i]]
                .ok_or_else(|| Error::Input(format!("the image of {} is not kept", self.points[i])))?;
            points.push(self.points[i].clone());
            map.push(img);
            degree.push(self.degree[i]);
        }
        OrbifoldMapData::new(points, map, degree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    /// `a` divides `b`, with infinity divisible by everything.
    pub fn divides(self, b: Weight) -> bool {
        match (self, b) {
            (_, Weight::Infinite) => true,
            (Weight::Infinite, Weight::Finite(_)) => false,
            (Weight::Finite(a), Weight::Finite(b)) => b % a == 0,
        }
    }

    pub fn times(self, k: u32) -> Weight {
        match self {
            Weight::Finite(a) => a.checked_mul(k as u64).map_or(Weight::Infinite, Weight::Finite),
            Weight::Infinite => Weight::Infinite,
        }
    }

    fn to_json(self) -> Value {
        match self {
            Weight::Finite(a) => json!(a),
            Weight::Infinite => json!("inf"),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(a) => write!(f, "{a}"),
            Weight::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldSignature {
    pub weights: Vec<Weight>,
    pub chi: Ratio<i128>,
    pub hyperbolic: bool,
}

impl OrbifoldSignature {
    pub fn chi_f64(&self) -> f64 {
        *self.chi.numer() as f64 / *self.chi.denom() as f64
    }

    pub fn to_json(&self, data: &OrbifoldMapData) -> Value {
        let v: Map<String, Value> = data.points.iter().zip(&self.weights).map(|(p, w)| (p.clone(), w.to_json())).collect();
        json!({
            "v": v,
            "chi": self.chi_f64(),
            "chi_exact": self.chi.to_string(),
            "hyperbolic": self.hyperbolic,
        })
    }
}

/// The smallest `v` with `v(g(y))` a multiple of `v(y) deg_y g`, and the
/// Euler characteristic of the orbifold.
pub fn orbifold_signature(data: &OrbifoldMapData) -> Result<OrbifoldSignature> {
    let n = data.points.len();
    let mut v = vec![Weight::Finite(1); n];

    // a cycle with a branched point forces unbounded weights on itself
    let mut seen = vec![false; n];
    for start in 0..n {
        let mut path = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            path.push(x);
            x = data.map[x];
        }
        if let Some(pos) = path.iter().position(|&y| y == x) {
            let cycle = &path[pos..];
            if cycle.iter().any(|&y| data.degree[y] > 1) {
                for &y in cycle {
                    v[y] = Weight::Infinite;
                }
            }
        }
    }

    let mut stable = false;
    for _ in 0..=2 * n + 1 {
        stable = true;
        for y in 0..n {
            let x = data.map[y];
            let need = v[y].times(data.degree[y]);
            let next = match (v[x], need) {
                (Weight::Infinite, _) => continue,
                (_, Weight::Infinite) => Weight::Infinite,
                (Weight::Finite(a), Weight::Finite(b)) => {
                    let l = a / a.gcd(&b);
                    l.checked_mul(b).map_or(Weight::Infinite, Weight::Finite)
                }
            };
            if next != v[x] {
                v[x] = next;
                stable = false;
            }
        }
        if stable {
            break;
        }
    }
    if !stable {
        return Err(Error::Convergence { reason: "orbifold weights did not stabilize".into(), estimate: f64::NAN });
    }

    let overflow = || Error::Input("orbifold characteristic overflows exact arithmetic".into());
    let mut chi = Ratio::from_integer(2i128);
    for w in &v {
        let term = match *w {
            Weight::Infinite => Ratio::from_integer(1),
            Weight::Finite(a) => Ratio::new(a as i128 - 1, a as i128),
        };
        chi = chi.checked_sub(&term).ok_or_else(overflow)?;
    }
    Ok(OrbifoldSignature { hyperbolic: chi < Ratio::from_integer(0), weights: v, chi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn data(map: &[usize], degree: &[u32]) -> OrbifoldMapData {
        let points = (0..map.len()).map(|i| format!("p{i}")).collect();
        OrbifoldMapData::new(points, map.to_vec(), degree.to_vec()).unwrap()
    }

    #[test]
    fn squaring_pattern_is_parabolic() {
        let s = orbifold_signature(&data(&[0, 1], &[2, 2])).unwrap();
        assert_eq!(s.weights, vec![Weight::Infinite, Weight::Infinite]);
        assert_eq!(s.chi, Ratio::from_integer(0));
        assert!(!s.hyperbolic);
    }

    #[test]
    fn unbranched_marking_has_trivial_weights() {
        let s = orbifold_signature(&data(&[1, 1], &[1, 1])).unwrap();
        assert_eq!(s.weights, vec![Weight::Finite(1), Weight::Finite(1)]);
        assert_eq!(s.chi, Ratio::from_integer(2));
        assert!(!s.hyperbolic);
    }

    #[test]
    fn unity_cubic_marking_is_hyperbolic() {
        // three fixed critical roots, the double pole 0 and infinity
        let s = orbifold_signature(&data(&[0, 1, 2, 4, 4], &[2, 2, 2, 2, 1])).unwrap();
        assert_eq!(s.weights[3], Weight::Finite(1));
        assert_eq!(s.weights[4], Weight::Finite(2));
        assert_eq!(s.chi, Ratio::new(-3, 2));
        assert!(s.hyperbolic);
    }

    #[test]
    fn chebyshev_like_pattern() {
        // c0 -> c1 -> p -> p with degree 2 at both critical points
        let s = orbifold_signature(&data(&[1, 2, 2], &[2, 2, 1])).unwrap();
        assert_eq!(s.weights, vec![Weight::Finite(1), Weight::Finite(2), Weight::Finite(4)]);
    }

    #[test]
    fn json_round_trip_and_restriction() {
        let v: Value = serde_json::from_str(
            r#"{"points": ["a", "b", 0], "map": {"a": "b", "b": "b", "0": "a"}, "degree": {"b": 2}}"#,
        )
        .unwrap();
        let d = OrbifoldMapData::from_json(&v).unwrap();
        assert_eq!(d.map, vec![1, 1, 0]);
        assert_eq!(d.degree, vec![1, 2, 1]);
        assert_eq!(OrbifoldMapData::from_json(&d.to_json()).unwrap(), d);
        assert_eq!(d.critical_orbits().unwrap().points, vec!["b".to_string()]);
        assert!(d.restrict(&[false, false, true]).is_err());
    }

    #[test]
    fn malformed_data_is_rejected() {
        let v: Value = serde_json::from_str(r#"{"points": ["a"], "map": {"a": "z"}}"#).unwrap();
        assert!(OrbifoldMapData::from_json(&v).is_err());
        let v: Value = serde_json::from_str(r#"{"points": ["a", "b"], "map": {"a": "a"}}"#).unwrap();
        assert!(OrbifoldMapData::from_json(&v).is_err());
    }

    fn instances(max: usize) -> impl Strategy<Value = OrbifoldMapData> {
        (1..=max).prop_flat_map(|n| {
            (proptest::collection::vec(0..n, n), proptest::collection::vec(1u32..=3, n))
                .prop_map(|(map, degree)| data(&map, &degree))
        })
    }

    fn valid(d: &OrbifoldMapData, v: &[Weight]) -> bool {
        (0..v.len()).all(|y| v[y].times(d.degree[y]).divides(v[d.map[y]]))
    }

    proptest! {
        #[test]
        fn weights_satisfy_divisibility(d in instances(8)) {
            let s = orbifold_signature(&d).unwrap();
            prop_assert!(valid(&d, &s.weights));
        }

        #[test]
        fn weights_are_minimal(d in instances(4)) {
            let s = orbifold_signature(&d).unwrap();
            let choices: Vec<Weight> = (1..=12).map(Weight::Finite).chain([Weight::Infinite]).collect();
            let n = d.points.len();
            let mut idx = vec![0usize; n];
            loop {
                let w: Vec<Weight> = idx.iter().map(|&i| choices[i]).collect();
                if valid(&d, &w) {
                    prop_assert!(s.weights.iter().zip(&w).all(|(a, b)| a.divides(*b)), "{:?} vs {:?}", s.weights, w);
                }
                let Some(k) = (0..n).find(|&k| idx[k] + 1 < choices.len()) else { break };
                idx[k] += 1;
                for i in idx.iter_mut().take(k) {
                    *i = 0;
                }
            }
        }

        #[test]
        fn three_fixed_branch_points_are_hyperbolic(mut d in instances(7)) {
            prop_assume!(d.points.len() >= 3);
            for i in 0..3 {
                d.map[i] = i;
                d.degree[i] = 2;
            }
            let s = orbifold_signature(&d).unwrap();
            prop_assert!(s.hyperbolic);
        }
    }
}
