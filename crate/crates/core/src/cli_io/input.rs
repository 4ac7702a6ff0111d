use std::path::Path;

use serde_json::Value;

use crate::complex_poly::{newton_map, newton_map_from_roots, Polynomial, RationalMap, RootSpec, SpecRoot};
use crate::error::{Error, Result};
use crate::planar_graph::io::complex_from_json;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(Error::from)
}

/// `{"roots": [{"re", "im", "mult"?}]}`
pub fn roots_from_json(v: &Value) -> Result<RootSpec> {
    let list = v
        .get("roots")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("root file needs a \"roots\" array".into()))?;
    let roots = list
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let z = complex_from_json(r, &format!("root {i}"))?;
            let mult = match r.get("mult") {
                None => 1,
                Some(m) => m
                    .as_u64()
                    .and_then(|m| u32::try_from(m).ok())
                    .ok_or_else(|| Error::Input(format!("root {i}: multiplicity must be a positive integer")))?,
            };
            Ok(SpecRoot { z, mult })
        })
        .collect::<Result<Vec<_>>>()?;
    RootSpec::new(roots)
}

/// `{"coeffs": [{"re", "im"}, ...]}` in ascending degree.
pub fn polynomial_from_json(v: &Value) -> Result<Polynomial> {
    let list = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("coefficient file needs a \"coeffs\" array".into()))?;
    let coeffs = list
        .iter()
        .enumerate()
        .map(|(i, c)| complex_from_json(c, &format!("coefficient {i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

#[derive(Clone, Debug)]
pub enum MapSource {
    Roots(RootSpec),
    Coeffs(Polynomial),
}

impl MapSource {
    pub fn from_files(roots: Option<&Path>, coeffs: Option<&Path>) -> Result<Self> {
        match (roots, coeffs) {
            (Some(r), None) => Ok(MapSource::Roots(roots_from_json(&read_json(r)?)?)),
            (None, Some(c)) => Ok(MapSource::Coeffs(polynomial_from_json(&read_json(c)?)?)),
            _ => Err(Error::Input("give exactly one of --roots and --coeffs".into())),
        }
    }

    /// The Newton map, refused below degree 3.
    pub fn newton_map(&self) -> Result<RationalMap> {
        let f = match self {
            MapSource::Roots(spec) => newton_map_from_roots(spec),
            MapSource::Coeffs(p) => newton_map(p)?,
        };
        if f.degree() < 3 {
            return Err(Error::NotNewtonMap {
                reason: format!("degree < 3 (the Newton map has degree {})", f.degree()),
                multiplier: None,
            });
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn roots_with_and_without_multiplicity() {
        let spec = roots_from_json(&json!({"roots": [{"re": 1, "im": 0}, {"re": 0, "im": 2, "mult": 3}]})).unwrap();
        assert_eq!(spec.degree(), 4);
        assert_eq!(spec.distinct_count(), 2);
        assert!(roots_from_json(&json!({"roots": [{"re": 1, "im": 0, "mult": 0}]})).is_err());
        assert!(roots_from_json(&json!({"zeros": []})).is_err());
    }

    #[test]
    fn degree_two_is_refused() {
        let src = MapSource::Roots(roots_from_json(&json!({"roots": [{"re": 1, "im": 0}, {"re": -1, "im": 0}]})).unwrap());
        let err = src.newton_map().unwrap_err();
        assert!(err.to_string().contains("degree < 3"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn coefficients_in_ascending_order() {
        let p = polynomial_from_json(&json!({"coeffs": [{"re": -1, "im": 0}, {"re": 0, "im": 0}, {"re": 0, "im": 0}, {"re": 1, "im": 0}]}))
            .unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(MapSource::Coeffs(p).newton_map().unwrap().degree(), 3);
    }
}
