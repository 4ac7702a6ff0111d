use num_complex::Complex64;

use super::critical::critical_locations;
use super::fixed::{fixed_point_records, FixedClass, FixedPointRecord};
use crate::complex_poly::{MultipleRoot, RationalMap, RootOptions, SpherePoint};
use crate::error::Result;
use crate::tolerance::Tolerances;

/// Fixed points, critical points and poles of a map, computed once.
#[derive(Clone, Debug)]
pub struct MapAnalysis {
    pub map: RationalMap,
    pub tol: Tolerances,
    pub fixed: Vec<FixedPointRecord>,
    pub critical: Vec<(SpherePoint, u32)>,
    pub poles: Vec<MultipleRoot>,
}

impl MapAnalysis {
    pub fn new(map: &RationalMap, tol: &Tolerances) -> Result<Self> {
        Ok(MapAnalysis {
            fixed: fixed_point_records(map, tol)?,
            critical: critical_locations(map)?,
            poles: map.poles(&RootOptions::default())?,
            map: map.clone(),
            tol: *tol,
        })
    }

    /// Local degree of the map at `p` (1 away from critical points).
    pub fn local_degree_at(&self, p: SpherePoint) -> u32 {
        self.critical
            .iter()
            .find(|(c, _)| same_point(c, &p, self.tol.merge))
            .map_or(1, |(_, k)| *k)
    }

    /// Indices of the finite superattracting fixed points.
    pub fn superattracting_roots(&self) -> Vec<usize> {
        self.fixed
            .iter()
            .enumerate()
            .filter(|(_, r)| r.class == FixedClass::Superattracting && r.location.finite().is_some())
            .map(|(i, _)| i)
            .collect()
    }

    /// Distance from `z` to the nearest other finite fixed point or pole.
    pub fn separation(&self, z: Complex64) -> f64 {
        let fixed = self.fixed.iter().filter_map(|r| r.location.finite());
        let poles = self.poles.iter().map(|p| p.z);
        fixed
            .chain(poles)
            .map(|w| (w - z).norm())
            .filter(|&d| d > self.tol.merge * z.norm().max(1.0))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Points agree within `tol`, relative for finite points and chordal otherwise.
pub fn same_point(a: &SpherePoint, b: &SpherePoint, tol: f64) -> bool {
    match (a, b) {
        (SpherePoint::Finite(x), SpherePoint::Finite(y)) => (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0),
        _ => a.chordal_distance(b) <= tol,
    }
}
