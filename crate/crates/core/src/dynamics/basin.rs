use num_complex::Complex64;

use super::fixed::fixed_point_records;
use crate::complex_poly::{RationalMap, SpherePoint};
use crate::error::Result;
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasinVerdict {
    /// `root` indexes the fixed-point records of the map.
    Converges { root: usize, iterations: usize },
    Escapes { iterations: usize },
    Undecided,
}

/// Precomputed attracting fixed points for repeated basin queries.
#[derive(Clone, Debug)]
pub struct BasinClassifier {
    map: RationalMap,
    attractors: Vec<(usize, Complex64)>,
    tol: Tolerances,
}

impl BasinClassifier {
    pub fn new(f: &RationalMap, tol: &Tolerances) -> Result<Self> {
        let attractors = fixed_point_records(f, tol)?
            .iter()
            .enumerate()
            .filter(|(_, r)| r.multiplier.norm() < 1.0)
            .filter_map(|(i, r)| r.location.finite().map(|z| (i, z)))
            .collect();
        Ok(BasinClassifier { map: f.clone(), attractors, tol: *tol })
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn classify(&self, z: SpherePoint) -> BasinVerdict {
        self.classify_with_cap(z, self.tol.max_iterations)
    }

    pub fn classify_with_cap(&self, z: SpherePoint, max_iterations: usize) -> BasinVerdict {
        let mut z = match z {
            SpherePoint::Infinity => return BasinVerdict::Escapes { iterations: 0 },
            SpherePoint::Finite(z) => z,
        };
        let num = self.map.num();
        let den = self.map.den();
        for it in 0..=max_iterations {
            if !z.is_finite() || z.norm() > self.tol.escape_radius {
                return BasinVerdict::Escapes { iterations: it };
            }
            for &(root, xi) in &self.attractors {
                if (z - xi).norm() < self.tol.eps_fix * xi.norm().max(1.0) {
                    return BasinVerdict::Converges { root, iterations: it };
                }
            }
            if it == max_iterations {
                break;
            }
            let d = den.eval(z);
            if d == Complex64::new(0.0, 0.0) {
                return BasinVerdict::Escapes { iterations: it + 1 };
            }
            z = num.eval(z) / d;
        }
        BasinVerdict::Undecided
    }
}

/// Which attracting basin, if any, the orbit of `z` enters.
pub fn basin_index(f: &RationalMap, z: SpherePoint, tol: &Tolerances) -> Result<BasinVerdict> {
    Ok(BasinClassifier::new(f, tol)?.classify(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_poly::{newton_map, Polynomial};

    fn cubic() -> RationalMap {
        newton_map(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap()
    }

    fn at(re: f64, im: f64) -> SpherePoint {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    #[test]
    fn real_axis_right_of_one_converges_to_one() {
        let tol = Tolerances::default();
        // records are ordered lexicographically, so 1 is index 2
        match basin_index(&cubic(), at(2.0, 0.0), &tol).unwrap() {
            BasinVerdict::Converges { root, iterations } => {
                assert_eq!(root, 2);
                assert!(iterations > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fixed_root_converges_immediately() {
        let v = basin_index(&cubic(), at(1.0, 0.0), &Tolerances::default()).unwrap();
        assert_eq!(v, BasinVerdict::Converges { root: 2, iterations: 0 });
    }

    #[test]
    fn pole_escapes_in_one_step() {
        let v = basin_index(&cubic(), at(0.0, 0.0), &Tolerances::default()).unwrap();
        assert_eq!(v, BasinVerdict::Escapes { iterations: 1 });
    }

    #[test]
    fn zero_cap_is_undecided_away_from_roots() {
        let c = BasinClassifier::new(&cubic(), &Tolerances::default()).unwrap();
        assert_eq!(c.classify_with_cap(at(2.0, 0.0), 0), BasinVerdict::Undecided);
    }
}
