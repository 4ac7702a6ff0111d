use num_complex::Complex64;

use super::roots::{roots_with_multiplicity, RootOptions};
use super::{Polynomial, RationalMap};
use crate::error::{Error, Result};

/// One root location with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecRoot {
    pub z: Complex64,
    pub mult: u32,
}

impl SpecRoot {
    pub fn simple(z: Complex64) -> Self {
        SpecRoot { z, mult: 1 }
    }
}

/// Pairwise distinct root locations with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSpec {
    roots: Vec<SpecRoot>,
}

/// Two locations closer than this (relative to `max(1, |z|)`) are duplicates.
const DISTINCT_TOL: f64 = 1e-7;

impl RootSpec {
    pub fn new(roots: Vec<SpecRoot>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidSpec("no roots given".into()));
        }
        for (i, r) in roots.iter().enumerate() {
            if r.mult == 0 {
                return Err(Error::InvalidSpec(format!("root {i} has multiplicity 0")));
            }
            if !r.z.is_finite() {
                return Err(Error::InvalidSpec(format!("root {i} is not finite")));
            }
            for (j, s) in roots.iter().enumerate().skip(i + 1) {
                let scale = r.z.norm().max(s.z.norm()).max(1.0);
                if (r.z - s.z).norm() <= DISTINCT_TOL * scale {
                    return Err(Error::InvalidSpec(format!("roots {i} and {j} coincide")));
                }
            }
        }
        Ok(RootSpec { roots })
    }

    /// All roots simple.
    pub fn simple(points: &[Complex64]) -> Result<Self> {
        Self::new(points.iter().map(|&z| SpecRoot::simple(z)).collect())
    }

    /// Roots of `p`, with numerically split multiple roots merged.
    pub fn from_polynomial(p: &Polynomial, opts: &RootOptions) -> Result<Self> {
        if p.degree() == 0 {
            return Err(Error::DegenerateMap("constant polynomial has no roots".into()));
        }
        let roots = roots_with_multiplicity(p, opts)?
            .into_iter()
            .map(|r| SpecRoot { z: r.z, mult: r.mult })
            .collect();
        Ok(RootSpec { roots })
    }

    pub fn roots(&self) -> &[SpecRoot] {
        &self.roots
    }

    /// Degree of the induced polynomial.
    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|r| r.mult).sum()
    }

    pub fn distinct_count(&self) -> usize {
        self.roots.len()
    }
}

/// Monic polynomial with the given root multiset.
pub fn polynomial_from_roots(spec: &RootSpec) -> Polynomial {
    spec.roots.iter().fold(Polynomial::one(), |acc, r| {
        (0..r.mult).fold(acc, |acc, _| &acc * &Polynomial::linear_factor(r.z))
    })
}

/// The Newton map of `prod (z - z_i)^{m_i}` in reduced form.
///
/// With `q = prod (z - z_i)` and `r = sum m_i prod_{j != i} (z - z_j)` one has
/// `p'/p = r/q`, so the map is `(z r - q) / r` and its degree is the number of
/// distinct roots.
pub fn newton_map_from_roots(spec: &RootSpec) -> RationalMap {
    let locations: Vec<Complex64> = spec.roots.iter().map(|r| r.z).collect();
    let q = Polynomial::from_linear_factors(&locations);
    let r = spec.roots.iter().enumerate().fold(Polynomial::zero(), |acc, (i, root)| {
        let others = locations.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, z)| z);
        let term = Polynomial::from_linear_factors(others).scale(Complex64::new(root.mult as f64, 0.0));
        &acc + &term
    });
    let num = &(&Polynomial::z() * &r) - &q;
    RationalMap::from_reduced(num, r)
}

/// Newton map `z - p(z)/p'(z)` of a coefficient polynomial.
///
/// Polynomials of degree 2 still produce a map, of degree below 3; callers
/// that need a genuine Newton map check the degree (see
/// [`crate::dynamics::is_newton_map`]).
pub fn newton_map(p: &Polynomial) -> Result<RationalMap> {
    if p.degree() <= 1 {
        return Err(Error::DegenerateMap(format!(
            "Newton map of a degree-{} polynomial is constant or undefined",
            p.degree()
        )));
    }
    let spec = RootSpec::from_polynomial(p, &RootOptions::default())?;
    Ok(newton_map_from_roots(&spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Polynomial, b: &Polynomial, tol: f64) -> bool {
        a.degree() == b.degree()
            && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).norm() < tol)
    }

    fn unity(d: usize) -> Vec<Complex64> {
        (0..d)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64))
            .collect()
    }

    #[test]
    fn cube_roots_of_unity_expand_to_z3_minus_1() {
        let p = polynomial_from_roots(&RootSpec::simple(&unity(3)).unwrap());
        assert!(close(&p, &Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), 1e-15));
    }

    #[test]
    fn double_root_expansion() {
        // (z-1)^2 (z+1) = z^3 - z^2 - z + 1, expanded by hand
        let spec = RootSpec::new(vec![SpecRoot { z: c(1.0, 0.0), mult: 2 }, SpecRoot::simple(c(-1.0, 0.0))])
            .unwrap();
        let p = polynomial_from_roots(&spec);
        assert_eq!(p, Polynomial::from_real(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn single_root_at_origin() {
        let p = polynomial_from_roots(&RootSpec::simple(&[c(0.0, 0.0)]).unwrap());
        assert_eq!(p, Polynomial::z());
    }

    #[test]
    fn duplicate_locations_rejected() {
        let err = RootSpec::simple(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn newton_map_of_z3_minus_1() {
        // z - (z^3-1)/(3z^2) = (2z^3+1)/(3z^2)
        let f = newton_map(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
        let scale = Complex64::new(3.0, 0.0) / f.den().leading();
        assert!(close(&f.num().scale(scale), &Polynomial::from_real(&[1.0, 0.0, 0.0, 2.0]), 1e-12));
        assert!(close(&f.den().scale(scale), &Polynomial::from_real(&[0.0, 0.0, 3.0]), 1e-12));
        assert_eq!(f.degree(), 3);
    }

    #[test]
    fn multiple_root_lowers_degree() {
        // (z-1)^2 (z+1) has two distinct roots
        let f = newton_map(&Polynomial::from_real(&[1.0, -1.0, -1.0, 1.0])).unwrap();
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn quadratic_is_constructed_with_low_degree() {
        let f = newton_map(&Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        assert!(f.degree() < 3);
    }

    #[test]
    fn linear_input_is_degenerate() {
        assert!(matches!(
            newton_map(&Polynomial::from_real(&[1.0, 1.0])),
            Err(Error::DegenerateMap(_))
        ));
    }
}
