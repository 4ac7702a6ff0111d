use std::cmp::Ordering;

use num_complex::Complex64;

use crate::complex_poly::roots::{roots_with_multiplicity, RootOptions};
use crate::complex_poly::{Polynomial, RationalMap, SpherePoint};
use crate::error::{Complex, Error, Result};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedClass {
    Superattracting,
    Attracting,
    Indifferent,
    Repelling,
}

impl FixedClass {
    pub fn name(&self) -> &'static str {
        match self {
            FixedClass::Superattracting => "superattracting",
            FixedClass::Attracting => "attracting",
            FixedClass::Indifferent => "indifferent",
            FixedClass::Repelling => "repelling",
        }
    }

    fn of(multiplier: Complex64, tol: f64) -> Self {
        let r = multiplier.norm();
        if r <= tol {
            FixedClass::Superattracting
        } else if r < 1.0 - tol {
            FixedClass::Attracting
        } else if r > 1.0 + tol {
            FixedClass::Repelling
        } else {
            FixedClass::Indifferent
        }
    }
}

/// The integer `m` with `f'(x) = (m-1)/m` at a finite fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawIndex {
    Root(u32),
    Infinity,
    /// No integer `m` matches the multiplier.
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointRecord {
    pub location: SpherePoint,
    pub multiplier: Complex64,
    pub index: LawIndex,
    pub class: FixedClass,
}

/// Sort key that is insensitive to last-bit noise in the coordinates.
pub(crate) fn canonical_cmp(a: Complex64, b: Complex64) -> Ordering {
    let q = |x: f64| (x * 1e7).round() as i64;
    (q(a.re), q(a.im)).cmp(&(q(b.re), q(b.im))).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im))
}

/// Fixed points of `f`: finite ones in canonical order, then `inf` if fixed.
pub fn fixed_points(f: &RationalMap) -> Result<Vec<SpherePoint>> {
    let g = (f.num() - &(&Polynomial::z() * f.den())).trim_relative(1e-14);
    if g.is_zero() {
        return Err(Error::DegenerateMap("identity map".into()));
    }
    let mut finite: Vec<Complex64> = if g.degree() == 0 {
        Vec::new()
    } else {
        roots_with_multiplicity(&g, &RootOptions::default())?.into_iter().map(|r| r.z).collect()
    };
    finite.sort_by(|a, b| canonical_cmp(*a, *b));
    let mut out: Vec<SpherePoint> = finite.into_iter().map(SpherePoint::Finite).collect();
    if f.num().degree() > f.den().degree() {
        out.push(SpherePoint::Infinity);
    }
    Ok(out)
}

fn law_index(multiplier: Complex64, tol: f64) -> LawIndex {
    let gap = Complex64::new(1.0, 0.0) - multiplier;
    if gap.norm() <= tol {
        return LawIndex::Violated;
    }
    let m = gap.inv().re.round();
    if m >= 1.0 && m <= u32::MAX as f64 {
        let expected = (m - 1.0) / m;
        if (multiplier - expected).norm() < tol {
            return LawIndex::Root(m as u32);
        }
    }
    LawIndex::Violated
}

/// Fixed-point records without enforcing the multiplier law.
pub fn fixed_point_records(f: &RationalMap, tol: &Tolerances) -> Result<Vec<FixedPointRecord>> {
    fixed_points(f)?
        .into_iter()
        .map(|p| {
            let multiplier = f.multiplier(p)?;
            let index = match p {
                SpherePoint::Infinity => LawIndex::Infinity,
                SpherePoint::Finite(_) => law_index(multiplier, tol.multiplier),
            };
            Ok(FixedPointRecord { location: p, multiplier, index, class: FixedClass::of(multiplier, tol.multiplier) })
        })
        .collect()
}

/// Fixed points of a Newton map with their multipliers and integers `m`.
///
/// Fails on the first finite fixed point whose multiplier is not `(m-1)/m`.
pub fn classify_fixed_points(f: &RationalMap, tol: &Tolerances) -> Result<Vec<FixedPointRecord>> {
    let records = fixed_point_records(f, tol)?;
    if let Some(bad) = records.iter().find(|r| r.index == LawIndex::Violated) {
        return Err(Error::NotNewtonMap {
            reason: format!("fixed point {} has multiplier {} not of the form (m-1)/m", bad.location, Complex(bad.multiplier)),
            multiplier: Some(Complex(bad.multiplier)),
        });
    }
    Ok(records)
}

#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub is_newton: bool,
    pub diagnostics: Vec<String>,
    pub fixed_points: Vec<FixedPointRecord>,
}

/// Checks degree at least 3, a repelling fixed point at `inf`, and the
/// multiplier law at every finite fixed point.
pub fn is_newton_map(f: &RationalMap, tol: &Tolerances) -> NewtonReport {
    let mut diagnostics = Vec::new();
    if f.degree() < 3 {
        diagnostics.push(format!("degree < 3 (degree {})", f.degree()));
    }
    let fixed_points = match fixed_point_records(f, tol) {
        Ok(r) => r,
        Err(e) => {
            diagnostics.push(format!("fixed points unavailable: {e}"));
            return NewtonReport { is_newton: false, diagnostics, fixed_points: Vec::new() };
        }
    };
    match fixed_points.iter().find(|r| r.location.is_infinite()) {
        None => diagnostics.push("inf is not a fixed point".into()),
        Some(r) if r.class != FixedClass::Repelling => {
            diagnostics.push(format!("inf is not repelling (multiplier {})", Complex(r.multiplier)))
        }
        Some(_) => {}
    }
    for r in &fixed_points {
        if r.index == LawIndex::Violated {
            diagnostics.push(format!(
                "multiplier law fails at {}: multiplier {}",
                r.location,
                Complex(r.multiplier)
            ));
        }
    }
    NewtonReport { is_newton: diagnostics.is_empty(), diagnostics, fixed_points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_poly::{newton_map, newton_map_from_roots, RootSpec, SpecRoot};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic() -> RationalMap {
        newton_map(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap()
    }

    #[test]
    fn cube_roots_are_superattracting() {
        let recs = classify_fixed_points(&cubic(), &Tolerances::default()).unwrap();
        assert_eq!(recs.len(), 4);
        for r in &recs[..3] {
            assert!(r.multiplier.norm() < 1e-12);
            assert_eq!(r.index, LawIndex::Root(1));
            assert_eq!(r.class, FixedClass::Superattracting);
        }
        let inf = recs[3];
        assert!(inf.location.is_infinite());
        assert!((inf.multiplier - c(1.5, 0.0)).norm() < 1e-12);
        assert_eq!(inf.class, FixedClass::Repelling);
    }

    #[test]
    fn double_root_has_multiplier_one_half() {
        let spec = RootSpec::new(vec![SpecRoot { z: c(1.0, 0.0), mult: 2 }, SpecRoot::simple(c(-1.0, 0.0))]).unwrap();
        let recs = classify_fixed_points(&newton_map_from_roots(&spec), &Tolerances::default()).unwrap();
        let at_one = recs.iter().find(|r| r.location == SpherePoint::Finite(c(1.0, 0.0))).unwrap();
        assert!((at_one.multiplier - c(0.5, 0.0)).norm() < 1e-12);
        assert_eq!(at_one.index, LawIndex::Root(2));
        assert_eq!(at_one.class, FixedClass::Attracting);
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let recs = classify_fixed_points(&cubic(), &Tolerances::default()).unwrap();
        let z: Vec<Complex64> = recs[..3].iter().map(|r| r.location.finite().unwrap()).collect();
        assert!(z[0].re < -0.4 && z[0].im < 0.0);
        assert!(z[1].re < -0.4 && z[1].im > 0.0);
        assert!((z[2] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn newton_report_accepts_cubic() {
        let rep = is_newton_map(&cubic(), &Tolerances::default());
        assert!(rep.is_newton, "{:?}", rep.diagnostics);
    }

    #[test]
    fn quadratic_is_rejected_for_degree() {
        let f = newton_map(&Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let rep = is_newton_map(&f, &Tolerances::default());
        assert!(!rep.is_newton);
        assert!(rep.diagnostics.iter().any(|d| d.contains("degree < 3")));
    }

    #[test]
    fn perturbed_leading_coefficient_breaks_the_law() {
        // (2.1 z^3 + 1)/(3 z^2): fixed points solve 0.9 z^3 = 1, multiplier
        // there is 2.1/3 - 2/(3 z^3) = 0.7 - 0.6 = 0.1, which is not (m-1)/m
        let f = RationalMap::new(Polynomial::from_real(&[1.0, 0.0, 0.0, 2.1]), Polynomial::from_real(&[0.0, 0.0, 3.0]))
            .unwrap();
        let rep = is_newton_map(&f, &Tolerances::default());
        assert!(!rep.is_newton);
        match classify_fixed_points(&f, &Tolerances::default()) {
            Err(Error::NotNewtonMap { multiplier: Some(m), .. }) => assert!((m.0 - c(0.1, 0.0)).norm() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn perturbed_constant_is_still_a_newton_map() {
        // (2 z^3 + 1.1)/(3 z^2) is the Newton map of z^3 - 1.1
        let f = RationalMap::new(Polynomial::from_real(&[1.1, 0.0, 0.0, 2.0]), Polynomial::from_real(&[0.0, 0.0, 3.0]))
            .unwrap();
        assert!(is_newton_map(&f, &Tolerances::default()).is_newton);
    }
}
