use super::fixed::{canonical_cmp, fixed_points};
use crate::complex_poly::roots::{roots_with_multiplicity, RootOptions};
use crate::complex_poly::{RationalMap, SpherePoint};
use crate::error::Result;
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fate {
    /// The orbit reaches fixed point `fixed_index` exactly after `steps` steps.
    Lands { fixed_index: usize, steps: usize },
    Unresolved,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPointRecord {
    pub location: SpherePoint,
    pub local_degree: u32,
    pub orbit: Vec<SpherePoint>,
    pub fate: Fate,
}

/// Critical locations with local degrees, without orbit data.
///
/// Finite critical points are the roots of `num' den - num den'`; a pole of
/// order `k` is a root of order `k - 1` there. The degree deficit of that
/// polynomial below `2d - 2` is the contribution of `inf`.
pub fn critical_locations(f: &RationalMap) -> Result<Vec<(SpherePoint, u32)>> {
    let d = f.degree();
    if d < 2 {
        return Ok(Vec::new());
    }
    let w = f.critical_numerator();
    let mut finite = if w.degree() == 0 {
        Vec::new()
    } else {
        roots_with_multiplicity(&w, &RootOptions::default())?
    };
    finite.sort_by(|a, b| canonical_cmp(a.z, b.z));
    let mut out: Vec<(SpherePoint, u32)> =
        finite.into_iter().map(|r| (SpherePoint::Finite(r.z), r.mult + 1)).collect();
    let at_infinity = (2 * d - 2).saturating_sub(w.degree());
    if at_infinity > 0 {
        out.push((SpherePoint::Infinity, at_infinity as u32 + 1));
    }
    Ok(out)
}

/// Fixed points together with their other preimages, used to certify that an
/// orbit lands exactly on a fixed point.
#[derive(Clone, Debug)]
pub struct LandingTable {
    pub fixed: Vec<SpherePoint>,
    /// For each fixed point `x`, the points of `f^-1(x)` other than `x`.
    pub co_preimages: Vec<Vec<SpherePoint>>,
}

impl LandingTable {
    pub fn new(f: &RationalMap, tol: &Tolerances) -> Result<Self> {
        let fixed = fixed_points(f)?;
        let opts = RootOptions::default();
        let co_preimages = fixed
            .iter()
            .map(|x| {
                Ok(f.preimages(*x, &opts)?
                    .into_iter()
                    .map(|(p, _)| p)
                    .filter(|p| !near(p, x, tol.merge))
                    .collect())
            })
            .collect::<Result<Vec<Vec<SpherePoint>>>>()?;
        Ok(LandingTable { fixed, co_preimages })
    }

    fn at_fixed(&self, z: &SpherePoint, tol: &Tolerances) -> Option<usize> {
        self.fixed.iter().position(|x| match (x, z) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Infinity, SpherePoint::Finite(w)) => w.norm() > tol.escape_radius,
            (SpherePoint::Finite(_), SpherePoint::Infinity) => false,
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => (a - b).norm() <= tol.eps_fix * a.norm().max(1.0),
        })
    }

    fn before_fixed(&self, z: &SpherePoint, tol: &Tolerances) -> Option<usize> {
        self.co_preimages.iter().position(|pre| pre.iter().any(|q| near(q, z, tol.landing)))
    }

    /// Iterates `z` until it lands on a fixed point or `cutoff` steps pass.
    ///
    /// Landing is certified when an orbit point lies within `landing` of a
    /// preimage of a fixed point other than the fixed point itself. Plain
    /// convergence towards an attracting fixed point is not a landing.
    pub fn follow(&self, f: &RationalMap, start: SpherePoint, cutoff: usize, tol: &Tolerances) -> (Vec<SpherePoint>, Fate) {
        let mut orbit = vec![start];
        let mut z = start;
        for step in 0..=cutoff {
            if let Some(i) = self.at_fixed(&z, tol) {
                if step == 0 {
                    return (orbit, Fate::Lands { fixed_index: i, steps: 0 });
                }
                return (orbit, Fate::Unresolved);
            }
            if step == cutoff {
                break;
            }
            if let Some(i) = self.before_fixed(&z, tol) {
                orbit.push(self.fixed[i]);
                return (orbit, Fate::Lands { fixed_index: i, steps: step + 1 });
            }
            z = match f.eval(z) {
                Ok(next) => next,
                Err(_) => break,
            };
            orbit.push(z);
        }
        (orbit, Fate::Unresolved)
    }
}

fn near(a: &SpherePoint, b: &SpherePoint, tol: f64) -> bool {
    match (a, b) {
        (SpherePoint::Finite(x), SpherePoint::Finite(y)) => (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0),
        _ => a.chordal_distance(b) <= tol,
    }
}

/// Critical points with local degrees and orbits followed for up to
/// `tol.max_iterations` steps.
pub fn critical_points(f: &RationalMap, tol: &Tolerances) -> Result<Vec<CriticalPointRecord>> {
    critical_points_with_cutoff(f, tol.max_iterations, tol)
}

pub fn critical_points_with_cutoff(f: &RationalMap, cutoff: usize, tol: &Tolerances) -> Result<Vec<CriticalPointRecord>> {
    let table = LandingTable::new(f, tol)?;
    Ok(critical_locations(f)?
        .into_iter()
        .map(|(location, local_degree)| {
            let (orbit, fate) = table.follow(f, location, cutoff, tol);
            CriticalPointRecord { location, local_degree, orbit, fate }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcfVerdict {
    PostcriticallyFixed,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct PcfReport {
    pub verdict: PcfVerdict,
    /// Steps to land per critical point, `None` where unresolved.
    pub landing_steps: Vec<Option<usize>>,
    pub critical: Vec<CriticalPointRecord>,
}

impl PcfReport {
    pub fn is_postcritically_fixed(&self) -> bool {
        self.verdict == PcfVerdict::PostcriticallyFixed
    }
}

/// Whether every critical orbit lands on a fixed point within `cutoff` steps.
/// Orbits that do not are reported as undecided, never as a negative.
pub fn is_postcritically_fixed(f: &RationalMap, cutoff: usize, tol: &Tolerances) -> Result<PcfReport> {
    let critical = critical_points_with_cutoff(f, cutoff, tol)?;
    let landing_steps: Vec<Option<usize>> = critical
        .iter()
        .map(|c| match c.fate {
            Fate::Lands { steps, .. } => Some(steps),
            Fate::Unresolved => None,
        })
        .collect();
    let verdict = if landing_steps.iter().all(Option::is_some) {
        PcfVerdict::PostcriticallyFixed
    } else {
        PcfVerdict::Undecided
    };
    Ok(PcfReport { verdict, landing_steps, critical })
}

/// `sum (local degree - 1)` over the given critical points.
pub fn critical_multiplicity(points: &[(SpherePoint, u32)]) -> u32 {
    points.iter().map(|(_, k)| k - 1).sum()
}
