//! Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton polishing,
//! plus clustering of numerically split multiple roots.

use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Relative correction size at which a root counts as converged.
    pub rel_tol: f64,
    pub max_sweeps: usize,
    /// Roots closer than this (scaled by `max(1, |z|)`) are one multiple root.
    pub cluster_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { rel_tol: 1e-12, max_sweeps: 200, cluster_tol: 1e-7 }
    }
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultipleRoot {
    pub z: Complex64,
    pub mult: u32,
}

/// All `deg p` roots of `p`, repeated according to multiplicity as found numerically.
pub fn roots(p: &Polynomial, opts: &RootOptions) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::DegenerateMap("roots of the zero polynomial".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let coeffs = p.coeffs();
    let zeros_at_origin = coeffs.iter().take_while(|c| **c == zero).count();
    let mut out = vec![zero; zeros_at_origin];
    let rest = Polynomial::new(coeffs[zeros_at_origin..].to_vec());
    match rest.degree() {
        0 => {}
        1 => out.push(-rest.coeffs()[0] / rest.coeffs()[1]),
        _ => out.extend(aberth(&rest, opts)?),
    }
    Ok(out)
}

fn aberth(p: &Polynomial, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let dp = p.derivative();
    let lead = p.leading();
    let center = -p.coeffs()[n - 1] / (lead * n as f64);
    let shifted = p.taylor_shift(center);
    let b = shifted.coeffs();
    let radius = (0..n)
        .map(|k| (b[k].norm() / b[n].norm()).powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        // p is a pure power of (z - center)
        return Ok(vec![center; n]);
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;

    for _ in 0..opts.max_sweeps {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let pv = p.eval(zi);
            if pv.norm() <= 8.0 * eps * p.magnitude_bound(zi) {
                done[i] = true;
                continue;
            }
            let dv = dp.eval(zi);
            let ratio = pv / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = zi - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.is_finite() && denom.norm() > 0.0 && ratio.is_finite() {
                ratio / denom
            } else {
                // zero derivative: nudge off the critical point
                Complex64::new(radius * 1e-3, radius * 1e-3)
            };
            z[i] = zi - step;
            if step.norm() <= opts.rel_tol * zi.norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }

    let residuals: Vec<f64> = z
        .iter()
        .map(|&zi| p.eval(zi).norm() / p.magnitude_bound(zi).max(f64::MIN_POSITIVE))
        .collect();
    if !done.iter().all(|&d| d) {
        // Multiple roots converge only linearly; accept anything at rounding level.
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        if max_residual > 1e3 * eps || z.iter().any(|zi| !zi.is_finite()) {
            return Err(Error::RootFinding { sweeps: opts.max_sweeps, max_residual, residuals });
        }
    }
    polish(p, &dp, &mut z, opts);
    Ok(z)
}

/// Newton polishing of isolated roots; clustered roots are left alone.
fn polish(p: &Polynomial, dp: &Polynomial, z: &mut [Complex64], opts: &RootOptions) {
    let snapshot = z.to_vec();
    for (i, zi) in z.iter_mut().enumerate() {
        let isolated = snapshot.iter().enumerate().all(|(j, &w)| {
            j == i || (w - *zi).norm() > 10.0 * opts.cluster_tol * zi.norm().max(1.0)
        });
        if !isolated {
            continue;
        }
        for _ in 0..3 {
            let pv = p.eval(*zi);
            let dv = dp.eval(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let cand = *zi - pv / dv;
            if p.eval(cand).norm() < pv.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
}

/// Groups roots lying within `tol * max(1, |z|)` of each other (transitively);
/// each group is reported by its mean with the group size as multiplicity.
/// Groups keep the order of their first member.
pub fn cluster(roots: &[Complex64], tol: f64) -> Vec<MultipleRoot> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, u32)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += roots[i];
                g.2 += 1;
            }
            None => groups.push((r, roots[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, m)| MultipleRoot { z: sum / m as f64, mult: m })
        .collect()
}

/// Roots of `p` merged into distinct locations with multiplicities.
///
/// Roots within `cluster_tol` always merge. A root of multiplicity `m` is
/// only resolved to about `eps^(1/m)`, so wider groups are merged as well when
/// the Taylor expansion of `p` at their centroid certifies a root of the
/// combined multiplicity.
pub fn roots_with_multiplicity(p: &Polynomial, opts: &RootOptions) -> Result<Vec<MultipleRoot>> {
    let mut groups = cluster(&roots(p, opts)?, opts.cluster_tol);
    let mut radius = opts.cluster_tol * 10.0;
    while radius <= MAX_CERTIFIED_RADIUS && groups.len() > 1 {
        let centers: Vec<Complex64> = groups.iter().map(|g| g.z).collect();
        let proposal = cluster_members(&centers, radius);
        let mut next = Vec::with_capacity(groups.len());
        for members in proposal {
            if members.len() == 1 {
                next.push(groups[members[0]]);
                continue;
            }
            let mult: u32 = members.iter().map(|&i| groups[i].mult).sum();
            let sum: Complex64 = members.iter().map(|&i| groups[i].z * groups[i].mult as f64).sum();
            let z = sum / mult as f64;
            if is_multiple_root(p, z, mult as usize) {
                next.push(MultipleRoot { z, mult });
            } else {
                next.extend(members.iter().map(|&i| groups[i]));
            }
        }
        groups = next;
        radius *= 10.0;
    }
    Ok(groups)
}

const MAX_CERTIFIED_RADIUS: f64 = 1e-2;
const MULTIPLE_ROOT_TOL: f64 = 1e-9;

/// Whether the first `m` Taylor coefficients of `p` at `z` vanish relative to
/// the whole expansion.
fn is_multiple_root(p: &Polynomial, z: Complex64, m: usize) -> bool {
    let b = p.taylor_shift(z);
    let scale: f64 = b.coeffs().iter().map(|c| c.norm()).sum();
    b.degree() >= m && b.coeffs()[..m].iter().all(|c| c.norm() <= MULTIPLE_ROOT_TOL * scale)
}

/// Single-linkage groups as index lists, in order of first member.
fn cluster_members(points: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut owner = vec![usize::MAX; points.len()];
    for i in 0..points.len() {
        if owner[i] != usize::MAX {
            continue;
        }
        let g = groups.len();
        owner[i] = g;
        let mut members = vec![i];
        let mut k = 0;
        while k < members.len() {
            let a = points[members[k]];
            for j in 0..points.len() {
                let scale = a.norm().max(points[j].norm()).max(1.0);
                if owner[j] == usize::MAX && (a - points[j]).norm() <= tol * scale {
                    owner[j] = g;
                    members.push(j);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups
}
