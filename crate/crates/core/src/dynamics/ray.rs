use std::f64::consts::PI;

use num_complex::Complex64;

use super::analysis::MapAnalysis;
use super::fixed::FixedClass;
use super::lift::Lifter;
use crate::complex_poly::{RationalMap, SpherePoint};
use crate::error::{Complex, Error, Result};
use crate::tolerance::Tolerances;

/// A fixed internal ray as a polyline from its root outward.
#[derive(Clone, Debug, PartialEq)]
pub struct RayPolyline {
    pub root_index: usize,
    /// 1-based index among the `k - 1` fixed rays of the root.
    pub ray_index: usize,
    pub points: Vec<Complex64>,
    pub landing: SpherePoint,
}

#[derive(Clone, Copy, Debug)]
pub struct RayOptions {
    pub samples_per_segment: usize,
    pub max_segments: usize,
    /// Tracing stops at the first sample beyond this modulus.
    pub far_radius: f64,
    /// Upper bound for the radius of the initial disk around the root.
    pub start_radius: f64,
}

impl Default for RayOptions {
    fn default() -> Self {
        RayOptions { samples_per_segment: 32, max_segments: 2000, far_radius: 1e6, start_radius: 1e-4 }
    }
}

/// Traces fixed ray `j` (1-based) of the superattracting root with record
/// index `root_index`.
pub fn trace_internal_ray(f: &RationalMap, root_index: usize, j: usize, tol: &Tolerances) -> Result<RayPolyline> {
    trace_fixed_ray(&MapAnalysis::new(f, tol)?, root_index, j, &RayOptions::default())
}

/// Number of fixed rays at a root: its local degree minus one.
pub fn fixed_ray_count(an: &MapAnalysis, root_index: usize) -> usize {
    an.fixed
        .get(root_index)
        .map_or(0, |r| an.local_degree_at(r.location) as usize - 1)
}

pub fn trace_fixed_ray(an: &MapAnalysis, root_index: usize, j: usize, opts: &RayOptions) -> Result<RayPolyline> {
    let f = &an.map;
    let rec = an
        .fixed
        .get(root_index)
        .ok_or_else(|| Error::Input(format!("no fixed point with index {root_index}")))?;
    let SpherePoint::Finite(xi) = rec.location else {
        return Err(Error::Input("rays start at finite roots".into()));
    };
    if rec.class != FixedClass::Superattracting {
        return Err(Error::Input(format!(
            "ray tracing requires a superattracting root (m = 1); {} has multiplier {}",
            rec.location,
            Complex(rec.multiplier)
        )));
    }
    let k = an.local_degree_at(rec.location) as usize;
    if j == 0 || j > k - 1 {
        return Err(Error::Input(format!("ray index {j} outside 1..={}", k - 1)));
    }

    let taylor = f.taylor(xi, k + 3);
    let lead = taylor[k];
    let mut rho = opts.start_radius * an.separation(xi).min(1.0);
    for i in 1..=2 {
        let c = taylor[k + i].norm();
        if c > 0.0 {
            rho = rho.min((0.05 * lead.norm() / c).powf(1.0 / i as f64));
        }
    }
    let alpha = (2.0 * PI * (j - 1) as f64 - lead.arg()) / (k - 1) as f64;
    let dir = Complex64::from_polar(1.0, alpha);
    let p0 = xi + dir * rho;
    let q0 = f.eval_with_derivative(p0).0;

    let n = opts.samples_per_segment.max(2);
    let inner = (q0 - xi).norm().min(rho * 0.5);
    let mut segment = Vec::with_capacity(n + 1);
    segment.push(q0);
    for i in 1..n {
        let r = inner * (rho / inner).powf(i as f64 / n as f64);
        segment.push(xi + dir * r);
    }
    segment.push(p0);

    let mut points = vec![xi];
    points.extend_from_slice(&segment);
    let lifter = Lifter::new(f);
    for _ in 0..opts.max_segments {
        let start = *segment.last().expect("nonempty");
        let next = lifter.lift(&segment, start).map_err(|e| Error::RayTracing {
            last_good: Complex(start),
            reason: e.to_string(),
        })?;
        let advance = (next[next.len() - 1] - next[0]).norm();
        if advance <= 1e-13 * next[0].norm().max(1.0) {
            return Err(Error::RayTracing { last_good: Complex(start), reason: "step collapse".into() });
        }
        if let Some(pos) = next.iter().position(|z| z.norm() >= opts.far_radius) {
            points.extend_from_slice(&next[1..=pos]);
            return Ok(RayPolyline { root_index, ray_index: j, points, landing: SpherePoint::Infinity });
        }
        points.extend_from_slice(&next[1..]);
        segment = next;
    }
    Err(Error::RayTracing {
        last_good: Complex(*points.last().expect("nonempty")),
        reason: format!("ray did not reach |z| = {:e} within {} segments", opts.far_radius, opts.max_segments),
    })
}

/// All fixed rays, ordered by root index and then ray index.
pub fn trace_all_fixed_rays(an: &MapAnalysis, opts: &RayOptions) -> Result<Vec<RayPolyline>> {
    use rayon::prelude::*;
    let jobs: Vec<(usize, usize)> = an
        .superattracting_roots()
        .into_iter()
        .flat_map(|i| (1..=fixed_ray_count(an, i)).map(move |j| (i, j)))
        .collect();
    jobs.par_iter().map(|&(i, j)| trace_fixed_ray(an, i, j, opts)).collect()
}

/// Distance from `z` to the polyline, relative to `max(1, |z|)`.
pub fn polyline_distance(points: &[Complex64], z: Complex64) -> f64 {
    let d = match points {
        [] => f64::INFINITY,
        [p] => (z - p).norm(),
        _ => points.windows(2).map(|s| segment_distance(s[0], s[1], z)).fold(f64::INFINITY, f64::min),
    };
    d / z.norm().max(1.0)
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * ab.conj()).re / len2;
    (z - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// Largest relative distance from the image of a ray sample to the ray.
pub fn invariance_defect(f: &RationalMap, ray: &RayPolyline) -> f64 {
    ray.points
        .iter()
        .filter_map(|&z| f.eval(SpherePoint::Finite(z)).ok().and_then(|w| w.finite()))
        .map(|w| polyline_distance(&ray.points, w))
        .fold(0.0, f64::max)
}
