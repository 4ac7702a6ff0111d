//! Continuation of preimages along curves (predictor-corrector path tracking).

use num_complex::Complex64;

use crate::complex_poly::{RationalMap, SpherePoint};
use crate::error::{Complex, Error, Result};

const NEWTON_ITERATIONS: usize = 12;
const MIN_SUBSTEP: f64 = 1.0 / (1u64 << 40) as f64;
/// Accepted corrector displacement relative to the predictor step.
const CONTRACTION: f64 = 0.25;

/// Tracks one preimage branch of a rational map.
#[derive(Clone, Copy, Debug)]
pub struct Lifter<'a> {
    f: &'a RationalMap,
}

impl<'a> Lifter<'a> {
    pub fn new(f: &'a RationalMap) -> Self {
        Lifter { f }
    }

    /// Value and derivative in the chart suited to `w`: `f` itself for
    /// `|w| <= 1`, `1/f` otherwise.
    fn chart(&self, z: Complex64, inverted: bool) -> (Complex64, Complex64) {
        if inverted {
            self.f.eval_inverted_with_derivative(z)
        } else {
            self.f.eval_with_derivative(z)
        }
    }

    /// Newton's method for `f(z) = w` from `z0`.
    pub fn solve(&self, z0: Complex64, w: Complex64) -> Option<Complex64> {
        let inverted = w.norm() > 1.0;
        let target = if inverted { w.inv() } else { w };
        let mut z = z0;
        for _ in 0..NEWTON_ITERATIONS {
            let (g, dg) = self.chart(z, inverted);
            if !g.is_finite() || !dg.is_finite() || dg.norm() == 0.0 {
                return None;
            }
            let step = (g - target) / dg;
            z -= step;
            if !z.is_finite() {
                return None;
            }
            if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
                return Some(z);
            }
        }
        let (g, _) = self.chart(z, inverted);
        ((g - target).norm() <= 1e-12 * target.norm().max(1.0)).then_some(z)
    }

    /// Follows the preimage at `z` of `w_from` to a preimage of `w_to` along
    /// the straight segment between them.
    pub fn step(&self, z: Complex64, w_from: Complex64, w_to: Complex64) -> Result<Complex64> {
        let mut s: f64 = 0.0;
        let mut h: f64 = 1.0;
        let mut zc = z;
        let mut wc = w_from;
        while s < 1.0 {
            let t = (s + h).min(1.0);
            let wt = w_from + (w_to - w_from) * t;
            let (_, df) = self.f.eval_with_derivative(zc);
            if !df.is_finite() || df.norm() <= 1e-14 * zc.norm().max(1.0) {
                return Err(Error::LiftAmbiguity(format!(
                    "lift passes through the critical point {}",
                    Complex(zc)
                )));
            }
            let predicted = zc + (wt - wc) / df;
            let accepted = self.solve(predicted, wt).filter(|zn| {
                let euler = (predicted - zc).norm();
                (zn - predicted).norm() <= CONTRACTION * euler + 1e-13 * zc.norm().max(1.0)
            });
            match accepted {
                Some(zn) => {
                    zc = zn;
                    wc = wt;
                    s = t;
                    h = (2.0 * h).min(1.0);
                }
                None => {
                    h *= 0.5;
                    if h < MIN_SUBSTEP {
                        return Err(Error::LiftStep {
                            at: Complex(zc),
                            reason: "corrector failed at minimal substep".into(),
                        });
                    }
                }
            }
        }
        Ok(zc)
    }

    /// Lifts a polyline sample by sample, starting from `start` over `curve[0]`.
    pub fn lift(&self, curve: &[Complex64], start: Complex64) -> Result<Vec<Complex64>> {
        let Some(&first) = curve.first() else {
            return Ok(Vec::new());
        };
        let mut z = self.solve(start, first).unwrap_or(start);
        if (z - start).norm() > 1e-6 * start.norm().max(1.0) {
            return Err(Error::Input(format!("start {} does not lie over the curve's first point", Complex(start))));
        }
        let mut out = Vec::with_capacity(curve.len());
        out.push(z);
        for pair in curve.windows(2) {
            z = self.step(z, pair[0], pair[1])?;
            out.push(z);
        }
        Ok(out)
    }
}

/// The lift of `curve` through `f` that starts at `start`.
pub fn lift_curve(f: &RationalMap, curve: &[Complex64], start: SpherePoint) -> Result<Vec<Complex64>> {
    let SpherePoint::Finite(start) = start else {
        return Err(Error::Input("lifting from infinity needs a finite curve start".into()));
    };
    let image = f.eval(SpherePoint::Finite(start))?;
    match (image, curve.first()) {
        (SpherePoint::Finite(w), Some(&c0)) if (w - c0).norm() <= 1e-6 * c0.norm().max(1.0) => {}
        (_, None) => return Ok(Vec::new()),
        _ => {
            return Err(Error::Input(format!(
                "start {} does not lie over the curve's first point",
                Complex(start)
            )))
        }
    }
    Lifter::new(f).lift(curve, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_poly::{newton_map, Polynomial, RootOptions};

    fn cubic() -> RationalMap {
        newton_map(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn arc() -> Vec<Complex64> {
        (0..=40).map(|i| c(0.3 + 0.05 * i as f64, 0.4 + 0.02 * (i as f64 * 0.3).sin())).collect()
    }

    #[test]
    fn lift_reproduces_the_curve() {
        let f = cubic();
        let curve = arc();
        for (p, _) in f.preimages(curve[0].into(), &RootOptions::default()).unwrap() {
            let lifted = lift_curve(&f, &curve, p).unwrap();
            for (z, w) in lifted.iter().zip(&curve) {
                let fz = f.eval((*z).into()).unwrap().finite().unwrap();
                assert!((fz - w).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn distinct_starts_give_distinct_lifts() {
        let f = cubic();
        let curve = arc();
        let starts = f.preimages(curve[0].into(), &RootOptions::default()).unwrap();
        assert_eq!(starts.len(), 3);
        let ends: Vec<Complex64> = starts.iter().map(|(p, _)| *lift_curve(&f, &curve, *p).unwrap().last().unwrap()).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!((ends[i] - ends[j]).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn invariant_segment_lifts_to_itself() {
        // the real segment [1.2, 3] maps into [1, 3] and is fixed as a set
        let f = cubic();
        let curve: Vec<Complex64> = (0..=20).map(|i| c(1.2 + 0.09 * i as f64, 0.0)).collect();
        let image: Vec<Complex64> = curve.iter().map(|z| f.eval((*z).into()).unwrap().finite().unwrap()).collect();
        let lifted = lift_curve(&f, &image, curve[0].into()).unwrap();
        for (a, b) in lifted.iter().zip(&curve) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn wrong_start_is_rejected() {
        let f = cubic();
        assert!(matches!(lift_curve(&f, &arc(), c(5.0, 5.0).into()), Err(Error::Input(_))));
    }

    #[test]
    fn large_targets_use_the_inverted_chart() {
        let f = cubic();
        let curve: Vec<Complex64> = (0..=10).map(|i| c(1e3 * (1.0 + i as f64), 1.0)).collect();
        let start = Lifter::new(&f).solve(c(1.5e3, 0.0), curve[0]).unwrap();
        let lifted = lift_curve(&f, &curve, start.into()).unwrap();
        let last = *lifted.last().unwrap();
        let fz = f.eval(last.into()).unwrap().finite().unwrap();
        assert!((fz - curve[10]).norm() < 1e-8 * curve[10].norm());
    }
}
