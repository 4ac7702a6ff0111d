use std::fmt;

use num_complex::Complex64;

use super::roots::{roots_with_multiplicity, MultipleRoot, RootOptions};
use super::Polynomial;
use crate::error::{Error, Result};

/// Modulus beyond which evaluation switches to the chart at infinity.
pub const CHART_SWAP_RADIUS: f64 = 1e6;

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Chordal distance on the unit-diameter-2 sphere; 2 is the maximum.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        match (*self, *other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
                2.0 * (a - b).norm()
                    / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}", crate::error::Complex(*z)),
        }
    }
}

/// A rational map `num / den` of the Riemann sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
    degree: usize,
}

impl RationalMap {
    /// Builds `num / den`, cancelling common roots that match within `1e-9`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateMap("zero denominator".into()));
        }
        if num.is_zero() {
            return Err(Error::DegenerateMap("zero numerator (constant map)".into()));
        }
        let (num, den) = cancel_common_roots(num, den)?;
        Ok(Self::from_reduced(num, den))
    }

    /// Builds a map whose numerator and denominator are known to be coprime.
    pub fn from_reduced(num: Polynomial, den: Polynomial) -> Self {
        let degree = num.degree().max(den.degree());
        RationalMap { num, den, degree }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Evaluation on the sphere; large arguments go through `w -> 1/f(1/w)`.
    pub fn eval(&self, z: SpherePoint) -> Result<SpherePoint> {
        match z {
            SpherePoint::Infinity => Ok(self.value_at_infinity()),
            SpherePoint::Finite(z) if z.norm() > CHART_SWAP_RADIUS => Ok(self.eval_conjugated(z)),
            SpherePoint::Finite(z) => self.eval_affine(z),
        }
    }

    /// Plain quotient `num(z)/den(z)`, with exact poles mapped to infinity.
    pub fn eval_affine(&self, z: Complex64) -> Result<SpherePoint> {
        let n = self.num.eval(z);
        let d = self.den.eval(z);
        if d == Complex64::new(0.0, 0.0) {
            if n == Complex64::new(0.0, 0.0) {
                return Err(Error::Indeterminate(SpherePoint::Finite(z)));
            }
            return Ok(SpherePoint::Infinity);
        }
        let v = n / d;
        if v.is_finite() {
            Ok(SpherePoint::Finite(v))
        } else {
            Ok(SpherePoint::Infinity)
        }
    }

    /// Evaluates `f(z)` as `1/g(1/z)` where `g` is the conjugate at infinity.
    pub fn eval_conjugated(&self, z: Complex64) -> SpherePoint {
        let w = z.inv();
        let (top, bottom) = self.reversed_pair();
        // g(w) = top(w)/bottom(w) = 1/f(1/w)
        let g_num = top.eval(w);
        let g_den = bottom.eval(w);
        if g_num == Complex64::new(0.0, 0.0) {
            return SpherePoint::Infinity;
        }
        let v = g_den / g_num;
        if v.is_finite() {
            SpherePoint::Finite(v)
        } else {
            SpherePoint::Infinity
        }
    }

    fn value_at_infinity(&self) -> SpherePoint {
        use std::cmp::Ordering;
        match self.num.degree().cmp(&self.den.degree()) {
            Ordering::Greater => SpherePoint::Infinity,
            Ordering::Equal => SpherePoint::Finite(self.num.leading() / self.den.leading()),
            Ordering::Less => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
        }
    }

    /// `(w^D den(1/w), w^D num(1/w))` with `D = degree`.
    fn reversed_pair(&self) -> (Polynomial, Polynomial) {
        (self.den.reversed(self.degree), self.num.reversed(self.degree))
    }

    /// The conjugate `w -> 1/f(1/w)`, i.e. the map in the chart at infinity.
    pub fn conjugate_at_infinity(&self) -> RationalMap {
        let (top, bottom) = self.reversed_pair();
        RationalMap::from_reduced(top, bottom)
    }

    /// `f(z)` and `f'(z)` at a finite non-pole.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        (n / d, (dn * d - n * dd) / (d * d))
    }

    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).1
    }

    /// `den/num` and its derivative, the map read in the target chart at infinity.
    pub fn eval_inverted_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        (d / n, (dd * n - d * dn) / (n * n))
    }

    /// Multiplier at a fixed point (finite or infinite).
    pub fn multiplier(&self, p: SpherePoint) -> Result<Complex64> {
        match p {
            SpherePoint::Finite(z) => {
                if self.den.eval(z) == Complex64::new(0.0, 0.0) {
                    return Err(Error::Indeterminate(p));
                }
                Ok(self.derivative_at(z))
            }
            SpherePoint::Infinity => {
                if !self.value_at_infinity().is_infinite() {
                    return Err(Error::Input("infinity is not a fixed point".into()));
                }
                Ok(self.conjugate_at_infinity().derivative_at(Complex64::new(0.0, 0.0)))
            }
        }
    }

    /// Finite poles with multiplicity; the multiplicities sum to `deg den`.
    pub fn poles(&self, opts: &RootOptions) -> Result<Vec<MultipleRoot>> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        roots_with_multiplicity(&self.den, opts)
    }

    /// All preimages of `w` with multiplicity (local degree).
    pub fn preimages(&self, w: SpherePoint, opts: &RootOptions) -> Result<Vec<(SpherePoint, u32)>> {
        let (eq, at_infinity) = match w {
            SpherePoint::Infinity => {
                let k = self.degree - self.den.degree();
                (self.den.clone(), k as u32)
            }
            SpherePoint::Finite(w) => {
                let eq = (&self.num - &self.den.scale(w)).trim_relative(1e-14);
                let k = self.degree.saturating_sub(eq.degree());
                (eq, k as u32)
            }
        };
        let mut out: Vec<(SpherePoint, u32)> = if eq.degree() == 0 {
            Vec::new()
        } else {
            roots_with_multiplicity(&eq, opts)?
                .into_iter()
                .map(|r| (SpherePoint::Finite(r.z), r.mult))
                .collect()
        };
        if at_infinity > 0 {
            out.push((SpherePoint::Infinity, at_infinity));
        }
        Ok(out)
    }

    /// Numerator of `f'`: `num' den - num den'`. Its roots (with multiplicity)
    /// are the finite critical points, multiple poles included.
    pub fn critical_numerator(&self) -> Polynomial {
        let a = &self.num.derivative() * &self.den;
        let b = &self.num * &self.den.derivative();
        (&a - &b).trim_relative(1e-14)
    }

    /// First `n` Taylor coefficients of `h -> f(z0 + h)` at a non-pole `z0`.
    pub fn taylor(&self, z0: Complex64, n: usize) -> Vec<Complex64> {
        let a = self.num.taylor_shift(z0);
        let b = self.den.taylor_shift(z0);
        let zero = Complex64::new(0.0, 0.0);
        let ac = |k: usize| a.coeffs().get(k).copied().unwrap_or(zero);
        let bc = |k: usize| b.coeffs().get(k).copied().unwrap_or(zero);
        let b0 = bc(0);
        let mut out: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = ac(k);
            for j in 1..=k {
                s -= bc(j) * out[k - j];
            }
            out.push(s / b0);
        }
        out
    }
}

fn cancel_common_roots(mut num: Polynomial, mut den: Polynomial) -> Result<(Polynomial, Polynomial)> {
    if num.degree() == 0 || den.degree() == 0 {
        return Ok((num, den));
    }
    let opts = RootOptions::default();
    let num_roots = roots_with_multiplicity(&num, &opts)?;
    let den_roots = roots_with_multiplicity(&den, &opts)?;
    for nr in &num_roots {
        for dr in &den_roots {
            if (nr.z - dr.z).norm() <= 1e-9 * nr.z.norm().max(1.0) {
                let shared = nr.mult.min(dr.mult);
                let r = (nr.z + dr.z) * 0.5;
                for _ in 0..shared {
                    num = num.deflate(r);
                    den = den.deflate(r);
                }
            }
        }
    }
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic_newton() -> RationalMap {
        RationalMap::new(Polynomial::from_real(&[1.0, 0.0, 0.0, 2.0]), Polynomial::from_real(&[0.0, 0.0, 3.0]))
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = cubic_newton();
        assert_eq!(f.eval(c(0.0, 0.0).into()).unwrap(), SpherePoint::Infinity);
        assert_eq!(f.eval(c(1.0, 0.0).into()).unwrap(), SpherePoint::Finite(c(1.0, 0.0)));
        assert_eq!(f.eval(SpherePoint::Infinity).unwrap(), SpherePoint::Infinity);
    }

    #[test]
    fn indeterminate_is_reported() {
        let f = RationalMap::from_reduced(Polynomial::z(), Polynomial::z());
        assert!(matches!(f.eval(c(0.0, 0.0).into()), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn common_factor_cancels() {
        // (z-2)(z+1) / ((z-2) z)
        let num = Polynomial::from_linear_factors(&[c(2.0, 0.0), c(-1.0, 0.0)]);
        let den = Polynomial::from_linear_factors(&[c(2.0, 0.0), c(0.0, 0.0)]);
        let f = RationalMap::new(num, den).unwrap();
        assert_eq!(f.degree(), 1);
    }

    #[test]
    fn multiplier_at_infinity() {
        let mu = cubic_newton().multiplier(SpherePoint::Infinity).unwrap();
        assert!((mu - c(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn taylor_coefficients() {
        // f(1+h) for (2z^3+1)/(3z^2): f(1)=1, f'(1)=0, f''(1)/2 = 1
        let t = cubic_newton().taylor(c(1.0, 0.0), 4);
        assert!((t[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(t[1].norm() < 1e-15);
        assert!((t[2] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn preimages_of_infinity_include_infinity() {
        let pre = cubic_newton().preimages(SpherePoint::Infinity, &RootOptions::default()).unwrap();
        assert_eq!(pre.len(), 2);
        assert!(pre.contains(&(SpherePoint::Finite(c(0.0, 0.0)), 2)));
        assert!(pre.contains(&(SpherePoint::Infinity, 1)));
    }

    #[test]
    fn chordal_distance_bounds() {
        let a = SpherePoint::Finite(c(0.0, 0.0));
        assert!((a.chordal_distance(&SpherePoint::Infinity) - 2.0).abs() < 1e-15);
        assert_eq!(SpherePoint::Infinity.chordal_distance(&SpherePoint::Infinity), 0.0);
    }
}
