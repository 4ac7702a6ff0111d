use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Dense polynomial with complex coefficients in ascending degree order.
///
/// The leading coefficient is nonzero unless the polynomial is the zero
/// polynomial, which is stored as a single zero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// `z - a`.
    pub fn linear_factor(a: Complex64) -> Self {
        Self::new(vec![-a, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_k| |z|^k`, the scale against which rounding in `eval` is measured.
    pub fn magnitude_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Drops leading coefficients whose modulus is at most `rel_tol` times the
    /// largest coefficient modulus. Used after subtractions with cancellation.
    pub fn trim_relative(&self, rel_tol: f64) -> Polynomial {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= rel_tol * max) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// `w^n p(1/w)`, requires `n >= degree`.
    pub fn reversed(&self, n: usize) -> Polynomial {
        assert!(n >= self.degree(), "reversal degree below polynomial degree");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = c;
        }
        Polynomial::new(coeffs)
    }

    /// Coefficients of `h -> p(a + h)`.
    pub fn taylor_shift(&self, a: Complex64) -> Polynomial {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += a * next;
            }
        }
        Polynomial::new(c)
    }

    /// Divides by `z - a`, discarding the remainder.
    pub fn deflate(&self, a: Complex64) -> Polynomial {
        let n = self.degree();
        if n == 0 {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut carry = Complex64::new(0.0, 0.0);
        for k in (1..=n).rev() {
            carry = carry * a + self.coeffs[k];
            out[k - 1] = carry;
        }
        Polynomial::new(out)
    }

    /// Product of `(z - r)` over the given roots.
    pub fn from_linear_factors<'a>(roots: impl IntoIterator<Item = &'a Complex64>) -> Polynomial {
        roots
            .into_iter()
            .fold(Polynomial::one(), |acc, &r| &acc * &Polynomial::linear_factor(r))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Polynomial::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_and_derivative() {
        // z^3 - 1
        let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval(c(2.0, 0.0)), c(7.0, 0.0));
        let (v, dv) = p.eval_with_derivative(c(2.0, 0.0));
        assert_eq!(v, c(7.0, 0.0));
        assert_eq!(dv, c(12.0, 0.0));
        assert_eq!(p.derivative(), Polynomial::from_real(&[0.0, 0.0, 3.0]));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(Polynomial::from_real(&[]).is_zero());
    }

    #[test]
    fn taylor_shift_matches_direct_evaluation() {
        let p = Polynomial::new(vec![c(1.0, -2.0), c(0.5, 0.0), c(-3.0, 1.0), c(2.0, 0.0)]);
        let a = c(0.3, -0.7);
        let q = p.taylor_shift(a);
        for h in [c(0.0, 0.0), c(0.2, 0.1), c(-1.0, 2.0)] {
            assert!((q.eval(h) - p.eval(a + h)).norm() < 1e-12);
        }
    }

    #[test]
    fn reversal_and_deflation() {
        let p = Polynomial::from_real(&[2.0, 3.0, 1.0]); // (z+1)(z+2)
        assert_eq!(p.reversed(3), Polynomial::from_real(&[0.0, 1.0, 3.0, 2.0]));
        let q = p.deflate(c(-1.0, 0.0));
        assert_eq!(q, Polynomial::from_real(&[2.0, 1.0]));
    }

    #[test]
    fn product_of_linear_factors() {
        let p = Polynomial::from_linear_factors(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p, Polynomial::from_real(&[-1.0, 0.0, 1.0]));
    }
}
