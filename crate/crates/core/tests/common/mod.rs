#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use newton_graph::complex_poly::{newton_map, newton_map_from_roots, Complex64, Polynomial, RationalMap, RootSpec};
use newton_graph::dynamics::is_postcritically_fixed;
use newton_graph::Tolerances;

pub fn unity_roots(d: usize) -> Vec<Complex64> {
    (0..d).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)).collect()
}

pub fn unity(d: usize) -> RationalMap {
    let mut c = vec![0.0; d + 1];
    c[0] = -1.0;
    c[d] = 1.0;
    newton_map(&Polynomial::from_real(&c)).unwrap()
}

/// Roots of a polynomial, ascending coefficients, as companion matrix
/// eigenvalues.
pub fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count().min(c.len() - 1);
    let c = c.split_off(zeros);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = c.len() - 1;
    if n == 0 {
        return roots;
    }
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let schur = m.try_schur(f64::EPSILON, 100_000).expect("Schur iteration converges");
    roots.extend(schur.eigenvalues().expect("complex Schur form").iter().copied());
    roots
}

/// Finite solutions of `f(z) = w`, with multiplicity.
pub fn preimages(f: &RationalMap, w: Complex64) -> Vec<Complex64> {
    let num = f.num().coeffs();
    let den = f.den().coeffs();
    let n = num.len().max(den.len());
    let c: Vec<Complex64> = (0..n)
        .map(|i| num.get(i).copied().unwrap_or_default() - w * den.get(i).copied().unwrap_or_default())
        .collect();
    companion_roots(&c)
}

pub fn poles(f: &RationalMap) -> Vec<Complex64> {
    companion_roots(f.den().coeffs())
}

/// Distinct points up to `tol`.
pub fn dedup(points: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &p in points {
        if out.iter().all(|q| (p - q).norm() > tol) {
            out.push(p);
        }
    }
    out
}

/// Follows the preimages of `w(s)` for `s` from `s0` to `s1` by nearest
/// neighbor matching with adaptive steps; returns start and end points.
pub fn track_preimages(
    f: &RationalMap,
    w: impl Fn(f64) -> Complex64,
    s0: f64,
    s1: f64,
) -> Vec<(Complex64, Complex64)> {
    let start = preimages(f, w(s0));
    let mut cur = start.clone();
    let mut s = s0;
    let mut ds = (s1 - s0) * 1e-6;
    while s < s1 {
        let t = (s + ds).min(s1);
        let next = preimages(f, w(t));
        let sep = |k: usize| {
            next.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, q)| (q - next[k]).norm()).fold(f64::INFINITY, f64::min)
        };
        let mut used = vec![false; next.len()];
        let mut matched = Vec::with_capacity(cur.len());
        let mut ok = next.len() == cur.len();
        for p in &cur {
            let (k, dist) = next
                .iter()
                .enumerate()
                .map(|(k, q)| (k, (p - q).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if used[k] || dist > 0.25 * sep(k) {
                ok = false;
                break;
            }
            used[k] = true;
            matched.push(next[k]);
        }
        if ok {
            cur = matched;
            s = t;
            ds *= 1.5;
        } else {
            ds /= 4.0;
            assert!(ds > 1e-300, "tracking stalled at s = {s}");
        }
    }
    start.into_iter().zip(cur).collect()
}

/// Sturm sequence over the rationals.
fn sturm_chain(p: Vec<BigRational>) -> Vec<Vec<BigRational>> {
    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        p
    }
    fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
            let k = r.len() - 1 - db;
            let q = r.last().unwrap() / b.last().unwrap();
            for i in 0..=db {
                r[k + i] -= &q * &b[i];
            }
            r.pop();
            if r.is_empty() {
                return vec![BigRational::zero()];
            }
            r = trim(r);
            if r.len() - 1 < db {
                break;
            }
        }
        trim(r)
    }
    let deriv: Vec<BigRational> =
        p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    let mut chain = vec![trim(p), trim(deriv)];
    loop {
        let n = chain.len();
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
        if chain.last().unwrap().len() == 1 {
            break;
        }
    }
    chain
}

/// Exact quotient of `a` by a divisor `b`.
fn divide(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / b.last().unwrap();
        for i in 0..=db {
            r[k + i] -= &c * &b[i];
        }
        q[k] = c;
    }
    q
}

/// Sturm chain of the square-free part, in floating point.
fn square_free_chain(p: Vec<BigRational>) -> Vec<Vec<f64>> {
    let chain = sturm_chain(p.clone());
    let g = chain.last().unwrap();
    let chain = if g.len() > 1 { sturm_chain(divide(&p, g)) } else { chain };
    chain.into_iter().map(|q| q.iter().map(|c| c.to_f64().unwrap()).collect()).collect()
}

fn sign_changes(chain: &[Vec<f64>], x: f64) -> usize {
    let signs: Vec<f64> = chain
        .iter()
        .map(|q| q.iter().rev().fold(0.0, |acc, c| acc * x + c))
        .filter(|v| *v != 0.0)
        .collect();
    signs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

fn rational(x: (i64, i64)) -> BigRational {
    BigRational::new(BigInt::from(x.0), BigInt::from(x.1))
}

/// Characteristic polynomial `det(tI - A)` of a matrix of size at most 3,
/// ascending coefficients.
pub fn char_poly(a: &[Vec<(i64, i64)>]) -> Vec<BigRational> {
    let n = a.len();
    let m = |i: usize, j: usize| rational(a[i][j]);
    let one = BigRational::from_integer(BigInt::from(1));
    match n {
        1 => vec![-m(0, 0), one],
        2 => {
            let tr = m(0, 0) + m(1, 1);
            let det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
            vec![det, -tr, one]
        }
        3 => {
            let tr = m(0, 0) + m(1, 1) + m(2, 2);
            let minor = |i: usize, j: usize| m(i, i) * m(j, j) - m(i, j) * m(j, i);
            let c1 = minor(0, 1) + minor(0, 2) + minor(1, 2);
            let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
            vec![-det, c1, -tr, one]
        }
        _ => panic!("size {n} not supported"),
    }
}

/// Largest real root of the characteristic polynomial by Sturm counting.
pub fn largest_real_eigenvalue(a: &[Vec<(i64, i64)>]) -> f64 {
    let chain = square_free_chain(char_poly(a));
    let bound = 1.0
        + a.iter().flatten().map(|&(p, q)| (p as f64 / q as f64).abs()).sum::<f64>();
    // offsets keep the bisection points away from rational roots
    let (mut lo, hi) = (-bound - 0.123_456_789_1, bound + 0.987_654_321_7);
    let v_hi = sign_changes(&chain, hi);
    let mut up = hi;
    assert!(sign_changes(&chain, lo) > v_hi, "no real root");
    while up - lo > 1e-13 {
        let mid = 0.5 * (lo + up);
        if sign_changes(&chain, mid) > v_hi {
            lo = mid;
        } else {
            up = mid;
        }
    }
    0.5 * (lo + up)
}

/// A postcritically fixed cubic Newton map found by searching the family
/// `z^3 + az + 1`, moved by a random affine change of coordinates.
#[derive(Clone, Debug)]
pub struct PcfSample {
    pub a: Complex64,
    /// Steps from the free critical point 0 to a pole.
    pub depth: usize,
    pub roots: Vec<Complex64>,
    pub map: RationalMap,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub samples: Vec<PcfSample>,
    /// Candidates whose postcritically fixed property was not confirmed.
    pub skipped: Vec<String>,
}

fn orbit_to_pole(a: Complex64, depth: usize) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for _ in 0..depth {
        let p = z * z * z + a * z + 1.0;
        let dp = 3.0 * z * z + a;
        z -= p / dp;
    }
    3.0 * z * z + a
}

pub fn search_pcf_cubics(want: usize, rng: &mut ChaCha8Rng, tol: &Tolerances) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    let mut seen: Vec<Complex64> = Vec::new();
    for _ in 0..20_000 {
        if out.samples.len() == want {
            break;
        }
        let depth = rng.gen_range(1..=3);
        let mut a = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..2.0 * PI));
        let mut converged = false;
        for _ in 0..100 {
            let h = orbit_to_pole(a, depth);
            let da = 1e-7 * a.norm().max(1.0);
            let dh = (orbit_to_pole(a + da, depth) - h) / da;
            let step = h / dh;
            if !step.is_finite() {
                break;
            }
            a -= step;
            if step.norm() < 1e-14 * a.norm().max(1.0) {
                converged = orbit_to_pole(a, depth).norm() < 1e-9;
                break;
            }
        }
        if !converged || !a.is_finite() || seen.iter().any(|b| (a - b).norm() < 1e-6) {
            continue;
        }
        let base = companion_roots(&[Complex64::new(1.0, 0.0), a, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let sep = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).map(|(i, j)| (base[i] - base[j]).norm()).fold(f64::INFINITY, f64::min);
        if sep < 1e-2 {
            continue;
        }
        seen.push(a);
        let alpha = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
        let beta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let roots: Vec<Complex64> = base.iter().map(|r| alpha * r + beta).collect();
        let map = newton_map_from_roots(&RootSpec::simple(&roots).unwrap());
        match is_postcritically_fixed(&map, 500, tol) {
            Ok(r) if r.is_postcritically_fixed() => out.samples.push(PcfSample { a, depth, roots, map }),
            Ok(_) => out.skipped.push(format!("a = {a} (depth {depth}): critical orbit undecided")),
            Err(e) => out.skipped.push(format!("a = {a} (depth {depth}): {e}")),
        }
    }
    out
}
