//! Exact algebraic operations: companion power maps, root-of-unity
//! classification, resultants and Sturm counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::dense::{QPoly, ZPoly};
use super::monic::{MonicIntPolynomial, MonicRatPolynomial};
use super::roots::{roots_f64, ComplexRootSet};
use crate::error::{Error, Result};

/// Anything that can hand its coefficients over as `f64`.
pub trait RealCoeffs {
    fn f64_coeffs(&self) -> Vec<f64>;
}

impl RealCoeffs for ZPoly {
    fn f64_coeffs(&self) -> Vec<f64> {
        self.to_f64()
    }
}

impl RealCoeffs for QPoly {
    fn f64_coeffs(&self) -> Vec<f64> {
        self.to_f64()
    }
}

impl RealCoeffs for MonicIntPolynomial {
    fn f64_coeffs(&self) -> Vec<f64> {
        self.poly().to_f64()
    }
}

impl RealCoeffs for MonicRatPolynomial {
    fn f64_coeffs(&self) -> Vec<f64> {
        self.poly().to_f64()
    }
}

/// All complex roots with multiplicity, polished to backward residual `tol`.
pub fn roots<P: RealCoeffs + ?Sized>(p: &P, tol: f64) -> Result<ComplexRootSet> {
    roots_f64(&p.f64_coeffs(), tol)
}

type ZMatrix = Vec<Vec<BigInt>>;

fn companion(p: &ZPoly) -> ZMatrix {
    let n = p.degree().unwrap_or(0);
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        m[i][i - 1] = BigInt::one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }
    m
}

fn mat_mul(a: &ZMatrix, b: &ZMatrix) -> ZMatrix {
    let n = a.len();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

fn identity(n: usize) -> ZMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn mat_pow(a: &ZMatrix, mut k: u64) -> ZMatrix {
    let mut base = a.clone();
    let mut acc = identity(a.len());
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Characteristic polynomial `det(xI - A)` of an integer matrix
/// (Faddeev–LeVerrier; every division is exact).
fn charpoly(a: &ZMatrix) -> ZPoly {
    let n = a.len();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -(trace / BigInt::from(k));
    }
    ZPoly::new(c)
}

/// The monic integer polynomial whose roots are the `k`-th powers of the
/// roots of `p`, computed exactly as the characteristic polynomial of the
/// `k`-th power of the companion matrix.
pub fn power_map(p: &MonicIntPolynomial, k: u64) -> Result<MonicIntPolynomial> {
    if p.degree() == 0 || k == 0 {
        return Err(Error::InvalidInput("power_map needs degree >= 1 and k >= 1".into()));
    }
    let m = mat_pow(&companion(p.poly()), k);
    MonicIntPolynomial::new(charpoly(&m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootOfUnityReport {
    pub is_cyclotomic_product: bool,
    pub order: Option<usize>,
}

/// Default cap on the order searched by [`kronecker_classify`].
pub fn default_order_bound(degree: usize) -> usize {
    2 * degree * degree
}

/// Decide whether every root of `p` is a root of unity, and if so return the
/// least `m` with `alpha^m = 1` for every root `alpha`.
pub fn kronecker_classify(
    p: &MonicIntPolynomial,
    tol: f64,
    order_bound: Option<usize>,
) -> Result<RootOfUnityReport> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::InvalidInput("kronecker_classify needs degree >= 1".into()));
    }
    let not_cyclotomic = RootOfUnityReport { is_cyclotomic_product: false, order: None };
    // Repeated roots are numerically fuzzy; locate the squarefree part.
    let sq = QPoly::from_int(p.poly()).squarefree_part();
    let rs = roots(&sq, 1e-8)?;
    if rs.roots.iter().any(|z| (z.norm() - 1.0).abs() > tol) {
        return Ok(not_cyclotomic);
    }
    let unit = ZPoly::from_i64(&[-1, 1]).pow(d as u32);
    let bound = order_bound.unwrap_or_else(|| default_order_bound(d));
    let a = companion(p.poly());
    let mut power = a.clone();
    for m in 1..=bound {
        if m > 1 {
            power = mat_mul(&power, &a);
        }
        if charpoly(&power) == unit {
            return Ok(RootOfUnityReport { is_cyclotomic_product: true, order: Some(m) });
        }
    }
    Err(Error::PrecisionExceeded { bound })
}

/// Monic Chebyshev polynomial of degree `n` for `[-l, l]`, i.e.
/// `l (l/2)^(n-1) cos(n arccos(x / l))`.
pub fn chebyshev_monic(n: usize, half_length: &BigRational) -> Result<MonicRatPolynomial> {
    if n == 0 || !half_length.is_positive() {
        return Err(Error::InvalidInput("chebyshev_monic needs n >= 1 and l > 0".into()));
    }
    let x = QPoly::x();
    if n == 1 {
        return MonicRatPolynomial::new(x);
    }
    let l2 = half_length * half_length;
    let quarter = &l2 / BigRational::from_integer(4.into());
    let mut prev = x.clone();
    let mut cur = &(&x * &x) - &QPoly::constant(&l2 / BigRational::from_integer(2.into()));
    for _ in 2..n {
        let next = &(&x * &cur) - &prev.scale(&quarter);
        prev = cur;
        cur = next;
    }
    MonicRatPolynomial::new(cur)
}

/// Determinant of an integer matrix by fraction-free elimination.
fn bareiss_det(mut m: ZMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(p: &ZPoly, q: &ZPoly) -> BigInt {
    let (Some(n), Some(m)) = (p.degree(), q.degree()) else {
        return BigInt::zero();
    };
    let size = n + m;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for r in 0..m {
        for (i, c) in p.coeffs().iter().rev().enumerate() {
            s[r][r + i] = c.clone();
        }
    }
    for r in 0..n {
        for (i, c) in q.coeffs().iter().rev().enumerate() {
            s[m + r][r + i] = c.clone();
        }
    }
    bareiss_det(s)
}

/// `prod over roots xi of p'(xi)`, exactly; zero iff `p` has a repeated root.
pub fn simple_root_product(p: &MonicIntPolynomial) -> Result<BigInt> {
    if p.degree() < 2 {
        return Err(Error::InvalidInput("simple_root_product needs degree >= 2".into()));
    }
    Ok(resultant(p.poly(), &p.derivative()))
}

/// Number of distinct real roots of `p` in the closed interval `[lo, hi]`,
/// exactly, by a Sturm sequence of the squarefree part.
pub fn sturm_count(p: &QPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let s = p.squarefree_part();
    if s.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut seq = vec![s.clone(), s.derivative()];
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let r = -&r;
        // Positive rescaling keeps signs and curbs growth.
        let den = r.common_denominator();
        let r = r.scale(&BigRational::from_integer(den));
        seq.push(r);
    }
    let changes = |x: &BigRational| {
        let mut count = 0usize;
        let mut last = 0i8;
        for q in &seq {
            let v = q.eval(x);
            let sg = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if sg != 0 {
                if last != 0 && sg != last {
                    count += 1;
                }
                last = sg;
            }
        }
        count
    };
    let mut count = changes(lo).saturating_sub(changes(hi));
    if s.eval(lo).is_zero() {
        count += 1;
    }
    count
}

/// True when every complex root of `p` (with multiplicity) is real and lies
/// in `[lo, hi]`. Exact.
pub fn all_roots_in(p: &QPoly, lo: &BigRational, hi: &BigRational) -> bool {
    let s = p.squarefree_part();
    match s.degree() {
        None | Some(0) => p.degree().unwrap_or(0) == 0,
        Some(d) => sturm_count(&s, lo, hi) == d,
    }
}
