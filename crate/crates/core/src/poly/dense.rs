//! Dense univariate polynomials over exact rings.
//!
//! Coefficients are stored constant term first. The zero polynomial is the
//! empty vector; every other value has a nonzero leading coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial with coefficients in `T`, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type ZPoly = Poly<BigInt>;
pub type QPoly = Poly<BigRational>;

impl<T: Clone + Zero + PartialEq> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = T::one();
        Poly { coeffs: c }
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// `self * x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![T::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly { coeffs: c }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(T::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * other) + &Self::constant(c.clone()))
    }
}

impl<'a, T> Add<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + PartialEq + Add<Output = T>,
{
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Poly::new(c)
    }
}

impl<'a, T> Sub<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + PartialEq + Sub<Output = T>,
{
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a - b
            })
            .collect();
        Poly::new(c)
    }
}

impl<'a, T> Mul<&'a Poly<T>> for &'a Poly<T>
where
    T: Clone + Zero + PartialEq + Add<Output = T> + Mul<Output = T>,
{
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}

impl<T> Neg for &Poly<T>
where
    T: Clone + Zero + PartialEq + Neg<Output = T>,
{
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl QPoly {
    /// Euclidean division over Q. Panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    r[k + i] = &r[k + i] - &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_rat();
        }
        a.monic()
    }

    /// Rescale so that coefficients are coprime integers (sign of lead kept).
    /// Keeps remainder sequences from growing.
    fn primitive_rat(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        QPoly::new(ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect())
    }

    pub fn from_int(p: &ZPoly) -> QPoly {
        QPoly::new(p.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// `Some` when every coefficient is an integer.
    pub fn to_int(&self) -> Option<ZPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(ZPoly::new)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    /// Squarefree part (monic), via `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }
}

impl ZPoly {
    pub fn from_i64(c: &[i64]) -> ZPoly {
        ZPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Exact division test over Z for a monic divisor.
    pub fn divides_monic(divisor: &ZPoly, p: &ZPoly) -> bool {
        let Some(dd) = divisor.degree() else {
            return false;
        };
        debug_assert!(divisor.is_monic());
        let mut r = p.coeffs.clone();
        if r.len() <= dd {
            return r.is_empty();
        }
        for k in (0..r.len() - dd).rev() {
            let c = r[k + dd].clone();
            if !c.is_zero() {
                for (i, di) in divisor.coeffs.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
        }
        r[..dd].iter().all(|c| c.is_zero())
    }

    /// Sign of `p(num/den)` evaluated exactly (`den > 0`).
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> i8 {
        // Homogeneous Horner: den^n * p(num/den).
        let n = match self.degree() {
            Some(n) => n,
            None => return 0,
        };
        let mut h = self.coeffs[n].clone();
        let mut dpow = BigInt::one();
        for i in (0..n).rev() {
            dpow *= den;
            h = h * num + &self.coeffs[i] * &dpow;
        }
        if h.is_positive() {
            1
        } else if h.is_negative() {
            -1
        } else {
            0
        }
    }
}

pub fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: scale through bit lengths.
        let n = c.numer();
        let d = c.denom();
        let shift = n.bits() as i64 - d.bits() as i64;
        let (n2, d2) = if shift > 0 {
            (n.clone(), d << (shift as u64))
        } else {
            (n << ((-shift) as u64), d.clone())
        };
        let q = BigRational::new(n2, d2).to_f64().unwrap_or(f64::NAN);
        q * 2f64.powi(shift as i32)
    })
}

/// Horner evaluation of real coefficients at a complex point.
pub fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and derivative of real coefficients at a complex point.
pub fn eval_complex_d(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval_f64(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn derivative_f64(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

impl<T: fmt::Display + Zero + PartialEq + Clone> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Display + Zero + PartialEq + Clone> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn div_rem_recovers_dividend() {
        let a = QPoly::new(vec![q(1, 1), q(-3, 2), q(0, 1), q(2, 1)]);
        let b = QPoly::new(vec![q(1, 3), q(1, 1)]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = QPoly::from_int(&ZPoly::from_i64(&[2, -3, 0, 1]));
        let s = p.squarefree_part();
        assert_eq!(s, QPoly::from_int(&ZPoly::from_i64(&[-2, 1, 1])));
    }

    #[test]
    fn exact_sign() {
        let p = ZPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.sign_at(&BigInt::from(3), &BigInt::from(2)), 1);
        assert_eq!(p.sign_at(&BigInt::from(7), &BigInt::from(5)), -1);
        assert_eq!(p.sign_at(&BigInt::from(-2), &BigInt::from(1)), 1);
    }

    #[test]
    fn monic_division_over_z() {
        let p = ZPoly::from_i64(&[-4, 0, 1]);
        assert!(ZPoly::divides_monic(&ZPoly::from_i64(&[-2, 1]), &p));
        assert!(!ZPoly::divides_monic(&ZPoly::from_i64(&[-1, 1]), &p));
    }

    #[test]
    fn huge_rational_to_f64() {
        let n = BigInt::from(3) << 2000u32;
        let d = BigInt::from(1) << 1999u32;
        let v = rat_to_f64(&BigRational::new(n, d));
        assert!((v - 6.0).abs() < 1e-12);
    }
}
