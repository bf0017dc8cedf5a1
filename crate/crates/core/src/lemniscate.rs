//! Hilbert lemniscates `{z : |p(z)| <= rho^d}` and the integerisation that
//! fits the unit lemniscate of an integer polynomial inside a rational one.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::capacity::{fekete_points, CompactDescriptor, FeketeOptions};
use crate::error::{Error, Result};
use crate::poly::dense::{eval_complex, rat_to_f64};
use crate::poly::{
    aberth_polish, format_rational, rational_string, roots_complex, MonicIntPolynomial, MonicRatPolynomial,
    QPoly, ZPoly,
};

/// Largest degree `nu * d` that [`integerize_power`] will build by default.
pub const DEFAULT_DEGREE_CAP: usize = 5000;

/// The sublevel set `|p(z)| <= rho^deg(p)`. Its capacity is `rho`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemniscate {
    pub p: MonicRatPolynomial,
    #[serde(with = "rational_string")]
    pub rho: BigRational,
}

impl Lemniscate {
    pub fn new(p: MonicRatPolynomial, rho: BigRational) -> Result<Self> {
        let l = Lemniscate { p, rho };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.degree() == 0 {
            return Err(Error::InvalidInput("lemniscate polynomial must have degree >= 1".into()));
        }
        if !self.rho.is_positive() {
            return Err(Error::InvalidInput("lemniscate rho must be positive".into()));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn rho_f64(&self) -> f64 {
        self.rho.to_f64().unwrap_or(f64::NAN)
    }

    /// `rho^d`, the level of the boundary.
    pub fn level(&self) -> f64 {
        self.rho_f64().powi(self.degree() as i32)
    }

    pub fn p_f64(&self) -> Vec<f64> {
        self.p.coeffs().iter().map(rat_to_f64).collect()
    }

    /// Points of the boundary: for each of `m` equally spaced angles, the `d`
    /// solutions of `p(z) = rho^d e^{i theta}`.
    pub fn boundary_points(&self, m: usize) -> Result<Vec<Complex64>> {
        let level = self.level();
        let base: Vec<Complex64> = self.p_f64().iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let mut out = Vec::with_capacity(m * self.degree());
        for k in 0..m {
            let w = Complex64::from_polar(level, std::f64::consts::TAU * k as f64 / m as f64);
            let mut c = base.clone();
            c[0] -= w;
            out.extend(roots_complex(&c)?);
        }
        Ok(out)
    }
}

/// `|p(z)| <= rho^d`, with relative guard `1e-12`.
pub fn lemniscate_contains(l: &Lemniscate, z: Complex64) -> bool {
    let level = l.level();
    eval_complex(&l.p_f64(), z).norm() <= level * (1.0 + 1e-12)
}

/// Unit circle samples, `d` boundary points each.
const BOUNDARY_ANGLES: usize = 720;

/// `P^n - 1` for `n = 1..=n_max`. Every root lies on `|P| = 1`; this is
/// checked by solving `P(z) = omega` for each `n`-th root of unity `omega`.
pub fn unit_lemniscate_integers(p: &MonicIntPolynomial, n_max: usize) -> Result<Vec<MonicIntPolynomial>> {
    if p.degree() == 0 || n_max == 0 {
        return Err(Error::InvalidInput("need deg P >= 1 and n_max >= 1".into()));
    }
    let pf: Vec<Complex64> = p.to_f64().iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let q = &p.poly().pow(n as u32) - &ZPoly::constant(BigInt::one());
        for k in 0..n {
            let omega = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
            let mut c = pf.clone();
            c[0] -= omega;
            for z in roots_complex(&c)? {
                let v = eval_complex(&p.to_f64(), z);
                if (v.powu(n as u32) - 1.0).norm() > 1e-8 {
                    return Err(Error::CertificationFailed(format!("root {z} of P^{n} - 1 misses |P| = 1")));
                }
            }
        }
        out.push(MonicIntPolynomial::new(q)?);
    }
    Ok(out)
}

/// Output of [`integerize_power`]: `p^nu = gamma + sum_l p^l q_l` exactly,
/// where `q_l = sum_k c[l][k] X^k` has every `c[l][k]` in `[0, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct Integerized {
    pub gamma: MonicIntPolynomial,
    #[serde(serialize_with = "rational_matrix")]
    pub q_coeffs: Vec<Vec<BigRational>>,
    pub mu: usize,
    pub nu: usize,
}

fn rational_matrix<S: Serializer>(m: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_rational).collect()).collect();
    strings.serialize(s)
}

impl Integerized {
    /// `q_l` as polynomials.
    pub fn q_polys(&self) -> Vec<QPoly> {
        self.q_coeffs.iter().map(|r| QPoly::new(r.clone())).collect()
    }

    /// `p^nu - gamma - sum_l p^l q_l`, computed exactly. Zero when correct.
    pub fn defect(&self, p: &MonicRatPolynomial) -> QPoly {
        let mut acc = QPoly::zero();
        for q in self.q_polys().iter().rev() {
            acc = &(&acc * p.poly()) + q;
        }
        let pnu = p.poly().pow(self.nu as u32);
        &(&pnu - &QPoly::from_int(self.gamma.poly())) - &acc
    }

    /// `r(z) / p(z)^nu = sum_l q_l(z) p(z)^(l - nu)`, stable for `|p(z)| >= 1`.
    pub fn relative_remainder(&self, pz: Complex64, z: Complex64) -> Complex64 {
        let u = pz.inv();
        let mut acc = Complex64::new(0.0, 0.0);
        for row in &self.q_coeffs {
            let qz = eval_complex(&row.iter().map(rat_to_f64).collect::<Vec<_>>(), z);
            acc = (acc + qz) * u;
        }
        acc * u.powu((self.nu - self.q_coeffs.len()) as u32)
    }

    /// `(Gamma(z), Gamma'(z))` through the expansion in powers of `p`, which
    /// avoids the cancellation that the huge monomial coefficients cause.
    fn eval_d(&self, pf: &[f64], qf: &[Vec<f64>], z: Complex64) -> (Complex64, Complex64) {
        let (pz, dpz) = crate::poly::dense::eval_complex_d(pf, z);
        // S = sum_l p^l q_l by Horner in p, with its derivative.
        let mut s = Complex64::new(0.0, 0.0);
        let mut ds = Complex64::new(0.0, 0.0);
        for row in qf.iter().rev() {
            let (qz, dqz) = crate::poly::dense::eval_complex_d(row, z);
            ds = ds * pz + s * dpz + dqz;
            s = s * pz + qz;
        }
        let pn1 = pz.powu(self.nu as u32 - 1);
        (pn1 * pz - s, pn1 * dpz * self.nu as f64 - ds)
    }
}

fn checked_nu(sigma: usize, n: &BigInt, d: usize, cap: usize) -> Result<usize> {
    let exceeded = |degree: u128| Error::SizeExceeded { degree, cap };
    let n = n.to_u128().ok_or_else(|| exceeded(u128::MAX))?;
    let mut nu: u128 = 1;
    for i in 1..=sigma as u128 {
        nu = nu.checked_mul(i).ok_or_else(|| exceeded(u128::MAX))?;
    }
    for _ in 0..sigma {
        nu = nu.checked_mul(n).ok_or_else(|| exceeded(u128::MAX))?;
    }
    let degree = nu.checked_mul(d as u128).ok_or_else(|| exceeded(u128::MAX))?;
    if degree > cap as u128 {
        return Err(exceeded(degree));
    }
    Ok(nu as usize)
}

/// Replace `p^nu` (`nu = (mu d)! n^(mu d)`, `n` the common denominator of
/// `p`) by a monic integer polynomial, subtracting `c p^l X^k` with
/// `c in [0, 1)` from the top basis element down.
pub fn integerize_power(p: &MonicRatPolynomial, mu: usize, degree_cap: usize) -> Result<Integerized> {
    let d = p.degree();
    if d == 0 || mu == 0 {
        return Err(Error::InvalidInput("integerize_power needs deg p >= 1 and mu >= 1".into()));
    }
    let (n, _) = p.split_denominator();
    let nu = checked_nu(mu * d, &n, d, degree_cap)?;
    let levels = nu - mu;
    let mut powers = Vec::with_capacity(levels);
    let mut acc = QPoly::constant(BigRational::one());
    for _ in 0..levels {
        let next = &acc * p.poly();
        powers.push(acc);
        acc = next;
    }
    let mut t: Vec<BigRational> = (&acc * &p.poly().pow((nu - levels) as u32)).into_coeffs();
    let mut q = vec![vec![BigRational::zero(); d]; levels];
    for l in (0..levels).rev() {
        for k in (0..d).rev() {
            let c = &t[l * d + k];
            let frac = c - c.floor();
            if frac.is_zero() {
                continue;
            }
            for (i, a) in powers[l].coeffs().iter().enumerate() {
                t[i + k] -= &frac * a;
            }
            q[l][k] = frac;
        }
    }
    let gamma = ZPoly::new(t.iter().map(|c| c.to_integer()).collect());
    debug_assert!(t.iter().all(|c| c.is_integer()));
    Ok(Integerized { gamma: MonicIntPolynomial::new(gamma)?, q_coeffs: q, mu, nu })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkCertificate {
    /// Boundary points at which `|Gamma| > 1` and the ratio bound were checked.
    pub boundary_samples: usize,
    /// `sup_{boundary} (1 + |z| + ... + |z|^(d-1))`, sampled, inflated 5%.
    pub m_bound: f64,
    /// Largest `|p^nu - Gamma| / |p^nu|` on the samples.
    pub max_ratio: f64,
    /// Smallest `log |Gamma|` on the samples.
    pub min_log_gamma: f64,
    /// Largest `|p(r)|` over roots `r` of `Gamma`.
    pub max_root_level: f64,
    /// Largest Newton correction `|Gamma / Gamma'|` at the returned roots.
    pub max_root_correction: f64,
    pub roots_inside: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Shrink {
    pub integerized: Integerized,
    pub roots: Vec<Complex64>,
    pub certificate: ShrinkCertificate,
}

impl Shrink {
    pub fn gamma(&self) -> &MonicIntPolynomial {
        &self.integerized.gamma
    }
}

/// An integer monic `Gamma` whose unit lemniscate `|Gamma| <= 1` lies in
/// `l` (which needs `rho > 1`), with a numeric certificate.
pub fn lemniscate_shrink(l: &Lemniscate, degree_cap: usize) -> Result<Shrink> {
    l.validate()?;
    if l.rho <= BigRational::one() {
        return Err(Error::InvalidInput("lemniscate_shrink needs rho > 1".into()));
    }
    let d = l.degree();
    let boundary = l.boundary_points(BOUNDARY_ANGLES)?;
    let m_bound = 1.05
        * boundary
            .iter()
            .map(|z| (0..d).map(|i| z.norm().powi(i as i32)).sum::<f64>())
            .fold(0.0, f64::max);
    let rd = l.level();
    let mut mu = 1;
    while !(m_bound / (rd.powi(mu as i32) * (rd - 1.0)) <= 0.5 && rd.powi(mu as i32) / 2.0 > 1.0) {
        mu += 1;
        if rd.powi(mu as i32).is_infinite() {
            return Err(Error::SizeExceeded { degree: u128::MAX, cap: degree_cap });
        }
    }
    let integerized = integerize_power(&l.p, mu, degree_cap)?;
    let pf = l.p_f64();
    let nu = integerized.nu as f64;

    let mut max_ratio: f64 = 0.0;
    let mut min_log_gamma = f64::INFINITY;
    for &z in &boundary {
        let pz = eval_complex(&pf, z);
        let ratio = integerized.relative_remainder(pz, z);
        max_ratio = max_ratio.max(ratio.norm());
        min_log_gamma = min_log_gamma.min(nu * pz.norm().ln() + (1.0 - ratio).norm().ln());
    }
    if max_ratio > 0.5 || min_log_gamma <= 0.0 {
        return Err(Error::CertificationFailed(format!(
            "on the sampled boundary max |r/p^nu| = {max_ratio:e}, min log|Gamma| = {min_log_gamma}"
        )));
    }

    let roots = gamma_roots(&integerized, &pf, d)?;
    let qf: Vec<Vec<f64>> = integerized.q_coeffs.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
    let max_root_correction = roots
        .iter()
        .map(|&r| {
            let (g, dg) = integerized.eval_d(&pf, &qf, r);
            (g / dg).norm()
        })
        .fold(0.0, f64::max);
    let max_root_level = roots.iter().map(|&r| eval_complex(&pf, r).norm()).fold(0.0, f64::max);
    let roots_inside = max_root_level <= rd + 1e-8;
    if !roots_inside {
        return Err(Error::CertificationFailed(format!(
            "a root of Gamma has |p| = {max_root_level} > rho^d = {rd}"
        )));
    }
    Ok(Shrink {
        integerized,
        roots,
        certificate: ShrinkCertificate {
            boundary_samples: boundary.len(),
            m_bound,
            max_ratio,
            min_log_gamma,
            max_root_level,
            max_root_correction,
            roots_inside,
        },
    })
}

/// Roots of `Gamma`, started from the `nu d` solutions of
/// `p(z) = e^{i theta}` and polished with the `p`-expansion evaluator.
fn gamma_roots(g: &Integerized, pf: &[f64], d: usize) -> Result<Vec<Complex64>> {
    let qf: Vec<Vec<f64>> = g.q_coeffs.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
    let base: Vec<Complex64> = pf.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut z = Vec::with_capacity(g.nu * d);
    for j in 0..g.nu {
        let w = Complex64::from_polar(1.0, TAU * (j as f64 + 0.3) / g.nu as f64);
        let mut c = base.clone();
        c[0] -= w;
        z.extend(roots_complex(&c)?);
    }
    let out = aberth_polish(&mut z, |x| g.eval_d(pf, &qf, x), 500);
    if out.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonConvergence { op: "lemniscate_shrink", detail: "root iteration diverged".into() });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FeketePolynomial {
    /// Coefficients of `prod (X - z_i)`, constant term first.
    pub coeffs: Vec<Complex64>,
    pub points: Vec<Complex64>,
    /// `||F_n||_K^(1/n)`, the sup taken over a dense sample of `K`.
    pub norm_root: f64,
}

impl FeketePolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Real parts of the coefficients; exact for real sets up to rounding.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }
}

fn product_poly(points: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &z in points {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * z;
        }
        c = next;
    }
    c
}

fn dense_sample(k: &CompactDescriptor, m: usize) -> Vec<Complex64> {
    match k {
        CompactDescriptor::IntervalUnion(u) => u
            .bands()
            .flat_map(|(a, b)| (0..=m).map(move |i| Complex64::new(a + (b - a) * i as f64 / m as f64, 0.0)))
            .collect(),
        CompactDescriptor::Circle(r) | CompactDescriptor::Disk(r) => {
            (0..m).map(|i| Complex64::from_polar(*r, TAU * i as f64 / m as f64)).collect()
        }
        CompactDescriptor::Lemniscate(l) => l.boundary_points(m).unwrap_or_default(),
        CompactDescriptor::FiniteSet(p) => p.clone(),
    }
}

/// `F_n = prod (X - z_i)` over Fekete points of `k`, with `||F_n||_K^(1/n)`.
/// The sup is taken on the boundary, which is enough by the maximum principle.
pub fn fekete_polynomial(k: &CompactDescriptor, n: usize, opt: &FeketeOptions) -> Result<FeketePolynomial> {
    let conf = fekete_points(k, n, opt)?;
    let coeffs = product_poly(&conf.points);
    let mut f = FeketePolynomial { coeffs, points: conf.points, norm_root: 0.0 };
    let sup = dense_sample(k, 4000).iter().map(|&z| f.eval(z).norm()).fold(0.0, f64::max);
    f.norm_root = sup.powf(1.0 / n as f64);
    Ok(f)
}

/// A rational lemniscate `|F_n| <= rho^n` around a real set `k`: the Fekete
/// polynomial with its coefficients taken as exact dyadic rationals, and
/// `rho` just above the sampled `||F_n||_K^(1/n)`.
pub fn fekete_lemniscate(k: &CompactDescriptor, n: usize, opt: &FeketeOptions) -> Result<Lemniscate> {
    if !k.is_real() {
        return Err(Error::InvalidInput("fekete_lemniscate needs a real interval union".into()));
    }
    let f = fekete_polynomial(k, n, opt)?;
    let to_rat = |x: f64| {
        BigRational::from_float(x).ok_or_else(|| Error::InvalidInput("non-finite coefficient".into()))
    };
    let mut c = f.real_coeffs().into_iter().map(to_rat).collect::<Result<Vec<_>>>()?;
    *c.last_mut().unwrap() = BigRational::one();
    let p = MonicRatPolynomial::new(QPoly::new(c))?;
    let probe = Lemniscate { p, rho: BigRational::one() };
    let pf = probe.p_f64();
    let sup = dense_sample(k, 4000).iter().map(|&z| eval_complex(&pf, z).norm()).fold(0.0, f64::max);
    let rho = to_rat(sup.powf(1.0 / n as f64) * (1.0 + 1e-6))?;
    Lemniscate::new(probe.p, rho)
}

/// `p * conj(p)` for `p = re + i im` with rational parts: `re^2 + im^2`.
/// The result has rational coefficients and vanishes on the roots of `p`
/// and of its conjugate.
pub fn conjugate_product(re: &QPoly, im: &QPoly) -> QPoly {
    &(re * re) + &(im * im)
}
