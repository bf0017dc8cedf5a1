//! Polynomial Pell equations `P^2 - D Q^2 = c` on real interval unions.
//!
//! When `E = P^{-1}([-M, M])` for a rational `P` of degree `r`, the pair
//! `(P, 1)` solves the equation with `D = P^2 - M^2` and `E` has capacity
//! `(M/2)^(1/r)`. The periods of the canonical third-kind differential
//! `R dx / sqrt(D)` count the roots of `P` per band, and for `M > 2` the
//! scaled Chebyshev powers `P_n = lambda^n T_n(P / lambda)` can be rounded
//! to monic integer polynomials that keep all their roots in `E`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{CompactDescriptor, IntervalUnion};
use crate::equilibrium::{arcsine_measure, minimize_energy, weak_star_distance, DiscreteMeasure, MinimizeOptions};
use crate::error::{Error, Result};
use crate::poly::dense::{eval_f64, rat_to_f64};
use crate::poly::{rational_string, roots_f64, MonicIntPolynomial, MonicRatPolynomial, QPoly, ZPoly};

pub const DEFAULT_QUAD_NODES: usize = 2048;
pub const DEFAULT_DEGREE_BUDGET: usize = 600;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PellAbelSolution {
    pub p: MonicRatPolynomial,
    pub q: MonicRatPolynomial,
    pub d: MonicRatPolynomial,
    #[serde(with = "rational_string")]
    pub m: BigRational,
    #[serde(with = "rational_string")]
    pub c: BigRational,
    pub r: usize,
}

/// `P^2 - D Q^2` if it is a nonzero constant, else `None`.
pub fn verify_pell_abel(p: &QPoly, q: &QPoly, d: &QPoly) -> Option<BigRational> {
    let v = &(p * p) - &(&(d * q) * q);
    match v.degree() {
        Some(0) => Some(v.coeff(0)),
        _ => None,
    }
}

fn sorted_real_roots(coeffs: &[f64], what: &str) -> Result<Vec<f64>> {
    let rs = roots_f64(coeffs, 1e-12)?;
    let scale = rs.roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if rs.max_imag() > 1e-7 * scale {
        return Err(Error::InvalidInput(format!("{what} has non-real roots")));
    }
    let v = rs.real_parts_sorted();
    if v.windows(2).any(|w| w[1] - w[0] <= 1e-9 * scale) {
        return Err(Error::InvalidInput(format!("{what} has repeated roots")));
    }
    Ok(v)
}

/// Root of a polynomial monotone on `[lo, hi]` with a sign change there.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The Pell solution `(P, 1)` with `D = P^2 - M^2`, and the union
/// `E = P^{-1}([-M, M])`, checked to consist of `r` bands across each of
/// which `P` runs between `-M` and `M`.
pub fn pell_abel_from_chebyshev(p: &MonicRatPolynomial, m: &BigRational) -> Result<(PellAbelSolution, IntervalUnion)> {
    let r = p.degree();
    if r == 0 || !m.is_positive() {
        return Err(Error::InvalidInput("need deg P >= 1 and M > 0".into()));
    }
    let mf = rat_to_f64(m);
    let pf = p.to_f64();
    let dp = crate::poly::dense::derivative_f64(&pf);
    if r >= 2 {
        let crit = roots_f64(&dp, 1e-12)?;
        for z in &crit.roots {
            if z.im.abs() <= 1e-9 * (1.0 + z.norm()) {
                let gap = eval_f64(&pf, z.re).abs() - mf;
                if gap.abs() < 1e-10 * mf.max(1.0) {
                    return Err(Error::DegenerateCriticalValue(gap));
                }
            }
        }
    }
    let m2 = m * m;
    let d = &(p.poly() * p.poly()) - &QPoly::constant(m2.clone());
    let ends = sorted_real_roots(&d.to_f64(), "P^2 - M^2")?;
    if ends.len() != 2 * r {
        return Err(Error::InvalidInput("P^2 - M^2 must have 2r real roots".into()));
    }
    for pair in ends.chunks(2) {
        let (a, b) = (pair[0], pair[1]);
        let (pa, pb) = (eval_f64(&pf, a), eval_f64(&pf, b));
        let tol = 1e-8 * mf.max(1.0);
        if (pa.abs() - mf).abs() > tol || (pb.abs() - mf).abs() > tol || pa.signum() == pb.signum() {
            return Err(Error::InvalidInput("P does not sweep [-M, M] across every band".into()));
        }
        if eval_f64(&pf, 0.5 * (a + b)).abs() > mf {
            return Err(Error::InvalidInput("bands of P^{-1}([-M, M]) are not consecutive root pairs".into()));
        }
    }
    let e = IntervalUnion::new(ends)?;
    let sol = PellAbelSolution {
        p: p.clone(),
        q: MonicRatPolynomial::new(QPoly::constant(BigRational::one()))?,
        d: MonicRatPolynomial::new(d)?,
        m: m.clone(),
        c: m2,
        r,
    };
    Ok((sol_checked(sol)?, e))
}

fn sol_checked(sol: PellAbelSolution) -> Result<PellAbelSolution> {
    match verify_pell_abel(sol.p.poly(), sol.q.poly(), sol.d.poly()) {
        Some(c) if c == sol.c => Ok(sol),
        _ => Err(Error::InvalidInput("P^2 - D Q^2 is not the constant M^2".into())),
    }
}

/// `(M/2)^(1/r)`, the capacity of `P^{-1}([-M, M])`.
pub fn pell_capacity(sol: &PellAbelSolution) -> f64 {
    (rat_to_f64(&sol.m) / 2.0).powf(1.0 / sol.r as f64)
}

/// Midpoint rule in `theta` for `int_0^pi f(theta) d theta`, doubling the
/// node count from `nodes` until two values agree to `1e-10`.
fn theta_quadrature(f: impl Fn(f64) -> f64, nodes: usize) -> Result<f64> {
    let rule = |n: usize| -> f64 {
        let h = PI / n as f64;
        (0..n).map(|k| f((k as f64 + 0.5) * h)).sum::<f64>() * h
    };
    let mut n = nodes.max(8);
    let mut prev = rule(n);
    while n <= 1 << 22 {
        n *= 2;
        let cur = rule(n);
        if (cur - prev).abs() <= 1e-10 * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { op: "quadrature", detail: format!("no agreement at {n} nodes") })
}

/// `int_l^u f(x) / sqrt|D(x)| dx` where `l, u` are consecutive roots of `D`
/// (`others` holds the remaining roots). With `x = mid + h cos(theta)` the
/// square-root singularities at both ends cancel against `dx`.
fn interval_integral(f: impl Fn(f64) -> f64, l: f64, u: f64, others: &[f64], nodes: usize) -> Result<f64> {
    let (mid, h) = (0.5 * (l + u), 0.5 * (u - l));
    theta_quadrature(
        |t| {
            let x = mid + h * t.cos();
            let rest: f64 = others.iter().map(|e| (x - e).abs()).product();
            f(x) / rest.sqrt()
        },
        nodes,
    )
}

fn endpoints_of(d: &MonicRatPolynomial) -> Result<Vec<f64>> {
    let deg = d.degree();
    if deg < 2 || deg % 2 != 0 {
        return Err(Error::InvalidInput("D must have even degree 2g + 2 >= 2".into()));
    }
    let ends = sorted_real_roots(&d.to_f64(), "D")?;
    if ends.len() != deg {
        return Err(Error::InvalidInput("D must have only real roots".into()));
    }
    Ok(ends)
}

fn others(ends: &[f64], skip: usize) -> Vec<f64> {
    ends.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip && *i != skip + 1)
        .map(|(_, &e)| e)
        .collect()
}

/// The monic degree-`g` polynomial `R` whose `R dx / sqrt(D)` integrates to
/// zero over every gap, with the per-gap residuals.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalForm {
    /// Coefficients of `R`, constant term first, leading 1.
    pub r_coeffs: Vec<f64>,
    pub gap_integrals: Vec<f64>,
    pub endpoints: Vec<f64>,
}

pub fn canonical_form_r(d: &MonicRatPolynomial, quad_nodes: usize) -> Result<CanonicalForm> {
    let ends = endpoints_of(d)?;
    let g = ends.len() / 2 - 1;
    if g == 0 {
        return Ok(CanonicalForm { r_coeffs: vec![1.0], gap_integrals: vec![], endpoints: ends });
    }
    let mut a = DMatrix::<f64>::zeros(g, g);
    let mut rhs = DVector::<f64>::zeros(g);
    for j in 0..g {
        // gap j lies between ends[2j + 1] and ends[2j + 2]
        let o = others(&ends, 2 * j + 1);
        let (l, u) = (ends[2 * j + 1], ends[2 * j + 2]);
        for i in 0..g {
            a[(j, i)] = interval_integral(|x| x.powi(i as i32), l, u, &o, quad_nodes)?;
        }
        rhs[j] = -interval_integral(|x| x.powi(g as i32), l, u, &o, quad_nodes)?;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let cond = sv.max() / sv.min();
    if !(cond <= 1e12) {
        return Err(Error::IllConditioned(cond));
    }
    let c = a.lu().solve(&rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
    let mut r_coeffs: Vec<f64> = c.iter().copied().collect();
    r_coeffs.push(1.0);
    let gap_integrals = (0..g)
        .map(|j| {
            let o = others(&ends, 2 * j + 1);
            interval_integral(|x| eval_f64(&r_coeffs, x), ends[2 * j + 1], ends[2 * j + 2], &o, quad_nodes)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CanonicalForm { r_coeffs, gap_integrals, endpoints: ends })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    pub r_coeffs: Vec<f64>,
    pub gap_integrals: Vec<f64>,
    /// `|eta_j| = |int_{band j} R / sqrt(-D)|`.
    pub eta_abs: Vec<f64>,
    /// Signs `epsilon_j` with `sum epsilon_j |eta_j| = pi`.
    pub signs: Vec<i8>,
    /// `|sum epsilon_j |eta_j| - pi|`.
    pub pi_residual: f64,
    /// `|eta_j| / pi`; times `deg P` this is the root count of band `j`.
    pub fractions: Vec<f64>,
}

/// Band periods of the canonical form and the sign assignment that sums them
/// to `pi`.
pub fn periods(d: &MonicRatPolynomial, quad_nodes: usize) -> Result<PeriodReport> {
    let form = canonical_form_r(d, quad_nodes)?;
    let ends = &form.endpoints;
    let bands = ends.len() / 2;
    let eta_abs = (0..bands)
        .map(|j| {
            let o = others(ends, 2 * j);
            interval_integral(|x| eval_f64(&form.r_coeffs, x), ends[2 * j], ends[2 * j + 1], &o, quad_nodes)
                .map(f64::abs)
        })
        .collect::<Result<Vec<_>>>()?;
    if bands > 20 {
        return Err(Error::InvalidInput("sign search is limited to 20 bands".into()));
    }
    let mut best = (f64::INFINITY, 0u32);
    for mask in 0..1u32 << bands {
        let s: f64 = eta_abs
            .iter()
            .enumerate()
            .map(|(j, e)| if mask >> j & 1 == 1 { -e } else { *e })
            .sum();
        let res = (s - PI).abs();
        if res < best.0 {
            best = (res, mask);
        }
    }
    if best.0 > 1e-8 {
        return Err(Error::SignSearchFailed(best.0));
    }
    let signs = (0..bands).map(|j| if best.1 >> j & 1 == 1 { -1 } else { 1 }).collect();
    let fractions = eta_abs.iter().map(|e| e / PI).collect();
    Ok(PeriodReport {
        r_coeffs: form.r_coeffs,
        gap_integrals: form.gap_integrals,
        eta_abs,
        signs,
        pi_residual: best.0,
        fractions,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCounts {
    /// `r |eta_j| / pi` before rounding.
    pub unrounded: Vec<f64>,
    pub counts: Vec<usize>,
    /// Real roots of `P` found in each band numerically.
    pub direct: Vec<usize>,
}

impl RootCounts {
    pub fn consistent(&self) -> bool {
        self.counts == self.direct
    }
}

/// Roots of `P` per band from the periods, cross-checked by locating the
/// roots of `P` directly.
pub fn root_counts(sol: &PellAbelSolution, report: &PeriodReport) -> Result<RootCounts> {
    let unrounded: Vec<f64> = report.fractions.iter().map(|f| f * sol.r as f64).collect();
    for &u in &unrounded {
        if (u - u.round()).abs() > 1e-4 {
            return Err(Error::NonIntegral { value: u });
        }
    }
    let counts: Vec<usize> = unrounded.iter().map(|u| u.round() as usize).collect();
    if counts.iter().sum::<usize>() != sol.r {
        return Err(Error::NonIntegral { value: unrounded.iter().sum() });
    }
    let ends = endpoints_of(&sol.d)?;
    let roots = roots_f64(&sol.p.to_f64(), 1e-12)?;
    let direct = ends
        .chunks(2)
        .map(|b| {
            roots
                .roots
                .iter()
                .filter(|z| z.im.abs() <= 1e-9 && z.re >= b[0] && z.re <= b[1])
                .count()
        })
        .collect();
    Ok(RootCounts { unrounded, counts, direct })
}

fn sample_band(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| a + (b - a) * i as f64 / n as f64)
}

/// Check that `P - q` keeps at least `r` roots in `E` when
/// `sup_E |q| < M`, by counting sign changes between the points of each band
/// where `|P| = M` (its endpoints and the roots of `Q`).
pub fn perturbation_root_check(sol: &PellAbelSolution, e: &IntervalUnion, q: &[f64]) -> Result<bool> {
    let mf = rat_to_f64(&sol.m);
    let sup = e
        .bands()
        .flat_map(|(a, b)| sample_band(a, b, 2000))
        .map(|x| eval_f64(q, x).abs())
        .fold(0.0, f64::max);
    if sup >= mf {
        return Err(Error::HypothesisViolated { sup, m: mf });
    }
    let qroots: Vec<f64> = if sol.q.degree() == 0 {
        vec![]
    } else {
        roots_f64(&sol.q.to_f64(), 1e-12)?
            .roots
            .iter()
            .filter(|z| z.im.abs() <= 1e-9)
            .map(|z| z.re)
            .collect()
    };
    let pf = sol.p.to_f64();
    let mut changes = 0;
    for (a, b) in e.bands() {
        let mut pts = vec![a, b];
        pts.extend(qroots.iter().filter(|&&x| x > a && x < b));
        pts.sort_by(f64::total_cmp);
        let vals: Vec<f64> = pts.iter().map(|&x| eval_f64(&pf, x) - eval_f64(q, x)).collect();
        changes += vals.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    }
    Ok(changes >= sol.r)
}

/// Which `n` [`robinson_sequence`] tries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `n = 1, 2, 4, 8, ...`
    #[default]
    Doubling,
    /// Every `n = 1, 2, 3, ...`
    Every,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobinsonOptions {
    pub degree_budget: usize,
    pub schedule: Schedule,
}

impl Default for RobinsonOptions {
    fn default() -> Self {
        RobinsonOptions { degree_budget: DEFAULT_DEGREE_BUDGET, schedule: Schedule::Doubling }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RobinsonPolynomial {
    pub n: usize,
    pub poly: MonicIntPolynomial,
    /// All `n r` roots, ascending; each bracketed by an exact sign change.
    pub roots: Vec<f64>,
    /// `1.02 sup_E |q_n| / (2 lambda^n)`; acceptance needs it below 1.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RobinsonSequence {
    pub accepted: Vec<RobinsonPolynomial>,
    /// `(n, ratio)` of every rejected candidate.
    pub rejected: Vec<(usize, f64)>,
}

/// The scaled Chebyshev powers `P_k = lambda^k T_k(P / lambda)` for
/// `k < count`, with `P_0 := 1` as a basis element.
fn chebyshev_powers(p: &QPoly, lambda2: &BigRational, count: usize) -> Vec<QPoly> {
    let two = QPoly::constant(BigRational::from_integer(2.into()));
    let mut out = vec![QPoly::constant(BigRational::one())];
    let (mut prev, mut cur) = (two, p.clone());
    for _ in 1..count {
        out.push(cur.clone());
        let next = &(p * &cur) - &prev.scale(lambda2);
        prev = cur;
        cur = next;
    }
    out.truncate(count);
    out
}

/// Evaluates `P_k(x)` for `k = 0..=n` by the three-term recurrence; stable on
/// `E`, where `|P_k| <= 2 lambda^k`. Entry 0 is the basis element 1.
fn chebyshev_values(px: f64, lambda2: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    let (mut prev, mut cur) = (2.0, px);
    for _ in 1..=n {
        out.push(cur);
        let next = px * cur - lambda2 * prev;
        prev = cur;
        cur = next;
    }
}

struct Candidate {
    n: usize,
    gamma: ZPoly,
    /// `c[k][j]` multiplies `X^j P_k`.
    c: Vec<Vec<f64>>,
}

fn reduce(basis: &[QPoly], pn: &QPoly, n: usize, r: usize) -> Candidate {
    let mut t: Vec<BigRational> = pn.coeffs().to_vec();
    let mut c = vec![vec![0.0; r]; n];
    for idx in (0..n * r).rev() {
        let (k, j) = (idx / r, idx % r);
        let frac = &t[idx] - t[idx].floor();
        if frac.is_zero() {
            continue;
        }
        for (i, a) in basis[k].coeffs().iter().enumerate() {
            t[i + j] -= &frac * a;
        }
        c[k][j] = rat_to_f64(&frac);
    }
    let gamma = ZPoly::new(t.into_iter().map(|v| v.to_integer()).collect());
    Candidate { n, gamma, c }
}

/// Evaluates `Gamma_n(x) = P_n(x) - sum c[k][j] x^j P_k(x)` stably.
fn gamma_value(cand: &Candidate, pf: &[f64], lambda2: f64, x: f64, buf: &mut Vec<f64>) -> (f64, f64) {
    chebyshev_values(eval_f64(pf, x), lambda2, cand.n, buf);
    let mut q = 0.0;
    for (k, row) in cand.c.iter().enumerate() {
        let mut xj = 1.0;
        for &cj in row {
            q += cj * xj * buf[k];
            xj *= x;
        }
    }
    (buf[cand.n] - q, q)
}

/// Points of band `[a, b]` where `P = M cos(i pi / n)`, `i = 0..=n`, in the
/// order of increasing `x`. `P` is monotone across the band.
fn alternation_points(pf: &[f64], mf: f64, a: f64, b: f64, n: usize) -> Vec<f64> {
    let increasing = eval_f64(pf, b) > eval_f64(pf, a);
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| {
            let level = mf * (PI * i as f64 / n as f64).cos();
            if i == 0 {
                return if increasing { b } else { a };
            }
            if i == n {
                return if increasing { a } else { b };
            }
            bisect(|x| eval_f64(pf, x) - level, a, b)
        })
        .collect();
    pts.sort_by(f64::total_cmp);
    pts
}

/// Dyadic rational `k / 2^32` near `x`, rounded toward `[a, b]`'s interior
/// at the endpoints.
fn dyadic(x: f64, a: f64, b: f64) -> BigInt {
    let s = x * 4294967296.0;
    let v = if x <= a { s.ceil() } else if x >= b { s.floor() } else { s.round() };
    BigInt::from(v as i128)
}

fn try_candidate(
    cand: Candidate,
    e: &IntervalUnion,
    pf: &[f64],
    mf: f64,
    lambda2: f64,
    r: usize,
) -> std::result::Result<RobinsonPolynomial, (usize, f64)> {
    let lambda = lambda2.sqrt();
    let n = cand.n;
    let mut buf = Vec::with_capacity(n + 1);
    let mut sup: f64 = 0.0;
    for (a, b) in e.bands() {
        for x in sample_band(a, b, 4000) {
            sup = sup.max(gamma_value(&cand, pf, lambda2, x, &mut buf).1.abs());
        }
    }
    // ratio of 1.02 sup|q| to 2 lambda^n, in logs to survive large n
    let ratio = (1.02f64.ln() + sup.ln() - 2f64.ln() - n as f64 * lambda.ln()).exp();
    if !(ratio < 1.0) {
        return Err((n, ratio));
    }
    // Certify n sign changes per band exactly, then bisect each bracket.
    let den = BigInt::from(1u64 << 32);
    let mut roots = Vec::with_capacity(n * r);
    for (a, b) in e.bands() {
        let pts = alternation_points(pf, mf, a, b, n);
        let signs: Vec<i8> = pts.iter().map(|&x| cand.gamma.sign_at(&dyadic(x, a, b), &den)).collect();
        for (w, s) in pts.windows(2).zip(signs.windows(2)) {
            if s[0] * s[1] >= 0 {
                return Err((n, ratio));
            }
            roots.push(bisect(|x| gamma_value(&cand, pf, lambda2, x, &mut Vec::new()).0, w[0], w[1]));
        }
    }
    roots.sort_by(f64::total_cmp);
    if roots.len() != n * r || roots.iter().any(|&x| !e.contains(x, 1e-7)) {
        return Err((n, ratio));
    }
    let poly = MonicIntPolynomial::new(cand.gamma).map_err(|_| (n, ratio))?;
    Ok(RobinsonPolynomial { n, poly, roots, ratio })
}

/// Monic integer polynomials of growing degree with every root in
/// `E = P^{-1}([-M, M])`, for `M > 2` (so that `Cap(E) > 1`).
///
/// For each scheduled `n` with `n r <= budget`, the non-integral part of
/// `P_n = lambda^n T_n(P / lambda)` (`lambda = M / 2`) is removed by
/// subtracting `q_n = sum c_{j,k} X^j P_k` with `c_{j,k} in [0, 1)`, from the
/// top basis element down. `Gamma_n = P_n - q_n` is accepted when the sampled
/// `sup_E |q_n|` (inflated by 2%) stays below `2 lambda^n` and `Gamma_n`
/// changes sign, evaluated exactly, between consecutive points where
/// `|P_n| = 2 lambda^n`. That gives `n r` roots in `E`, hence all of them.
pub fn robinson_sequence(p: &MonicRatPolynomial, m: &BigRational, opt: &RobinsonOptions) -> Result<RobinsonSequence> {
    let two = BigRational::from_integer(2.into());
    if *m <= two {
        return Err(Error::InvalidInput("robinson_sequence needs M > 2 (capacity above 1)".into()));
    }
    let (_, e) = pell_abel_from_chebyshev(p, m)?;
    let r = p.degree();
    let lambda = m / &two;
    let lambda2 = &lambda * &lambda;
    let mut ns = Vec::new();
    let mut n = 1;
    while n * r <= opt.degree_budget {
        ns.push(n);
        n = match opt.schedule {
            Schedule::Doubling => 2 * n,
            Schedule::Every => n + 1,
        };
    }
    let Some(&n_max) = ns.last() else {
        return Err(Error::InvalidInput("degree budget below deg P".into()));
    };
    let basis = chebyshev_powers(p.poly(), &lambda2, n_max + 1);
    let pf = p.to_f64();
    let (mf, l2f) = (rat_to_f64(m), rat_to_f64(&lambda2));
    let results: Vec<_> = ns
        .par_iter()
        .map(|&n| {
            let cand = reduce(&basis, &basis[n], n, r);
            try_candidate(cand, &e, &pf, mf, l2f, r)
        })
        .collect();
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for res in results {
        match res {
            Ok(a) => accepted.push(a),
            Err(x) => rejected.push(x),
        }
    }
    if accepted.is_empty() {
        let best_ratio = rejected.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
        return Err(Error::NoneAccepted { best_ratio });
    }
    Ok(RobinsonSequence { accepted, rejected })
}

/// Kolmogorov distance of each root-counting measure to the equilibrium
/// measure of `e`: the arcsine law for a segment, the grid minimiser
/// (400 nodes) for a union. Each entry is `(degree, distance)`.
pub fn equidistribution_report(root_sets: &[Vec<f64>], e: &IntervalUnion) -> Result<Vec<(usize, f64)>> {
    let reference = if e.num_bands() == 1 {
        let (a, b) = e.hull();
        arcsine_measure(a, b, 4096)?
    } else {
        let m = minimize_energy(&CompactDescriptor::IntervalUnion(e.clone()), 400, &MinimizeOptions::default())?;
        m.measure
    };
    root_sets
        .iter()
        .map(|roots| {
            let mu = DiscreteMeasure::counting_real(roots)?;
            Ok((roots.len(), weak_star_distance(&mu, &reference)?))
        })
        .collect()
}

/// Numeric roots of an integer polynomial of moderate degree, for feeding
/// [`equidistribution_report`].
pub fn real_roots(p: &MonicIntPolynomial) -> Result<Vec<f64>> {
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    Ok(roots_f64(&coeffs, 1e-12)?.real_parts_sorted())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[(i64, i64)]) -> QPoly {
        QPoly::from_ratios(c)
    }

    #[test]
    fn pell_constants() {
        assert_eq!(verify_pell_abel(&q(&[(0, 1), (1, 1)]), &q(&[(1, 1)]), &q(&[(-4, 1), (0, 1), (1, 1)])), Some(BigRational::from_integer(4.into())));
        let d = &q(&[(-1, 1), (0, 1), (1, 1)]) * &q(&[(-4, 1), (0, 1), (1, 1)]);
        assert_eq!(
            verify_pell_abel(&q(&[(-5, 2), (0, 1), (1, 1)]), &q(&[(1, 1)]), &d),
            Some(BigRational::new(9.into(), 4.into()))
        );
        assert_eq!(verify_pell_abel(&q(&[(0, 1), (1, 1)]), &q(&[(1, 1)]), &q(&[(0, 1), (-1, 1), (1, 1)])), None);
    }

    #[test]
    fn quadrature_of_arcsine() {
        let v = interval_integral(|_| 1.0, -2.0, 2.0, &[], 64).unwrap();
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_powers_of_x_with_lambda_two() {
        let b = chebyshev_powers(&q(&[(0, 1), (1, 1)]), &BigRational::from_integer(4.into()), 4);
        // 2^3 T_3(x / 2) = x^3 - 12 x
        assert_eq!(b[3], q(&[(0, 1), (-12, 1), (0, 1), (1, 1)]));
        assert_eq!(b[0], q(&[(1, 1)]));
    }
}
