//! Exhaustive search for monic integer polynomials whose roots all lie in a
//! real segment.
//!
//! Two enumerators share one exact membership test:
//!
//! * [`enumerate_naive`] walks the whole coefficient box given by
//!   [`coefficient_bounds`];
//! * [`enumerate_pruned`] fixes coefficients from the top down and, for each
//!   prefix, bounds the next coefficient by asking the corresponding
//!   derivative to keep all its roots real and inside the segment.
//!
//! Membership is decided exactly with a Sturm count on the squarefree part,
//! after cheap floating-point necessary conditions have discarded most of
//! the box.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::dense::{derivative_f64, eval_f64};
use crate::poly::{all_roots_in, roots_f64, MonicIntPolynomial, QPoly, ZPoly};

/// Default slack on root membership.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default node budget for [`enumerate_naive`].
pub const DEFAULT_NAIVE_BUDGET: f64 = 5e7;

/// Search request: segment `[a, b]`, maximal degree and membership slack.
#[derive(Clone, Debug)]
pub struct SegmentSearchSpec {
    pub a: BigRational,
    pub b: BigRational,
    pub max_degree: usize,
    pub tol: f64,
}

impl SegmentSearchSpec {
    pub fn new(a: BigRational, b: BigRational, max_degree: usize) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidInput("segment needs a < b".into()));
        }
        if max_degree == 0 {
            return Err(Error::InvalidInput("max_degree must be at least 1".into()));
        }
        Ok(SegmentSearchSpec { a, b, max_degree, tol: DEFAULT_TOL })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(a: (i64, i64), b: (i64, i64), max_degree: usize) -> Result<Self> {
        Self::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            max_degree,
        )
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn a_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
    }

    pub fn b_f64(&self) -> f64 {
        self.b.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EnumerationResult {
    pub polys_by_degree: BTreeMap<usize, Vec<MonicIntPolynomial>>,
    /// Number of algebraic integers (roots counted once per polynomial) by degree.
    pub new_integers_by_degree: BTreeMap<usize, usize>,
    /// Roots of every listed polynomial, sorted ascending.
    pub roots_flat: Vec<f64>,
    /// Polynomials missing the segment by more than `tol` but less than `10 tol`.
    pub flagged: Vec<MonicIntPolynomial>,
}

impl EnumerationResult {
    pub fn all_polys(&self) -> impl Iterator<Item = &MonicIntPolynomial> {
        self.polys_by_degree.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.polys_by_degree.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, degree: usize) -> usize {
        self.polys_by_degree.get(&degree).map_or(0, Vec::len)
    }

    fn from_polys(mut polys: Vec<MonicIntPolynomial>, flagged: Vec<MonicIntPolynomial>) -> Self {
        polys.sort_by(|p, q| p.coeffs().cmp(q.coeffs()));
        polys.dedup();
        let mut out = EnumerationResult { flagged, ..Default::default() };
        for p in polys {
            out.polys_by_degree.entry(p.degree()).or_default().push(p);
        }
        out.refresh_counts();
        out
    }

    fn refresh_counts(&mut self) {
        self.new_integers_by_degree = self
            .polys_by_degree
            .iter()
            .map(|(&d, v)| (d, d * v.len()))
            .collect();
        let mut roots = Vec::new();
        for p in self.all_polys() {
            if let Ok(r) = roots_f64(&p.to_f64(), 1e-6) {
                roots.extend(r.roots.iter().map(|z| z.re));
            }
        }
        roots.sort_by(f64::total_cmp);
        self.roots_flat = roots;
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Box bounds on the coefficients of a degree-`n` monic polynomial with all
/// roots in `[a, b]`: the coefficient of `x^(n-k)` lies in `[-B_k, B_k]` with
/// `B_k = floor(R^k C(n, k))`, `R = max(|a|, |b|)`.
///
/// The returned vector is indexed by power: entry `i` bounds the coefficient
/// of `x^i`, for `i < n`.
pub fn coefficient_bounds(n: usize, a: &BigRational, b: &BigRational) -> Vec<(i64, i64)> {
    let r = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    let mut out = vec![(0, 0); n];
    let mut rk = BigRational::from_integer(1.into());
    for k in 1..=n {
        rk = &rk * &r;
        let bk = (&rk * BigRational::from_integer(binomial(n, k))).floor().to_integer();
        let bk = bk.to_i64().unwrap_or(i64::MAX);
        out[n - k] = (-bk, bk);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Membership {
    Inside,
    NearMiss,
    Outside,
}

/// Shared membership test. `lo/hi` are the segment widened by `tol`, the
/// `_far` pair by `10 tol`.
struct MembershipTest {
    lo: BigRational,
    hi: BigRational,
    lo_far: BigRational,
    hi_far: BigRational,
    lo_f: f64,
    hi_f: f64,
}

impl MembershipTest {
    fn new(spec: &SegmentSearchSpec) -> Self {
        let t = BigRational::from_f64(spec.tol).unwrap_or_else(BigRational::zero);
        let t10 = &t * BigRational::from_integer(10.into());
        let lo_far = &spec.a - &t10;
        let hi_far = &spec.b + &t10;
        MembershipTest {
            lo: &spec.a - &t,
            hi: &spec.b + &t,
            lo_f: lo_far.to_f64().unwrap_or(f64::NEG_INFINITY),
            hi_f: hi_far.to_f64().unwrap_or(f64::INFINITY),
            lo_far,
            hi_far,
        }
    }

    /// Floating-point necessary conditions for all roots in `[lo_f, hi_f]`:
    /// every derivative is nonnegative at the right end and has sign
    /// `(-1)^(n-k)` at the left end (Gauss–Lucas).
    fn quick_reject(&self, c: &[f64]) -> bool {
        let n = c.len() - 1;
        let mut d = c.to_vec();
        for k in 0..n {
            let scale_hi = d.iter().rev().fold(0.0, |acc, v| acc * self.hi_f.abs() + v.abs());
            let scale_lo = d.iter().rev().fold(0.0, |acc, v| acc * self.lo_f.abs() + v.abs());
            let vh = eval_f64(&d, self.hi_f);
            if vh < -1e-9 * scale_hi {
                return true;
            }
            let vl = eval_f64(&d, self.lo_f);
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            if sign * vl < -1e-9 * scale_lo {
                return true;
            }
            d = derivative_f64(&d);
        }
        false
    }

    fn classify(&self, coeffs: &[i64]) -> Membership {
        let c: Vec<f64> = coeffs.iter().map(|&v| v as f64).collect();
        if self.quick_reject(&c) {
            return Membership::Outside;
        }
        if let Ok(r) = roots_f64(&c, 1e-6) {
            let loose = 0.05;
            let off = r.roots.iter().any(|z| {
                z.im.abs() > loose || z.re < self.lo_f - loose || z.re > self.hi_f + loose
            });
            if off {
                return Membership::Outside;
            }
        }
        let q = QPoly::from_int(&ZPoly::from_i64(coeffs));
        if all_roots_in(&q, &self.lo, &self.hi) {
            Membership::Inside
        } else if all_roots_in(&q, &self.lo_far, &self.hi_far) {
            Membership::NearMiss
        } else {
            Membership::Outside
        }
    }
}

struct Collector {
    found: Vec<MonicIntPolynomial>,
    flagged: Vec<MonicIntPolynomial>,
}

impl Collector {
    fn push(&mut self, m: Membership, coeffs: &[i64]) {
        let p = || MonicIntPolynomial::from_i64(coeffs);
        match m {
            Membership::Inside => self.found.push(p()),
            Membership::NearMiss => self.flagged.push(p()),
            Membership::Outside => {}
        }
    }
}

/// Estimated number of leaves of the naive search box.
pub fn naive_node_estimate(spec: &SegmentSearchSpec) -> f64 {
    (1..=spec.max_degree)
        .map(|n| {
            coefficient_bounds(n, &spec.a, &spec.b)
                .iter()
                .map(|(lo, hi)| (hi - lo + 1) as f64)
                .product::<f64>()
        })
        .sum()
}

/// Walk the whole coefficient box of every degree up to `max_degree`.
pub fn enumerate_naive(spec: &SegmentSearchSpec, budget: f64) -> Result<EnumerationResult> {
    let estimated = naive_node_estimate(spec);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let member = MembershipTest::new(spec);
    let mut out = Collector { found: Vec::new(), flagged: Vec::new() };
    for n in 1..=spec.max_degree {
        let bounds = coefficient_bounds(n, &spec.a, &spec.b);
        let mut coeffs: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        coeffs.push(1);
        'odometer: loop {
            out.push(member.classify(&coeffs), &coeffs);
            for i in 0..n {
                if coeffs[i] < bounds[i].1 {
                    coeffs[i] += 1;
                    continue 'odometer;
                }
                coeffs[i] = bounds[i].0;
            }
            break;
        }
    }
    Ok(EnumerationResult::from_polys(out.found, out.flagged))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

struct Pruner<'a> {
    member: &'a MembershipTest,
    bounds: Vec<(i64, i64)>,
    n: usize,
    lo: f64,
    hi: f64,
}

impl Pruner<'_> {
    /// Coefficients of `P^(l)` with `a_l` replaced by zero, i.e. the tail
    /// `sum_{k>=1} (l+k)!/k! a_{l+k} X^k`.
    fn tail(&self, coeffs: &[i64], l: usize) -> Vec<f64> {
        let mut t = vec![0.0; self.n - l + 1];
        for k in 1..=self.n - l {
            t[k] = factorial(l + k) / factorial(k) * coeffs[l + k] as f64;
        }
        t
    }

    /// Admissible range for `a_l` given fixed `a_{l+1..n}`.
    fn range(&self, coeffs: &[i64], l: usize) -> Option<(i64, i64)> {
        let lf = factorial(l);
        let t = self.tail(coeffs, l);
        let deg = self.n - l;
        // c = l! a_l; P^(l) = c + T
        let mut c_lo = f64::NEG_INFINITY;
        let mut c_hi = f64::INFINITY;
        let slack = |v: f64| 1e-7 * (1.0 + v.abs());

        // Right end: c + T(hi) >= 0. Left end: (-1)^deg (c + T(lo)) >= 0.
        let th = eval_f64(&t, self.hi);
        c_lo = c_lo.max(-th - slack(th));
        let tl = eval_f64(&t, self.lo);
        if deg % 2 == 0 {
            c_lo = c_lo.max(-tl - slack(tl));
        } else {
            c_hi = c_hi.min(-tl + slack(tl));
        }

        // Real-rootedness: -c between the largest local minimum and the
        // smallest local maximum of T.
        if deg >= 2 {
            let dt = derivative_f64(&t);
            let ddt = derivative_f64(&dt);
            if let Ok(crit) = roots_f64(&dt, 1e-6) {
                let scale = dt.iter().map(|v| v.abs()).fold(0.0, f64::max);
                for z in &crit.roots {
                    if z.im.abs() > 1e-4 * (1.0 + z.re.abs()) {
                        continue;
                    }
                    let x = z.re;
                    let curv = eval_f64(&ddt, x);
                    let v = eval_f64(&t, x);
                    if curv.abs() < 1e-6 * scale {
                        // A repeated root of P^(l+1) must also be a root of P^(l).
                        c_lo = c_lo.max(-v - slack(v));
                        c_hi = c_hi.min(-v + slack(v));
                    } else if curv > 0.0 {
                        // local min of T: -c >= v
                        c_hi = c_hi.min(-v + slack(v));
                    } else {
                        c_lo = c_lo.max(-v - slack(v));
                    }
                }
            }
        }
        let (blo, bhi) = self.bounds[l];
        let lo = if c_lo.is_finite() { ((c_lo / lf).ceil() as i64).max(blo) } else { blo };
        let hi = if c_hi.is_finite() { ((c_hi / lf).floor() as i64).min(bhi) } else { bhi };
        (lo <= hi).then_some((lo, hi))
    }

    fn descend(&self, coeffs: &mut Vec<i64>, l: usize, out: &mut Collector) {
        let Some((lo, hi)) = self.range(coeffs, l) else {
            return;
        };
        for v in lo..=hi {
            coeffs[l] = v;
            if l == 0 {
                out.push(self.member.classify(coeffs), coeffs);
            } else {
                self.descend(coeffs, l - 1, out);
            }
        }
        coeffs[l] = 0;
    }
}

/// Depth-first search over `a_{n-1}, ..., a_0` with derivative pruning.
pub fn enumerate_pruned(spec: &SegmentSearchSpec) -> Result<EnumerationResult> {
    let member = MembershipTest::new(spec);
    let mut out = Collector { found: Vec::new(), flagged: Vec::new() };
    for n in 1..=spec.max_degree {
        let pruner = Pruner {
            member: &member,
            bounds: coefficient_bounds(n, &spec.a, &spec.b),
            n,
            lo: member.lo_f,
            hi: member.hi_f,
        };
        let mut coeffs = vec![0i64; n + 1];
        coeffs[n] = 1;
        pruner.descend(&mut coeffs, n - 1, &mut out);
    }
    Ok(EnumerationResult::from_polys(out.found, out.flagged))
}

/// Keep only polynomials with no monic integer divisor of lower degree in
/// the same result set; the survivors are the minimal polynomials.
pub fn minimal_filter(result: &EnumerationResult) -> EnumerationResult {
    // A reducible member always has an irreducible member factor, so testing
    // against retained polynomials of lower degree is enough.
    let mut kept: Vec<MonicIntPolynomial> = Vec::new();
    for (_, polys) in result.polys_by_degree.iter() {
        let mut this_degree = Vec::new();
        for p in polys {
            if !kept.iter().any(|m| ZPoly::divides_monic(m.poly(), p.poly())) {
                this_degree.push(p.clone());
            }
        }
        kept.extend(this_degree);
    }
    EnumerationResult::from_polys(kept, result.flagged.clone())
}

/// Every monic integer polynomial of degree at most `max_degree` whose roots
/// all lie on the unit circle (within `tol`).
///
/// Candidates come from the coefficient box for `sup |K| = 1`, restricted to
/// `|a_0| = 1` and `x^n p(1/x) = a_0 p(x)`: a real polynomial with all roots
/// on the circle has its roots closed under `z -> 1/z`.
pub fn enumerate_unit_circle(max_degree: usize, tol: f64) -> Vec<MonicIntPolynomial> {
    let mut out = Vec::new();
    for n in 1..=max_degree {
        // free coefficients a_1 ..= a_{floor(n/2)}
        let free = n.div_ceil(2);
        for a0 in [-1i64, 1] {
            let bounds: Vec<i64> = (1..free + usize::from(n % 2 == 0))
                .map(|k| binomial(n, k).to_i64().unwrap_or(i64::MAX))
                .collect();
            let mut lower: Vec<i64> = bounds.iter().map(|b| -b).collect();
            'odometer: loop {
                let mut c = vec![0i64; n + 1];
                c[0] = a0;
                c[n] = 1;
                let mut ok = true;
                for (i, &v) in lower.iter().enumerate() {
                    let k = i + 1;
                    c[k] = v;
                    // coefficient of x^(n-k) pairs with x^k
                    if n - k != k {
                        c[n - k] = a0 * v;
                    } else if a0 == -1 && v != 0 {
                        ok = false;
                    }
                }
                if ok && on_unit_circle(&c, tol) {
                    out.push(MonicIntPolynomial::from_i64(&c));
                }
                for i in 0..lower.len() {
                    if lower[i] < bounds[i] {
                        lower[i] += 1;
                        continue 'odometer;
                    }
                    lower[i] = -bounds[i];
                }
                break;
            }
        }
    }
    out.sort_by(|p, q| p.coeffs().cmp(q.coeffs()));
    out.dedup();
    out
}

fn on_unit_circle(c: &[i64], tol: f64) -> bool {
    let q = QPoly::from_int(&ZPoly::from_i64(c)).squarefree_part();
    match roots_f64(&q.to_f64(), 1e-8) {
        Ok(r) => r.roots.iter().all(|z| (z.norm() - 1.0).abs() <= tol),
        Err(_) => false,
    }
}

/// True when `p` is within `tol` of the segment at every root (soundness check).
pub fn roots_within(p: &MonicIntPolynomial, a: f64, b: f64, tol: f64) -> bool {
    let q = QPoly::from_int(p.poly()).squarefree_part();
    match roots_f64(&q.to_f64(), 1e-8) {
        Ok(r) => r
            .roots
            .iter()
            .all(|z| z.im.abs() <= tol && z.re >= a - tol && z.re <= b + tol),
        Err(_) => false,
    }
}
