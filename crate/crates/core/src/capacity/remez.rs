//! Chebyshev polynomials of real interval unions by Remez exchange.
//!
//! Monic polynomials of degree `n` are parametrised in the Chebyshev basis of
//! the hull `[c - h, c + h]`: `p(x) = sum_k e_k T_k(u)`, `u = (x - c) / h`,
//! with the top coefficient fixed at `e_n = h^n / 2^(n-1)`. Polynomials of
//! degree below `n` form a Haar space on any compact subset of the line, so
//! the usual `n + 1` point alternation characterises the minimiser on the
//! whole union, gaps included.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::descriptor::IntervalUnion;
use crate::error::{Error, Result};

/// A polynomial stored in the Chebyshev basis of an interval.
#[derive(Clone, Debug, Serialize)]
pub struct ChebSeries {
    pub center: f64,
    pub half_width: f64,
    /// Coefficients of `T_0, ..., T_n` in the variable `(x - center) / half_width`.
    pub coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, (x - self.center) / self.half_width)
    }

    /// Monomial coefficients in `x`, constant term first.
    pub fn to_monomial(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        // T_k(u) as monomials in u
        let mut t_prev = vec![1.0];
        let mut t_cur = vec![0.0, 1.0];
        let mut in_u = vec![0.0; n];
        for (k, &e) in self.coeffs.iter().enumerate() {
            let tk = match k {
                0 => t_prev.clone(),
                1 => t_cur.clone(),
                _ => {
                    let mut next = vec![0.0; k + 1];
                    for (i, &c) in t_cur.iter().enumerate() {
                        next[i + 1] += 2.0 * c;
                    }
                    for (i, &c) in t_prev.iter().enumerate() {
                        next[i] -= c;
                    }
                    t_prev = std::mem::replace(&mut t_cur, next);
                    t_cur.clone()
                }
            };
            for (i, &c) in tk.iter().enumerate() {
                in_u[i] += e * c;
            }
        }
        // substitute u = (x - c) / h
        let mut out = vec![0.0; n];
        let mut power = vec![1.0];
        let (a, b) = (-self.center / self.half_width, 1.0 / self.half_width);
        for &c in &in_u {
            for (i, &p) in power.iter().enumerate() {
                out[i] += c * p;
            }
            let mut next = vec![0.0; power.len() + 1];
            for (i, &p) in power.iter().enumerate() {
                next[i] += a * p;
                next[i + 1] += b * p;
            }
            power = next;
        }
        out
    }
}

fn clenshaw(c: &[f64], u: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * u * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    u * b1 - b2 + c.first().copied().unwrap_or(0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct RemezResult {
    pub degree: usize,
    /// Monomial coefficients of the monic minimax polynomial, constant first.
    pub coeffs: Vec<f64>,
    /// `max_E |T_n|` measured on a dense refined grid.
    pub t_n: f64,
    /// Levelled error `|H|` on the final reference, a lower bound for `t_n`.
    pub levelled: f64,
    pub reference: Vec<f64>,
    /// Signed values of `T_n` at `reference`.
    pub reference_values: Vec<f64>,
    pub iterations: usize,
    #[serde(skip)]
    pub series: ChebSeries,
}

impl RemezResult {
    pub fn eval(&self, x: f64) -> f64 {
        self.series.eval(x)
    }
}

fn initial_reference(e: &IntervalUnion, m: usize) -> Vec<f64> {
    let bands: Vec<(f64, f64)> = e.bands().collect();
    let total = e.total_length();
    // give each band its share, largest remainders first, at least one each
    // while points last
    let mut counts: Vec<usize> = bands.iter().map(|(a, b)| ((b - a) / total * m as f64).floor() as usize).collect();
    let mut order: Vec<usize> = (0..bands.len()).collect();
    order.sort_by(|&i, &j| (bands[j].1 - bands[j].0).total_cmp(&(bands[i].1 - bands[i].0)));
    for &i in &order {
        if counts[i] == 0 && counts.iter().sum::<usize>() < m {
            counts[i] = 1;
        }
    }
    let mut k = 0;
    while counts.iter().sum::<usize>() < m {
        counts[order[k % order.len()]] += 1;
        k += 1;
    }
    while counts.iter().sum::<usize>() > m {
        let i = *order.iter().rev().find(|&&i| counts[i] > 0).unwrap();
        counts[i] -= 1;
    }
    let mut out = Vec::with_capacity(m);
    for ((a, b), &c) in bands.iter().zip(&counts) {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        match c {
            0 => {}
            1 => out.push(mid),
            _ => {
                for j in (0..c).rev() {
                    out.push(mid + half * (std::f64::consts::PI * j as f64 / (c - 1) as f64).cos());
                }
            }
        }
    }
    out
}

/// Local maxima of `|p|` on `E`, each refined by golden-section search.
fn extrema(series: &ChebSeries, grid: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for band in grid {
        let v: Vec<f64> = band.iter().map(|&x| series.eval(x)).collect();
        let m = band.len();
        for i in 0..m {
            let left = if i > 0 { v[i - 1].abs() } else { f64::NEG_INFINITY };
            let right = if i + 1 < m { v[i + 1].abs() } else { f64::NEG_INFINITY };
            if v[i].abs() < left || v[i].abs() < right {
                continue;
            }
            if i > 0 && v[i].abs() == left {
                continue;
            }
            let lo = band[i.saturating_sub(1)];
            let hi = band[(i + 1).min(m - 1)];
            let x = golden_max(|x| series.eval(x).abs(), lo, hi, band[i]);
            out.push((x, series.eval(x)));
        }
    }
    out
}

fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, start: f64) -> f64 {
    if hi <= lo {
        return start;
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [lo, hi, start, mid]
        .into_iter()
        .max_by(|&x, &y| f(x).total_cmp(&f(y)))
        .unwrap()
}

fn solve_levelled(reference: &[f64], c: f64, h: f64, n: usize) -> Option<(Vec<f64>, f64)> {
    let m = n + 1;
    let top = h.powi(n as i32) / 2f64.powi(n as i32 - 1);
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, &x) in reference.iter().enumerate() {
        let u = (x - c) / h;
        let (mut t0, mut t1) = (1.0, u);
        for k in 0..n {
            a[(i, k)] = if k == 0 { 1.0 } else { t1 };
            if k >= 1 {
                let t2 = 2.0 * u * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
        }
        // T_n(u) is now t1 (for n >= 1)
        let tn = if n == 0 { 1.0 } else { t1 };
        a[(i, n)] = if i % 2 == 0 { -1.0 } else { 1.0 };
        rhs[i] = -top * tn;
    }
    let sol = a.lu().solve(&rhs)?;
    let mut coeffs: Vec<f64> = sol.iter().take(n).copied().collect();
    coeffs.push(top);
    Some((coeffs, sol[n]))
}

/// Monic degree-`n` polynomial of least sup norm on `e`.
///
/// Single-point exchange: each iteration swaps the point of largest error
/// into the reference while keeping signs alternating. Stops when the
/// largest error exceeds the levelled error by a relative `tol`, or by the
/// rounding level of the current series if that is larger.
pub fn remez_monic(e: &IntervalUnion, n: usize, tol: f64) -> Result<RemezResult> {
    if n == 0 {
        return Err(Error::InvalidInput("remez_monic needs degree >= 1".into()));
    }
    let (lo, hi) = e.hull();
    let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let per_band = (40 * (n + 1)).max(400);
    let grid: Vec<Vec<f64>> = e
        .bands()
        .map(|(a, b)| {
            (0..per_band)
                .rev()
                .map(|j| {
                    let t = (std::f64::consts::PI * j as f64 / (per_band - 1) as f64).cos();
                    0.5 * (a + b) + 0.5 * (b - a) * t
                })
                .collect()
        })
        .collect();
    let mut reference = initial_reference(e, n + 1);
    let cap = 200 * (n + 1) + 500;
    let tol = tol.max(1e-13);
    let mut best: Option<RemezResult> = None;
    for it in 1..=cap {
        let (coeffs, level) = solve_levelled(&reference, c, h, n).ok_or_else(|| Error::NonConvergence {
            op: "remez_monic",
            detail: "singular reference system".into(),
        })?;
        let series = ChebSeries { center: c, half_width: h, coeffs };
        let ext = extrema(&series, &grid);
        let (xm, vm) = ext
            .iter()
            .copied()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap_or((reference[0], level));
        let sup = vm.abs();
        let reference_values: Vec<f64> = reference.iter().map(|&x| series.eval(x)).collect();
        let result = RemezResult {
            degree: n,
            coeffs: series.to_monomial(),
            t_n: sup,
            levelled: level.abs(),
            reference: reference.clone(),
            reference_values,
            iterations: it,
            series,
        };
        // Evaluation noise grows with the coefficient mass (large in gaps),
        // so the requested tolerance is floored at that rounding level.
        let mass: f64 = result.series.coeffs.iter().map(|c| c.abs()).sum();
        let floor = 16.0 * f64::EPSILON * (n + 1) as f64 * mass / sup;
        if sup - level.abs() <= tol.max(floor) * sup {
            return Ok(result);
        }
        exchange(&mut reference, &result.reference_values, xm, vm);
        if best.as_ref().is_none_or(|b| result.t_n < b.t_n) {
            best = Some(result);
        }
    }
    Err(Error::NonConvergence {
        op: "remez_monic",
        detail: format!(
            "exchange cycle limit {cap} hit; best sup {:e}",
            best.map_or(f64::NAN, |b| b.t_n)
        ),
    })
}

/// Swap `x` (error value `v`) into the sorted reference so that the signs
/// `values` keep alternating.
fn exchange(reference: &mut Vec<f64>, values: &[f64], x: f64, v: f64) {
    let m = reference.len();
    let same = |i: usize| (values[i] >= 0.0) == (v >= 0.0);
    if x < reference[0] {
        if same(0) {
            reference[0] = x;
        } else {
            reference.pop();
            reference.insert(0, x);
        }
    } else if x > reference[m - 1] {
        if same(m - 1) {
            reference[m - 1] = x;
        } else {
            reference.remove(0);
            reference.push(x);
        }
    } else {
        let k = reference.partition_point(|&r| r <= x).saturating_sub(1).min(m - 2);
        if same(k) {
            reference[k] = x;
        } else {
            reference[k + 1] = x;
        }
    }
}
