//! Fekete points: `n`-point configurations of a compact set maximising the
//! product of mutual distances.
//!
//! Local ascent is coordinate-wise. With the other points frozen, the
//! objective `sum_j log|z - z_j|` is concave on every piece of a real set (or
//! arc of a circle) cut by the other points, so each coordinate step is an
//! exact one-dimensional maximisation. A Newton step on the whole
//! configuration finishes the job. Disks reduce to their boundary circle
//! (the objective is harmonic in each point), and finite sets, including
//! sampled lemniscate boundaries, use exhaustive search or swap moves.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::descriptor::{CompactDescriptor, IntervalUnion};
use crate::error::{Error, Result};

/// Knobs of the multistart search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeketeOptions {
    pub multistarts: usize,
    /// Sweep cap of each local ascent.
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for FeketeOptions {
    fn default() -> Self {
        FeketeOptions { multistarts: 20, max_iters: 2000, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FeketeConfiguration {
    pub n: usize,
    pub points: Vec<Complex64>,
    /// `(prod_{i<j} |z_i - z_j|)^(2 / n(n-1))` of `points`.
    pub delta_n: f64,
}

impl FeketeConfiguration {
    pub fn from_points(points: Vec<Complex64>) -> Self {
        let n = points.len();
        let l = log_product(&points);
        let delta_n = if n < 2 { 0.0 } else { (2.0 * l / (n * (n - 1)) as f64).exp() };
        FeketeConfiguration { n, points, delta_n }
    }
}

/// `sum_{i<j} log|z_i - z_j|`.
pub fn log_product(points: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            s += (points[i] - points[j]).norm().ln();
        }
    }
    s
}

fn min_distance(points: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            m = m.min((points[i] - points[j]).norm());
        }
    }
    m
}

const EXHAUSTIVE_LIMIT: f64 = 1e5;
const COLLISION: f64 = 1e-14;

enum Geometry {
    Real(IntervalUnion),
    Circle(f64),
    Disk(f64),
    Discrete { points: Vec<Complex64>, exhaustive: bool },
}

impl Geometry {
    fn new(k: &CompactDescriptor, n: usize) -> Result<Self> {
        k.validate()?;
        Ok(match k {
            CompactDescriptor::IntervalUnion(u) => Geometry::Real(u.clone()),
            CompactDescriptor::Circle(r) => Geometry::Circle(*r),
            CompactDescriptor::Disk(r) => Geometry::Disk(*r),
            CompactDescriptor::FiniteSet(p) => {
                let mut p = p.clone();
                p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                p.dedup_by(|a, b| (*a - *b).norm() <= COLLISION);
                Geometry::Discrete { points: p, exhaustive: true }
            }
            CompactDescriptor::Lemniscate(l) => {
                let per_branch = (64 * n).clamp(512, 4096);
                Geometry::Discrete { points: l.boundary_points(per_branch)?, exhaustive: false }
            }
        })
    }

    fn random_start(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        match self {
            Geometry::Real(u) => {
                let total = u.total_length();
                (0..n)
                    .map(|_| {
                        let mut t = rng.random::<f64>() * total;
                        for (a, b) in u.bands() {
                            if t <= b - a {
                                return Complex64::new(a + t, 0.0);
                            }
                            t -= b - a;
                        }
                        Complex64::new(u.hull().1, 0.0)
                    })
                    .collect()
            }
            Geometry::Circle(r) => (0..n)
                .map(|_| Complex64::from_polar(*r, rng.random::<f64>() * TAU))
                .collect(),
            Geometry::Disk(r) => (0..n)
                .map(|_| Complex64::from_polar(r * rng.random::<f64>().sqrt(), rng.random::<f64>() * TAU))
                .collect(),
            Geometry::Discrete { points, .. } => {
                let mut idx: Vec<usize> = (0..points.len()).collect();
                for i in 0..n {
                    let j = rng.random_range(i..idx.len());
                    idx.swap(i, j);
                }
                idx[..n].iter().map(|&i| points[i]).collect()
            }
        }
    }

    fn local_search(&self, start: Vec<Complex64>, max_iters: usize) -> Vec<Complex64> {
        match self {
            Geometry::Real(u) => {
                let mut xs: Vec<f64> = start.iter().map(|z| z.re).collect();
                real_ascent(u, &mut xs, max_iters);
                real_newton(u, &mut xs);
                xs.sort_by(f64::total_cmp);
                xs.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
            }
            Geometry::Circle(r) => {
                let th: Vec<f64> = start.iter().map(|z| z.arg()).collect();
                circle_points(*r, circle_optimize(th, max_iters))
            }
            Geometry::Disk(r) => {
                let th = disk_to_boundary(*r, &start);
                circle_points(*r, circle_optimize(th, max_iters))
            }
            Geometry::Discrete { points, .. } => discrete_swap(points, &start, max_iters),
        }
    }

    fn exhaustive(&self, n: usize) -> Option<Vec<Complex64>> {
        let Geometry::Discrete { points, exhaustive: true } = self else {
            return None;
        };
        let m = points.len();
        let count: f64 = (0..n).map(|i| (m - i) as f64 / (i + 1) as f64).product();
        if count > EXHAUSTIVE_LIMIT {
            return None;
        }
        let mut idx: Vec<usize> = (0..n).collect();
        let mut best = (f64::NEG_INFINITY, idx.clone());
        loop {
            let pts: Vec<Complex64> = idx.iter().map(|&i| points[i]).collect();
            let l = log_product(&pts);
            if l > best.0 {
                best = (l, idx.clone());
            }
            // next combination in lexicographic order
            let Some(i) = (0..n).rev().find(|&i| idx[i] < m - n + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..n {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Some(best.1.iter().map(|&i| points[i]).collect())
    }
}

fn circle_points(r: f64, th: Vec<f64>) -> Vec<Complex64> {
    let mut th: Vec<f64> = th.into_iter().map(|t| t.rem_euclid(TAU)).collect();
    th.sort_by(f64::total_cmp);
    th.into_iter().map(|t| Complex64::from_polar(r, t)).collect()
}

/// Largest `n`-point distance-product configuration of `k`, best of
/// `opt.multistarts` seeded local ascents.
///
/// The returned points lie in `k`, so `delta_n` is a lower bound for the
/// true `n`-th diameter.
pub fn fekete_points(k: &CompactDescriptor, n: usize, opt: &FeketeOptions) -> Result<FeketeConfiguration> {
    if n < 2 {
        return Err(Error::InvalidInput("fekete_points needs n >= 2".into()));
    }
    let geom = Geometry::new(k, n)?;
    if let Geometry::Discrete { points, .. } = &geom {
        if points.len() < n {
            return Err(Error::InvalidInput(format!(
                "set has {} distinct points, fewer than n = {n}",
                points.len()
            )));
        }
    }
    if let Some(best) = geom.exhaustive(n) {
        return Ok(FeketeConfiguration::from_points(best));
    }
    Ok(multistart(&geom, n, opt, 0))
}

fn multistart(geom: &Geometry, n: usize, opt: &FeketeOptions, stream_offset: u64) -> FeketeConfiguration {
    let runs: Vec<Vec<Complex64>> = (0..opt.multistarts.max(1) as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
            rng.set_stream(stream_offset + s);
            let mut pts = Vec::new();
            for _ in 0..8 {
                pts = geom.local_search(geom.random_start(n, &mut rng), opt.max_iters);
                if min_distance(&pts) >= COLLISION {
                    break;
                }
            }
            pts
        })
        .collect();
    best_of(runs)
}

fn best_of(runs: Vec<Vec<Complex64>>) -> FeketeConfiguration {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for pts in runs {
        let l = if min_distance(&pts) < COLLISION { f64::NEG_INFINITY } else { log_product(&pts) };
        if best.as_ref().is_none_or(|(b, _)| l > *b) {
            best = Some((l, pts));
        }
    }
    FeketeConfiguration::from_points(best.map(|b| b.1).unwrap_or_default())
}

/// `delta_n` estimates for `n = 2..=n_max`.
///
/// Dropping one point of an `n`-point configuration gives an `(n-1)`-point
/// configuration at least as good, so whenever the estimate at `n - 1` falls
/// below the one at `n` by more than `1e-6`, the smaller problem is re-run
/// from that warm start together with fresh multistarts.
pub fn transfinite_diameter(
    k: &CompactDescriptor,
    n_max: usize,
    opt: &FeketeOptions,
) -> Result<Vec<FeketeConfiguration>> {
    if n_max < 2 {
        return Err(Error::InvalidInput("transfinite_diameter needs n_max >= 2".into()));
    }
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.push(fekete_points(k, n, opt)?);
    }
    let geom = Geometry::new(k, n_max)?;
    for _ in 0..n_max {
        let mut changed = false;
        for i in (0..out.len() - 1).rev() {
            if out[i].delta_n >= out[i + 1].delta_n - 1e-6 {
                continue;
            }
            let warm = geom.local_search(drop_one(&out[i + 1].points), opt.max_iters);
            let more = FeketeOptions { multistarts: 2 * opt.multistarts.max(1), ..opt.clone() };
            let fresh = multistart(&geom, out[i].n, &more, 1 << 32);
            let cand = best_of(vec![warm, fresh.points]);
            if cand.delta_n > out[i].delta_n {
                out[i] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(out)
}

fn drop_one(points: &[Complex64]) -> Vec<Complex64> {
    let share = |i: usize| -> f64 {
        (0..points.len())
            .filter(|&j| j != i)
            .map(|j| (points[i] - points[j]).norm().ln())
            .sum()
    };
    let worst = (0..points.len())
        .min_by(|&a, &b| share(a).total_cmp(&share(b)))
        .unwrap_or(0);
    points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != worst)
        .map(|(_, z)| *z)
        .collect()
}

// ---------- real sets ----------

fn real_sums(xs: &[f64], i: usize, x: f64) -> (f64, f64, f64) {
    let (mut f, mut fp, mut fpp) = (0.0, 0.0, 0.0);
    for (j, &xj) in xs.iter().enumerate() {
        if j != i {
            let d = x - xj;
            f += d.abs().ln();
            fp += 1.0 / d;
            fpp -= 1.0 / (d * d);
        }
    }
    (f, fp, fpp)
}

/// Root of a decreasing function on `(l, r)` with a sign change, by Newton
/// steps safeguarded with bisection.
fn decreasing_root(l: f64, r: f64, g: impl Fn(f64) -> (f64, f64)) -> f64 {
    let (mut lo, mut hi) = (l, r);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (v, dv) = g(x);
        if v > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / dv;
        let next = if newton > lo && newton < hi && dv < 0.0 { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) || hi - lo <= 1e-16 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

/// Best position for point `i` on one piece `[l, r]`; a side flagged open
/// is another point, where the objective is `-inf`.
fn real_piece_max(xs: &[f64], i: usize, l: (f64, bool), r: (f64, bool)) -> Option<f64> {
    if r.0 - l.0 <= 0.0 {
        return None;
    }
    if l.1 && real_sums(xs, i, l.0).1 <= 0.0 {
        return Some(l.0);
    }
    if r.1 && real_sums(xs, i, r.0).1 >= 0.0 {
        return Some(r.0);
    }
    Some(decreasing_root(l.0, r.0, |x| {
        let (_, fp, fpp) = real_sums(xs, i, x);
        (fp, fpp)
    }))
}

fn real_coordinate_step(u: &IntervalUnion, xs: &[f64], i: usize, global: bool) -> f64 {
    let xi = xs[i];
    let mut candidates = Vec::new();
    for (a, b) in u.bands() {
        let inside = xi >= a && xi <= b;
        if !global && !inside {
            continue;
        }
        let mut cuts: Vec<f64> = xs
            .iter()
            .enumerate()
            .filter(|&(j, &x)| j != i && x > a && x < b)
            .map(|(_, &x)| x)
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut left = (a, !xs.iter().enumerate().any(|(j, &x)| j != i && x == a));
        let right_end = (b, !xs.iter().enumerate().any(|(j, &x)| j != i && x == b));
        for c in cuts.into_iter().map(|c| (c, false)).chain(std::iter::once(right_end)) {
            let here = xi >= left.0 && xi <= c.0;
            if global || here {
                if let Some(x) = real_piece_max(xs, i, left, c) {
                    candidates.push(x);
                }
            }
            left = (c.0, false);
            if c.1 {
                break;
            }
        }
    }
    let mut best = (real_sums(xs, i, xi).0, xi);
    for x in candidates {
        let f = real_sums(xs, i, x).0;
        if f > best.0 {
            best = (f, x);
        }
    }
    best.1
}

fn real_ascent(u: &IntervalUnion, xs: &mut [f64], max_iters: usize) {
    let mut last = f64::NEG_INFINITY;
    for sweep in 0..max_iters {
        for i in 0..xs.len() {
            xs[i] = real_coordinate_step(u, xs, i, sweep < 3);
        }
        let pts: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let l = log_product(&pts);
        if sweep >= 3 && l - last <= 1e-15 * (1.0 + l.abs()) {
            break;
        }
        last = l;
    }
}

fn real_log_product(xs: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            s += (xs[i] - xs[j]).abs().ln();
        }
    }
    s
}

/// Newton iteration on the points not sitting at a band endpoint.
fn real_newton(u: &IntervalUnion, xs: &mut [f64]) {
    let ends = u.endpoints();
    let free: Vec<usize> = (0..xs.len()).filter(|&i| !ends.contains(&xs[i])).collect();
    if free.is_empty() || free.len() == xs.len() {
        return;
    }
    let weight = |a: f64, b: f64| 1.0 / ((a - b) * (a - b));
    newton_loop(xs, &free, weight, |xs, i| real_sums(xs, i, xs[i]).1, real_log_product, |xs, before| {
        xs.iter().zip(before).all(|(x, b)| u.band_of(*x, 0.0) == u.band_of(*b, 0.0))
            && order_kept(xs, before)
    });
}

fn order_kept(xs: &[f64], before: &[f64]) -> bool {
    let mut a: Vec<usize> = (0..xs.len()).collect();
    let mut b = a.clone();
    a.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    b.sort_by(|&i, &j| before[i].total_cmp(&before[j]));
    a == b && min_gap(xs) > 0.0
}

fn min_gap(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Damped Newton ascent for objectives of the form `sum_{i<j} phi(x_i - x_j)`
/// whose Hessian is a weighted graph Laplacian with weights `w(x_i, x_j)`.
fn newton_loop(
    xs: &mut [f64],
    free: &[usize],
    w: impl Fn(f64, f64) -> f64,
    grad: impl Fn(&[f64], usize) -> f64,
    objective: impl Fn(&[f64]) -> f64,
    admissible: impl Fn(&[f64], &[f64]) -> bool,
) {
    let m = free.len();
    for _ in 0..30 {
        let mut h = DMatrix::<f64>::zeros(m, m);
        let mut g = DVector::<f64>::zeros(m);
        for (a, &i) in free.iter().enumerate() {
            g[a] = grad(xs, i);
            let mut diag = 0.0;
            for j in 0..xs.len() {
                if j != i {
                    diag += w(xs[i], xs[j]);
                }
            }
            h[(a, a)] = diag;
            for (b, &j) in free.iter().enumerate() {
                if b != a {
                    h[(a, b)] = -w(xs[i], xs[j]);
                }
            }
        }
        let Some(step) = h.cholesky().map(|c| c.solve(&g)) else {
            return;
        };
        let before = xs.to_vec();
        let f0 = objective(&before);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            for (a, &i) in free.iter().enumerate() {
                xs[i] = before[i] + t * step[a];
            }
            if admissible(xs, &before) && objective(xs) >= f0 {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            xs.copy_from_slice(&before);
            return;
        }
        if t * step.amax() <= 1e-15 {
            return;
        }
    }
}

// ---------- circles and disks ----------

fn circle_sums(th: &[f64], i: usize, t: f64) -> (f64, f64, f64) {
    let (mut f, mut fp, mut fpp) = (0.0, 0.0, 0.0);
    for (j, &tj) in th.iter().enumerate() {
        if j != i {
            let h = 0.5 * (t - tj);
            let s = h.sin();
            f += (2.0 * s.abs()).ln();
            fp += 0.5 * h.cos() / s;
            fpp -= 0.25 / (s * s);
        }
    }
    (f, fp, fpp)
}

fn circle_coordinate_step(th: &[f64], i: usize, global: bool) -> f64 {
    let n = th.len();
    if n == 1 {
        return th[i];
    }
    let ti = th[i];
    // other angles unwrapped to (ti, ti + 2 pi]
    let mut rel: Vec<f64> = (0..n)
        .filter(|&j| j != i)
        .map(|j| {
            let d = (th[j] - ti).rem_euclid(TAU);
            if d == 0.0 { TAU } else { d }
        })
        .collect();
    rel.sort_by(f64::total_cmp);
    let arcs: Vec<(f64, f64)> = if global {
        let mut v = vec![(rel[rel.len() - 1] - TAU, rel[0])];
        v.extend(rel.windows(2).map(|w| (w[0], w[1])));
        v
    } else {
        vec![(rel[rel.len() - 1] - TAU, rel[0])]
    };
    let mut best = (circle_sums(th, i, ti).0, ti);
    for (a, b) in arcs {
        if b - a <= 0.0 {
            continue;
        }
        let t = decreasing_root(ti + a, ti + b, |t| {
            let (_, fp, fpp) = circle_sums(th, i, t);
            (fp, fpp)
        });
        let f = circle_sums(th, i, t).0;
        if f > best.0 {
            best = (f, t);
        }
    }
    best.1
}

fn circle_log_product(th: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..th.len() {
        for j in i + 1..th.len() {
            s += (2.0 * (0.5 * (th[i] - th[j])).sin().abs()).ln();
        }
    }
    s
}

fn circle_optimize(mut th: Vec<f64>, max_iters: usize) -> Vec<f64> {
    let mut last = f64::NEG_INFINITY;
    for sweep in 0..max_iters {
        for i in 0..th.len() {
            th[i] = circle_coordinate_step(&th, i, sweep < 3);
        }
        let l = circle_log_product(&th);
        if sweep >= 3 && l - last <= 1e-15 * (1.0 + l.abs()) {
            break;
        }
        last = l;
    }
    if th.len() > 2 {
        let free: Vec<usize> = (1..th.len()).collect();
        let weight = |a: f64, b: f64| 0.25 / (0.5 * (a - b)).sin().powi(2);
        newton_loop(
            &mut th,
            &free,
            weight,
            |th, i| circle_sums(th, i, th[i]).1,
            circle_log_product,
            |th, before| {
                let wrap = |v: &[f64]| v.iter().map(|t| t.rem_euclid(TAU)).collect::<Vec<_>>();
                order_kept(&wrap(th), &wrap(before))
            },
        );
    }
    th
}

/// Moves each disk point to the best boundary angle. The objective is
/// harmonic in each point, so its maximum over the disk sits on the circle.
fn disk_to_boundary(r: f64, start: &[Complex64]) -> Vec<f64> {
    let mut pts = start.to_vec();
    let samples = 64 * pts.len().max(4);
    let mut th = vec![0.0; pts.len()];
    for i in 0..pts.len() {
        let score = |z: Complex64| -> f64 {
            pts.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| (z - p).norm().ln())
                .sum()
        };
        let best = (0..samples)
            .map(|k| PI * 2.0 * k as f64 / samples as f64)
            .max_by(|&a, &b| score(Complex64::from_polar(r, a)).total_cmp(&score(Complex64::from_polar(r, b))))
            .unwrap_or(0.0);
        th[i] = best;
        pts[i] = Complex64::from_polar(r, best);
    }
    th
}

// ---------- finite sets ----------

fn discrete_swap(points: &[Complex64], start: &[Complex64], max_iters: usize) -> Vec<Complex64> {
    let nearest = |z: &Complex64| -> usize {
        (0..points.len())
            .min_by(|&a, &b| (points[a] - z).norm().total_cmp(&(points[b] - z).norm()))
            .unwrap_or(0)
    };
    let mut chosen: Vec<usize> = start.iter().map(nearest).collect();
    chosen.sort_unstable();
    chosen.dedup();
    for k in 0..points.len() {
        if chosen.len() >= start.len() {
            break;
        }
        if !chosen.contains(&k) {
            chosen.push(k);
        }
    }
    let share = |chosen: &[usize], slot: usize, k: usize| -> f64 {
        chosen
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != slot)
            .map(|(_, &j)| (points[k] - points[j]).norm().ln())
            .sum()
    };
    for _ in 0..max_iters {
        let mut improved = false;
        for slot in 0..chosen.len() {
            let current = share(&chosen, slot, chosen[slot]);
            let mut best = (current, chosen[slot]);
            for k in 0..points.len() {
                if chosen.contains(&k) {
                    continue;
                }
                let v = share(&chosen, slot, k);
                if v > best.0 + 1e-14 * (1.0 + v.abs()) {
                    best = (v, k);
                }
            }
            if best.1 != chosen[slot] {
                chosen[slot] = best.1;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    chosen.sort_unstable();
    chosen.into_iter().map(|k| points[k]).collect()
}
