//! Discrete equilibrium measures: logarithmic energy and potentials of
//! weighted point sets, energy minimisation on a fixed grid, the Frostman
//! check on the resulting potential, and a Kolmogorov distance for
//! measures on the line.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{CompactDescriptor, IntervalUnion};
use crate::error::{Error, Result};

/// Finitely supported probability measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteMeasure {
    pub support: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Weights must be nonnegative and sum to one within `1e-9`; they are
    /// renormalised exactly.
    pub fn new(support: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() || support.is_empty() {
            return Err(Error::InvalidInput(
                "measure needs as many weights as support points, at least one".into(),
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidInput("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(DiscreteMeasure { support, weights })
    }

    pub fn uniform(support: Vec<Complex64>) -> Result<Self> {
        let w = 1.0 / support.len().max(1) as f64;
        let n = support.len();
        Self::new(support, vec![w; n])
    }

    /// Normalised counting measure of real points.
    pub fn counting_real(points: &[f64]) -> Result<Self> {
        Self::uniform(points.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn point_mass(z: Complex64) -> Self {
        DiscreteMeasure { support: vec![z], weights: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.support.iter().all(|z| z.im == 0.0)
    }

    /// Real atoms sorted by position, with weights.
    fn sorted_real(&self) -> Result<Vec<(f64, f64)>> {
        if !self.is_real() {
            return Err(Error::UnsupportedSupport);
        }
        let mut v: Vec<(f64, f64)> = self.support.iter().map(|z| z.re).zip(self.weights.iter().copied()).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(v)
    }

    /// `mu((-inf, x])` for a measure on the line.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.sorted_real()?.iter().take_while(|a| a.0 <= x).fold(0.0, |s, a| s + a.1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub robin_constant: f64,
    /// `exp(-robin_constant)`.
    pub capacity_estimate: f64,
}

impl EnergyReport {
    fn from_energy(v: f64) -> Self {
        EnergyReport { energy: v, robin_constant: v, capacity_estimate: (-v).exp() }
    }
}

/// `sum_{i != j} w_i w_j log(1 / |z_i - z_j|)`; the diagonal is left out.
pub fn energy(mu: &DiscreteMeasure) -> Result<f64> {
    let n = mu.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let d = (mu.support[i] - mu.support[j]).norm();
            if d == 0.0 {
                return Err(Error::CoincidentPoints(i, j));
            }
            s -= 2.0 * mu.weights[i] * mu.weights[j] * d.ln();
        }
    }
    Ok(s)
}

/// `sum_i w_i log(1 / |z - z_i|)`; `+inf` on an atom of positive weight.
pub fn potential(mu: &DiscreteMeasure, z: Complex64) -> f64 {
    let mut s = 0.0;
    for (p, &w) in mu.support.iter().zip(&mu.weights) {
        if w == 0.0 {
            continue;
        }
        let d = (z - p).norm();
        if d == 0.0 {
            return f64::INFINITY;
        }
        s -= w * d.ln();
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizeOptions {
    pub iters: usize,
    /// Initial step of the projected gradient.
    pub step: f64,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { iters: 20_000, step: 1.0, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Minimized {
    pub measure: DiscreteMeasure,
    pub report: EnergyReport,
    /// Objective after every accepted step, starting with the initial value.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Grid nodes and the length of the cell each one represents.
fn grid(e: &CompactDescriptor, m: usize) -> Result<(Vec<Complex64>, Vec<f64>)> {
    match e {
        CompactDescriptor::IntervalUnion(u) => {
            let total = u.total_length();
            let bands: Vec<(f64, f64)> = u.bands().collect();
            let mut counts: Vec<usize> = bands
                .iter()
                .map(|(a, b)| (((b - a) / total) * m as f64).round().max(2.0) as usize)
                .collect();
            // fix rounding so the total is m
            while counts.iter().sum::<usize>() > m {
                let i = (0..counts.len()).max_by_key(|&i| counts[i]).unwrap();
                counts[i] -= 1;
            }
            while counts.iter().sum::<usize>() < m {
                let i = (0..counts.len()).min_by_key(|&i| counts[i]).unwrap();
                counts[i] += 1;
            }
            let mut nodes = Vec::with_capacity(m);
            let mut cells = Vec::with_capacity(m);
            for ((a, b), &c) in bands.iter().zip(&counts) {
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                for k in (1..=c).rev() {
                    let x = mid + half * ((2 * k - 1) as f64 * PI / (2 * c) as f64).cos();
                    let lo = mid + half * (k as f64 * PI / c as f64).cos();
                    let hi = mid + half * ((k - 1) as f64 * PI / c as f64).cos();
                    nodes.push(Complex64::new(x, 0.0));
                    cells.push(hi - lo);
                }
            }
            Ok((nodes, cells))
        }
        CompactDescriptor::Circle(r) | CompactDescriptor::Disk(r) => {
            let nodes = (0..m).map(|k| Complex64::from_polar(*r, TAU * k as f64 / m as f64)).collect();
            Ok((nodes, vec![TAU * r / m as f64; m]))
        }
        _ => Err(Error::InvalidInput(
            "minimize_energy supports interval unions, circles and disks".into(),
        )),
    }
}

fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        acc += ui;
        let t = (acc - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

struct Kernel {
    rows: Vec<Vec<f64>>,
}

impl Kernel {
    fn apply(&self, w: &[f64]) -> Vec<f64> {
        self.rows
            .par_iter()
            .map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn value(&self, w: &[f64]) -> (f64, Vec<f64>) {
        let aw = self.apply(w);
        (w.iter().zip(&aw).map(|(a, b)| a * b).sum(), aw)
    }
}

/// Minimise the discretised energy over probability weights on a fixed grid
/// of `grid_size` nodes.
///
/// Interval unions get Chebyshev nodes per band; circles (and disks, whose
/// equilibrium measure lives on the boundary) get equally spaced nodes.
/// Each node stands for a cell of length `l_i`, and the diagonal of the
/// quadratic form carries that cell's self-energy `log(1 / l_i) + 3/2`.
/// Without it the form is indefinite and the minimiser collapses onto a few
/// far-apart nodes.
pub fn minimize_energy(e: &CompactDescriptor, grid_size: usize, opt: &MinimizeOptions) -> Result<Minimized> {
    if grid_size < 16 {
        return Err(Error::InvalidInput("grid_size must be at least 16".into()));
    }
    e.validate()?;
    let (nodes, cells) = grid(e, grid_size)?;
    let m = nodes.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        1.5 - cells[i].ln()
                    } else {
                        -(nodes[i] - nodes[j]).norm().ln()
                    }
                })
                .collect()
        })
        .collect();
    let kernel = Kernel { rows };

    let mut rng = ChaCha8Rng::seed_from_u64(opt.seed);
    let start: Vec<f64> = (0..m).map(|_| 1.0 + 0.1 * rng.random::<f64>()).collect();
    let total: f64 = start.iter().sum();
    let mut w: Vec<f64> = start.iter().map(|x| x / total).collect();
    let (mut f, mut aw) = kernel.value(&w);
    let mut trace = vec![f];
    let mut t = opt.step;
    let mut converged = false;
    let mut iterations = 0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    for it in 0..opt.iters {
        iterations = it + 1;
        let g: Vec<f64> = aw.iter().map(|v| 2.0 * v).collect();
        let pg = project_simplex(&w.iter().zip(&g).map(|(a, b)| a - b).collect::<Vec<_>>());
        let pg_norm = w.iter().zip(&pg).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if pg_norm < 1e-8 {
            converged = true;
            break;
        }
        // Barzilai-Borwein guess, then halve until the energy does not rise.
        if let Some((pw, pgr)) = &prev {
            let s: Vec<f64> = w.iter().zip(pw).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g.iter().zip(pgr).map(|(a, b)| a - b).collect();
            let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
            let ss: f64 = s.iter().map(|a| a * a).sum();
            if sy > 0.0 {
                t = ss / sy;
            }
        }
        let mut accepted = None;
        for _ in 0..60 {
            let cand = project_simplex(&w.iter().zip(&g).map(|(a, b)| a - t * b).collect::<Vec<_>>());
            let (fc, ac) = kernel.value(&cand);
            if fc <= f {
                accepted = Some((cand, fc, ac));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, fc, ac)) = accepted else {
            converged = true;
            break;
        };
        prev = Some((std::mem::replace(&mut w, cand), g));
        f = fc;
        aw = ac;
        trace.push(f);
    }
    Ok(Minimized {
        measure: DiscreteMeasure { support: nodes, weights: w },
        report: EnergyReport::from_energy(f),
        trace,
        iterations,
        converged,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FrostmanReport {
    /// Largest `U(z) - V` over every probe.
    pub max_over_plane: f64,
    /// Largest `|U(z) - V|` over the probes on the set.
    pub max_dev_on_e: f64,
    /// Largest `U(z) - V` over the far-field probes.
    pub far_field_max: f64,
    pub interior_ok: bool,
    pub plane_ok: bool,
    pub far_field_ok: bool,
    pub probes: usize,
}

impl FrostmanReport {
    pub fn passed(&self) -> bool {
        self.interior_ok && self.plane_ok && self.far_field_ok
    }
}

fn evenly_pick<T: Copy>(v: &[T], k: usize) -> Vec<T> {
    if v.len() <= k {
        return v.to_vec();
    }
    (0..k).map(|i| v[i * v.len() / k]).collect()
}

/// Probe the potential of `mu` against the constant `v`: on `e` (away from
/// atoms), just off `e`, and on a far circle where it must drop below `v`.
pub fn frostman_check(
    mu: &DiscreteMeasure,
    e: &CompactDescriptor,
    v: f64,
    probes: usize,
    tol: f64,
) -> Result<FrostmanReport> {
    e.validate()?;
    let n_on = probes / 2;
    let n_near = probes * 3 / 10;
    let n_far = probes - n_on - n_near;
    let (on_e, near, center, radius) = match e {
        CompactDescriptor::IntervalUnion(u) => real_probes(mu, u, n_on, n_near),
        CompactDescriptor::Circle(r) | CompactDescriptor::Disk(r) => circle_probes(mu, *r, n_on, n_near),
        _ => return Err(Error::InvalidInput("frostman_check supports interval unions, circles and disks".into())),
    };
    let far: Vec<Complex64> = (0..n_far)
        .map(|k| center + Complex64::from_polar(10.0 * (radius + 1.0), TAU * (k as f64 + 0.5) / n_far as f64))
        .collect();
    let dev = |z: &Complex64| potential(mu, *z) - v;
    let on_dev: Vec<f64> = on_e.iter().map(dev).collect();
    let near_dev: Vec<f64> = near.iter().map(dev).collect();
    let far_dev: Vec<f64> = far.iter().map(dev).collect();
    let max_dev_on_e = on_dev.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let max_over_plane = on_dev
        .iter()
        .chain(&near_dev)
        .chain(&far_dev)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let far_field_max = far_dev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(FrostmanReport {
        max_over_plane,
        max_dev_on_e,
        far_field_max,
        interior_ok: max_dev_on_e <= tol,
        plane_ok: max_over_plane <= tol,
        far_field_ok: far_field_max < -tol,
        probes: on_e.len() + near.len() + far.len(),
    })
}

type Probes = (Vec<Complex64>, Vec<Complex64>, Complex64, f64);

fn real_probes(mu: &DiscreteMeasure, u: &IntervalUnion, n_on: usize, n_near: usize) -> Probes {
    let mut on = Vec::new();
    let per_band = n_on.div_ceil(u.num_bands()).max(1);
    for (a, b) in u.bands() {
        let mut atoms: Vec<f64> = mu
            .support
            .iter()
            .zip(&mu.weights)
            .filter(|(z, w)| **w > 0.0 && z.im == 0.0 && z.re >= a && z.re <= b)
            .map(|(z, _)| z.re)
            .collect();
        atoms.sort_by(f64::total_cmp);
        let mids: Vec<f64> = atoms.windows(2).map(|w| 0.5 * (w[0] + w[1])).filter(|m| m.is_finite()).collect();
        let pts = if mids.len() >= per_band / 2 && mids.len() >= 2 {
            evenly_pick(&mids, per_band)
        } else {
            (0..per_band)
                .map(|k| {
                    let t = ((2 * k + 1) as f64 * PI / (2 * per_band) as f64).cos();
                    0.5 * (a + b) + 0.5 * (b - a) * t
                })
                .collect()
        };
        on.extend(pts.into_iter().map(|x| Complex64::new(x, 0.0)));
    }
    let (lo, hi) = u.hull();
    let width = hi - lo;
    let offset = 0.05 * width;
    let near = (0..n_near)
        .map(|k| {
            let t = (k as f64 + 0.5) / n_near as f64;
            let x = lo - offset + (width + 2.0 * offset) * t;
            let y = if k % 2 == 0 { offset } else { -offset };
            Complex64::new(x, y)
        })
        .collect();
    (on, near, Complex64::new(0.5 * (lo + hi), 0.0), 0.5 * width)
}

fn circle_probes(mu: &DiscreteMeasure, r: f64, n_on: usize, n_near: usize) -> Probes {
    let mut angles: Vec<f64> = mu
        .support
        .iter()
        .zip(&mu.weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(z, _)| z.arg().rem_euclid(TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    let on_angles: Vec<f64> = if angles.len() >= 2 {
        let mut mids: Vec<f64> = angles.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        mids.push(0.5 * (angles[angles.len() - 1] + angles[0] + TAU));
        evenly_pick(&mids, n_on)
    } else {
        (0..n_on).map(|k| TAU * (k as f64 + 0.5) / n_on as f64).collect()
    };
    let on = on_angles.into_iter().map(|t| Complex64::from_polar(r, t)).collect();
    let near = (0..n_near)
        .map(|k| {
            let s = if k % 2 == 0 { 1.1 } else { 0.9 };
            Complex64::from_polar(s * r, TAU * (k as f64 + 0.25) / n_near as f64)
        })
        .collect();
    (on, near, Complex64::new(0.0, 0.0), r)
}

/// Green's function of the complement of `[a, b]` with pole at infinity.
pub fn green_segment(z: Complex64, a: f64, b: f64) -> Result<f64> {
    if a >= b {
        return Err(Error::InvalidInput("green_segment needs a < b".into()));
    }
    if z.im == 0.0 && z.re >= a && z.re <= b {
        return Err(Error::DomainError);
    }
    let w = (2.0 * z - a - b) / (b - a);
    let s = (w * w - 1.0).sqrt();
    let (p, q) = (w + s, w - s);
    Ok(p.norm().max(q.norm()).ln())
}

/// Kolmogorov distance `sup_x |F_1(x) - F_2(x)|` between measures on the
/// line, evaluated exactly over the merged atoms.
pub fn weak_star_distance(mu1: &DiscreteMeasure, mu2: &DiscreteMeasure) -> Result<f64> {
    let a = mu1.sorted_real()?;
    let b = mu2.sorted_real()?;
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0, 0.0);
    let mut sup: f64 = 0.0;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) => p.0.min(q.0),
            (Some(p), None) => p.0,
            (None, Some(q)) => q.0,
            (None, None) => break,
        };
        while i < a.len() && a[i].0 == x {
            fa += a[i].1;
            i += 1;
        }
        while j < b.len() && b[j].0 == x {
            fb += b[j].1;
            j += 1;
        }
        sup = sup.max((fa - fb).abs());
    }
    Ok(sup)
}

/// Equal-mass discretisation of `dx / (pi sqrt((x - a)(b - x)))`:
/// atoms `mid + half cos((2k - 1) pi / 2n)`, each of mass `1/n`, ascending.
pub fn arcsine_measure(a: f64, b: f64, n: usize) -> Result<DiscreteMeasure> {
    if !(a < b) || n < 2 {
        return Err(Error::InvalidInput("arcsine_measure needs a < b and n >= 2".into()));
    }
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let pts: Vec<f64> = (1..=n)
        .rev()
        .map(|k| mid + half * ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos())
        .collect();
    DiscreteMeasure::counting_real(&pts)
}
