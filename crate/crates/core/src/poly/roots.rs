//! Numeric root extraction: companion-matrix eigenvalues polished by
//! simultaneous Newton (Aberth–Ehrlich) corrections.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;

use super::dense::{eval_complex, eval_complex_d};
use crate::error::{Error, Result};

/// Default residual tolerance for [`roots`].
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 500;

/// All complex roots of a polynomial, with multiplicity.
///
/// `residual_bound` is the largest backward residual
/// `|p(z)| / sum_i |a_i| |z|^i` over the returned roots.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexRootSet {
    pub roots: Vec<Complex64>,
    pub residual_bound: f64,
}

impl ComplexRootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Real parts sorted ascending.
    pub fn real_parts_sorted(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.roots.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn max_imag(&self) -> f64 {
        self.roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn backward_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let v = eval_complex(coeffs, z).norm();
    let r = z.norm();
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
    if scale == 0.0 {
        v
    } else {
        v / scale
    }
}

/// Roots of a polynomial given by `f64` coefficients (constant term first,
/// nonzero leading coefficient).
pub fn roots_f64(coeffs: &[f64], tol: f64) -> Result<ComplexRootSet> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 || coeffs[n] == 0.0 {
        return Err(Error::InvalidInput("roots: degree must be at least 1".into()));
    }
    // Exact zero roots are split off; the backward residual is meaningless there.
    let zeros = coeffs.iter().take_while(|c| **c == 0.0).count();
    if zeros > 0 {
        let mut rest = if zeros == n {
            ComplexRootSet { roots: Vec::new(), residual_bound: 0.0 }
        } else {
            roots_f64(&coeffs[zeros..], tol)?
        };
        rest.roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
        return Ok(rest);
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(ComplexRootSet {
            roots: vec![Complex64::new(-monic[0], 0.0)],
            residual_bound: 0.0,
        });
    }
    let mut init = match companion_eigenvalues(&monic) {
        Some(v) if v.iter().all(|z| z.is_finite()) => v,
        _ => circle_guesses(&monic),
    };
    let roots = aberth_polish(&mut init, |z| eval_complex_d(&monic, z), MAX_SWEEPS);
    let residual_bound = roots
        .iter()
        .map(|&z| backward_residual(&monic, z))
        .fold(0.0, f64::max);
    if !(residual_bound <= tol) {
        return Err(Error::NonConvergence {
            op: "roots",
            detail: format!("residual {residual_bound:e} above tolerance {tol:e}"),
        });
    }
    Ok(ComplexRootSet { roots, residual_bound })
}

// The QR iteration is capped: nalgebra's default loops forever on some
// defective companion matrices.
fn companion_eigenvalues(monic: &[f64]) -> Option<Vec<Complex64>> {
    let n = monic.len() - 1;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    let schur = Schur::try_new(m, f64::EPSILON, 60 * n)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

/// Initial guesses on a circle whose radius bounds the root moduli.
pub(crate) fn circle_guesses(monic: &[f64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let radius = monic[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Aberth–Ehrlich iteration from the given starting points, using a caller
/// supplied evaluator returning `(p(z), p'(z))`. Runs until corrections stall
/// or `max_sweeps` is reached; returns the polished points.
pub fn aberth_polish<F>(z: &mut [Complex64], eval: F, max_sweeps: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let n = z.len();
    let mut converged = vec![false; n];
    // Near a multiple root the correction stalls at noise level instead of
    // shrinking to machine precision; stop once it no longer decreases.
    let mut last_step = vec![f64::INFINITY; n];
    for _ in 0..max_sweeps {
        let mut all_done = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                converged[k] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                continue;
            }
            z[k] -= w;
            let step = w.norm();
            let size = z[k].norm().max(f64::MIN_POSITIVE);
            if step <= 4.0 * f64::EPSILON * size
                || (step >= last_step[k] && step <= 1e-5 * (1.0 + size))
            {
                converged[k] = true;
            } else {
                all_done = false;
            }
            last_step[k] = step;
        }
        if all_done {
            break;
        }
    }
    z.to_vec()
}

/// Roots of a polynomial with complex coefficients (constant term first),
/// by Aberth iteration from a bounding circle. Intended for low degrees.
pub fn roots_complex(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 || coeffs[n].norm() == 0.0 {
        return Err(Error::InvalidInput("roots: degree must be at least 1".into()));
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let radius = monic[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    let out = aberth_polish(&mut z, eval, MAX_SWEEPS);
    if out.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonConvergence { op: "roots_complex", detail: "non-finite iterate".into() });
    }
    Ok(out)
}
