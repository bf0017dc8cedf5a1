//! Logarithmic capacity by three routes: Fekete points (transfinite
//! diameter), Chebyshev polynomials (Chebyshev constant) and closed forms,
//! plus the transport rules under affine maps and polynomial preimages.

mod descriptor;
mod fekete;
mod remez;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use descriptor::{CompactDescriptor, IntervalUnion};
pub use fekete::{fekete_points, log_product, transfinite_diameter, FeketeConfiguration, FeketeOptions};
pub use remez::{remez_monic, ChebSeries, RemezResult};

use crate::error::{Error, Result};
use crate::poly::MonicRatPolynomial;

/// Capacity from a known formula, when the shape has one: `(b - a) / 4` for
/// a segment, `sqrt(a^2 - b^2) / 2` for `[-a, -b] ∪ [b, a]`, the radius for
/// circles and disks, `rho` for a lemniscate. `None` otherwise.
pub fn capacity_closed_form(k: &CompactDescriptor) -> Option<f64> {
    match k {
        CompactDescriptor::IntervalUnion(u) => {
            let e = u.endpoints();
            match e.len() {
                2 => Some((e[1] - e[0]) / 4.0),
                4 if e[0] == -e[3] && e[1] == -e[2] => {
                    let (a, b) = (e[3], e[2]);
                    Some((a * a - b * b).sqrt() / 2.0)
                }
                _ => None,
            }
        }
        CompactDescriptor::Circle(r) | CompactDescriptor::Disk(r) => Some(*r),
        CompactDescriptor::Lemniscate(l) => l.rho.to_f64(),
        CompactDescriptor::FiniteSet(_) => None,
    }
}

/// `Cap(alpha K + beta) = |alpha| Cap(K)`.
pub fn capacity_affine(cap: f64, alpha: Complex64, _beta: Complex64) -> f64 {
    alpha.norm() * cap
}

/// Capacity of `f^{-1}(K)` for a degree-`n` polynomial with leading
/// coefficient `a_n`: `(Cap(K) / |a_n|)^(1/n)`.
pub fn capacity_preimage(k_cap: f64, leading: f64, n: usize) -> Result<f64> {
    if n == 0 || leading == 0.0 || k_cap < 0.0 {
        return Err(Error::InvalidInput(
            "capacity_preimage needs n >= 1, a_n != 0 and Cap(K) >= 0".into(),
        ));
    }
    Ok((k_cap / leading.abs()).powf(1.0 / n as f64))
}

/// [`capacity_preimage`] for a monic rational polynomial.
pub fn capacity_preimage_monic(f: &MonicRatPolynomial, k_cap: f64) -> Result<f64> {
    capacity_preimage(k_cap, 1.0, f.degree())
}

#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevTerm {
    pub n: usize,
    pub t_n: f64,
    /// `t_n^(1/n)`.
    pub root: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevConstant {
    pub terms: Vec<ChebyshevTerm>,
    /// `t_N^(1/N)` at the largest degree.
    pub last: f64,
    /// Limit estimate from the last three terms (see [`chebyshev_constant`]).
    pub extrapolated: f64,
    /// Whether `t_{n+m} <= t_n t_m (1 + tol)` held for every tested pair.
    pub submultiplicative: bool,
}

/// `t_n^(1/n)` for `n = 1..=n_max` and an extrapolated limit.
///
/// `t_n^(1/n)` approaches the limit only like `1 + O(1/n)`, because `t_n`
/// behaves like `C cap^n`. The extrapolation therefore fits `log t_n` by a
/// straight line over the last three degrees and returns `exp(slope)`, which
/// removes the constant `C`.
pub fn chebyshev_constant(e: &IntervalUnion, n_max: usize, tol: f64) -> Result<ChebyshevConstant> {
    if n_max == 0 {
        return Err(Error::InvalidInput("chebyshev_constant needs n_max >= 1".into()));
    }
    let mut terms = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = remez_monic(e, n, tol)?;
        terms.push(ChebyshevTerm { n, t_n: r.t_n, root: r.t_n.powf(1.0 / n as f64) });
    }
    let last = terms[n_max - 1].root;
    let extrapolated = if n_max >= 3 {
        let y: Vec<f64> = terms[n_max - 3..].iter().map(|t| t.t_n.ln()).collect();
        ((y[2] - y[0]) / 2.0).exp()
    } else {
        last
    };
    let slack = 1.0 + tol.max(1e-9);
    let mut submultiplicative = true;
    for a in 1..=n_max {
        for b in 1..=n_max - a {
            if terms[a + b - 1].t_n > terms[a - 1].t_n * terms[b - 1].t_n * slack {
                submultiplicative = false;
            }
        }
    }
    Ok(ChebyshevConstant { terms, last, extrapolated, submultiplicative })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: f64, b: f64) -> CompactDescriptor {
        CompactDescriptor::IntervalUnion(IntervalUnion::segment(a, b).unwrap())
    }

    #[test]
    fn closed_forms() {
        assert_eq!(capacity_closed_form(&seg(-2.0, 2.0)), Some(1.0));
        assert_eq!(capacity_closed_form(&seg(5.0, 9.0)), Some(1.0));
        assert_eq!(capacity_closed_form(&CompactDescriptor::Disk(3.0)), Some(3.0));
        let two = CompactDescriptor::IntervalUnion(
            IntervalUnion::from_bands(&[(-3.0, -1.0), (1.0, 3.0)]).unwrap(),
        );
        assert!((capacity_closed_form(&two).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(capacity_closed_form(&CompactDescriptor::FiniteSet(vec![Complex64::new(0.0, 0.0)])), None);
    }

    #[test]
    fn transport_rules() {
        assert_eq!(capacity_affine(1.0, Complex64::new(0.0, 2.0), Complex64::new(0.0, 0.0)), 2.0);
        assert_eq!(capacity_affine(0.5, Complex64::new(1.0, 0.0), Complex64::new(7.0, 0.0)), 0.5);
        assert_eq!(capacity_affine(1.0, Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.0)), 1.5);
        assert!((capacity_preimage(0.75, 1.0, 2).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(capacity_preimage(1.0, 2.0, 1).unwrap(), 0.5);
    }

    #[test]
    fn segment_constant_is_exact_after_extrapolation() {
        let e = IntervalUnion::segment(-2.0, 2.0).unwrap();
        let c = chebyshev_constant(&e, 8, 1e-12).unwrap();
        assert!((c.extrapolated - 1.0).abs() < 1e-9);
        assert!(c.submultiplicative);
        let e = IntervalUnion::segment(0.0, 2.0).unwrap();
        let c = chebyshev_constant(&e, 8, 1e-12).unwrap();
        assert!((c.extrapolated - 0.5).abs() < 1e-9);
    }
}
