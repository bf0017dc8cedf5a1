use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lemniscate::{lemniscate_contains, Lemniscate};

/// Finite union of disjoint closed real intervals, stored as the sorted
/// endpoint list `a_0 < b_0 < a_1 < ... < b_g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct IntervalUnion {
    endpoints: Vec<f64>,
}

impl IntervalUnion {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        if endpoints.is_empty() || endpoints.len() % 2 != 0 {
            return Err(Error::InvalidInput(
                "interval union needs a nonempty, even number of endpoints".into(),
            ));
        }
        if endpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("interval endpoints must be finite".into()));
        }
        if endpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "interval endpoints must be strictly increasing".into(),
            ));
        }
        Ok(IntervalUnion { endpoints })
    }

    pub fn segment(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn from_bands(bands: &[(f64, f64)]) -> Result<Self> {
        Self::new(bands.iter().flat_map(|&(a, b)| [a, b]).collect())
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn bands(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints.chunks(2).map(|c| (c[0], c[1]))
    }

    pub fn num_bands(&self) -> usize {
        self.endpoints.len() / 2
    }

    /// Gaps between consecutive bands.
    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints[1..self.endpoints.len() - 1]
            .chunks(2)
            .map(|c| (c[0], c[1]))
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.endpoints[0], *self.endpoints.last().unwrap())
    }

    pub fn total_length(&self) -> f64 {
        self.bands().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.bands().any(|(a, b)| x >= a - tol && x <= b + tol)
    }

    /// Index of the band containing `x` (within `tol`).
    pub fn band_of(&self, x: f64, tol: f64) -> Option<usize> {
        self.bands().position(|(a, b)| x >= a - tol && x <= b + tol)
    }

    /// Image under `x -> alpha x + beta` with real `alpha != 0`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Result<Self> {
        let mut e: Vec<f64> = self.endpoints.iter().map(|x| alpha * x + beta).collect();
        if alpha < 0.0 {
            e.reverse();
        }
        Self::new(e)
    }
}

impl TryFrom<Vec<f64>> for IntervalUnion {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IntervalUnion> for Vec<f64> {
    fn from(u: IntervalUnion) -> Vec<f64> {
        u.endpoints
    }
}

/// A compact set of the plane, in one of the shapes the crate can handle.
///
/// JSON form is externally tagged, e.g. `{"interval_union": [-2, 2]}`,
/// `{"circle": 1}`, `{"finite_set": [[0, 0], [1, 0]]}` or
/// `{"lemniscate": {"p": {"coeffs": ["-1/2", "1"]}, "rho": "3/2"}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactDescriptor {
    IntervalUnion(IntervalUnion),
    /// Circle `|z| = r` centred at the origin.
    Circle(f64),
    /// Closed disk `|z| <= r` centred at the origin.
    Disk(f64),
    Lemniscate(Lemniscate),
    FiniteSet(Vec<Complex64>),
}

impl CompactDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            CompactDescriptor::IntervalUnion(_) => Ok(()),
            CompactDescriptor::Circle(r) | CompactDescriptor::Disk(r) => {
                if r.is_finite() && *r > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("radius must be positive, got {r}")))
                }
            }
            CompactDescriptor::Lemniscate(l) => l.validate(),
            CompactDescriptor::FiniteSet(pts) => {
                if pts.is_empty() {
                    return Err(Error::InvalidInput("finite set is empty".into()));
                }
                if pts.iter().any(|z| !z.is_finite()) {
                    return Err(Error::InvalidInput("finite set has non-finite points".into()));
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        match self {
            CompactDescriptor::IntervalUnion(u) => z.im.abs() <= tol && u.contains(z.re, tol),
            CompactDescriptor::Circle(r) => (z.norm() - r).abs() <= tol * r.max(1.0),
            CompactDescriptor::Disk(r) => z.norm() <= r + tol * r.max(1.0),
            CompactDescriptor::Lemniscate(l) => {
                lemniscate_contains(l, z) || {
                    let v = crate::poly::dense::eval_complex(&l.p_f64(), z).norm();
                    v <= l.level() + tol
                }
            }
            CompactDescriptor::FiniteSet(pts) => pts.iter().any(|p| (p - z).norm() <= tol),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, CompactDescriptor::IntervalUnion(_))
    }
}
