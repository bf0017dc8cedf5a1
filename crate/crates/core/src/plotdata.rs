//! CSV tables behind the usual plots: degree histograms of an enumeration,
//! a pair of CDFs on a common grid, and point clouds.

use num_complex::Complex64;

use crate::enumerate::EnumerationResult;
use crate::equilibrium::DiscreteMeasure;
use crate::error::{Error, Result};

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("csv: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// `degree,polynomials,algebraic_integers`, one row per degree `1..=max_degree`.
pub fn degree_histogram(r: &EnumerationResult, max_degree: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["degree", "polynomials", "algebraic_integers"]).map_err(csv_err)?;
    for d in 1..=max_degree {
        let ints = r.new_integers_by_degree.get(&d).copied().unwrap_or(0);
        w.serialize((d, r.count(d), ints)).map_err(csv_err)?;
    }
    finish(w)
}

/// `x,cdf_a,cdf_b` at `points` equally spaced abscissae covering both
/// supports.
pub fn cdf_pair(a: &DiscreteMeasure, b: &DiscreteMeasure, points: usize) -> Result<String> {
    if points < 2 {
        return Err(Error::InvalidInput("cdf_pair needs at least 2 grid points".into()));
    }
    if !a.is_real() || !b.is_real() {
        return Err(Error::UnsupportedSupport);
    }
    let xs = a.support.iter().chain(&b.support).map(|z| z.re);
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "cdf_a", "cdf_b"]).map_err(csv_err)?;
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        w.serialize((x, a.cdf(x)?, b.cdf(x)?)).map_err(csv_err)?;
    }
    finish(w)
}

/// `index,re,im` for each point, in the given order.
pub fn fekete_scatter(points: &[Complex64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "re", "im"]).map_err(csv_err)?;
    for (i, z) in points.iter().enumerate() {
        w.serialize((i, z.re, z.im)).map_err(csv_err)?;
    }
    finish(w)
}
