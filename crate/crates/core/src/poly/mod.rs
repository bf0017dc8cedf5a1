//! Exact polynomial arithmetic, numeric roots and the algebraic
//! classification results for polynomials with integer coefficients.

pub mod algebra;
pub mod dense;
pub mod monic;
pub mod roots;

pub use algebra::{
    all_roots_in, chebyshev_monic, kronecker_classify, power_map, resultant, roots,
    simple_root_product, sturm_count, RealCoeffs, RootOfUnityReport,
};
pub use dense::{Poly, QPoly, ZPoly};
pub use monic::{format_rational, parse_rational, rational_string, MonicIntPolynomial, MonicRatPolynomial};
pub use roots::{aberth_polish, roots_complex, roots_f64, ComplexRootSet, DEFAULT_TOL};
