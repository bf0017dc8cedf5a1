//! Capacities of compact subsets of the plane, and algebraic integers whose
//! conjugates all lie in a real interval union.
//!
//! The crate offers three cross-checking routes to the logarithmic capacity
//! of a compact set (Fekete points, Chebyshev polynomials through Remez
//! exchange, and closed forms), a discretised equilibrium-measure solver,
//! exhaustive enumeration of monic integer polynomials with all roots in a
//! segment, and two constructive routes to infinitely many such polynomials:
//! integerisation of Hilbert lemniscates and the Chebyshev-power reduction on
//! interval unions that solve a polynomial Pell equation.
//!
//! The `book/` directory holds a narrative guide; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod capacity;
pub mod enumerate;
pub mod equilibrium;
pub mod error;
pub mod lemniscate;
pub mod pellabel;
pub mod plotdata;
pub mod poly;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/capacity.md")]
    mod capacity {}
    #[doc = include_str!("../../../book/src/enumerate.md")]
    mod enumerate {}
    #[doc = include_str!("../../../book/src/equilibrium.md")]
    mod equilibrium {}
    #[doc = include_str!("../../../book/src/lemniscate.md")]
    mod lemniscate {}
    #[doc = include_str!("../../../book/src/pellabel.md")]
    mod pellabel {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
