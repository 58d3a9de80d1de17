//! Regular Coulomb wave functions for complex `L` and `η`, and numerical
//! starlikeness certificates for their normalized form
//!
//! ```text
//! g(z) = Σ_{n≥0} a_n z^{n+1},   a_0 = 1,  a_1 = η/(L+1),
//! n(n+2L+1) a_n = 2η a_{n-1} − a_{n-2}
//! ```
//!
//! on the unit disk. The crate is split into:
//!
//! - [`series`]: coefficient tables, complex gamma, `C_L(η)`, `g`, `g'`, `F`
//! - [`kummer`]: an independent `e^{-iz} ₁F₁` coefficient expansion used as a cross-check
//! - [`analytic`]: the ratio `P = z g'/g` and the residuals of the two ODEs it satisfies
//! - [`zeros`]: zeros of `g` inside a radius, winding counts and the canonical product
//! - [`starlike`]: region margins, sufficient parameter conditions and grid certification
//! - [`admissibility`]: the boundary loci and the extremal functions used by the
//!   sufficient conditions
//!
//! ```
//! use coulomb_starlike::{CoulombParams, series};
//! use num_complex::Complex64;
//!
//! let params = CoulombParams::real(0.0, 0.0).unwrap();
//! let g = series::eval_g(&params, Complex64::new(1.0, 0.0), 1e-12).unwrap();
//! assert!((g.value.re - 1f64.sin()).abs() < 1e-12);
//! ```

// `!(x > 0.0)` style checks are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Lanczos coefficients are kept as published
#![allow(clippy::excessive_precision)]

pub mod admissibility;
pub mod analytic;
mod dd;
pub mod error;
pub mod gamma;
pub mod kummer;
pub mod output;
pub mod params;
pub mod series;
pub mod starlike;
pub mod zeros;

pub use error::{Error, Result};
pub use params::CoulombParams;
pub use series::{CoefficientTable, ComplexValue};

/// Default absolute tolerance for series evaluation.
pub const DEFAULT_TOL: f64 = 1e-12;
