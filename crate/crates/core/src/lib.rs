//! Truncated additive and multiplicative Toeplitz matrices.
//!
//! The crate builds finite sections `{ĉ(j − k)}` and `{ĉ(j / k)}` of Toeplitz
//! operators from finitely supported symbols on the torus `𝕋^d` or the
//! infinite torus `𝕋^∞`, generates Følner and non-Følner index sequences, and
//! compares normalized spectral functionals of the truncations against
//! independently computed limits.
//!
//! Modules, bottom-up:
//!
//! * [`arith`]: prime-exponent arithmetic for naturals and positive rationals,
//!   divisor-function sieves.
//! * [`symbol`]: trigonometric polynomials on `𝕋^d` and `𝕋^∞`.
//! * [`index_sets`]: index-set generators and exact Følner ratios.
//! * [`operators`]: dense truncations, compressed powers, Gram matrices.
//! * [`spectral`]: eigenvalues, traces, counts, determinants, trace-norm checks.
//! * [`reference`]: torus quadrature, Dirichlet-series and time-average oracles.
//!
//! ```
//! use mtoeplitz::{index_sets::IndexSet, operators::truncate, spectral, symbol::Symbol};
//!
//! // φ(z) = z + z̄ on the circle, truncated to {0, …, 7}.
//! let phi = Symbol::cosine_additive(&[1]);
//! let t = truncate(&phi, &IndexSet::additive_segment(8)).unwrap();
//! let eig = spectral::eigenvalues(&t).unwrap();
//! let lambda_max = 2.0 * (std::f64::consts::PI / 9.0).cos();
//! assert!((eig.values().last().unwrap() - lambda_max).abs() < 1e-12);
//! ```

pub mod arith;
mod error;
pub mod index_sets;
pub mod operators;
pub mod poly;
pub mod reference;
pub mod spectral;
pub mod symbol;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/index-sets.md")]
    mod index_sets {}
    #[doc = include_str!("../../../book/src/truncations.md")]
    mod truncations {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/reference-limits.md")]
    mod reference_limits {}
}
