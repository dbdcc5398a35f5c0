//! Exact and numerical machinery for the cellular integrals
//!
//! ```text
//! xi_l = ∫_{[0,1]^l} dx_1…dx_l / ((1 - x_1 x_2)(1 - x_2 x_3)…(1 - x_{l-1} x_l))
//! ```
//!
//! The crate computes `xi_l` exactly as a rational polynomial in the
//! psi-numbers (sums of multiple zeta values with parts in {1, 2} ending in 2)
//! and checks every intermediate identity against numerics that do not share
//! a code path with the symbolic side.
//!
//! Layout:
//!
//! - [`words`]: the shuffle algebra over the letters {0, 1}.
//! - [`poly`]: commutative polynomials in formal symbols with exact rational coefficients.
//! - [`numeric`]: estimates with error bounds, Gauss-Legendre panels, extrapolation.
//! - [`mzv`]: multiple zeta values and the psi-sequence.
//! - [`hyperlog`]: one-variable hyperlogarithms and the variable-swap expansion.
//! - [`beta`]: the beta recurrence, its closed forms and the lattice counts behind them.
//! - [`xi`]: the integrals themselves.
//! - [`gfun`]: the `F_l` / `G_l` towers and the word-coefficient recursion.
//! - [`ratfun`]: exact rational functions, differential forms, boundary divisor orders.
//! - [`oracle`]: brute-force series and Monte Carlo ground truth.

pub mod beta;
pub mod error;
pub mod gfun;
pub mod hyperlog;
pub mod mzv;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod ratfun;
pub mod words;
pub mod xi;

pub use error::{Error, Result};
