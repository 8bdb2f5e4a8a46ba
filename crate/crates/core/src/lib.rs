//! Exact bidiagonal factorisations `H = L1 ... Lr U` of the banded Hessenberg
//! recurrence matrices attached to systems of multiple orthogonal polynomials.
//!
//! Three independent routes produce the coefficient sequence `alpha_n`:
//!
//! * [`gauss_borel`]: LU factorisation of the striped moment matrices of the
//!   system and of its Darboux shifts, read off either from LU pivots, from
//!   the unit-lower factors, or from leading principal minors;
//! * [`bcf`]: the Euler-Gauss power-series ladder `g_{k+1} - g_k = alpha_k t g_{k+r+1}`;
//! * [`closed_forms`]: explicit formulas for Jacobi-Pineiro and multiple
//!   Laguerre (first kind) systems.
//!
//! All arithmetic is exact over the rationals, so the routes are compared
//! with plain equality.

pub mod bcf;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod gauss_borel;
pub mod hessenberg;
pub mod matrix;
pub mod moments;
pub mod poly;
pub mod scalar;
pub mod series;

pub use crate::error::{Error, Result};
pub use crate::gauss_borel::{AlphaSequence, Method};
pub use crate::moments::{ShiftedSystem, SystemKind, SystemSpec};
pub use crate::scalar::Scalar;
pub use crate::series::TruncatedSeries;
