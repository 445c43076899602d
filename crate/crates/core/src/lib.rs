//! Numerical toolkit around Ramanujan's entire function
//! `A_q(z) = sum_k q^{k^2} (-z)^k / (q;q)_k`.
//!
//! * [`qcore`]: q-Pochhammer symbols, Gaussian binomials, Euler's formulas,
//!   the q-binomial theorem, and the [`LogScaled`](qcore::LogScaled) number type.
//! * [`ramanujan`]: certified evaluation of `A_q(z)` and its magnitude bounds.
//! * [`orthopoly`]: Ismail-Masson and Stieltjes-Wigert polynomials, their
//!   weights, the exponential scalings `x ~ q^{-nt}` and the renormalized
//!   brackets whose large-degree limits are `A_q` values.
//! * [`quadrature`]: truncated trapezoid rules on the real line for
//!   integrands that are Gaussian in `ln u` or `asinh x`.
//! * [`audit`]: end-to-end numerical checks of the identities and bounds,
//!   collected into a serializable [`AuditReport`](audit::AuditReport).

// `!(a < b)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod error;
pub mod orthopoly;
pub mod qcore;
pub mod quadrature;
pub mod ramanujan;

pub use error::{QError, Result};
pub use qcore::{CertifiedValue, LogScaled, QParam};
