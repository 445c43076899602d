//! q-series building blocks: the validated base `q`, Pochhammer symbols,
//! Gaussian binomials, Euler's expansions and the log-scaled number type
//! used throughout the crate.

mod certified;
mod euler;
mod logscaled;
mod param;
mod pochhammer;
pub(crate) mod series;
pub mod sum;

pub use certified::CertifiedValue;
pub(crate) use certified::{gamma, EPS};
pub use euler::{euler_expand, qbinom_theorem_residual, EulerKind};
pub use logscaled::{LogScaled, Phase};
pub use param::{QParam, DEFAULT_CACHE_SIZE};
pub(crate) use pochhammer::{ln_qbinomial, qbinomial_unchecked};
pub use pochhammer::{ln_qpoch_infinite, qbinomial, qpoch_finite, qpoch_infinite};
