//! Average sizes of Hecke eigenvalues on spaces of cusp forms `S_k(Γ₀(N))`.
//!
//! Two regimes are covered:
//!
//! * **vertical**: the quadratic mean `Av_m(N,k)` of the eigenvalues of the
//!   normalized Hecke operator `T'_m`, evaluated exactly from traces given by
//!   the Eichler–Selberg trace formula ([`trace`], [`vertical`]);
//! * **horizontal**: the quadratic mean `Av_f(x)` of the normalized Fourier
//!   coefficients of a single eigenform, together with the Rankin–Selberg limit
//!   and the moments of the Sato–Tate, CM and Serre measures ([`horizontal`]).
//!
//! The [`level1`] module is an independent path at level one (q-expansions,
//! Victor Miller basis, Hecke matrices, Ramanujan τ) used both to validate the
//! trace formula and to feed the horizontal statistics.

pub mod arith;
pub mod ddouble;
pub mod error;
pub mod horizontal;
pub mod level1;
mod ntt;
mod quadrature;
pub mod series;
pub mod trace;
pub mod vertical;

pub use arith::{ExactRational, HurwitzValue};
pub use error::{Error, Result};
pub use horizontal::{LimitConstant, LimitMeasure, NormalizedSeries};
pub use level1::{CoefficientSeries, HeckeMatrix};
pub use series::QExpansion;
pub use trace::{LevelWeight, NormalizedTrace, TraceCache, TraceValue};
pub use vertical::{AvSquared, ClassificationResult, RadicalForm};

