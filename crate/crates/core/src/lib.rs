//! Exact coefficient tables and desk-scale empirical checks for real
//! multiplicative sequences whose prime values follow the Sato–Tate law.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] — smallest-prime-factor sieve, factorization, prime-power
//!   rules and assembly of multiplicative sequences.
//! * [`tau`] — exact Ramanujan τ tables from the Δ eta product, with a
//!   quadratic reference oracle and integrity checks.
//! * [`ec`] — traces of Frobenius for short Weierstrass curves.
//! * [`synthetic`] — seeded Sato–Tate angle sampling.
//! * [`stats`] — Sato–Tate integrals, quadrature, ECDF and KS machinery.
//! * [`harness`] — verifiers that turn sequences into [`VerificationReport`]s.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod ec;
mod error;
pub mod harness;
pub mod numeric;
pub mod report;
pub mod stats;
pub mod synthetic;
pub mod tau;
pub mod tolerances;

pub use arith::{
    AngleRecord, AngleSeries, Factorization, NormalizedSequence, PrimePowerRule, RuleKind,
    SequenceSource, SpfSieve,
};
pub use error::{Error, Result};
pub use report::{Bound, Check, ReportTable, VerificationReport};
