//! Sieves, factorization, prime-power rules and assembly of multiplicative
//! sequences.

mod rule;
mod sequence;
mod sieve;

pub(crate) use rule::hecke_recursion;
pub use rule::{growth_violations, GrowthViolation, PrimePowerRule, RuleKind};
pub use sequence::{
    assemble_multiplicative, assemble_with, AngleRecord, AngleSeries, NormalizedSequence,
    SequenceSource,
};
pub use sieve::{Factorization, SpfSieve, DEFAULT_SIEVE_BUDGET_BYTES};
