//! Exact symbolic verification of the matrix-group, Weyl-combinatorial,
//! character-theoretic, and power-series identities behind an unramified
//! Rankin-Selberg computation on the similitude orthogonal group GSO(12),
//! together with a numeric cross-check of the resulting local L-factor
//! identity.
//!
//! Everything symbolic runs over exact rational arithmetic; floating point
//! appears only in the numeric L-factor cross-checks in [`lfactors`].

pub mod chars;
pub mod cli;
pub mod data;
pub mod exactalg;
pub mod lfactors;
pub mod matgroups;
pub mod report;
pub mod unram;
pub mod weyl;
