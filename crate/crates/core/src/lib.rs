//! Regular balanced Cayley maps on abelian p-groups through ideals of `Z_N[x]`.
//!
//! A `2n`-valent type I regular balanced Cayley map on an abelian group of
//! exponent `N` is the same thing as an ideal `Q` of `Z_N[x]` containing
//! `x^n + 1`, avoiding `x^m + 1` for `m < n` and containing no nonzero constant.
//! The modules here build those ideals from the factorisation of `x^n + 1` over
//! `Z_{p^k}`, construct the maps, and check them against a brute-force search
//! that works directly from the definition of a Cayley map.

pub mod cayley;
pub mod classify;
pub mod error;
pub mod factorlift;
pub mod ideals;
pub mod poly;
pub mod structure;
pub mod zring;

pub use error::{AdmissibilityClause, Error, Result};
