//! Knizhnik-Zamolodchikov connections on spaces of Lie-algebra invariants.
//!
//! The crate builds type-A Lie algebras and their irreducible modules in exact
//! arithmetic, assembles the two-site Casimir operators on tensor-product
//! invariants, certifies flatness of the KZ connection, transports along
//! paths in configuration space to get pure-braid monodromy, realizes
//! truncated level-`l` modules of affine `sl_2` with their Sugawara Virasoro
//! operators, and cross-checks conformal-block ranks with fusion rules.

pub mod error;
pub mod invariants;
pub mod kz;
pub mod lie;
pub mod numerics;
pub mod rep;
pub mod sugawara;
pub mod symbols;
pub mod verlinde;

pub use error::{Error, Result};
