//! Exact homological algebra over the integers for two-term complexes of
//! finitely generated abelian groups.
//!
//! The crate computes Ext groups in the derived category, classifies
//! extensions and biextensions by explicit cocycle data, and builds the
//! canonical free partial resolutions whose total complexes tie the two
//! descriptions together. Everything is exact integer arithmetic; every
//! computation is deterministic for a fixed input.

pub mod abelian;
pub mod error;

pub use error::{Error, Result};
