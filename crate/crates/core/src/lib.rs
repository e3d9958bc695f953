//! Stickelberger elements of abelian fields, their twists, and the mirror
//! involution and Tate twists on the cyclotomic Iwasawa algebra.
//!
//! Everything is computed exactly (rational and cyclotomic arithmetic) or
//! l-adically at an explicitly tracked precision.

pub mod arith;
pub mod bernoulli;
pub mod error;
pub mod field;
pub mod lattice;
pub mod logval;
pub mod serial;
pub mod stickelberger;
pub mod tower;

pub use error::{Error, Result};
