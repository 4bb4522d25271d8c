//! Desk-scale quantum McEliece public-key encryption.
//!
//! Everything runs at sizes where claims can be checked mechanically:
//! GF(2) linear algebra is exact, codes decode from exhaustive syndrome
//! tables, quantum registers are dense state vectors, and the adversary's
//! transformations are executed literally.
//!
//! **Not for production use** — the point is verifiability, not security.

pub mod attacks;
pub mod codes;
mod error;
pub mod feasibility;
pub mod gf2;
pub mod json;
pub mod pke;
pub mod qsim;

pub use error::{Error, Result};
