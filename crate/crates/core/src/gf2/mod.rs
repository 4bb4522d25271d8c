//! Exact GF(2) linear algebra: bit-packed vectors and matrices, products,
//! rank, inverses, the full Moore-Penrose right-inverse family, weight
//! utilities and seeded random generation.
//!
//! Convention used across the whole crate: index 0 is the leftmost bit in
//! strings and the most significant bit of a basis-state index.

mod matrix;
pub mod sample;
mod vector;

pub use matrix::BitMatrix;
pub use vector::{weight_vectors, BitVector};
