//! Error-correcting codes at desk scale: linear codes with exact
//! syndrome-table decoding and the constant-weight enumerative code.

mod cw;
mod linear;

pub use cw::ConstantWeightCode;
pub use linear::{LinearCode, MAX_CODE_LENGTH};
