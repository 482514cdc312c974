//! Arithmetic in GF(2^n) and exact linear algebra over F2 and GF(2^n).

mod f2matrix;
mod fieldmatrix;
mod gf2n;

pub use f2matrix::F2Matrix;
pub use fieldmatrix::{field_rank, FieldMatrix};
pub use gf2n::{clmul, is_irreducible, FieldElement, FieldSpec};
pub use gf2n::{parse_hex_u128, parse_hex_u64};
