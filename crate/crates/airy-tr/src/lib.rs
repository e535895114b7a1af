//! Exact topological recursion on local spectral curves, Airy structures
//! and their quantum recursion, KW/BGW Virasoro constraints, and a numeric
//! elliptic family used to check period-variation formulas.
//!
//! Conventions used throughout:
//! * a local differential is stored as `S(z) dz/z`; the coefficient of
//!   `z^{-k} dz/z` is the `k`-th pole coefficient and `k = 0` is forbidden;
//! * local charts are normalized to `u = z^2`, so the deck involution is `z -> -z`;
//! * Airy tensors follow `H_i = -y_i + a_ijk x^j x^k + 2 b_ij^k x^j y_k + c_i^jk y_j y_k`,
//!   quantized by `y_i -> hbar d/dx^i` with an extra `hbar eps_i`.

pub mod airy;
pub mod algebra;
pub mod cli;
pub mod elliptic;
pub mod eo;
pub mod error;
pub mod virasoro;

pub use algebra::{rat, Rat};
pub use error::{Error, Result};
