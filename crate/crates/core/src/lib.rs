//! Spectral families of self-adjoint matrices constructed from the geometric
//! subspaces `F(A, λ) = { x : ||A^n x|| <= λ^n ||x|| }`.
//!
//! * [`linalg`]: dense real/complex substrate and the Jacobi eigen oracle.
//! * [`subspace`]: membership, bases and projectors of `F(A, λ)`, with
//!   executable inclusion and inequality checks.
//! * [`family`]: the resolution of identity `E(λ)` as an exact jump list.
//! * [`splitting`]: `A = A₋ ⊕ A₊` via `B = A (1 + A²)⁻¹`.
//! * [`quadrature`]: Riemann-Stieltjes sums and operator reconstruction.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod family;
pub mod linalg;
pub mod quadrature;
pub mod splitting;
pub mod subspace;

pub use error::{Error, Result};
