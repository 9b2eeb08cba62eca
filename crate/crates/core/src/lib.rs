//! Symmetry-protected digital quantum simulation at desk scale.
//!
//! A product-formula simulation of `exp(-iHt)` splits the evolution into `r`
//! steps of size `δt` and approximates each step by a circuit `S_δt`. This
//! crate interleaves those steps with unitaries `C_k` drawn from a symmetry
//! group of `H`,
//!
//! ```text
//!     exp(-iHt)  ≈  ∏_{k=1..r}  C_k† · S_δt · C_k,
//! ```
//!
//! so that the per-step errors rotate against each other and partially cancel.
//! The crate provides:
//!
//! - [`linalg`]: dense complex kernels (products, Kronecker products,
//!   Hermitian eigendecomposition, matrix exponential/logarithm, spectral
//!   norm) sized for Hilbert-space dimensions up to 8192;
//! - [`models`]: the all-pairs random Heisenberg chain, the disordered
//!   (MBL) Heisenberg chain, and the lattice Schwinger model with its gauge
//!   operators and physical subspace;
//! - [`symmetry`]: protection schedules (Haar-random SU(2), deterministic
//!   Hadamard, U(1) z-rotations, gauge transformations, random term
//!   ordering) and kick-spectrum analysis;
//! - [`evolve`]: first/second/fourth-order and multi-product step operators,
//!   dense and state-vector protected runners, effective-Hamiltonian
//!   extraction, leakage, and correlated coherent noise;
//! - [`bounds`]: closed-form error bounds (commutator sums, the
//!   symmetry-protection bound, its general-schedule variant, and the
//!   quantum-Zeno convergence bounds) plus the matching measured quantities;
//! - [`experiments`]: seeded scenario runners with median/quartile summaries,
//!   power-law fits, and minimal-Trotter-number searches.

pub mod bounds;
pub mod evolve;
pub mod experiments;
pub mod linalg;
pub mod models;
pub mod rng;
pub mod symmetry;

pub use linalg::{Layout, LinalgError, Operator, StateVec, C64, DENSE_DIM_CAP};
