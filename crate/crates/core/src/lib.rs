//! Numerical toolkit for rotation-symmetric bosonic codes (RSBCs).
//!
//! The crate builds cat and binomial codewords on a truncated Fock basis,
//! evolves them under photon loss and dephasing, and applies symmetry
//! expansion (SE) error mitigation. Every mitigation variant has an exact
//! path (projector algebra) and a shot-level Monte Carlo path that simulates
//! the ancilla Hadamard-test circuits. Closed-form results in [`analytics`]
//! act as independent oracles for the numerical pipeline.
//!
//! Modules, bottom-up:
//!
//! - [`fock`]: dense complex states, operators and density matrices.
//! - [`codes`]: cat and binomial codewords, logical states.
//! - [`channels`]: photon-loss Kraus maps, dephasing, an RK4 Lindblad oracle.
//! - [`projectors`]: rotation-symmetry and code-space projectors, truncated
//!   number-translation map.
//! - [`mitigation`]: generalized process, state-preparation SE, pre-measurement
//!   SE, virtual code-state creation, sampling cost.
//! - [`analytics`]: comb series and the closed forms built on them.
//! - [`wigner`]: displaced-parity Wigner grids.
//!
//! Data-parallel loops (Kraus sums, amplitude tables, Wigner grids) go
//! through [`exec::Exec`]; with the `parallel` feature disabled they run
//! sequentially and produce bit-identical output.

// Input guards are written `!(x >= 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod channels;
pub mod codes;
pub mod error;
pub mod exec;
pub mod fock;
pub mod mitigation;
pub mod projectors;
pub mod rng;
pub mod wigner;

pub use error::{Error, Result};
pub use exec::Exec;
pub use fock::{DensityMatrix, FockOperator, FockVector, C64};
