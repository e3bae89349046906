//! Entanglement diagnostics for two two-level atoms in a single-mode cavity.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, Jacobi
//!   eigensolver, unitary propagators.
//! * [`qstate`]: validated density matrices, partial trace and transpose, and
//!   the symmetric two-atom state family.
//! * [`dynamics`]: the resonant two-atom/one-mode Hamiltonian, exact
//!   evolution from `|g,g⟩⊗|n⟩`, and the closed-form populations.
//! * [`criteria`]: PPT test, negativity, and the spin-squeezing parameter.
//! * [`cli`]: the `tavis-ent` command line.

pub mod cli;
pub mod criteria;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod numfmt;
pub mod qstate;

pub use error::{Error, Result};
