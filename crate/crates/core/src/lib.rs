//! Integrable structure of the hyperbolic `BC_n` Sutherland model.
//!
//! * [`liealg`]: u(n,n), its adapted basis, the Casimir and tensor utilities.
//! * [`model`]: couplings, Hamiltonian, Lax matrix, dynamical r-matrix, `R`, `B`.
//! * [`poisson`]: canonical brackets, `{L₁, L₂}` and the r-matrix identity.
//! * [`dynamics`]: ODE integration, Lax-equation diagnostics, KAK and the
//!   projection solver.

pub mod dynamics;
pub mod error;
pub mod liealg;
pub mod model;
pub mod poisson;
pub mod sampling;

pub use error::{Error, Result};
