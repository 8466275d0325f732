//! Fock-space primitives: basis labels, sparse state vectors, ladder
//! operators and the permanent-based lift of mode unitaries.

mod basis;
mod permanent;
mod state;
mod unitary;

pub use basis::{basis_index, basis_size, basis_state_at, enumerate_basis, FockBasisState};
pub use permanent::permanent;
pub use state::{ladder_factor_sq, StateVector, Truncated, PRUNE_TOLERANCE};
pub use unitary::{
    apply_unitary_permanent, lift_unitary_permanent, ModeUnitary, ORACLE_MAX_PHOTONS,
    UNITARITY_TOLERANCE,
};
