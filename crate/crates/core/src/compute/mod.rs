//! Heralded gates, fusion and measurement-based computation.

mod cluster;
mod cz;
mod fusion;
mod mbqc;
mod ns;

pub use cluster::{build_cluster, Graph, GraphState, MAX_VERTICES};
pub use cz::{cz_gate, cz_target};
pub use fusion::{fusion_type1, fusion_type2, FusionBranch, Type1Outcome, Type2Outcome};
pub use mbqc::{distance_up_to_phase, hadamard, mbqc_single_qubit, mbqc_target, u_x, u_z, Mat2, MbqcRun};
pub use ns::{
    ns_amplitudes, ns_circuit, ns_coefficients, ns_gate, ns_target, solve_ns_coefficients, HeraldedGateResult,
    NsSolution,
};
