use crate::error::Result;
use crate::fock::{FockBasisState, StateVector};
use crate::measurement::herald;
use crate::optics::{apply_beam_splitter, FIFTY_FIFTY};
use crate::register::PolarizationRegister;

use super::ns::{ns_circuit, ns_coefficients, HeraldedGateResult};

/// Ancilla pattern per NS gate: `|1>` then `|0>`.
const ANCILLA: [u32; 2] = [1, 0];

/// Two-qubit state after mixing the V modes on the first splitter, with the
/// NS ancillas appended on modes `4..8`.
fn first_stage(input: &StateVector) -> Result<StateVector> {
    let reg = PolarizationRegister::contiguous(2);
    reg.check_single_photon(input, 0)?;
    reg.check_single_photon(input, 1)?;
    let ancillas = StateVector::basis(
        FockBasisState::new([ANCILLA, ANCILLA].concat()),
        2,
    )?;
    let joint = input.normalized()?.tensor(&ancillas).with_cutoff(4)?;
    apply_beam_splitter(&joint, (1, 3), FIFTY_FIFTY)
}

/// Heralded CZ on two polarization qubits on modes `(0,1)` and `(2,3)`: the
/// V modes meet on a 50:50 splitter, pass one NS gate each and recombine.
/// Success needs both NS heralds.
pub fn cz_gate(input: &StateVector) -> Result<HeraldedGateResult> {
    let thetas = ns_coefficients()?.thetas;
    let mixed = first_stage(input)?;
    let mixed = ns_circuit(8, 1, 4, 5, thetas)?.apply(&mixed)?;
    let mixed = ns_circuit(8, 3, 6, 7, thetas)?.apply(&mixed)?;
    let out = apply_beam_splitter(&mixed, (1, 3), FIFTY_FIFTY)?;
    let record = herald(&out, &[(4, ANCILLA[0]), (5, ANCILLA[1]), (6, ANCILLA[0]), (7, ANCILLA[1])])?;
    let post = record.post_state.map(|s| s.with_cutoff(2)).transpose()?;
    Ok(HeraldedGateResult::from_record(record.probability, post))
}

/// Ideal logical CZ: `-1` on `|VV>`.
pub fn cz_target(input: &StateVector) -> StateVector {
    input.map_basis(input.mode_count(), |k, a| {
        let sign = if k.occupation(1) == 1 && k.occupation(3) == 1 { -1.0 } else { 1.0 };
        Some((k.clone(), a * sign))
    })
}
