use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::StateVector;
use crate::measurement::{bell_class, bell_measure, BellMode, BellState};
use crate::register::{pauli_x, pauli_z, PolarizationRegister, Rail};

/// Pauli operator up to phase, `X^x Z^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Z,
    #[serde(rename = "XZ")]
    XZ,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::XZ => (true, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::XZ,
        }
    }

    /// Product up to phase.
    pub fn times(self, other: Pauli) -> Pauli {
        let (a, b) = (self.bits(), other.bits());
        Pauli::from_bits(a.0 ^ b.0, a.1 ^ b.1)
    }

    /// The Pauli relating `bell` to `phi+` on the second qubit.
    pub fn of_bell(bell: BellState) -> Pauli {
        match bell {
            BellState::PhiPlus => Pauli::I,
            BellState::PhiMinus => Pauli::Z,
            BellState::PsiPlus => Pauli::X,
            BellState::PsiMinus => Pauli::XZ,
        }
    }

    /// Undoes `X^x Z^z` on a rail: applies `X^x` then `Z^z`.
    pub fn undo(self, state: &StateVector, rail: Rail) -> StateVector {
        let (x, z) = self.bits();
        let s = if x { pauli_x(state, rail) } else { state.clone() };
        if z {
            pauli_z(&s, rail)
        } else {
            s
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportOutcome {
    /// Bell class identified by the analyzer; `None` for a failed analysis.
    pub bell_label: Option<BellState>,
    /// Raw measurement outcome label.
    pub detection: String,
    pub probability: f64,
    pub correction: Option<Pauli>,
    /// Bob's photon before the correction.
    pub received_state: Option<StateVector>,
    pub corrected_state: Option<StateVector>,
    /// `|<input|corrected>|^2`.
    pub fidelity: Option<f64>,
}

/// All outcomes of teleporting `(h, v)` through a Bell pair `resource`.
///
/// Photon 1 carries the input on modes `(0,1)`; the resource occupies
/// `(2,3)` and `(4,5)`. Bob keeps the last rail.
pub fn teleport_branches(input: [Complex64; 2], resource: BellState, mode: BellMode) -> Result<Vec<TeleportOutcome>> {
    let one = PolarizationRegister::contiguous(1);
    let psi = one.encode(&input)?.normalized()?;
    let pair = PolarizationRegister::contiguous(2).encode(&resource.amplitudes())?;
    let joint = psi.tensor(&pair);
    let bob = one.rail(0)?;
    let records = bell_measure(&joint, Rail::new(0, 1), Rail::new(2, 3), mode)?;
    records
        .into_iter()
        .filter(|r| r.probability > 0.0)
        .map(|r| {
            let label = bell_class(&r.outcome);
            let correction = label.map(|b| Pauli::of_bell(b).times(Pauli::of_bell(resource)));
            let corrected = match (correction, &r.post_state) {
                (Some(c), Some(s)) => Some(c.undo(s, bob)),
                _ => None,
            };
            let fidelity = corrected.as_ref().map(|c| psi.fidelity(c)).transpose()?;
            Ok(TeleportOutcome {
                bell_label: label,
                detection: r.outcome,
                probability: r.probability,
                correction,
                received_state: r.post_state,
                corrected_state: corrected,
                fidelity,
            })
        })
        .collect()
}

/// Samples one teleportation run.
pub fn teleport<R: Rng + ?Sized>(
    input: [Complex64; 2],
    resource: BellState,
    mode: BellMode,
    rng: &mut R,
) -> Result<TeleportOutcome> {
    let mut branches = teleport_branches(input, resource, mode)?;
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut pick = branches.len() - 1;
    for (i, b) in branches.iter().enumerate() {
        acc += b.probability;
        if u < acc {
            pick = i;
            break;
        }
    }
    Ok(branches.swap_remove(pick))
}
