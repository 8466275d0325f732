//! Polarization qubits on spatial rails: `|H> = |0>`, `|V> = |1>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{FockBasisState, StateVector};

/// The (H, V) mode pair of one spatial rail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rail {
    pub h: usize,
    pub v: usize,
}

impl Rail {
    pub fn new(h: usize, v: usize) -> Self {
        Self { h, v }
    }

    /// Total photons on the rail in one basis state.
    pub fn occupancy(&self, state: &FockBasisState) -> u32 {
        state.occupation(self.h) + state.occupation(self.v)
    }
}

/// Logical qubit `q` lives on `rails[q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationRegister {
    mode_count: usize,
    rails: Vec<Rail>,
}

impl PolarizationRegister {
    pub fn new(mode_count: usize, rails: Vec<Rail>) -> Result<Self> {
        let mut seen = vec![false; mode_count];
        for rail in &rails {
            for m in [rail.h, rail.v] {
                if m >= mode_count {
                    return Err(Error::ModeOutOfRange { mode: m, mode_count });
                }
                if seen[m] {
                    return Err(Error::RepeatedMode(m));
                }
                seen[m] = true;
            }
        }
        Ok(Self { mode_count, rails })
    }

    /// `n` qubits on modes `(0,1), (2,3), ...`.
    pub fn contiguous(qubits: usize) -> Self {
        Self {
            mode_count: 2 * qubits,
            rails: (0..qubits).map(|q| Rail::new(2 * q, 2 * q + 1)).collect(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.rails.len()
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn rails(&self) -> &[Rail] {
        &self.rails
    }

    pub fn rail(&self, qubit: usize) -> Result<Rail> {
        self.rails.get(qubit).copied().ok_or_else(|| {
            invalid("rail", format!("qubit {qubit} not in a {}-qubit register", self.rails.len()))
        })
    }

    /// Fock label of a computational basis state; bit `n-1-q` of `index`
    /// is qubit `q` (qubit 0 is the most significant).
    pub fn basis_label(&self, index: usize) -> FockBasisState {
        let n = self.rails.len();
        let mut occ = vec![0u32; self.mode_count];
        for (q, rail) in self.rails.iter().enumerate() {
            if (index >> (n - 1 - q)) & 1 == 1 {
                occ[rail.v] = 1;
            } else {
                occ[rail.h] = 1;
            }
        }
        FockBasisState::new(occ)
    }

    /// Encodes `2^n` qubit amplitudes as a Fock state with one photon per rail.
    pub fn encode(&self, amplitudes: &[Complex64]) -> Result<StateVector> {
        let n = self.rails.len();
        if amplitudes.len() != 1 << n {
            return Err(invalid(
                "amplitudes",
                format!("expected {} amplitudes for {n} qubits, got {}", 1 << n, amplitudes.len()),
            ));
        }
        StateVector::from_amplitudes(
            self.mode_count,
            n as u32,
            amplitudes
                .iter()
                .enumerate()
                .map(|(i, a)| (self.basis_label(i), *a)),
        )
    }

    /// Product state from one `(H, V)` amplitude pair per qubit.
    pub fn encode_product(&self, qubits: &[[Complex64; 2]]) -> Result<StateVector> {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for q in qubits {
            amps = amps.iter().flat_map(|a| [a * q[0], a * q[1]]).collect();
        }
        self.encode(&amps)
    }

    /// Inverse of [`encode`](Self::encode). Fails if any branch has a rail
    /// that does not hold exactly one photon, or photons outside the rails.
    pub fn decode(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if state.mode_count() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: state.mode_count(),
            });
        }
        let n = self.rails.len();
        let mut out = vec![Complex64::default(); 1 << n];
        for (label, amp) in state.iter() {
            let mut index = 0usize;
            for (q, rail) in self.rails.iter().enumerate() {
                let found = rail.occupancy(label);
                if found != 1 {
                    return Err(Error::RailOccupancy { rail: q, found });
                }
                index = (index << 1) | label.occupation(rail.v) as usize;
            }
            if label.total() as usize != n {
                return Err(invalid("state", "photons outside the register rails"));
            }
            out[index] += amp;
        }
        Ok(out)
    }

    /// Checks that every branch of `state` has exactly one photon on `rail`.
    pub fn check_single_photon(&self, state: &StateVector, qubit: usize) -> Result<Rail> {
        let rail = self.rail(qubit)?;
        for (label, _) in state.iter() {
            let found = rail.occupancy(label);
            if found != 1 {
                return Err(Error::RailOccupancy { rail: qubit, found });
            }
        }
        Ok(rail)
    }

    /// Register with `qubit` removed and mode indices above its rail shifted down.
    pub fn without_qubit(&self, qubit: usize) -> Result<Self> {
        let removed = self.rail(qubit)?;
        let shift = |m: usize| m - usize::from(m > removed.h) - usize::from(m > removed.v);
        let rails = self
            .rails
            .iter()
            .enumerate()
            .filter(|(q, _)| *q != qubit)
            .map(|(_, r)| Rail::new(shift(r.h), shift(r.v)))
            .collect();
        Self::new(self.mode_count - 2, rails)
    }
}

/// Pauli X on a rail: swaps the H and V occupations.
pub fn pauli_x(state: &StateVector, rail: Rail) -> StateVector {
    state.map_basis(state.mode_count(), |k, a| {
        let (h, v) = (k.occupation(rail.h), k.occupation(rail.v));
        Some((k.with_occupation(rail.h, v).with_occupation(rail.v, h), a))
    })
}

/// Pauli Z on a rail: sign `(-1)^{n_V}`.
pub fn pauli_z(state: &StateVector, rail: Rail) -> StateVector {
    state.map_basis(state.mode_count(), |k, a| {
        let sign = if k.occupation(rail.v) % 2 == 1 { -1.0 } else { 1.0 };
        Some((k.clone(), a * sign))
    })
}
