use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::StateVector;
use crate::register::PolarizationRegister;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloneResult {
    /// Two-photon output on rails `(0,1)` and `(2,3)`.
    pub output: StateVector,
    /// `|<psi psi|output>|^2`.
    pub fidelity: f64,
}

/// Runs the linear H/V copier `|H>|H> -> |H>|H>`, `|V>|H> -> |V>|V>` on the
/// normalized polarization `(h, v)` with a blank `|H>` photon.
pub fn clone_attempt(h: Complex64, v: Complex64) -> Result<CloneResult> {
    let reg = PolarizationRegister::contiguous(2);
    let one = PolarizationRegister::contiguous(1).encode(&[h, v])?.normalized()?;
    let [h, v] = {
        let d = PolarizationRegister::contiguous(1).decode(&one)?;
        [d[0], d[1]]
    };
    let zero = Complex64::new(0.0, 0.0);
    let output = reg.encode(&[h, zero, zero, v])?;
    let ideal = reg.encode(&[h * h, h * v, v * h, v * v])?;
    let fidelity = ideal.fidelity(&output)?;
    Ok(CloneResult { output, fidelity })
}
