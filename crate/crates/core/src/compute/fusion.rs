use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{FockBasisState, StateVector};
use crate::measurement::NULL_PROBABILITY;
use crate::register::{PolarizationRegister, Rail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Type1Outcome {
    /// `(|H><HH| + |V><VV|)/sqrt2`.
    Plus,
    /// `(|H><HH| - |V><VV|)/sqrt2`.
    Minus,
    /// `<HV|`: both photons detected, nothing emitted.
    FailHV,
    /// `<VH|`.
    FailVH,
}

impl Type1Outcome {
    pub const ALL: [Type1Outcome; 4] = [Type1Outcome::Plus, Type1Outcome::Minus, Type1Outcome::FailHV, Type1Outcome::FailVH];

    pub fn is_success(self) -> bool {
        matches!(self, Type1Outcome::Plus | Type1Outcome::Minus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Type2Outcome {
    /// Detector class `(H,H)/(V,V)`: `(<HV| + <VH|)/sqrt2`.
    SamePolarization,
    /// Detector class `(H,V)/(V,H)`: `(<HH| + <VV|)/sqrt2`.
    MixedPolarization,
    /// `(<HV| - <VH|)/sqrt2`.
    FailSame,
    /// `(<HH| - <VV|)/sqrt2`.
    FailMixed,
}

impl Type2Outcome {
    pub const ALL: [Type2Outcome; 4] = [
        Type2Outcome::SamePolarization,
        Type2Outcome::MixedPolarization,
        Type2Outcome::FailSame,
        Type2Outcome::FailMixed,
    ];

    pub fn is_success(self) -> bool {
        matches!(self, Type2Outcome::SamePolarization | Type2Outcome::MixedPolarization)
    }

    /// Coefficients of `<HH|, <HV|, <VH|, <VV|`.
    fn bra(self) -> [f64; 4] {
        let s = FRAC_1_SQRT_2;
        match self {
            Type2Outcome::SamePolarization => [0.0, s, s, 0.0],
            Type2Outcome::MixedPolarization => [s, 0.0, 0.0, s],
            Type2Outcome::FailSame => [0.0, s, -s, 0.0],
            Type2Outcome::FailMixed => [s, 0.0, 0.0, -s],
        }
    }
}

/// One branch of a fusion measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionBranch<O> {
    pub outcome: O,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub post_state: Option<StateVector>,
    /// Register describing `post_state`.
    pub register: PolarizationRegister,
}

fn polarization(k: &FockBasisState, rail: Rail) -> Option<usize> {
    match (k.occupation(rail.h), k.occupation(rail.v)) {
        (1, 0) => Some(0),
        (0, 1) => Some(1),
        _ => None,
    }
}

fn drop_rails(k: &FockBasisState, rails: &[Rail]) -> FockBasisState {
    let mut modes: Vec<usize> = rails.iter().flat_map(|r| [r.h, r.v]).collect();
    modes.sort_unstable_by(|a, b| b.cmp(a));
    modes.iter().fold(k.clone(), |acc, &m| acc.without_mode(m))
}

fn branch<O>(outcome: O, projected: StateVector, register: PolarizationRegister) -> Result<FusionBranch<O>> {
    let probability = projected.norm_sqr();
    let post_state = if probability > NULL_PROBABILITY {
        Some(projected.normalized()?)
    } else {
        None
    };
    Ok(FusionBranch {
        outcome,
        probability,
        post_state,
        register,
    })
}

/// Type-I fusion of qubits `i` and `j`. On success the surviving photon
/// takes the place of qubit `i`; qubit `j` is removed from the register.
pub fn fusion_type1(
    state: &StateVector,
    register: &PolarizationRegister,
    i: usize,
    j: usize,
    outcome: Type1Outcome,
) -> Result<FusionBranch<Type1Outcome>> {
    let ri = register.check_single_photon(state, i)?;
    let rj = register.check_single_photon(state, j)?;
    if i == j {
        return Err(crate::error::Error::RepeatedMode(ri.h));
    }
    let (modes, reg) = if outcome.is_success() {
        (state.mode_count() - 2, register.without_qubit(j)?)
    } else {
        let reg = register.without_qubit(i.max(j))?.without_qubit(i.min(j))?;
        (state.mode_count() - 4, reg)
    };
    let projected = state.map_basis(modes, |k, a| {
        let (pi, pj) = (polarization(k, ri)?, polarization(k, rj)?);
        match outcome {
            Type1Outcome::Plus | Type1Outcome::Minus if pi == pj => {
                let sign = if pi == 1 && outcome == Type1Outcome::Minus { -1.0 } else { 1.0 };
                Some((drop_rails(k, &[rj]), a * (sign * FRAC_1_SQRT_2)))
            }
            Type1Outcome::FailHV if (pi, pj) == (0, 1) => Some((drop_rails(k, &[ri, rj]), a)),
            Type1Outcome::FailVH if (pi, pj) == (1, 0) => Some((drop_rails(k, &[ri, rj]), a)),
            _ => None,
        }
    });
    branch(outcome, projected, reg)
}

/// Type-II fusion of qubits `i` and `j`; both photons are detected.
pub fn fusion_type2(
    state: &StateVector,
    register: &PolarizationRegister,
    i: usize,
    j: usize,
    outcome: Type2Outcome,
) -> Result<FusionBranch<Type2Outcome>> {
    let ri = register.check_single_photon(state, i)?;
    let rj = register.check_single_photon(state, j)?;
    if i == j {
        return Err(crate::error::Error::RepeatedMode(ri.h));
    }
    let reg = register.without_qubit(i.max(j))?.without_qubit(i.min(j))?;
    let bra = outcome.bra();
    let projected = state.map_basis(state.mode_count() - 4, |k, a| {
        let idx = 2 * polarization(k, ri)? + polarization(k, rj)?;
        (bra[idx] != 0.0).then(|| (drop_rails(k, &[ri, rj]), a * bra[idx]))
    });
    branch(outcome, projected, reg)
}
