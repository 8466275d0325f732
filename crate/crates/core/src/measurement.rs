//! Projective photon counting, polarization and Bell measurements, and a
//! binary lossy detector.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{FockBasisState, StateVector};
use crate::optics::{apply_beam_splitter, FIFTY_FIFTY};
use crate::register::Rail;

/// Probabilities below this are reported without a post-measurement state.
pub const NULL_PROBABILITY: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub outcome: String,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub post_state: Option<StateVector>,
}

impl MeasurementRecord {
    fn from_unnormalized(outcome: impl Into<String>, projected: StateVector) -> Self {
        let probability = projected.norm_sqr();
        let post_state = if probability > NULL_PROBABILITY {
            projected.normalized().ok()
        } else {
            None
        };
        Self {
            outcome: outcome.into(),
            probability,
            post_state,
        }
    }
}

/// Removes `modes` from a basis label.
fn drop_modes(k: &FockBasisState, modes: &[usize]) -> FockBasisState {
    let mut sorted = modes.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.iter().fold(k.clone(), |acc, &m| acc.without_mode(m))
}

/// Projects `mode` onto `n` photons and removes it from the register.
pub fn detect_number(state: &StateVector, mode: usize, n: u32) -> Result<MeasurementRecord> {
    state.check_mode(mode)?;
    let projected = state.map_basis(state.mode_count() - 1, |k, a| {
        (k.occupation(mode) == n).then(|| (k.without_mode(mode), a))
    });
    Ok(MeasurementRecord::from_unnormalized(n.to_string(), projected))
}

/// Like [`detect_number`] but keeps the measured mode in place.
pub fn project_number(state: &StateVector, mode: usize, n: u32) -> Result<MeasurementRecord> {
    state.check_mode(mode)?;
    let projected = state.map_basis(state.mode_count(), |k, a| {
        (k.occupation(mode) == n).then(|| (k.clone(), a))
    });
    Ok(MeasurementRecord::from_unnormalized(n.to_string(), projected))
}

/// Every photon-number outcome of `mode` with non-zero weight.
pub fn number_distribution(state: &StateVector, mode: usize) -> Result<BTreeMap<u32, f64>> {
    state.check_mode(mode)?;
    let mut out = BTreeMap::new();
    for (k, a) in state.iter() {
        *out.entry(k.occupation(mode)).or_insert(0.0) += a.norm_sqr();
    }
    Ok(out)
}

/// Sequential heralding: each `(mode, n)` is detected in turn, highest mode
/// first so earlier removals do not shift later indices.
pub fn herald(state: &StateVector, pattern: &[(usize, u32)]) -> Result<MeasurementRecord> {
    let mut sorted = pattern.to_vec();
    sorted.sort_unstable_by_key(|&(mode, _)| std::cmp::Reverse(mode));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::RepeatedMode(w[0].0));
        }
    }
    for &(m, _) in &sorted {
        state.check_mode(m)?;
    }
    let modes: Vec<usize> = sorted.iter().map(|p| p.0).collect();
    let projected = state.map_basis(state.mode_count() - modes.len(), |k, a| {
        sorted
            .iter()
            .all(|&(m, n)| k.occupation(m) == n)
            .then(|| (drop_modes(k, &modes), a))
    });
    let label = pattern
        .iter()
        .map(|(m, n)| format!("{m}:{n}"))
        .collect::<Vec<_>>()
        .join(",");
    Ok(MeasurementRecord::from_unnormalized(label, projected))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolarizationBasis {
    /// Outcomes `H`, `V`.
    HV,
    /// Outcomes `L = (H + iV)/sqrt2`, `R = (H - iV)/sqrt2`.
    LR,
    /// Outcomes `+` and `-` for `(H +- e^{i angle} V)/sqrt2`.
    Angle { angle: f64 },
}

impl PolarizationBasis {
    /// The two basis vectors as `(label, [h, v])`.
    pub fn vectors(&self) -> [(&'static str, [Complex64; 2]); 2] {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match *self {
            PolarizationBasis::HV => [
                ("H", [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
                ("V", [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            ],
            PolarizationBasis::LR => [
                ("L", [s, Complex64::new(0.0, FRAC_1_SQRT_2)]),
                ("R", [s, Complex64::new(0.0, -FRAC_1_SQRT_2)]),
            ],
            PolarizationBasis::Angle { angle } => {
                let e = Complex64::from_polar(FRAC_1_SQRT_2, angle);
                [("+", [s, e]), ("-", [s, -e])]
            }
        }
    }
}

fn check_rail(state: &StateVector, rail: Rail) -> Result<()> {
    state.check_mode(rail.h)?;
    state.check_mode(rail.v)?;
    if rail.h == rail.v {
        return Err(Error::RepeatedMode(rail.h));
    }
    for (k, _) in state.iter() {
        let found = rail.occupancy(k);
        if found != 1 {
            return Err(Error::RailOccupancy { rail: rail.h, found });
        }
    }
    Ok(())
}

/// `<b|` applied to the rail photon, leaving the rest of the state. The
/// rail modes are dropped.
fn contract_rail(state: &StateVector, rail: Rail, b: [Complex64; 2]) -> StateVector {
    state.map_basis(state.mode_count() - 2, |k, a| {
        let coeff = if k.occupation(rail.h) == 1 { b[0] } else { b[1] };
        Some((drop_modes(k, &[rail.h, rail.v]), coeff.conj() * a))
    })
}

/// Destructive polarization measurement of a single-photon rail.
pub fn measure_polarization(
    state: &StateVector,
    rail: Rail,
    basis: PolarizationBasis,
) -> Result<[MeasurementRecord; 2]> {
    check_rail(state, rail)?;
    Ok(basis
        .vectors()
        .map(|(label, b)| MeasurementRecord::from_unnormalized(label, contract_rail(state, rail, b))))
}

/// Polarization projection that leaves the photon on its rail in the
/// measured basis state.
pub fn project_polarization(
    state: &StateVector,
    rail: Rail,
    basis: PolarizationBasis,
) -> Result<[MeasurementRecord; 2]> {
    check_rail(state, rail)?;
    Ok(basis.vectors().map(|(label, b)| {
        let mut projected: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
        for (k, a) in state.iter() {
            let coeff = if k.occupation(rail.h) == 1 { b[0] } else { b[1] };
            let amp = coeff.conj() * a;
            let base = k.with_occupation(rail.h, 0).with_occupation(rail.v, 0);
            *projected.entry(base.with_occupation(rail.h, 1)).or_default() += amp * b[0];
            *projected.entry(base.with_occupation(rail.v, 1)).or_default() += amp * b[1];
        }
        let projected = StateVector::from_map_unchecked(state.mode_count(), state.cutoff(), projected);
        MeasurementRecord::from_unnormalized(label, projected)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.label() == label)
    }

    /// Two-qubit amplitudes in the order `HH, HV, VH, VV`.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let s = FRAC_1_SQRT_2;
        let v = match self {
            BellState::PhiPlus => [s, 0.0, 0.0, s],
            BellState::PhiMinus => [s, 0.0, 0.0, -s],
            BellState::PsiPlus => [0.0, s, s, 0.0],
            BellState::PsiMinus => [0.0, s, -s, 0.0],
        };
        v.map(|x| Complex64::new(x, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellMode {
    /// Projects onto all four Bell states.
    Ideal,
    /// Beam splitters on the H and V modes followed by number detection.
    LinearOptical,
}

/// Outcome labels of linear-optical Bell analysis: `<class>:<pattern>`, where
/// the class is `psi+`, `psi-` or `fail` and the pattern lists the detected
/// counts on `h1, v1, h2, v2`.
pub fn bell_class(outcome: &str) -> Option<BellState> {
    BellState::from_label(outcome.split(':').next().unwrap_or(outcome))
}

fn classify_pattern(p: [u32; 4]) -> &'static str {
    match p {
        [1, 1, 0, 0] | [0, 0, 1, 1] => "psi+",
        [1, 0, 0, 1] | [0, 1, 1, 0] => "psi-",
        _ => "fail",
    }
}

/// Bell measurement of two single-photon rails. Both rails are removed.
pub fn bell_measure(
    state: &StateVector,
    rail1: Rail,
    rail2: Rail,
    mode: BellMode,
) -> Result<Vec<MeasurementRecord>> {
    check_rail(state, rail1)?;
    check_rail(state, rail2)?;
    let modes = [rail1.h, rail1.v, rail2.h, rail2.v];
    for i in 0..4 {
        for j in i + 1..4 {
            if modes[i] == modes[j] {
                return Err(Error::RepeatedMode(modes[i]));
            }
        }
    }
    let remaining = state.mode_count() - 4;
    match mode {
        BellMode::Ideal => Ok(BellState::ALL
            .iter()
            .map(|&bell| {
                let amps = bell.amplitudes();
                let projected = state.map_basis(remaining, |k, a| {
                    let idx = 2 * k.occupation(rail1.v) + k.occupation(rail2.v);
                    Some((drop_modes(k, &modes), amps[idx as usize].conj() * a))
                });
                MeasurementRecord::from_unnormalized(bell.label(), projected)
            })
            .collect()),
        BellMode::LinearOptical => {
            let mixed = apply_beam_splitter(state, (rail1.h, rail2.h), FIFTY_FIFTY)?;
            let mixed = apply_beam_splitter(&mixed, (rail1.v, rail2.v), FIFTY_FIFTY)?;
            let mut branches: BTreeMap<[u32; 4], BTreeMap<FockBasisState, Complex64>> = BTreeMap::new();
            for (k, a) in mixed.iter() {
                let pattern = modes.map(|m| k.occupation(m));
                *branches
                    .entry(pattern)
                    .or_default()
                    .entry(drop_modes(k, &modes))
                    .or_default() += a;
            }
            Ok(branches
                .into_iter()
                .rev()
                .map(|(p, amps)| {
                    let label = format!(
                        "{}:{}",
                        classify_pattern(p),
                        p.map(|n| n.to_string()).join(",")
                    );
                    let projected = StateVector::from_map_unchecked(remaining, state.cutoff(), amps);
                    MeasurementRecord::from_unnormalized(label, projected)
                })
                .collect())
        }
    }
}

fn check_efficiency(efficiency: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(invalid("efficiency", format!("{efficiency} is outside [0, 1]")));
    }
    Ok(())
}

/// Probability that a detector of efficiency `efficiency` registers at
/// least one photon from `mode`.
pub fn click_probability(state: &StateVector, mode: usize, efficiency: f64) -> Result<f64> {
    check_efficiency(efficiency)?;
    let dist = number_distribution(state, mode)?;
    let total: f64 = dist.values().sum();
    Ok(dist
        .iter()
        .map(|(&n, p)| p * (1.0 - (1.0 - efficiency).powi(n as i32)))
        .sum::<f64>()
        / total)
}

/// Photons seen by a lossy detector: the photon number is drawn from the
/// exact distribution, then each photon is kept with probability
/// `efficiency`.
pub fn lossy_detect<R: Rng + ?Sized>(
    state: &StateVector,
    mode: usize,
    efficiency: f64,
    rng: &mut R,
) -> Result<u32> {
    check_efficiency(efficiency)?;
    let dist = number_distribution(state, mode)?;
    let total: f64 = dist.values().sum();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut n = *dist.keys().next_back().unwrap_or(&0);
    for (&k, p) in &dist {
        acc += p;
        if u < acc {
            n = k;
            break;
        }
    }
    if n == 0 {
        return Ok(0);
    }
    let thinning = Binomial::new(u64::from(n), efficiency).map_err(|e| invalid("efficiency", e.to_string()))?;
    Ok(thinning.sample(rng) as u32)
}
