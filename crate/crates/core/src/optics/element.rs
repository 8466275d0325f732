use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::StateVector;
use crate::register::Rail;

/// 2x2 block acting on an ordered mode pair; `m[row][col]`, column = image
/// of a photon entering that mode.
pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WavePlate {
    Half,
    Quarter,
}

/// Elementary lossless optical component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub enum Element {
    /// `a_i -> cos(theta) b_i + sin(theta) b_j`, `a_j -> sin(theta) b_i - cos(theta) b_j`.
    BeamSplitter { theta: f64, modes: [usize; 2] },
    /// `|n> -> e^{i n phi} |n>` on one mode.
    PhaseShifter { phi: f64, mode: usize },
    /// Jones matrix of a retarder with its fast axis at `axis` from horizontal.
    WavePlate { plate: WavePlate, axis: f64, rail: Rail },
    /// Transmits H, reflects V: the V modes of the two rails swap.
    PolarizingBeamSplitter { rails: [Rail; 2] },
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn beam_splitter_matrix(theta: f64) -> Mat2 {
    let (s, co) = theta.sin_cos();
    [[c(co), c(s)], [c(s), c(-co)]]
}

/// Jones matrix `R(axis) diag(1, e^{-i delta}) R(-axis)` with retardance
/// `delta = pi` (half) or `pi/2` (quarter).
pub fn wave_plate_matrix(plate: WavePlate, axis: f64) -> Mat2 {
    let retarder = match plate {
        WavePlate::Half => c(-1.0),
        WavePlate::Quarter => Complex64::new(0.0, -1.0),
    };
    let (s, co) = axis.sin_cos();
    // R(axis) diag(1, r) R(-axis), R(t) = [[cos, -sin], [sin, cos]].
    [
        [c(co * co) + retarder * s * s, (c(1.0) - retarder) * co * s],
        [(c(1.0) - retarder) * co * s, c(s * s) + retarder * co * co],
    ]
}

impl Element {
    pub fn beam_splitter(theta: f64, i: usize, j: usize) -> Self {
        Element::BeamSplitter { theta, modes: [i, j] }
    }

    pub fn phase_shifter(phi: f64, mode: usize) -> Self {
        Element::PhaseShifter { phi, mode }
    }

    pub fn half_wave_plate(axis: f64, rail: Rail) -> Self {
        Element::WavePlate { plate: WavePlate::Half, axis, rail }
    }

    pub fn quarter_wave_plate(axis: f64, rail: Rail) -> Self {
        Element::WavePlate { plate: WavePlate::Quarter, axis, rail }
    }

    pub fn pbs(r1: Rail, r2: Rail) -> Self {
        Element::PolarizingBeamSplitter { rails: [r1, r2] }
    }

    /// Modes touched by the element, in the order of its local matrix.
    pub fn modes(&self) -> Vec<usize> {
        match self {
            Element::BeamSplitter { modes, .. } => modes.to_vec(),
            Element::PhaseShifter { mode, .. } => vec![*mode],
            Element::WavePlate { rail, .. } => vec![rail.h, rail.v],
            Element::PolarizingBeamSplitter { rails } => {
                vec![rails[0].h, rails[0].v, rails[1].h, rails[1].v]
            }
        }
    }

    pub fn validate(&self, mode_count: usize) -> Result<()> {
        let modes = self.modes();
        for (k, &m) in modes.iter().enumerate() {
            if m >= mode_count {
                return Err(Error::ModeOutOfRange { mode: m, mode_count });
            }
            if modes[..k].contains(&m) {
                return Err(Error::RepeatedMode(m));
            }
        }
        Ok(())
    }

    /// Transfer matrix on [`modes`](Self::modes).
    pub fn local_matrix(&self) -> DMatrix<Complex64> {
        match self {
            Element::BeamSplitter { theta, .. } => mat2_to_dmatrix(&beam_splitter_matrix(*theta)),
            Element::PhaseShifter { phi, .. } => {
                DMatrix::from_element(1, 1, Complex64::from_polar(1.0, *phi))
            }
            Element::WavePlate { plate, axis, .. } => {
                mat2_to_dmatrix(&wave_plate_matrix(*plate, *axis))
            }
            Element::PolarizingBeamSplitter { .. } => {
                let mut m = DMatrix::zeros(4, 4);
                m[(0, 0)] = c(1.0);
                m[(2, 2)] = c(1.0);
                m[(3, 1)] = c(1.0);
                m[(1, 3)] = c(1.0);
                m
            }
        }
    }

    /// Transfer matrix embedded in an `mode_count`-mode network.
    pub fn embedded_matrix(&self, mode_count: usize) -> Result<DMatrix<Complex64>> {
        self.validate(mode_count)?;
        let modes = self.modes();
        let local = self.local_matrix();
        let mut m = DMatrix::identity(mode_count, mode_count);
        for (a, &ma) in modes.iter().enumerate() {
            for (b, &mb) in modes.iter().enumerate() {
                m[(ma, mb)] = local[(a, b)];
            }
        }
        Ok(m)
    }

    /// Applies the element to a Fock state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.validate(state.mode_count())?;
        match self {
            Element::BeamSplitter { theta, modes } => {
                apply_two_mode(state, modes[0], modes[1], &beam_splitter_matrix(*theta))
            }
            Element::PhaseShifter { phi, mode } => Ok(state.map_basis(state.mode_count(), |k, a| {
                let n = k.occupation(*mode) as f64;
                Some((k.clone(), a * Complex64::from_polar(1.0, n * phi)))
            })),
            Element::WavePlate { plate, axis, rail } => {
                apply_two_mode(state, rail.h, rail.v, &wave_plate_matrix(*plate, *axis))
            }
            Element::PolarizingBeamSplitter { rails } => {
                let (v1, v2) = (rails[0].v, rails[1].v);
                Ok(state.map_basis(state.mode_count(), |k, a| {
                    let (n1, n2) = (k.occupation(v1), k.occupation(v2));
                    Some((k.with_occupation(v1, n2).with_occupation(v2, n1), a))
                }))
            }
        }
    }
}

pub(crate) fn mat2_to_dmatrix(m: &Mat2) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Lifts a 2x2 mode transformation on `(i, j)` to Fock space by expanding
/// `(u00 b_i + u10 b_j)^p (u01 b_i + u11 b_j)^q / sqrt(p! q!)` binomially.
pub fn apply_two_mode(state: &StateVector, i: usize, j: usize, u: &Mat2) -> Result<StateVector> {
    state.check_mode(i)?;
    state.check_mode(j)?;
    if i == j {
        return Err(Error::RepeatedMode(i));
    }
    let mut out = std::collections::BTreeMap::new();
    for (k, a) in state.iter() {
        let (p, q) = (k.occupation(i), k.occupation(j));
        if p == 0 && q == 0 {
            *out.entry(k.clone()).or_insert(Complex64::default()) += a;
            continue;
        }
        let norm_in = (factorial(p) * factorial(q)).sqrt();
        for k1 in 0..=p {
            let left = u[0][0].powu(k1) * u[1][0].powu(p - k1) * binomial(p, k1);
            if left == Complex64::default() {
                continue;
            }
            for l in 0..=q {
                let right = u[0][1].powu(l) * u[1][1].powu(q - l) * binomial(q, l);
                if right == Complex64::default() {
                    continue;
                }
                let (ni, nj) = (k1 + l, p + q - k1 - l);
                let amp = a * left * right * ((factorial(ni) * factorial(nj)).sqrt() / norm_in);
                let label = k.with_occupation(i, ni).with_occupation(j, nj);
                *out.entry(label).or_insert(Complex64::default()) += amp;
            }
        }
    }
    Ok(StateVector::from_map_unchecked(state.mode_count(), state.cutoff(), out))
}

/// Beam splitter with angle `theta` on modes `(i, j)`.
pub fn apply_beam_splitter(state: &StateVector, modes: (usize, usize), theta: f64) -> Result<StateVector> {
    Element::beam_splitter(theta, modes.0, modes.1).apply(state)
}

pub fn apply_phase_shifter(state: &StateVector, mode: usize, phi: f64) -> Result<StateVector> {
    Element::phase_shifter(phi, mode).apply(state)
}

pub fn apply_wave_plate(state: &StateVector, rail: Rail, plate: WavePlate, axis: f64) -> Result<StateVector> {
    Element::WavePlate { plate, axis, rail }.apply(state)
}

pub fn apply_pbs(state: &StateVector, rails: (Rail, Rail)) -> Result<StateVector> {
    if rails.0 == rails.1 {
        return Err(Error::RepeatedMode(rails.0.h));
    }
    Element::pbs(rails.0, rails.1).apply(state)
}

/// 50:50 beam splitter angle.
pub const FIFTY_FIFTY: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    kind: String,
    params: Vec<f64>,
    modes: Vec<usize>,
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        let modes = e.modes();
        let (kind, params) = match e {
            Element::BeamSplitter { theta, .. } => ("beam_splitter", vec![theta]),
            Element::PhaseShifter { phi, .. } => ("phase_shifter", vec![phi]),
            Element::WavePlate { plate: WavePlate::Half, axis, .. } => ("half_wave_plate", vec![axis]),
            Element::WavePlate { plate: WavePlate::Quarter, axis, .. } => {
                ("quarter_wave_plate", vec![axis])
            }
            Element::PolarizingBeamSplitter { .. } => ("polarizing_beam_splitter", vec![]),
        };
        ElementRepr {
            kind: kind.to_string(),
            params,
            modes,
        }
    }
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;

    fn try_from(r: ElementRepr) -> Result<Self> {
        let want = |np: usize, nm: usize| -> Result<()> {
            if r.params.len() != np || r.modes.len() != nm {
                return Err(invalid(
                    "element",
                    format!("{} takes {np} params and {nm} modes", r.kind),
                ));
            }
            Ok(())
        };
        match r.kind.as_str() {
            "beam_splitter" => {
                want(1, 2)?;
                Ok(Element::beam_splitter(r.params[0], r.modes[0], r.modes[1]))
            }
            "phase_shifter" => {
                want(1, 1)?;
                Ok(Element::phase_shifter(r.params[0], r.modes[0]))
            }
            "half_wave_plate" => {
                want(1, 2)?;
                Ok(Element::half_wave_plate(r.params[0], Rail::new(r.modes[0], r.modes[1])))
            }
            "quarter_wave_plate" => {
                want(1, 2)?;
                Ok(Element::quarter_wave_plate(r.params[0], Rail::new(r.modes[0], r.modes[1])))
            }
            "polarizing_beam_splitter" => {
                want(0, 4)?;
                Ok(Element::pbs(
                    Rail::new(r.modes[0], r.modes[1]),
                    Rail::new(r.modes[2], r.modes[3]),
                ))
            }
            other => Err(invalid("element", format!("unknown kind `{other}`"))),
        }
    }
}
