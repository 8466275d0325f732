use std::collections::BTreeMap;

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::basis::FockBasisState;
use crate::error::{Error, Result};

/// Squared matrix element of `a a^dagger` (`creation_last == true`) or
/// `a^dagger a` on `|n>`, kept in integers.
pub fn ladder_factor_sq(n: u32, creation_last: bool) -> i64 {
    if creation_last {
        i64::from(n) + 1
    } else {
        i64::from(n)
    }
}

/// Amplitudes with modulus below this are dropped after every operation.
pub const PRUNE_TOLERANCE: f64 = 1e-14;

/// Pure state over a photon-number-truncated Fock basis.
///
/// Storage is sparse: absent basis states have amplitude zero. No stored
/// basis state carries more than `cutoff` photons in total.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    mode_count: usize,
    cutoff: u32,
    amplitudes: BTreeMap<FockBasisState, Complex64>,
}

/// Result of an operation that may push amplitude above the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub state: StateVector,
    /// Squared norm of the components that were discarded.
    pub dropped_norm: f64,
}

impl StateVector {
    pub fn zero(mode_count: usize, cutoff: u32) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            mode_count,
            cutoff,
            amplitudes: BTreeMap::new(),
        })
    }

    pub fn vacuum(mode_count: usize, cutoff: u32) -> Result<Self> {
        Self::basis(FockBasisState::vacuum(mode_count), cutoff)
    }

    pub fn basis(state: FockBasisState, cutoff: u32) -> Result<Self> {
        Self::from_amplitudes(state.mode_count(), cutoff, [(state, Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from `(label, amplitude)` pairs. Repeated labels add up.
    pub fn from_amplitudes<I>(mode_count: usize, cutoff: u32, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockBasisState, Complex64)>,
    {
        let mut out = Self::zero(mode_count, cutoff)?;
        for (state, amp) in amplitudes {
            if state.mode_count() != mode_count {
                return Err(Error::ModeCountMismatch {
                    left: mode_count,
                    right: state.mode_count(),
                });
            }
            let photons = state.total();
            if photons > cutoff {
                return Err(Error::CutoffExceeded { photons, cutoff });
            }
            *out.amplitudes.entry(state).or_default() += amp;
        }
        out.prune();
        Ok(out)
    }

    pub(crate) fn from_map_unchecked(
        mode_count: usize,
        cutoff: u32,
        amplitudes: BTreeMap<FockBasisState, Complex64>,
    ) -> Self {
        let mut s = Self {
            mode_count,
            cutoff,
            amplitudes,
        };
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_TOLERANCE);
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn amplitude(&self, state: &FockBasisState) -> Complex64 {
        self.amplitudes.get(state).copied().unwrap_or_default()
    }

    /// Non-zero amplitudes in canonical basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&FockBasisState, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < PRUNE_TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        self.map_amplitudes(|a| a * factor)
    }

    pub(crate) fn map_amplitudes(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let amplitudes = self.amplitudes.iter().map(|(k, a)| (k.clone(), f(*a))).collect();
        Self::from_map_unchecked(self.mode_count, self.cutoff, amplitudes)
    }

    /// Relabels every basis state; labels mapping to the same target add up.
    pub(crate) fn map_basis(
        &self,
        mode_count: usize,
        mut f: impl FnMut(&FockBasisState, Complex64) -> Option<(FockBasisState, Complex64)>,
    ) -> Self {
        let mut out: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
        for (k, a) in &self.amplitudes {
            if let Some((k2, a2)) = f(k, *a) {
                *out.entry(k2).or_default() += a2;
            }
        }
        Self::from_map_unchecked(mode_count, self.cutoff, out)
    }

    /// Sum of two states on the same modes.
    pub fn add(&self, other: &StateVector) -> Result<Self> {
        self.check_modes(other)?;
        let mut out = self.amplitudes.clone();
        for (k, a) in &other.amplitudes {
            *out.entry(k.clone()).or_default() += a;
        }
        Ok(Self::from_map_unchecked(
            self.mode_count,
            self.cutoff.max(other.cutoff),
            out,
        ))
    }

    fn check_modes(&self, other: &StateVector) -> Result<()> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: other.mode_count,
            });
        }
        Ok(())
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.mode_count {
            return Err(Error::ModeOutOfRange {
                mode,
                mode_count: self.mode_count,
            });
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        self.check_modes(other)?;
        let (small, large, conj_small) = if self.len() <= other.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::default();
        for (k, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(k) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// `|<self|other>|^2 / (<self|self><other|other>)`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom < PRUNE_TOLERANCE * PRUNE_TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        Ok(self.inner_product(other)?.norm_sqr() / denom)
    }

    /// Creation operator on `mode`; components pushed above the cutoff are
    /// discarded and their weight reported.
    /// Single-mode coherent state `|alpha>` cut at `cutoff` photons and
    /// renormalized; `dropped_norm` is the Poisson weight above the cutoff.
    pub fn coherent(alpha: Complex64, cutoff: u32) -> Result<Truncated> {
        let mean = alpha.norm_sqr();
        let mut amplitudes = BTreeMap::new();
        let mut kept = 0.0;
        for n in 0..=cutoff {
            let ln_mag = if n == 0 {
                -0.5 * mean
            } else {
                -0.5 * mean + n as f64 * alpha.norm().ln() - 0.5 * ln_factorial(u64::from(n))
            };
            let amp = Complex64::from_polar(ln_mag.exp(), n as f64 * alpha.arg());
            kept += amp.norm_sqr();
            amplitudes.insert(FockBasisState::new(vec![n]), amp);
        }
        let state = Self::from_map_unchecked(1, cutoff, amplitudes).normalized()?;
        Ok(Truncated {
            state,
            dropped_norm: (1.0 - kept).max(0.0),
        })
    }

    pub fn apply_creation(&self, mode: usize) -> Result<Truncated> {
        self.check_mode(mode)?;
        let mut dropped = 0.0;
        let cutoff = self.cutoff;
        let state = self.map_basis(self.mode_count, |k, a| {
            let n = k.occupation(mode);
            let amp = a * ((n + 1) as f64).sqrt();
            if k.total() + 1 > cutoff {
                dropped += amp.norm_sqr();
                None
            } else {
                Some((k.with_occupation(mode, n + 1), amp))
            }
        });
        Ok(Truncated {
            state,
            dropped_norm: dropped,
        })
    }

    pub fn apply_annihilation(&self, mode: usize) -> Result<StateVector> {
        self.check_mode(mode)?;
        Ok(self.map_basis(self.mode_count, |k, a| {
            let n = k.occupation(mode);
            (n > 0).then(|| (k.with_occupation(mode, n - 1), a * (n as f64).sqrt()))
        }))
    }

    /// `<n_mode>` for a normalized state.
    pub fn number_expectation(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        Ok(self
            .amplitudes
            .iter()
            .map(|(k, a)| k.occupation(mode) as f64 * a.norm_sqr())
            .sum())
    }

    /// Variance of the photon number in `mode`, normalized by the state norm.
    pub fn number_variance(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let norm = self.norm_sqr();
        if norm < PRUNE_TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        let (m1, m2) = self.amplitudes.iter().fold((0.0, 0.0), |(m1, m2), (k, a)| {
            let n = k.occupation(mode) as f64;
            let p = a.norm_sqr();
            (m1 + n * p, m2 + n * n * p)
        });
        let mean = m1 / norm;
        Ok(m2 / norm - mean * mean)
    }

    /// Largest total photon number present.
    pub fn max_photons(&self) -> u32 {
        self.amplitudes.keys().map(FockBasisState::total).max().unwrap_or(0)
    }

    /// Same amplitudes with a different cutoff; fails if support would exceed it.
    pub fn with_cutoff(&self, cutoff: u32) -> Result<Self> {
        let photons = self.max_photons();
        if photons > cutoff {
            return Err(Error::CutoffExceeded { photons, cutoff });
        }
        Ok(Self {
            cutoff,
            ..self.clone()
        })
    }

    /// Tensor product `|self>|other>`; modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &StateVector) -> Self {
        let mut out = BTreeMap::new();
        for (ka, a) in &self.amplitudes {
            for (kb, b) in &other.amplitudes {
                out.insert(ka.concat(kb), a * b);
            }
        }
        Self::from_map_unchecked(
            self.mode_count + other.mode_count,
            self.cutoff + other.cutoff,
            out,
        )
    }

    /// Probability weight of each total photon number.
    pub fn photon_number_distribution(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for (k, a) in &self.amplitudes {
            *out.entry(k.total()).or_insert(0.0) += a.norm_sqr();
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct AmplitudeEntry {
    occ: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    mode_count: usize,
    cutoff: u32,
    amplitudes: Vec<AmplitudeEntry>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            mode_count: self.mode_count,
            cutoff: self.cutoff,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, a)| AmplitudeEntry {
                    occ: k.occupations().to_vec(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        StateVector::from_amplitudes(
            repr.mode_count,
            repr.cutoff,
            repr.amplitudes
                .into_iter()
                .map(|e| (FockBasisState::new(e.occ), Complex64::new(e.re, e.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
