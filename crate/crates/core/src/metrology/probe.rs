use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{invalid, Error, Result};
use crate::fock::{FockBasisState, StateVector};
use crate::optics::Element;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeKind {
    Coherent { mean_photons: f64 },
    ZeroN { n: u32 },
    Noon { n: u32 },
    SqueezedVacuum { r: f64 },
}

/// A phase probe and the mode that picks up the phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeState {
    pub kind: ProbeKind,
    pub state: StateVector,
    pub phase_mode: usize,
    /// Weight lost to the photon-number cutoff before renormalizing.
    pub truncation_residual: f64,
}

impl ProbeState {
    pub fn coherent(mean_photons: f64, cutoff: u32) -> Result<Self> {
        if !(mean_photons > 0.0) {
            return Err(invalid("mean_photons", "must be positive"));
        }
        let t = StateVector::coherent(Complex64::new(mean_photons.sqrt(), 0.0), cutoff)?;
        Ok(Self {
            kind: ProbeKind::Coherent { mean_photons },
            state: t.state,
            phase_mode: 0,
            truncation_residual: t.dropped_norm,
        })
    }

    /// `(|0> + |N>)/sqrt2`.
    pub fn zero_n(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let state = StateVector::from_amplitudes(
            1,
            n,
            [(FockBasisState::new(vec![0]), s), (FockBasisState::new(vec![n]), s)],
        )?;
        Ok(Self {
            kind: ProbeKind::ZeroN { n },
            state,
            phase_mode: 0,
            truncation_residual: 0.0,
        })
    }

    /// `(|N,0> + |0,N>)/sqrt2`; the phase acts on the second mode.
    pub fn noon(n: u32, cutoff: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        if 2 * n > cutoff {
            return Err(Error::CutoffExceeded { photons: 2 * n, cutoff });
        }
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let state = StateVector::from_amplitudes(
            2,
            cutoff,
            [(FockBasisState::new(vec![n, 0]), s), (FockBasisState::new(vec![0, n]), s)],
        )?;
        Ok(Self {
            kind: ProbeKind::Noon { n },
            state,
            phase_mode: 1,
            truncation_residual: 0.0,
        })
    }

    /// Even-number expansion
    /// `c_2m = (-tanh r)^m sqrt((2m)!) / (2^m m! sqrt(cosh r))`, which
    /// squeezes the X quadrature.
    pub fn squeezed_vacuum(r: f64, cutoff: u32) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(invalid("r", "must be non-negative"));
        }
        let t = r.tanh();
        let mut entries = Vec::new();
        let mut kept = 0.0;
        for m in 0..=cutoff / 2 {
            let m64 = u64::from(m);
            let ln_mag = -0.5 * r.cosh().ln() + 0.5 * ln_factorial(2 * m64)
                - m as f64 * 2f64.ln()
                - ln_factorial(m64)
                + if m == 0 { 0.0 } else { m as f64 * t.ln() };
            let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
            let amp = if m > 0 && t == 0.0 { 0.0 } else { sign * ln_mag.exp() };
            kept += amp * amp;
            entries.push((FockBasisState::new(vec![2 * m]), Complex64::new(amp, 0.0)));
        }
        let state = StateVector::from_amplitudes(1, cutoff, entries)?.normalized()?;
        Ok(Self {
            kind: ProbeKind::SqueezedVacuum { r },
            state,
            phase_mode: 0,
            truncation_residual: (1.0 - kept).max(0.0),
        })
    }

    /// Probe after a phase shifter on its phase mode.
    pub fn with_phase(&self, phi: f64) -> Result<StateVector> {
        Element::phase_shifter(phi, self.phase_mode).apply(&self.state)
    }

    /// Standard deviation of the photon number on the phase mode, the
    /// generator of the phase shift.
    pub fn generator_std(&self) -> Result<f64> {
        Ok(self.state.number_variance(self.phase_mode)?.sqrt())
    }

    /// The two basis states spanning the probe's phase-sensitive subspace.
    fn two_level_pair(&self) -> Result<(FockBasisState, FockBasisState)> {
        match self.kind {
            ProbeKind::ZeroN { n } => Ok((FockBasisState::new(vec![0]), FockBasisState::new(vec![n]))),
            ProbeKind::Noon { n } => Ok((FockBasisState::new(vec![n, 0]), FockBasisState::new(vec![0, n]))),
            _ => Err(invalid("probe", "no two-level observable for this probe")),
        }
    }

    /// `<A>` for `A = |b><a| + |a><b|` after phase `phi`, where `a`, `b`
    /// are the two probe components.
    pub fn observable_expectation(&self, phi: f64) -> Result<f64> {
        let (a, b) = self.two_level_pair()?;
        let s = self.with_phase(phi)?;
        Ok(2.0 * (s.amplitude(&a).conj() * s.amplitude(&b)).re)
    }
}
