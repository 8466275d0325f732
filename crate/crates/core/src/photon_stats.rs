//! Photon-count distributions, second-order correlations and the
//! Hong-Ou-Mandel dip.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{invalid, Error, Result};
use crate::fock::{FockBasisState, StateVector};
use crate::optics::{Element, FIFTY_FIFTY};

/// Tail mass left outside the stored support of a distribution.
const TAIL: f64 = 1e-16;

pub fn poisson_pmf(lambda: f64, n: u32) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid("lambda", format!("{lambda} is negative")));
    }
    if lambda == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let n64 = u64::from(n);
    Ok((n as f64 * lambda.ln() - lambda - ln_factorial(n64)).exp())
}

/// Single-mode Bose-Einstein (geometric) distribution with mean `mean`.
pub fn thermal_pmf(mean: f64, n: u32) -> Result<f64> {
    if !(mean >= 0.0) {
        return Err(invalid("mean", format!("{mean} is negative")));
    }
    let ratio = mean / (1.0 + mean);
    Ok(ratio.powi(n as i32) / (1.0 + mean))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Poisson,
    Thermal,
    Fock,
}

/// Photon-number probabilities `pmf[n]` over a finite support chosen so that
/// the discarded tail is below `1e-16`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountDistribution {
    pmf: Vec<f64>,
    mean: f64,
    label: DistributionKind,
}

impl CountDistribution {
    pub fn poisson(lambda: f64) -> Result<Self> {
        poisson_pmf(lambda, 0)?;
        let mut pmf = Vec::new();
        let mut n = 0u32;
        loop {
            let p = poisson_pmf(lambda, n)?;
            pmf.push(p);
            n += 1;
            // Past the mode the terms fall faster than geometrically.
            if n as f64 > lambda + 1.0 && p < TAIL * 1e-2 {
                break;
            }
        }
        Ok(Self {
            pmf,
            mean: lambda,
            label: DistributionKind::Poisson,
        })
    }

    pub fn thermal(mean: f64) -> Result<Self> {
        thermal_pmf(mean, 0)?;
        let ratio = mean / (1.0 + mean);
        // Tail beyond n is ratio^(n+1).
        let len = if ratio == 0.0 {
            1
        } else {
            (TAIL.ln() / ratio.ln()).ceil() as usize + 1
        };
        let pmf = (0..len as u32).map(|n| thermal_pmf(mean, n)).collect::<Result<_>>()?;
        Ok(Self {
            pmf,
            mean,
            label: DistributionKind::Thermal,
        })
    }

    pub fn fock(n: u32) -> Self {
        let mut pmf = vec![0.0; n as usize + 1];
        pmf[n as usize] = 1.0;
        Self {
            pmf,
            mean: n as f64,
            label: DistributionKind::Fock,
        }
    }

    /// Photon-number distribution of a single-mode state.
    pub fn from_state(state: &StateVector) -> Result<Self> {
        single_mode(state)?;
        let max = state.max_photons() as usize;
        let mut pmf = vec![0.0; max + 1];
        for (k, a) in state.iter() {
            pmf[k.occupation(0) as usize] += a.norm_sqr();
        }
        let total: f64 = pmf.iter().sum();
        if total == 0.0 {
            return Err(Error::ZeroNorm);
        }
        pmf.iter_mut().for_each(|p| *p /= total);
        let mean = pmf.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        Ok(Self {
            pmf,
            mean,
            label: DistributionKind::Fock,
        })
    }

    pub fn pmf(&self, n: u32) -> f64 {
        self.pmf.get(n as usize).copied().unwrap_or(0.0)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.pmf
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn label(&self) -> DistributionKind {
        self.label
    }

    pub fn total(&self) -> f64 {
        self.pmf.iter().sum()
    }

    fn moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.pmf.iter().enumerate().map(|(n, p)| f(n as f64) * p).sum()
    }

    /// Inverse-CDF sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random::<f64>() * self.total();
        let mut acc = 0.0;
        for (n, p) in self.pmf.iter().enumerate() {
            acc += p;
            if u < acc {
                return n as u32;
            }
        }
        (self.pmf.len() - 1) as u32
    }
}

fn single_mode(state: &StateVector) -> Result<()> {
    if state.mode_count() != 1 {
        return Err(Error::ModeCountMismatch {
            left: 1,
            right: state.mode_count(),
        });
    }
    Ok(())
}

/// `<n(n-1)> / <n>^2`.
pub fn g2_zero(dist: &CountDistribution) -> Result<f64> {
    let total = dist.total();
    let mean = dist.moment(|n| n) / total;
    if mean <= 0.0 {
        return Err(Error::ZeroMean);
    }
    Ok(dist.moment(|n| n * (n - 1.0)) / total / (mean * mean))
}

/// `g2(0)` of a single-mode state.
pub fn g2_zero_state(state: &StateVector) -> Result<f64> {
    g2_zero(&CountDistribution::from_state(state)?)
}

/// `g2(tau) = 1 + (g2(0) - 1) exp(-2|tau|/tau_c)` on a grid.
pub fn g2_curve(g2_at_zero: f64, tau_c: f64, taus: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(tau_c > 0.0) {
        return Err(invalid("tau_c", "must be positive"));
    }
    Ok(taus
        .iter()
        .map(|&t| (t, 1.0 + (g2_at_zero - 1.0) * (-2.0 * t.abs() / tau_c).exp()))
        .collect())
}

/// Overlap of two Gaussian wave packets offset by `delay`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavePacketOverlap {
    pub delay: f64,
    pub coherence_time: f64,
    pub overlap: Complex64,
}

impl WavePacketOverlap {
    pub fn gaussian(delay: f64, coherence_time: f64) -> Result<Self> {
        if !(coherence_time > 0.0) {
            return Err(invalid("tau_c", "must be positive"));
        }
        let r = delay / coherence_time;
        Ok(Self {
            delay,
            coherence_time,
            overlap: Complex64::new((-0.5 * r * r).exp(), 0.0),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomInput {
    /// Two single photons, one per input port.
    SinglePhotonPair,
    /// A single photon against a coherent state of mean `mean_photons`,
    /// truncated at `cutoff` total photons.
    PhotonPlusCoherent { mean_photons: f64, cutoff: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomPoint {
    pub delay: f64,
    /// Probability that both output detectors click.
    pub coincidence: f64,
    /// Input weight lost to the photon-number cutoff.
    pub truncation_residual: f64,
}

/// Closed form for two single photons: `(1 - |overlap|^2) / 2`.
pub fn hom_coincidence_closed_form(delay: f64, tau_c: f64) -> Result<f64> {
    let o = WavePacketOverlap::gaussian(delay, tau_c)?;
    Ok(0.5 * (1.0 - o.overlap.norm_sqr()))
}

/// Coincidence probability behind a 50:50 beam splitter at a given delay.
///
/// Simulated in four modes: each port carries the temporal shape of the
/// first photon and its orthogonal complement. The port-B packet splits as
/// `overlap * f + sqrt(1 - overlap^2) * f_perp`, both halves meet the
/// splitter, and threshold detectors watch each output port.
pub fn hom_coincidence(delay: f64, tau_c: f64, input: HomInput) -> Result<HomPoint> {
    let gamma = WavePacketOverlap::gaussian(delay, tau_c)?.overlap.re;
    let perp = (1.0 - gamma * gamma).max(0.0).sqrt();
    // Modes: 0 = A f, 1 = A f_perp, 2 = B f, 3 = B f_perp.
    let (state, residual) = match input {
        HomInput::SinglePhotonPair => {
            let s = StateVector::from_amplitudes(
                4,
                2,
                [
                    (FockBasisState::new(vec![1, 0, 1, 0]), Complex64::new(gamma, 0.0)),
                    (FockBasisState::new(vec![1, 0, 0, 1]), Complex64::new(perp, 0.0)),
                ],
            )?;
            (s, 0.0)
        }
        HomInput::PhotonPlusCoherent { mean_photons, cutoff } => {
            if !(mean_photons >= 0.0) {
                return Err(invalid("mean_photons", "must be non-negative"));
            }
            if cutoff < 1 {
                return Err(invalid("cutoff", "must leave room for the single photon"));
            }
            let alpha = mean_photons.sqrt();
            let (b1, b2) = (alpha * gamma, alpha * perp);
            let mut entries = Vec::new();
            for total in 0..cutoff {
                for n1 in 0..=total {
                    let n2 = total - n1;
                    let ln_mag = -0.5 * mean_photons
                        + if n1 > 0 { n1 as f64 * b1.ln() } else { 0.0 }
                        + if n2 > 0 { n2 as f64 * b2.ln() } else { 0.0 }
                        - 0.5 * (ln_factorial(u64::from(n1)) + ln_factorial(u64::from(n2)));
                    if (n1 > 0 && b1 == 0.0) || (n2 > 0 && b2 == 0.0) {
                        continue;
                    }
                    entries.push((
                        FockBasisState::new(vec![1, 0, n1, n2]),
                        Complex64::new(ln_mag.exp(), 0.0),
                    ));
                }
            }
            let s = StateVector::from_amplitudes(4, cutoff, entries)?;
            let residual = 1.0 - s.norm_sqr();
            (s, residual)
        }
    };
    let out = Element::beam_splitter(FIFTY_FIFTY, 0, 2).apply(&state)?;
    let out = Element::beam_splitter(FIFTY_FIFTY, 1, 3).apply(&out)?;
    let norm = out.norm_sqr();
    let coincidence = out
        .iter()
        .filter(|(k, _)| k.occupation(0) + k.occupation(1) > 0 && k.occupation(2) + k.occupation(3) > 0)
        .fold(0.0, |acc, (_, a)| acc + a.norm_sqr())
        / norm;
    Ok(HomPoint {
        delay,
        coincidence,
        truncation_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn poisson_examples() {
        assert_abs_diff_eq!(poisson_pmf(1.0, 0).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(poisson_pmf(1.0, 0).unwrap(), 0.367879, epsilon = 1e-6);
        assert!(poisson_pmf(-0.5, 0).is_err());
        for lambda in [0.1, 1.0, 5.0, 20.0] {
            let total: f64 = (0..=200).map(|n| poisson_pmf(lambda, n).unwrap()).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
            let mean: f64 = (0..=200).map(|n| n as f64 * poisson_pmf(lambda, n).unwrap()).sum();
            assert_abs_diff_eq!(mean, lambda, epsilon = 1e-9);
        }
    }

    #[test]
    fn poisson_large_n_is_finite() {
        let p = poisson_pmf(500.0, 520).unwrap();
        assert!(p.is_finite() && p > 0.0);
    }

    #[test]
    fn thermal_examples() {
        assert_abs_diff_eq!(thermal_pmf(1.0, 0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(thermal_pmf(-1.0, 0).is_err());
        let d = CountDistribution::thermal(2.5).unwrap();
        assert_abs_diff_eq!(d.total(), 1.0, epsilon = 1e-9);
        let mean: f64 = d.probabilities().iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        assert_abs_diff_eq!(mean, 2.5, epsilon = 1e-9);
    }

    #[test]
    fn g2_values() {
        for lambda in [0.05, 0.5, 3.0, 10.0] {
            let g = g2_zero(&CountDistribution::poisson(lambda).unwrap()).unwrap();
            assert_abs_diff_eq!(g, 1.0, epsilon = 1e-9);
        }
        assert_eq!(g2_zero(&CountDistribution::fock(1)).unwrap(), 0.0);
        let g = g2_zero(&CountDistribution::thermal(1.7).unwrap()).unwrap();
        assert_abs_diff_eq!(g, 2.0, epsilon = 1e-9);
        assert_eq!(g2_zero(&CountDistribution::fock(0)), Err(Error::ZeroMean));
    }

    #[test]
    fn g2_of_fock_state_vector() {
        let s = StateVector::basis(FockBasisState::new(vec![1]), 3).unwrap();
        assert_eq!(g2_zero_state(&s).unwrap(), 0.0);
        let two = StateVector::basis(FockBasisState::new(vec![2]), 3).unwrap();
        assert_abs_diff_eq!(g2_zero_state(&two).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn g2_curve_shapes() {
        let taus: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let anti = g2_curve(0.0, 1.0, &taus).unwrap();
        assert_eq!(anti[0].1, 0.0);
        assert!(anti.windows(2).all(|w| w[1].1 > w[0].1));
        assert!((anti.last().unwrap().1 - 1.0).abs() < 1e-3);
        assert!(g2_curve(1.0, 1.0, &taus).unwrap().iter().all(|p| p.1 == 1.0));
        let tau = 0.5 * 2.0f64.ln();
        let bunched = g2_curve(2.0, 1.0, &[tau]).unwrap();
        assert_abs_diff_eq!(bunched[0].1, 1.0 + (-2.0 * tau).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(bunched[0].1, 1.5, epsilon = 1e-15);
        assert!(g2_curve(0.0, 0.0, &taus).is_err());
    }

    #[test]
    fn hom_single_photons() {
        let p0 = hom_coincidence(0.0, 1.0, HomInput::SinglePhotonPair).unwrap();
        assert_eq!(p0.coincidence, 0.0);
        let far = hom_coincidence(10.0, 1.0, HomInput::SinglePhotonPair).unwrap();
        assert_abs_diff_eq!(far.coincidence, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn hom_simulation_matches_closed_form_and_is_symmetric() {
        for k in -30..=30 {
            let tau = k as f64 * 0.1;
            let sim = hom_coincidence(tau, 1.0, HomInput::SinglePhotonPair).unwrap().coincidence;
            let closed = hom_coincidence_closed_form(tau, 1.0).unwrap();
            assert_abs_diff_eq!(sim, closed, epsilon = 1e-12);
            let mirror = hom_coincidence(-tau, 1.0, HomInput::SinglePhotonPair).unwrap().coincidence;
            assert_eq!(sim, mirror);
            assert!((0.0..=0.5 + 1e-15).contains(&sim));
        }
    }

    #[test]
    fn hom_photon_plus_weak_coherent_dip_is_shallow() {
        let input = HomInput::PhotonPlusCoherent { mean_photons: 0.1, cutoff: 8 };
        let dip = hom_coincidence(0.0, 1.0, input).unwrap();
        let base = hom_coincidence(50.0, 1.0, input).unwrap();
        assert!(dip.coincidence > 0.0);
        assert!(dip.coincidence < base.coincidence);
        assert!(dip.truncation_residual < 1e-12);
    }

    #[test]
    fn sampling_reproduces_pmf() {
        let d = CountDistribution::poisson(2.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let draws = 100_000;
        let mut counts = vec![0usize; d.probabilities().len()];
        for _ in 0..draws {
            counts[d.sample(&mut rng) as usize] += 1;
        }
        for (n, &p) in d.probabilities().iter().enumerate().take(10) {
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            let freq = counts[n] as f64 / draws as f64;
            assert!((freq - p).abs() <= 3.0 * sigma + 1e-12, "n={n}: {freq} vs {p}");
        }
    }
}
