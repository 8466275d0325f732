use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleSlit {
    /// Slit width.
    pub width: f64,
    /// Slit separation.
    pub separation: f64,
    pub distance: f64,
    pub wavelength: f64,
    pub peak_intensity: f64,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

impl DoubleSlit {
    pub fn new(width: f64, separation: f64, distance: f64, wavelength: f64) -> Result<Self> {
        for (name, v) in [("width", width), ("separation", separation), ("distance", distance), ("wavelength", wavelength)] {
            if !(v > 0.0) {
                return Err(invalid(name, "must be positive"));
            }
        }
        Ok(Self {
            width,
            separation,
            distance,
            wavelength,
            peak_intensity: 1.0,
        })
    }

    /// `I0 cos^2(x d pi / (L lambda)) sinc^2(x a pi / (L lambda))`.
    pub fn intensity(&self, x: f64) -> f64 {
        let k = PI * x / (self.distance * self.wavelength);
        self.peak_intensity * (k * self.separation).cos().powi(2) * sinc(k * self.width).powi(2)
    }

    /// Screen half-width covering three diffraction lobes, `3 L lambda / a`.
    pub fn window(&self) -> f64 {
        3.0 * self.distance * self.wavelength / self.width
    }

    /// Photon positions drawn from the normalized pattern on the window by
    /// rejection against a uniform envelope.
    pub fn sample<R: Rng + ?Sized>(&self, photons: usize, rng: &mut R) -> Vec<f64> {
        let w = self.window();
        let mut out = Vec::with_capacity(photons);
        while out.len() < photons {
            let x = rng.random_range(-w..w);
            if rng.random::<f64>() * self.peak_intensity < self.intensity(x) {
                out.push(x);
            }
        }
        out
    }

    /// Integral of the pattern over `[lo, hi]` by composite Simpson.
    fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let n = 64;
        let h = (hi - lo) / n as f64;
        let mut s = self.intensity(lo) + self.intensity(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * self.intensity(lo + i as f64 * h);
        }
        s * h / 3.0
    }

    /// Pearson test of `samples` against the pattern on `bins` equal bins
    /// across the window. Neighbouring bins are merged until each expects
    /// at least five photons.
    pub fn chi_square(&self, samples: &[f64], bins: usize) -> Result<ChiSquareTest> {
        if bins < 2 {
            return Err(invalid("bins", "need at least two"));
        }
        let w = self.window();
        let width = 2.0 * w / bins as f64;
        let mut observed = vec![0.0; bins];
        for &x in samples {
            if x >= -w && x < w {
                observed[((x + w) / width) as usize] += 1.0;
            }
        }
        let weights: Vec<f64> = (0..bins)
            .map(|i| self.integrate(-w + i as f64 * width, -w + (i + 1) as f64 * width))
            .collect();
        let total_weight: f64 = weights.iter().sum();
        let n: f64 = observed.iter().sum();
        let mut merged = Vec::new();
        let (mut o, mut e) = (0.0, 0.0);
        for (obs, wgt) in observed.iter().zip(&weights) {
            o += obs;
            e += n * wgt / total_weight;
            if e >= 5.0 {
                merged.push((o, e));
                o = 0.0;
                e = 0.0;
            }
        }
        if e > 0.0 {
            match merged.last_mut() {
                Some(last) => {
                    last.0 += o;
                    last.1 += e;
                }
                None => merged.push((o, e)),
            }
        }
        let statistic: f64 = merged.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
        let dof = merged.len().saturating_sub(1).max(1);
        let dist = ChiSquared::new(dof as f64).map_err(|e| invalid("dof", e.to_string()))?;
        Ok(ChiSquareTest {
            statistic,
            dof,
            p_value: 1.0 - dist.cdf(statistic),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn slit() -> DoubleSlit {
        DoubleSlit::new(20e-6, 100e-6, 1.0, 600e-9).unwrap()
    }

    #[test]
    fn intensity_examples() {
        let s = slit();
        assert_eq!(s.intensity(0.0), 1.0);
        let first_zero = s.distance * s.wavelength / (2.0 * s.separation);
        assert_abs_diff_eq!(s.intensity(first_zero), 0.0, epsilon = 1e-20);
        assert!(s.intensity(first_zero * 0.9) > 0.0);
        assert!(DoubleSlit::new(0.0, 1.0, 1.0, 1.0).is_err());
        for k in 0..100 {
            assert!(s.intensity(k as f64 * 1e-4 - 5e-3) >= 0.0);
        }
    }

    #[test]
    fn sampled_histogram_matches_pattern() {
        let s = slit();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let photons = s.sample(100_000, &mut rng);
        assert!(photons.iter().all(|x| x.abs() <= s.window()));
        let t = s.chi_square(&photons, 200).unwrap();
        assert!(t.p_value > 0.05, "{t:?}");
    }

    #[test]
    fn chi_square_rejects_wrong_pattern() {
        let s = slit();
        let wrong = DoubleSlit::new(20e-6, 140e-6, 1.0, 600e-9).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let photons = wrong.sample(100_000, &mut rng);
        assert!(s.chi_square(&photons, 200).unwrap().p_value < 1e-6);
    }
}
