use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::Seeds;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicrometerConfig {
    pub wavelength: f64,
    /// Screen distance, also the length of the observed strip.
    pub length: f64,
    pub separation: f64,
    /// Expected photons over the whole strip.
    pub photons: f64,
    pub pixels: usize,
    /// Skip the Poisson draw and use expected counts.
    pub noiseless: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicrometerEstimate {
    /// Fringes per unit length, `2d/(lambda L)`.
    pub sigma_true: f64,
    pub sigma_hat: f64,
    pub separation_hat: f64,
    /// Poisson-limited error on `d`, from the Fisher information of the
    /// pixel counts.
    pub separation_stderr: f64,
    /// Error on `d` if `sigma` is known only to one fringe over the strip,
    /// `lambda/2`.
    pub fringe_count_error: f64,
    pub detected_photons: f64,
}

fn pixel_centres(length: f64, pixels: usize) -> Vec<f64> {
    (0..pixels).map(|i| (i as f64 + 0.5) * length / pixels as f64).collect()
}

fn fringe(sigma: f64, x: f64) -> f64 {
    (PI * sigma * x).cos().powi(2)
}

/// Residual sum of squares of the best `a cos^2(pi sigma x)` fit to evenly
/// spaced pixels, less the constant `sum y^2`. Steps `cos(2 pi sigma x)` by
/// rotation instead of calling `cos` per pixel.
fn residual_scan(sigma: f64, pitch: f64, counts: &[f64]) -> f64 {
    let step = Complex64::from_polar(1.0, 2.0 * PI * sigma * pitch);
    let mut z = Complex64::from_polar(1.0, PI * sigma * pitch);
    let (mut sfy, mut sff) = (0.0, 0.0);
    for y in counts {
        let f = 0.5 * (1.0 + z.re);
        sfy += f * y;
        sff += f * f;
        z *= step;
    }
    if sff == 0.0 {
        0.0
    } else {
        -sfy * sfy / sff
    }
}

/// Poisson negative log-likelihood with the amplitude profiled out.
fn neg_log_likelihood(sigma: f64, xs: &[f64], counts: &[f64]) -> f64 {
    let (mut sf, mut sylf, mut sy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(counts) {
        let f = fringe(sigma, *x);
        sf += f;
        sy += y;
        if *y > 0.0 {
            sylf += y * f.max(1e-300).ln();
        }
    }
    sy * sf.ln() - sylf
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if (hi - lo) <= 1e-15 * hi.abs().max(1e-300) {
            break;
        }
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        }
    }
    (lo + hi) / 2.0
}

/// Simulates the fringe pattern `cos^2(pi sigma x)` over `[0, L]` with
/// Poisson pixel counts, fits `sigma` by a least-squares grid scan followed
/// by a golden section search on the Poisson likelihood, and returns `d = lambda L sigma / 2`.
pub fn micrometer_estimate(config: &MicrometerConfig, seed: u64) -> Result<MicrometerEstimate> {
    let MicrometerConfig {
        wavelength,
        length,
        separation,
        photons,
        pixels,
        noiseless,
    } = *config;
    for (name, v) in [("wavelength", wavelength), ("length", length), ("separation", separation), ("photons", photons)] {
        if !(v > 0.0) {
            return Err(invalid(name, "must be positive"));
        }
    }
    if pixels < 16 {
        return Err(invalid("pixels", "need at least 16"));
    }
    let sigma_true = 2.0 * separation / (wavelength * length);
    if sigma_true * length < 1.0 {
        return Err(Error::ZeroFringe {
            spacing: 1.0 / sigma_true,
            length,
        });
    }
    let xs = pixel_centres(length, pixels);
    let shape: Vec<f64> = xs.iter().map(|&x| fringe(sigma_true, x)).collect();
    let scale = photons / shape.iter().sum::<f64>();
    let mut rng = Seeds::new(seed).stream(0);
    let counts: Vec<f64> = shape
        .iter()
        .map(|&f| {
            let mean = scale * f;
            if noiseless {
                Ok(mean)
            } else if mean <= 0.0 {
                Ok(0.0)
            } else {
                Ok(Poisson::new(mean).map_err(|e| invalid("photons", e.to_string()))?.sample(&mut rng))
            }
        })
        .collect::<Result<_>>()?;

    // Scan from one fringe across the strip up to a quarter of the pixel
    // rate, in steps well inside the width of the central minimum.
    let lo = 1.0 / length;
    let hi = pixels as f64 / (4.0 * length);
    let step = 0.05 / length;
    let pitch = length / pixels as f64;
    let mut best = (lo, f64::INFINITY);
    let mut s = lo;
    while s <= hi {
        let r = residual_scan(s, pitch, &counts);
        if r < best.1 {
            best = (s, r);
        }
        s += step;
    }
    let sigma_hat = golden_section(
        |s| neg_log_likelihood(s, &xs, &counts),
        (best.0 - step).max(lo * 0.5),
        best.0 + step,
    );

    let detected: f64 = counts.iter().sum();
    let shape_hat: Vec<f64> = xs.iter().map(|&x| fringe(sigma_hat, x)).collect();
    let a_hat = detected / shape_hat.iter().sum::<f64>();
    // I(sigma) = sum (d mu/d sigma)^2 / mu = sum 4 a pi^2 x^2 sin^2(pi sigma x).
    let fisher: f64 = xs
        .iter()
        .map(|&x| 4.0 * a_hat * (PI * x).powi(2) * (PI * sigma_hat * x).sin().powi(2))
        .sum();
    let sigma_err = 1.0 / fisher.sqrt();
    Ok(MicrometerEstimate {
        sigma_true,
        sigma_hat,
        separation_hat: wavelength * length * sigma_hat / 2.0,
        separation_stderr: wavelength * length * sigma_err / 2.0,
        fringe_count_error: wavelength * length * (1.0 / length) / 2.0,
        detected_photons: detected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn config(photons: f64, noiseless: bool) -> MicrometerConfig {
        MicrometerConfig {
            wavelength: 600e-9,
            length: 50e-3,
            separation: 5e-6,
            photons,
            pixels: 2000,
            noiseless,
        }
    }

    #[test]
    fn noiseless_fringes_recover_separation() {
        let e = micrometer_estimate(&config(1e6, true), 0).unwrap();
        assert_abs_diff_eq!(e.sigma_true, 2.0 * 5e-6 / (600e-9 * 50e-3), epsilon = 1e-9);
        assert!((e.sigma_hat / e.sigma_true - 1.0).abs() < 1e-9);
        assert!((e.separation_hat / 5e-6 - 1.0).abs() < 1e-9);
        assert_abs_diff_eq!(e.fringe_count_error, 300e-9, epsilon = 1e-15);
    }

    #[test]
    fn noisy_estimate_within_error() {
        let e = micrometer_estimate(&config(1e5, false), 3).unwrap();
        assert!((e.separation_hat - 5e-6).abs() < 5.0 * e.separation_stderr);
        assert!(e.separation_stderr < e.fringe_count_error);
    }

    #[test]
    fn error_scales_as_inverse_root_photons() {
        let a = micrometer_estimate(&config(1e4, false), 1).unwrap().separation_stderr;
        let b = micrometer_estimate(&config(1e6, false), 1).unwrap().separation_stderr;
        assert!((a / b / 10.0 - 1.0).abs() < 0.05, "{}", a / b);
        // Monte Carlo spread agrees with the Fisher error.
        let runs = 100;
        let mut sq = 0.0;
        let mut se = 0.0;
        for seed in 0..runs {
            let e = micrometer_estimate(&config(1e4, false), seed).unwrap();
            sq += (e.separation_hat - 5e-6).powi(2);
            se += e.separation_stderr;
        }
        let rmse = (sq / runs as f64).sqrt();
        let mean_se = se / runs as f64;
        assert!((rmse / mean_se - 1.0).abs() < 0.2, "{rmse} vs {mean_se}");
    }

    #[test]
    fn too_few_fringes() {
        let mut c = config(1e4, true);
        c.separation = 1e-7;
        assert!(matches!(micrometer_estimate(&c, 0), Err(Error::ZeroFringe { .. })));
        c.separation = -1.0;
        assert!(micrometer_estimate(&c, 0).is_err());
    }
}
