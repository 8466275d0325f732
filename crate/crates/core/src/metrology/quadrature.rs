use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrature {
    /// `(a + a^dagger)/sqrt2`.
    X,
    /// `-i (a - a^dagger)/sqrt2`.
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureVariance {
    pub variance: f64,
    /// Weight `a^dagger` would push above the state's own cutoff.
    pub truncation_residual: f64,
}

fn apply_quadrature(state: &StateVector, q: Quadrature) -> Result<(StateVector, f64)> {
    let raised = state.with_cutoff(state.cutoff() + 1)?;
    let lower = raised.apply_annihilation(0)?;
    let up = raised.apply_creation(0)?;
    let residual = state.apply_creation(0)?.dropped_norm;
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let out = match q {
        Quadrature::X => lower.scaled(s).add(&up.state.scaled(s))?,
        Quadrature::Y => lower
            .scaled(Complex64::new(0.0, -FRAC_1_SQRT_2))
            .add(&up.state.scaled(Complex64::new(0.0, FRAC_1_SQRT_2)))?,
    };
    Ok((out, residual))
}

/// `<Q^2> - <Q>^2` on a single-mode state, exact within its truncated
/// support.
pub fn quadrature_variance(state: &StateVector, q: Quadrature) -> Result<QuadratureVariance> {
    if state.mode_count() != 1 {
        return Err(Error::ModeCountMismatch {
            left: 1,
            right: state.mode_count(),
        });
    }
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let (applied, residual) = apply_quadrature(state, q)?;
    let raised = state.with_cutoff(state.cutoff() + 1)?;
    let mean = raised.inner_product(&applied)?.re / norm;
    let second = applied.norm_sqr() / norm;
    Ok(QuadratureVariance {
        variance: second - mean * mean,
        truncation_residual: residual / norm,
    })
}

/// `e^{-r} / sqrt(M n)`.
pub fn squeezed_precision_bound(r: f64, mean_photons: f64, shots: u64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(invalid("r", "must be non-negative"));
    }
    if !(mean_photons > 0.0) {
        return Err(invalid("mean_photons", "must be positive"));
    }
    if shots == 0 {
        return Err(invalid("shots", "must be at least 1"));
    }
    Ok((-r).exp() / (shots as f64 * mean_photons).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockBasisState;
    use crate::metrology::ProbeState;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn vacuum_and_coherent_are_symmetric() {
        let vac = StateVector::vacuum(1, 4).unwrap();
        for q in [Quadrature::X, Quadrature::Y] {
            assert_abs_diff_eq!(quadrature_variance(&vac, q).unwrap().variance, 0.5, epsilon = 1e-15);
        }
        let coh = StateVector::coherent(Complex64::from_polar(1.5, 0.4), 60).unwrap().state;
        for q in [Quadrature::X, Quadrature::Y] {
            assert_abs_diff_eq!(quadrature_variance(&coh, q).unwrap().variance, 0.5, epsilon = 1e-10);
        }
    }

    #[test]
    fn squeezed_vacuum_variances() {
        for r in [0.1, 0.5, 0.8, 1.0] {
            let p = ProbeState::squeezed_vacuum(r, 50).unwrap();
            let vx = quadrature_variance(&p.state, Quadrature::X).unwrap().variance;
            let vy = quadrature_variance(&p.state, Quadrature::Y).unwrap().variance;
            assert_abs_diff_eq!(vx, (-2.0 * r).exp() / 2.0, epsilon = 1e-4);
            assert_abs_diff_eq!(vy, (2.0 * r).exp() / 2.0, epsilon = 1e-4);
            assert_abs_diff_eq!(vx * vy, 0.25, epsilon = 1e-4);
        }
        let p = ProbeState::squeezed_vacuum(0.5, 50).unwrap();
        let vx = quadrature_variance(&p.state, Quadrature::X).unwrap().variance;
        assert_abs_diff_eq!(vx, 0.18394, epsilon = 1e-4);
    }

    #[test]
    fn uncertainty_relation_on_random_states() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for _ in 0..20 {
            let amps: Vec<_> = (0..6u32)
                .map(|n| {
                    (
                        FockBasisState::new(vec![n]),
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    )
                })
                .collect();
            let s = StateVector::from_amplitudes(1, 12, amps).unwrap().normalized().unwrap();
            let vx = quadrature_variance(&s, Quadrature::X).unwrap();
            let vy = quadrature_variance(&s, Quadrature::Y).unwrap();
            assert!((vx.variance * vy.variance).sqrt() >= 0.5 - 1e-12);
            assert_eq!(vx.truncation_residual, 0.0);
        }
    }

    #[test]
    fn residual_flags_states_at_the_cutoff() {
        let s = StateVector::basis(FockBasisState::new(vec![3]), 3).unwrap();
        let v = quadrature_variance(&s, Quadrature::X).unwrap();
        assert!(v.truncation_residual > 0.0);
        assert_abs_diff_eq!(v.variance, 3.5, epsilon = 1e-12);
    }

    #[test]
    fn precision_bound() {
        assert_abs_diff_eq!(squeezed_precision_bound(0.0, 100.0, 1).unwrap(), 0.1, epsilon = 1e-15);
        let base = squeezed_precision_bound(0.0, 10.0, 5).unwrap();
        assert_abs_diff_eq!(squeezed_precision_bound(2f64.ln(), 10.0, 5).unwrap(), base / 2.0, epsilon = 1e-15);
        let grid = [0.5, 1.0, 2.0, 4.0];
        for w in grid.windows(2) {
            assert!(squeezed_precision_bound(w[1], 3.0, 7).unwrap() < squeezed_precision_bound(w[0], 3.0, 7).unwrap());
            assert!(squeezed_precision_bound(0.3, w[1], 7).unwrap() < squeezed_precision_bound(0.3, w[0], 7).unwrap());
            let (m0, m1) = ((w[0] * 10.0) as u64, (w[1] * 10.0) as u64);
            assert!(squeezed_precision_bound(0.3, 3.0, m1).unwrap() < squeezed_precision_bound(0.3, 3.0, m0).unwrap());
        }
        assert!(squeezed_precision_bound(-1.0, 1.0, 1).is_err());
        assert!(squeezed_precision_bound(0.0, 0.0, 1).is_err());
        assert!(squeezed_precision_bound(0.0, 1.0, 0).is_err());
    }
}
