use std::sync::OnceLock;

use nalgebra::{Matrix5, Vector2, Vector3, Vector5};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{lift_unitary_permanent, FockBasisState, StateVector};
use crate::measurement::{herald, NULL_PROBABILITY};
use crate::optics::{Circuit, Element};

/// Angles of the three splitters and the resulting heralded amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NsSolution {
    pub thetas: [f64; 3],
    /// Common amplitude `c` of `|0>`, `|1>` and `-|2>` on the success branch.
    pub amplitude: f64,
    pub success_probability: f64,
    /// Norm of the optimality and constraint residual at the solution.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeraldedGateResult {
    pub success: bool,
    pub success_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output_state: Option<StateVector>,
}

impl HeraldedGateResult {
    pub(crate) fn from_record(probability: f64, post: Option<StateVector>) -> Self {
        Self {
            success: probability > NULL_PROBABILITY,
            success_probability: probability,
            output_state: post,
        }
    }
}

/// NS network on `signal`, with ancilla `one` prepared in `|1>` and `zero`
/// in `|0>`: splitters on `(one, zero)`, `(signal, one)`, `(one, zero)`.
pub fn ns_circuit(mode_count: usize, signal: usize, one: usize, zero: usize, thetas: [f64; 3]) -> Result<Circuit> {
    Circuit::new(
        mode_count,
        vec![
            Element::beam_splitter(thetas[0], one, zero),
            Element::beam_splitter(thetas[1], signal, one),
            Element::beam_splitter(thetas[2], one, zero),
        ],
    )
}

/// `<n,1,0| U |n,1,0>` for `n = 0, 1, 2`.
pub fn ns_amplitudes(thetas: [f64; 3]) -> Result<[f64; 3]> {
    let u = ns_circuit(3, 0, 1, 2, thetas)?.to_unitary();
    let mut out = [0.0; 3];
    for (n, slot) in out.iter_mut().enumerate() {
        let s = FockBasisState::new(vec![n as u32, 1, 0]);
        *slot = lift_unitary_permanent(&u, &s, &s)?.re;
    }
    Ok(out)
}

const GRAD_STEP: f64 = 1e-5;
const JAC_STEP: f64 = 1e-6;
const TOLERANCE: f64 = 1e-13;
const MAX_ITERATIONS: usize = 100;
/// Residual accepted when Newton stalls at finite-difference noise.
const CONVERGED: f64 = 1e-10;

fn constraints(t: &Vector3<f64>) -> Result<Vector2<f64>> {
    let c = ns_amplitudes([t[0], t[1], t[2]])?;
    Ok(Vector2::new(c[1] - c[0], c[2] + c[0]))
}

fn objective(t: &Vector3<f64>) -> Result<f64> {
    let c = ns_amplitudes([t[0], t[1], t[2]])?;
    Ok(c[0] * c[0])
}

/// Stationarity and feasibility of the Lagrangian `c0^2 + lambda . g`.
fn kkt(x: &Vector5<f64>) -> Result<Vector5<f64>> {
    let t = Vector3::new(x[0], x[1], x[2]);
    let lambda = Vector2::new(x[3], x[4]);
    let mut out = Vector5::zeros();
    for i in 0..3 {
        let mut e = Vector3::zeros();
        e[i] = GRAD_STEP;
        let dobj = (objective(&(t + e))? - objective(&(t - e))?) / (2.0 * GRAD_STEP);
        let dg = (constraints(&(t + e))? - constraints(&(t - e))?) / (2.0 * GRAD_STEP);
        out[i] = dobj + dg.dot(&lambda);
    }
    let g = constraints(&t)?;
    out[3] = g[0];
    out[4] = g[1];
    Ok(out)
}

/// Damped Newton on the KKT system. Returns the final point and residual.
fn newton(mut x: Vector5<f64>) -> Result<(Vector5<f64>, f64)> {
    for _ in 0..MAX_ITERATIONS {
        let f = kkt(&x)?;
        let norm = f.norm();
        if norm < TOLERANCE {
            return Ok((x, norm));
        }
        let mut jac = Matrix5::zeros();
        for j in 0..5 {
            let mut e = Vector5::zeros();
            e[j] = JAC_STEP;
            let col = (kkt(&(x + e))? - kkt(&(x - e))?) / (2.0 * JAC_STEP);
            jac.set_column(j, &col);
        }
        let Some(dx) = jac.lu().solve(&(-f)) else {
            return Ok((x, norm));
        };
        let mut step = 1.0;
        while step > 1e-4 && kkt(&(x + dx * step))?.norm() > norm {
            step /= 2.0;
        }
        x += dx * step;
    }
    let f = kkt(&x)?.norm();
    Ok((x, f))
}

/// Solves for the NS splitter angles by multi-start Newton on the KKT
/// conditions of `max c0^2` subject to `c1 = c0`, `c2 = -c0`. Starts sweep a
/// 5x5x5 grid; the best converged point with `c > 0` wins, ties going to the
/// earliest start.
pub fn solve_ns_coefficients() -> Result<NsSolution> {
    let grid: Vec<f64> = (0..5).map(|i| -1.4 + 0.7 * i as f64).collect();
    let mut best: Option<NsSolution> = None;
    let mut smallest_failure = f64::INFINITY;
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let (x, residual) = newton(Vector5::new(a, b, c, 0.0, 0.0))?;
                if !(residual < CONVERGED) {
                    smallest_failure = smallest_failure.min(residual);
                    continue;
                }
                let thetas = [x[0], x[1], x[2]];
                let amps = ns_amplitudes(thetas)?;
                let p = amps[0] * amps[0];
                if amps[0] > 0.0 && best.is_none_or(|b| p > b.success_probability + 1e-12) {
                    best = Some(NsSolution {
                        thetas,
                        amplitude: amps[0],
                        success_probability: p,
                        residual,
                    });
                }
            }
        }
    }
    best.ok_or(Error::NoConvergence {
        residual: smallest_failure,
    })
}

/// Solved angles, computed once per process.
pub fn ns_coefficients() -> Result<NsSolution> {
    static CACHE: OnceLock<std::result::Result<NsSolution, Error>> = OnceLock::new();
    CACHE.get_or_init(solve_ns_coefficients).clone()
}

/// Heralded NS gate on a single-mode state with support in `{|0>, |1>, |2>}`.
pub fn ns_gate(input: &StateVector) -> Result<HeraldedGateResult> {
    if input.mode_count() != 1 {
        return Err(Error::ModeCountMismatch {
            left: 1,
            right: input.mode_count(),
        });
    }
    if input.max_photons() > 2 {
        return Err(invalid("input", "support must lie in |0>, |1>, |2>"));
    }
    let solution = ns_coefficients()?;
    let ancilla = StateVector::basis(FockBasisState::new(vec![1, 0]), 1)?;
    let joint = input.normalized()?.tensor(&ancilla).with_cutoff(3)?;
    let out = ns_circuit(3, 0, 1, 2, solution.thetas)?.apply(&joint)?;
    let record = herald(&out, &[(1, 1), (2, 0)])?;
    let post = record.post_state.map(|s| s.with_cutoff(input.cutoff().max(2))).transpose()?;
    Ok(HeraldedGateResult::from_record(record.probability, post))
}

/// `alpha0 |0> + alpha1 |1> - alpha2 |2>`, normalized.
pub fn ns_target(input: &StateVector) -> Result<StateVector> {
    let flipped = input.map_basis(1, |k, a| {
        let sign = if k.occupation(0) == 2 { -1.0 } else { 1.0 };
        Some((k.clone(), a * Complex64::new(sign, 0.0)))
    });
    flipped.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn fock(n: u32) -> StateVector {
        StateVector::basis(FockBasisState::new(vec![n]), 2).unwrap()
    }

    fn superposition(a: [Complex64; 3]) -> StateVector {
        StateVector::from_amplitudes(1, 2, (0..3).map(|n| (FockBasisState::new(vec![n as u32]), a[n])))
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn solver_reaches_one_quarter() {
        let s = ns_coefficients().unwrap();
        assert_abs_diff_eq!(s.success_probability, 0.25, epsilon = 1e-9);
        assert!(s.residual < 1e-10);
        let c = ns_amplitudes(s.thetas).unwrap();
        assert_abs_diff_eq!(c[1], c[0], epsilon = 1e-12);
        assert_abs_diff_eq!(c[2], -c[0], epsilon = 1e-12);
    }

    #[test]
    fn basis_inputs() {
        for n in 0..3 {
            let r = ns_gate(&fock(n)).unwrap();
            assert!(r.success);
            assert_abs_diff_eq!(r.success_probability, 0.25, epsilon = 1e-9);
            let out = r.output_state.unwrap();
            let overlap = out.inner_product(&fock(n)).unwrap();
            let expected = if n == 2 { -1.0 } else { 1.0 };
            assert_abs_diff_eq!(overlap.re, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn equal_superposition_flips_two_photon_sign() {
        let one = Complex64::new(1.0, 0.0);
        let input = superposition([one, one, one]);
        let r = ns_gate(&input).unwrap();
        assert_abs_diff_eq!(r.success_probability, 0.25, epsilon = 1e-9);
        let target = superposition([one, one, -one]);
        let overlap = r.output_state.unwrap().inner_product(&target).unwrap();
        assert_abs_diff_eq!(overlap.re, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn probability_independent_of_input() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        for _ in 0..50 {
            let a = [(); 3].map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let input = superposition(a);
            let r = ns_gate(&input).unwrap();
            assert_abs_diff_eq!(r.success_probability, 0.25, epsilon = 1e-9);
            let f = r.output_state.unwrap().fidelity(&ns_target(&input).unwrap()).unwrap();
            assert_abs_diff_eq!(f, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn sequential_network_matches_permanent_oracle() {
        let s = ns_coefficients().unwrap();
        let circuit = ns_circuit(3, 0, 1, 2, s.thetas).unwrap();
        let u = circuit.to_unitary();
        for n in 0..3u32 {
            let input = StateVector::basis(FockBasisState::new(vec![n, 1, 0]), 3).unwrap();
            let seq = circuit.apply(&input).unwrap();
            let perm = crate::fock::apply_unitary_permanent(&u, &input).unwrap();
            for (k, a) in perm.iter() {
                assert!((seq.amplitude(k) - a).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_three_photons() {
        let three = StateVector::basis(FockBasisState::new(vec![3]), 3).unwrap();
        assert!(ns_gate(&three).is_err());
        let two_modes = StateVector::vacuum(2, 1).unwrap();
        assert!(ns_gate(&two_modes).is_err());
    }
}
