use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::comm::Pauli;
use crate::error::Result;
use crate::fock::StateVector;
use crate::measurement::{measure_polarization, PolarizationBasis};
use crate::register::PolarizationRegister;

use super::cluster::graph_amplitudes;

pub type Mat2 = Matrix2<Complex64>;

pub fn hadamard() -> Mat2 {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Mat2::new(s, s, s, -s)
}

/// `exp(-i a Z / 2)`.
pub fn u_z(a: f64) -> Mat2 {
    Mat2::new(
        Complex64::from_polar(1.0, -a / 2.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, a / 2.0),
    )
}

/// `exp(-i a X / 2)`.
pub fn u_x(a: f64) -> Mat2 {
    hadamard() * u_z(a) * hadamard()
}

/// `H U_Z(gamma) U_X(beta) U_Z(alpha)`.
pub fn mbqc_target(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    hadamard() * u_z(gamma) * u_x(beta) * u_z(alpha)
}

/// Frobenius distance between `a` and `b` after removing the best global
/// phase.
pub fn distance_up_to_phase(a: &Mat2, b: &Mat2) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    (a * phase - b).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MbqcRun {
    pub angles: [f64; 3],
    /// Basis angle actually used on each photon after adapting signs.
    pub measured_angles: [f64; 3],
    /// `true` for the `-` outcome.
    pub outcomes: [bool; 3],
    pub probabilities: [f64; 3],
    /// Byproduct `X^x Z^z` removed from the output photon.
    pub byproduct: Pauli,
    /// Output photon after correction.
    pub output_state: StateVector,
    /// Linear map from input to corrected output for the recorded outcomes,
    /// rescaled to be unitary. Columns are images of `|H>`, `|V>`.
    pub effective_unitary: [[Complex64; 2]; 2],
}

impl MbqcRun {
    /// [`MbqcRun::effective_unitary`] as a matrix.
    pub fn effective_matrix(&self) -> Mat2 {
        let u = self.effective_unitary;
        Mat2::new(u[0][0], u[0][1], u[1][0], u[1][1])
    }
}

/// One adaptive measurement step: `(x, z)` byproduct bits in, basis angle
/// out.
fn adapted_angle(target: f64, x: bool) -> f64 {
    if x {
        target
    } else {
        -target
    }
}

fn pauli_bits(x: bool, z: bool) -> Pauli {
    match (x, z) {
        (false, false) => Pauli::I,
        (true, false) => Pauli::X,
        (false, true) => Pauli::Z,
        (true, true) => Pauli::XZ,
    }
}

/// Measures photon 0 of `state` in the `+-angle` basis, returning the
/// unnormalized branch selected by `minus`.
fn project_first(state: &StateVector, angle: f64, minus: bool) -> Result<(StateVector, f64)> {
    let records = measure_polarization(state, crate::register::Rail::new(0, 1), PolarizationBasis::Angle { angle })?;
    let r = &records[usize::from(minus)];
    let post = match &r.post_state {
        Some(s) => s.scaled(Complex64::new(r.probability.sqrt(), 0.0)),
        None => StateVector::zero(state.mode_count() - 2, state.cutoff())?,
    };
    Ok((post, r.probability))
}

/// Line-cluster computation of `H U_Z(gamma) U_X(beta) U_Z(alpha)` on
/// `|+>`: photons 1-3 of a 4-photon line are measured in turn, each basis
/// sign chosen from the X byproduct so far, and the Pauli byproduct on
/// photon 4 is undone at the end.
pub fn mbqc_single_qubit<R: Rng + ?Sized>(angles: [f64; 3], rng: &mut R) -> Result<MbqcRun> {
    let edges: BTreeSet<(usize, usize)> = (1..4).map(|v| (v - 1, v)).collect();
    let reg = PolarizationRegister::contiguous(4);
    let plus = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut state = reg.encode(&graph_amplitudes(4, &edges, [plus, plus]))?;
    // Basis inputs on photon 1 for the effective-unitary reconstruction.
    let mut columns = [
        reg.encode(&graph_amplitudes(4, &edges, [one, zero]))?,
        reg.encode(&graph_amplitudes(4, &edges, [zero, one]))?,
    ];
    let (mut x, mut z) = (false, false);
    let mut measured_angles = [0.0; 3];
    let mut outcomes = [false; 3];
    let mut probabilities = [0.0; 3];
    for step in 0..3 {
        let angle = adapted_angle(angles[step], x);
        let (_, p_plus) = project_first(&state, angle, false)?;
        let minus = rng.random::<f64>() >= p_plus;
        let (next, p) = project_first(&state, angle, minus)?;
        state = next.normalized()?;
        for col in columns.iter_mut() {
            *col = project_first(col, angle, minus)?.0;
        }
        measured_angles[step] = angle;
        outcomes[step] = minus;
        probabilities[step] = p;
        (x, z) = (minus ^ z, x);
    }
    let byproduct = pauli_bits(x, z);
    let out_reg = PolarizationRegister::contiguous(1);
    let rail = out_reg.rail(0)?;
    let output_state = byproduct.undo(&state, rail);
    let mut m = Mat2::zeros();
    for (c, col) in columns.iter().enumerate() {
        let amps = out_reg.decode(&byproduct.undo(col, rail))?;
        m[(0, c)] = amps[0];
        m[(1, c)] = amps[1];
    }
    let scale = (m.norm_squared() / 2.0).sqrt();
    let m = m / Complex64::new(scale, 0.0);
    Ok(MbqcRun {
        angles,
        measured_angles,
        outcomes,
        probabilities,
        byproduct,
        output_state,
        effective_unitary: [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::f64::consts::PI;

    #[test]
    fn two_photon_cluster_single_step() {
        let edges: BTreeSet<(usize, usize)> = [(0, 1)].into_iter().collect();
        let plus = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let reg = PolarizationRegister::contiguous(2);
        let s = reg.encode(&graph_amplitudes(2, &edges, [plus, plus])).unwrap();
        let alpha = 0.7;
        let plus_vec = nalgebra::Vector2::new(plus, plus);
        let out_reg = PolarizationRegister::contiguous(1);
        let check = |basis_angle: f64, rotation: f64| {
            let (post, p) = project_first(&s, basis_angle, false).unwrap();
            assert_abs_diff_eq!(p, 0.5, epsilon = 1e-15);
            let got = out_reg.decode(&post.normalized().unwrap()).unwrap();
            let want = hadamard() * u_z(rotation) * plus_vec;
            let overlap = got[0].conj() * want[0] + got[1].conj() * want[1];
            assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
        };
        // The + outcome of the basis at angle `a` applies H U_Z(-a).
        check(-alpha, alpha);
        check(alpha, -alpha);
    }

    #[test]
    fn zero_angles_give_hadamard() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for _ in 0..8 {
            let run = mbqc_single_qubit([0.0; 3], &mut rng).unwrap();
            assert!(distance_up_to_phase(&run.effective_matrix(), &hadamard()) < 1e-10);
        }
    }

    #[test]
    fn random_angles_match_target() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        let mut seen = BTreeSet::new();
        for _ in 0..100 {
            let angles = [(); 3].map(|_| rng.random::<f64>() * 2.0 * PI - PI);
            let run = mbqc_single_qubit(angles, &mut rng).unwrap();
            seen.insert(run.outcomes);
            let target = mbqc_target(angles[0], angles[1], angles[2]);
            assert!(distance_up_to_phase(&run.effective_matrix(), &target) < 1e-10);
            for p in run.probabilities {
                assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
            }
            let plus = Complex64::new(FRAC_1_SQRT_2, 0.0);
            let want = target * nalgebra::Vector2::new(plus, plus);
            let got = PolarizationRegister::contiguous(1).decode(&run.output_state).unwrap();
            let overlap = got[0].conj() * want[0] + got[1].conj() * want[1];
            assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-10);
        }
        assert!(seen.len() > 4, "adaptive branches not exercised");
    }

    #[test]
    fn rotation_helpers() {
        let a: f64 = 0.4;
        let x = Mat2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        let direct = Mat2::identity() * Complex64::new((a / 2.0).cos(), 0.0) - x * Complex64::new(0.0, (a / 2.0).sin());
        assert!((u_x(a) - direct).norm() < 1e-15);
        assert!(distance_up_to_phase(&(u_z(a) * u_z(-a)), &Mat2::identity()) < 1e-15);
    }
}
