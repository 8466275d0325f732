use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::{enumerate_basis, FockBasisState};
use super::permanent::permanent;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Tolerance on `U U^dagger = 1` accepted at construction.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Single-photon transfer matrix of an `m`-mode linear network.
///
/// Column `j` is the image of a photon entering mode `j`:
/// `a_j^dagger -> sum_i U[i][j] b_i^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() == 0 {
            return Err(Error::ZeroModes);
        }
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotUnitary { deviation: f64::INFINITY });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= UNITARITY_TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
    pub fn random_haar<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = g.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..dim {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
        Self { matrix: q }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Network that applies `self` first and `next` afterwards.
    pub fn then(&self, next: &ModeUnitary) -> Result<Self> {
        if next.dim() != self.dim() {
            return Err(Error::ModeCountMismatch {
                left: self.dim(),
                right: next.dim(),
            });
        }
        Ok(Self {
            matrix: &next.matrix * &self.matrix,
        })
    }

    /// Largest entrywise distance to `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &ModeUnitary) -> f64 {
        let overlap: Complex64 = self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }
}

fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let prod = m * m.adjoint();
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Largest photon number for which the permanent lift is offered.
pub const ORACLE_MAX_PHOTONS: u32 = 12;

fn sqrt_factorial_product(occ: &[u32]) -> f64 {
    occ.iter()
        .map(|&n| (1..=n).map(|k| k as f64).product::<f64>())
        .product::<f64>()
        .sqrt()
}

/// `<output| U |input>` for the multi-photon lift of `u`:
/// `per(U_sub) / sqrt(prod in_j! prod out_i!)`, where `U_sub` repeats row `i`
/// `out_i` times and column `j` `in_j` times.
pub fn lift_unitary_permanent(
    u: &ModeUnitary,
    input: &FockBasisState,
    output: &FockBasisState,
) -> Result<Complex64> {
    let m = u.dim();
    for s in [input, output] {
        if s.mode_count() != m {
            return Err(Error::ModeCountMismatch {
                left: m,
                right: s.mode_count(),
            });
        }
    }
    let (n_in, n_out) = (input.total(), output.total());
    if n_in != n_out {
        return Err(Error::PhotonNumberMismatch {
            input: n_in,
            output: n_out,
        });
    }
    if n_in > ORACLE_MAX_PHOTONS {
        return Err(Error::CutoffExceeded {
            photons: n_in,
            cutoff: ORACLE_MAX_PHOTONS,
        });
    }
    let expand = |s: &FockBasisState| -> Vec<usize> {
        s.occupations()
            .iter()
            .enumerate()
            .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
            .collect()
    };
    let rows = expand(output);
    let cols = expand(input);
    let n = rows.len();
    let sub = DMatrix::from_fn(n, n, |i, j| u.entry(rows[i], cols[j]));
    let norm = sqrt_factorial_product(input.occupations()) * sqrt_factorial_product(output.occupations());
    Ok(permanent(&sub) / norm)
}

/// Applies the lift of `u` to a whole state, one permanent per amplitude.
pub fn apply_unitary_permanent(u: &ModeUnitary, state: &StateVector) -> Result<StateVector> {
    if u.dim() != state.mode_count() {
        return Err(Error::ModeCountMismatch {
            left: u.dim(),
            right: state.mode_count(),
        });
    }
    let mut out: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
    let mut outputs_by_n: BTreeMap<u32, Vec<FockBasisState>> = BTreeMap::new();
    for (input, amp) in state.iter() {
        let n = input.total();
        if let std::collections::btree_map::Entry::Vacant(e) = outputs_by_n.entry(n) {
            e.insert(enumerate_basis(u.dim(), n)?);
        }
        for output in &outputs_by_n[&n] {
            let a = lift_unitary_permanent(u, input, output)?;
            *out.entry(output.clone()).or_default() += a * amp;
        }
    }
    Ok(StateVector::from_map_unchecked(
        state.mode_count(),
        state.cutoff(),
        out,
    ))
}
