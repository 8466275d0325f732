use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::element::Element;
use crate::error::{Error, Result};
use crate::fock::{ModeUnitary, StateVector};

/// Ordered list of elements; the first element acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    mode_count: usize,
    elements: Vec<Element>,
}

impl Circuit {
    pub fn new(mode_count: usize, elements: Vec<Element>) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::ZeroModes);
        }
        for e in &elements {
            e.validate(mode_count)?;
        }
        Ok(Self { mode_count, elements })
    }

    pub fn empty(mode_count: usize) -> Self {
        Self {
            mode_count,
            elements: Vec::new(),
        }
    }

    pub fn push(&mut self, element: Element) -> Result<()> {
        element.validate(self.mode_count)?;
        self.elements.push(element);
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Applies the elements one after another in Fock space.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.mode_count() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: state.mode_count(),
            });
        }
        self.elements
            .iter()
            .try_fold(state.clone(), |s, e| e.apply(&s))
    }

    pub fn to_unitary(&self) -> ModeUnitary {
        let m = self.mode_count;
        let product = self.elements.iter().fold(
            nalgebra::DMatrix::<Complex64>::identity(m, m),
            |acc, e| e.embedded_matrix(m).expect("validated on construction") * acc,
        );
        ModeUnitary::new(product).expect("products of element matrices are unitary")
    }
}

pub fn circuit_to_unitary(c: &Circuit) -> ModeUnitary {
    c.to_unitary()
}

const RECK_EPS: f64 = 1e-15;

/// Factorizes `u` into beam splitters and phase shifters.
///
/// Sub-diagonal entries are nulled column by column (left to right), each
/// column from the bottom row upwards, by a phase shifter on the upper row of
/// the adjacent pair followed by a beam splitter on the pair. The remaining
/// diagonal becomes the leading phase shifters of the returned circuit.
pub fn reck_decompose(u: &ModeUnitary) -> Circuit {
    let m = u.dim();
    let mut w = u.matrix().clone();
    let mut nulling: Vec<Element> = Vec::new();
    for j in 0..m {
        for q in (j + 1..m).rev() {
            let p = q - 1;
            let (a, b) = (w[(p, j)], w[(q, j)]);
            if b.norm() < RECK_EPS {
                continue;
            }
            if a.norm() >= RECK_EPS {
                let phi = b.arg() - a.arg();
                if phi.abs() >= RECK_EPS {
                    let e = Element::phase_shifter(phi, p);
                    w = e.embedded_matrix(m).expect("in range") * w;
                    nulling.push(e);
                }
            }
            let theta = b.norm().atan2(w[(p, j)].norm());
            let e = Element::beam_splitter(theta, p, q);
            w = e.embedded_matrix(m).expect("in range") * w;
            nulling.push(e);
        }
    }
    let mut elements: Vec<Element> = (0..m)
        .map(|k| Element::phase_shifter(w[(k, k)].arg(), k))
        .collect();
    elements.extend(nulling.iter().rev().map(|e| match e {
        Element::PhaseShifter { phi, mode } => Element::phase_shifter(-phi, *mode),
        // Beam splitters in this convention are their own inverse.
        other => other.clone(),
    }));
    Circuit {
        mode_count: m,
        elements,
    }
}
