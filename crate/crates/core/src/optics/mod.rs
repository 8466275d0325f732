//! Linear-optical elements and networks.

mod circuit;
mod element;

pub use circuit::{circuit_to_unitary, reck_decompose, Circuit};
pub use element::{
    apply_beam_splitter, apply_pbs, apply_phase_shifter, apply_two_mode, apply_wave_plate,
    beam_splitter_matrix, wave_plate_matrix, Element, Mat2, WavePlate, FIFTY_FIFTY,
};

#[cfg(test)]
mod tests;
