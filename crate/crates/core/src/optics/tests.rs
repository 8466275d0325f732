use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::error::Error;
use crate::fock::{apply_unitary_permanent, FockBasisState, ModeUnitary, StateVector};
use crate::register::{PolarizationRegister, Rail};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ket(occ: &[u32]) -> StateVector {
    StateVector::basis(FockBasisState::new(occ.to_vec()), 4).unwrap()
}

fn amp(s: &StateVector, occ: &[u32]) -> Complex64 {
    s.amplitude(&FockBasisState::new(occ.to_vec()))
}

/// Equal up to a global phase.
fn same_ray(a: &StateVector, b: &StateVector) -> bool {
    (a.fidelity(b).unwrap() - 1.0).abs() < 1e-12
}

#[test]
fn fifty_fifty_single_photon() {
    let out = apply_beam_splitter(&ket(&[1, 0]), (0, 1), FIFTY_FIFTY).unwrap();
    assert_abs_diff_eq!(amp(&out, &[1, 0]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_abs_diff_eq!(amp(&out, &[0, 1]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
}

#[test]
fn hom_pairing() {
    let out = apply_beam_splitter(&ket(&[1, 1]), (0, 1), FIFTY_FIFTY).unwrap();
    assert_abs_diff_eq!(amp(&out, &[2, 0]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_abs_diff_eq!(amp(&out, &[0, 2]).re, -FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_eq!(amp(&out, &[1, 1]), c(0.0));
}

#[test]
fn zero_angle_splitter_only_flips_sign_of_second_mode() {
    // theta = 0 maps a_j -> -b_j, i.e. a pi phase on mode j.
    let s = StateVector::from_amplitudes(
        2,
        3,
        [
            (FockBasisState::new(vec![1, 0]), c(0.6)),
            (FockBasisState::new(vec![0, 2]), c(0.8)),
        ],
    )
    .unwrap();
    let out = apply_beam_splitter(&s, (0, 1), 0.0).unwrap();
    assert_eq!(out, s);
    let odd = ket(&[2, 1]);
    let out = apply_beam_splitter(&odd, (0, 1), 0.0).unwrap();
    let shifted = apply_phase_shifter(&odd, 1, PI).unwrap();
    assert!((amp(&out, &[2, 1]) - amp(&shifted, &[2, 1])).norm() < 1e-15);
    assert_eq!(out, odd.scaled(c(-1.0)));
}

#[test]
fn beam_splitter_rejects_repeated_mode() {
    assert_eq!(
        apply_beam_splitter(&ket(&[1, 0]), (1, 1), 0.3),
        Err(Error::RepeatedMode(1))
    );
}

#[test]
fn phase_shifter_examples() {
    let vac = ket(&[0]);
    assert_eq!(apply_phase_shifter(&vac, 0, 1.234).unwrap(), vac);
    let n = 3;
    let phi = 0.37;
    let out = apply_phase_shifter(&ket(&[n]), 0, phi).unwrap();
    let want = Complex64::from_polar(1.0, n as f64 * phi);
    assert!((amp(&out, &[n]) - want).norm() < 1e-15);
    let out = apply_phase_shifter(&ket(&[1]), 0, PI).unwrap();
    assert!((amp(&out, &[1]) + c(1.0)).norm() < 1e-15);
}

#[test]
fn quarter_wave_plate_makes_left_circular() {
    let reg = PolarizationRegister::contiguous(1);
    let rail = reg.rail(0).unwrap();
    let h = reg.encode(&[c(1.0), c(0.0)]).unwrap();
    let out = apply_wave_plate(&h, rail, WavePlate::Quarter, FRAC_PI_4).unwrap();
    let left = reg
        .encode(&[c(FRAC_1_SQRT_2), Complex64::new(0.0, FRAC_1_SQRT_2)])
        .unwrap();
    assert!(same_ray(&out, &left));
}

#[test]
fn half_wave_plate_examples() {
    let reg = PolarizationRegister::contiguous(1);
    let rail = reg.rail(0).unwrap();
    let h = reg.encode(&[c(1.0), c(0.0)]).unwrap();
    let v = reg.encode(&[c(0.0), c(1.0)]).unwrap();
    let out = apply_wave_plate(&h, rail, WavePlate::Half, FRAC_PI_8).unwrap();
    let diag = reg.encode(&[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
    assert!(same_ray(&out, &diag));
    let out = apply_wave_plate(&v, rail, WavePlate::Half, 0.0).unwrap();
    assert_eq!(reg.decode(&out).unwrap(), vec![c(0.0), c(-1.0)]);
}

#[test]
fn wave_plate_rejects_bad_rail() {
    let s = ket(&[1, 0]);
    let r = apply_wave_plate(&s, Rail::new(0, 5), WavePlate::Half, 0.0);
    assert!(matches!(r, Err(Error::ModeOutOfRange { mode: 5, .. })));
}

#[test]
fn pbs_examples() {
    let (r1, r2) = (Rail::new(0, 1), Rail::new(2, 3));
    // |H> on rail 1 stays.
    let out = apply_pbs(&ket(&[1, 0, 0, 0]), (r1, r2)).unwrap();
    assert_eq!(out, ket(&[1, 0, 0, 0]));
    // |V> on rail 1 moves to rail 2.
    let out = apply_pbs(&ket(&[0, 1, 0, 0]), (r1, r2)).unwrap();
    assert_eq!(out, ket(&[0, 0, 0, 1]));
    // |H>_1 |V>_2 -> both on rail 1.
    let out = apply_pbs(&ket(&[1, 0, 0, 1]), (r1, r2)).unwrap();
    assert_eq!(out, ket(&[1, 1, 0, 0]));
    assert_eq!(apply_pbs(&ket(&[1, 0, 0, 1]), (r1, r1)), Err(Error::RepeatedMode(0)));
}

#[test]
fn element_matrices_are_unitary() {
    let elements = [
        Element::beam_splitter(0.3, 0, 1),
        Element::phase_shifter(1.1, 2),
        Element::half_wave_plate(0.4, Rail::new(0, 1)),
        Element::quarter_wave_plate(-0.7, Rail::new(2, 3)),
        Element::pbs(Rail::new(0, 1), Rail::new(2, 3)),
    ];
    for e in elements {
        let m = e.embedded_matrix(4).unwrap();
        assert!(ModeUnitary::new(m).is_ok(), "{e:?}");
    }
}

#[test]
fn fifty_fifty_reck_is_one_splitter() {
    let s = FRAC_1_SQRT_2;
    let u = ModeUnitary::new(DMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])).unwrap();
    let circuit = reck_decompose(&u);
    let splitters: Vec<_> = circuit
        .elements()
        .iter()
        .filter(|e| matches!(e, Element::BeamSplitter { .. }))
        .collect();
    assert_eq!(splitters.len(), 1);
    match splitters[0] {
        Element::BeamSplitter { theta, .. } => assert_abs_diff_eq!(*theta, FRAC_PI_4, epsilon = 1e-15),
        _ => unreachable!(),
    }
    assert!(circuit.to_unitary().distance_up_to_phase(&u) < 1e-12);
}

#[test]
fn identity_reck_is_zero_phases() {
    let circuit = reck_decompose(&ModeUnitary::identity(3));
    assert_eq!(circuit.elements().len(), 3);
    for e in circuit.elements() {
        assert!(matches!(e, Element::PhaseShifter { phi, .. } if *phi == 0.0));
    }
}

#[test]
fn reck_round_trip_random() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for dim in 1..=6 {
        for _ in 0..20 {
            let u = ModeUnitary::random_haar(dim, &mut rng);
            let circuit = reck_decompose(&u);
            let d = circuit_to_unitary(&circuit).distance_up_to_phase(&u);
            assert!(d < 1e-10, "dim {dim}: {d}");
        }
    }
}

#[test]
fn circuit_json_layout() {
    let circuit = Circuit::new(
        4,
        vec![
            Element::beam_splitter(0.5, 0, 1),
            Element::pbs(Rail::new(0, 1), Rail::new(2, 3)),
        ],
    )
    .unwrap();
    let json = serde_json::to_string(&circuit).unwrap();
    assert_eq!(
        json,
        r#"{"mode_count":4,"elements":[{"kind":"beam_splitter","params":[0.5],"modes":[0,1]},{"kind":"polarizing_beam_splitter","params":[],"modes":[0,1,2,3]}]}"#
    );
    let back: Circuit = serde_json::from_str(&json).unwrap();
    assert_eq!(back, circuit);
    let bad = r#"{"kind":"beam_splitter","params":[],"modes":[0,1]}"#;
    assert!(serde_json::from_str::<Element>(bad).is_err());
}

#[test]
fn circuit_rejects_out_of_range_modes() {
    let r = Circuit::new(2, vec![Element::beam_splitter(0.1, 0, 2)]);
    assert!(matches!(r, Err(Error::ModeOutOfRange { mode: 2, .. })));
}

fn arb_element(m: usize) -> impl Strategy<Value = Element> {
    let pair = move || (0..m, 1..m).prop_map(move |(i, d)| (i, (i + d) % m));
    prop_oneof![
        (-PI..PI, pair()).prop_map(|(t, (i, j))| Element::beam_splitter(t, i, j)),
        (-PI..PI, 0..m).prop_map(|(p, i)| Element::phase_shifter(p, i)),
        (-PI..PI, pair()).prop_map(|(a, (i, j))| Element::half_wave_plate(a, Rail::new(i, j))),
        (-PI..PI, pair()).prop_map(|(a, (i, j))| Element::quarter_wave_plate(a, Rail::new(i, j))),
    ]
}

proptest! {
    #[test]
    fn elements_conserve_photons_and_norm(
        elements in proptest::collection::vec(arb_element(3), 1..6),
        occ in proptest::collection::vec(0u32..3, 3),
    ) {
        let s = StateVector::basis(FockBasisState::new(occ.clone()), 6).unwrap();
        let n: u32 = occ.iter().sum();
        let mut cur = s;
        for e in &elements {
            cur = e.apply(&cur).unwrap();
            prop_assert!((cur.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!(cur.iter().all(|(k, _)| k.total() == n));
        }
    }

    #[test]
    fn sequential_matches_permanent_lift(
        elements in proptest::collection::vec(arb_element(3), 1..6),
        occ in proptest::collection::vec(0u32..2, 3),
    ) {
        let circuit = Circuit::new(3, elements).unwrap();
        let s = StateVector::basis(FockBasisState::new(occ), 3).unwrap();
        let seq = circuit.apply(&s).unwrap();
        let lifted = apply_unitary_permanent(&circuit.to_unitary(), &s).unwrap();
        let diff = seq.add(&lifted.scaled(c(-1.0))).unwrap();
        prop_assert!(diff.iter().all(|(_, a)| a.norm() < 1e-10));
    }
}
