//! No passive four-mode network turns |H,H> into a Bell pair.

use std::f64::consts::PI;

use linoptics::fock::{apply_unitary_permanent, FockBasisState, ModeUnitary, StateVector};
use linoptics::optics::{Circuit, Element};
use linoptics::register::PolarizationRegister;
use linoptics::rng::Seeds;
use num_complex::Complex64;
use rand::Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn setup() -> (StateVector, StateVector) {
    let reg = PolarizationRegister::contiguous(2);
    let hh = reg.encode_product(&[[c(1.0), c(0.0)], [c(1.0), c(0.0)]]).unwrap();
    let r = c(0.5f64.sqrt());
    let phi_plus = reg.encode(&[r, c(0.0), c(0.0), r]).unwrap();
    (hh, phi_plus)
}

fn random_circuit<R: Rng>(rng: &mut R, depth: usize) -> Circuit {
    let mut elements = Vec::with_capacity(depth);
    for _ in 0..depth {
        let i = rng.random_range(0..4);
        let j = (i + rng.random_range(1..4)) % 4;
        elements.push(Element::beam_splitter(rng.random_range(-PI..PI), i, j));
        elements.push(Element::phase_shifter(rng.random_range(-PI..PI), i));
    }
    Circuit::new(4, elements).unwrap()
}

#[test]
fn random_networks_never_reach_phi_plus() {
    let (hh, phi_plus) = setup();
    let seeds = Seeds::new(2024);
    let mut worst: f64 = 0.0;
    for k in 0..10_000u64 {
        let mut rng = seeds.stream(k);
        let out = if k % 2 == 0 {
            apply_unitary_permanent(&ModeUnitary::random_haar(4, &mut rng), &hh).unwrap()
        } else {
            let depth = rng.random_range(1..12);
            random_circuit(&mut rng, depth).apply(&hh).unwrap()
        };
        worst = worst.max(out.fidelity(&phi_plus).unwrap());
    }
    assert!(worst <= 1.0 - 1e-6, "fidelity {worst}");
}

#[test]
fn splitter_grid_never_reaches_phi_plus() {
    // Splitters on (H1, H2), (V1, V2), (H1, V1), (H2, V2) with a phase,
    // every angle on a 12-point grid.
    let (hh, phi_plus) = setup();
    let grid: Vec<f64> = (0..12).map(|k| k as f64 * PI / 12.0).collect();
    let mut worst: f64 = 0.0;
    for &a in &grid {
        for &b in &grid {
            for &g in &grid {
                for &d in &grid {
                    for &p in &grid[..6] {
                        let circuit = Circuit::new(
                            4,
                            vec![
                                Element::beam_splitter(a, 0, 1),
                                Element::phase_shifter(2.0 * p, 1),
                                Element::beam_splitter(b, 0, 2),
                                Element::beam_splitter(g, 1, 3),
                                Element::beam_splitter(d, 2, 3),
                            ],
                        )
                        .unwrap();
                        let out = circuit.apply(&hh).unwrap();
                        worst = worst.max(out.fidelity(&phi_plus).unwrap());
                    }
                }
            }
        }
    }
    assert!(worst <= 1.0 - 1e-6, "fidelity {worst}");
}

#[test]
fn photons_stay_in_the_two_photon_sector() {
    let (hh, _) = setup();
    let mut rng = Seeds::new(5).stream(0);
    let out = apply_unitary_permanent(&ModeUnitary::random_haar(4, &mut rng), &hh).unwrap();
    assert!(out.iter().all(|(k, _)| k.total() == 2));
    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    assert_eq!(hh.amplitude(&FockBasisState::new(vec![1, 0, 1, 0])), c(1.0));
}
