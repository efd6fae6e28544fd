mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qtunnel::oracle::{
    circuit_matrix, exact_hamiltonian, exact_propagator, kinetic_operator, split_step_operator,
};
use qtunnel::tunneling::{trotter_step, CircuitMode, PotentialKind, PotentialSpec, TrotterParams};
use qtunnel::{build_qft, StateVector};

fn spec(kind: PotentialKind, v: f64) -> PotentialSpec {
    PotentialSpec::new(kind, if kind == PotentialKind::Free { 0.0 } else { v }).unwrap()
}

fn lattice_bit(kind: PotentialKind, n: usize) -> Option<usize> {
    match kind {
        PotentialKind::Free => None,
        PotentialKind::Step => Some(n - 1),
        PotentialKind::DoubleWell => Some(n - 2),
        PotentialKind::MultiWell => Some(n - 3),
    }
}

const KINDS: [PotentialKind; 4] = [
    PotentialKind::Free,
    PotentialKind::Step,
    PotentialKind::DoubleWell,
    PotentialKind::MultiWell,
];

#[test]
fn kinetic_operator_matches_reference() {
    for n in [2, 3] {
        for mass in [0.5, 1.3] {
            let k = to_m(&kinetic_operator(n, mass).unwrap());
            assert!(max_entry_gap(&k, &kinetic(n, mass)) < 1e-12);
        }
    }
}

#[test]
fn propagators_match_series_exponential() {
    for n in [2, 3] {
        for kind in KINDS {
            if kind == PotentialKind::MultiWell && n < 3 {
                continue;
            }
            let s = spec(kind, 50.0);
            let h = exact_hamiltonian(&s, n, 0.5).unwrap();
            assert!(h.hermiticity_defect() < 1e-12);
            let u = exact_propagator(&h, 0.37).unwrap();
            assert!(u.unitarity_defect() < 1e-10);
            let reference = expm_i(&(kinetic(n, 0.5) + potential(n, lattice_bit(kind, n), s.v)), 0.37);
            assert!(max_entry_gap(&to_m(&u), &reference) < 1e-10, "{kind:?} n={n}");
        }
    }
}

#[test]
fn exact_evolution_conserves_norm_and_energy() {
    let s = spec(PotentialKind::DoubleWell, 50.0);
    let h = exact_hamiltonian(&s, 3, 0.5).unwrap();
    let u = exact_propagator(&h, 0.05).unwrap();
    let amps = (0..8).map(|k| Complex64::new(1.0 + k as f64, 0.5 - k as f64)).collect();
    let mut psi = StateVector::normalized(amps).unwrap();
    let e0 = h.expectation(&psi);
    for _ in 0..40 {
        psi = u.apply(&psi).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((h.expectation(&psi) - e0).norm() < 1e-10);
    }
}

#[test]
fn exact_step_circuits_equal_split_product() {
    let params = TrotterParams::new(0.1, 0.5, 1).unwrap();
    for n in [2, 3] {
        for kind in KINDS {
            if kind == PotentialKind::MultiWell && n < 3 {
                continue;
            }
            let s = spec(kind, 50.0);
            let c = to_m(&circuit_matrix(&trotter_step(&s, n, &params, CircuitMode::Exact).unwrap()).unwrap());
            let k = expm_i(&kinetic(n, 0.5), 0.1);
            let v = expm_i(&potential(n, lattice_bit(kind, n), s.v), 0.1);
            assert!(phase_distance(&c, &(k * v)) < 1e-9, "{kind:?} n={n}");
        }
    }
}

#[test]
fn literal_mode_two_qubit_steps_equal_half_potential_product() {
    let params = TrotterParams::new(0.1, 0.5, 1).unwrap();
    for kind in [PotentialKind::Free, PotentialKind::Step, PotentialKind::DoubleWell] {
        let s = spec(kind, 50.0);
        let c = to_m(&circuit_matrix(&trotter_step(&s, 2, &params, CircuitMode::PaperLiteral).unwrap()).unwrap());
        let k = expm_i(&kinetic(2, 0.5), 0.1);
        let v = expm_i(&potential(2, lattice_bit(kind, 2), s.v / 2.0), 0.1);
        assert!(phase_distance(&c, &(k * v)) < 1e-9, "{kind:?}");
        let lib = to_m(&split_step_operator(&s, 2, &params, CircuitMode::PaperLiteral).unwrap());
        assert!(phase_distance(&lib, &c) < 1e-9);
    }
}

fn global_error(dt: f64, steps: usize) -> f64 {
    let s = spec(PotentialKind::Step, 50.0);
    let params = TrotterParams::new(dt, 0.5, steps).unwrap();
    let step = to_m(&circuit_matrix(&trotter_step(&s, 2, &params, CircuitMode::Exact).unwrap()).unwrap());
    let mut u = M::identity(4, 4);
    for _ in 0..steps {
        u = &step * u;
    }
    let h = kinetic(2, 0.5) + potential(2, Some(1), 50.0);
    phase_distance(&u, &expm_i(&h, dt * steps as f64))
}

#[test]
fn global_error_halves_with_dt() {
    // total time 0.6; the largest step used here keeps v·dt below one radian
    let errs: Vec<f64> = [(0.01, 60), (0.005, 120), (0.0025, 240)]
        .iter()
        .map(|&(dt, k)| global_error(dt, k))
        .collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.4..=0.6).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn per_step_error_constant_is_stable() {
    let s = spec(PotentialKind::Step, 50.0);
    let h = kinetic(2, 0.5) + potential(2, Some(1), 50.0);
    let ks: Vec<f64> = [0.01, 0.005, 0.0025]
        .iter()
        .map(|&dt| {
            let params = TrotterParams::new(dt, 0.5, 1).unwrap();
            let step = to_m(&circuit_matrix(&trotter_step(&s, 2, &params, CircuitMode::Exact).unwrap()).unwrap());
            phase_distance(&step, &expm_i(&h, dt)) / (dt * dt)
        })
        .collect();
    let mean = ks.iter().sum::<f64>() / 3.0;
    assert!(ks.iter().all(|k| (k / mean - 1.0).abs() <= 0.3), "{ks:?}");
}

#[test]
fn free_evolution_keeps_momentum_distribution() {
    let params = TrotterParams::new(0.1, 0.5, 1).unwrap();
    for n in [2, 3] {
        let step = trotter_step(&PotentialSpec::free(), n, &params, CircuitMode::Exact).unwrap();
        let f = dft(n);
        let amps = (0..1 << n).map(|k| Complex64::new((k as f64).sin(), 0.3)).collect();
        let mut psi = StateVector::normalized(amps).unwrap();
        let momentum = |s: &StateVector| {
            let v = nalgebra::DVector::from_column_slice(s.amplitudes());
            (f.adjoint() * v).iter().map(|z| z.norm_sqr()).collect::<Vec<f64>>()
        };
        let p0 = momentum(&psi);
        for _ in 0..10 {
            psi.run(&step).unwrap();
            let p = momentum(&psi);
            assert!(p.iter().zip(&p0).all(|(a, b)| (a - b).abs() < 1e-9));
        }
    }
}

#[test]
fn qft_unitarity_and_shift_to_phase() {
    for n in 1..=6 {
        assert!(circuit_matrix(&build_qft(n).unwrap()).unwrap().unitarity_defect() < 1e-10);
    }
    for n in [2usize, 3] {
        let dim = 1usize << n;
        let mut s = StateVector::basis(n, 1).unwrap();
        s.run(&build_qft(n).unwrap()).unwrap();
        for (l, a) in s.amplitudes().iter().enumerate() {
            let want = Complex64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * std::f64::consts::PI * l as f64 / dim as f64);
            assert!((a - want).norm() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_steps_match_reference_for_any_parameters(
        dt in 0.001f64..0.5,
        mass in 0.2f64..3.0,
        v in -60.0f64..60.0,
        kind in 0usize..4,
        n in 2usize..=3,
    ) {
        let kind = KINDS[kind];
        prop_assume!(!(kind == PotentialKind::MultiWell && n < 3));
        let s = spec(kind, v);
        let params = TrotterParams::new(dt, mass, 1).unwrap();
        let c = to_m(&circuit_matrix(&trotter_step(&s, n, &params, CircuitMode::Exact).unwrap()).unwrap());
        let k = expm_i(&kinetic(n, mass), dt);
        let pv = expm_i(&potential(n, lattice_bit(kind, n), s.v), dt);
        prop_assert!(phase_distance(&c, &(k * pv)) < 1e-9);
    }
}
