use num_complex::Complex64;
use proptest::prelude::*;
use qtunnel::oracle::circuit_matrix;
use qtunnel::{export_qasm, import_qasm, run_circuit, Circuit, Error, GateOp, StateVector};

fn gate_strategy(n: usize) -> impl Strategy<Value = GateOp> {
    let angle = -20.0f64..20.0;
    let q = 0..n;
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    prop_oneof![
        q.clone().prop_map(GateOp::h),
        q.clone().prop_map(GateOp::x),
        (q.clone(), angle.clone()).prop_map(|(t, a)| GateOp::rz(t, a)),
        (q.clone(), angle.clone()).prop_map(|(t, a)| GateOp::u1(t, a)),
        (q, angle.clone(), angle.clone(), angle.clone()).prop_map(|(t, a, b, c)| GateOp::u3(t, a, b, c)),
        pair.clone().prop_map(|(c, t)| GateOp::cnot(c, t)),
        (pair, angle).prop_map(|((c, t), a)| GateOp::cu1(c, t, a)),
    ]
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec(gate_strategy(n), 0..=100)
            .prop_map(move |g| Circuit::from_gates(n, "random", g).unwrap())
    })
}

fn random_state(n: usize, seed: &[f64]) -> StateVector {
    let amps = (0..1usize << n)
        .map(|k| Complex64::new(seed[k % seed.len()] + k as f64 * 0.1, seed[(k + 1) % seed.len()]))
        .collect();
    StateVector::normalized(amps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_and_probabilities(c in circuit_strategy(), seed in prop::collection::vec(-1.0f64..1.0, 3)) {
        let out = run_circuit(&random_state(c.n_qubits(), &seed), &c).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
        let p = out.probabilities();
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_undoes_circuit(c in circuit_strategy(), seed in prop::collection::vec(-1.0f64..1.0, 3)) {
        let psi = random_state(c.n_qubits(), &seed);
        let back = run_circuit(&run_circuit(&psi, &c).unwrap(), &c.inverse()).unwrap();
        let gap = psi.amplitudes().iter().zip(back.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-9);
    }

    #[test]
    fn qasm_round_trip_is_identity(c in circuit_strategy()) {
        let back = import_qasm(&export_qasm(&c)).unwrap();
        prop_assert_eq!(back.n_qubits(), c.n_qubits());
        prop_assert_eq!(back.gates(), c.gates());
        prop_assert_eq!(back.label(), c.label());
    }

    #[test]
    fn gate_matrices_are_unitary(g in gate_strategy(2)) {
        let c = Circuit::from_gates(2, "g", [g]).unwrap();
        prop_assert!(circuit_matrix(&c).unwrap().unitarity_defect() < 1e-12);
    }
}

#[test]
fn foreign_qasm_with_pi_expressions_and_creg() {
    let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncu1(pi/2) q[1],q[0];\nu3(pi,0,-pi) q[1];\nbarrier q[0],q[1];\n";
    let c = import_qasm(text).unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(c.gates()[1], GateOp::cu1(1, 0, std::f64::consts::FRAC_PI_2));
}

#[test]
fn malformed_qasm_reports_line() {
    let cases = [
        ("OPENQASM 3.0;\nqreg q[1];\n", 1),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n", 3),
        ("OPENQASM 2.0;\nh q[0];\n", 2),
        ("OPENQASM 2.0;\nqreg q[2];\n\nrz(1.0) q[0],q[1];\n", 4),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[1],q[1];\n", 3),
    ];
    for (text, want) in cases {
        match import_qasm(text) {
            Err(Error::Qasm { line, .. }) => assert_eq!(line, want, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}
