//! Exact check of the published 15-gate Toffoli circuit.

use gatesat::cli::format::parse_circuit;
use gatesat::target::{builtin, TargetSpec};
use gatesat::verify::check_implements;

const TOFFOLI: &str = "\
H q2
T q2
CNOT q0,q2
Tdg q2
CNOT q1,q2
T q2
CNOT q0,q2
Tdg q2
CNOT q1,q2
CNOT q0,q1
H q2
Tdg q1
CNOT q0,q1
T q0
T q1
";

fn main() {
    let (circuit, gs) = parse_circuit(TOFFOLI, Some(3)).unwrap();
    let target = TargetSpec::matrix(builtin::toffoli().unwrap()).unwrap();
    println!(
        "{} gates: {}",
        circuit.len(),
        check_implements(&circuit, &gs, &target, &[0])
    );
    let mut broken = circuit.clone();
    broken.steps.pop();
    println!(
        "without the last T: {}",
        check_implements(&broken, &gs, &target, &[0])
    );
}
