//! Doubled gate matrices and gate-set enumeration.

use gatesat::gates::{build_gate_set, gate_set_from_tokens, Connectivity, PrimKind};

fn main() {
    for kind in [PrimKind::H, PrimKind::T, PrimKind::Cnot] {
        let m = kind.doubled_matrix();
        println!("2·{kind} (scale {}):", m.scale());
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(|e| e.to_string()).collect();
            println!("  [{}]", row.join(", "));
        }
    }

    let small = gate_set_from_tokens(3, &["H", "T", "Tdg", "CNOT"], None).unwrap();
    println!("{{H, T, Tdg, CNOT}} on 3 qubits: {} gates", small.len());
    let big = gate_set_from_tokens(
        3,
        &["X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "CNOT", "CZ"],
        None,
    )
    .unwrap();
    println!("Clifford+T on 3 qubits: {} gates", big.len());

    let line = Connectivity::new([(0, 1), (1, 2)]);
    let linear = build_gate_set(3, &[PrimKind::Cnot], Some(&line)).unwrap();
    let labels: Vec<String> = linear.gates().iter().map(|g| g.label()).collect();
    println!("CNOT on a 0-1-2 line: {}", labels.join(", "));
}
