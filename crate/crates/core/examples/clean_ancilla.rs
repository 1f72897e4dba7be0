//! Clean-ancilla targets: only the columns with the ancilla in |0⟩ are fixed.

use gatesat::encode::SynthesisProblem;
use gatesat::gates::{build_gate_set, builtin_gate, GateSet, PrimKind};
use gatesat::search::{find_min_circuit, SearchOptions};
use gatesat::solve::{Circuit, SolverConfig};
use gatesat::target::{builtin, mask_columns, TargetSpec};
use gatesat::verify::check_implements;

fn main() {
    use PrimKind::*;
    // Published 10-gate AND: target qubit 2 starts in |0⟩.
    let word = [
        (H, vec![2]),
        (T, vec![2]),
        (Cnot, vec![0, 2]),
        (Tdg, vec![2]),
        (Cnot, vec![1, 2]),
        (T, vec![2]),
        (Cnot, vec![0, 2]),
        (Tdg, vec![2]),
        (H, vec![2]),
        (Sdg, vec![2]),
    ];
    let mut gates = Vec::new();
    let mut steps = Vec::new();
    for (kind, ops) in &word {
        let g = builtin_gate(*kind, ops, 3).unwrap();
        let j = gates
            .iter()
            .position(|h: &gatesat::gates::Gate| h.expanded == g.expanded)
            .unwrap_or_else(|| {
                gates.push(g);
                gates.len() - 1
            });
        steps.push(j);
    }
    let gs = GateSet::new(3, gates).unwrap();
    let circuit = Circuit { n: 3, steps };
    let and = builtin::and().unwrap();
    println!(
        "AND circuit: {}",
        check_implements(&circuit, &gs, &and, &[0])
    );
    println!(
        "as a full Toffoli: {}",
        check_implements(
            &circuit,
            &gs,
            &TargetSpec::matrix(builtin::toffoli().unwrap()).unwrap(),
            &[0]
        )
    );

    // Moving a qubit into a clean ancilla takes two CNOTs instead of a full SWAP's three.
    let solver = SolverConfig::discover()
        .expect("no SAT solver: build the gatesat binary or set GATESAT_SOLVER");
    let gs = build_gate_set(2, &[Cnot], None).unwrap();
    for (name, target) in [
        (
            "SWAP",
            TargetSpec::matrix(builtin::swap().unwrap()).unwrap(),
        ),
        (
            "SWAP into a clean qubit 1",
            mask_columns(builtin::swap().unwrap(), &[1]).unwrap(),
        ),
    ] {
        let problem = SynthesisProblem::new(target, gs.clone(), 1);
        let r = find_min_circuit(&problem, &SearchOptions::new(solver.clone(), 4)).unwrap();
        let r = r.found().unwrap();
        println!(
            "{name}: d={} [{}]",
            r.minimal_d,
            r.circuit.labels(&gs).join(", ")
        );
    }
}
