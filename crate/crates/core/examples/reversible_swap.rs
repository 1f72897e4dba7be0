//! Truth-table synthesis over NOT, CNOT and Toffoli.

use gatesat::gates::{build_gate_set, PrimKind};
use gatesat::reversible::{synth_reversible_min, TruthTableSpec};
use gatesat::search::{SearchOptions, SearchOutcome};
use gatesat::solve::SolverConfig;

fn main() {
    let solver = SolverConfig::discover()
        .expect("no SAT solver: build the gatesat binary or set GATESAT_SOLVER");
    let swap = TruthTableSpec::parse("00 -> 00\n01 -> 10\n10 -> 01\n11 -> 11\n").unwrap();
    let cnots = build_gate_set(2, &[PrimKind::Cnot], None).unwrap();
    let r = synth_reversible_min(&swap, &cnots, &SearchOptions::new(solver.clone(), 4)).unwrap();
    let r = r.found().unwrap();
    println!(
        "SWAP: {} gates [{}]",
        r.minimal_d,
        r.circuit.labels(&cnots).join(", ")
    );

    // Sum and carry of a, b onto a clean third wire: (a, b, 0) -> (a, a⊕b, ab).
    let half_adder = TruthTableSpec::parse(
        "# inputs with the third wire clean\n000 -> 000\n010 -> 010\n100 -> 110\n110 -> 101\n",
    )
    .unwrap();
    let gs = build_gate_set(3, &[PrimKind::X, PrimKind::Cnot, PrimKind::Toffoli], None).unwrap();
    let r = synth_reversible_min(&half_adder, &gs, &SearchOptions::new(solver.clone(), 4)).unwrap();
    let r = r.found().unwrap();
    println!(
        "half adder: {} gates [{}]",
        r.minimal_d,
        r.circuit.labels(&gs).join(", ")
    );

    let toffoli =
        TruthTableSpec::from_permutation(3, |x| if x & 6 == 6 { x ^ 1 } else { x }).unwrap();
    let affine = build_gate_set(3, &[PrimKind::X, PrimKind::Cnot], None).unwrap();
    match synth_reversible_min(&toffoli, &affine, &SearchOptions::new(solver, 4)).unwrap() {
        SearchOutcome::Exhausted { record } => {
            println!("Toffoli from X and CNOT: UNSAT at d=1..={}", record.len())
        }
        other => println!("Toffoli from X and CNOT: {other:?}"),
    }
}
