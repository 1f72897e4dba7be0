//! Provably minimal SWAP from CNOTs, with the per-depth record.

use gatesat::encode::SynthesisProblem;
use gatesat::gates::{build_gate_set, PrimKind};
use gatesat::search::{find_min_circuit, SearchOptions};
use gatesat::solve::SolverConfig;
use gatesat::target::{builtin, TargetSpec};

fn main() {
    let solver = SolverConfig::discover()
        .expect("no SAT solver: build the gatesat binary or set GATESAT_SOLVER");
    let gs = build_gate_set(2, &[PrimKind::Cnot], None).unwrap();
    let target = TargetSpec::matrix(builtin::swap().unwrap()).unwrap();
    let problem = SynthesisProblem::new(target, gs.clone(), 1);
    let outcome = find_min_circuit(&problem, &SearchOptions::new(solver, 4)).unwrap();
    let r = outcome.found().expect("SWAP is three CNOTs");
    for (d, verdict) in &r.record {
        println!("d={d}: {verdict}");
    }
    println!("d={}: SAT (optimal: {})", r.minimal_d, r.optimal);
    for label in r.circuit.labels(&gs) {
        println!("  {label}");
    }
}
