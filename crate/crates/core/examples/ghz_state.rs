//! GHZ state preparation as a state-mapping target.

use gatesat::encode::SynthesisProblem;
use gatesat::gates::{build_gate_set, PrimKind};
use gatesat::search::{find_min_circuit, SearchOptions};
use gatesat::solve::SolverConfig;
use gatesat::target::builtin;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(3, |s| s.parse().expect("qubit count"));
    let solver = SolverConfig::discover()
        .expect("no SAT solver: build the gatesat binary or set GATESAT_SOLVER");
    let gs = build_gate_set(n, &[PrimKind::H, PrimKind::Cnot], None).unwrap();
    let problem = SynthesisProblem::new(builtin::ghz(n).unwrap(), gs.clone(), 1);
    let mut opts = SearchOptions::new(solver, n + 1);
    opts.jobs = 2;
    let outcome = find_min_circuit(&problem, &opts).unwrap();
    let r = outcome.found().expect("GHZ needs n gates");
    println!("GHZ-{n}: {} gates, optimal {}", r.minimal_d, r.optimal);
    for label in r.circuit.labels(&gs) {
        println!("  {label}");
    }
}
