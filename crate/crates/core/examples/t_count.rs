//! Fewest T gates for single-qubit targets over {H, T, Tdg}.

use gatesat::encode::SynthesisProblem;
use gatesat::gates::{build_gate_set, PrimKind};
use gatesat::search::{minimize_type_count, SearchOptions};
use gatesat::solve::SolverConfig;
use gatesat::target::{builtin, TargetSpec};

fn main() {
    let solver = SolverConfig::discover()
        .expect("no SAT solver: build the gatesat binary or set GATESAT_SOLVER");
    let gs = build_gate_set(1, &[PrimKind::H, PrimKind::T, PrimKind::Tdg], None).unwrap();
    let t_gates = gs.indices_of(&[PrimKind::T, PrimKind::Tdg]);
    for kind in [PrimKind::S, PrimKind::Z, PrimKind::X, PrimKind::H] {
        let target = TargetSpec::matrix(builtin::gate(kind, &[0], 1).unwrap()).unwrap();
        let problem = SynthesisProblem::new(target, gs.clone(), 1);
        match minimize_type_count(&problem, &t_gates, &SearchOptions::new(solver.clone(), 6))
            .unwrap()
        {
            Some(r) => println!(
                "{kind}: T-count {} via [{}] (witnesses {:?})",
                r.count,
                r.circuit.labels(&gs).join(", "),
                r.witnesses
            ),
            None => println!("{kind}: nothing within 6 gates"),
        }
    }
}
