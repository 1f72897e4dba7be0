//! Writes one synthesis instance as DIMACS CNF without solving it.

use gatesat::encode::{encode_instance, InstanceStats, SynthesisProblem};
use gatesat::gates::{build_gate_set, PrimKind};
use gatesat::target::{builtin, TargetSpec};

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "swap_d3.cnf".into());
    let gs = build_gate_set(2, &[PrimKind::Cnot], None).unwrap();
    let target = TargetSpec::matrix(builtin::swap().unwrap()).unwrap();
    let problem = SynthesisProblem::new(target, gs, 3);
    let (formula, vm) = encode_instance(&problem).unwrap();
    let stats = InstanceStats::of(&formula, &vm, &problem.width_policy);
    println!("{stats:?}");
    formula.write_dimacs(std::path::Path::new(&out)).unwrap();
    println!("wrote {out}");
    for (step, row) in vm.selectors().iter().enumerate() {
        let vars: Vec<i32> = row.iter().map(|l| l.to_dimacs()).collect();
        println!("step {step} selectors: {vars:?}");
    }
}
