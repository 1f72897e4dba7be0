//! Long-running searches (Toffoli at d=15, AND at d=10) with per-depth
//! artifacts so that an interrupted run can be resumed with a higher d_min.
//!
//! cargo run --release --example long_search -- toffoli 15 15 runs/toffoli

use gatesat::encode::SynthesisProblem;
use gatesat::gates::gate_set_from_tokens;
use gatesat::search::{find_min_circuit, SearchOptions};
use gatesat::solve::SolverConfig;
use gatesat::target::{builtin, TargetSpec};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let which = args.first().map_or("toffoli", String::as_str);
    let arg = |i: usize, default: usize| args.get(i).map_or(default, |s| s.parse().expect("depth"));
    let (target, tokens, d) = match which {
        "toffoli" => (
            TargetSpec::matrix(builtin::toffoli().unwrap()).unwrap(),
            vec!["H", "T", "Tdg", "CNOT"],
            15,
        ),
        "and" => (
            builtin::and().unwrap(),
            vec!["X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "CNOT", "CZ"],
            10,
        ),
        other => panic!("unknown target {other} (toffoli or and)"),
    };
    let gs = gate_set_from_tokens(3, &tokens, None).unwrap();
    let solver = SolverConfig::discover()
        .expect("no SAT solver: build the gatesat binary or set GATESAT_SOLVER");
    let mut opts = SearchOptions::new(solver, arg(2, d));
    opts.d_min = arg(1, d);
    opts.jobs = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(opts.d_max - opts.d_min + 1);
    opts.artifacts = Some(
        args.get(3)
            .map_or_else(|| format!("runs/{which}"), Clone::clone)
            .into(),
    );
    let mut problem = SynthesisProblem::new(target, gs.clone(), 1);
    problem.phase_multiples = (0..8).collect();
    match find_min_circuit(&problem, &opts) {
        Ok(out) => match out.found() {
            Some(r) => {
                println!("d={} phase k={}", r.minimal_d, r.phase);
                for l in r.circuit.labels(&gs) {
                    println!("  {l}");
                }
            }
            None => println!("nothing in {}..={}", opts.d_min, opts.d_max),
        },
        Err(e) => eprintln!("{e}"),
    }
}
