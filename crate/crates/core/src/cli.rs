// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 circuit found or verified, 1 proven absent up to `--max-d`,
//! 2 infeasible by the ring precheck, 3 solver error or timeout, 64 usage or
//! malformed input.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use crate::cnf::CnfFormula;
use crate::encode::{encode_instance, EncodeError, SynthesisProblem, TypeBound, WidthPolicy};
use crate::gates::{gate_set_from_tokens, parse_gate_token, Connectivity, GateSet};
use crate::reversible::{synth_reversible_min, TruthTableSpec};
use crate::ring::ScaledMatrix;
use crate::search::{
    find_min_circuit, minimize_type_count, SearchError, SearchOptions, SearchOutcome,
};
use crate::solve::{Circuit, SolverConfig};
use crate::target::{builtin, with_clean_ancillas, with_dirty_ancillas, TargetSpec};
use crate::verify::check_implements;
use format::{circuit_json, circuit_text, parse_circuit, parse_target, Evidence};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_ABSENT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "gatesat",
    version,
    about = "Optimal exact gate synthesis by SAT"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest circuit implementing a unitary target
    Synth(SynthArgs),
    /// Smallest circuit mapping given input states to output states
    SynthStates(SynthArgs),
    /// Smallest NOT/CNOT/Toffoli circuit for a truth table
    SynthReversible(ReversibleArgs),
    /// Check a circuit file against a target
    Verify(VerifyArgs),
    /// Write the DIMACS instance for one depth
    Encode(EncodeArgs),
    /// Solve a DIMACS file with the bundled solver (exit 10 SAT, 20 UNSAT)
    Sat { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Target JSON file
    #[arg(long, conflicts_with = "builtin")]
    pub target: Option<PathBuf>,
    /// toffoli, and, swap, fredkin, ghz:N, or gate:NAME[@q0:q1]
    #[arg(long)]
    pub builtin: Option<String>,
    /// Accept any global phase e^{ikπ/4}
    #[arg(long)]
    pub up_to_phase: bool,
    /// Append N qubits prepared in |0⟩ and returned to |0⟩
    #[arg(long, default_value_t = 0)]
    pub clean_ancilla: usize,
    /// Append N qubits in an unknown state that must be restored
    #[arg(long, default_value_t = 0)]
    pub dirty_ancilla: usize,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// Comma-separated gates; bare names expand to every placement,
    /// NAME@q0:q1 selects one
    #[arg(long, default_value = "H,T,Tdg,CNOT")]
    pub gates: String,
    /// Allowed qubit pairs for multi-qubit gates, e.g. 0-1,1-2
    #[arg(long)]
    pub connectivity: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// SAT solver executable; defaults to GATESAT_SOLVER, kissat, cadical,
    /// then the bundled solver
    #[arg(long)]
    pub solver: Option<PathBuf>,
    /// Per-instance timeout in seconds
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Directory for instance_d<d>.cnf and .out files
    #[arg(long)]
    pub artifacts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[arg(long, default_value_t = 1)]
    pub min_d: usize,
    #[arg(long, default_value_t = 10)]
    pub max_d: usize,
    /// Depths solved concurrently
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    pub gates: GateArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub depth: DepthArgs,
    /// At most K gates from a comma-separated list, e.g. T,Tdg:2 (repeatable)
    #[arg(long)]
    pub max_count: Vec<String>,
    /// Minimize the number of gates from a comma-separated list
    #[arg(long)]
    pub minimize: Option<String>,
    /// Narrower coefficient widths (faster, optimality not proven)
    #[arg(long)]
    pub tight_widths: bool,
}

#[derive(Debug, Args)]
pub struct ReversibleArgs {
    /// Truth-table file
    #[arg(long, conflicts_with = "builtin")]
    pub table: Option<PathBuf>,
    /// swap, toffoli or fredkin
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, default_value = "X,CNOT,TOFFOLI")]
    pub gates: String,
    #[arg(long)]
    pub connectivity: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub depth: DepthArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Circuit as text lines or JSON
    #[arg(long)]
    pub circuit: PathBuf,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    pub gates: GateArgs,
    /// Number of gates
    #[arg(long)]
    pub depth: usize,
    #[arg(long)]
    pub max_count: Vec<String>,
    #[arg(long)]
    pub tight_widths: bool,
    /// Output file; standard output when absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.to_string(),
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_builtin(spec: &str) -> Res<TargetSpec> {
    let lower = spec.to_ascii_lowercase();
    let t = match lower.as_str() {
        "toffoli" => builtin::toffoli().and_then(TargetSpec::matrix),
        "and" => builtin::and(),
        "swap" => builtin::swap().and_then(TargetSpec::matrix),
        "fredkin" => builtin::fredkin().and_then(TargetSpec::matrix),
        s if s.starts_with("ghz:") => {
            let n: usize = s[4..]
                .parse()
                .map_err(|_| usage(format!("bad qubit count in `{spec}`")))?;
            builtin::ghz(n)
        }
        s if s.starts_with("gate:") => {
            let (kind, ops) = parse_gate_token(&spec[5..]).map_err(usage)?;
            let ops = ops.unwrap_or_else(|| (0..kind.arity()).collect());
            let n = ops.iter().max().map_or(1, |q| q + 1);
            builtin::gate(kind, &ops, n).and_then(TargetSpec::matrix)
        }
        _ => return Err(usage(format!("unknown builtin `{spec}`"))),
    };
    t.map_err(usage)
}

/// Target after ancilla rewriting, with the accepted phase multiples.
pub fn load_target(a: &TargetArgs) -> Res<(TargetSpec, Vec<u8>)> {
    let mut t = match (&a.target, &a.builtin) {
        (Some(p), None) => {
            parse_target(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        (None, Some(b)) => parse_builtin(b)?,
        _ => return Err(usage("give one of --target or --builtin")),
    };
    for (count, clean) in [(a.dirty_ancilla, false), (a.clean_ancilla, true)] {
        if count == 0 {
            continue;
        }
        t = add_ancillas(&t, count, clean)?;
    }
    let phases = if a.up_to_phase {
        (0..8).collect()
    } else {
        vec![0]
    };
    Ok((t, phases))
}

fn add_ancillas(t: &TargetSpec, count: usize, clean: bool) -> Res<TargetSpec> {
    let r = match t {
        TargetSpec::Matrix(m) if clean => with_clean_ancillas(m, count),
        TargetSpec::Matrix(m) => with_dirty_ancillas(m, count).and_then(TargetSpec::matrix),
        TargetSpec::Masked {
            matrix,
            kept_columns,
        } => {
            let big: ScaledMatrix = with_dirty_ancillas(matrix, count).map_err(usage)?;
            let fill = if clean { 1 } else { 1usize << count };
            let kept = kept_columns
                .iter()
                .flat_map(|&c| (0..fill).map(move |a| (c << count) | a))
                .collect();
            crate::target::mask_explicit(big, kept)
        }
        TargetSpec::States(_) => return Err(usage("ancilla options need a matrix target")),
    };
    r.map_err(usage)
}

fn connectivity(spec: &Option<String>) -> Res<Option<Connectivity>> {
    let Some(s) = spec else { return Ok(None) };
    let pairs = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once('-')
                .ok_or_else(|| usage(format!("bad pair `{p}`, expected a-b")))?;
            let q = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad qubit in `{p}`")))
            };
            Ok((q(a)?, q(b)?))
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(Some(Connectivity::new(pairs)))
}

pub fn load_gates(list: &str, conn: &Option<String>, n: usize) -> Res<GateSet> {
    let c = connectivity(conn)?;
    let tokens: Vec<&str> = list.split(',').collect();
    gate_set_from_tokens(n, &tokens, c.as_ref()).map_err(usage)
}

/// Gate indices of the listed kinds or placements.
fn select_gates(gs: &GateSet, list: &str) -> Res<Vec<usize>> {
    let mut out = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (kind, ops) = parse_gate_token(tok).map_err(usage)?;
        match ops {
            None => out.extend(gs.indices_of(&[kind])),
            Some(ops) => out.push(
                gs.find(kind, &ops)
                    .ok_or_else(|| usage(format!("{tok} is not in the gate set")))?,
            ),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(usage(format!("`{list}` selects no gate of the set")));
    }
    Ok(out)
}

fn type_bounds(gs: &GateSet, specs: &[String]) -> Res<Vec<TypeBound>> {
    specs
        .iter()
        .map(|s| {
            let (list, k) = s
                .rsplit_once(':')
                .ok_or_else(|| usage(format!("bad --max-count `{s}`, expected GATES:K")))?;
            let max_count = k
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad count in `{s}`")))?;
            Ok(TypeBound {
                gates: select_gates(gs, list)?,
                max_count,
            })
        })
        .collect()
}

fn solver_config(a: &SolverArgs) -> Res<SolverConfig> {
    let cfg = match &a.solver {
        Some(p) => SolverConfig::new(p),
        None => SolverConfig::discover(),
    }
    .map_err(|e| Failure {
        code: EXIT_SOLVER,
        msg: e.to_string(),
    })?;
    let timeout = match a.timeout {
        Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(usage(format!("bad timeout {t}"))),
        None => None,
    };
    Ok(cfg.with_timeout(timeout))
}

fn search_options(s: &SolverArgs, d: &DepthArgs) -> Res<SearchOptions> {
    if d.max_d < d.min_d {
        return Err(usage(format!(
            "--max-d {} is below --min-d {}",
            d.max_d, d.min_d
        )));
    }
    let mut o = SearchOptions::new(solver_config(s)?, d.max_d);
    o.d_min = d.min_d;
    o.jobs = d.jobs.max(1);
    o.artifacts = s.artifacts.clone();
    Ok(o)
}

fn search_failure(e: SearchError) -> Failure {
    let code = match &e {
        SearchError::Solver { .. } | SearchError::Timeout { .. } | SearchError::Solve(_) => {
            EXIT_SOLVER
        }
        SearchError::Verification { .. } => EXIT_SOLVER,
        _ => EXIT_USAGE,
    };
    Failure {
        code,
        msg: e.to_string(),
    }
}

fn emit(out: &mut dyn Write, c: &Circuit, gs: &GateSet, ev: &Evidence, how: Emit) -> Res<()> {
    let text = match how {
        Emit::Text => circuit_text(c, gs),
        Emit::Json => {
            let mut s =
                serde_json::to_string_pretty(&circuit_json(c, gs, ev)).expect("serializable");
            s.push('\n');
            s
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| usage(e.to_string()))
}

fn report_outcome(
    out: &mut dyn Write,
    outcome: SearchOutcome,
    gs: &GateSet,
    how: Emit,
    d_max: usize,
) -> Res<i32> {
    match outcome {
        SearchOutcome::Found(r) => {
            let ev = Evidence {
                phase: r.phase,
                optimal: r.optimal,
                unsat_below: r.unsat_below(),
            };
            info!(
                "found d={} ({}), phase k={}",
                r.minimal_d,
                if r.optimal {
                    "optimal"
                } else {
                    "not proven optimal"
                },
                r.phase
            );
            emit(out, &r.circuit, gs, &ev, how)?;
            Ok(EXIT_FOUND)
        }
        SearchOutcome::Exhausted { .. } => {
            eprintln!("no circuit with at most {d_max} gates");
            Ok(EXIT_ABSENT)
        }
        SearchOutcome::Infeasible { record } => {
            for (d, v) in &record {
                if let crate::search::DepthVerdict::Infeasible(why) = v {
                    eprintln!("d={d}: {why}");
                }
            }
            eprintln!("infeasible: the target is not reachable at any depth up to {d_max}");
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn problem(
    a: &TargetArgs,
    g: &GateArgs,
    bounds: &[String],
    tight: bool,
    states: Option<bool>,
) -> Res<SynthesisProblem> {
    let (target, phases) = load_target(a)?;
    match (states, &target) {
        (Some(true), TargetSpec::States(_))
        | (Some(false), TargetSpec::Matrix(_) | TargetSpec::Masked { .. })
        | (None, _) => {}
        (Some(true), _) => return Err(usage("synth-states needs a state-mapping target")),
        (Some(false), _) => return Err(usage("state-mapping targets go to synth-states")),
    }
    let gs = load_gates(&g.gates, &g.connectivity, target.n_qubits())?;
    let mut p = SynthesisProblem::new(target, gs, 1);
    p.phase_multiples = phases;
    p.type_bounds = type_bounds(&p.gate_set, bounds)?;
    if tight {
        p.width_policy = WidthPolicy::Tight;
    }
    Ok(p)
}

fn cmd_synth(a: &SynthArgs, states: bool, out: &mut dyn Write) -> Res<i32> {
    let p = problem(
        &a.target,
        &a.gates,
        &a.max_count,
        a.tight_widths,
        Some(states),
    )?;
    let opts = search_options(&a.solver, &a.depth)?;
    info!(
        "target on {} qubits, {} gates in the set, d in {}..={}",
        p.gate_set.n(),
        p.gate_set.len(),
        opts.d_min,
        opts.d_max
    );
    if let Some(list) = &a.minimize {
        let types = select_gates(&p.gate_set, list)?;
        return match minimize_type_count(&p, &types, &opts).map_err(search_failure)? {
            Some(r) => {
                info!(
                    "fewest {list} gates: {} ({})",
                    r.count,
                    if r.optimal {
                        "proven within the depth range"
                    } else {
                        "not proven"
                    }
                );
                let ev = Evidence {
                    phase: r.phase,
                    optimal: r.optimal,
                    unsat_below: Vec::new(),
                };
                emit(out, &r.circuit, &p.gate_set, &ev, a.depth.emit)?;
                Ok(EXIT_FOUND)
            }
            None => {
                eprintln!("no circuit with at most {} gates", opts.d_max);
                Ok(EXIT_ABSENT)
            }
        };
    }
    let outcome = find_min_circuit(&p, &opts).map_err(search_failure)?;
    report_outcome(out, outcome, &p.gate_set, a.depth.emit, opts.d_max)
}

fn reversible_builtin(name: &str) -> Res<TruthTableSpec> {
    let t = match name.to_ascii_lowercase().as_str() {
        "swap" => TruthTableSpec::from_permutation(2, |x| ((x & 1) << 1) | (x >> 1)),
        "toffoli" => {
            TruthTableSpec::from_permutation(3, |x| if x & 0b110 == 0b110 { x ^ 1 } else { x })
        }
        "fredkin" => TruthTableSpec::from_permutation(3, |x| {
            if x & 0b100 != 0 {
                (x & 0b100) | ((x & 1) << 1) | ((x >> 1) & 1)
            } else {
                x
            }
        }),
        _ => return Err(usage(format!("unknown builtin `{name}`"))),
    };
    t.map_err(usage)
}

fn cmd_reversible(a: &ReversibleArgs, out: &mut dyn Write) -> Res<i32> {
    let spec = match (&a.table, &a.builtin) {
        (Some(p), None) => {
            TruthTableSpec::parse(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        (None, Some(b)) => reversible_builtin(b)?,
        _ => return Err(usage("give one of --table or --builtin")),
    };
    let gs = load_gates(&a.gates, &a.connectivity, spec.n())?;
    let opts = search_options(&a.solver, &a.depth)?;
    let outcome = synth_reversible_min(&spec, &gs, &opts).map_err(search_failure)?;
    report_outcome(out, outcome, &gs, a.depth.emit, opts.d_max)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Res<i32> {
    let (target, phases) = load_target(&a.target)?;
    let (circuit, gs) = parse_circuit(&read(&a.circuit)?, Some(target.n_qubits()))
        .map_err(|e| usage(format!("{}: {e}", a.circuit.display())))?;
    if circuit.n != target.n_qubits() {
        return Err(usage(format!(
            "circuit acts on {} qubits, target on {}",
            circuit.n,
            target.n_qubits()
        )));
    }
    let report = check_implements(&circuit, &gs, &target, &phases);
    writeln!(out, "{report}").map_err(|e| usage(e.to_string()))?;
    Ok(if report.pass { EXIT_FOUND } else { EXIT_ABSENT })
}

fn cmd_encode(a: &EncodeArgs, out: &mut dyn Write) -> Res<i32> {
    let mut p = problem(&a.target, &a.gates, &a.max_count, a.tight_widths, None)?;
    p.depth = a.depth;
    let (f, _) = match encode_instance(&p) {
        Ok(x) => x,
        Err(EncodeError::Infeasible(inf)) => {
            eprintln!("{inf}");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(usage(e)),
    };
    info!(
        "d={}: {} variables, {} clauses",
        a.depth,
        f.var_count(),
        f.clause_count()
    );
    match &a.output {
        Some(path) => f
            .write_dimacs(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => f.write_dimacs_to(out).map_err(|e| usage(e.to_string()))?,
    }
    Ok(EXIT_FOUND)
}

/// Solves a DIMACS file in-process and prints the result in competition format.
pub fn cmd_sat(path: &Path, out: &mut dyn Write) -> Res<i32> {
    let f = CnfFormula::parse_dimacs(&read(path)?)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut s: cadical::Solver = cadical::Solver::new();
    for c in f.clauses() {
        s.add_clause(c.iter().map(|l| l.to_dimacs()));
    }
    let w = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| usage(e.to_string()))
    };
    match s.solve() {
        Some(true) => {
            w(out, "s SATISFIABLE\n")?;
            let mut line = String::from("v");
            for v in 1..=f.var_count() as i32 {
                let lit = if s.value(v) == Some(false) { -v } else { v };
                line.push_str(&format!(" {lit}"));
                if line.len() > 70 {
                    line.push('\n');
                    w(out, &line)?;
                    line = String::from("v");
                }
            }
            line.push_str(" 0\n");
            w(out, &line)?;
            Ok(10)
        }
        Some(false) => {
            w(out, "s UNSATISFIABLE\n")?;
            Ok(20)
        }
        None => {
            w(out, "s UNKNOWN\n")?;
            Ok(0)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_FOUND
            };
            let _ = e.print();
            return code;
        }
    };
    let r = match &cli.command {
        Command::Synth(a) => cmd_synth(a, false, out),
        Command::SynthStates(a) => cmd_synth(a, true, out),
        Command::SynthReversible(a) => cmd_reversible(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Encode(a) => cmd_encode(a, out),
        Command::Sat { file } => cmd_sat(file, out),
    };
    let _ = out.flush();
    match r {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}
