// SPDX-License-Identifier: Apache-2.0

//! Iterative deepening over the gate count, and gate-count-by-type minimization.
//!
//! Depths are tried in increasing order; the first satisfiable depth is minimal
//! when every smaller depth in the range was refuted. Each run logs one line
//! per depth starting with `search:` so long jobs can be followed and resumed.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use log::info;
use thiserror::Error;

use crate::encode::{SynthesisProblem, TypeBound, WidthPolicy};
use crate::solve::{solve_problem, Circuit, RunInfo, SolveError, SolverConfig, SynthesisOutcome};
use crate::verify::check_implements;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub d_min: usize,
    pub d_max: usize,
    /// Depths solved concurrently; 1 is sequential.
    pub jobs: usize,
    pub solver: SolverConfig,
    /// Where `instance_d<d>.cnf` and `.out` files go; a temporary directory
    /// when unset.
    pub artifacts: Option<PathBuf>,
}

impl SearchOptions {
    pub fn new(solver: SolverConfig, d_max: usize) -> Self {
        SearchOptions {
            d_min: 1,
            d_max,
            jobs: 1,
            solver,
            artifacts: None,
        }
    }
}

/// What was established at one depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepthVerdict {
    Unsat,
    /// Refuted by the ring-membership precheck, without a solver call.
    Infeasible(String),
    Timeout,
}

impl DepthVerdict {
    pub fn is_refutation(&self) -> bool {
        !matches!(self, DepthVerdict::Timeout)
    }
}

impl fmt::Display for DepthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthVerdict::Unsat => f.write_str("UNSAT"),
            DepthVerdict::Infeasible(_) => f.write_str("INFEASIBLE"),
            DepthVerdict::Timeout => f.write_str("TIMEOUT"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalResult<C = Circuit> {
    pub circuit: C,
    /// Phase multiple `k` of the match, `e^{ikπ/4}`.
    pub phase: u8,
    pub minimal_d: usize,
    /// Verdicts for the depths below `minimal_d` that were tried.
    pub record: Vec<(usize, DepthVerdict)>,
    /// Every depth from 1 to `minimal_d - 1` was refuted under proven widths.
    pub optimal: bool,
}

impl<C> OptimalResult<C> {
    /// Depths proven to have no solution.
    pub fn unsat_below(&self) -> Vec<usize> {
        self.record
            .iter()
            .filter(|(_, v)| v.is_refutation())
            .map(|(d, _)| *d)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<C = Circuit> {
    Found(OptimalResult<C>),
    /// Every depth in range was refuted, at least one by the solver.
    Exhausted {
        record: Vec<(usize, DepthVerdict)>,
    },
    /// Every depth in range failed the precheck.
    Infeasible {
        record: Vec<(usize, DepthVerdict)>,
    },
}

impl<C> SearchOutcome<C> {
    pub fn found(&self) -> Option<&OptimalResult<C>> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("empty depth range {d_min}..={d_max}")]
    BadRange { d_min: usize, d_max: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("solver failed at d={d}: {detail}")]
    Solver {
        d: usize,
        detail: String,
        record: Vec<(usize, DepthVerdict)>,
    },
    #[error("no solution found and depths {:?} timed out", timeouts(.record))]
    Timeout { record: Vec<(usize, DepthVerdict)> },
    #[error("circuit decoded at d={d} failed verification: {detail}")]
    Verification { d: usize, detail: String },
    #[error("cannot create artifact directory: {0}")]
    Artifacts(std::io::Error),
    #[error("type bound needs at least one gate")]
    EmptyTypeSet,
    #[error("{0}")]
    Invalid(String),
}

fn timeouts(record: &[(usize, DepthVerdict)]) -> Vec<usize> {
    record
        .iter()
        .filter(|(_, v)| *v == DepthVerdict::Timeout)
        .map(|(d, _)| *d)
        .collect()
}

/// Result of solving one depth.
pub(crate) enum Step<C> {
    Sat(C, u8),
    Unsat,
    Infeasible(String),
    Timeout,
    Cancelled,
    Error(String),
}

impl<C> Step<C> {
    fn name(&self) -> &'static str {
        match self {
            Step::Sat(..) => "SAT",
            Step::Unsat => "UNSAT",
            Step::Infeasible(_) => "INFEASIBLE",
            Step::Timeout => "TIMEOUT",
            Step::Cancelled => "CANCELLED",
            Step::Error(_) => "ERROR",
        }
    }
}

pub(crate) enum ArtifactDir {
    Kept(PathBuf),
    Temp(tempfile::TempDir),
}

impl ArtifactDir {
    pub(crate) fn open(opt: &Option<PathBuf>) -> Result<Self, SearchError> {
        match opt {
            Some(p) => {
                std::fs::create_dir_all(p).map_err(SearchError::Artifacts)?;
                Ok(ArtifactDir::Kept(p.clone()))
            }
            None => Ok(ArtifactDir::Temp(
                tempfile::Builder::new()
                    .prefix("gatesat-")
                    .tempdir()
                    .map_err(SearchError::Artifacts)?,
            )),
        }
    }

    pub(crate) fn path(&self) -> &std::path::Path {
        match self {
            ArtifactDir::Kept(p) => p,
            ArtifactDir::Temp(t) => t.path(),
        }
    }
}

type SolveAt<'a, C> =
    dyn Fn(usize, &dyn Fn() -> bool) -> Result<(Step<C>, RunInfo), SearchError> + Sync + 'a;

/// Runs `solve_at` over `lo..=hi` with `jobs` workers. A worker stops taking
/// depths beyond the smallest satisfiable one found so far, and cancels its
/// running depth when a smaller one succeeds.
pub(crate) fn deepen<C: Send>(
    lo: usize,
    hi: usize,
    jobs: usize,
    proven_widths: bool,
    solve_at: &SolveAt<'_, C>,
) -> Result<SearchOutcome<C>, SearchError> {
    if lo > hi || lo == 0 {
        return Err(SearchError::BadRange {
            d_min: lo,
            d_max: hi,
        });
    }
    let next = AtomicUsize::new(lo);
    let best = AtomicUsize::new(usize::MAX);
    let stop = AtomicBool::new(false);
    let results: Mutex<BTreeMap<usize, Step<C>>> = Mutex::new(BTreeMap::new());
    let failure: Mutex<Option<SearchError>> = Mutex::new(None);
    let worker = || loop {
        let d = next.fetch_add(1, Ordering::SeqCst);
        if d > hi || d > best.load(Ordering::SeqCst) || stop.load(Ordering::SeqCst) {
            return;
        }
        let cancel = || best.load(Ordering::SeqCst) < d || stop.load(Ordering::SeqCst);
        match solve_at(d, &cancel) {
            Ok((step, run)) => {
                info!(
                    "search: d={d} vars={} clauses={} time={:.3}s verdict={}",
                    run.variables,
                    run.clauses,
                    run.elapsed.as_secs_f64(),
                    step.name()
                );
                match &step {
                    Step::Sat(..) => {
                        best.fetch_min(d, Ordering::SeqCst);
                    }
                    Step::Error(_) => stop.store(true, Ordering::SeqCst),
                    _ => {}
                }
                results.lock().expect("poisoned").insert(d, step);
            }
            Err(e) => {
                stop.store(true, Ordering::SeqCst);
                failure.lock().expect("poisoned").get_or_insert(e);
                return;
            }
        }
    };
    thread::scope(|s| {
        for _ in 1..jobs.max(1) {
            s.spawn(worker);
        }
        worker();
    });
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    let results = results.into_inner().expect("poisoned");
    let mut record = Vec::new();
    for d in lo..=hi {
        match results.get(&d) {
            None => break,
            Some(Step::Unsat) => record.push((d, DepthVerdict::Unsat)),
            Some(Step::Infeasible(r)) => record.push((d, DepthVerdict::Infeasible(r.clone()))),
            Some(Step::Timeout) => record.push((d, DepthVerdict::Timeout)),
            Some(Step::Error(detail)) => {
                return Err(SearchError::Solver {
                    d,
                    detail: detail.clone(),
                    record,
                })
            }
            Some(Step::Cancelled) => break,
            Some(Step::Sat(..)) => {
                let mut results = results;
                let Some(Step::Sat(circuit, phase)) = results.remove(&d) else {
                    unreachable!()
                };
                let optimal =
                    lo == 1 && proven_widths && record.iter().all(|(_, v)| v.is_refutation());
                return Ok(SearchOutcome::Found(OptimalResult {
                    circuit,
                    phase,
                    minimal_d: d,
                    record,
                    optimal,
                }));
            }
        }
    }
    if let Some((&d, Step::Error(detail))) =
        results.iter().find(|(_, s)| matches!(s, Step::Error(_)))
    {
        return Err(SearchError::Solver {
            d,
            detail: detail.clone(),
            record,
        });
    }
    if record.iter().any(|(_, v)| *v == DepthVerdict::Timeout) {
        return Err(SearchError::Timeout { record });
    }
    if record
        .iter()
        .all(|(_, v)| matches!(v, DepthVerdict::Infeasible(_)))
    {
        return Ok(SearchOutcome::Infeasible { record });
    }
    Ok(SearchOutcome::Exhausted { record })
}

fn check_bounds(circuit: &Circuit, bounds: &[TypeBound]) -> Result<(), String> {
    for b in bounds {
        let n = circuit.count_of(&b.gates);
        if n > b.max_count {
            return Err(format!("{n} gates of a type bounded by {}", b.max_count));
        }
    }
    Ok(())
}

/// Smallest circuit for `problem` (its `depth` is ignored) with depth in
/// `opts.d_min..=opts.d_max`. Every returned circuit has passed exact
/// verification.
pub fn find_min_circuit(
    problem: &SynthesisProblem,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if opts.d_max < opts.d_min {
        return Err(SearchError::BadRange {
            d_min: opts.d_min,
            d_max: opts.d_max,
        });
    }
    let empty = Circuit {
        n: problem.gate_set.n(),
        steps: Vec::new(),
    };
    if opts.d_min <= 1 {
        let report = check_implements(
            &empty,
            &problem.gate_set,
            &problem.target,
            &problem.phase_multiples,
        );
        if report.pass {
            info!("search: d=0 verdict=SAT (identity)");
            return Ok(SearchOutcome::Found(OptimalResult {
                circuit: empty,
                phase: report.phase.unwrap_or(0),
                minimal_d: 0,
                record: Vec::new(),
                optimal: true,
            }));
        }
        if opts.d_max == 0 {
            return Ok(SearchOutcome::Exhausted { record: Vec::new() });
        }
    }
    let dir = ArtifactDir::open(&opts.artifacts)?;
    let solve_at =
        |d: usize, cancel: &dyn Fn() -> bool| -> Result<(Step<Circuit>, RunInfo), SearchError> {
            let p = problem.with_depth(d);
            let (outcome, run) = solve_problem(&p, &opts.solver, dir.path(), cancel)?;
            let step = match outcome {
                SynthesisOutcome::Sat { circuit, phase } => {
                    let report =
                        check_implements(&circuit, &problem.gate_set, &problem.target, &[phase]);
                    if !report.pass {
                        return Err(SearchError::Verification {
                            d,
                            detail: report.to_string(),
                        });
                    }
                    check_bounds(&circuit, &problem.type_bounds)
                        .map_err(|detail| SearchError::Verification { d, detail })?;
                    Step::Sat(circuit, phase)
                }
                SynthesisOutcome::Unsat => Step::Unsat,
                SynthesisOutcome::Infeasible(inf) => Step::Infeasible(inf.to_string()),
                SynthesisOutcome::SolverError(e) => Step::Error(e),
                SynthesisOutcome::Timeout => Step::Timeout,
                SynthesisOutcome::Cancelled => Step::Cancelled,
            };
            Ok((step, run))
        };
    let proven = problem.width_policy == WidthPolicy::Proven;
    let mut out = deepen(opts.d_min.max(1), opts.d_max, opts.jobs, proven, &solve_at)?;
    if let SearchOutcome::Found(r) = &mut out {
        r.optimal &= opts.d_min <= 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeCountResult {
    /// Fewest gates from the type set found within the depth range.
    pub count: usize,
    pub circuit: Circuit,
    pub phase: u8,
    /// `(count, depth)` of each successive witness.
    pub witnesses: Vec<(usize, usize)>,
    /// Bound `count - 1` refuted at every depth of the range.
    pub optimal: bool,
}

/// Minimizes the number of gates from `type_gates` over the depth range,
/// tightening an at-most-k bound downward from the first witness.
/// `None` when no circuit exists in the range at all.
pub fn minimize_type_count(
    problem: &SynthesisProblem,
    type_gates: &[usize],
    opts: &SearchOptions,
) -> Result<Option<TypeCountResult>, SearchError> {
    if type_gates.is_empty() {
        return Err(SearchError::EmptyTypeSet);
    }
    let first = match find_min_circuit(problem, opts) {
        Ok(SearchOutcome::Found(r)) => r,
        Ok(_) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut best = TypeCountResult {
        count: first.circuit.count_of(type_gates),
        phase: first.phase,
        witnesses: vec![(first.circuit.count_of(type_gates), first.minimal_d)],
        circuit: first.circuit,
        optimal: true,
    };
    while best.count > 0 {
        let k = best.count - 1;
        info!("search: type bound k={k}");
        let mut p = problem.clone();
        p.type_bounds.push(TypeBound {
            gates: type_gates.to_vec(),
            max_count: k,
        });
        let mut o = opts.clone();
        o.d_min = 1;
        match find_min_circuit(&p, &o) {
            Ok(SearchOutcome::Found(r)) => {
                let c = r.circuit.count_of(type_gates);
                best.witnesses.push((c, r.minimal_d));
                best.count = c;
                best.circuit = r.circuit;
                best.phase = r.phase;
            }
            Ok(_) => {
                best.optimal = problem.width_policy == WidthPolicy::Proven;
                break;
            }
            Err(SearchError::Timeout { .. }) => {
                best.optimal = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Some(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fake(d: usize, sat_at: usize) -> Result<(Step<usize>, RunInfo), SearchError> {
        let step = if d >= sat_at {
            Step::Sat(d, 0)
        } else {
            Step::Unsat
        };
        Ok((step, RunInfo::default()))
    }

    #[test]
    fn first_sat_is_reported_with_record() {
        for jobs in [1, 3] {
            let out = deepen(1, 6, jobs, true, &|d, _| fake(d, 4)).unwrap();
            let r = out.found().unwrap();
            assert_eq!(r.minimal_d, 4);
            assert_eq!(r.unsat_below(), vec![1, 2, 3]);
            assert!(r.optimal);
        }
    }

    #[test]
    fn timeouts_void_optimality() {
        let out = deepen(1, 5, 1, true, &|d, _| {
            if d == 2 {
                Ok((Step::Timeout, RunInfo::default()))
            } else {
                fake(d, 3)
            }
        })
        .unwrap();
        let r = out.found().unwrap();
        assert_eq!(r.minimal_d, 3);
        assert!(!r.optimal);
        assert_eq!(r.unsat_below(), vec![1]);
    }

    #[test]
    fn exhausted_and_infeasible() {
        let out = deepen(1, 3, 2, true, &|d, _| fake(d, 10)).unwrap();
        assert!(matches!(out, SearchOutcome::Exhausted { ref record } if record.len() == 3));
        let out = deepen::<usize>(1, 2, 1, true, &|_, _| {
            Ok((Step::Infeasible("x".into()), RunInfo::default()))
        })
        .unwrap();
        assert!(matches!(out, SearchOutcome::Infeasible { .. }));
    }

    #[test]
    fn errors_stop_the_search() {
        let err = deepen::<usize>(1, 4, 1, true, &|d, _| {
            Ok((
                if d == 2 {
                    Step::Error("boom".into())
                } else {
                    Step::Unsat
                },
                RunInfo::default(),
            ))
        })
        .unwrap_err();
        assert!(matches!(err, SearchError::Solver { d: 2, ref record, .. } if record.len() == 1));
    }

    #[test]
    fn unproven_widths_are_not_optimal() {
        let out = deepen(1, 6, 1, false, &|d, _| fake(d, 2)).unwrap();
        assert!(!out.found().unwrap().optimal);
    }
}
