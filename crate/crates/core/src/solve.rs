// SPDX-License-Identifier: Apache-2.0

//! External SAT solver driver and model decoding.
//!
//! The solver is any executable following the competition conventions: it is
//! run as `<solver> [args] <file.cnf>`, exits with 10 and prints `v` lines
//! when satisfiable, and exits with 20 when unsatisfiable.

use std::env;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use log::debug;
use thiserror::Error;

use crate::cnf::{parse_model, CnfFormula, Model};
use crate::encode::{encode_instance, EncodeError, Infeasibility, SynthesisProblem, VarMap};
use crate::gates::GateSet;

/// Gate indices in application order: `steps[0]` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub n: usize,
    pub steps: Vec<usize>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn labels(&self, gate_set: &GateSet) -> Vec<String> {
        self.steps
            .iter()
            .map(|&j| gate_set.gate(j).label())
            .collect()
    }

    /// Number of steps whose gate index is in `gates`.
    pub fn count_of(&self, gates: &[usize]) -> usize {
        self.steps.iter().filter(|j| gates.contains(j)).count()
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("solver `{0}` not found or not executable")]
    NotExecutable(PathBuf),
    #[error("no SAT solver found; set GATESAT_SOLVER or pass --solver")]
    NoSolver,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("model decoding failed: {0}")]
    Decode(#[from] DecodeError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub executable: PathBuf,
    pub args: Vec<String>,
    pub timeout: Option<Duration>,
}

fn is_executable(p: &Path) -> bool {
    let Ok(meta) = fs::metadata(p) else {
        return false;
    };
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        meta.is_file() && meta.permissions().mode() & 0o111 != 0
    }
    #[cfg(not(unix))]
    {
        meta.is_file()
    }
}

fn on_path(name: &str) -> Option<PathBuf> {
    env::split_paths(&env::var_os("PATH")?)
        .map(|d| d.join(name))
        .find(|p| is_executable(p))
}

impl SolverConfig {
    /// Resolves `executable` (a path or a name on `PATH`) and checks it can run.
    pub fn new(executable: impl AsRef<Path>) -> Result<Self, SolveError> {
        let exe = executable.as_ref();
        let resolved = if exe.components().count() > 1 || exe.is_absolute() {
            Some(exe.to_path_buf()).filter(|p| is_executable(p))
        } else {
            on_path(&exe.to_string_lossy())
                .or_else(|| Some(exe.to_path_buf()).filter(|p| is_executable(p)))
        };
        match resolved {
            Some(executable) => Ok(SolverConfig {
                executable,
                args: Vec::new(),
                timeout: None,
            }),
            None => Err(SolveError::NotExecutable(exe.to_path_buf())),
        }
    }

    /// The bundled solver: the `gatesat` binary's `sat` subcommand.
    pub fn bundled(gatesat: impl AsRef<Path>) -> Result<Self, SolveError> {
        Ok(SolverConfig::new(gatesat)?.with_args(["sat"]))
    }

    pub fn with_args<S: Into<String>>(mut self, args: impl IntoIterator<Item = S>) -> Self {
        self.args = args.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    /// `GATESAT_SOLVER`, then `kissat` or `cadical` on `PATH`, then the
    /// bundled `gatesat sat` found next to the running executable.
    pub fn discover() -> Result<Self, SolveError> {
        if let Some(s) = env::var_os("GATESAT_SOLVER") {
            let s = s.to_string_lossy().into_owned();
            let mut parts = s.split_whitespace();
            let exe = parts.next().ok_or(SolveError::NoSolver)?;
            return Ok(SolverConfig::new(exe)?.with_args(parts.map(str::to_string)));
        }
        for name in ["kissat", "cadical"] {
            if let Some(p) = on_path(name) {
                return SolverConfig::new(p);
            }
        }
        let me = env::current_exe().map_err(|_| SolveError::NoSolver)?;
        let bin = format!("gatesat{}", env::consts::EXE_SUFFIX);
        if me.file_name().is_some_and(|f| f == bin.as_str()) {
            return SolverConfig::bundled(me);
        }
        let mut dir = me.parent();
        for _ in 0..2 {
            let Some(d) = dir else { break };
            let candidate = d.join(&bin);
            if is_executable(&candidate) {
                return SolverConfig::bundled(candidate);
            }
            dir = d.parent();
        }
        Err(SolveError::NoSolver)
    }
}

/// Outcome of one solver process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawOutcome {
    Sat(Model),
    Unsat,
    Error(String),
    Timeout,
    Cancelled,
}

fn drain<R: Read + Send + 'static>(mut r: R) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

pub fn run_solver(cfg: &SolverConfig, cnf: &Path) -> RawOutcome {
    run_solver_cancellable(cfg, cnf, &|| false)
}

/// Runs the solver on `cnf`, polling `cancel` while it runs. Standard output
/// is kept next to the instance with the extension `.out`.
pub fn run_solver_cancellable(
    cfg: &SolverConfig,
    cnf: &Path,
    cancel: &dyn Fn() -> bool,
) -> RawOutcome {
    if !cnf.is_file() {
        return RawOutcome::Error(format!("{} does not exist", cnf.display()));
    }
    let mut child = match Command::new(&cfg.executable)
        .args(&cfg.args)
        .arg(cnf)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => {
            return RawOutcome::Error(format!("cannot run {}: {e}", cfg.executable.display()))
        }
    };
    let out = drain(child.stdout.take().expect("piped"));
    let err = drain(child.stderr.take().expect("piped"));
    let start = Instant::now();
    let mut pause = Duration::from_millis(1);
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) => {}
            Err(e) => {
                let _ = child.kill();
                let _ = child.wait();
                return RawOutcome::Error(format!("waiting for solver: {e}"));
            }
        }
        let timed_out = cfg.timeout.is_some_and(|t| start.elapsed() >= t);
        if timed_out || cancel() {
            let _ = child.kill();
            let _ = child.wait();
            break None;
        }
        thread::sleep(pause);
        pause = (pause * 2).min(Duration::from_millis(50));
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    let _ = fs::write(cnf.with_extension("out"), &stdout);
    let Some(status) = status else {
        return if cancel() {
            RawOutcome::Cancelled
        } else {
            RawOutcome::Timeout
        };
    };
    debug!("solver exited with {status} after {:?}", start.elapsed());
    match status.code() {
        Some(10) => match parse_model(&stdout) {
            Ok(m) => RawOutcome::Sat(m),
            Err(e) => RawOutcome::Error(format!("unparseable model: {e}")),
        },
        Some(20) => RawOutcome::Unsat,
        code => {
            let tail: String = stderr.lines().rev().take(5).collect::<Vec<_>>().join(" | ");
            RawOutcome::Error(format!("solver exited with {code:?}: {tail}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("step {0}: no gate selected")]
    NoGate(usize),
    #[error("step {step}: gates {gates:?} all selected")]
    SeveralGates { step: usize, gates: Vec<usize> },
    #[error("no phase selected")]
    NoPhase,
    #[error("phases {0:?} all selected")]
    SeveralPhases(Vec<u8>),
}

/// Reads the circuit and the matched phase multiple out of a model.
pub fn decode_circuit(model: &Model, vm: &VarMap) -> Result<(Circuit, u8), DecodeError> {
    let steps = decode_selectors(model, vm.selectors())?;
    let phase = if vm.phase_selectors().is_empty() {
        vm.phases()[0]
    } else {
        let on: Vec<u8> = vm
            .phases()
            .iter()
            .zip(vm.phase_selectors())
            .filter(|(_, &l)| model.lit_value(l) == Some(true))
            .map(|(&k, _)| k)
            .collect();
        match on.as_slice() {
            [k] => *k,
            [] => return Err(DecodeError::NoPhase),
            _ => return Err(DecodeError::SeveralPhases(on)),
        }
    };
    Ok((
        Circuit {
            n: vm.dim().trailing_zeros() as usize,
            steps,
        },
        phase,
    ))
}

/// One true selector per step, checked.
pub fn decode_selectors(
    model: &Model,
    selectors: &[Vec<crate::cnf::Lit>],
) -> Result<Vec<usize>, DecodeError> {
    selectors
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let on: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, &l)| model.lit_value(l) == Some(true))
                .map(|(j, _)| j)
                .collect();
            match on.as_slice() {
                [j] => Ok(*j),
                [] => Err(DecodeError::NoGate(i)),
                _ => Err(DecodeError::SeveralGates { step: i, gates: on }),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthesisOutcome {
    Sat { circuit: Circuit, phase: u8 },
    Unsat,
    Infeasible(Infeasibility),
    SolverError(String),
    Timeout,
    Cancelled,
}

impl fmt::Display for SynthesisOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthesisOutcome::Sat { .. } => f.write_str("SAT"),
            SynthesisOutcome::Unsat => f.write_str("UNSAT"),
            SynthesisOutcome::Infeasible(_) => f.write_str("INFEASIBLE"),
            SynthesisOutcome::SolverError(_) => f.write_str("ERROR"),
            SynthesisOutcome::Timeout => f.write_str("TIMEOUT"),
            SynthesisOutcome::Cancelled => f.write_str("CANCELLED"),
        }
    }
}

/// Sizes and timing of one solved instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunInfo {
    pub variables: u32,
    pub clauses: usize,
    pub elapsed: Duration,
}

/// Writes `f` as `<dir>/<stem>.cnf` and solves it.
pub fn solve_formula(
    f: &CnfFormula,
    cfg: &SolverConfig,
    dir: &Path,
    stem: &str,
    cancel: &dyn Fn() -> bool,
) -> Result<(RawOutcome, RunInfo), SolveError> {
    let path = dir.join(format!("{stem}.cnf"));
    f.write_dimacs(&path).map_err(|e| SolveError::Io {
        path: path.clone(),
        source: match e {
            crate::cnf::CnfError::Io(io) => io,
            other => std::io::Error::other(other.to_string()),
        },
    })?;
    let start = Instant::now();
    let raw = run_solver_cancellable(cfg, &path, cancel);
    Ok((
        raw,
        RunInfo {
            variables: f.var_count(),
            clauses: f.clause_count(),
            elapsed: start.elapsed(),
        },
    ))
}

/// Encodes, writes `instance_d<depth>.cnf` under `dir`, solves and decodes.
pub fn solve_problem(
    p: &SynthesisProblem,
    cfg: &SolverConfig,
    dir: &Path,
    cancel: &dyn Fn() -> bool,
) -> Result<(SynthesisOutcome, RunInfo), SolveError> {
    let (f, vm) = match encode_instance(p) {
        Ok(x) => x,
        Err(EncodeError::Infeasible(inf)) => {
            return Ok((SynthesisOutcome::Infeasible(inf), RunInfo::default()))
        }
        Err(e) => return Err(e.into()),
    };
    let (raw, info) = solve_formula(&f, cfg, dir, &format!("instance_d{}", p.depth), cancel)?;
    let outcome = match raw {
        RawOutcome::Sat(m) => {
            let (circuit, phase) = decode_circuit(&m, &vm)?;
            SynthesisOutcome::Sat { circuit, phase }
        }
        RawOutcome::Unsat => SynthesisOutcome::Unsat,
        RawOutcome::Error(e) => SynthesisOutcome::SolverError(e),
        RawOutcome::Timeout => SynthesisOutcome::Timeout,
        RawOutcome::Cancelled => SynthesisOutcome::Cancelled,
    };
    Ok((outcome, info))
}
