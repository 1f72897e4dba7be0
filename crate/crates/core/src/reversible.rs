// SPDX-License-Identifier: Apache-2.0

//! Synthesis of classical reversible circuits over NOT, CNOT and Toffoli.
//!
//! Only basis states are tracked: each specified input row gets one boolean
//! per wire per step, and the gates become XOR constraints guarded by their
//! selectors. Wire 0 is qubit 0, the leftmost character of a truth-table row.

use std::collections::BTreeMap;
use std::fmt;

use log::warn;
use thiserror::Error;

use crate::cnf::{exactly_one, CnfFormula, Lit};
use crate::gates::{GateSet, PrimKind};
use crate::search::{deepen, ArtifactDir, SearchError, SearchOptions, SearchOutcome, Step};
use crate::solve::{decode_selectors, solve_formula, Circuit, RawOutcome, RunInfo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReversibleError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("input {0} is given two different outputs")]
    Inconsistent(String),
    #[error("the table has no rows")]
    Empty,
    #[error("row has {got} bits, expected {expected}")]
    Width { expected: usize, got: usize },
    #[error("gate {0} is not NOT, CNOT or TOFFOLI")]
    NotClassical(String),
    #[error("gate set acts on {gates} wires, table on {table}")]
    WireMismatch { gates: usize, table: usize },
    #[error("depth must be at least 1")]
    ZeroDepth,
}

/// Input rows with (possibly partial) outputs. `None` marks a don't-care bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTableSpec {
    n: usize,
    rows: BTreeMap<Vec<bool>, Vec<Option<bool>>>,
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl TruthTableSpec {
    /// Builds a table, merging duplicate rows and rejecting contradictory ones.
    pub fn new(
        n: usize,
        rows: impl IntoIterator<Item = (Vec<bool>, Vec<Option<bool>>)>,
    ) -> Result<Self, ReversibleError> {
        let mut map: BTreeMap<Vec<bool>, Vec<Option<bool>>> = BTreeMap::new();
        for (input, output) in rows {
            for len in [input.len(), output.len()] {
                if len != n {
                    return Err(ReversibleError::Width {
                        expected: n,
                        got: len,
                    });
                }
            }
            match map.get_mut(&input) {
                None => {
                    map.insert(input, output);
                }
                Some(prev) => {
                    for (p, o) in prev.iter_mut().zip(output) {
                        match (*p, o) {
                            (Some(a), Some(b)) if a != b => {
                                return Err(ReversibleError::Inconsistent(bits_to_string(&input)))
                            }
                            (None, o) => *p = o,
                            _ => {}
                        }
                    }
                }
            }
        }
        if map.is_empty() {
            return Err(ReversibleError::Empty);
        }
        let spec = TruthTableSpec { n, rows: map };
        if let Some((a, b)) = spec.injectivity_clash() {
            warn!("inputs {a} and {b} map to the same output; no reversible circuit can realize this table");
        }
        Ok(spec)
    }

    /// Parses lines `<input bits> -> <output bits>`, `-` for don't-care, `#` comments.
    pub fn parse(text: &str) -> Result<Self, ReversibleError> {
        let mut n = None;
        let mut rows = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ReversibleError::Parse { line: no + 1, msg };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err("expected `<input> -> <output>`".into()))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            let input = lhs
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(err(format!("bad input bit `{other}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let output = rhs
                .chars()
                .map(|c| match c {
                    '0' => Ok(Some(false)),
                    '1' => Ok(Some(true)),
                    '-' => Ok(None),
                    other => Err(err(format!("bad output bit `{other}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let w = *n.get_or_insert(input.len());
            if input.len() != w || output.len() != w || w == 0 {
                return Err(err(format!(
                    "row has {} -> {} bits, expected {w} -> {w}",
                    input.len(),
                    output.len()
                )));
            }
            rows.push((input, output));
        }
        TruthTableSpec::new(n.unwrap_or(0), rows)
    }

    /// Full table of a permutation of basis indices on `n` wires.
    pub fn from_permutation(
        n: usize,
        perm: impl Fn(usize) -> usize,
    ) -> Result<Self, ReversibleError> {
        let rows = (0..1usize << n).map(|x| {
            let y = perm(x);
            (
                index_bits(x, n),
                index_bits(y, n).into_iter().map(Some).collect(),
            )
        });
        TruthTableSpec::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Vec<bool>, &Vec<Option<bool>>)> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Two inputs whose fully specified outputs coincide.
    fn injectivity_clash(&self) -> Option<(String, String)> {
        let mut seen: BTreeMap<Vec<bool>, &Vec<bool>> = BTreeMap::new();
        for (input, output) in &self.rows {
            let Some(full) = output.iter().copied().collect::<Option<Vec<bool>>>() else {
                continue;
            };
            if let Some(prev) = seen.insert(full, input) {
                return Some((bits_to_string(prev), bits_to_string(input)));
            }
        }
        None
    }

    /// Copy of the table with one output bit fixed.
    pub fn with_output_bit(&self, input: &[bool], wire: usize, value: bool) -> Option<Self> {
        let mut t = self.clone();
        let out = t.rows.get_mut(input)?;
        *out.get_mut(wire)? = Some(value);
        Some(t)
    }
}

impl fmt::Display for TruthTableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in &self.rows {
            let out: String = o
                .iter()
                .map(|b| match b {
                    Some(true) => '1',
                    Some(false) => '0',
                    None => '-',
                })
                .collect();
            writeln!(f, "{} -> {out}", bits_to_string(i))?;
        }
        Ok(())
    }
}

/// Bits of basis index `x`, wire 0 first (most significant).
pub fn index_bits(x: usize, n: usize) -> Vec<bool> {
    (0..n).map(|q| (x >> (n - 1 - q)) & 1 == 1).collect()
}

pub fn bits_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn check_gate_set(gs: &GateSet) -> Result<(), ReversibleError> {
    for g in gs.gates() {
        if !matches!(g.kind(), PrimKind::X | PrimKind::Cnot | PrimKind::Toffoli) {
            return Err(ReversibleError::NotClassical(g.label()));
        }
    }
    Ok(())
}

/// Applies one classical gate to a bit-string in place.
pub fn apply_classical(gs: &GateSet, j: usize, bits: &mut [bool]) {
    let g = gs.gate(j);
    let ops = &g.operands;
    match g.kind() {
        PrimKind::X => bits[ops[0]] ^= true,
        PrimKind::Cnot => bits[ops[1]] ^= bits[ops[0]],
        PrimKind::Toffoli => bits[ops[2]] ^= bits[ops[0]] && bits[ops[1]],
        other => panic!("{} is not a classical reversible gate", other.name()),
    }
}

pub fn simulate_bits(circuit: &Circuit, gs: &GateSet, input: &[bool]) -> Vec<bool> {
    let mut b = input.to_vec();
    for &j in &circuit.steps {
        apply_classical(gs, j, &mut b);
    }
    b
}

/// First row the circuit gets wrong, if any.
pub fn check_table(circuit: &Circuit, gs: &GateSet, spec: &TruthTableSpec) -> Result<(), String> {
    for (input, output) in spec.rows() {
        let got = simulate_bits(circuit, gs, input);
        let ok = got
            .iter()
            .zip(output)
            .all(|(g, o)| o.is_none_or(|o| o == *g));
        if !ok {
            return Err(format!(
                "row {} gives {}",
                bits_to_string(input),
                bits_to_string(&got)
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ReversibleVarMap {
    selectors: Vec<Vec<Lit>>,
    /// `[row][layer][wire]`, layer 0 holding the input.
    wires: Vec<Vec<Vec<Lit>>>,
}

impl ReversibleVarMap {
    pub fn selector(&self, step: usize, gate: usize) -> Lit {
        self.selectors[step][gate]
    }

    pub fn selectors(&self) -> &[Vec<Lit>] {
        &self.selectors
    }

    /// Wire `q` of specified row `t` after `layer` gates.
    pub fn wire(&self, t: usize, layer: usize, q: usize) -> Lit {
        self.wires[t][layer][q]
    }
}

/// `s → (out ↔ a ⊕ b)`.
fn guarded_xor(f: &mut CnfFormula, s: Lit, out: Lit, a: Lit, b: Lit) {
    f.add_clause(&[!s, !out, a, b]);
    f.add_clause(&[!s, !out, !a, !b]);
    f.add_clause(&[!s, out, !a, b]);
    f.add_clause(&[!s, out, a, !b]);
}

/// `s → (out ↔ a)`.
fn guarded_copy(f: &mut CnfFormula, s: Lit, out: Lit, a: Lit) {
    f.add_clause(&[!s, !out, a]);
    f.add_clause(&[!s, out, !a]);
}

pub fn encode_reversible(
    spec: &TruthTableSpec,
    gs: &GateSet,
    d: usize,
) -> Result<(CnfFormula, ReversibleVarMap), ReversibleError> {
    if d == 0 {
        return Err(ReversibleError::ZeroDepth);
    }
    if gs.n() != spec.n {
        return Err(ReversibleError::WireMismatch {
            gates: gs.n(),
            table: spec.n,
        });
    }
    check_gate_set(gs)?;
    let n = spec.n;
    let mut f = CnfFormula::new();
    let selectors: Vec<Vec<Lit>> = (0..d)
        .map(|_| (0..gs.len()).map(|_| f.new_var()).collect())
        .collect();
    for row in &selectors {
        exactly_one(&mut f, row).expect("gate set is non-empty");
    }
    let mut wires = Vec::with_capacity(spec.len());
    for (input, output) in spec.rows() {
        let layers: Vec<Vec<Lit>> = (0..=d)
            .map(|_| (0..n).map(|_| f.new_var()).collect())
            .collect();
        for (q, &b) in input.iter().enumerate() {
            f.add_clause(&[if b { layers[0][q] } else { !layers[0][q] }]);
        }
        for (q, o) in output.iter().enumerate() {
            if let Some(b) = o {
                f.add_clause(&[if *b { layers[d][q] } else { !layers[d][q] }]);
            }
        }
        for i in 0..d {
            let (cur, nxt) = (&layers[i], &layers[i + 1]);
            for (j, gate) in gs.gates().iter().enumerate() {
                let s = selectors[i][j];
                let ops = &gate.operands;
                let tgt = *ops.last().expect("gates have operands");
                for q in (0..n).filter(|&q| q != tgt) {
                    guarded_copy(&mut f, s, nxt[q], cur[q]);
                }
                match gate.kind() {
                    PrimKind::X => {
                        let one = f.true_lit();
                        guarded_xor(&mut f, s, nxt[tgt], cur[tgt], one);
                    }
                    PrimKind::Cnot => guarded_xor(&mut f, s, nxt[tgt], cur[tgt], cur[ops[0]]),
                    PrimKind::Toffoli => {
                        let (a, b) = (cur[ops[0]], cur[ops[1]]);
                        let and = f.new_var();
                        f.add_clause(&[!and, a]);
                        f.add_clause(&[!and, b]);
                        f.add_clause(&[and, !a, !b]);
                        guarded_xor(&mut f, s, nxt[tgt], cur[tgt], and);
                    }
                    _ => unreachable!("checked above"),
                }
            }
        }
        wires.push(layers);
    }
    Ok((f, ReversibleVarMap { selectors, wires }))
}

/// Smallest reversible circuit realizing `spec`, verified by simulation on
/// every specified row.
pub fn synth_reversible_min(
    spec: &TruthTableSpec,
    gs: &GateSet,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if gs.n() != spec.n {
        return Err(SearchError::Invalid(
            ReversibleError::WireMismatch {
                gates: gs.n(),
                table: spec.n,
            }
            .to_string(),
        ));
    }
    check_gate_set(gs).map_err(|e| SearchError::Invalid(e.to_string()))?;
    let identity = Circuit {
        n: spec.n,
        steps: Vec::new(),
    };
    if opts.d_min <= 1 && check_table(&identity, gs, spec).is_ok() {
        return Ok(SearchOutcome::Found(crate::search::OptimalResult {
            circuit: identity,
            phase: 0,
            minimal_d: 0,
            record: Vec::new(),
            optimal: true,
        }));
    }
    let dir = ArtifactDir::open(&opts.artifacts)?;
    let solve_at =
        |d: usize, cancel: &dyn Fn() -> bool| -> Result<(Step<Circuit>, RunInfo), SearchError> {
            let (f, vm) =
                encode_reversible(spec, gs, d).map_err(|e| SearchError::Invalid(e.to_string()))?;
            let (raw, run) = solve_formula(
                &f,
                &opts.solver,
                dir.path(),
                &format!("instance_d{d}"),
                cancel,
            )?;
            let step = match raw {
                RawOutcome::Sat(m) => {
                    let steps = decode_selectors(&m, vm.selectors())
                        .map_err(crate::solve::SolveError::from)?;
                    let c = Circuit { n: spec.n, steps };
                    check_table(&c, gs, spec)
                        .map_err(|detail| SearchError::Verification { d, detail })?;
                    Step::Sat(c, 0)
                }
                RawOutcome::Unsat => Step::Unsat,
                RawOutcome::Error(e) => Step::Error(e),
                RawOutcome::Timeout => Step::Timeout,
                RawOutcome::Cancelled => Step::Cancelled,
            };
            Ok((step, run))
        };
    let mut out = deepen(opts.d_min.max(1), opts.d_max, opts.jobs, true, &solve_at)?;
    if let SearchOutcome::Found(r) = &mut out {
        r.optimal &= opts.d_min <= 1;
    }
    Ok(out)
}
