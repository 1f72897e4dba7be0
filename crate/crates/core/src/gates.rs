// SPDX-License-Identifier: Apache-2.0

//! Clifford+T gate library and gate-set construction.
//!
//! Every gate is stored doubled (`2·G`, scale 1) so its entries lie in
//! ℤ[√2, i]. Qubit 0 is the most significant bit of a computational-basis index,
//! and the first operand of a primitive is the most significant bit of its local
//! index (so `CNOT` operands are `[control, target]`).

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ring::{RingElem, ScaledMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("{name} takes {expected} operand(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("operand {operand} out of range for {n} qubit(s)")]
    OperandOutOfRange { operand: usize, n: usize },
    #[error("duplicate operand {0}")]
    DuplicateOperand(usize),
    #[error("gate set is empty")]
    EmptyGateSet,
    #[error("gate {0} duplicates an earlier gate")]
    DuplicateGate(String),
    #[error("gate {gate} acts on {got} qubit(s), gate set has {n}")]
    QubitCountMismatch { gate: String, n: usize, got: usize },
    #[error("unsupported qubit count {0}")]
    QubitCount(usize),
}

/// Built-in primitives. Adjoints are primitives of their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cnot,
    Cz,
    Toffoli,
}

impl PrimKind {
    pub const ALL: [PrimKind; 11] = [
        PrimKind::X,
        PrimKind::Y,
        PrimKind::Z,
        PrimKind::H,
        PrimKind::S,
        PrimKind::Sdg,
        PrimKind::T,
        PrimKind::Tdg,
        PrimKind::Cnot,
        PrimKind::Cz,
        PrimKind::Toffoli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrimKind::X => "X",
            PrimKind::Y => "Y",
            PrimKind::Z => "Z",
            PrimKind::H => "H",
            PrimKind::S => "S",
            PrimKind::Sdg => "Sdg",
            PrimKind::T => "T",
            PrimKind::Tdg => "Tdg",
            PrimKind::Cnot => "CNOT",
            PrimKind::Cz => "CZ",
            PrimKind::Toffoli => "TOFFOLI",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            PrimKind::Cnot | PrimKind::Cz => 2,
            PrimKind::Toffoli => 3,
            _ => 1,
        }
    }

    /// Whether the gate maps computational-basis states to basis states
    /// without phases (NOT, CNOT, Toffoli).
    pub fn is_classical_reversible(self) -> bool {
        matches!(self, PrimKind::X | PrimKind::Cnot | PrimKind::Toffoli)
    }

    /// `2·G` on the primitive's own operands.
    pub fn doubled_matrix(self) -> ScaledMatrix {
        let two = RingElem::from_int(2);
        let z = RingElem::ZERO;
        let r2 = RingElem::SQRT2;
        let rows = match self {
            PrimKind::X => vec![vec![z, two], vec![two, z]],
            PrimKind::Y => vec![
                vec![z, RingElem::new(0, -2, 0, 0)],
                vec![RingElem::new(0, 2, 0, 0), z],
            ],
            PrimKind::Z => vec![vec![two, z], vec![z, -two]],
            PrimKind::H => vec![vec![r2, r2], vec![r2, -r2]],
            PrimKind::S => vec![vec![two, z], vec![z, RingElem::new(0, 2, 0, 0)]],
            PrimKind::Sdg => vec![vec![two, z], vec![z, RingElem::new(0, -2, 0, 0)]],
            PrimKind::T => vec![vec![two, z], vec![z, RingElem::new(0, 0, 1, 1)]],
            PrimKind::Tdg => vec![vec![two, z], vec![z, RingElem::new(0, 0, 1, -1)]],
            PrimKind::Cnot => permutation_rows(4, &[0, 1, 3, 2]),
            PrimKind::Cz => {
                let mut rows = permutation_rows(4, &[0, 1, 2, 3]);
                rows[3][3] = -two;
                rows
            }
            PrimKind::Toffoli => permutation_rows(8, &[0, 1, 2, 3, 4, 5, 7, 6]),
        };
        ScaledMatrix::from_rows(rows, 1).expect("built-in gate matrices are square")
    }
}

/// Rows of `2·P` where row `r` has its `2` in column `perm[r]`.
fn permutation_rows(dim: usize, perm: &[usize]) -> Vec<Vec<RingElem>> {
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    if perm[r] == c {
                        RingElem::from_int(2)
                    } else {
                        RingElem::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for PrimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PrimKind {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        let kind = match up.as_str() {
            "X" | "NOT" => PrimKind::X,
            "Y" => PrimKind::Y,
            "Z" => PrimKind::Z,
            "H" => PrimKind::H,
            "S" => PrimKind::S,
            "SDG" | "SDAG" | "S_DAG" => PrimKind::Sdg,
            "T" => PrimKind::T,
            "TDG" | "TDAG" | "T_DAG" => PrimKind::Tdg,
            "CNOT" | "CX" => PrimKind::Cnot,
            "CZ" => PrimKind::Cz,
            "TOFFOLI" | "CCX" | "CCNOT" => PrimKind::Toffoli,
            _ => return Err(GateError::UnknownGate(s.trim().to_string())),
        };
        Ok(kind)
    }
}

/// A primitive gate: name, arity and exact doubled matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatePrim {
    pub kind: PrimKind,
    pub doubled_matrix: ScaledMatrix,
}

impl GatePrim {
    pub fn new(kind: PrimKind) -> Self {
        GatePrim {
            kind,
            doubled_matrix: kind.doubled_matrix(),
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }
}

/// A primitive placed on concrete qubits of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub prim: GatePrim,
    pub operands: Vec<usize>,
    pub expanded: ScaledMatrix,
}

impl Gate {
    pub fn kind(&self) -> PrimKind {
        self.prim.kind
    }

    pub fn name(&self) -> &'static str {
        self.prim.name()
    }

    /// Qubit count of the register the gate acts on.
    pub fn n(&self) -> usize {
        self.expanded.rows().trailing_zeros() as usize
    }

    /// Non-zero entries `(column, value)` of row `r` of `2·G`.
    pub fn row_support(&self, r: usize) -> Vec<(usize, RingElem)> {
        self.expanded
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, *v))
            .collect()
    }

    /// Label like `CNOT q0,q1`.
    pub fn label(&self) -> String {
        let ops: Vec<String> = self.operands.iter().map(|q| format!("q{q}")).collect();
        format!("{} {}", self.name(), ops.join(","))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

const MAX_QUBITS: usize = 12;

fn check_operands(kind: PrimKind, operands: &[usize], n: usize) -> Result<(), GateError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(GateError::QubitCount(n));
    }
    if operands.len() != kind.arity() {
        return Err(GateError::Arity {
            name: kind.name().to_string(),
            expected: kind.arity(),
            got: operands.len(),
        });
    }
    let mut seen = HashSet::new();
    for &q in operands {
        if q >= n {
            return Err(GateError::OperandOutOfRange { operand: q, n });
        }
        if !seen.insert(q) {
            return Err(GateError::DuplicateOperand(q));
        }
    }
    Ok(())
}

/// Bits of basis index `idx` at the given qubits, first qubit most significant.
pub(crate) fn local_index(idx: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
}

/// Tensor extension of a primitive's doubled matrix to `n` qubits, identity on
/// the other qubits. The result stays at scale 1.
pub fn expand_to_n(
    prim: &GatePrim,
    operands: &[usize],
    n: usize,
) -> Result<ScaledMatrix, GateError> {
    check_operands(prim.kind, operands, n)?;
    let dim = 1usize << n;
    let mut op_mask = 0usize;
    for &q in operands {
        op_mask |= 1 << (n - 1 - q);
    }
    let mut out = ScaledMatrix::zeros(dim, dim, prim.doubled_matrix.scale());
    for r in 0..dim {
        let lr = local_index(r, operands, n);
        for lc in 0..prim.doubled_matrix.cols() {
            let v = prim.doubled_matrix.get(lr, lc);
            if v.is_zero() {
                continue;
            }
            // Column agrees with r on every non-operand bit.
            let mut c = r & !op_mask;
            for (k, &q) in operands.iter().enumerate() {
                let bit = (lc >> (operands.len() - 1 - k)) & 1;
                c |= bit << (n - 1 - q);
            }
            out.set(r, c, v);
        }
    }
    Ok(out)
}

pub fn builtin_gate(kind: PrimKind, operands: &[usize], n: usize) -> Result<Gate, GateError> {
    let prim = GatePrim::new(kind);
    let expanded = expand_to_n(&prim, operands, n)?;
    Ok(Gate {
        prim,
        operands: operands.to_vec(),
        expanded,
    })
}

/// Parses `NAME` or `NAME@q0:q1` into a kind and optional explicit operands.
pub fn parse_gate_token(token: &str) -> Result<(PrimKind, Option<Vec<usize>>), GateError> {
    match token.split_once('@') {
        None => Ok((token.parse()?, None)),
        Some((name, ops)) => {
            let kind: PrimKind = name.parse()?;
            let operands = ops
                .split(':')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| GateError::UnknownGate(token.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((kind, Some(operands)))
        }
    }
}

/// Violation of the row structure required by the width bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("gate {gate}: row {row} violates the width-bound structure ({detail})")]
pub struct BoundViolation {
    pub gate: String,
    pub row: usize,
    pub detail: String,
}

fn single_allowed(v: &RingElem) -> bool {
    matches!(
        v.components(),
        [2, 0, 0, 0] | [-2, 0, 0, 0] | [0, 2, 0, 0] | [0, -2, 0, 0]
    ) || (v.a == 0 && v.b == 0 && v.c.abs() == 1 && v.d.abs() == 1)
}

fn pair_allowed(v: &RingElem) -> bool {
    matches!(
        v.components(),
        [0, 0, 1, 0] | [0, 0, -1, 0] | [0, 0, 0, 1] | [0, 0, 0, -1]
    ) || (v.c == 0 && v.d == 0 && v.a.abs() == 1 && v.b.abs() == 1)
}

/// Checks that every row of `2·G` has either one non-zero in
/// `{±2, ±2i, ±√2±i√2}` or two non-zeros in `{±√2, ±i√2, ±1±i}`.
pub fn validate_gate_for_bound(g: &Gate) -> Result<(), BoundViolation> {
    validate_matrix_for_bound(&g.label(), &g.expanded)
}

pub fn validate_matrix_for_bound(label: &str, m: &ScaledMatrix) -> Result<(), BoundViolation> {
    let violation = |row: usize, detail: String| BoundViolation {
        gate: label.to_string(),
        row,
        detail,
    };
    if m.scale() != 1 {
        return Err(violation(
            0,
            format!("matrix scale is {}, expected 1", m.scale()),
        ));
    }
    for r in 0..m.rows() {
        let nz: Vec<(usize, RingElem)> = m
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, *v))
            .collect();
        match nz.as_slice() {
            [(c, v)] if !single_allowed(v) => {
                return Err(violation(r, format!("single entry {v:?} at column {c}")))
            }
            [(c1, v1), (c2, v2)] => {
                for (c, v) in [(c1, v1), (c2, v2)] {
                    if !pair_allowed(v) {
                        return Err(violation(r, format!("paired entry {v:?} at column {c}")));
                    }
                }
            }
            [_] => {}
            [] => return Err(violation(r, "empty row".into())),
            more => return Err(violation(r, format!("{} non-zero entries", more.len()))),
        }
    }
    Ok(())
}

/// Indexed gate set; index `j` is the gate identifier used by the encoders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateSet {
    n: usize,
    gates: Vec<Gate>,
}

impl GateSet {
    /// Builds a gate set from explicit gates, rejecting duplicates.
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self, GateError> {
        if gates.is_empty() {
            return Err(GateError::EmptyGateSet);
        }
        let mut seen = HashSet::new();
        for g in &gates {
            if g.n() != n {
                return Err(GateError::QubitCountMismatch {
                    gate: g.label(),
                    n,
                    got: g.n(),
                });
            }
            if !seen.insert(g.expanded.clone()) {
                return Err(GateError::DuplicateGate(g.label()));
            }
        }
        Ok(GateSet { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, j: usize) -> &Gate {
        &self.gates[j]
    }

    /// Indices of gates whose primitive is one of `kinds`.
    pub fn indices_of(&self, kinds: &[PrimKind]) -> Vec<usize> {
        (0..self.gates.len())
            .filter(|&j| kinds.contains(&self.gates[j].kind()))
            .collect()
    }

    /// Index of the gate with the given primitive and operands.
    pub fn find(&self, kind: PrimKind, operands: &[usize]) -> Option<usize> {
        self.gates
            .iter()
            .position(|g| g.kind() == kind && g.operands == operands)
    }

    pub fn validate_for_bound(&self) -> Result<(), BoundViolation> {
        self.gates.iter().try_for_each(validate_gate_for_bound)
    }
}

/// Undirected qubit couplings. A multi-qubit placement is allowed when every
/// pair of its operands is coupled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Connectivity {
    edges: BTreeSet<(usize, usize)>,
}

impl Connectivity {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Connectivity {
            edges: pairs
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
        }
    }

    pub fn allows(&self, operands: &[usize]) -> bool {
        operands.iter().enumerate().all(|(k, &a)| {
            operands[k + 1..]
                .iter()
                .all(|&b| self.edges.contains(&(a.min(b), a.max(b))))
        })
    }
}

/// All ordered tuples of `k` distinct qubits below `n`, lexicographically.
fn placements(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in 0..n {
            if !cur.contains(&q) {
                cur.push(q);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Every placement of each primitive (in the given order) on allowed operand
/// tuples. Placements whose matrix equals an earlier one (e.g. `CZ` with swapped
/// operands) are skipped.
pub fn build_gate_set(
    n: usize,
    prims: &[PrimKind],
    connectivity: Option<&Connectivity>,
) -> Result<GateSet, GateError> {
    GateSet::new(n, placed_gates(n, prims, connectivity)?)
}

fn placed_gates(
    n: usize,
    prims: &[PrimKind],
    connectivity: Option<&Connectivity>,
) -> Result<Vec<Gate>, GateError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(GateError::QubitCount(n));
    }
    let mut gates = Vec::new();
    let mut seen = HashSet::new();
    for &kind in prims {
        for ops in placements(n, kind.arity()) {
            if ops.len() > 1 && connectivity.is_some_and(|c| !c.allows(&ops)) {
                continue;
            }
            let g = builtin_gate(kind, &ops, n)?;
            if seen.insert(g.expanded.clone()) {
                gates.push(g);
            }
        }
    }
    Ok(gates)
}

/// Gate set from tokens such as `H`, `T`, `CNOT@0:1`. Bare names expand to all
/// placements; explicit placements are taken as given.
pub fn gate_set_from_tokens(
    n: usize,
    tokens: &[&str],
    connectivity: Option<&Connectivity>,
) -> Result<GateSet, GateError> {
    let mut gates: Vec<Gate> = Vec::new();
    for tok in tokens.iter().map(|t| t.trim()).filter(|t| !t.is_empty()) {
        match parse_gate_token(tok)? {
            (kind, Some(ops)) => gates.push(builtin_gate(kind, &ops, n)?),
            (kind, None) => {
                for g in placed_gates(n, &[kind], connectivity)? {
                    if !gates.iter().any(|h| h.expanded == g.expanded) {
                        gates.push(g);
                    }
                }
            }
        }
    }
    GateSet::new(n, gates)
}
