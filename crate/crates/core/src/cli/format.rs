// SPDX-License-Identifier: Apache-2.0

//! Target and circuit file formats.
//!
//! Targets are JSON with exact integer entries. A matrix target:
//!
//! ```json
//! {"kind": "matrix", "n": 1, "scale": 0,
//!  "entries": [[[1,0,0,0], [0,0,0,0]], [[0,0,0,0], [0,1,0,0]]]}
//! ```
//!
//! Entry `[a, b, c, d]` at row `r`, column `c` stands for
//! `(a + b·i + c·√2 + d·i√2) / 2^scale`. An optional `"columns"` list keeps
//! only those columns. A state mapping:
//!
//! ```json
//! {"kind": "states", "n": 1, "pairs": [
//!   {"input":  {"scale": 0, "entries": [[1,0,0,0], [0,0,0,0]]},
//!    "output": {"scale": 1, "entries": [[0,0,1,0], [0,0,1,0]]}}]}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gates::{builtin_gate, Gate, GateError, GateSet, PrimKind};
use crate::ring::{RingElem, ScaledMatrix};
use crate::solve::Circuit;
use crate::target::{mask_explicit, ScaledVector, StatePair, TargetError, TargetSpec};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON syntax error at line {line}, column {column}: {msg}")]
    Syntax {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    Field { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

fn field(path: &str, msg: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, FormatError> {
    v.get(key)
        .ok_or_else(|| field(path, format!("missing field `{key}`")))
}

fn int(v: &Value, path: &str) -> Result<i64, FormatError> {
    v.as_i64().ok_or_else(|| match v {
        Value::Number(n) => field(path, format!("expected an integer, found {n}")),
        Value::String(s) => field(path, format!("expected an integer, found the string {s:?}")),
        other => field(path, format!("expected an integer, found {other}")),
    })
}

fn uint(v: &Value, path: &str) -> Result<usize, FormatError> {
    let x = int(v, path)?;
    usize::try_from(x)
        .map_err(|_| field(path, format!("expected a non-negative integer, found {x}")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| field(path, "expected an array"))
}

fn elem(v: &Value, path: &str) -> Result<RingElem, FormatError> {
    let parts = array(v, path)?;
    if parts.len() != 4 {
        return Err(field(
            path,
            format!("expected [a, b, c, d], found {} numbers", parts.len()),
        ));
    }
    let mut c = [0i64; 4];
    for (k, p) in parts.iter().enumerate() {
        c[k] = int(p, &format!("{path}[{k}]"))?;
    }
    Ok(RingElem::from_components(c))
}

fn scale(v: &Value, path: &str) -> Result<u32, FormatError> {
    let s = uint(get(v, "scale", path)?, &format!("{path}.scale"))?;
    u32::try_from(s)
        .ok()
        .filter(|&s| s < 63)
        .ok_or_else(|| field(&format!("{path}.scale"), "scale too large"))
}

fn vector(v: &Value, path: &str, dim: usize) -> Result<ScaledVector, FormatError> {
    let k = scale(v, path)?;
    let ep = format!("{path}.entries");
    let entries = array(get(v, "entries", path)?, &ep)?;
    if entries.len() != dim {
        return Err(field(
            &ep,
            format!("expected {dim} entries, found {}", entries.len()),
        ));
    }
    let e = entries
        .iter()
        .enumerate()
        .map(|(i, x)| elem(x, &format!("{ep}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScaledVector::new(e, k))
}

fn qubits(v: &Value) -> Result<usize, FormatError> {
    let n = uint(get(v, "n", "$")?, "$.n")?;
    if n == 0 || n > 12 {
        return Err(field("$.n", format!("qubit count {n} outside 1..=12")));
    }
    Ok(n)
}

/// Reads a target file.
pub fn parse_target(text: &str) -> Result<TargetSpec, FormatError> {
    let v = parse_json(text)?;
    let kind = match v.get("kind") {
        None => "matrix",
        Some(k) => k
            .as_str()
            .ok_or_else(|| field("$.kind", "expected a string"))?,
    };
    let n = qubits(&v)?;
    let dim = 1usize << n;
    match kind {
        "matrix" => {
            let k = scale(&v, "$")?;
            let rows = array(get(&v, "entries", "$")?, "$.entries")?;
            if rows.len() != dim {
                return Err(field(
                    "$.entries",
                    format!("expected {dim} rows for n={n}, found {}", rows.len()),
                ));
            }
            let mut grid = Vec::with_capacity(dim);
            for (r, row) in rows.iter().enumerate() {
                let rp = format!("$.entries[{r}]");
                let cols = array(row, &rp)?;
                if cols.len() != dim {
                    return Err(field(
                        &rp,
                        format!("expected {dim} columns, found {}", cols.len()),
                    ));
                }
                grid.push(
                    cols.iter()
                        .enumerate()
                        .map(|(c, x)| elem(x, &format!("{rp}[{c}]")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            let m = ScaledMatrix::from_rows(grid, k).map_err(TargetError::from)?;
            match v.get("columns") {
                None => Ok(TargetSpec::matrix(m)?),
                Some(cols) => {
                    let kept = array(cols, "$.columns")?
                        .iter()
                        .enumerate()
                        .map(|(i, c)| uint(c, &format!("$.columns[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(mask_explicit(m, kept)?)
                }
            }
        }
        "states" => {
            let pairs = array(get(&v, "pairs", "$")?, "$.pairs")?;
            let pairs = pairs
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let pp = format!("$.pairs[{i}]");
                    Ok(StatePair {
                        input: vector(get(p, "input", &pp)?, &format!("{pp}.input"), dim)?,
                        output: vector(get(p, "output", &pp)?, &format!("{pp}.output"), dim)?,
                    })
                })
                .collect::<Result<Vec<_>, FormatError>>()?;
            Ok(TargetSpec::states(pairs)?)
        }
        other => Err(field(
            "$.kind",
            format!("unknown kind `{other}` (matrix or states)"),
        )),
    }
}

fn elem_json(e: &RingElem) -> Value {
    json!(e.components())
}

fn vector_json(v: &ScaledVector) -> Value {
    json!({"scale": v.scale, "entries": v.entries.iter().map(elem_json).collect::<Vec<_>>()})
}

fn matrix_json(m: &ScaledMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array(m.row(r).iter().map(elem_json).collect()))
        .collect();
    json!({"kind": "matrix", "n": m.rows().trailing_zeros(), "scale": m.scale(), "entries": rows})
}

/// Serializes a target in the format read by [`parse_target`].
pub fn write_target(t: &TargetSpec) -> String {
    let v = match t {
        TargetSpec::Matrix(m) => matrix_json(m),
        TargetSpec::Masked {
            matrix,
            kept_columns,
        } => {
            let mut v = matrix_json(matrix);
            v["columns"] = json!(kept_columns);
            v
        }
        TargetSpec::States(pairs) => json!({
            "kind": "states",
            "n": t.n_qubits(),
            "pairs": pairs
                .iter()
                .map(|p| json!({"input": vector_json(&p.input), "output": vector_json(&p.output)}))
                .collect::<Vec<_>>(),
        }),
    };
    serde_json::to_string_pretty(&v).expect("JSON values serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub index: Option<usize>,
    pub name: String,
    pub operands: Vec<usize>,
}

/// Machine-readable synthesis result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub phase: u8,
    #[serde(default)]
    pub optimal: bool,
    #[serde(default)]
    pub unsat_below: Vec<usize>,
    pub gates: Vec<GateJson>,
}

/// Optimality evidence attached to an emitted circuit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    pub phase: u8,
    pub optimal: bool,
    pub unsat_below: Vec<usize>,
}

pub fn circuit_json(c: &Circuit, gs: &GateSet, ev: &Evidence) -> CircuitJson {
    CircuitJson {
        n: c.n,
        d: c.len(),
        phase: ev.phase,
        optimal: ev.optimal,
        unsat_below: ev.unsat_below.clone(),
        gates: c
            .steps
            .iter()
            .map(|&j| {
                let g = gs.gate(j);
                GateJson {
                    index: Some(j),
                    name: g.name().to_string(),
                    operands: g.operands.clone(),
                }
            })
            .collect(),
    }
}

/// One gate per line, `<name> q<i>[,q<j>…]`, first gate first.
pub fn circuit_text(c: &Circuit, gs: &GateSet) -> String {
    c.steps
        .iter()
        .map(|&j| format!("{}\n", gs.gate(j).label()))
        .collect()
}

/// Reads a circuit written as JSON or as text lines, and returns it with a
/// gate set made of exactly the gates it uses.
pub fn parse_circuit(
    text: &str,
    n_default: Option<usize>,
) -> Result<(Circuit, GateSet), FormatError> {
    let trimmed = text.trim_start();
    let (n, gates): (usize, Vec<(PrimKind, Vec<usize>)>) = if trimmed.starts_with('{') {
        let cj: CircuitJson = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let gates = cj
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| {
                g.name
                    .parse::<PrimKind>()
                    .map(|k| (k, g.operands.clone()))
                    .map_err(|e| field(&format!("$.gates[{i}].name"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        (cj.n, gates)
    } else {
        let mut gates = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| FormatError::Line { line: no + 1, msg };
            let (name, ops) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let kind: PrimKind = name.parse().map_err(|e: GateError| err(e.to_string()))?;
            let ops = ops
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.trim_start_matches('q')
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad operand `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            gates.push((kind, ops));
        }
        let n = match n_default {
            Some(n) => n,
            None => gates
                .iter()
                .flat_map(|(_, o)| o.iter().map(|q| q + 1))
                .max()
                .unwrap_or(1),
        };
        (n, gates)
    };
    let mut uniq: Vec<Gate> = Vec::new();
    let mut steps = Vec::with_capacity(gates.len());
    for (kind, ops) in gates {
        let g = builtin_gate(kind, &ops, n)?;
        let j = match uniq.iter().position(|u| u.expanded == g.expanded) {
            Some(j) => j,
            None => {
                uniq.push(g);
                uniq.len() - 1
            }
        };
        steps.push(j);
    }
    if uniq.is_empty() {
        uniq.push(builtin_gate(PrimKind::X, &[0], n)?);
    }
    Ok((Circuit { n, steps }, GateSet::new(n, uniq)?))
}
