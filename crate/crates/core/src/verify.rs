// SPDX-License-Identifier: Apache-2.0

//! Solver-independent checking of decoded circuits in exact ring arithmetic.

use std::fmt;

use crate::gates::{Gate, GateSet};
use crate::ring::{RingElem, RingError, ScaledMatrix, ScaledRing};
use crate::solve::Circuit;
use crate::target::{Column, TargetSpec};

/// Product of the circuit's doubled gates, first step applied first, at scale `d`.
pub fn simulate_exact(circuit: &Circuit, gate_set: &GateSet) -> Result<ScaledMatrix, RingError> {
    let mut acc = ScaledMatrix::identity(gate_set.dim());
    for &j in &circuit.steps {
        acc = gate_set.gate(j).expanded.checked_mul(&acc)?;
    }
    Ok(acc)
}

/// `2·G · v` using the gate's sparse rows.
pub fn apply_doubled(gate: &Gate, v: &[RingElem]) -> Result<Vec<RingElem>, RingError> {
    (0..v.len())
        .map(|r| {
            gate.row_support(r)
                .into_iter()
                .try_fold(RingElem::ZERO, |acc, (c, g)| {
                    acc.checked_add(&g.checked_mul(&v[c])?)
                })
        })
        .collect()
}

/// Circuit output on a column input, as `(entries, scale)`.
pub fn simulate_column(
    circuit: &Circuit,
    gate_set: &GateSet,
    col: &Column,
) -> Result<Vec<ScaledRing>, RingError> {
    let mut v = col.input.clone();
    for &j in &circuit.steps {
        v = apply_doubled(gate_set.gate(j), &v)?;
    }
    let scale = circuit.steps.len() as u32 + col.input_scale;
    Ok(v.into_iter().map(|e| ScaledRing::new(e, scale)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub row: usize,
    /// Matrix column or state-pair index.
    pub col: usize,
    pub expected: ScaledRing,
    pub got: ScaledRing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub pass: bool,
    /// Phase multiple that matched, or the one the mismatch refers to.
    pub phase: Option<u8>,
    pub mismatch: Option<Mismatch>,
    pub error: Option<RingError>,
}

fn fraction(x: &ScaledRing) -> String {
    match x.scale() {
        0 => x.value().to_string(),
        k => format!("({})/2^{k}", x.value()),
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            return write!(f, "pass (phase k={})", self.phase.unwrap_or(0));
        }
        if let Some(e) = &self.error {
            return write!(f, "fail: {e}");
        }
        match &self.mismatch {
            Some(m) => write!(
                f,
                "fail at ({}, {}) for k={}: expected {}, got {}",
                m.row,
                m.col,
                self.phase.unwrap_or(0),
                fraction(&m.expected),
                fraction(&m.got)
            ),
            None => write!(f, "fail: no phase multiples given"),
        }
    }
}

/// Checks the circuit against every constrained column of the target, trying
/// each phase multiple in order.
pub fn check_implements(
    circuit: &Circuit,
    gate_set: &GateSet,
    target: &TargetSpec,
    phase_multiples: &[u8],
) -> VerificationReport {
    let fail = |phase, mismatch, error| VerificationReport {
        pass: false,
        phase,
        mismatch,
        error,
    };
    if target.dim() != gate_set.dim() {
        return fail(
            None,
            None,
            Some(RingError::DimensionMismatch(format!(
                "target {} vs gate set {}",
                target.dim(),
                gate_set.dim()
            ))),
        );
    }
    let columns = target.columns();
    let mut outputs = Vec::with_capacity(columns.len());
    for col in &columns {
        match simulate_column(circuit, gate_set, col) {
            Ok(v) => outputs.push(v),
            Err(e) => return fail(None, None, Some(e)),
        }
    }
    let mut first: Option<VerificationReport> = None;
    for &k in phase_multiples {
        let rot = crate::ring::phase_factor(k);
        let mut mismatch = None;
        'cols: for (col, got) in columns.iter().zip(&outputs) {
            for (r, g) in got.iter().enumerate() {
                let expected = match col.output.entry(r).checked_mul(&rot) {
                    Ok(e) => e,
                    Err(e) => return fail(Some(k), None, Some(e)),
                };
                if expected != *g {
                    mismatch = Some(Mismatch {
                        row: r,
                        col: col.id,
                        expected,
                        got: *g,
                    });
                    break 'cols;
                }
            }
        }
        match mismatch {
            None => {
                return VerificationReport {
                    pass: true,
                    phase: Some(k),
                    mismatch: None,
                    error: None,
                }
            }
            Some(m) => {
                first.get_or_insert(fail(Some(k), Some(m), None));
            }
        }
    }
    first.unwrap_or(fail(None, None, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{build_gate_set, PrimKind};
    use crate::target::builtin;

    fn set1() -> GateSet {
        build_gate_set(1, &[PrimKind::H, PrimKind::T, PrimKind::Tdg], None).unwrap()
    }

    fn circ(steps: &[usize]) -> Circuit {
        Circuit {
            n: 1,
            steps: steps.to_vec(),
        }
    }

    #[test]
    fn hh_is_four_identity() {
        let m = simulate_exact(&circ(&[0, 0]), &set1()).unwrap();
        assert_eq!(m.scale(), 2);
        assert_eq!(
            m,
            ScaledMatrix::scaled_identity(2, RingElem::from_int(4), 2)
        );
    }

    #[test]
    fn t_to_the_eighth() {
        let m = simulate_exact(&circ(&[1; 8]), &set1()).unwrap();
        assert_eq!(
            m,
            ScaledMatrix::scaled_identity(2, RingElem::from_int(256), 8)
        );
    }

    #[test]
    fn ordering_h_then_t() {
        let s = set1();
        let m = simulate_exact(&circ(&[0, 1]), &s).unwrap();
        let want = s.gate(1).expanded.checked_mul(&s.gate(0).expanded).unwrap();
        assert_eq!(m, want);
        let other = s.gate(0).expanded.checked_mul(&s.gate(1).expanded).unwrap();
        assert_ne!(m, other);
    }

    #[test]
    fn tt_is_s_and_t_is_not() {
        let s = TargetSpec::matrix(builtin::gate(PrimKind::S, &[0], 1).unwrap()).unwrap();
        let r = check_implements(&circ(&[1, 1]), &set1(), &s, &[0]);
        assert!(r.pass, "{r}");
        assert_eq!(r.phase, Some(0));
        let r = check_implements(&circ(&[1]), &set1(), &s, &[0]);
        assert!(!r.pass);
        let m = r.mismatch.unwrap();
        assert_eq!((m.row, m.col), (1, 1));
    }

    #[test]
    fn phase_is_reported() {
        let t = TargetSpec::matrix(builtin::gate(PrimKind::T, &[0], 1).unwrap()).unwrap();
        let rotated = t.rotated(3).unwrap();
        assert!(!check_implements(&circ(&[1]), &set1(), &rotated, &[0]).pass);
        let r = check_implements(&circ(&[1]), &set1(), &rotated, &[0, 2, 5]);
        assert!(r.pass);
        assert_eq!(r.phase, Some(5));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let id = TargetSpec::matrix(ScaledMatrix::identity(2)).unwrap();
        assert!(check_implements(&circ(&[]), &set1(), &id, &[0]).pass);
    }
}
