// SPDX-License-Identifier: Apache-2.0

//! Synthesis targets: a full matrix, a column-masked matrix (fixed inputs and
//! clean ancillas), or a list of state mappings.
//!
//! Every target reduces to a list of [`Column`]s. A column pairs an exact
//! integer input vector `2^s · v_in` with the expected dyadic output `v_out`;
//! a circuit of `d` gates implements the column when
//! `(2^d · circuit) · (2^s · v_in) = 2^(d+s) · phase · v_out`.

use thiserror::Error;

use crate::gates::{builtin_gate, GateError, PrimKind};
use crate::ring::{phase_factor, RingElem, RingError, ScaledMatrix, ScaledRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("target dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("target is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("every column is masked")]
    AllColumnsMasked,
    #[error("column {0} out of range")]
    ColumnOutOfRange(usize),
    #[error("state pair {pair}: {detail}")]
    StateLength { pair: usize, detail: String },
    #[error("no state pairs given")]
    NoStates,
    #[error("ancilla qubit {0} out of range")]
    AncillaOutOfRange(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// Exact vector `entries / 2^scale`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledVector {
    pub entries: Vec<RingElem>,
    pub scale: u32,
}

impl ScaledVector {
    pub fn new(entries: Vec<RingElem>, scale: u32) -> Self {
        ScaledVector { entries, scale }
    }

    /// Computational-basis vector `|index⟩` of length `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut entries = vec![RingElem::ZERO; dim];
        entries[index] = RingElem::ONE;
        ScaledVector { entries, scale: 0 }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, r: usize) -> ScaledRing {
        ScaledRing::new(self.entries[r], self.scale)
    }

    /// Removes common factors of two.
    pub fn canonical(&self) -> ScaledVector {
        let mut v = self.clone();
        while v.scale > 0 && v.entries.iter().all(RingElem::is_even) {
            for e in &mut v.entries {
                *e = RingElem::new(e.a / 2, e.b / 2, e.c / 2, e.d / 2);
            }
            v.scale -= 1;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePair {
    pub input: ScaledVector,
    pub output: ScaledVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSpec {
    Matrix(ScaledMatrix),
    /// Only the listed columns are constrained.
    Masked {
        matrix: ScaledMatrix,
        kept_columns: Vec<usize>,
    },
    States(Vec<StatePair>),
}

/// One constrained column of a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    /// Column index for matrix targets, pair index for state mappings.
    pub id: usize,
    /// `2^input_scale · v_in`, exact integers.
    pub input: Vec<RingElem>,
    pub input_scale: u32,
    pub output: ScaledVector,
}

impl Column {
    /// Exact integer vector the circuit output must equal after `d` gates,
    /// rotated by the phase `e^{ikπ/4}`.
    pub fn expected_at(&self, d: u32, phase: u8) -> Result<Vec<RingElem>, RingError> {
        let p = phase_factor(phase);
        self.output
            .entries
            .iter()
            .map(|e| {
                ScaledRing::new(*e, self.output.scale)
                    .checked_mul(&p)?
                    .rescale_to(d + self.input_scale)
            })
            .collect()
    }

    /// Largest squared norm among the input entries.
    pub fn input_norm_sq(&self) -> u128 {
        self.input.iter().map(RingElem::norm_sq).max().unwrap_or(0)
    }
}

fn check_square(m: &ScaledMatrix) -> Result<usize, TargetError> {
    if m.rows() != m.cols() {
        return Err(TargetError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.rows().is_power_of_two() {
        return Err(TargetError::NotPowerOfTwo(m.rows()));
    }
    Ok(m.rows())
}

fn matrix_column(m: &ScaledMatrix, c: usize) -> Column {
    let dim = m.rows();
    Column {
        id: c,
        input: ScaledVector::basis(dim, c).entries,
        input_scale: 0,
        output: ScaledVector::new((0..dim).map(|r| m.get(r, c)).collect(), m.scale()).canonical(),
    }
}

impl TargetSpec {
    pub fn matrix(m: ScaledMatrix) -> Result<Self, TargetError> {
        check_square(&m)?;
        Ok(TargetSpec::Matrix(m))
    }

    pub fn states(pairs: Vec<StatePair>) -> Result<Self, TargetError> {
        let Some(first) = pairs.first() else {
            return Err(TargetError::NoStates);
        };
        let dim = first.input.len();
        if !dim.is_power_of_two() {
            return Err(TargetError::NotPowerOfTwo(dim));
        }
        for (k, p) in pairs.iter().enumerate() {
            if p.input.len() != dim || p.output.len() != dim {
                return Err(TargetError::StateLength {
                    pair: k,
                    detail: format!(
                        "input has {} entries, output {}, expected {dim}",
                        p.input.len(),
                        p.output.len()
                    ),
                });
            }
        }
        Ok(TargetSpec::States(pairs))
    }

    /// Register dimension `2^n`.
    pub fn dim(&self) -> usize {
        match self {
            TargetSpec::Matrix(m) | TargetSpec::Masked { matrix: m, .. } => m.rows(),
            TargetSpec::States(p) => p[0].input.len(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn columns(&self) -> Vec<Column> {
        match self {
            TargetSpec::Matrix(m) => (0..m.cols()).map(|c| matrix_column(m, c)).collect(),
            TargetSpec::Masked {
                matrix,
                kept_columns,
            } => kept_columns
                .iter()
                .map(|&c| matrix_column(matrix, c))
                .collect(),
            TargetSpec::States(pairs) => pairs
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let input = p.input.canonical();
                    Column {
                        id: k,
                        input: input.entries,
                        input_scale: input.scale,
                        output: p.output.canonical(),
                    }
                })
                .collect(),
        }
    }

    /// Same target with the global phase `e^{ikπ/4}` applied to every output.
    pub fn rotated(&self, k: u8) -> Result<TargetSpec, RingError> {
        let p = phase_factor(k);
        let rot_vec = |v: &ScaledVector| -> Result<ScaledVector, RingError> {
            let entries = v
                .entries
                .iter()
                .map(|e| e.checked_mul(&p.value()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ScaledVector::new(entries, v.scale + p.scale()).canonical())
        };
        Ok(match self {
            TargetSpec::Matrix(m) => TargetSpec::Matrix(m.checked_scale_by(&p)?.canonical()),
            TargetSpec::Masked {
                matrix,
                kept_columns,
            } => TargetSpec::Masked {
                matrix: matrix.checked_scale_by(&p)?.canonical(),
                kept_columns: kept_columns.clone(),
            },
            TargetSpec::States(pairs) => TargetSpec::States(
                pairs
                    .iter()
                    .map(|sp| {
                        Ok(StatePair {
                            input: sp.input.clone(),
                            output: rot_vec(&sp.output)?,
                        })
                    })
                    .collect::<Result<Vec<_>, RingError>>()?,
            ),
        })
    }
}

/// Keeps only the columns whose bits at the `fixed_zero` qubits are all 0.
pub fn mask_columns(matrix: ScaledMatrix, fixed_zero: &[usize]) -> Result<TargetSpec, TargetError> {
    let dim = check_square(&matrix)?;
    let n = dim.trailing_zeros() as usize;
    if let Some(&q) = fixed_zero.iter().find(|&&q| q >= n) {
        return Err(TargetError::AncillaOutOfRange(q));
    }
    let kept: Vec<usize> = (0..dim)
        .filter(|&c| fixed_zero.iter().all(|&q| (c >> (n - 1 - q)) & 1 == 0))
        .collect();
    mask_explicit(matrix, kept)
}

pub fn mask_explicit(
    matrix: ScaledMatrix,
    kept_columns: Vec<usize>,
) -> Result<TargetSpec, TargetError> {
    let dim = check_square(&matrix)?;
    if kept_columns.is_empty() {
        return Err(TargetError::AllColumnsMasked);
    }
    if let Some(&c) = kept_columns.iter().find(|&&c| c >= dim) {
        return Err(TargetError::ColumnOutOfRange(c));
    }
    if kept_columns.len() == dim {
        return Ok(TargetSpec::Matrix(matrix));
    }
    Ok(TargetSpec::Masked {
        matrix,
        kept_columns,
    })
}

/// `U ⊗ I` on `count` extra qubits appended after the existing ones.
pub fn with_dirty_ancillas(
    matrix: &ScaledMatrix,
    count: usize,
) -> Result<ScaledMatrix, TargetError> {
    check_square(matrix)?;
    Ok(matrix.checked_kron(&ScaledMatrix::identity(1 << count))?)
}

/// `U ⊗ I` on `count` appended qubits, keeping only the columns where the
/// appended qubits are `|0⟩`.
pub fn with_clean_ancillas(matrix: &ScaledMatrix, count: usize) -> Result<TargetSpec, TargetError> {
    let big = with_dirty_ancillas(matrix, count)?;
    let n = big.rows().trailing_zeros() as usize;
    let anc: Vec<usize> = (n - count..n).collect();
    mask_columns(big, &anc)
}

/// Targets built from the exact gate matrices.
pub mod builtin {
    use super::*;

    fn gate_matrix(kind: PrimKind, ops: &[usize], n: usize) -> Result<ScaledMatrix, TargetError> {
        Ok(builtin_gate(kind, ops, n)?.expanded)
    }

    fn product(factors: &[ScaledMatrix]) -> Result<ScaledMatrix, TargetError> {
        // factors[0] is applied first
        let mut acc = ScaledMatrix::identity(factors[0].rows());
        for f in factors {
            acc = f.checked_mul(&acc)?;
        }
        Ok(acc.canonical())
    }

    pub fn toffoli() -> Result<ScaledMatrix, TargetError> {
        Ok(gate_matrix(PrimKind::Toffoli, &[0, 1, 2], 3)?.canonical())
    }

    /// `|a,b,0⟩ → |a,b,ab⟩`: Toffoli restricted to target qubit `|0⟩`.
    pub fn and() -> Result<TargetSpec, TargetError> {
        mask_columns(toffoli()?, &[2])
    }

    pub fn swap() -> Result<ScaledMatrix, TargetError> {
        let a = gate_matrix(PrimKind::Cnot, &[0, 1], 2)?;
        let b = gate_matrix(PrimKind::Cnot, &[1, 0], 2)?;
        product(&[a.clone(), b, a])
    }

    /// Controlled swap of qubits 1 and 2, controlled by qubit 0.
    pub fn fredkin() -> Result<ScaledMatrix, TargetError> {
        let c = gate_matrix(PrimKind::Cnot, &[2, 1], 3)?;
        let t = gate_matrix(PrimKind::Toffoli, &[0, 1, 2], 3)?;
        product(&[c.clone(), t, c])
    }

    /// `|0…0⟩ → (|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    pub fn ghz(n: usize) -> Result<TargetSpec, TargetError> {
        if n == 0 {
            return Err(TargetError::NotPowerOfTwo(0));
        }
        let dim = 1usize << n;
        let mut out = vec![RingElem::ZERO; dim];
        out[0] = RingElem::SQRT2;
        out[dim - 1] = RingElem::SQRT2;
        TargetSpec::states(vec![StatePair {
            input: ScaledVector::basis(dim, 0),
            output: ScaledVector::new(out, 1),
        }])
    }

    /// Single-gate target, e.g. `S` on one qubit.
    pub fn gate(kind: PrimKind, ops: &[usize], n: usize) -> Result<ScaledMatrix, TargetError> {
        Ok(gate_matrix(kind, ops, n)?.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_ancilla_keeps_zero_columns() {
        let t = builtin::toffoli().unwrap();
        let spec = mask_columns(t, &[2]).unwrap();
        let TargetSpec::Masked { kept_columns, .. } = &spec else {
            panic!("expected masking");
        };
        assert_eq!(kept_columns, &vec![0, 2, 4, 6]);
        assert_eq!(spec.columns().len(), 4);
    }

    #[test]
    fn no_ancilla_is_identity_mask() {
        let t = builtin::swap().unwrap();
        assert_eq!(mask_columns(t.clone(), &[]).unwrap(), TargetSpec::Matrix(t));
    }

    #[test]
    fn all_masked_is_an_error() {
        let t = builtin::swap().unwrap();
        assert_eq!(mask_explicit(t, vec![]), Err(TargetError::AllColumnsMasked));
    }

    #[test]
    fn dirty_ancilla_is_kron_identity() {
        let s = builtin::gate(PrimKind::S, &[0], 1).unwrap();
        let big = with_dirty_ancillas(&s, 1).unwrap();
        assert_eq!(big.rows(), 4);
        assert_eq!(big.get(3, 3), RingElem::I);
        assert_eq!(big.get(2, 2), RingElem::I);
        assert_eq!(big.get(1, 1), RingElem::ONE);
        let clean = with_clean_ancillas(&s, 1).unwrap();
        assert_eq!(
            clean.columns().iter().map(|c| c.id).collect::<Vec<_>>(),
            vec![0, 2]
        );
    }

    #[test]
    fn swap_and_fredkin_are_permutations() {
        let s = builtin::swap().unwrap();
        assert_eq!(s.scale(), 0);
        let perm = [0, 2, 1, 3];
        for (r, &c) in perm.iter().enumerate() {
            assert_eq!(s.get(r, c), RingElem::ONE);
        }
        let f = builtin::fredkin().unwrap();
        let perm = [0, 1, 2, 3, 4, 6, 5, 7];
        for (r, &c) in perm.iter().enumerate() {
            assert_eq!(f.get(r, c), RingElem::ONE, "row {r}");
        }
    }

    #[test]
    fn expected_column_values() {
        let t = TargetSpec::matrix(builtin::gate(PrimKind::T, &[0], 1).unwrap()).unwrap();
        let cols = t.columns();
        assert_eq!(
            cols[1].expected_at(1, 0).unwrap()[1],
            RingElem::new(0, 0, 1, 1)
        );
        // T's second column needs scale 1
        assert!(cols[1].expected_at(0, 0).is_err());
        assert_eq!(cols[0].expected_at(0, 0).unwrap()[0], RingElem::ONE);
        // e^{iπ/4}·1 needs scale 1 as well
        assert!(cols[0].expected_at(0, 1).is_err());
    }

    #[test]
    fn ghz_state() {
        let g = builtin::ghz(3).unwrap();
        let cols = g.columns();
        assert_eq!(cols.len(), 1);
        assert_eq!(cols[0].output.scale, 1);
        assert_eq!(
            cols[0].expected_at(3, 0).unwrap()[7],
            RingElem::new(0, 0, 4, 0)
        );
    }

    #[test]
    fn state_length_checked() {
        let bad = TargetSpec::states(vec![StatePair {
            input: ScaledVector::basis(2, 0),
            output: ScaledVector::basis(4, 0),
        }]);
        assert!(matches!(bad, Err(TargetError::StateLength { .. })));
        assert_eq!(TargetSpec::states(vec![]), Err(TargetError::NoStates));
    }
}
