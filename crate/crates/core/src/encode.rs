// SPDX-License-Identifier: Apache-2.0

//! Translation of a synthesis instance into CNF.
//!
//! With selector variables `x[i][j]` ("gate `j` at step `i`") and the
//! intermediate products `2^(i+1) · U_i` (the first `i+1` gates) held as
//! bit-vectors, the constraints are:
//!
//! * exactly one selector per step;
//! * `x[0][j] → 2·U_0 = 2·G_j`;
//! * `x[i+1][j] → 2^(i+2)·U_(i+1) = (2·G_j) · 2^(i+1)·U_i`;
//! * the last intermediate equals `2^d · phase · target`.
//!
//! Each row of a doubled Clifford+T gate has at most two non-zero entries, so
//! a product entry is a short linear form in the previous entries with small
//! constant coefficients. Those forms are built once per distinct row pattern
//! and shared across all gates that have it.

use std::collections::HashMap;

use log::debug;
use thiserror::Error;

use crate::cnf::{
    assert_equal, at_most_k, bv_add, bv_neg, bv_resize, bv_sub, conditional_equal, exactly_one,
    BitVec, CnfFormula, Lit,
};
use crate::gates::{BoundViolation, GateSet};
use crate::ring::{RingElem, RingError};
use crate::target::{Column, StatePair, TargetError, TargetSpec};

/// How many bits each intermediate coefficient gets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum WidthPolicy {
    /// `⌈1.5·(i+1)⌉ + 2` bits for the product of `i+1` gates (proven sufficient).
    #[default]
    Proven,
    /// `(i+1) + 2` bits. Not proven; a wrong result is caught by verification.
    Tight,
    /// Explicit per-step widths, required for gate sets outside the bounded class.
    Override(Vec<usize>),
}

/// Width of the coefficients of the product of the first `i+1` gates.
pub fn bit_width(i: usize, policy: &WidthPolicy) -> Result<usize, EncodeError> {
    match policy {
        WidthPolicy::Proven => Ok((3 * (i + 1)).div_ceil(2) + 2),
        WidthPolicy::Tight => Ok(i + 3),
        WidthPolicy::Override(w) => w.get(i).copied().ok_or(EncodeError::OverrideTooShort {
            given: w.len(),
            needed: i + 1,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeBound {
    /// Gate indices counted by the bound.
    pub gates: Vec<usize>,
    pub max_count: usize,
}

#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub target: TargetSpec,
    pub gate_set: GateSet,
    pub depth: usize,
    /// Global phases `e^{ikπ/4}` accepted for the target.
    pub phase_multiples: Vec<u8>,
    pub type_bounds: Vec<TypeBound>,
    pub width_policy: WidthPolicy,
}

impl SynthesisProblem {
    /// Exact-equality problem with default widths and no bounds.
    pub fn new(target: TargetSpec, gate_set: GateSet, depth: usize) -> Self {
        SynthesisProblem {
            target,
            gate_set,
            depth,
            phase_multiples: vec![0],
            type_bounds: Vec::new(),
            width_policy: WidthPolicy::Proven,
        }
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        SynthesisProblem {
            depth,
            ..self.clone()
        }
    }
}

/// Why an instance has no solution without calling a solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasibility {
    pub depth: usize,
    /// One reason per requested phase multiple.
    pub reasons: Vec<(u8, String)>,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no requested phase admits a {}-gate solution:",
            self.depth
        )?;
        for (k, r) in &self.reasons {
            write!(f, " [k={k}] {r};")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("infeasible: {0}")]
    Infeasible(Infeasibility),
    #[error("gate set outside the bounded class: {0}")]
    Bound(#[from] BoundViolation),
    #[error("width override has {given} entries, {needed} needed")]
    OverrideTooShort { given: usize, needed: usize },
    #[error("width override {0}")]
    OverrideTooNarrow(String),
    #[error("target is {target}-dimensional but the gate set acts on {gates}")]
    DimensionMismatch { target: usize, gates: usize },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("no phase multiples requested")]
    NoPhases,
    #[error("type bound references gate {0}, outside the gate set")]
    BadTypeBound(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Target(#[from] TargetError),
}

/// Location of every decision and coefficient variable.
#[derive(Debug, Clone)]
pub struct VarMap {
    depth: usize,
    gate_count: usize,
    dim: usize,
    selectors: Vec<Vec<Lit>>,
    column_ids: Vec<usize>,
    /// `[step][column position][row]` → components `(a, b, c, d)`.
    coeffs: Vec<Vec<Vec<[BitVec; 4]>>>,
    phases: Vec<u8>,
    phase_selectors: Vec<Lit>,
}

impl VarMap {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gate_count(&self) -> usize {
        self.gate_count
    }

    pub fn selector(&self, step: usize, gate: usize) -> Lit {
        self.selectors[step][gate]
    }

    pub fn selectors(&self) -> &[Vec<Lit>] {
        &self.selectors
    }

    /// Component `comp` (0..4 for a, b, c, d) of entry `(row, col)` of the
    /// product of the first `step+1` gates, scaled by `2^(step+1)`. `col` is a
    /// matrix column or a state-pair index.
    pub fn coeff(&self, step: usize, row: usize, col: usize, comp: usize) -> Option<&BitVec> {
        let pos = self.column_ids.iter().position(|&c| c == col)?;
        self.coeffs.get(step)?.get(pos)?.get(row).map(|e| &e[comp])
    }

    pub fn column_ids(&self) -> &[usize] {
        &self.column_ids
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Phase multiples that survived the precheck, in selector order.
    pub fn phases(&self) -> &[u8] {
        &self.phases
    }

    /// Selector of phase `k`; `None` when a single phase is encoded
    /// unconditionally or `k` was not feasible.
    pub fn phase_selector(&self, k: u8) -> Option<Lit> {
        let pos = self.phases.iter().position(|&p| p == k)?;
        self.phase_selectors.get(pos).copied()
    }

    pub fn phase_selectors(&self) -> &[Lit] {
        &self.phase_selectors
    }
}

/// Sizes of an encoded instance, for logging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceStats {
    pub variables: u32,
    pub clauses: usize,
    /// Base coefficient width per step.
    pub widths: Vec<usize>,
    pub phases: Vec<u8>,
}

impl InstanceStats {
    pub fn of(f: &CnfFormula, vm: &VarMap, policy: &WidthPolicy) -> Self {
        InstanceStats {
            variables: f.var_count(),
            clauses: f.clause_count(),
            widths: (0..vm.depth)
                .map(|i| bit_width(i, policy).unwrap_or(0))
                .collect(),
            phases: vm.phases.clone(),
        }
    }
}

/// Smallest `e` with `4^e ≥ norm_sq`, i.e. extra bits for inputs of norm > 1.
fn extra_bits(norm_sq: u128) -> usize {
    let mut e = 0;
    while (1u128 << (2 * e)) < norm_sq {
        e += 1;
    }
    e
}

fn fits(v: i64, width: usize) -> bool {
    let (lo, hi) = BitVec::range(width);
    (lo..=hi).contains(&(v as i128))
}

/// `Σ coef · x` at `width` bits, modulo `2^width`.
fn linear_form(f: &mut CnfFormula, terms: &[(i64, &BitVec)], width: usize) -> BitVec {
    let shifted = |f: &CnfFormula, x: &BitVec, t: usize| -> BitVec {
        let mut bits = vec![f.false_lit(); t.min(width)];
        bits.extend_from_slice(&x.bits()[..width - t.min(width)]);
        BitVec::from_lits(bits)
    };
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &(coef, x) in terms {
        let mag = coef.unsigned_abs();
        for t in 0..64 {
            if (mag >> t) & 1 == 1 {
                let s = shifted(f, x, t);
                if coef > 0 {
                    pos.push(s);
                } else {
                    neg.push(s);
                }
            }
        }
    }
    let sum = |f: &mut CnfFormula, mut xs: Vec<BitVec>| -> Option<BitVec> {
        while xs.len() > 1 {
            let mut next = Vec::with_capacity(xs.len().div_ceil(2));
            for pair in xs.chunks(2) {
                match pair {
                    [a, b] => next.push(bv_add(f, a, b).expect("equal widths")),
                    [a] => next.push(a.clone()),
                    _ => unreachable!(),
                }
            }
            xs = next;
        }
        xs.pop()
    };
    let p = sum(f, pos);
    let n = sum(f, neg);
    match (p, n) {
        (Some(p), Some(n)) => bv_sub(f, &p, &n).expect("equal widths"),
        (Some(p), None) => p,
        (None, Some(n)) => bv_neg(f, &n),
        (None, None) => BitVec::constant(f, 0, width),
    }
}

/// Integer coefficients of `α · u` per output component, as
/// `[(coef, input component)]` lists.
fn ring_constant_terms(alpha: RingElem) -> [[(i64, usize); 4]; 4] {
    let RingElem {
        a: p,
        b: q,
        c: r,
        d: s,
    } = alpha;
    [
        [(p, 0), (-q, 1), (2 * r, 2), (-2 * s, 3)],
        [(q, 0), (p, 1), (2 * s, 2), (2 * r, 3)],
        [(r, 0), (-s, 1), (p, 2), (-q, 3)],
        [(s, 0), (r, 1), (q, 2), (p, 3)],
    ]
}

/// Gate-row pattern: non-zero `(source row, constant)` entries.
type RowPattern = Vec<(usize, RingElem)>;

struct Encoder<'a> {
    p: &'a SynthesisProblem,
    f: CnfFormula,
    dim: usize,
    widths: Vec<usize>,
    patterns: Vec<Vec<RowPattern>>,
}

impl<'a> Encoder<'a> {
    fn column_width(&self, step: usize, extra: usize) -> usize {
        self.widths[step] + extra
    }

    fn step_zero(
        &mut self,
        sel: &[Lit],
        col: &Column,
        extra: usize,
    ) -> Result<Vec<[BitVec; 4]>, EncodeError> {
        let w = self.column_width(0, extra);
        let vars: Vec<[BitVec; 4]> = (0..self.dim)
            .map(|_| std::array::from_fn(|_| BitVec::fresh(&mut self.f, w)))
            .collect();
        for (j, gate) in self.p.gate_set.gates().iter().enumerate() {
            for (r, entry) in vars.iter().enumerate() {
                // (2·G_j · input)[r], folded at encode time
                let mut value = RingElem::ZERO;
                for (k, &input) in col.input.iter().enumerate() {
                    let g = gate.expanded.get(r, k);
                    if !g.is_zero() && !input.is_zero() {
                        value = value.checked_add(&g.checked_mul(&input)?)?;
                    }
                }
                for (comp, bits) in entry.iter().enumerate() {
                    let v = value.components()[comp];
                    if !fits(v, w) {
                        return Err(EncodeError::OverrideTooNarrow(format!(
                            "step 0 needs more than {w} bits for constant {v}"
                        )));
                    }
                    let c = BitVec::constant(&self.f, v, w);
                    conditional_equal(&mut self.f, sel[j], bits, &c).expect("equal widths");
                }
            }
        }
        Ok(vars)
    }

    fn step_next(
        &mut self,
        step: usize,
        sel: &[Lit],
        prev: &[[BitVec; 4]],
        extra: usize,
    ) -> Vec<[BitVec; 4]> {
        let w = self.column_width(step, extra);
        let ext: Vec<[BitVec; 4]> = prev
            .iter()
            .map(|e| std::array::from_fn(|c| bv_resize(&e[c], w)))
            .collect();
        let next: Vec<[BitVec; 4]> = (0..self.dim)
            .map(|_| std::array::from_fn(|_| BitVec::fresh(&mut self.f, w)))
            .collect();
        let mut cache: HashMap<RowPattern, [BitVec; 4]> = HashMap::new();
        for j in 0..self.p.gate_set.len() {
            for (r, out) in next.iter().enumerate() {
                let pattern = &self.patterns[j][r];
                let value = match cache.get(pattern) {
                    Some(v) => v.clone(),
                    None => {
                        let v: [BitVec; 4] = std::array::from_fn(|comp| {
                            let mut terms: Vec<(i64, &BitVec)> = Vec::new();
                            for &(src, alpha) in pattern {
                                for (coef, in_comp) in ring_constant_terms(alpha)[comp] {
                                    if coef != 0 {
                                        terms.push((coef, &ext[src][in_comp]));
                                    }
                                }
                            }
                            linear_form(&mut self.f, &terms, w)
                        });
                        cache.insert(pattern.clone(), v.clone());
                        v
                    }
                };
                for comp in 0..4 {
                    conditional_equal(&mut self.f, sel[j], &out[comp], &value[comp])
                        .expect("equal widths");
                }
            }
        }
        next
    }
}

/// Per-phase exact targets at scale `d`, or the reasons every phase fails.
fn precheck(
    columns: &[Column],
    extras: &[usize],
    d: usize,
    phases: &[u8],
    final_width: usize,
) -> Result<Vec<(u8, Vec<Vec<RingElem>>)>, Infeasibility> {
    let mut ok = Vec::new();
    let mut reasons = Vec::new();
    'phase: for &k in phases {
        let mut per_col = Vec::with_capacity(columns.len());
        for (col, &extra) in columns.iter().zip(extras) {
            match col.expected_at(d as u32, k) {
                Ok(v) => {
                    if let Some(bad) = v
                        .iter()
                        .flat_map(|e| e.components())
                        .find(|&x| !fits(x, final_width + extra))
                    {
                        reasons.push((
                            k,
                            format!(
                                "column {}: coefficient {bad} exceeds {} bits",
                                col.id,
                                final_width + extra
                            ),
                        ));
                        continue 'phase;
                    }
                    per_col.push(v);
                }
                Err(e) => {
                    reasons.push((k, format!("column {}: {e}", col.id)));
                    continue 'phase;
                }
            }
        }
        ok.push((k, per_col));
    }
    if ok.is_empty() {
        return Err(Infeasibility { depth: d, reasons });
    }
    Ok(ok)
}

fn check_widths(p: &SynthesisProblem) -> Result<Vec<usize>, EncodeError> {
    let widths = (0..p.depth)
        .map(|i| bit_width(i, &p.width_policy))
        .collect::<Result<Vec<_>, _>>()?;
    if let WidthPolicy::Override(_) = p.width_policy {
        if widths.iter().any(|&w| w < 2) {
            return Err(EncodeError::OverrideTooNarrow(
                "widths must be at least 2 bits".into(),
            ));
        }
        if widths.windows(2).any(|w| w[1] < w[0]) {
            return Err(EncodeError::OverrideTooNarrow(
                "widths must be non-decreasing".into(),
            ));
        }
    } else {
        p.gate_set.validate_for_bound()?;
    }
    Ok(widths)
}

/// Encodes a full synthesis instance.
pub fn encode_instance(p: &SynthesisProblem) -> Result<(CnfFormula, VarMap), EncodeError> {
    if p.depth == 0 {
        return Err(EncodeError::ZeroDepth);
    }
    if p.phase_multiples.is_empty() {
        return Err(EncodeError::NoPhases);
    }
    let dim = p.gate_set.dim();
    if p.target.dim() != dim {
        return Err(EncodeError::DimensionMismatch {
            target: p.target.dim(),
            gates: dim,
        });
    }
    let g = p.gate_set.len();
    for b in &p.type_bounds {
        if let Some(&j) = b.gates.iter().find(|&&j| j >= g) {
            return Err(EncodeError::BadTypeBound(j));
        }
    }
    let widths = check_widths(p)?;
    let columns = p.target.columns();
    let extras: Vec<usize> = columns
        .iter()
        .map(|c| extra_bits(c.input_norm_sq()))
        .collect();
    let mut phases = p.phase_multiples.clone();
    phases.sort_unstable();
    phases.dedup();
    let targets = precheck(&columns, &extras, p.depth, &phases, widths[p.depth - 1])
        .map_err(EncodeError::Infeasible)?;

    let patterns: Vec<Vec<RowPattern>> = p
        .gate_set
        .gates()
        .iter()
        .map(|gate| (0..dim).map(|r| gate.row_support(r)).collect())
        .collect();
    let mut enc = Encoder {
        p,
        f: CnfFormula::new(),
        dim,
        widths,
        patterns,
    };

    let selectors: Vec<Vec<Lit>> = (0..p.depth)
        .map(|_| (0..g).map(|_| enc.f.new_var()).collect())
        .collect();
    for step in &selectors {
        exactly_one(&mut enc.f, step).expect("gate set is non-empty");
    }

    let mut coeffs: Vec<Vec<Vec<[BitVec; 4]>>> = vec![Vec::new(); p.depth];
    for (col, &extra) in columns.iter().zip(&extras) {
        let mut cur = enc.step_zero(&selectors[0], col, extra)?;
        coeffs[0].push(cur.clone());
        for step in 1..p.depth {
            cur = enc.step_next(step, &selectors[step], &cur, extra);
            coeffs[step].push(cur.clone());
        }
    }

    // final equality against the phase-rotated target
    let last = &coeffs[p.depth - 1];
    let feasible: Vec<u8> = targets.iter().map(|(k, _)| *k).collect();
    let phase_selectors: Vec<Lit> = if targets.len() > 1 {
        (0..targets.len()).map(|_| enc.f.new_var()).collect()
    } else {
        Vec::new()
    };
    if !phase_selectors.is_empty() {
        exactly_one(&mut enc.f, &phase_selectors).expect("non-empty");
    }
    for (t, (_, per_col)) in targets.iter().enumerate() {
        for (pos, expected) in per_col.iter().enumerate() {
            for (r, value) in expected.iter().enumerate() {
                for comp in 0..4 {
                    let vars = &last[pos][r][comp];
                    let c = BitVec::constant(&enc.f, value.components()[comp], vars.width());
                    match phase_selectors.get(t) {
                        Some(&guard) => conditional_equal(&mut enc.f, guard, vars, &c),
                        None => assert_equal(&mut enc.f, vars, &c),
                    }
                    .expect("equal widths");
                }
            }
        }
    }

    for b in &p.type_bounds {
        let xs: Vec<Lit> = selectors
            .iter()
            .flat_map(|step| b.gates.iter().map(move |&j| step[j]))
            .collect();
        at_most_k(&mut enc.f, &xs, b.max_count);
    }

    let vm = VarMap {
        depth: p.depth,
        gate_count: g,
        dim,
        selectors,
        column_ids: columns.iter().map(|c| c.id).collect(),
        coeffs,
        phases: feasible,
        phase_selectors,
    };
    debug!(
        "encoded d={} g={}: {} variables, {} clauses",
        p.depth,
        g,
        enc.f.var_count(),
        enc.f.clause_count()
    );
    Ok((enc.f, vm))
}

/// Encodes a state-mapping instance: the pairs become the columns, sharing the
/// gate selectors.
pub fn encode_state_mapping(
    pairs: Vec<StatePair>,
    gate_set: GateSet,
    depth: usize,
    phase_multiples: Vec<u8>,
    width_policy: WidthPolicy,
) -> Result<(CnfFormula, VarMap), EncodeError> {
    let target = TargetSpec::states(pairs)?;
    let p = SynthesisProblem {
        target,
        gate_set,
        depth,
        phase_multiples,
        type_bounds: Vec::new(),
        width_policy,
    };
    encode_instance(&p)
}
