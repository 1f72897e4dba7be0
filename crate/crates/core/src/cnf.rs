// SPDX-License-Identifier: Apache-2.0

//! CNF construction kernel.
//!
//! [`CnfFormula`] is an append-only clause database with a variable allocator.
//! Variables 1 and 2 are reserved for the constants true and false (each pinned
//! by a unit clause), so bit-vectors can mix constant and free bits uniformly.
//! Clauses are simplified against those constants on insertion.
//!
//! Bit-vectors are two's-complement, least significant bit first. Arithmetic
//! wraps at the operand width; callers size widths so that wrapping never
//! changes a value that matters.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::Not;
use std::path::Path;

use thiserror::Error;

pub mod toy;

#[derive(Debug, Error)]
pub enum CnfError {
    #[error("exactly-one over an empty literal set")]
    EmptyExactlyOne,
    #[error("bit-vector width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("cannot shrink a bit-vector from {from} to {to} bits")]
    Shrink { from: usize, to: usize },
    #[error("malformed DIMACS at line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("malformed model at line {line}: {msg}")]
    Model { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, CnfError>;

/// A literal in DIMACS convention: positive or negative variable number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: u32, negated: bool) -> Lit {
        assert!(var > 0 && var <= i32::MAX as u32, "variable out of range");
        Lit(if negated { -(var as i32) } else { var as i32 })
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, false)
    }

    pub fn from_dimacs(x: i32) -> Lit {
        assert!(x != 0 && x != i32::MIN);
        Lit(x)
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_negated(self) -> bool {
        self.0 < 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const TRUE_VAR: u32 = 1;
const FALSE_VAR: u32 = 2;

/// Clause database plus variable allocator.
#[derive(Clone, PartialEq, Eq)]
pub struct CnfFormula {
    var_count: u32,
    lits: Vec<Lit>,
    ends: Vec<usize>,
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CnfFormula({} vars, {} clauses)",
            self.var_count,
            self.ends.len()
        )
    }
}

impl Default for CnfFormula {
    fn default() -> Self {
        Self::new()
    }
}

impl CnfFormula {
    pub fn new() -> Self {
        let mut f = CnfFormula {
            var_count: 2,
            lits: Vec::new(),
            ends: Vec::new(),
        };
        f.push_raw(&[Lit::pos(TRUE_VAR)]);
        f.push_raw(&[!Lit::pos(FALSE_VAR)]);
        f
    }

    pub fn true_lit(&self) -> Lit {
        Lit::pos(TRUE_VAR)
    }

    pub fn false_lit(&self) -> Lit {
        Lit::pos(FALSE_VAR)
    }

    pub fn constant(&self, b: bool) -> Lit {
        if b {
            self.true_lit()
        } else {
            self.false_lit()
        }
    }

    /// `Some(value)` when `l` is one of the reserved constant literals.
    pub fn const_value(l: Lit) -> Option<bool> {
        match l.0 {
            1 | -2 => Some(true),
            -1 | 2 => Some(false),
            _ => None,
        }
    }

    pub fn new_var(&mut self) -> Lit {
        self.var_count += 1;
        Lit::pos(self.var_count)
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn clause_count(&self) -> usize {
        self.ends.len()
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        let starts = std::iter::once(0).chain(self.ends.iter().copied());
        starts
            .zip(self.ends.iter().copied())
            .map(|(s, e)| &self.lits[s..e])
    }

    fn push_raw(&mut self, clause: &[Lit]) {
        self.lits.extend_from_slice(clause);
        self.ends.push(self.lits.len());
    }

    /// Appends a clause after dropping false constants. Clauses that are
    /// satisfied by a true constant or contain complementary literals are
    /// skipped; a clause that simplifies to nothing becomes [`assert_false`].
    ///
    /// [`assert_false`]: CnfFormula::assert_false
    pub fn add_clause(&mut self, clause: &[Lit]) {
        let mut kept: Vec<Lit> = Vec::with_capacity(clause.len());
        for &l in clause {
            debug_assert!(l.var() <= self.var_count, "literal {l:?} not allocated");
            match Self::const_value(l) {
                Some(true) => return,
                Some(false) => continue,
                None => {
                    if kept.contains(&!l) {
                        return;
                    }
                    if !kept.contains(&l) {
                        kept.push(l);
                    }
                }
            }
        }
        if kept.is_empty() {
            self.assert_false();
        } else {
            self.push_raw(&kept);
        }
    }

    /// Appends the empty clause, making the formula unsatisfiable.
    pub fn assert_false(&mut self) {
        self.push_raw(&[]);
    }

    pub fn write_dimacs_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "p cnf {} {}", self.var_count, self.clause_count())?;
        let mut line = String::new();
        for clause in self.clauses() {
            line.clear();
            for l in clause {
                line.push_str(&l.to_dimacs().to_string());
                line.push(' ');
            }
            line.push('0');
            writeln!(w, "{line}")?;
        }
        w.flush()
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("DIMACS is ASCII")
    }

    pub fn write_dimacs(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        self.write_dimacs_to(BufWriter::new(file))?;
        Ok(())
    }

    /// Reads a DIMACS CNF text back, verbatim (no simplification).
    pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
        let mut header: Option<(u32, usize)> = None;
        let mut f = CnfFormula {
            var_count: 0,
            lits: Vec::new(),
            ends: Vec::new(),
        };
        let mut pending: Vec<Lit> = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let err = |msg: String| CnfError::Dimacs { line: no + 1, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, c] => {
                        let v = v
                            .parse()
                            .map_err(|_| err(format!("bad variable count `{v}`")))?;
                        let c = c
                            .parse()
                            .map_err(|_| err(format!("bad clause count `{c}`")))?;
                        header = Some((v, c));
                        f.var_count = v;
                    }
                    _ => return Err(err("expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(err("clause before header".into()));
            };
            for tok in line.split_whitespace() {
                let x: i32 = tok
                    .parse()
                    .map_err(|_| err(format!("bad literal `{tok}`")))?;
                if x == 0 {
                    f.push_raw(&pending);
                    pending.clear();
                } else {
                    if x.unsigned_abs() > vars || x == i32::MIN {
                        return Err(err(format!("literal {x} exceeds declared variables")));
                    }
                    pending.push(Lit(x));
                }
            }
        }
        let Some((_, clauses)) = header else {
            return Err(CnfError::Dimacs {
                line: 0,
                msg: "missing header".into(),
            });
        };
        if !pending.is_empty() {
            f.push_raw(&pending);
        }
        if f.clause_count() != clauses {
            return Err(CnfError::Dimacs {
                line: 0,
                msg: format!(
                    "header declares {clauses} clauses, found {}",
                    f.clause_count()
                ),
            });
        }
        Ok(f)
    }
}

/// Variable assignment read back from a solver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    values: Vec<Option<bool>>,
}

impl Model {
    pub fn from_assignment(pairs: impl IntoIterator<Item = (u32, bool)>) -> Model {
        let mut m = Model::default();
        for (v, b) in pairs {
            m.set(v, b);
        }
        m
    }

    pub fn set(&mut self, var: u32, value: bool) {
        let i = var as usize;
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn var_value(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    /// Value of a literal; reserved constants evaluate without being in the model.
    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        if let Some(b) = CnfFormula::const_value(l) {
            return Some(b);
        }
        self.var_value(l.var()).map(|b| b != l.is_negated())
    }

    pub fn to_map(&self) -> BTreeMap<u32, bool> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, b)| b.map(|b| (v as u32, b)))
            .collect()
    }
}

/// Parses `v`-prefixed model lines (`v 1 -2 0`). Other solver output lines
/// (`s ...`, `c ...`) are ignored.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut m = Model::default();
    let mut terminated = false;
    let mut seen_v = false;
    for (no, line) in text.lines().enumerate() {
        let Some(rest) = line.trim_start().strip_prefix('v') else {
            continue;
        };
        if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
            return Err(CnfError::Model {
                line: no + 1,
                msg: format!("unexpected `{}`", line.trim()),
            });
        }
        seen_v = true;
        for tok in rest.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| CnfError::Model {
                line: no + 1,
                msg: format!("bad literal `{tok}`"),
            })?;
            if terminated {
                return Err(CnfError::Model {
                    line: no + 1,
                    msg: "literal after terminating 0".into(),
                });
            }
            if x == 0 {
                terminated = true;
            } else if x.unsigned_abs() > i32::MAX as u64 {
                return Err(CnfError::Model {
                    line: no + 1,
                    msg: format!("literal {x} out of range"),
                });
            } else {
                m.set(x.unsigned_abs() as u32, x > 0);
            }
        }
    }
    if !seen_v || !terminated {
        return Err(CnfError::Model {
            line: text.lines().count(),
            msg: if seen_v {
                "model not terminated by 0".into()
            } else {
                "no `v` lines".into()
            },
        });
    }
    Ok(m)
}

/// One at-least-one clause plus pairwise at-most-one clauses.
pub fn exactly_one(f: &mut CnfFormula, xs: &[Lit]) -> Result<()> {
    if xs.is_empty() {
        return Err(CnfError::EmptyExactlyOne);
    }
    f.add_clause(xs);
    for (k, &a) in xs.iter().enumerate() {
        for &b in &xs[k + 1..] {
            f.add_clause(&[!a, !b]);
        }
    }
    Ok(())
}

/// Sequential-counter encoding of `Σ xs ≤ k`.
pub fn at_most_k(f: &mut CnfFormula, xs: &[Lit], k: usize) {
    let n = xs.len();
    if k >= n {
        return;
    }
    if k == 0 {
        for &x in xs {
            f.add_clause(&[!x]);
        }
        return;
    }
    // s[i][j]: at least j+1 of xs[0..=i] are true.
    let s: Vec<Vec<Lit>> = (0..n - 1)
        .map(|_| (0..k).map(|_| f.new_var()).collect())
        .collect();
    f.add_clause(&[!xs[0], s[0][0]]);
    for j in 1..k {
        f.add_clause(&[!s[0][j]]);
    }
    for i in 1..n - 1 {
        f.add_clause(&[!xs[i], s[i][0]]);
        f.add_clause(&[!s[i - 1][0], s[i][0]]);
        for j in 1..k {
            f.add_clause(&[!xs[i], !s[i - 1][j - 1], s[i][j]]);
            f.add_clause(&[!s[i - 1][j], s[i][j]]);
        }
        f.add_clause(&[!xs[i], !s[i - 1][k - 1]]);
    }
    f.add_clause(&[!xs[n - 1], !s[n - 2][k - 1]]);
}

pub fn and2(f: &mut CnfFormula, a: Lit, b: Lit) -> Lit {
    match (CnfFormula::const_value(a), CnfFormula::const_value(b)) {
        (Some(false), _) | (_, Some(false)) => return f.false_lit(),
        (Some(true), _) => return b,
        (_, Some(true)) => return a,
        _ => {}
    }
    if a == b {
        return a;
    }
    if a == !b {
        return f.false_lit();
    }
    let r = f.new_var();
    f.add_clause(&[!r, a]);
    f.add_clause(&[!r, b]);
    f.add_clause(&[r, !a, !b]);
    r
}

pub fn or2(f: &mut CnfFormula, a: Lit, b: Lit) -> Lit {
    !and2(f, !a, !b)
}

pub fn xor2(f: &mut CnfFormula, a: Lit, b: Lit) -> Lit {
    match (CnfFormula::const_value(a), CnfFormula::const_value(b)) {
        (Some(x), Some(y)) => return f.constant(x != y),
        (Some(x), None) => return if x { !b } else { b },
        (None, Some(y)) => return if y { !a } else { a },
        _ => {}
    }
    if a == b {
        return f.false_lit();
    }
    if a == !b {
        return f.true_lit();
    }
    let r = f.new_var();
    f.add_clause(&[!r, a, b]);
    f.add_clause(&[!r, !a, !b]);
    f.add_clause(&[r, !a, b]);
    f.add_clause(&[r, a, !b]);
    r
}

/// Sum bit of a full adder: `a ⊕ b ⊕ c`.
pub fn xor3(f: &mut CnfFormula, a: Lit, b: Lit, c: Lit) -> Lit {
    for (k, l) in [a, b, c].into_iter().enumerate() {
        if let Some(v) = CnfFormula::const_value(l) {
            let rest: Vec<Lit> = [a, b, c]
                .into_iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, x)| x)
                .collect();
            let x = xor2(f, rest[0], rest[1]);
            return if v { !x } else { x };
        }
    }
    if a == b || a == !b {
        let x = xor2(f, a, b);
        return xor2(f, x, c);
    }
    if b == c || b == !c || a == c || a == !c {
        let x = xor2(f, b, c);
        return xor2(f, a, x);
    }
    let r = f.new_var();
    f.add_clause(&[!r, a, b, c]);
    f.add_clause(&[!r, a, !b, !c]);
    f.add_clause(&[!r, !a, b, !c]);
    f.add_clause(&[!r, !a, !b, c]);
    f.add_clause(&[r, !a, b, c]);
    f.add_clause(&[r, a, !b, c]);
    f.add_clause(&[r, a, b, !c]);
    f.add_clause(&[r, !a, !b, !c]);
    r
}

/// Carry bit of a full adder: majority of `a, b, c`.
pub fn maj3(f: &mut CnfFormula, a: Lit, b: Lit, c: Lit) -> Lit {
    for (k, l) in [a, b, c].into_iter().enumerate() {
        if let Some(v) = CnfFormula::const_value(l) {
            let rest: Vec<Lit> = [a, b, c]
                .into_iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, x)| x)
                .collect();
            return if v {
                or2(f, rest[0], rest[1])
            } else {
                and2(f, rest[0], rest[1])
            };
        }
    }
    for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
        if x == y {
            return x;
        }
        if x == !y {
            return z;
        }
    }
    let r = f.new_var();
    f.add_clause(&[!a, !b, r]);
    f.add_clause(&[!a, !c, r]);
    f.add_clause(&[!b, !c, r]);
    f.add_clause(&[a, b, !r]);
    f.add_clause(&[a, c, !r]);
    f.add_clause(&[b, c, !r]);
    r
}

/// Two's-complement bit-vector, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    bits: Vec<Lit>,
}

impl BitVec {
    pub fn from_lits(bits: Vec<Lit>) -> BitVec {
        assert!(!bits.is_empty(), "bit-vectors have at least one bit");
        BitVec { bits }
    }

    pub fn fresh(f: &mut CnfFormula, width: usize) -> BitVec {
        BitVec::from_lits((0..width).map(|_| f.new_var()).collect())
    }

    /// Constant bits of `value` at `width`, wrapping like two's complement.
    pub fn constant(f: &CnfFormula, value: i64, width: usize) -> BitVec {
        BitVec::from_lits(
            (0..width)
                .map(|k| f.constant(((value >> k.min(63)) & 1) == 1))
                .collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[Lit] {
        &self.bits
    }

    pub fn sign(&self) -> Lit {
        *self.bits.last().expect("non-empty")
    }

    /// Whether every bit is a reserved constant.
    pub fn as_constant(&self) -> Option<i64> {
        let m = Model::default();
        if self
            .bits
            .iter()
            .all(|&b| CnfFormula::const_value(b).is_some())
        {
            self.value_in(&m)
        } else {
            None
        }
    }

    /// Signed value under a model.
    pub fn value_in(&self, m: &Model) -> Option<i64> {
        let w = self.width();
        let mut v: i128 = 0;
        for (k, &b) in self.bits.iter().enumerate() {
            if m.lit_value(b)? {
                v |= 1i128 << k;
            }
        }
        if m.lit_value(self.sign())? {
            v -= 1i128 << w;
        }
        i64::try_from(v).ok()
    }

    /// Smallest and largest representable values.
    pub fn range(width: usize) -> (i128, i128) {
        let half = 1i128 << (width - 1);
        (-half, half - 1)
    }
}

fn same_width(x: &BitVec, y: &BitVec) -> Result<()> {
    if x.width() != y.width() {
        return Err(CnfError::WidthMismatch(x.width(), y.width()));
    }
    Ok(())
}

fn ripple(f: &mut CnfFormula, x: &[Lit], y: &[Lit], carry_in: Lit) -> BitVec {
    let w = x.len();
    let mut carry = carry_in;
    let mut out = Vec::with_capacity(w);
    for k in 0..w {
        out.push(xor3(f, x[k], y[k], carry));
        if k + 1 < w {
            carry = maj3(f, x[k], y[k], carry);
        }
    }
    BitVec::from_lits(out)
}

/// Ripple-carry `x + y` at the common width (wrapping).
pub fn bv_add(f: &mut CnfFormula, x: &BitVec, y: &BitVec) -> Result<BitVec> {
    same_width(x, y)?;
    let cin = f.false_lit();
    Ok(ripple(f, &x.bits, &y.bits, cin))
}

/// `x − y` as `x + ¬y + 1` (wrapping).
pub fn bv_sub(f: &mut CnfFormula, x: &BitVec, y: &BitVec) -> Result<BitVec> {
    same_width(x, y)?;
    let ny: Vec<Lit> = y.bits.iter().map(|&l| !l).collect();
    let cin = f.true_lit();
    Ok(ripple(f, &x.bits, &ny, cin))
}

/// Two's-complement negation: complement plus one.
pub fn bv_neg(f: &mut CnfFormula, x: &BitVec) -> BitVec {
    let complement = BitVec::from_lits(x.bits.iter().map(|&l| !l).collect());
    let one = BitVec::constant(f, 1, x.width());
    bv_add(f, &complement, &one).expect("equal widths")
}

/// `2·x`, one bit wider.
pub fn bv_shl1(f: &CnfFormula, x: &BitVec) -> BitVec {
    let mut bits = Vec::with_capacity(x.width() + 1);
    bits.push(f.false_lit());
    bits.extend_from_slice(&x.bits);
    BitVec::from_lits(bits)
}

pub fn bv_sign_extend(x: &BitVec, new_width: usize) -> Result<BitVec> {
    if new_width < x.width() {
        return Err(CnfError::Shrink {
            from: x.width(),
            to: new_width,
        });
    }
    let mut bits = x.bits.clone();
    bits.resize(new_width, x.sign());
    Ok(BitVec::from_lits(bits))
}

/// Keeps the low `new_width` bits (arithmetic modulo `2^new_width`).
pub fn bv_truncate(x: &BitVec, new_width: usize) -> BitVec {
    BitVec::from_lits(x.bits[..new_width.min(x.width())].to_vec())
}

/// Sign-extends or truncates to exactly `width` bits.
pub fn bv_resize(x: &BitVec, width: usize) -> BitVec {
    if width >= x.width() {
        bv_sign_extend(x, width).expect("growing")
    } else {
        bv_truncate(x, width)
    }
}

/// `guard → x = y`, two clauses per bit.
pub fn conditional_equal(f: &mut CnfFormula, guard: Lit, x: &BitVec, y: &BitVec) -> Result<()> {
    same_width(x, y)?;
    for (&a, &b) in x.bits.iter().zip(&y.bits) {
        f.add_clause(&[!guard, a, !b]);
        f.add_clause(&[!guard, !a, b]);
    }
    Ok(())
}

/// Unconditional `x = y`.
pub fn assert_equal(f: &mut CnfFormula, x: &BitVec, y: &BitVec) -> Result<()> {
    let t = f.true_lit();
    conditional_equal(f, t, x, y)
}
