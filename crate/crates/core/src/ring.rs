// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic in ℤ[√2, i] and its dyadic extension.
//!
//! A [`RingElem`] `(a, b, c, d)` stands for `a + b·i + c·√2 + d·i√2`. Since
//! `1, i, √2, i√2` are linearly independent over ℚ the representation is unique,
//! so equality is structural. Dyadic values (denominators that are powers of two)
//! are carried as a [`ScaledRing`] or a [`ScaledMatrix`] with an explicit scale
//! exponent `k`, denoting `value / 2^k`.
//!
//! Every operation is exact. Components are `i64` and every operation checks for
//! overflow; the `checked_*` methods report it as [`RingError::Overflow`] and the
//! operator impls panic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("integer overflow in ring arithmetic")]
    Overflow,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value at scale {scale} is not in Z[sqrt2,i] after scaling to 2^{target}")]
    NotInRing { scale: u32, target: u32 },
}

pub type Result<T> = std::result::Result<T, RingError>;

/// Exact element `a + b·i + c·√2 + d·i√2` of ℤ[√2, i].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RingElem {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

fn ck(v: Option<i64>) -> Result<i64> {
    v.ok_or(RingError::Overflow)
}

impl RingElem {
    pub const ZERO: RingElem = RingElem::new(0, 0, 0, 0);
    pub const ONE: RingElem = RingElem::new(1, 0, 0, 0);
    pub const I: RingElem = RingElem::new(0, 1, 0, 0);
    pub const SQRT2: RingElem = RingElem::new(0, 0, 1, 0);
    pub const I_SQRT2: RingElem = RingElem::new(0, 0, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        RingElem { a, b, c, d }
    }

    pub const fn from_int(a: i64) -> Self {
        RingElem::new(a, 0, 0, 0)
    }

    pub fn components(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_components(c: [i64; 4]) -> Self {
        RingElem::new(c[0], c[1], c[2], c[3])
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn checked_add(&self, o: &RingElem) -> Result<RingElem> {
        Ok(RingElem::new(
            ck(self.a.checked_add(o.a))?,
            ck(self.b.checked_add(o.b))?,
            ck(self.c.checked_add(o.c))?,
            ck(self.d.checked_add(o.d))?,
        ))
    }

    pub fn checked_sub(&self, o: &RingElem) -> Result<RingElem> {
        self.checked_add(&o.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<RingElem> {
        Ok(RingElem::new(
            ck(self.a.checked_neg())?,
            ck(self.b.checked_neg())?,
            ck(self.c.checked_neg())?,
            ck(self.d.checked_neg())?,
        ))
    }

    /// Exact product:
    ///
    /// ```text
    /// [aa' − bb' + 2(cc' − dd')] + [ab' + ba' + 2(cd' + dc')] i
    ///   + [ac' + ca' − bd' − db'] √2 + [cb' + ad' + bc' + da'] i√2
    /// ```
    pub fn checked_mul(&self, o: &RingElem) -> Result<RingElem> {
        // i128 holds any single product exactly; the sums are still checked.
        let w = |x: i64| x as i128;
        let (a, b, c, d) = (w(self.a), w(self.b), w(self.c), w(self.d));
        let (a2, b2, c2, d2) = (w(o.a), w(o.b), w(o.c), w(o.d));
        let comb = |terms: [(i128, i128); 4], twice: [bool; 4]| -> Result<i64> {
            let mut acc: i128 = 0;
            for ((x, y), t) in terms.into_iter().zip(twice) {
                let p = x * y;
                let p = if t {
                    p.checked_mul(2).ok_or(RingError::Overflow)?
                } else {
                    p
                };
                acc = acc.checked_add(p).ok_or(RingError::Overflow)?;
            }
            i64::try_from(acc).map_err(|_| RingError::Overflow)
        };
        Ok(RingElem::new(
            comb(
                [(a, a2), (-b, b2), (c, c2), (-d, d2)],
                [false, false, true, true],
            )?,
            comb(
                [(a, b2), (b, a2), (c, d2), (d, c2)],
                [false, false, true, true],
            )?,
            comb([(a, c2), (c, a2), (-b, d2), (-d, b2)], [false; 4])?,
            comb([(c, b2), (a, d2), (b, c2), (d, a2)], [false; 4])?,
        ))
    }

    /// Multiplies every component by `2^k`.
    pub fn checked_shl(&self, k: u32) -> Result<RingElem> {
        if k == 0 {
            return Ok(*self);
        }
        let f = 1i64
            .checked_shl(k)
            .filter(|_| k < 63)
            .ok_or(RingError::Overflow)?;
        let s = |x: i64| ck(x.checked_mul(f));
        Ok(RingElem::new(
            s(self.a)?,
            s(self.b)?,
            s(self.c)?,
            s(self.d)?,
        ))
    }

    /// Complex conjugate: `a − b·i + c·√2 − d·i√2`.
    pub fn conj(&self) -> RingElem {
        RingElem::new(self.a, -self.b, self.c, -self.d)
    }

    /// `a² + b² + 2c² + 2d²`, the squared coefficient norm.
    pub fn norm_sq(&self) -> u128 {
        let sq = |x: i64| (x as i128 * x as i128) as u128;
        sq(self.a) + sq(self.b) + 2 * sq(self.c) + 2 * sq(self.d)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> u64 {
        self.components()
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_even(&self) -> bool {
        self.components().iter().all(|x| x % 2 == 0)
    }

    /// Floating-point approximation of `self / 2^scale`. Only for display and
    /// cross-checks.
    pub fn to_complex(&self, scale: u32) -> (f64, f64) {
        let s = std::f64::consts::SQRT_2;
        let div = 2f64.powi(scale as i32);
        (
            (self.a as f64 + self.c as f64 * s) / div,
            (self.b as f64 + self.d as f64 * s) / div,
        )
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, unit) in self.components().iter().zip(["", "i", "√2", "i√2"]) {
            match (*v, unit) {
                (0, _) => {}
                (v, "") => parts.push(format!("{v}")),
                (1, u) => parts.push(u.to_string()),
                (-1, u) => parts.push(format!("-{u}")),
                (v, u) => parts.push(format!("{v}{u}")),
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, o: RingElem) -> RingElem {
        self.checked_add(&o).expect("ring addition overflowed")
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, o: RingElem) -> RingElem {
        self.checked_sub(&o).expect("ring subtraction overflowed")
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.checked_neg().expect("ring negation overflowed")
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, o: RingElem) -> RingElem {
        self.checked_mul(&o)
            .expect("ring multiplication overflowed")
    }
}

/// `value / 2^scale`, kept in canonical form (no factor of two left to divide
/// out unless `scale == 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaledRing {
    value: RingElem,
    scale: u32,
}

impl ScaledRing {
    pub fn new(value: RingElem, scale: u32) -> Self {
        let mut s = ScaledRing { value, scale };
        s.canonicalize();
        s
    }

    pub fn integer(value: RingElem) -> Self {
        ScaledRing { value, scale: 0 }
    }

    pub fn value(&self) -> RingElem {
        self.value
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    fn canonicalize(&mut self) {
        if self.value.is_zero() {
            self.scale = 0;
            return;
        }
        while self.scale > 0 && self.value.is_even() {
            let v = self.value;
            self.value = RingElem::new(v.a / 2, v.b / 2, v.c / 2, v.d / 2);
            self.scale -= 1;
        }
    }

    pub fn checked_mul(&self, o: &ScaledRing) -> Result<ScaledRing> {
        Ok(ScaledRing::new(
            self.value.checked_mul(&o.value)?,
            self.scale + o.scale,
        ))
    }

    /// The integer ring element equal to `self · 2^k`, if it exists.
    pub fn rescale_to(&self, k: u32) -> Result<RingElem> {
        if k < self.scale {
            return Err(RingError::NotInRing {
                scale: self.scale,
                target: k,
            });
        }
        self.value.checked_shl(k - self.scale)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        self.value.to_complex(self.scale)
    }
}

/// Exact representation of `e^{ikπ/4}` for `k mod 8`.
pub fn phase_factor(k: u8) -> ScaledRing {
    let (v, s) = match k % 8 {
        0 => (RingElem::new(1, 0, 0, 0), 0),
        1 => (RingElem::new(0, 0, 1, 1), 1),
        2 => (RingElem::new(0, 1, 0, 0), 0),
        3 => (RingElem::new(0, 0, -1, 1), 1),
        4 => (RingElem::new(-1, 0, 0, 0), 0),
        5 => (RingElem::new(0, 0, -1, -1), 1),
        6 => (RingElem::new(0, -1, 0, 0), 0),
        _ => (RingElem::new(0, 0, 1, -1), 1),
    };
    ScaledRing { value: v, scale: s }
}

/// Dense matrix over ℤ[√2, i] denoting `entries / 2^scale`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScaledMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
    scale: u32,
}

impl fmt::Debug for ScaledMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ScaledMatrix {}x{} / 2^{}",
            self.rows, self.cols, self.scale
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl ScaledMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RingElem>, scale: u32) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(RingError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ScaledMatrix {
            rows,
            cols,
            entries,
            scale,
        })
    }

    pub fn from_rows(rows: Vec<Vec<RingElem>>, scale: u32) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(RingError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect(), scale)
    }

    pub fn zeros(rows: usize, cols: usize, scale: u32) -> Self {
        ScaledMatrix {
            rows,
            cols,
            entries: vec![RingElem::ZERO; rows * cols],
            scale,
        }
    }

    /// `factor · I` at the given scale.
    pub fn scaled_identity(dim: usize, factor: RingElem, scale: u32) -> Self {
        let mut m = Self::zeros(dim, dim, scale);
        for i in 0..dim {
            m.set(i, i, factor);
        }
        m
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, RingElem::ONE, 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn get(&self, r: usize, c: usize) -> RingElem {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RingElem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    /// Entry `(r, c)` as a canonical dyadic value.
    pub fn scaled_entry(&self, r: usize, c: usize) -> ScaledRing {
        ScaledRing::new(self.get(r, c), self.scale)
    }

    /// Exact product; scales add and no factor of two is divided out.
    pub fn checked_mul(&self, o: &ScaledMatrix) -> Result<ScaledMatrix> {
        if self.cols != o.rows {
            return Err(RingError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = ScaledMatrix::zeros(self.rows, o.cols, self.scale + o.scale);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.get(r, k);
                if lhs.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let rhs = o.get(k, c);
                    if rhs.is_zero() {
                        continue;
                    }
                    let acc = out.get(r, c).checked_add(&lhs.checked_mul(&rhs)?)?;
                    out.set(r, c, acc);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ScaledMatrix {
        let mut out = ScaledMatrix::zeros(self.cols, self.rows, self.scale);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ o`.
    pub fn checked_kron(&self, o: &ScaledMatrix) -> Result<ScaledMatrix> {
        let mut out =
            ScaledMatrix::zeros(self.rows * o.rows, self.cols * o.cols, self.scale + o.scale);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let x = self.get(r1, c1);
                if x.is_zero() {
                    continue;
                }
                for r2 in 0..o.rows {
                    for c2 in 0..o.cols {
                        out.set(
                            r1 * o.rows + r2,
                            c1 * o.cols + c2,
                            x.checked_mul(&o.get(r2, c2))?,
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplies every entry by a scaled ring value.
    pub fn checked_scale_by(&self, f: &ScaledRing) -> Result<ScaledMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.checked_mul(&f.value()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScaledMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            scale: self.scale + f.scale(),
        })
    }

    /// Divides out common factors of two from all entries at once.
    pub fn canonical(&self) -> ScaledMatrix {
        let mut m = self.clone();
        while m.scale > 0 && m.entries.iter().all(RingElem::is_even) {
            for e in &mut m.entries {
                *e = RingElem::new(e.a / 2, e.b / 2, e.c / 2, e.d / 2);
            }
            m.scale -= 1;
        }
        m
    }

    /// Same matrix with all entries expressed at scale `k`.
    pub fn rescale_to(&self, k: u32) -> Result<ScaledMatrix> {
        let c = self.canonical();
        if k < c.scale {
            return Err(RingError::NotInRing {
                scale: c.scale,
                target: k,
            });
        }
        let entries = c
            .entries
            .iter()
            .map(|e| e.checked_shl(k - c.scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScaledMatrix {
            rows: c.rows,
            cols: c.cols,
            entries,
            scale: k,
        })
    }

    /// Exact equality of the denoted matrices, independent of scale.
    pub fn same_value(&self, o: &ScaledMatrix) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.canonical() == o.canonical()
    }

    pub fn to_complex(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).to_complex(self.scale))
                    .collect()
            })
            .collect()
    }
}
