// SPDX-License-Identifier: Apache-2.0

//! Independent oracles: floating-point gate matrices built from their
//! textbook definitions, and breadth-first search over gate words.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use gatesat::gates::{GateSet, PrimKind};
use gatesat::search::SearchOptions;
use gatesat::solve::SolverConfig;

pub type C = (f64, f64);
pub type CMat = Vec<Vec<C>>;

pub fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

fn local(kind: PrimKind) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = (0.0, 0.0);
    let o = (1.0, 0.0);
    let w = (s, s);
    let perm = |dim: usize, f: &dyn Fn(usize) -> usize| -> CMat {
        let mut m = vec![vec![z; dim]; dim];
        for c in 0..dim {
            m[f(c)][c] = o;
        }
        m
    };
    match kind {
        PrimKind::X => vec![vec![z, o], vec![o, z]],
        PrimKind::Y => vec![vec![z, (0.0, -1.0)], vec![(0.0, 1.0), z]],
        PrimKind::Z => vec![vec![o, z], vec![z, (-1.0, 0.0)]],
        PrimKind::H => vec![vec![(s, 0.0), (s, 0.0)], vec![(s, 0.0), (-s, 0.0)]],
        PrimKind::S => vec![vec![o, z], vec![z, (0.0, 1.0)]],
        PrimKind::Sdg => vec![vec![o, z], vec![z, (0.0, -1.0)]],
        PrimKind::T => vec![vec![o, z], vec![z, w]],
        PrimKind::Tdg => vec![vec![o, z], vec![z, (s, -s)]],
        PrimKind::Cnot => perm(4, &|c| if c >= 2 { c ^ 1 } else { c }),
        PrimKind::Cz => {
            let mut m = perm(4, &|c| c);
            m[3][3] = (-1.0, 0.0);
            m
        }
        PrimKind::Toffoli => perm(8, &|c| if c >= 6 { c ^ 1 } else { c }),
    }
}

/// `n`-qubit matrix of a gate, qubit 0 being the most significant bit.
pub fn gate_f64(kind: PrimKind, ops: &[usize], n: usize) -> CMat {
    let g = local(kind);
    let dim = 1 << n;
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let mut m = vec![vec![(0.0, 0.0); dim]; dim];
    for c in 0..dim {
        let lc = ops.iter().fold(0, |acc, &q| (acc << 1) | bit(c, q));
        for (lr, row) in g.iter().enumerate() {
            let v = row[lc];
            if v == (0.0, 0.0) {
                continue;
            }
            let mut r = c;
            for (k, &q) in ops.iter().enumerate() {
                let b = (lr >> (ops.len() - 1 - k)) & 1;
                r = (r & !(1 << (n - 1 - q))) | (b << (n - 1 - q));
            }
            m[r][c] = v;
        }
    }
    m
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == (0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] = cadd(out[i][j], cmul(a[i][k], b[k][j]));
            }
        }
    }
    out
}

pub fn identity(dim: usize) -> CMat {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
        .fold(0.0, f64::max)
}

fn key(m: &CMat) -> Vec<(i64, i64)> {
    m.iter()
        .flatten()
        .map(|&(re, im)| ((re * 1e6).round() as i64, (im * 1e6).round() as i64))
        .collect()
}

/// Gate matrices of a gate set, computed independently of the library.
pub fn set_f64(gs: &GateSet) -> Vec<CMat> {
    gs.gates()
        .iter()
        .map(|g| gate_f64(g.kind(), &g.operands, gs.n()))
        .collect()
}

/// Word of gate indices, first applied first.
pub fn word_f64(gates: &[CMat], word: &[usize], dim: usize) -> CMat {
    word.iter()
        .fold(identity(dim), |acc, &j| matmul(&gates[j], &acc))
}

/// Every distinct product of at most `max_len` gates, each with its minimal
/// length and one witness word.
pub fn bfs_unitaries(gates: &[CMat], dim: usize, max_len: usize) -> Vec<(CMat, usize, Vec<usize>)> {
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    let start = identity(dim);
    seen.insert(key(&start));
    let mut out = vec![(start.clone(), 0, Vec::new())];
    let mut frontier = vec![(start, Vec::new())];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (m, w) in &frontier {
            for (j, g) in gates.iter().enumerate() {
                let p = matmul(g, m);
                if seen.insert(key(&p)) {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(j);
                    out.push((p.clone(), len, w2.clone()));
                    next.push((p, w2));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Minimal word length reaching `target` exactly, by BFS.
pub fn bfs_min_len(gates: &[CMat], target: &CMat, max_len: usize) -> Option<usize> {
    let dim = target.len();
    bfs_unitaries(gates, dim, max_len)
        .into_iter()
        .find(|(m, _, _)| max_diff(m, target) < 1e-9)
        .map(|(_, l, _)| l)
}

/// Minimal length of a word mapping `input` to `output` (a state oracle).
pub fn bfs_state_len(gates: &[CMat], input: &[C], output: &[C], max_len: usize) -> Option<usize> {
    let apply = |g: &CMat, v: &[C]| -> Vec<C> {
        g.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold((0.0, 0.0), |acc, (&a, &b)| cadd(acc, cmul(a, b)))
            })
            .collect()
    };
    let close = |a: &[C], b: &[C]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x.0 - y.0).abs() < 1e-9 && (x.1 - y.1).abs() < 1e-9)
    };
    let vkey = |v: &[C]| -> Vec<(i64, i64)> {
        v.iter()
            .map(|&(re, im)| ((re * 1e6).round() as i64, (im * 1e6).round() as i64))
            .collect()
    };
    if close(input, output) {
        return Some(0);
    }
    let mut seen = HashSet::new();
    seen.insert(vkey(input));
    let mut frontier = vec![input.to_vec()];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for v in &frontier {
            for g in gates {
                let w = apply(g, v);
                if close(&w, output) {
                    return Some(len);
                }
                if seen.insert(vkey(&w)) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    None
}

/// Classical gate as a permutation of basis indices.
pub fn perm_of(kind: PrimKind, ops: &[usize], n: usize) -> Vec<usize> {
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let flip = |x: usize, q: usize| x ^ (1 << (n - 1 - q));
    (0..1usize << n)
        .map(|x| match kind {
            PrimKind::X => flip(x, ops[0]),
            PrimKind::Cnot if bit(x, ops[0]) == 1 => flip(x, ops[1]),
            PrimKind::Toffoli if bit(x, ops[0]) == 1 && bit(x, ops[1]) == 1 => flip(x, ops[2]),
            PrimKind::Cnot | PrimKind::Toffoli => x,
            other => panic!("{other:?} is not classical"),
        })
        .collect()
}

pub fn perms_of(gs: &GateSet) -> Vec<Vec<usize>> {
    gs.gates()
        .iter()
        .map(|g| perm_of(g.kind(), &g.operands, gs.n()))
        .collect()
}

/// Minimal word length whose permutation satisfies every `(input, allowed
/// output mask, output value)` row, by BFS over permutations.
pub fn bfs_reversible(
    gates: &[Vec<usize>],
    dim: usize,
    rows: &[(usize, usize, usize)],
    max_len: usize,
) -> Option<usize> {
    let ok = |p: &[usize]| rows.iter().all(|&(x, mask, y)| p[x] & mask == y & mask);
    let start: Vec<usize> = (0..dim).collect();
    if ok(&start) {
        return Some(0);
    }
    let mut dist: HashMap<Vec<usize>, usize> = HashMap::new();
    dist.insert(start.clone(), 0);
    let mut q = VecDeque::from([start]);
    while let Some(p) = q.pop_front() {
        let d = dist[&p];
        if d == max_len {
            continue;
        }
        for g in gates {
            let np: Vec<usize> = p.iter().map(|&v| g[v]).collect();
            if dist.contains_key(&np) {
                continue;
            }
            if ok(&np) {
                return Some(d + 1);
            }
            dist.insert(np.clone(), d + 1);
            q.push_back(np);
        }
    }
    None
}

pub fn gatesat_bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_gatesat"))
}

pub fn solver() -> SolverConfig {
    SolverConfig::bundled(gatesat_bin()).expect("the gatesat binary is built for tests")
}

pub fn options(d_max: usize) -> SearchOptions {
    SearchOptions::new(solver(), d_max)
}

/// Published 15-gate Toffoli circuit on qubits 0, 1 (controls) and 2 (target), in
/// application order.
pub fn published_toffoli() -> Vec<(PrimKind, Vec<usize>)> {
    use PrimKind::*;
    vec![
        (H, vec![2]),
        (T, vec![2]),
        (Cnot, vec![0, 2]),
        (Tdg, vec![2]),
        (Cnot, vec![1, 2]),
        (T, vec![2]),
        (Cnot, vec![0, 2]),
        (Tdg, vec![2]),
        (Cnot, vec![1, 2]),
        (Cnot, vec![0, 1]),
        (H, vec![2]),
        (Tdg, vec![1]),
        (Cnot, vec![0, 1]),
        (T, vec![0]),
        (T, vec![1]),
    ]
}

/// Published 10-gate AND circuit, qubit 2 starting in |0⟩.
pub fn published_and() -> Vec<(PrimKind, Vec<usize>)> {
    use PrimKind::*;
    vec![
        (H, vec![2]),
        (T, vec![2]),
        (Cnot, vec![0, 2]),
        (Tdg, vec![2]),
        (Cnot, vec![1, 2]),
        (T, vec![2]),
        (Cnot, vec![0, 2]),
        (Tdg, vec![2]),
        (H, vec![2]),
        (Sdg, vec![2]),
    ]
}
