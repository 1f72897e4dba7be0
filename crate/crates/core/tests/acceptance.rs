// SPDX-License-Identifier: Apache-2.0

//! Acceptance run: one line per criterion, non-zero exit on any failure.
//! Set `GATESAT_LONG=1` to also attempt the multi-day Toffoli and AND runs.

mod common;

use std::time::{Duration, Instant};

use gatesat::cli::format::parse_target;
use gatesat::cnf::{
    at_most_k, bv_add, bv_neg, conditional_equal, exactly_one, toy, BitVec, CnfFormula, Lit, Model,
};
use gatesat::encode::{encode_instance, SynthesisProblem, TypeBound};
use gatesat::gates::{build_gate_set, gate_set_from_tokens, GateSet, PrimKind};
use gatesat::reversible::{check_table, encode_reversible, synth_reversible_min, TruthTableSpec};
use gatesat::ring::{RingElem, ScaledMatrix};
use gatesat::search::{
    find_min_circuit, minimize_type_count, DepthVerdict, SearchOptions, SearchOutcome,
};
use gatesat::solve::{
    solve_formula, solve_problem, Circuit, RawOutcome, SolverConfig, SynthesisOutcome,
};
use gatesat::target::{builtin, TargetSpec};
use gatesat::verify::{check_implements, simulate_exact};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{bfs_reversible, bfs_state_len, options, perms_of, set_f64, solver};
use PrimKind::*;

type Check = Result<String, String>;

/// SAT instances found by criteria 5 to 9, re-examined by criterion 10.
enum Witness {
    Unitary {
        problem: SynthesisProblem,
        circuit: Circuit,
        phase: u8,
    },
    Table {
        spec: TruthTableSpec,
        gs: GateSet,
        circuit: Circuit,
    },
}

#[derive(Default)]
struct Ledger {
    witnesses: Vec<Witness>,
}

impl Ledger {
    fn unitary(&mut self, problem: &SynthesisProblem, circuit: &Circuit, phase: u8) {
        self.witnesses.push(Witness::Unitary {
            problem: problem.with_depth(circuit.len()),
            circuit: circuit.clone(),
            phase,
        });
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rand_elem(rng: &mut StdRng, r: i64) -> RingElem {
    RingElem::from_components([(); 4].map(|_| rng.gen_range(-r..=r)))
}

fn criterion1() -> Check {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..10_000 {
        let (u, v, w) = (
            rand_elem(&mut rng, 1000),
            rand_elem(&mut rng, 1000),
            rand_elem(&mut rng, 1000),
        );
        let (a, b) = (u.to_complex(0), v.to_complex(0));
        let want = (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let got = (u * v).to_complex(0);
        let scale = 1.0f64.max(want.0.hypot(want.1));
        ensure(
            (got.0 - want.0).abs() <= 1e-9 * scale && (got.1 - want.1).abs() <= 1e-9 * scale,
            || format!("{u} * {v}: {got:?} vs {want:?}"),
        )?;
        let laws = u + v == v + u
            && u * v == v * u
            && (u + v) + w == u + (v + w)
            && (u * v) * w == u * (v * w)
            && u * (v + w) == u * v + u * w
            && u + RingElem::ZERO == u
            && u * RingElem::ONE == u
            && u + (-u) == RingElem::ZERO;
        ensure(laws, || format!("ring law fails for {u}, {v}, {w}"))?;
    }
    Ok("10000 pairs".into())
}

fn criterion2() -> Check {
    let mut rng = StdRng::seed_from_u64(2);
    let two = RingElem::from_int(2);
    let by4 = [two, RingElem::new(0, 0, 1, 1), RingElem::new(0, 0, 1, -1)];
    let by2 = [
        RingElem::SQRT2,
        RingElem::I_SQRT2,
        RingElem::new(1, 1, 0, 0),
        RingElem::new(1, -1, 0, 0),
    ];
    for _ in 0..10_000 {
        let u = rand_elem(&mut rng, 1 << 20);
        let n = u.norm_sq();
        for f in by4 {
            ensure((f * u).norm_sq() == 4 * n, || format!("({f})·{u}"))?;
        }
        for f in by2 {
            ensure((f * u).norm_sq() == 2 * n, || format!("({f})·{u}"))?;
        }
        ensure((RingElem::I * u).norm_sq() == n, || format!("i·{u}"))?;
    }
    Ok("10000 elements, 8 factors each".into())
}

fn criterion3() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let prims = [X, Y, Z, H, S, Sdg, T, Tdg, Cnot, Cz];
    let sets: Vec<GateSet> = (1..=3)
        .map(|n| build_gate_set(n, &prims, None).unwrap())
        .collect();
    let mut components = 0u64;
    for k in 0..1000 {
        let gs = &sets[k % 3];
        let d = rng.gen_range(1..=12);
        let mut acc = ScaledMatrix::identity(gs.dim());
        for i in 0..d {
            let j = rng.gen_range(0..gs.len());
            acc = gs
                .gate(j)
                .expanded
                .checked_mul(&acc)
                .map_err(|e| e.to_string())?;
            let limit = 1u64 << ((3 * (i as u32 + 1)).div_ceil(2) + 1);
            for e in acc.entries() {
                components += 4;
                ensure(e.max_abs() < limit, || {
                    format!("circuit {k} step {i}: {e} reaches {limit}")
                })?;
            }
        }
    }
    Ok(format!(
        "1000 circuits, {components} components, 0 violations"
    ))
}

fn assume_value(x: &BitVec, v: i64) -> Vec<Lit> {
    x.bits()
        .iter()
        .enumerate()
        .map(|(k, &b)| if (v >> k) & 1 == 1 { b } else { !b })
        .collect()
}

fn criterion4() -> Check {
    let wrap = |v: i64, w: usize| (v + (1 << (w - 1))).rem_euclid(1 << w) - (1 << (w - 1));
    let mut checks = 0u64;
    for w in 1..=6 {
        let mut f = CnfFormula::new();
        let g = f.new_var();
        let x = BitVec::fresh(&mut f, w);
        let y = BitVec::fresh(&mut f, w);
        let s = bv_add(&mut f, &x, &y).map_err(|e| e.to_string())?;
        let nx = bv_neg(&mut f, &x);
        let mut eq = CnfFormula::new();
        let ge = eq.new_var();
        let ex = BitVec::fresh(&mut eq, w);
        let ey = BitVec::fresh(&mut eq, w);
        conditional_equal(&mut eq, ge, &ex, &ey).map_err(|e| e.to_string())?;
        let (lo, hi) = BitVec::range(w);
        for a in lo as i64..=hi as i64 {
            for b in lo as i64..=hi as i64 {
                let mut lits = assume_value(&x, a);
                lits.extend(assume_value(&y, b));
                lits.push(g);
                let m = toy::solve(&f, &lits).ok_or(format!("adder has no model at w={w}"))?;
                ensure(s.value_in(&m) == Some(wrap(a + b, w)), || {
                    format!("w={w}: {a}+{b}")
                })?;
                ensure(nx.value_in(&m) == Some(wrap(-a, w)), || {
                    format!("w={w}: -{a}")
                })?;
                let mut lits = assume_value(&ex, a);
                lits.extend(assume_value(&ey, b));
                lits.push(ge);
                ensure(toy::solve(&eq, &lits).is_some() == (a == b), || {
                    format!("w={w}: {a}={b}")
                })?;
                *lits.last_mut().unwrap() = !ge;
                ensure(toy::solve(&eq, &lits).is_some(), || {
                    format!("w={w}: unguarded {a},{b}")
                })?;
                checks += 4;
            }
        }
    }
    for n in 1..=10usize {
        let mut one = CnfFormula::new();
        let xs: Vec<Lit> = (0..n).map(|_| one.new_var()).collect();
        exactly_one(&mut one, &xs).map_err(|e| e.to_string())?;
        for k in 0..=n {
            let mut f = CnfFormula::new();
            let ys: Vec<Lit> = (0..n).map(|_| f.new_var()).collect();
            at_most_k(&mut f, &ys, k);
            for mask in 0u32..(1 << n) {
                let pick = |vs: &[Lit]| -> Vec<Lit> {
                    vs.iter()
                        .enumerate()
                        .map(|(i, &v)| if mask >> i & 1 == 1 { v } else { !v })
                        .collect()
                };
                let ones = mask.count_ones() as usize;
                ensure(toy::solve(&f, &pick(&ys)).is_some() == (ones <= k), || {
                    format!("at_most_{k} of {n}, mask {mask:b}")
                })?;
                if k == 0 {
                    ensure(
                        toy::solve(&one, &pick(&xs)).is_some() == (ones == 1),
                        || format!("exactly_one of {n}, mask {mask:b}"),
                    )?;
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} assignments, 0 mismatches"))
}

fn verified(p: &SynthesisProblem, r: &gatesat::search::OptimalResult) -> Result<(), String> {
    let rep = check_implements(&r.circuit, &p.gate_set, &p.target, &[r.phase]);
    ensure(rep.pass, || rep.to_string())
}

fn criterion5(ledger: &mut Ledger) -> Check {
    let gs = build_gate_set(1, &[H, T, Tdg], None).unwrap();
    let mats = set_f64(&gs);
    let words = common::bfs_unitaries(&mats, 2, 4);
    let mut n = 0;
    for (_, len, word) in words.iter().filter(|w| w.1 > 0) {
        let u = simulate_exact(
            &Circuit {
                n: 1,
                steps: word.clone(),
            },
            &gs,
        )
        .map_err(|e| e.to_string())?;
        let p = SynthesisProblem::new(
            TargetSpec::matrix(u).map_err(|e| e.to_string())?,
            gs.clone(),
            1,
        );
        let out = find_min_circuit(&p, &options(4)).map_err(|e| e.to_string())?;
        let r = out.found().ok_or(format!("{word:?}: not found"))?;
        ensure(r.minimal_d == *len, || {
            format!("{word:?}: d={} vs BFS {len}", r.minimal_d)
        })?;
        ensure(r.optimal, || format!("{word:?}: not proven optimal"))?;
        verified(&p, r)?;
        ledger.unitary(&p, &r.circuit, r.phase);
        n += 1;
    }
    Ok(format!("{n} targets, 100% agreement"))
}

fn criterion6(ledger: &mut Ledger) -> Check {
    let gs = build_gate_set(2, &[Cnot], None).unwrap();
    ensure(gs.len() == 2, || "expected CNOT01 and CNOT10".into())?;
    let p = SynthesisProblem::new(
        TargetSpec::matrix(builtin::swap().unwrap()).unwrap(),
        gs.clone(),
        1,
    );
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut verdicts = Vec::new();
    for d in 1..=3 {
        let (o, _) = solve_problem(&p.with_depth(d), &solver(), dir.path(), &|| false)
            .map_err(|e| e.to_string())?;
        verdicts.push(o.to_string());
        match (d, o) {
            (1 | 2, SynthesisOutcome::Unsat) => {}
            (3, SynthesisOutcome::Sat { circuit, phase }) => {
                let rep = check_implements(&circuit, &gs, &p.target, &[phase]);
                ensure(rep.pass, || rep.to_string())?;
                ledger.unitary(&p, &circuit, phase);
            }
            (d, o) => return Err(format!("d={d}: {o}")),
        }
    }
    let out = std::process::Command::new(common::gatesat_bin())
        .args([
            "synth",
            "--builtin",
            "swap",
            "--gates",
            "CNOT",
            "--max-d",
            "4",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}", out.status.code())
    })?;
    let absent = std::process::Command::new(common::gatesat_bin())
        .args([
            "synth",
            "--builtin",
            "swap",
            "--gates",
            "CNOT",
            "--max-d",
            "2",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(absent.status.code() == Some(1), || {
        format!("exit {:?} for max-d 2", absent.status.code())
    })?;
    Ok(format!(
        "d=1,2,3: {}; exit codes 0 and 1",
        verdicts.join(",")
    ))
}

fn criterion7(ledger: &mut Ledger) -> Check {
    let gs = build_gate_set(1, &[H, T, Tdg], None).unwrap();
    let ts = gs.indices_of(&[T, Tdg]);
    let target = TargetSpec::matrix(builtin::gate(S, &[0], 1).unwrap()).unwrap();
    let mut p = SynthesisProblem::new(target, gs.clone(), 1);
    p.type_bounds.push(TypeBound {
        gates: ts.clone(),
        max_count: 1,
    });
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for d in 1..=4 {
        let (o, _) = solve_problem(&p.with_depth(d), &solver(), dir.path(), &|| false)
            .map_err(|e| e.to_string())?;
        ensure(
            matches!(o, SynthesisOutcome::Unsat | SynthesisOutcome::Infeasible(_)),
            || format!("at_most 1, d={d}: {o}"),
        )?;
    }
    p.type_bounds[0].max_count = 2;
    let (o, _) = solve_problem(&p.with_depth(2), &solver(), dir.path(), &|| false)
        .map_err(|e| e.to_string())?;
    let SynthesisOutcome::Sat { circuit, phase } = o else {
        return Err(format!("at_most 2, d=2: {o}"));
    };
    ledger.unitary(&p, &circuit, phase);
    let mut free = p.clone();
    free.type_bounds.clear();
    let r = minimize_type_count(&free, &ts, &options(4))
        .map_err(|e| e.to_string())?
        .ok_or("no circuit for S within d ≤ 4")?;
    ensure(r.count == 2 && r.optimal, || {
        format!("minimal T-count {} (optimal {})", r.count, r.optimal)
    })?;
    ledger.unitary(&free, &r.circuit, r.phase);
    let mats = set_f64(&gs);
    let want = common::gate_f64(S, &[0], 1);
    let mut oracle = usize::MAX;
    for len in 0..=4u32 {
        for code in 0..3usize.pow(len) {
            let word: Vec<usize> = (0..len).map(|q| code / 3usize.pow(q) % 3).collect();
            if common::max_diff(&common::word_f64(&mats, &word, 2), &want) < 1e-9 {
                oracle = oracle.min(word.iter().filter(|j| ts.contains(j)).count());
            }
        }
    }
    ensure(oracle == 2, || format!("oracle T-count {oracle}"))?;
    Ok("at_most 1 UNSAT for d=1..4, at_most 2 SAT at d=2, T-count 2 = oracle".into())
}

fn criterion8(ledger: &mut Ledger) -> Check {
    let gs = build_gate_set(3, &[H, Cnot], None).unwrap();
    let target = builtin::ghz(3).map_err(|e| e.to_string())?;
    let TargetSpec::States(pairs) = &target else {
        return Err("GHZ target is not a state mapping".into());
    };
    let c = |v: &gatesat::target::ScaledVector| -> Vec<common::C> {
        (0..v.len()).map(|r| v.entry(r).to_complex()).collect()
    };
    let oracle = bfs_state_len(&set_f64(&gs), &c(&pairs[0].input), &c(&pairs[0].output), 3);
    let p = SynthesisProblem::new(target.clone(), gs, 1);
    let out = find_min_circuit(&p, &options(5)).map_err(|e| e.to_string())?;
    let r = out.found().ok_or("GHZ-3 not found")?;
    ensure(
        oracle == Some(r.minimal_d) && r.minimal_d == 3 && r.optimal,
        || format!("d={} oracle={oracle:?}", r.minimal_d),
    )?;
    verified(&p, r)?;
    ledger.unitary(&p, &r.circuit, r.phase);
    Ok(format!(
        "d=3 ({})",
        r.circuit.labels(&p.gate_set).join(", ")
    ))
}

fn criterion9(ledger: &mut Ledger) -> Check {
    let swap = TruthTableSpec::from_permutation(2, |x| ((x & 1) << 1) | (x >> 1)).unwrap();
    let gs = build_gate_set(2, &[Cnot], None).unwrap();
    let rows: Vec<_> = (0..4).map(|x| (x, 3, ((x & 1) << 1) | (x >> 1))).collect();
    let oracle = bfs_reversible(&perms_of(&gs), 4, &rows, 4);
    let out = synth_reversible_min(&swap, &gs, &options(4)).map_err(|e| e.to_string())?;
    let r = out.found().ok_or("reversible SWAP not found")?;
    ensure(r.minimal_d == 3 && oracle == Some(3) && r.optimal, || {
        format!("SWAP d={} oracle={oracle:?}", r.minimal_d)
    })?;
    ledger.witnesses.push(Witness::Table {
        spec: swap,
        gs,
        circuit: r.circuit.clone(),
    });

    let toffoli =
        TruthTableSpec::from_permutation(3, |x| if x & 6 == 6 { x ^ 1 } else { x }).unwrap();
    let affine = build_gate_set(3, &[X, Cnot], None).unwrap();
    let rows: Vec<_> = (0..8)
        .map(|x| (x, 7, if x & 6 == 6 { x ^ 1 } else { x }))
        .collect();
    ensure(
        bfs_reversible(&perms_of(&affine), 8, &rows, 6).is_none(),
        || "BFS reaches Toffoli".into(),
    )?;
    match synth_reversible_min(&toffoli, &affine, &options(6)).map_err(|e| e.to_string())? {
        SearchOutcome::Exhausted { record } => {
            let unsats = record
                .iter()
                .filter(|(_, v)| *v == DepthVerdict::Unsat)
                .count();
            ensure(unsats == 6, || format!("{unsats} UNSAT depths"))?;
        }
        other => return Err(format!("Toffoli from X/CNOT: {other:?}")),
    }
    Ok("SWAP d=3 = BFS; Toffoli UNSAT for d=1..6 = BFS".into())
}

fn selected_per_step(m: &Model, selectors: &[Vec<Lit>]) -> Vec<usize> {
    selectors
        .iter()
        .map(|row| {
            row.iter()
                .filter(|&&s| m.lit_value(s) == Some(true))
                .count()
        })
        .collect()
}

fn criterion10(ledger: &Ledger) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = solver();
    for (k, w) in ledger.witnesses.iter().enumerate() {
        let (f, selectors) = match w {
            Witness::Unitary {
                problem,
                circuit,
                phase,
            } => {
                let rep = check_implements(circuit, &problem.gate_set, &problem.target, &[*phase]);
                ensure(rep.pass, || format!("witness {k}: {rep}"))?;
                if circuit.is_empty() {
                    continue;
                }
                let (f, vm) = encode_instance(problem).map_err(|e| e.to_string())?;
                (f, vm.selectors().to_vec())
            }
            Witness::Table { spec, gs, circuit } => {
                check_table(circuit, gs, spec).map_err(|e| format!("witness {k}: {e}"))?;
                let (f, vm) =
                    encode_reversible(spec, gs, circuit.len()).map_err(|e| e.to_string())?;
                (f, vm.selectors().to_vec())
            }
        };
        let (raw, _) = solve_formula(&f, &cfg, dir.path(), &format!("w{k}"), &|| false)
            .map_err(|e| e.to_string())?;
        let RawOutcome::Sat(m) = raw else {
            return Err(format!("witness {k}: re-solve gave {raw:?}"));
        };
        let counts = selected_per_step(&m, &selectors);
        ensure(counts.iter().all(|&c| c == 1), || {
            format!("witness {k}: selectors per step {counts:?}")
        })?;
    }
    Ok(format!(
        "{} SAT results, 0 discrepancies",
        ledger.witnesses.len()
    ))
}

fn criterion11() -> Check {
    let third =
        r#"{"n": 1, "scale": 0, "entries": [[[0.3333,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0]]]}"#;
    match parse_target(third) {
        Err(e) => ensure(e.to_string().contains("$.entries[0][0][0]"), || {
            format!("diagnostic: {e}")
        })?,
        Ok(_) => return Err("entry 1/3 accepted".into()),
    }
    let eighth =
        r#"{"n": 1, "scale": 3, "entries": [[[1,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0]]]}"#;
    let target = parse_target(eighth).map_err(|e| e.to_string())?;
    let gs = build_gate_set(1, &[H, T], None).unwrap();
    let p = SynthesisProblem::new(target, gs, 2);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let never = SolverConfig::new("/bin/false").map_err(|e| e.to_string())?;
    let (o, run) = solve_problem(&p, &never, dir.path(), &|| false).map_err(|e| e.to_string())?;
    ensure(matches!(o, SynthesisOutcome::Infeasible(_)), || {
        format!("d=2 gave {o}")
    })?;
    let written = std::fs::read_dir(dir.path())
        .map_err(|e| e.to_string())?
        .count();
    ensure(written == 0 && run.variables == 0, || {
        "an instance was written".into()
    })?;
    Ok("1/3 rejected at ingestion; 1/8 target infeasible at d=2 without a solver call".into())
}

fn criterion12() -> Check {
    let dir = std::env::var("GATESAT_ARTIFACTS").unwrap_or_else(|_| "gatesat-long".into());
    let opts = |d: usize, sub: &str| {
        let mut o = SearchOptions::new(SolverConfig::discover().unwrap_or_else(|_| solver()), d);
        o.d_min = d;
        o.artifacts = Some(std::path::Path::new(&dir).join(sub));
        o
    };
    let g15 =
        gate_set_from_tokens(3, &["H", "T", "Tdg", "CNOT"], None).map_err(|e| e.to_string())?;
    let p = SynthesisProblem::new(
        TargetSpec::matrix(builtin::toffoli().unwrap()).unwrap(),
        g15,
        15,
    );
    let r = find_min_circuit(&p, &opts(15, "toffoli")).map_err(|e| e.to_string())?;
    ensure(r.found().is_some(), || "Toffoli: no circuit at d=15".into())?;
    let g33 = gate_set_from_tokens(
        3,
        &["X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "CNOT", "CZ"],
        None,
    )
    .map_err(|e| e.to_string())?;
    let and = builtin::and().map_err(|e| e.to_string())?;
    let p = SynthesisProblem::new(and, g33, 10);
    let r = find_min_circuit(&p, &opts(10, "and")).map_err(|e| e.to_string())?;
    ensure(r.found().is_some(), || "AND: no circuit at d=10".into())?;
    Ok("Toffoli SAT at d=15, AND SAT at d=10".into())
}

fn main() {
    let mut ledger = Ledger::default();
    let mut failed = 0;
    let mut run =
        |id: u32, name: &str, limit: Duration, check: &mut dyn FnMut(&mut Ledger) -> Check| {
            let start = Instant::now();
            let result = check(&mut ledger);
            let t = start.elapsed();
            let result = match result {
                Ok(detail) if t > limit => Err(format!(
                    "{detail}; took {:.1}s, limit {}s",
                    t.as_secs_f64(),
                    limit.as_secs()
                )),
                other => other,
            };
            match result {
                Ok(detail) => println!("[PASS] {id:>2} {name} ({:.2}s): {detail}", t.as_secs_f64()),
                Err(why) => {
                    failed += 1;
                    println!("[FAIL] {id:>2} {name} ({:.2}s): {why}", t.as_secs_f64());
                }
            }
        };
    let secs = Duration::from_secs;
    run(1, "ring correctness", secs(10), &mut |_| criterion1());
    run(2, "norm scaling identities", secs(5), &mut |_| criterion2());
    run(
        3,
        "coefficient bound on random circuits",
        secs(60),
        &mut |_| criterion3(),
    );
    run(4, "bit-blasting soundness", secs(60), &mut |_| criterion4());
    run(
        5,
        "one-qubit oracle equivalence",
        secs(300),
        &mut criterion5,
    );
    run(6, "SWAP milestone", secs(60), &mut criterion6);
    run(7, "T-count minimization", secs(300), &mut criterion7);
    run(8, "GHZ-3 state preparation", secs(300), &mut criterion8);
    run(9, "reversible suite", secs(600), &mut criterion9);
    run(10, "end-to-end soundness", secs(600), &mut |l| {
        criterion10(l)
    });
    run(11, "infeasibility precheck", secs(10), &mut |_| {
        criterion11()
    });
    if std::env::var("GATESAT_LONG").is_ok_and(|v| v == "1") {
        run(
            12,
            "published Toffoli and AND depths",
            Duration::MAX,
            &mut |_| criterion12(),
        );
    } else {
        println!("[SKIP] 12 published Toffoli and AND depths: set GATESAT_LONG=1 (multi-day run)");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
