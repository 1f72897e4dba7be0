// SPDX-License-Identifier: Apache-2.0

//! Small reference DPLL used to check encodings exhaustively on tiny formulas.
//! It scans every clause on each propagation round, so it is only meant for
//! formulas with a few thousand clauses.

use super::{CnfFormula, Lit, Model};

#[derive(Clone)]
struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    fn lit(&self, l: Lit) -> Option<bool> {
        self.values[l.var() as usize].map(|b| b != l.is_negated())
    }

    fn set(&mut self, l: Lit) -> bool {
        match self.lit(l) {
            Some(v) => v,
            None => {
                self.values[l.var() as usize] = Some(!l.is_negated());
                true
            }
        }
    }

    fn into_model(self) -> Model {
        Model::from_assignment(
            self.values
                .into_iter()
                .enumerate()
                .skip(1)
                .filter_map(|(v, b)| b.map(|b| (v as u32, b))),
        )
    }
}

/// Unit propagation to fixpoint; `false` on conflict.
fn propagate_in(f: &CnfFormula, a: &mut Assignment) -> bool {
    loop {
        let mut changed = false;
        for clause in f.clauses() {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in clause {
                match a.lit(l) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => return false,
                (1, Some(l)) => {
                    a.set(l);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn start(f: &CnfFormula, assumptions: &[Lit]) -> Option<Assignment> {
    let mut a = Assignment {
        values: vec![None; f.var_count() as usize + 1],
    };
    for &l in assumptions {
        if !a.set(l) {
            return None;
        }
    }
    Some(a)
}

/// Unit propagation only; returns the (possibly partial) assignment, or `None`
/// on conflict.
pub fn propagate(f: &CnfFormula, assumptions: &[Lit]) -> Option<Model> {
    let mut a = start(f, assumptions)?;
    propagate_in(f, &mut a).then(|| a.into_model())
}

fn dpll(f: &CnfFormula, mut a: Assignment) -> Option<Assignment> {
    if !propagate_in(f, &mut a) {
        return None;
    }
    let branch = f.clauses().find_map(|clause| {
        if clause.iter().any(|&l| a.lit(l) == Some(true)) {
            return None;
        }
        clause.iter().copied().find(|&l| a.lit(l).is_none())
    });
    let Some(l) = branch else {
        // Every clause satisfied; fill don't-cares with false.
        for v in a.values.iter_mut().skip(1) {
            v.get_or_insert(false);
        }
        return Some(a);
    };
    let mut left = a.clone();
    left.set(l);
    if let Some(m) = dpll(f, left) {
        return Some(m);
    }
    a.set(!l);
    dpll(f, a)
}

/// Complete search; returns a total model when satisfiable.
pub fn solve(f: &CnfFormula, assumptions: &[Lit]) -> Option<Model> {
    let a = start(f, assumptions)?;
    dpll(f, a).map(Assignment::into_model)
}

/// Number of assignments to `vars` that extend to a model.
pub fn count_models_over(f: &CnfFormula, vars: &[Lit]) -> usize {
    assert!(vars.len() <= 20);
    (0u32..(1 << vars.len()))
        .filter(|mask| {
            let assume: Vec<Lit> = vars
                .iter()
                .enumerate()
                .map(|(k, &x)| if mask >> k & 1 == 1 { x } else { !x })
                .collect();
            solve(f, &assume).is_some()
        })
        .count()
}

/// Whether `m` satisfies every clause of `f`.
pub fn satisfies(f: &CnfFormula, m: &Model) -> bool {
    f.clauses()
        .all(|c| c.iter().any(|&l| m.lit_value(l) == Some(true)))
}
