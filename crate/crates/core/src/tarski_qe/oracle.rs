//! Reference evaluator that searches quantifier witnesses explicitly.
//!
//! Witnesses are built cell by cell from the minterms of the variables in
//! scope. Inside a cell the candidates are its first `j` elements and the
//! cell minus its first `j` elements for `j <= B`, and, for infinite cells,
//! an infinite half with infinite complement. With `m` the largest `C_n`
//! index (at least 1) and `r` the quantifier depth of the formula starting
//! at the quantifier, `B = m * 2^(r - 1)`: below that depth, sizes of at
//! least `m * 2^(r - 1)` are indistinguishable, so larger exact choices add
//! nothing.
//!
//! The search shares no code with the elimination engine beyond term
//! syntax; sets are [`PeriodicSet`]s, evaluated pointwise.

use crate::boolalg::{BoolEnv, PeriodicSet};
use crate::formula::{BoolAtom, BoolFormula, BoolTerm, Formula};

use super::QeError;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub max_depth: usize,
    /// Cap on the total number of candidate witnesses tried.
    pub max_candidates: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_depth: 3, max_candidates: 200_000_000 }
    }
}

/// Truth value of `f` at `env` by explicit witness search.
pub fn bounded_witness_evaluate(f: &BoolFormula, env: &BoolEnv, config: &OracleConfig) -> Result<bool, QeError> {
    if let Some(v) = f.free_vars().into_iter().find(|v| !env.contains_key(v)) {
        return Err(QeError::UnboundVariable(v));
    }
    let depth = f.quantifier_depth();
    if depth > config.max_depth {
        return Err(QeError::DepthExceeded { depth, bound: config.max_depth });
    }
    let mut oracle = Oracle { m: u64::from(f.max_count_index().max(1)), tried: 0, cap: config.max_candidates };
    let mut scope: Vec<(String, PeriodicSet)> =
        env.iter().map(|(k, v)| (k.clone(), PeriodicSet::from(v))).collect();
    oracle.eval(f, &mut scope)
}

struct Oracle {
    m: u64,
    tried: u64,
    cap: u64,
}

fn lookup<'a>(scope: &'a [(String, PeriodicSet)], name: &str) -> &'a PeriodicSet {
    &scope.iter().rev().find(|(k, _)| k == name).expect("variables checked before evaluation").1
}

fn term(t: &BoolTerm, scope: &[(String, PeriodicSet)]) -> PeriodicSet {
    match t {
        BoolTerm::Var(v) => lookup(scope, v).clone(),
        BoolTerm::Zero => PeriodicSet::empty(),
        BoolTerm::One => PeriodicSet::full(),
        BoolTerm::Meet(l, r) => term(l, scope).meet(&term(r, scope)),
        BoolTerm::Join(l, r) => term(l, scope).join(&term(r, scope)),
        BoolTerm::Complement(x) => term(x, scope).complement(),
        BoolTerm::Diff(l, r) => term(l, scope).diff(&term(r, scope)),
    }
}

fn atom(a: &BoolAtom, scope: &[(String, PeriodicSet)]) -> bool {
    match a {
        BoolAtom::Eq(l, r) => {
            let (x, y) = (term(l, scope), term(r, scope));
            x.diff(&y).is_empty() && y.diff(&x).is_empty()
        }
        BoolAtom::Leq(l, r) => term(l, scope).diff(&term(r, scope)).is_empty(),
        BoolAtom::CountAtLeast(n, t) => term(t, scope).size().is_none_or(|k| k >= u64::from(*n)),
        BoolAtom::Fin(t) => term(t, scope).is_finite(),
    }
}

impl Oracle {
    fn eval(&mut self, f: &BoolFormula, scope: &mut Vec<(String, PeriodicSet)>) -> Result<bool, QeError> {
        Ok(match f {
            Formula::Atom(a) => atom(a, scope),
            Formula::Not(g) => !self.eval(g, scope)?,
            Formula::And(l, r) => self.eval(l, scope)? && self.eval(r, scope)?,
            Formula::Or(l, r) => self.eval(l, scope)? || self.eval(r, scope)?,
            Formula::Implies(l, r) => !self.eval(l, scope)? || self.eval(r, scope)?,
            Formula::Exists(x, body) => self.search(x, body, f.quantifier_depth(), scope, true)?,
            Formula::Forall(x, body) => !self.search(x, body, f.quantifier_depth(), scope, false)?,
        })
    }

    /// Whether some candidate makes `body` equal to `want`.
    fn search(
        &mut self,
        x: &str,
        body: &BoolFormula,
        depth: usize,
        scope: &mut Vec<(String, PeriodicSet)>,
        want: bool,
    ) -> Result<bool, QeError> {
        let bound = (self.m << (depth - 1)) as usize;
        let options: Vec<Vec<PeriodicSet>> =
            cells(scope).iter().map(|c| pieces(c, bound)).filter(|o| o.len() > 1).collect();
        let mut choice = vec![0usize; options.len()];
        loop {
            self.tried += 1;
            if self.tried > self.cap {
                return Err(QeError::ResourceLimit(format!("more than {} candidate witnesses", self.cap)));
            }
            let witness = options
                .iter()
                .zip(&choice)
                .fold(PeriodicSet::empty(), |acc, (opts, &k)| acc.join(&opts[k]));
            scope.push((x.to_string(), witness));
            let value = self.eval(body, scope);
            scope.pop();
            if value? == want {
                return Ok(true);
            }
            // Advance the odometer.
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return Ok(false);
                }
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

/// Nonempty minterms of the variables in scope (innermost binding wins).
fn cells(scope: &[(String, PeriodicSet)]) -> Vec<PeriodicSet> {
    let mut visible: Vec<&PeriodicSet> = Vec::new();
    let mut names: Vec<&str> = Vec::new();
    for (k, v) in scope.iter().rev() {
        if !names.contains(&k.as_str()) {
            names.push(k);
            visible.push(v);
        }
    }
    let mut out = vec![PeriodicSet::full()];
    for v in visible {
        out = out
            .iter()
            .flat_map(|c| [c.meet(v), c.diff(v)])
            .filter(|c| !c.is_empty())
            .collect();
    }
    out
}

/// Candidate intersections of a witness with one cell; the empty set first.
fn pieces(cell: &PeriodicSet, bound: usize) -> Vec<PeriodicSet> {
    let mut out = Vec::new();
    match cell.size() {
        Some(s) => {
            let s = s as usize;
            for j in 0..=s {
                if j <= bound {
                    out.push(cell.first(j));
                } else if s - j <= bound {
                    out.push(cell.diff(&cell.first(s - j)));
                }
            }
        }
        None => {
            for j in 0..=bound {
                out.push(cell.first(j));
            }
            for j in 0..=bound {
                out.push(cell.diff(&cell.first(j)));
            }
            out.push(cell.half().expect("infinite cell"));
        }
    }
    out
}
