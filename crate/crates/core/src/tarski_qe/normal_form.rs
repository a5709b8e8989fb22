use std::fmt;

use super::classes::Class;
use super::mdd::{Manager, Mdd, NodeId, TRUE};
use crate::formula::{BoolFormula, BoolTerm, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Finiteness {
    MustBeFinite,
    MustBeInfinite,
    Unconstrained,
}

/// Constraint on the number of elements of one minterm cell.
///
/// `lower` bounds finite sizes from below (an infinite cell satisfies every
/// lower bound); `upper` is an exclusive bound and implies finiteness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellConstraint {
    pub cell: u64,
    pub lower: u64,
    pub upper: Option<u64>,
    pub finiteness: Finiteness,
}

impl CellConstraint {
    pub fn is_satisfiable(&self) -> bool {
        match (self.upper, self.finiteness) {
            (Some(_), Finiteness::MustBeInfinite) => false,
            (Some(u), _) => self.lower < u,
            (None, _) => true,
        }
    }

    /// Whether a cell of `size` elements (`None` = infinite) satisfies it.
    pub fn admits(&self, size: Option<u64>) -> bool {
        match size {
            None => self.upper.is_none() && self.finiteness != Finiteness::MustBeFinite,
            Some(s) => {
                s >= self.lower
                    && self.upper.is_none_or(|u| s < u)
                    && self.finiteness != Finiteness::MustBeInfinite
            }
        }
    }

    /// The constraint for classes `lo..=hi` at `cutoff`.
    fn from_classes(cell: u64, lo: Class, hi: Class, cutoff: u32) -> Self {
        let inf = cutoff + 1;
        if lo == inf {
            return CellConstraint { cell, lower: 0, upper: None, finiteness: Finiteness::MustBeInfinite };
        }
        let lower = u64::from(lo.min(cutoff));
        let (upper, finiteness) = if hi < cutoff {
            (Some(u64::from(hi) + 1), Finiteness::MustBeFinite)
        } else if hi == cutoff {
            (None, Finiteness::MustBeFinite)
        } else {
            (None, Finiteness::Unconstrained)
        };
        CellConstraint { cell, lower, upper, finiteness }
    }

    fn to_literals(&self, t: &BoolTerm) -> Vec<BoolFormula> {
        let mut out = Vec::new();
        if self.lower >= 1 {
            out.push(BoolFormula::count_at_least(self.lower as u32, t.clone()));
        }
        match self.upper {
            Some(1) => out.push(BoolFormula::eq(t.clone(), BoolTerm::Zero)),
            Some(u) => out.push(Formula::not(BoolFormula::count_at_least(u as u32, t.clone()))),
            None => match self.finiteness {
                Finiteness::MustBeFinite => out.push(BoolFormula::fin(t.clone())),
                Finiteness::MustBeInfinite => out.push(Formula::not(BoolFormula::fin(t.clone()))),
                Finiteness::Unconstrained => {}
            },
        }
        out
    }
}

/// A quantifier-free formula as a disjunction of conjunctions of cell
/// constraints over the minterms of `vars` (cell `m` contains `vars[i]` iff
/// bit `i` of `m` is set). Cells not mentioned in a conjunction are
/// unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFNormalForm {
    pub vars: Vec<String>,
    pub disjuncts: Vec<Vec<CellConstraint>>,
}

impl QFNormalForm {
    pub(crate) fn from_mdd(mgr: &Manager, m: Mdd, vars: Vec<String>) -> Self {
        fn walk(mgr: &Manager, n: NodeId, cutoff: u32, path: &mut Vec<CellConstraint>, out: &mut Vec<Vec<CellConstraint>>) {
            if Manager::is_terminal(n) {
                if n == TRUE {
                    out.push(path.clone());
                }
                return;
            }
            let var = mgr.var(n);
            let kids = mgr.kids(n);
            let mut lo = 0;
            while lo < kids.len() {
                let mut hi = lo;
                while hi + 1 < kids.len() && kids[hi + 1] == kids[lo] {
                    hi += 1;
                }
                path.push(CellConstraint::from_classes(var, lo as Class, hi as Class, cutoff));
                walk(mgr, kids[lo], cutoff, path, out);
                path.pop();
                lo = hi + 1;
            }
        }
        let mut disjuncts = Vec::new();
        walk(mgr, m.root, m.cutoff, &mut Vec::new(), &mut disjuncts);
        QFNormalForm { vars, disjuncts }
    }

    /// The minterm term of a cell, e.g. `x ^ !y`; `1` with no variables.
    pub fn cell_term(&self, cell: u64) -> BoolTerm {
        BoolTerm::meet_all(self.vars.iter().enumerate().map(|(i, v)| {
            let t = BoolTerm::Var(v.clone());
            if cell >> i & 1 == 1 {
                t
            } else {
                BoolTerm::complement(t)
            }
        }))
    }

    /// Truth value at concrete cell sizes.
    pub fn holds_at_sizes(&self, size: impl Fn(u64) -> Option<u64>) -> bool {
        self.disjuncts.iter().any(|conj| conj.iter().all(|c| c.admits(size(c.cell))))
    }

    pub fn to_formula(&self) -> BoolFormula {
        let disjuncts = self.disjuncts.iter().map(|conj| {
            let lits = conj.iter().flat_map(|c| c.to_literals(&self.cell_term(c.cell)));
            Formula::conjoin(lits).unwrap_or_else(BoolFormula::truth)
        });
        Formula::disjoin(disjuncts).unwrap_or_else(BoolFormula::falsity)
    }
}

impl fmt::Display for QFNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}
