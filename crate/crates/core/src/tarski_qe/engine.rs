//! Translation of Boolean formulas into decision diagrams over the minterm
//! cells of their free variables, eliminating bound variables by projection.
//!
//! Cell `m` over a variable list `vars` is the minterm that contains
//! `vars[i]` iff bit `i` of `m` is set. Innermost bound variables take the
//! lowest bits, so eliminating one variable pairs cells `2j` and `2j + 1`
//! into cell `j` of the enclosing context.
//!
//! Each context carries the set of cells that may be nonempty. Positive
//! equations and inclusions among the top-level conjuncts of a conjunction
//! force some cells to be empty; those cells are dropped from the context of
//! the remaining conjuncts, and projection treats them as size 0. This keeps
//! the cell count linear in practice for bodies that state that fresh
//! variables partition something.

use std::collections::{HashMap, HashSet};

use super::classes::{class_count, split_table, Class};
use super::mdd::{Manager, Mdd, NodeId, FALSE, TRUE};
use super::QeError;
use crate::formula::{BoolAtom, BoolFormula, BoolTerm, Formula};

#[derive(Clone, Debug)]
pub(crate) struct Ctx {
    pub vars: Vec<String>,
    /// Sorted cell indices that may be nonempty.
    pub active: Vec<u64>,
}

impl Ctx {
    fn bit(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn holds(&self, t: &BoolTerm, cell: u64) -> bool {
        t.holds_at(&|v: &str| self.bit(v).is_some_and(|b| cell >> b & 1 == 1))
    }

    fn cells_where(&self, pred: impl Fn(u64) -> bool) -> Vec<u64> {
        self.active.iter().copied().filter(|&m| pred(m)).collect()
    }
}

pub(crate) struct Engine {
    pub mgr: Manager,
    /// Cutoff used for atoms: the largest `C_n` index in the input, at least 1.
    pub base: u32,
    pub max_active_cells: usize,
    split_tables: HashMap<u32, Vec<Vec<Vec<bool>>>>,
}

/// Flatten a conjunction, pushing negations through `|`, `->` and `~~`.
fn conjuncts(f: &BoolFormula, out: &mut Vec<BoolFormula>) {
    match f {
        Formula::And(l, r) => {
            conjuncts(l, out);
            conjuncts(r, out);
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Not(h) => conjuncts(h, out),
            Formula::Or(l, r) => {
                conjuncts(&Formula::not((**l).clone()), out);
                conjuncts(&Formula::not((**r).clone()), out);
            }
            Formula::Implies(l, r) => {
                conjuncts(l, out);
                conjuncts(&Formula::not((**r).clone()), out);
            }
            _ => out.push(f.clone()),
        },
        _ => out.push(f.clone()),
    }
}

/// The term that must be empty for a positive equation or inclusion.
fn fact_term(f: &BoolFormula) -> Option<BoolTerm> {
    match f {
        Formula::Atom(BoolAtom::Eq(l, r)) => Some(BoolTerm::join(
            BoolTerm::diff(l.clone(), r.clone()),
            BoolTerm::diff(r.clone(), l.clone()),
        )),
        Formula::Atom(BoolAtom::Leq(l, r)) => Some(BoolTerm::diff(l.clone(), r.clone())),
        _ => None,
    }
}

impl Engine {
    pub fn new(base: u32, node_limit: usize, max_active_cells: usize) -> Self {
        Engine { mgr: Manager::new(node_limit), base: base.max(1), max_active_cells, split_tables: HashMap::new() }
    }

    fn and(&mut self, a: Mdd, b: Mdd) -> Result<Mdd, QeError> {
        let cutoff = a.cutoff.max(b.cutoff);
        let (a, b) = (self.mgr.lift(a, cutoff)?, self.mgr.lift(b, cutoff)?);
        Ok(Mdd { root: self.mgr.and(a.root, b.root)?, cutoff })
    }

    fn or(&mut self, a: Mdd, b: Mdd) -> Result<Mdd, QeError> {
        let cutoff = a.cutoff.max(b.cutoff);
        let (a, b) = (self.mgr.lift(a, cutoff)?, self.mgr.lift(b, cutoff)?);
        Ok(Mdd { root: self.mgr.or(a.root, b.root)?, cutoff })
    }

    fn not(&mut self, a: Mdd) -> Result<Mdd, QeError> {
        Ok(Mdd { root: self.mgr.not(a.root)?, cutoff: a.cutoff })
    }

    /// Chain over `cells` (ascending): class `c` of each cell continues iff
    /// `ok(c)`.
    fn chain(&mut self, cells: &[u64], ok: impl Fn(Class) -> bool) -> Result<Mdd, QeError> {
        let width = class_count(self.base);
        let mut node = TRUE;
        for &cell in cells.iter().rev() {
            let kids = (0..width as Class).map(|c| if ok(c) { node } else { FALSE }).collect();
            node = self.mgr.mk(cell, kids)?;
        }
        Ok(Mdd { root: node, cutoff: self.base })
    }

    fn all_empty(&mut self, cells: &[u64]) -> Result<Mdd, QeError> {
        self.chain(cells, |c| c == 0)
    }

    fn all_finite(&mut self, cells: &[u64]) -> Result<Mdd, QeError> {
        let inf = self.base + 1;
        self.chain(cells, |c| c != inf)
    }

    /// The cells together hold at least `n` elements.
    fn at_least(&mut self, cells: &[u64], n: u32) -> Result<Mdd, QeError> {
        let m = self.base;
        debug_assert!(n >= 1 && n <= m);
        // row[s] = node for "cells[i..] hold at least n - s more", s < n.
        let mut row = vec![FALSE; n as usize];
        for &cell in cells.iter().rev() {
            let mut next = Vec::with_capacity(n as usize);
            for s in 0..n {
                let kids = (0..class_count(m) as Class)
                    .map(|c| if c >= m || s + c >= n { TRUE } else { row[(s + c) as usize] })
                    .collect();
                next.push(self.mgr.mk(cell, kids)?);
            }
            row = next;
        }
        Ok(Mdd { root: row[0], cutoff: m })
    }

    fn atom(&mut self, a: &BoolAtom, ctx: &Ctx) -> Result<Mdd, QeError> {
        match a {
            BoolAtom::Eq(..) | BoolAtom::Leq(..) => {
                let t = fact_term(&Formula::Atom(a.clone())).expect("equational atom");
                let cells = ctx.cells_where(|m| ctx.holds(&t, m));
                self.all_empty(&cells)
            }
            BoolAtom::CountAtLeast(n, t) => {
                let cells = ctx.cells_where(|m| ctx.holds(t, m));
                self.at_least(&cells, *n)
            }
            BoolAtom::Fin(t) => {
                let cells = ctx.cells_where(|m| ctx.holds(t, m));
                self.all_finite(&cells)
            }
        }
    }

    pub fn build(&mut self, f: &BoolFormula, ctx: &Ctx) -> Result<Mdd, QeError> {
        match f {
            Formula::Atom(a) => self.atom(a, ctx),
            Formula::Not(g) => match g.as_ref() {
                Formula::Not(h) => self.build(h, ctx),
                Formula::Or(..) | Formula::Implies(..) => {
                    let mut parts = Vec::new();
                    conjuncts(f, &mut parts);
                    self.conjunction(&parts, ctx)
                }
                Formula::Forall(x, body) => {
                    self.exists_block(std::slice::from_ref(x), &Formula::not((**body).clone()), ctx)
                }
                _ => {
                    let inner = self.build(g, ctx)?;
                    self.not(inner)
                }
            },
            Formula::And(..) => {
                let mut parts = Vec::new();
                conjuncts(f, &mut parts);
                self.conjunction(&parts, ctx)
            }
            Formula::Or(l, r) => {
                let a = self.build(l, ctx)?;
                if a.root == TRUE {
                    return Ok(a);
                }
                let b = self.build(r, ctx)?;
                self.or(a, b)
            }
            Formula::Implies(l, r) => {
                let a = self.build(l, ctx)?;
                let na = self.not(a)?;
                if na.root == TRUE {
                    return Ok(na);
                }
                let b = self.build(r, ctx)?;
                self.or(na, b)
            }
            Formula::Exists(..) => {
                let mut vars = Vec::new();
                let mut body = f;
                while let Formula::Exists(x, g) = body {
                    vars.push(x.clone());
                    body = g;
                }
                self.exists_block(&vars, body, ctx)
            }
            Formula::Forall(x, body) => {
                let e = self.exists_block(std::slice::from_ref(x), &Formula::not((**body).clone()), ctx)?;
                self.not(e)
            }
        }
    }

    fn conjunction(&mut self, parts: &[BoolFormula], ctx: &Ctx) -> Result<Mdd, QeError> {
        let facts: Vec<BoolTerm> = parts.iter().filter_map(fact_term).collect();
        let forced: Vec<u64> = ctx.cells_where(|m| facts.iter().any(|t| ctx.holds(t, m)));
        let mut acc = self.all_empty(&forced)?;
        let inner = Ctx {
            vars: ctx.vars.clone(),
            active: ctx.cells_where(|m| forced.binary_search(&m).is_err()),
        };
        for p in parts.iter().filter(|p| fact_term(p).is_none()) {
            if acc.root == FALSE {
                break;
            }
            let b = self.build(p, &inner)?;
            acc = self.and(acc, b)?;
        }
        Ok(acc)
    }

    /// `E vars[0]. ... E vars[r-1]. body`.
    fn exists_block(&mut self, vars: &[String], body: &BoolFormula, ctx: &Ctx) -> Result<Mdd, QeError> {
        let r = vars.len();
        if ctx.vars.len() + r > 63 {
            return Err(QeError::ResourceLimit("more than 63 variables in scope".into()));
        }
        let mut inner_vars: Vec<String> = vars.iter().rev().cloned().collect();
        inner_vars.extend(ctx.vars.iter().cloned());
        let mut inner = Ctx { vars: inner_vars, active: Vec::new() };

        let mut parts = Vec::new();
        conjuncts(body, &mut parts);
        let facts: Vec<(BoolTerm, usize)> = parts
            .iter()
            .filter_map(fact_term)
            .map(|t| {
                let mut names = Default::default();
                crate::formula::Term::collect_vars(&t, &mut names);
                let lowest = names.iter().filter_map(|v: &String| inner.bit(v)).min().unwrap_or(r);
                (t, lowest)
            })
            .collect();

        // Add the bound variables outermost first, discarding cells that
        // violate a fact as soon as all of its variables are assigned.
        let mut cells: Vec<u64> = ctx.active.iter().map(|&m| m << r).collect();
        for bit in (0..r).rev() {
            let ready: Vec<&BoolTerm> = facts.iter().filter(|(_, low)| *low == bit).map(|(t, _)| t).collect();
            let mut next = Vec::with_capacity(cells.len() * 2);
            for &m in &cells {
                for v in [0u64, 1] {
                    let c = m | v << bit;
                    if !ready.iter().any(|t| inner.holds(t, c)) {
                        next.push(c);
                    }
                }
            }
            if next.len() > self.max_active_cells {
                return Err(QeError::ResourceLimit(format!(
                    "more than {} candidate cells under a quantifier block",
                    self.max_active_cells
                )));
            }
            cells = next;
        }
        cells.sort_unstable();
        inner.active = cells;

        let mut m = self.build(body, &inner)?;
        let mut active = inner.active;
        for _ in 0..r {
            let set: HashSet<u64> = active.iter().copied().collect();
            m = self.project(m, &set)?;
            m = self.mgr.shrink(m)?;
            active = active.iter().map(|c| c >> 1).collect();
            active.dedup();
        }
        // Context cells none of whose refinements survived are empty.
        let gone = ctx.cells_where(|c| active.binary_search(&c).is_err());
        let gone = self.all_empty(&gone)?;
        self.and(m, gone)
    }

    /// Existentially eliminate bit 0: cells `2j`, `2j + 1` merge into `j`.
    /// Inactive cells are pinned to size 0. The result has cutoff `2M`.
    fn project(&mut self, m: Mdd, active: &HashSet<u64>) -> Result<Mdd, QeError> {
        let table = self.split_tables.entry(m.cutoff).or_insert_with(|| split_table(m.cutoff)).clone();
        let mut memo = HashMap::new();
        let root = self.project_node(m.root, m.cutoff, active, &table, &mut memo)?;
        Ok(Mdd { root, cutoff: 2 * m.cutoff })
    }

    fn project_node(
        &mut self,
        n: NodeId,
        cutoff: u32,
        active: &HashSet<u64>,
        table: &[Vec<Vec<bool>>],
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> Result<NodeId, QeError> {
        if Manager::is_terminal(n) {
            return Ok(n);
        }
        if let Some(&r) = memo.get(&n) {
            return Ok(r);
        }
        let j = self.mgr.var(n) >> 1;
        let (a, b) = (2 * j, 2 * j + 1);
        let classes = |cell: u64| -> Vec<Class> {
            if active.contains(&cell) {
                (0..class_count(cutoff) as Class).collect()
            } else {
                vec![0]
            }
        };
        let (ca_list, cb_list) = (classes(a), classes(b));
        let mut sub: HashMap<(Class, Class), NodeId> = HashMap::new();
        for &ca in &ca_list {
            let na = self.mgr.cofactor(n, a, ca);
            for &cb in &cb_list {
                let nb = self.mgr.cofactor(na, b, cb);
                sub.insert((ca, cb), self.project_node(nb, cutoff, active, table, memo)?);
            }
        }
        let mut kids = Vec::with_capacity(table.len());
        for row in table {
            let mut acc = FALSE;
            for &ca in &ca_list {
                for &cb in &cb_list {
                    if row[ca as usize][cb as usize] {
                        acc = self.mgr.or(acc, sub[&(ca, cb)])?;
                        if acc == TRUE {
                            break;
                        }
                    }
                }
                if acc == TRUE {
                    break;
                }
            }
            kids.push(acc);
        }
        let r = self.mgr.mk(j, kids)?;
        memo.insert(n, r);
        Ok(r)
    }

    /// Value of a diagram at concrete cell sizes (`None` = infinite); cells
    /// missing from `sizes` are empty.
    pub fn eval(&self, m: Mdd, sizes: &HashMap<u64, Option<u64>>) -> bool {
        let mut n = m.root;
        while !Manager::is_terminal(n) {
            let size = sizes.get(&self.mgr.var(n)).copied().unwrap_or(Some(0));
            n = self.mgr.kids(n)[super::classes::class_of_size(size, m.cutoff) as usize];
        }
        n == TRUE
    }
}
