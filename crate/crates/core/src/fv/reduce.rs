//! The recursive reduction over `{atom, ~, &, E}`.
//!
//! Every node carries a list of cells (ring formulas partitioning the
//! node's variable context), one Boolean variable per cell, and a Boolean
//! formula `psi` over those variables. In a model context each node also
//! carries, per stalk, the cell realized by every tuple of the context; cells
//! realized nowhere have value 0 for all arguments and are dropped.

use std::collections::{BTreeMap, BTreeSet};

use super::FvError;
use crate::formula::{fresh_name, BoolFormula, BoolTerm, Formula, RingFormula, RingTerm};
use crate::rprod::RPModel;
use crate::stalk::{CompiledFormula, Elem, FiniteRing};

pub(super) struct Node {
    pub cells: Vec<RingFormula>,
    pub vars: Vec<String>,
    pub psi: BoolFormula,
    /// Per stalk: cell index of each context tuple, tuples encoded in mixed
    /// radix with the first context variable as the lowest digit.
    tables: Option<Vec<Vec<u32>>>,
}

struct StalkView<'a> {
    ring: &'a FiniteRing,
    phi_set: &'a [Elem],
}

pub(super) struct Reducer<'a> {
    phi: &'a RingFormula,
    phi_var: &'a str,
    stalks: Option<Vec<StalkView<'a>>>,
    max_cells: usize,
    max_tuples: usize,
    counter: usize,
    pub trace: Vec<String>,
}

fn var(name: &str) -> BoolTerm {
    BoolTerm::Var(name.to_string())
}

fn decode(mut index: usize, size: usize, n: usize) -> Vec<Elem> {
    (0..n)
        .map(|_| {
            let d = index % size;
            index /= size;
            d as Elem
        })
        .collect()
}

impl<'a> Reducer<'a> {
    pub fn new(phi: &'a RingFormula, phi_var: &'a str, model: Option<&'a RPModel>, max_cells: usize) -> Self {
        let stalks = model.map(|m| m.stalks().map(|s| StalkView { ring: &s.ring, phi_set: &s.phi_set }).collect());
        Reducer { phi, phi_var, stalks, max_cells, max_tuples: 1 << 22, counter: 0, trace: Vec::new() }
    }

    fn fresh(&mut self) -> String {
        let name = format!("c{}", self.counter);
        self.counter += 1;
        name
    }

    fn check_cells(&self, count: usize, step: &str) -> Result<(), FvError> {
        if count > self.max_cells {
            return Err(FvError::ResourceLimit(format!("{step} needs {count} cells (cap {})", self.max_cells)));
        }
        Ok(())
    }

    fn tuple_count(&self, ring: &FiniteRing, n: usize) -> Result<usize, FvError> {
        let count = (ring.size() as u128).pow(n as u32);
        if count > self.max_tuples as u128 {
            return Err(FvError::ResourceLimit(format!("{count} tuples over {ring} (cap {})", self.max_tuples)));
        }
        Ok(count as usize)
    }

    pub fn node(&mut self, f: &RingFormula, ctx: &[String]) -> Result<Node, FvError> {
        match f {
            Formula::Atom(_) => self.atom(f, ctx),
            Formula::Not(g) => {
                let child = self.node(g, ctx)?;
                self.trace.push(format!("not: {} cells", child.cells.len()));
                Ok(Node { psi: Formula::not(child.psi), ..child })
            }
            Formula::And(l, r) => {
                let left = self.node(l, ctx)?;
                let right = self.node(r, ctx)?;
                self.conjunction(left, right)
            }
            Formula::Exists(x, body) => self.exists(x, body, ctx),
            Formula::Or(..) | Formula::Implies(..) | Formula::Forall(..) => {
                unreachable!("input is rewritten to core connectives")
            }
        }
    }

    fn atom(&mut self, f: &RingFormula, ctx: &[String]) -> Result<Node, FvError> {
        let cells = vec![f.clone(), Formula::not(f.clone())];
        let vars = vec![self.fresh(), self.fresh()];
        let psi = BoolFormula::eq(var(&vars[0]), BoolTerm::One);
        let tables = match &self.stalks {
            None => None,
            Some(stalks) => {
                let compiled = CompiledFormula::compile(f, ctx).map_err(|e| FvError::Formula(e.to_string()))?;
                let mut tables = Vec::new();
                for s in stalks {
                    let count = self.tuple_count(s.ring, ctx.len())?;
                    let table = (0..count)
                        .map(|t| if compiled.eval(s.ring, &decode(t, s.ring.size(), ctx.len())) { 0 } else { 1 })
                        .collect();
                    tables.push(table);
                }
                Some(tables)
            }
        };
        let node = prune(Node { cells, vars, psi, tables });
        self.trace.push(format!("atom {f}: {} cells", node.cells.len()));
        Ok(node)
    }

    fn conjunction(&mut self, left: Node, right: Node) -> Result<Node, FvError> {
        let (nl, nr) = (left.cells.len(), right.cells.len());
        let pairs: Vec<(usize, usize)> = match (&left.tables, &right.tables) {
            (Some(lt), Some(rt)) => {
                let mut seen = BTreeSet::new();
                for (a, b) in lt.iter().zip(rt) {
                    seen.extend(a.iter().zip(b).map(|(&i, &j)| (i as usize, j as usize)));
                }
                seen.into_iter().collect()
            }
            _ => {
                self.check_cells(nl * nr, "conjunction")?;
                (0..nl).flat_map(|i| (0..nr).map(move |j| (i, j))).collect()
            }
        };
        self.check_cells(pairs.len(), "conjunction")?;
        let cells = pairs
            .iter()
            .map(|&(i, j)| Formula::and(left.cells[i].clone(), right.cells[j].clone()))
            .collect();
        let vars: Vec<String> = pairs.iter().map(|_| self.fresh()).collect();
        let join_where = |pick: &dyn Fn(&(usize, usize)) -> bool| {
            BoolTerm::join_all(pairs.iter().zip(&vars).filter(|(p, _)| pick(p)).map(|(_, v)| var(v)))
        };
        let left_map: BTreeMap<String, BoolTerm> =
            left.vars.iter().enumerate().map(|(i, v)| (v.clone(), join_where(&|p| p.0 == i))).collect();
        let right_map: BTreeMap<String, BoolTerm> =
            right.vars.iter().enumerate().map(|(j, v)| (v.clone(), join_where(&|p| p.1 == j))).collect();
        let psi = Formula::and(left.psi.substitute_all(&left_map), right.psi.substitute_all(&right_map));
        let tables = match (left.tables, right.tables) {
            (Some(lt), Some(rt)) => {
                let rank: BTreeMap<(usize, usize), u32> = pairs.iter().enumerate().map(|(k, &p)| (p, k as u32)).collect();
                Some(
                    lt.iter()
                        .zip(&rt)
                        .map(|(a, b)| a.iter().zip(b).map(|(&i, &j)| rank[&(i as usize, j as usize)]).collect())
                        .collect(),
                )
            }
            _ => None,
        };
        self.trace.push(format!("and: {nl} x {nr} -> {} cells", pairs.len()));
        Ok(Node { cells, vars, psi, tables })
    }

    fn exists(&mut self, x: &str, body: &RingFormula, ctx: &[String]) -> Result<Node, FvError> {
        let (x, body) = if ctx.iter().any(|v| v == x) {
            let mut avoid: BTreeSet<String> = ctx.iter().cloned().collect();
            avoid.extend(body.all_vars());
            let fresh = fresh_name(x, &avoid);
            let renamed = body.substitute(x, &RingTerm::Var(fresh.clone()));
            (fresh, renamed)
        } else {
            (x.to_string(), body.clone())
        };
        let mut inner_ctx = ctx.to_vec();
        inner_ctx.push(x.clone());
        let child = self.node(&body, &inner_ctx)?;
        let k = child.cells.len();
        if 2 * k > 60 {
            return Err(FvError::ResourceLimit(format!("existential step over {k} cells")));
        }

        // Condition order: E_0..E_{k-1}, W_0..W_{k-1}. A pattern bit set at
        // position (2k - 1 - c) means condition c is negated, matching the
        // order of `sign_partition`.
        let width = 2 * k;
        let bit = |c: usize| 1u64 << (width - 1 - c);
        let (patterns, tables): (Vec<u64>, Option<Vec<Vec<u32>>>) = match (&child.tables, &self.stalks) {
            (Some(child_tables), Some(stalks)) => {
                let mut per_stalk = Vec::new();
                for (s, table) in stalks.iter().zip(child_tables) {
                    let size = s.ring.size();
                    let outer = self.tuple_count(s.ring, ctx.len())?;
                    let pats: Vec<u64> = (0..outer)
                        .map(|a| {
                            let mut e = vec![false; k];
                            let mut w = vec![false; k];
                            for xv in 0..size {
                                let c = table[a + xv * outer] as usize;
                                e[c] = true;
                                if s.phi_set.contains(&(xv as Elem)) {
                                    w[c] = true;
                                }
                            }
                            (0..k).fold(0, |p, j| {
                                let p = if e[j] { p } else { p | bit(j) };
                                if w[j] {
                                    p
                                } else {
                                    p | bit(k + j)
                                }
                            })
                        })
                        .collect();
                    per_stalk.push(pats);
                }
                let realized: BTreeSet<u64> = per_stalk.iter().flatten().copied().collect();
                let patterns: Vec<u64> = realized.into_iter().collect();
                self.check_cells(patterns.len(), "existential step")?;
                let rank: BTreeMap<u64, u32> = patterns.iter().enumerate().map(|(r, &p)| (p, r as u32)).collect();
                let tables = per_stalk.iter().map(|ps| ps.iter().map(|p| rank[p]).collect()).collect();
                (patterns, Some(tables))
            }
            _ => {
                // Only patterns consistent in every ring: W_j implies E_j, and
                // some E_j holds because the child cells cover.
                let count = 3f64.powi(k as i32) - 1.0;
                if count > self.max_cells as f64 {
                    return Err(FvError::ResourceLimit(format!(
                        "existential step needs {count} cells (cap {})",
                        self.max_cells
                    )));
                }
                let consistent = |p: u64| {
                    (0..k).any(|j| p & bit(j) == 0) && (0..k).all(|j| p & bit(k + j) != 0 || p & bit(j) == 0)
                };
                ((0..1u64 << width).filter(|&p| consistent(p)).collect(), None)
            }
        };

        let conditions: Vec<RingFormula> = (0..k)
            .map(|j| Formula::exists(x.clone(), child.cells[j].clone()))
            .chain((0..k).map(|j| {
                let phi_x = self.phi.substitute(self.phi_var, &RingTerm::Var(x.clone()));
                Formula::exists(x.clone(), Formula::and(phi_x, child.cells[j].clone()))
            }))
            .collect();
        let cells: Vec<RingFormula> = patterns
            .iter()
            .map(|&p| {
                let lits = conditions.iter().enumerate().map(|(c, f)| {
                    if p & bit(c) != 0 {
                        Formula::not(f.clone())
                    } else {
                        f.clone()
                    }
                });
                Formula::conjoin(lits).expect("k >= 1")
            })
            .collect();
        let vars: Vec<String> = patterns.iter().map(|_| self.fresh()).collect();
        let join_where = |c: usize| {
            BoolTerm::join_all(patterns.iter().zip(&vars).filter(|(&p, _)| p & bit(c) == 0).map(|(_, v)| var(v)))
        };
        let ys: Vec<BoolTerm> = child.vars.iter().map(|v| var(v)).collect();
        let mut parts = vec![BoolFormula::partition_of(&ys)];
        for (j, y) in ys.iter().enumerate() {
            parts.push(BoolFormula::leq(y.clone(), join_where(j)));
            parts.push(BoolFormula::fin(BoolTerm::diff(y.clone(), join_where(k + j))));
        }
        parts.push(child.psi);
        let mut psi = Formula::conjoin(parts).expect("nonempty");
        for v in child.vars.iter().rev() {
            psi = Formula::exists(v.clone(), psi);
        }
        self.trace.push(format!("exists {x}: {} conditions -> {} cells", width, patterns.len()));
        Ok(Node { cells, vars, psi, tables })
    }
}

/// Drop cells that no tuple of any stalk realizes; their variables become 0.
fn prune(node: Node) -> Node {
    let Some(tables) = &node.tables else { return node };
    let realized: BTreeSet<u32> = tables.iter().flatten().copied().collect();
    if realized.len() == node.cells.len() {
        return node;
    }
    let mut map = BTreeMap::new();
    let mut remap = BTreeMap::new();
    let (mut cells, mut vars) = (Vec::new(), Vec::new());
    for (i, (c, v)) in node.cells.into_iter().zip(node.vars).enumerate() {
        if realized.contains(&(i as u32)) {
            remap.insert(i as u32, cells.len() as u32);
            cells.push(c);
            vars.push(v);
        } else {
            map.insert(v, BoolTerm::Zero);
        }
    }
    let tables = tables.iter().map(|t| t.iter().map(|i| remap[i]).collect()).collect();
    Node { cells, vars, psi: node.psi.substitute_all(&map), tables: Some(tables) }
}
