//! Reduced, hash-consed multi-valued decision diagrams over minterm cells.
//!
//! A diagram tests cells in increasing index order; each internal node has
//! one child per size class of its cell. A cell that is skipped on a path is
//! unconstrained. All nodes below one root share a cutoff, so each node has
//! `cutoff + 2` children.

use std::collections::HashMap;

use super::classes::{class_count, Class};
use super::QeError;

pub(crate) type NodeId = u32;
pub(crate) const FALSE: NodeId = 0;
pub(crate) const TRUE: NodeId = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Mdd {
    pub root: NodeId,
    pub cutoff: u32,
}

struct Node {
    var: u64,
    kids: Box<[NodeId]>,
}

pub(crate) struct Manager {
    nodes: Vec<Node>,
    unique: HashMap<(u64, Box<[NodeId]>), NodeId>,
    and_memo: HashMap<(NodeId, NodeId), NodeId>,
    or_memo: HashMap<(NodeId, NodeId), NodeId>,
    not_memo: HashMap<NodeId, NodeId>,
    node_limit: usize,
}

impl Manager {
    pub fn new(node_limit: usize) -> Self {
        let terminal = || Node { var: u64::MAX, kids: Box::new([]) };
        Manager {
            nodes: vec![terminal(), terminal()],
            unique: HashMap::new(),
            and_memo: HashMap::new(),
            or_memo: HashMap::new(),
            not_memo: HashMap::new(),
            node_limit,
        }
    }

    pub fn is_terminal(n: NodeId) -> bool {
        n <= TRUE
    }

    pub fn var(&self, n: NodeId) -> u64 {
        self.nodes[n as usize].var
    }

    pub fn kids(&self, n: NodeId) -> &[NodeId] {
        &self.nodes[n as usize].kids
    }

    pub fn mk(&mut self, var: u64, kids: Vec<NodeId>) -> Result<NodeId, QeError> {
        if kids.iter().all(|&k| k == kids[0]) {
            return Ok(kids[0]);
        }
        let key = (var, kids.into_boxed_slice());
        if let Some(&id) = self.unique.get(&key) {
            return Ok(id);
        }
        if self.nodes.len() >= self.node_limit {
            return Err(QeError::ResourceLimit(format!(
                "decision diagram exceeded {} nodes",
                self.node_limit
            )));
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node { var: key.0, kids: key.1.clone() });
        self.unique.insert(key, id);
        Ok(id)
    }

    /// The child of `n` for class `c` of cell `var`, or `n` itself when `n`
    /// does not test `var`.
    pub fn cofactor(&self, n: NodeId, var: u64, c: Class) -> NodeId {
        if !Self::is_terminal(n) && self.var(n) == var {
            self.kids(n)[c as usize]
        } else {
            n
        }
    }

    fn top_var(&self, a: NodeId, b: NodeId) -> u64 {
        self.var(a).min(self.var(b))
    }

    fn width(&self, a: NodeId, b: NodeId) -> usize {
        if Self::is_terminal(a) {
            self.kids(b).len()
        } else {
            self.kids(a).len()
        }
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> Result<NodeId, QeError> {
        if a == FALSE || b == FALSE {
            return Ok(FALSE);
        }
        if a == TRUE || a == b {
            return Ok(b);
        }
        if b == TRUE {
            return Ok(a);
        }
        let key = (a.min(b), a.max(b));
        if let Some(&r) = self.and_memo.get(&key) {
            return Ok(r);
        }
        let var = self.top_var(a, b);
        let mut kids = Vec::with_capacity(self.width(a, b));
        for c in 0..self.width(a, b) as Class {
            let (ka, kb) = (self.cofactor(a, var, c), self.cofactor(b, var, c));
            kids.push(self.and(ka, kb)?);
        }
        let r = self.mk(var, kids)?;
        self.and_memo.insert(key, r);
        Ok(r)
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> Result<NodeId, QeError> {
        if a == TRUE || b == TRUE {
            return Ok(TRUE);
        }
        if a == FALSE || a == b {
            return Ok(b);
        }
        if b == FALSE {
            return Ok(a);
        }
        let key = (a.min(b), a.max(b));
        if let Some(&r) = self.or_memo.get(&key) {
            return Ok(r);
        }
        let var = self.top_var(a, b);
        let mut kids = Vec::with_capacity(self.width(a, b));
        for c in 0..self.width(a, b) as Class {
            let (ka, kb) = (self.cofactor(a, var, c), self.cofactor(b, var, c));
            kids.push(self.or(ka, kb)?);
        }
        let r = self.mk(var, kids)?;
        self.or_memo.insert(key, r);
        Ok(r)
    }

    pub fn not(&mut self, a: NodeId) -> Result<NodeId, QeError> {
        match a {
            FALSE => return Ok(TRUE),
            TRUE => return Ok(FALSE),
            _ => {}
        }
        if let Some(&r) = self.not_memo.get(&a) {
            return Ok(r);
        }
        let var = self.var(a);
        let old: Vec<NodeId> = self.kids(a).to_vec();
        let mut kids = Vec::with_capacity(old.len());
        for k in old {
            kids.push(self.not(k)?);
        }
        let r = self.mk(var, kids)?;
        self.not_memo.insert(a, r);
        Ok(r)
    }

    /// Re-express a diagram at a larger cutoff.
    pub fn lift(&mut self, m: Mdd, cutoff: u32) -> Result<Mdd, QeError> {
        assert!(cutoff >= m.cutoff);
        if cutoff == m.cutoff {
            return Ok(m);
        }
        let from = m.cutoff;
        let map = move |c: Class| -> Class {
            if c < from {
                c
            } else if c <= cutoff {
                from
            } else {
                from + 1
            }
        };
        let mut memo = HashMap::new();
        let root = self.remap(m.root, class_count(cutoff), &map, &mut memo)?;
        Ok(Mdd { root, cutoff })
    }

    /// Rebuild with `width` children per node, child `c` taken from old class
    /// `map(c)`.
    fn remap(
        &mut self,
        n: NodeId,
        width: usize,
        map: &dyn Fn(Class) -> Class,
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> Result<NodeId, QeError> {
        if Self::is_terminal(n) {
            return Ok(n);
        }
        if let Some(&r) = memo.get(&n) {
            return Ok(r);
        }
        let var = self.var(n);
        let old: Vec<NodeId> = self.kids(n).to_vec();
        let mut kids = Vec::with_capacity(width);
        for c in 0..width as Class {
            kids.push(self.remap(old[map(c) as usize], width, map, memo)?);
        }
        let r = self.mk(var, kids)?;
        memo.insert(n, r);
        Ok(r)
    }

    /// The same function at the smallest cutoff that still expresses it: the
    /// least `k` such that at every node the exact classes `k..cutoff` lead
    /// where the "finite, at least cutoff" class leads.
    pub fn shrink(&mut self, m: Mdd) -> Result<Mdd, QeError> {
        let cutoff = m.cutoff;
        let mut needed = 0u32;
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![m.root];
        while let Some(n) = stack.pop() {
            if Self::is_terminal(n) || !seen.insert(n) {
                continue;
            }
            let kids = self.kids(n);
            let big = kids[cutoff as usize];
            let k = (0..cutoff).rev().find(|&c| kids[c as usize] != big).map_or(0, |c| c + 1);
            needed = needed.max(k);
            stack.extend_from_slice(kids);
        }
        let target = needed.max(1);
        if target >= cutoff {
            return Ok(m);
        }
        let map = move |c: Class| -> Class {
            if c < target {
                c
            } else if c == target {
                cutoff
            } else {
                cutoff + 1
            }
        };
        let mut memo = HashMap::new();
        let root = self.remap(m.root, class_count(target), &map, &mut memo)?;
        Ok(Mdd { root, cutoff: target })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_sharing() {
        let mut m = Manager::new(1000);
        assert_eq!(m.mk(3, vec![TRUE; 4]).unwrap(), TRUE);
        let a = m.mk(0, vec![TRUE, FALSE, FALSE, FALSE]).unwrap();
        let b = m.mk(0, vec![TRUE, FALSE, FALSE, FALSE]).unwrap();
        assert_eq!(a, b);
        let na = m.not(a).unwrap();
        assert_eq!(m.and(a, na).unwrap(), FALSE);
        assert_eq!(m.or(a, na).unwrap(), TRUE);
    }

    #[test]
    fn lift_then_shrink_round_trips() {
        let mut m = Manager::new(1000);
        // "cell 0 has at least one element" at cutoff 2.
        let a = m.mk(0, vec![FALSE, TRUE, TRUE, TRUE]).unwrap();
        let lifted = m.lift(Mdd { root: a, cutoff: 2 }, 5).unwrap();
        assert_eq!(m.kids(lifted.root).len(), 7);
        let back = m.shrink(lifted).unwrap();
        assert_eq!(back.cutoff, 1);
        assert_eq!(m.kids(back.root), &[FALSE, TRUE, TRUE]);
    }

    #[test]
    fn node_limit_is_reported() {
        let mut m = Manager::new(3);
        m.mk(0, vec![TRUE, FALSE, FALSE]).unwrap();
        assert!(matches!(m.mk(1, vec![TRUE, FALSE, FALSE]), Err(QeError::ResourceLimit(_))));
    }
}
