//! Finite commutative unital rings given by tables, used as the stalks of a
//! restricted product, with first-order satisfaction by enumeration.

mod eval;
mod spec;

use std::fmt;

use thiserror::Error;

pub use eval::{check_partition, eval_stalk_formula, CompiledFormula};
pub use spec::RingSpec;

use crate::formula::RingFormula;

/// Index of an element in a ring's carrier.
pub type Elem = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StalkError {
    #[error("zmod(n) needs n >= 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("carrier too large ({0} elements)")]
    CarrierTooLarge(usize),
    #[error("malformed ring spec `{0}`")]
    BadSpec(String),
    #[error("ring axiom violated: {0}")]
    AxiomViolation(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("restricting formula must have exactly one free variable, found {0:?}")]
    WrongArity(Vec<String>),
    #[error("not a unital subring: {0}")]
    NotUnitalSubring(String),
}

/// A finite commutative ring with `0 != 1`, validated exhaustively on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    label: String,
    names: Vec<String>,
    add: Vec<Vec<Elem>>,
    mul: Vec<Vec<Elem>>,
    neg: Vec<Elem>,
    zero: Elem,
    one: Elem,
}

impl FiniteRing {
    /// Build a ring from tables over `names`, checking every axiom instance.
    pub fn from_tables(
        label: impl Into<String>,
        names: Vec<String>,
        add: Vec<Vec<Elem>>,
        mul: Vec<Vec<Elem>>,
    ) -> Result<Self, StalkError> {
        let n = names.len();
        if n > 4096 {
            return Err(StalkError::CarrierTooLarge(n));
        }
        let shape_ok = |t: &Vec<Vec<Elem>>| t.len() == n && t.iter().all(|row| row.len() == n && row.iter().all(|&e| (e as usize) < n));
        if n == 0 || !shape_ok(&add) || !shape_ok(&mul) {
            return Err(StalkError::BadSpec(format!("tables must be {n} x {n} over the carrier")));
        }
        for i in 0..n {
            for j in i + 1..n {
                if names[i] == names[j] {
                    return Err(StalkError::BadSpec(format!("duplicate element `{}`", names[i])));
                }
            }
        }
        let all = || 0..n as Elem;
        let zero = all()
            .find(|&z| all().all(|x| add[z as usize][x as usize] == x))
            .ok_or_else(|| StalkError::AxiomViolation("no additive identity".into()))?;
        let one = all()
            .find(|&u| all().all(|x| mul[u as usize][x as usize] == x))
            .ok_or_else(|| StalkError::AxiomViolation("no multiplicative identity".into()))?;
        if zero == one {
            return Err(StalkError::AxiomViolation("0 = 1".into()));
        }
        let mut neg = Vec::with_capacity(n);
        for x in all() {
            let inv = all()
                .find(|&y| add[x as usize][y as usize] == zero)
                .ok_or_else(|| StalkError::AxiomViolation(format!("{} has no additive inverse", names[x as usize])))?;
            neg.push(inv);
        }
        let ring = FiniteRing { label: label.into(), names, add, mul, neg, zero, one };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<(), StalkError> {
        let n = self.size() as Elem;
        let nm = |x: Elem| self.name(x);
        for a in 0..n {
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(StalkError::AxiomViolation(format!("{} + {} != {} + {}", nm(a), nm(b), nm(b), nm(a))));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(StalkError::AxiomViolation(format!("{}*{} != {}*{}", nm(a), nm(b), nm(b), nm(a))));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(StalkError::AxiomViolation(format!(
                            "(({} + {}) + {}) != ({} + ({} + {}))",
                            nm(a), nm(b), nm(c), nm(a), nm(b), nm(c)
                        )));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(StalkError::AxiomViolation(format!(
                            "({}*{})*{} != {}*({}*{})",
                            nm(a), nm(b), nm(c), nm(a), nm(b), nm(c)
                        )));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(StalkError::AxiomViolation(format!(
                            "{}*({} + {}) != {}*{} + {}*{}",
                            nm(a), nm(b), nm(c), nm(a), nm(b), nm(a), nm(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The ring spec text this ring was built from, e.g. `zmod(4)`.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.names.len() as Elem
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e as usize]
    }

    pub fn element(&self, name: &str) -> Result<Elem, StalkError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Elem)
            .ok_or_else(|| StalkError::UnknownElement(name.to_string()))
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize][b as usize]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize][b as usize]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.mul(x, x) == x).collect()
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.elements().any(|y| self.mul(x, y) == self.one)).collect()
    }

    /// The sub-table ring on `subset`, which must contain 0 and 1 and be
    /// closed under the operations.
    pub fn restrict(&self, subset: &[Elem]) -> Result<FiniteRing, StalkError> {
        let index = |e: Elem| subset.iter().position(|&s| s == e).map(|i| i as Elem);
        let table = |op: &dyn Fn(Elem, Elem) -> Elem| -> Result<Vec<Vec<Elem>>, StalkError> {
            subset
                .iter()
                .map(|&a| {
                    subset
                        .iter()
                        .map(|&b| {
                            index(op(a, b)).ok_or_else(|| {
                                StalkError::NotUnitalSubring(format!("subset not closed at {}, {}", self.name(a), self.name(b)))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let add = table(&|a, b| self.add(a, b))?;
        let mul = table(&|a, b| self.mul(a, b))?;
        let names = subset.iter().map(|&e| self.name(e).to_string()).collect();
        FiniteRing::from_tables(format!("sub({})", self.label), names, add, mul)
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

pub fn make_ring(spec: &RingSpec) -> Result<FiniteRing, StalkError> {
    spec.build()
}

/// Whether 0 and 1 are the only idempotents.
pub fn is_connected(r: &FiniteRing) -> bool {
    r.idempotents().len() == 2
}

/// `{x : r |= phi(x)}`, checked to be a unital subring.
pub fn validate_restricting_formula(r: &FiniteRing, phi: &RingFormula) -> Result<Vec<Elem>, StalkError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    if free.len() != 1 {
        return Err(StalkError::WrongArity(free));
    }
    let compiled = CompiledFormula::compile(phi, &free)?;
    let set: Vec<Elem> = r.elements().filter(|&x| compiled.eval(r, &[x])).collect();
    let member = |e: Elem| set.contains(&e);
    let nm = |e: Elem| r.name(e);
    for (e, what) in [(r.zero(), "0"), (r.one(), "1")] {
        if !member(e) {
            return Err(StalkError::NotUnitalSubring(format!("{what} is not in the defined set")));
        }
    }
    for &a in &set {
        for &b in &set {
            let s = r.add(a, b);
            if !member(s) {
                return Err(StalkError::NotUnitalSubring(format!(
                    "{} + {} = {} is not in the defined set",
                    nm(a), nm(b), nm(s)
                )));
            }
            let p = r.mul(a, b);
            if !member(p) {
                return Err(StalkError::NotUnitalSubring(format!(
                    "{}*{} = {} is not in the defined set",
                    nm(a), nm(b), nm(p)
                )));
            }
        }
    }
    for &a in &set {
        if !member(r.neg(a)) {
            return Err(StalkError::NotUnitalSubring(format!("-{} = {} is not in the defined set", nm(a), nm(r.neg(a)))));
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests;
