use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Atom, Formula, Term};

/// Terms of the language of rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingTerm {
    Var(String),
    Zero,
    One,
    Neg(Box<RingTerm>),
    Add(Box<RingTerm>, Box<RingTerm>),
    Mul(Box<RingTerm>, Box<RingTerm>),
}

#[allow(clippy::should_implement_trait)]
impl RingTerm {
    pub fn neg(t: RingTerm) -> Self {
        RingTerm::Neg(Box::new(t))
    }

    pub fn add(l: RingTerm, r: RingTerm) -> Self {
        RingTerm::Add(Box::new(l), Box::new(r))
    }

    pub fn mul(l: RingTerm, r: RingTerm) -> Self {
        RingTerm::Mul(Box::new(l), Box::new(r))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            RingTerm::Add(..) => 1,
            RingTerm::Mul(..) => 2,
            RingTerm::Neg(_) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            RingTerm::Var(v) => f.write_str(v)?,
            RingTerm::Zero => f.write_str("0")?,
            RingTerm::One => f.write_str("1")?,
            RingTerm::Neg(t) => {
                f.write_str("-")?;
                t.fmt_prec(f, 3)?;
            }
            RingTerm::Add(l, r) => {
                l.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                r.fmt_prec(f, 2)?;
            }
            RingTerm::Mul(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str("*")?;
                r.fmt_prec(f, 3)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Term for RingTerm {
    fn var(name: &str) -> Self {
        RingTerm::Var(name.to_string())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            RingTerm::Var(v) => {
                out.insert(v.clone());
            }
            RingTerm::Zero | RingTerm::One => {}
            RingTerm::Neg(t) => t.collect_vars(out),
            RingTerm::Add(l, r) | RingTerm::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    fn subst(&self, map: &BTreeMap<String, Self>) -> Self {
        match self {
            RingTerm::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            RingTerm::Zero | RingTerm::One => self.clone(),
            RingTerm::Neg(t) => RingTerm::neg(t.subst(map)),
            RingTerm::Add(l, r) => RingTerm::add(l.subst(map), r.subst(map)),
            RingTerm::Mul(l, r) => RingTerm::mul(l.subst(map), r.subst(map)),
        }
    }
}

impl fmt::Display for RingTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// The only atomic formula of the language of rings: an equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingAtom {
    pub left: RingTerm,
    pub right: RingTerm,
}

impl RingAtom {
    pub fn new(left: RingTerm, right: RingTerm) -> Self {
        RingAtom { left, right }
    }
}

impl Atom for RingAtom {
    type Term = RingTerm;

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.left.collect_vars(out);
        self.right.collect_vars(out);
    }

    fn subst(&self, map: &BTreeMap<String, RingTerm>) -> Self {
        RingAtom::new(self.left.subst(map), self.right.subst(map))
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }

    fn needs_parens_under_not(&self) -> bool {
        true
    }
}

pub type RingFormula = Formula<RingAtom>;

impl RingFormula {
    pub fn eq(left: RingTerm, right: RingTerm) -> Self {
        Formula::Atom(RingAtom::new(left, right))
    }

    /// `0 = 0`, used wherever a trivially true formula is needed.
    pub fn truth() -> Self {
        Self::eq(RingTerm::Zero, RingTerm::Zero)
    }

    /// The distinct atomic equations occurring in the formula, in order of
    /// first occurrence.
    pub fn atoms(&self) -> Vec<RingAtom> {
        fn walk(f: &RingFormula, out: &mut Vec<RingAtom>) {
            match f {
                Formula::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => walk(g, out),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}
