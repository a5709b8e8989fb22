use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Atom, Formula, Term};

/// Terms of the language of Boolean algebras. `Diff(l, r)` abbreviates
/// `l ^ !r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolTerm {
    Var(String),
    Zero,
    One,
    Meet(Box<BoolTerm>, Box<BoolTerm>),
    Join(Box<BoolTerm>, Box<BoolTerm>),
    Complement(Box<BoolTerm>),
    Diff(Box<BoolTerm>, Box<BoolTerm>),
}

impl BoolTerm {
    pub fn meet(l: BoolTerm, r: BoolTerm) -> Self {
        BoolTerm::Meet(Box::new(l), Box::new(r))
    }

    pub fn join(l: BoolTerm, r: BoolTerm) -> Self {
        BoolTerm::Join(Box::new(l), Box::new(r))
    }

    pub fn complement(t: BoolTerm) -> Self {
        BoolTerm::Complement(Box::new(t))
    }

    pub fn diff(l: BoolTerm, r: BoolTerm) -> Self {
        BoolTerm::Diff(Box::new(l), Box::new(r))
    }

    /// Left-nested join; the empty join is `0`.
    pub fn join_all(parts: impl IntoIterator<Item = BoolTerm>) -> Self {
        parts.into_iter().reduce(Self::join).unwrap_or(BoolTerm::Zero)
    }

    /// Left-nested meet; the empty meet is `1`.
    pub fn meet_all(parts: impl IntoIterator<Item = BoolTerm>) -> Self {
        parts.into_iter().reduce(Self::meet).unwrap_or(BoolTerm::One)
    }

    /// Truth of the term at a point, where `lookup` gives the membership of
    /// each variable.
    pub fn holds_at(&self, lookup: &impl Fn(&str) -> bool) -> bool {
        match self {
            BoolTerm::Var(v) => lookup(v),
            BoolTerm::Zero => false,
            BoolTerm::One => true,
            BoolTerm::Meet(l, r) => l.holds_at(lookup) && r.holds_at(lookup),
            BoolTerm::Join(l, r) => l.holds_at(lookup) || r.holds_at(lookup),
            BoolTerm::Complement(t) => !t.holds_at(lookup),
            BoolTerm::Diff(l, r) => l.holds_at(lookup) && !r.holds_at(lookup),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolTerm::Join(..) => 1,
            BoolTerm::Diff(..) => 2,
            BoolTerm::Meet(..) => 3,
            BoolTerm::Complement(_) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            BoolTerm::Var(v) => f.write_str(v)?,
            BoolTerm::Zero => f.write_str("0")?,
            BoolTerm::One => f.write_str("1")?,
            BoolTerm::Complement(t) => {
                f.write_str("!")?;
                t.fmt_prec(f, 4)?;
            }
            BoolTerm::Join(l, r) => {
                l.fmt_prec(f, 1)?;
                f.write_str(" v ")?;
                r.fmt_prec(f, 2)?;
            }
            BoolTerm::Diff(l, r) => {
                l.fmt_prec(f, 2)?;
                f.write_str(" \\ ")?;
                r.fmt_prec(f, 3)?;
            }
            BoolTerm::Meet(l, r) => {
                l.fmt_prec(f, 3)?;
                f.write_str(" ^ ")?;
                r.fmt_prec(f, 4)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Term for BoolTerm {
    fn var(name: &str) -> Self {
        BoolTerm::Var(name.to_string())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolTerm::Var(v) => {
                out.insert(v.clone());
            }
            BoolTerm::Zero | BoolTerm::One => {}
            BoolTerm::Complement(t) => t.collect_vars(out),
            BoolTerm::Meet(l, r) | BoolTerm::Join(l, r) | BoolTerm::Diff(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    fn subst(&self, map: &BTreeMap<String, Self>) -> Self {
        match self {
            BoolTerm::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            BoolTerm::Zero | BoolTerm::One => self.clone(),
            BoolTerm::Complement(t) => BoolTerm::complement(t.subst(map)),
            BoolTerm::Meet(l, r) => BoolTerm::meet(l.subst(map), r.subst(map)),
            BoolTerm::Join(l, r) => BoolTerm::join(l.subst(map), r.subst(map)),
            BoolTerm::Diff(l, r) => BoolTerm::diff(l.subst(map), r.subst(map)),
        }
    }
}

impl fmt::Display for BoolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Atoms of the Boolean language extended by `Fin` and `C_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolAtom {
    Eq(BoolTerm, BoolTerm),
    /// `l <= r`, i.e. `l ^ r = l`.
    Leq(BoolTerm, BoolTerm),
    /// `C_n(t)`: at least `n` atoms lie below `t`; `n >= 1`.
    CountAtLeast(u32, BoolTerm),
    Fin(BoolTerm),
}

impl Atom for BoolAtom {
    type Term = BoolTerm;

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolAtom::Eq(l, r) | BoolAtom::Leq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            BoolAtom::CountAtLeast(_, t) | BoolAtom::Fin(t) => t.collect_vars(out),
        }
    }

    fn subst(&self, map: &BTreeMap<String, BoolTerm>) -> Self {
        match self {
            BoolAtom::Eq(l, r) => BoolAtom::Eq(l.subst(map), r.subst(map)),
            BoolAtom::Leq(l, r) => BoolAtom::Leq(l.subst(map), r.subst(map)),
            BoolAtom::CountAtLeast(n, t) => BoolAtom::CountAtLeast(*n, t.subst(map)),
            BoolAtom::Fin(t) => BoolAtom::Fin(t.subst(map)),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolAtom::Eq(l, r) => write!(f, "{l} = {r}"),
            BoolAtom::Leq(l, r) => write!(f, "{l} <= {r}"),
            BoolAtom::CountAtLeast(n, t) => write!(f, "C{n}({t})"),
            BoolAtom::Fin(t) => write!(f, "Fin({t})"),
        }
    }

    fn needs_parens_under_not(&self) -> bool {
        matches!(self, BoolAtom::Eq(..) | BoolAtom::Leq(..))
    }
}

pub type BoolFormula = Formula<BoolAtom>;

impl BoolFormula {
    pub fn eq(l: BoolTerm, r: BoolTerm) -> Self {
        Formula::Atom(BoolAtom::Eq(l, r))
    }

    pub fn leq(l: BoolTerm, r: BoolTerm) -> Self {
        Formula::Atom(BoolAtom::Leq(l, r))
    }

    pub fn count_at_least(n: u32, t: BoolTerm) -> Self {
        debug_assert!(n >= 1);
        Formula::Atom(BoolAtom::CountAtLeast(n, t))
    }

    pub fn fin(t: BoolTerm) -> Self {
        Formula::Atom(BoolAtom::Fin(t))
    }

    /// `0 = 0`.
    pub fn truth() -> Self {
        Self::eq(BoolTerm::Zero, BoolTerm::Zero)
    }

    /// `1 = 0`.
    pub fn falsity() -> Self {
        Self::eq(BoolTerm::One, BoolTerm::Zero)
    }

    /// Largest `n` of any `C_n` atom, or 0 when there is none.
    pub fn max_count_index(&self) -> u32 {
        match self {
            Formula::Atom(BoolAtom::CountAtLeast(n, _)) => *n,
            Formula::Atom(_) => 0,
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.max_count_index(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.max_count_index().max(r.max_count_index())
            }
        }
    }

    /// `Part(y_0, ..., y_k)`: the terms are pairwise disjoint and join to 1.
    pub fn partition_of(terms: &[BoolTerm]) -> Self {
        let mut parts = vec![Self::eq(BoolTerm::join_all(terms.iter().cloned()), BoolTerm::One)];
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                parts.push(Self::eq(
                    BoolTerm::meet(terms[i].clone(), terms[j].clone()),
                    BoolTerm::Zero,
                ));
            }
        }
        Self::conjoin(parts).expect("nonempty")
    }
}
