//! First-order syntax for the two languages in play: the language of rings
//! `{+, *, -, 0, 1}` and the language of Boolean algebras `{^, v, !, 0, 1}`
//! extended by the predicates `Fin` and `C_n`.
//!
//! Both languages share the connective and quantifier layer, [`Formula`],
//! and differ only in their atoms. Everything here is a pure value.

mod boolean;
mod parse;
mod partition;
mod ring;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use boolean::{BoolAtom, BoolFormula, BoolTerm};
pub use parse::{parse_bool_formula, parse_bool_term, parse_ring_formula, parse_ring_term, ParseError};
pub use partition::{sign_partition, Partition};
pub use ring::{RingAtom, RingFormula, RingTerm};

/// Terms of one of the two languages.
pub trait Term: Clone + Eq + fmt::Display {
    fn var(name: &str) -> Self;
    fn collect_vars(&self, out: &mut BTreeSet<String>);
    /// Simultaneous substitution of variables by terms.
    fn subst(&self, map: &BTreeMap<String, Self>) -> Self;
}

/// Atomic formulas over some term language.
pub trait Atom: Clone + Eq {
    type Term: Term;
    fn collect_vars(&self, out: &mut BTreeSet<String>);
    fn subst(&self, map: &BTreeMap<String, Self::Term>) -> Self;
    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
    /// Whether the rendering needs parentheses when negated.
    fn needs_parens_under_not(&self) -> bool;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula<A> {
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Exists(String, Box<Formula<A>>),
    Forall(String, Box<Formula<A>>),
}

#[allow(clippy::should_implement_trait)]
impl<A: Atom> Formula<A> {
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Self, r: Self) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Self, r: Self) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn exists(var: impl Into<String>, body: Self) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Self) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// Left-nested conjunction; `None` for an empty sequence.
    pub fn conjoin(parts: impl IntoIterator<Item = Self>) -> Option<Self> {
        parts.into_iter().reduce(Self::and)
    }

    /// Left-nested disjunction; `None` for an empty sequence.
    pub fn disjoin(parts: impl IntoIterator<Item = Self>) -> Option<Self> {
        parts.into_iter().reduce(Self::or)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => a.collect_vars(out),
            Formula::Not(f) => f.collect_all(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_all(out);
                r.collect_all(out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                out.insert(v.clone());
                body.collect_all(out);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.is_quantifier_free() && r.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.quantifier_depth().max(r.quantifier_depth())
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + body.quantifier_depth(),
        }
    }

    /// Capture-avoiding substitution of `term` for the free occurrences of `var`.
    pub fn substitute(&self, var: &str, term: &A::Term) -> Self {
        let mut map = BTreeMap::new();
        map.insert(var.to_string(), term.clone());
        self.substitute_all(&map)
    }

    /// Simultaneous capture-avoiding substitution. Binders that would capture a
    /// variable of an inserted term are renamed.
    pub fn substitute_all(&self, map: &BTreeMap<String, A::Term>) -> Self {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(a) => Formula::Atom(a.subst(map)),
            Formula::Not(f) => Formula::not(f.substitute_all(map)),
            Formula::And(l, r) => Formula::and(l.substitute_all(map), r.substitute_all(map)),
            Formula::Or(l, r) => Formula::or(l.substitute_all(map), r.substitute_all(map)),
            Formula::Implies(l, r) => {
                Formula::implies(l.substitute_all(map), r.substitute_all(map))
            }
            Formula::Exists(v, body) => {
                let (v, body) = Self::subst_binder(v, body, map);
                Formula::Exists(v, Box::new(body))
            }
            Formula::Forall(v, body) => {
                let (v, body) = Self::subst_binder(v, body, map);
                Formula::Forall(v, Box::new(body))
            }
        }
    }

    fn subst_binder(
        var: &str,
        body: &Self,
        map: &BTreeMap<String, A::Term>,
    ) -> (String, Self) {
        let mut inner = map.clone();
        inner.remove(var);
        let body_free = body.free_vars();
        inner.retain(|k, _| body_free.contains(k));
        if inner.is_empty() {
            return (var.to_string(), body.clone());
        }
        let mut incoming = BTreeSet::new();
        for t in inner.values() {
            t.collect_vars(&mut incoming);
        }
        if !incoming.contains(var) {
            return (var.to_string(), body.substitute_all(&inner));
        }
        let mut avoid = body.all_vars();
        avoid.extend(incoming);
        avoid.extend(inner.keys().cloned());
        let fresh = fresh_name(var, &avoid);
        let renamed = body.substitute(var, &A::Term::var(&fresh));
        (fresh, renamed.substitute_all(&inner))
    }

    /// Renames binders that re-bind a name already bound on the same branch.
    pub fn rename_shadowed(&self) -> Self {
        let mut avoid = self.all_vars();
        self.rename_shadowed_in(&mut Vec::new(), &mut avoid)
    }

    fn rename_shadowed_in(&self, bound: &mut Vec<String>, avoid: &mut BTreeSet<String>) -> Self {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.rename_shadowed_in(bound, avoid)),
            Formula::And(l, r) => Formula::and(
                l.rename_shadowed_in(bound, avoid),
                r.rename_shadowed_in(bound, avoid),
            ),
            Formula::Or(l, r) => Formula::or(
                l.rename_shadowed_in(bound, avoid),
                r.rename_shadowed_in(bound, avoid),
            ),
            Formula::Implies(l, r) => Formula::implies(
                l.rename_shadowed_in(bound, avoid),
                r.rename_shadowed_in(bound, avoid),
            ),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let (name, body) = if bound.contains(v) {
                    let fresh = fresh_name(v, avoid);
                    avoid.insert(fresh.clone());
                    (fresh.clone(), body.substitute(v, &A::Term::var(&fresh)))
                } else {
                    (v.clone(), (**body).clone())
                };
                bound.push(name.clone());
                let body = body.rename_shadowed_in(bound, avoid);
                bound.pop();
                match self {
                    Formula::Exists(..) => Formula::Exists(name, Box::new(body)),
                    _ => Formula::Forall(name, Box::new(body)),
                }
            }
        }
    }

    /// Rewrites into the `{atom, not, and, exists}` fragment.
    pub fn to_core_connectives(&self) -> Self {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.to_core_connectives()),
            Formula::And(l, r) => Formula::and(l.to_core_connectives(), r.to_core_connectives()),
            Formula::Or(l, r) => Formula::not(Formula::and(
                Formula::not(l.to_core_connectives()),
                Formula::not(r.to_core_connectives()),
            )),
            Formula::Implies(l, r) => Formula::not(Formula::and(
                l.to_core_connectives(),
                Formula::not(r.to_core_connectives()),
            )),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.to_core_connectives()),
            Formula::Forall(v, body) => Formula::not(Formula::exists(
                v.clone(),
                Formula::not(body.to_core_connectives()),
            )),
        }
    }
}

/// `base` with primes appended until it avoids every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    Top,
    Operand,
}

impl<A: Atom> Formula<A> {
    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, pos: Position) -> fmt::Result {
        match self {
            Formula::Atom(a) => a.fmt_atom(f),
            Formula::Not(inner) => {
                f.write_str("~")?;
                match &**inner {
                    Formula::Atom(a) if a.needs_parens_under_not() => {
                        f.write_str("(")?;
                        a.fmt_atom(f)?;
                        f.write_str(")")
                    }
                    other => other.fmt_at(f, Position::Operand),
                }
            }
            Formula::And(l, r) => Self::fmt_binary(f, pos, l, "&", r),
            Formula::Or(l, r) => Self::fmt_binary(f, pos, l, "|", r),
            Formula::Implies(l, r) => Self::fmt_binary(f, pos, l, "->", r),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let q = if matches!(self, Formula::Exists(..)) { "E" } else { "A" };
                if pos == Position::Operand {
                    f.write_str("(")?;
                }
                write!(f, "{q} {v}. ")?;
                body.fmt_at(f, Position::Top)?;
                if pos == Position::Operand {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }

    fn fmt_binary(
        f: &mut fmt::Formatter<'_>,
        pos: Position,
        l: &Self,
        op: &str,
        r: &Self,
    ) -> fmt::Result {
        if pos == Position::Operand {
            f.write_str("(")?;
        }
        l.fmt_at(f, Position::Operand)?;
        write!(f, " {op} ")?;
        r.fmt_at(f, Position::Operand)?;
        if pos == Position::Operand {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<A: Atom> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, Position::Top)
    }
}
