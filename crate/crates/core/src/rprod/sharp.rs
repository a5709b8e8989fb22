//! The unit-pair condition on finite idempotents: a finite idempotent `e`
//! is witnessed by `g, h` with `e <= [[g*h = 1 & phi(g) & ~phi(h)]]`.

use std::collections::BTreeMap;
use std::fmt;

use super::{boolean_value, RPElement, RPEnv, RPModel, RprodError};
use crate::boolalg::{is_fin, FinCofSet};
use crate::formula::{parse_ring_formula, Formula, RingAtom, RingFormula, RingTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SharpOutcome {
    Found(RPElement, RPElement),
    NotFound,
}

fn unit_pair_formula(phi: &RingFormula, phi_var: &str) -> RingFormula {
    let at = |v: &str| phi.substitute(phi_var, &RingTerm::Var(v.to_string()));
    let product = RingFormula::eq(RingTerm::mul(RingTerm::Var("g".into()), RingTerm::Var("h".into())), RingTerm::One);
    Formula::and(product, Formula::and(at("g"), Formula::not(at("h"))))
}

/// `[[g*h = 1 & phi(g) & ~phi(h)]]`.
pub fn sharp_value(model: &RPModel, g: &RPElement, h: &RPElement) -> Result<FinCofSet, RprodError> {
    let theta = unit_pair_formula(model.phi(), model.phi_var());
    let env: RPEnv = [("g".to_string(), g.clone()), ("h".to_string(), h.clone())].into_iter().collect();
    boolean_value(model, &theta, &env)
}

/// Search for `g, h` equal to 1 off the support of `e` such that the unit
/// pair condition holds on the whole support. Coordinates are independent,
/// so each support index is searched exhaustively, trying at most
/// `search_bound` pairs per index.
pub fn sharp_probe(model: &RPModel, e: &RPElement, search_bound: u64) -> Result<SharpOutcome, RprodError> {
    if RPElement::mul(model, e, e)? != *e {
        return Err(RprodError::Precondition("element is not idempotent".into()));
    }
    let env: RPEnv = [("x".to_string(), e.clone())].into_iter().collect();
    let support = boolean_value(model, &RingFormula::eq(RingTerm::Var("x".into()), RingTerm::One), &env)?;
    if !is_fin(&support) {
        return Err(RprodError::Precondition(format!("support {support} is not finite")));
    }
    let one = RPElement::one(model);
    let mut gs = Vec::new();
    let mut hs = Vec::new();
    for &i in support.support() {
        let stalk = model.stalk(i);
        let ring = &stalk.ring;
        let mut tried = 0u64;
        let mut found = None;
        'search: for g in stalk.phi_set.iter().copied() {
            for h in ring.elements() {
                if tried >= search_bound {
                    break 'search;
                }
                tried += 1;
                if ring.mul(g, h) == ring.one() && !stalk.satisfies_phi(h) {
                    found = Some((g, h));
                    break 'search;
                }
            }
        }
        match found {
            Some((g, h)) => {
                gs.push((i, g));
                hs.push((i, h));
            }
            None => return Ok(SharpOutcome::NotFound),
        }
    }
    if gs.is_empty() {
        return Ok(SharpOutcome::Found(one.clone(), one));
    }
    let default = model.tail().ring.one();
    Ok(SharpOutcome::Found(RPElement::new(model, default, gs)?, RPElement::new(model, default, hs)?))
}

/// Integer polynomial in commuting variables: monomial (sorted variable
/// list) to coefficient.
type Poly = BTreeMap<Vec<String>, i128>;

fn poly_of(t: &RingTerm) -> Poly {
    let mut out = Poly::new();
    match t {
        RingTerm::Var(v) => {
            out.insert(vec![v.clone()], 1);
        }
        RingTerm::Zero => {}
        RingTerm::One => {
            out.insert(Vec::new(), 1);
        }
        RingTerm::Neg(x) => {
            out = poly_of(x);
            out.values_mut().for_each(|c| *c = -*c);
        }
        RingTerm::Add(l, r) => {
            out = poly_of(l);
            for (m, c) in poly_of(r) {
                *out.entry(m).or_insert(0) += c;
            }
        }
        RingTerm::Mul(l, r) => {
            let (pl, pr) = (poly_of(l), poly_of(r));
            for (ml, cl) in &pl {
                for (mr, cr) in &pr {
                    let mut m: Vec<String> = ml.iter().chain(mr).cloned().collect();
                    m.sort();
                    *out.entry(m).or_insert(0) += cl * cr;
                }
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Whether `left = right` holds in every commutative ring, i.e. the two
/// sides are equal as integer polynomials.
pub fn is_polynomial_identity(atom: &RingAtom) -> bool {
    poly_of(&atom.left) == poly_of(&atom.right)
}

/// Whether a quantifier-free formula is true in every ring for the reason
/// that it is a propositional tautology once polynomial identities are read
/// as true.
fn is_identity_tautology(f: &RingFormula) -> bool {
    if !f.is_quantifier_free() {
        return false;
    }
    let atoms = f.atoms();
    let open: Vec<&RingAtom> = atoms.iter().filter(|a| !is_polynomial_identity(a)).collect();
    if open.len() > 16 {
        return false;
    }
    fn value(f: &RingFormula, open: &[&RingAtom], assignment: u32) -> bool {
        match f {
            Formula::Atom(a) => match open.iter().position(|b| *b == a) {
                Some(k) => assignment >> k & 1 == 1,
                None => true,
            },
            Formula::Not(g) => !value(g, open, assignment),
            Formula::And(l, r) => value(l, open, assignment) && value(r, open, assignment),
            Formula::Or(l, r) => value(l, open, assignment) || value(r, open, assignment),
            Formula::Implies(l, r) => !value(l, open, assignment) || value(r, open, assignment),
            Formula::Exists(..) | Formula::Forall(..) => unreachable!("quantifier-free"),
        }
    }
    (0..1u32 << open.len()).all(|a| value(f, &open, a))
}

/// The Boolean-value condition `E g. E h. (e <= [[g*h = 1 & phi(g) &
/// ~phi(h)]])` with `phi` inlined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCharacterization {
    pub body: RingFormula,
    /// `~phi` is unsatisfiable in every ring, so only `e = 0` qualifies.
    pub defines_only_zero: bool,
}

const PREFIX: &str = "E g. E h. (e <= [[";
const SUFFIX: &str = "]])";

impl FinCharacterization {
    pub fn text(&self) -> String {
        format!("{PREFIX}{}{SUFFIX}", self.body)
    }

    /// Line-oriented `key=value` record.
    pub fn record(&self) -> String {
        format!("condition={}\nbody={}\ndefines_only_zero={}", self.text(), self.body, self.defines_only_zero)
    }

    /// Inverse of [`FinCharacterization::text`].
    pub fn parse(text: &str) -> Result<Self, RprodError> {
        let inner = text
            .trim()
            .strip_prefix(PREFIX)
            .and_then(|t| t.strip_suffix(SUFFIX))
            .ok_or_else(|| RprodError::BadLiteral(text.to_string()))?;
        let body = parse_ring_formula(inner).map_err(RprodError::PhiParse)?;
        Ok(FinCharacterization { defines_only_zero: body_defines_only_zero(&body), body })
    }
}

impl fmt::Display for FinCharacterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())?;
        if self.defines_only_zero {
            f.write_str("  (defines only e = 0)")?;
        }
        Ok(())
    }
}

fn body_defines_only_zero(body: &RingFormula) -> bool {
    match body {
        Formula::And(_, rest) => match rest.as_ref() {
            Formula::And(_, negated) => match negated.as_ref() {
                Formula::Not(phi_h) => is_identity_tautology(phi_h),
                _ => false,
            },
            _ => false,
        },
        _ => false,
    }
}

pub fn fin_defining_characterization(phi: &RingFormula) -> Result<FinCharacterization, RprodError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    if free.len() != 1 {
        return Err(RprodError::PhiArity(free));
    }
    let body = unit_pair_formula(phi, &free[0]);
    Ok(FinCharacterization { defines_only_zero: is_identity_tautology(phi), body })
}
