use std::collections::{BTreeMap, BTreeSet};

use super::{RPModel, RprodError};
use crate::formula::RingTerm;
use crate::stalk::Elem;

/// An eventually-default element: `default` (a tail element satisfying
/// `phi`) at every index except the listed exceptions.
///
/// At an exceptional index without an entry the value is the image of the
/// default, which exists only when the default is 0 or 1; other defaults
/// need an explicit value at every exceptional index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RPElement {
    model: u64,
    default: Elem,
    exceptions: BTreeMap<u64, Elem>,
}

pub type RPEnv = BTreeMap<String, RPElement>;

/// The value a default takes at index `i` when no exception is recorded.
fn implied(model: &RPModel, default: Elem, i: u64) -> Option<Elem> {
    if !model.is_exceptional(i) {
        return Some(default);
    }
    let (tail, stalk) = (&model.tail().ring, &model.stalk(i).ring);
    if default == tail.zero() {
        Some(stalk.zero())
    } else if default == tail.one() {
        Some(stalk.one())
    } else {
        None
    }
}

impl RPElement {
    /// Validate and canonicalize: exceptions equal to the implied value are
    /// dropped.
    pub fn new(model: &RPModel, default: Elem, exceptions: impl IntoIterator<Item = (u64, Elem)>) -> Result<Self, RprodError> {
        let tail = model.tail();
        if default as usize >= tail.ring.size() {
            return Err(RprodError::BadCarrier { index: u64::MAX, message: "default outside the tail carrier".into() });
        }
        if !tail.satisfies_phi(default) {
            return Err(RprodError::DefaultViolatesPhi(tail.ring.name(default).to_string()));
        }
        let mut kept = BTreeMap::new();
        for (i, v) in exceptions {
            let stalk = &model.stalk(i).ring;
            if v as usize >= stalk.size() {
                return Err(RprodError::BadCarrier { index: i, message: format!("no element #{v} in {stalk}") });
            }
            if implied(model, default, i) != Some(v) {
                kept.insert(i, v);
            }
        }
        for &i in model.exceptional().keys() {
            if implied(model, default, i).is_none() && !kept.contains_key(&i) {
                return Err(RprodError::BadCarrier {
                    index: i,
                    message: format!(
                        "default {} has no image in {}; give an explicit value",
                        tail.ring.name(default),
                        model.stalk(i).ring
                    ),
                });
            }
        }
        Ok(RPElement { model: model.id(), default, exceptions: kept })
    }

    pub fn constant(model: &RPModel, default: Elem) -> Result<Self, RprodError> {
        Self::new(model, default, [])
    }

    pub fn zero(model: &RPModel) -> Self {
        Self::constant(model, model.tail().ring.zero()).expect("0 satisfies phi")
    }

    pub fn one(model: &RPModel) -> Self {
        Self::constant(model, model.tail().ring.one()).expect("1 satisfies phi")
    }

    pub fn model_id(&self) -> u64 {
        self.model
    }

    pub fn default_value(&self) -> Elem {
        self.default
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Elem> {
        &self.exceptions
    }

    fn check(&self, model: &RPModel) -> Result<(), RprodError> {
        if self.model == model.id() {
            Ok(())
        } else {
            Err(RprodError::ModelMismatch)
        }
    }

    pub fn value_at(&self, model: &RPModel, i: u64) -> Elem {
        self.exceptions
            .get(&i)
            .copied()
            .or_else(|| implied(model, self.default, i))
            .expect("canonical elements are total")
    }

    /// Indices whose value may differ from the tail default: exceptions and
    /// exceptional stalks.
    pub fn explicit_indices(&self, model: &RPModel) -> BTreeSet<u64> {
        self.exceptions.keys().chain(model.exceptional().keys()).copied().collect()
    }

    fn pointwise(
        model: &RPModel,
        args: &[&RPElement],
        op: impl Fn(&crate::stalk::FiniteRing, &[Elem]) -> Elem,
    ) -> Result<RPElement, RprodError> {
        for a in args {
            a.check(model)?;
        }
        let defaults: Vec<Elem> = args.iter().map(|a| a.default).collect();
        let default = op(&model.tail().ring, &defaults);
        let mut indices: BTreeSet<u64> = model.exceptional().keys().copied().collect();
        for a in args {
            indices.extend(a.exceptions.keys().copied());
        }
        let exceptions = indices.into_iter().map(|i| {
            let vals: Vec<Elem> = args.iter().map(|a| a.value_at(model, i)).collect();
            (i, op(&model.stalk(i).ring, &vals))
        });
        RPElement::new(model, default, exceptions)
    }

    pub fn add(model: &RPModel, a: &RPElement, b: &RPElement) -> Result<RPElement, RprodError> {
        Self::pointwise(model, &[a, b], |r, v| r.add(v[0], v[1]))
    }

    pub fn mul(model: &RPModel, a: &RPElement, b: &RPElement) -> Result<RPElement, RprodError> {
        Self::pointwise(model, &[a, b], |r, v| r.mul(v[0], v[1]))
    }

    pub fn neg(model: &RPModel, a: &RPElement) -> Result<RPElement, RprodError> {
        Self::pointwise(model, &[a], |r, v| r.neg(v[0]))
    }

    /// Value of a ring term with variables bound in `env`, computed with the
    /// pointwise operations.
    pub fn eval_term(model: &RPModel, t: &RingTerm, env: &RPEnv) -> Result<RPElement, RprodError> {
        Ok(match t {
            RingTerm::Var(v) => {
                let e = env.get(v).ok_or_else(|| RprodError::UnboundVariable(v.clone()))?;
                e.check(model)?;
                e.clone()
            }
            RingTerm::Zero => Self::zero(model),
            RingTerm::One => Self::one(model),
            RingTerm::Neg(x) => Self::neg(model, &Self::eval_term(model, x, env)?)?,
            RingTerm::Add(l, r) => Self::add(model, &Self::eval_term(model, l, env)?, &Self::eval_term(model, r, env)?)?,
            RingTerm::Mul(l, r) => Self::mul(model, &Self::eval_term(model, l, env)?, &Self::eval_term(model, r, env)?)?,
        })
    }

    /// Parse `default=<elem>; <index>:=<elem>, ...` (the exception list is
    /// optional).
    pub fn parse(model: &RPModel, text: &str) -> Result<Self, RprodError> {
        let bad = || RprodError::BadLiteral(text.trim().to_string());
        let (head, rest) = match text.split_once(';') {
            Some((h, r)) => (h, r),
            None => (text, ""),
        };
        let (key, value) = head.split_once('=').ok_or_else(bad)?;
        if key.trim() != "default" {
            return Err(bad());
        }
        let tail = &model.tail().ring;
        let default = tail.element(value.trim()).map_err(|_| bad())?;
        let mut exceptions = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (i, v) = part.split_once(":=").ok_or_else(bad)?;
            let i: u64 = i.trim().parse().map_err(|_| bad())?;
            let stalk = &model.stalk(i).ring;
            let v = stalk
                .element(v.trim())
                .map_err(|_| RprodError::BadCarrier { index: i, message: format!("no element `{}` in {stalk}", v.trim()) })?;
            exceptions.push((i, v));
        }
        RPElement::new(model, default, exceptions)
    }

    /// The literal form accepted by [`RPElement::parse`].
    pub fn to_literal(&self, model: &RPModel) -> String {
        let mut s = format!("default={}", model.tail().ring.name(self.default));
        if !self.exceptions.is_empty() {
            let parts: Vec<String> = self
                .exceptions
                .iter()
                .map(|(&i, &v)| format!("{i}:={}", model.stalk(i).ring.name(v)))
                .collect();
            s.push_str("; ");
            s.push_str(&parts.join(", "));
        }
        s
    }
}
