use std::collections::BTreeSet;

use super::{RPElement, RPEnv, RPModel, RprodError};
use crate::boolalg::{is_fin, FinCofSet};
use crate::formula::{Formula, RingFormula};
use crate::stalk::Elem;

/// `[[theta(env)]]`: the set of indices whose stalk satisfies `theta` at the
/// coordinates of the arguments. Explicit indices are evaluated one by one;
/// all remaining indices agree with the tail evaluated at the defaults.
pub fn boolean_value(model: &RPModel, theta: &RingFormula, env: &RPEnv) -> Result<FinCofSet, RprodError> {
    let vars: Vec<String> = theta.free_vars().into_iter().collect();
    let args = vars
        .iter()
        .map(|v| env.get(v).ok_or_else(|| RprodError::UnboundVariable(v.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    value_of(model, theta, &vars, &args)
}

/// [`boolean_value`] with arguments bound to the free variables of `theta`
/// in sorted order.
pub fn boolean_value_args(model: &RPModel, theta: &RingFormula, args: &[RPElement]) -> Result<FinCofSet, RprodError> {
    let vars: Vec<String> = theta.free_vars().into_iter().collect();
    if vars.len() != args.len() {
        return Err(RprodError::Arity { expected: vars, given: args.len() });
    }
    let refs: Vec<&RPElement> = args.iter().collect();
    value_of(model, theta, &vars, &refs)
}

fn explicit_indices(model: &RPModel, args: &[&RPElement]) -> BTreeSet<u64> {
    let mut out: BTreeSet<u64> = model.exceptional().keys().copied().collect();
    for a in args {
        out.extend(a.exceptions().keys().copied());
    }
    out
}

fn value_of(model: &RPModel, theta: &RingFormula, vars: &[String], args: &[&RPElement]) -> Result<FinCofSet, RprodError> {
    for a in args {
        if a.model_id() != model.id() {
            return Err(RprodError::ModelMismatch);
        }
    }
    let compiled = model.compile(theta, vars)?;
    let defaults: Vec<Elem> = args.iter().map(|a| a.default_value()).collect();
    let tail_holds = compiled.eval(&model.tail().ring, &defaults);
    let mut odd = Vec::new();
    for i in explicit_indices(model, args) {
        let vals: Vec<Elem> = args.iter().map(|a| a.value_at(model, i)).collect();
        if compiled.eval(&model.stalk(i).ring, &vals) != tail_holds {
            odd.push(i);
        }
    }
    Ok(if tail_holds { FinCofSet::cofinite(odd) } else { FinCofSet::finite(odd) })
}

/// A witness `g` for `E w. theta` that works everywhere `E w. theta` holds.
///
/// Requires `[[E w. theta]] \ [[E w. (phi(w) & theta)]]` to be finite: then
/// the tail default can be chosen inside `phi`, and the finitely many
/// explicit indices get their own witnesses.
pub fn patch_witness(model: &RPModel, theta: &RingFormula, w: &str, env: &RPEnv) -> Result<RPElement, RprodError> {
    let mut env = env.clone();
    env.remove(w);
    let exists = Formula::exists(w, theta.clone());
    let exists_phi = Formula::exists(w, Formula::and(model.phi_at(w), theta.clone()));
    let premise = boolean_value(model, &exists, &env)?.diff(&boolean_value(model, &exists_phi, &env)?);
    if !is_fin(&premise) {
        return Err(RprodError::PremiseViolated(premise));
    }

    let params: Vec<String> = theta.free_vars().into_iter().filter(|v| v != w).collect();
    let args = params
        .iter()
        .map(|v| env.get(v).ok_or_else(|| RprodError::UnboundVariable(v.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut order = params.clone();
    order.push(w.to_string());
    let compiled = model.compile(theta, &order)?;
    let witness = |ring: &crate::stalk::FiniteRing, vals: &[Elem], candidates: &[Elem]| {
        let mut buf = vals.to_vec();
        buf.push(0);
        candidates.iter().copied().find(|&c| {
            *buf.last_mut().expect("nonempty") = c;
            compiled.eval(ring, &buf)
        })
    };

    let tail = model.tail();
    let defaults: Vec<Elem> = args.iter().map(|a| a.default_value()).collect();
    let default = witness(&tail.ring, &defaults, &tail.phi_set).unwrap_or(tail.ring.one());
    let mut exceptions = Vec::new();
    for i in explicit_indices(model, &args) {
        let stalk = model.stalk(i);
        let vals: Vec<Elem> = args.iter().map(|a| a.value_at(model, i)).collect();
        let found = witness(&stalk.ring, &vals, &stalk.phi_set)
            .or_else(|| witness(&stalk.ring, &vals, &stalk.ring.elements().collect::<Vec<_>>()));
        let value = match found {
            Some(v) => v,
            None if !model.is_exceptional(i) => default,
            None if default == tail.ring.one() => stalk.ring.one(),
            None => stalk.ring.zero(),
        };
        exceptions.push((i, value));
    }
    RPElement::new(model, default, exceptions)
}
