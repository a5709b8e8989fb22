use std::collections::BTreeMap;

use super::{Elem, FiniteRing, StalkError};
use crate::formula::{Formula, Partition, RingFormula, RingTerm};

#[derive(Clone, Debug)]
enum CTerm {
    Slot(usize),
    Zero,
    One,
    Neg(Box<CTerm>),
    Add(Box<CTerm>, Box<CTerm>),
    Mul(Box<CTerm>, Box<CTerm>),
}

#[derive(Clone, Debug)]
enum CNode {
    Eq(CTerm, CTerm),
    Not(Box<CNode>),
    And(Box<CNode>, Box<CNode>),
    Or(Box<CNode>, Box<CNode>),
    Implies(Box<CNode>, Box<CNode>),
    Exists(usize, Box<CNode>),
    Forall(usize, Box<CNode>),
}

/// A ring formula with variables resolved to slots, for repeated evaluation
/// on finite rings. Slots `0..k` hold the free variables in the order given
/// to [`CompiledFormula::compile`].
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    root: CNode,
    arity: usize,
    slots: usize,
}

impl CompiledFormula {
    pub fn compile(f: &RingFormula, free_order: &[String]) -> Result<Self, StalkError> {
        let mut scope: Vec<(String, usize)> = free_order.iter().cloned().zip(0..).collect();
        let mut slots = free_order.len();
        let root = compile_node(f, &mut scope, &mut slots)?;
        Ok(CompiledFormula { root, arity: free_order.len(), slots })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, r: &FiniteRing, args: &[Elem]) -> bool {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        let mut slots = vec![0; self.slots];
        slots[..args.len()].copy_from_slice(args);
        eval_node(&self.root, r, &mut slots)
    }
}

fn compile_term(t: &RingTerm, scope: &[(String, usize)]) -> Result<CTerm, StalkError> {
    Ok(match t {
        RingTerm::Var(v) => CTerm::Slot(
            scope
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|&(_, s)| s)
                .ok_or_else(|| StalkError::UnboundVariable(v.clone()))?,
        ),
        RingTerm::Zero => CTerm::Zero,
        RingTerm::One => CTerm::One,
        RingTerm::Neg(x) => CTerm::Neg(Box::new(compile_term(x, scope)?)),
        RingTerm::Add(l, r) => CTerm::Add(Box::new(compile_term(l, scope)?), Box::new(compile_term(r, scope)?)),
        RingTerm::Mul(l, r) => CTerm::Mul(Box::new(compile_term(l, scope)?), Box::new(compile_term(r, scope)?)),
    })
}

fn compile_node(f: &RingFormula, scope: &mut Vec<(String, usize)>, slots: &mut usize) -> Result<CNode, StalkError> {
    let sub = |g: &RingFormula, scope: &mut Vec<(String, usize)>, slots: &mut usize| -> Result<Box<CNode>, StalkError> {
        compile_node(g, scope, slots).map(Box::new)
    };
    Ok(match f {
        Formula::Atom(a) => CNode::Eq(compile_term(&a.left, scope)?, compile_term(&a.right, scope)?),
        Formula::Not(g) => CNode::Not(sub(g, scope, slots)?),
        Formula::And(l, r) => CNode::And(sub(l, scope, slots)?, sub(r, scope, slots)?),
        Formula::Or(l, r) => CNode::Or(sub(l, scope, slots)?, sub(r, scope, slots)?),
        Formula::Implies(l, r) => CNode::Implies(sub(l, scope, slots)?, sub(r, scope, slots)?),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let slot = *slots;
            *slots += 1;
            scope.push((x.clone(), slot));
            let body = compile_node(g, scope, slots)?;
            scope.pop();
            if matches!(f, Formula::Exists(..)) {
                CNode::Exists(slot, Box::new(body))
            } else {
                CNode::Forall(slot, Box::new(body))
            }
        }
    })
}

fn eval_term(t: &CTerm, r: &FiniteRing, slots: &[Elem]) -> Elem {
    match t {
        CTerm::Slot(s) => slots[*s],
        CTerm::Zero => r.zero(),
        CTerm::One => r.one(),
        CTerm::Neg(x) => r.neg(eval_term(x, r, slots)),
        CTerm::Add(a, b) => r.add(eval_term(a, r, slots), eval_term(b, r, slots)),
        CTerm::Mul(a, b) => r.mul(eval_term(a, r, slots), eval_term(b, r, slots)),
    }
}

fn eval_node(n: &CNode, r: &FiniteRing, slots: &mut [Elem]) -> bool {
    match n {
        CNode::Eq(a, b) => eval_term(a, r, slots) == eval_term(b, r, slots),
        CNode::Not(g) => !eval_node(g, r, slots),
        CNode::And(a, b) => eval_node(a, r, slots) && eval_node(b, r, slots),
        CNode::Or(a, b) => eval_node(a, r, slots) || eval_node(b, r, slots),
        CNode::Implies(a, b) => !eval_node(a, r, slots) || eval_node(b, r, slots),
        CNode::Exists(s, g) => r.elements().any(|x| {
            slots[*s] = x;
            eval_node(g, r, slots)
        }),
        CNode::Forall(s, g) => r.elements().all(|x| {
            slots[*s] = x;
            eval_node(g, r, slots)
        }),
    }
}

/// `r |= f[env]`, quantifiers ranging over the whole carrier.
pub fn eval_stalk_formula(r: &FiniteRing, f: &RingFormula, env: &BTreeMap<String, Elem>) -> Result<bool, StalkError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let args = free
        .iter()
        .map(|v| env.get(v).copied().ok_or_else(|| StalkError::UnboundVariable(v.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CompiledFormula::compile(f, &free)?.eval(r, &args))
}

/// Check that exactly one cell holds at every assignment of `vars` in `r`.
/// Returns the first assignment where that fails.
pub fn check_partition(r: &FiniteRing, p: &Partition, vars: &[String]) -> Result<Option<Vec<Elem>>, StalkError> {
    let cells = p
        .cells
        .iter()
        .map(|c| CompiledFormula::compile(c, vars))
        .collect::<Result<Vec<_>, _>>()?;
    let n = r.size() as Elem;
    let mut args = vec![0 as Elem; vars.len()];
    loop {
        if cells.iter().filter(|c| c.eval(r, &args)).count() != 1 {
            return Ok(Some(args));
        }
        let mut i = 0;
        loop {
            if i == args.len() {
                return Ok(None);
            }
            args[i] += 1;
            if args[i] < n {
                break;
            }
            args[i] = 0;
            i += 1;
        }
    }
}
