//! Direct decision of existential and universal sentences in the restricted
//! product, independent of the Boolean reduction.
//!
//! An equation holds in the product iff it holds at every index. A tuple of
//! elements therefore realizes, at each index, a vector of atom truths, and
//! the product-level truth set is the intersection of those vectors. The
//! achievable intersections are determined by which vectors each kind of
//! stalk admits:
//!
//! * cofinitely many tail indices must use tuples from `phi(tail)`;
//! * finitely many extra tail indices may use any tail tuple, each vector as
//!   often as needed;
//! * every exceptional index uses exactly one tuple of its stalk.

use std::collections::BTreeSet;

use super::{RPModel, RprodError};
use crate::formula::{Formula, RingAtom, RingFormula};
use crate::stalk::{CompiledFormula, Elem, FiniteRing};

#[derive(Clone, Copy, Debug)]
pub struct SigmaLimits {
    pub max_atoms: usize,
    pub max_tuple_evaluations: u64,
}

impl Default for SigmaLimits {
    fn default() -> Self {
        SigmaLimits { max_atoms: 16, max_tuple_evaluations: 10_000_000 }
    }
}

fn split_block(f: &RingFormula, universal: bool) -> (Vec<String>, &RingFormula) {
    let mut vars = Vec::new();
    let mut body = f;
    loop {
        match (body, universal) {
            (Formula::Exists(x, g), false) | (Formula::Forall(x, g), true) => {
                vars.push(x.clone());
                body = g;
            }
            _ => return (vars, body),
        }
    }
}

fn matrix_value(f: &RingFormula, atoms: &[RingAtom], truth: u32) -> bool {
    match f {
        Formula::Atom(a) => truth >> atoms.iter().position(|b| b == a).expect("collected atom") & 1 == 1,
        Formula::Not(g) => !matrix_value(g, atoms, truth),
        Formula::And(l, r) => matrix_value(l, atoms, truth) && matrix_value(r, atoms, truth),
        Formula::Or(l, r) => matrix_value(l, atoms, truth) || matrix_value(r, atoms, truth),
        Formula::Implies(l, r) => !matrix_value(l, atoms, truth) || matrix_value(r, atoms, truth),
        Formula::Exists(..) | Formula::Forall(..) => unreachable!("matrix is quantifier-free"),
    }
}

struct Census<'a> {
    atoms: Vec<CompiledFormula>,
    arity: usize,
    budget: u64,
    limits: &'a SigmaLimits,
}

impl Census<'_> {
    /// Atom-truth vectors realized by tuples drawn from `domain`.
    fn vectors(&mut self, ring: &FiniteRing, domain: &[Elem]) -> Result<BTreeSet<u32>, RprodError> {
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; self.arity];
        let mut tuple: Vec<Elem> = vec![domain[0]; self.arity];
        loop {
            self.budget += 1;
            if self.budget > self.limits.max_tuple_evaluations {
                return Err(RprodError::ResourceLimit(format!(
                    "more than {} tuple evaluations",
                    self.limits.max_tuple_evaluations
                )));
            }
            for (k, &i) in idx.iter().enumerate() {
                tuple[k] = domain[i];
            }
            let v = self
                .atoms
                .iter()
                .enumerate()
                .fold(0u32, |acc, (b, a)| if a.eval(ring, &tuple) { acc | 1 << b } else { acc });
            out.insert(v);
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < domain.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Truth of `E x1 ... E xm. M` in the restricted product, `M`
/// quantifier-free.
pub fn sigma1_decide(model: &RPModel, sentence: &RingFormula, limits: &SigmaLimits) -> Result<bool, RprodError> {
    let (vars, matrix) = split_block(sentence, false);
    sigma1_matrix(model, &vars, matrix, limits, "existential")
}

/// Truth of `A x1 ... A xm. M`, as the negation of `E x1 ... E xm. ~M`.
pub fn pi1_decide(model: &RPModel, sentence: &RingFormula, limits: &SigmaLimits) -> Result<bool, RprodError> {
    let (vars, matrix) = split_block(sentence, true);
    let negated = Formula::not(matrix.clone());
    Ok(!sigma1_matrix(model, &vars, &negated, limits, "universal")?)
}

fn sigma1_matrix(
    model: &RPModel,
    vars: &[String],
    matrix: &RingFormula,
    limits: &SigmaLimits,
    expected: &'static str,
) -> Result<bool, RprodError> {
    if !matrix.is_quantifier_free() {
        return Err(RprodError::Shape { expected, reason: "quantifier inside the matrix".into() });
    }
    let bound: BTreeSet<String> = vars.iter().cloned().collect();
    if let Some(v) = matrix.free_vars().into_iter().find(|v| !bound.contains(v)) {
        return Err(RprodError::Shape { expected, reason: format!("free variable `{v}`") });
    }
    // Later binders shadow earlier ones; unused earlier copies stay in the
    // tuple but do not affect any atom.
    let atoms = matrix.atoms();
    if atoms.len() > limits.max_atoms {
        return Err(RprodError::ResourceLimit(format!("{} atoms (limit {})", atoms.len(), limits.max_atoms)));
    }
    let mut order: Vec<String> = Vec::new();
    for v in vars.iter().rev() {
        if !order.contains(v) {
            order.push(v.clone());
        }
    }
    let compiled = atoms
        .iter()
        .map(|a| model.compile(&Formula::Atom(a.clone()), &order))
        .collect::<Result<Vec<_>, _>>()?;
    let mut census = Census { atoms: compiled, arity: order.len(), budget: 0, limits };

    let tail = model.tail();
    let all_tail: Vec<Elem> = tail.ring.elements().collect();
    let phi_vectors = census.vectors(&tail.ring, &tail.phi_set)?;
    let tail_vectors = census.vectors(&tail.ring, &all_tail)?;
    let mut exceptional = Vec::new();
    for s in model.exceptional().values() {
        let all: Vec<Elem> = s.ring.elements().collect();
        exceptional.push(census.vectors(&s.ring, &all)?);
    }

    let full: u32 = if atoms.len() == 32 { u32::MAX } else { (1u32 << atoms.len()) - 1 };
    for truth in 0..=full {
        if matrix_value(matrix, &atoms, truth) && achievable(truth, full, &phi_vectors, &tail_vectors, &exceptional) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some tuple of elements has exactly the atoms in `truth` true.
fn achievable(
    truth: u32,
    full: u32,
    phi_vectors: &BTreeSet<u32>,
    tail_vectors: &BTreeSet<u32>,
    exceptional: &[BTreeSet<u32>],
) -> bool {
    let covers = |v: u32| v & truth == truth;
    if !phi_vectors.iter().any(|&v| covers(v)) {
        return false;
    }
    let from_tail = tail_vectors.iter().filter(|&&v| covers(v)).fold(0, |acc, &v| acc | (full & !v));
    let need = full & !truth & !from_tail;
    // Each exceptional index contributes the atoms its single tuple falsifies.
    let mut options: Vec<Vec<u32>> = Vec::with_capacity(exceptional.len());
    for vs in exceptional {
        let mut opts: Vec<u32> = vs.iter().filter(|&&v| covers(v)).map(|&v| need & !v).collect();
        if opts.is_empty() {
            return false;
        }
        opts.sort_unstable();
        opts.dedup();
        options.push(opts);
    }
    fn cover(options: &[Vec<u32>], need: u32) -> bool {
        match options.split_first() {
            None => need == 0,
            Some((first, rest)) => first.iter().any(|&o| cover(rest, need & !o)),
        }
    }
    cover(&options, need)
}
