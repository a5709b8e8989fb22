//! Random elements and formulas for property tests and axiom spot checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{RPElement, RPModel};
use crate::formula::{Formula, RingFormula, RingTerm};

/// A random element with up to `max_exceptions` exceptions at indices below
/// `index_bound`. Exceptional stalks always receive a value when the chosen
/// default has no image there.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, model: &RPModel, max_exceptions: usize, index_bound: u64) -> RPElement {
    let tail = model.tail();
    let default = *tail.phi_set.choose(rng).expect("phi contains 0 and 1");
    let mut exceptions = Vec::new();
    let count = rng.gen_range(0..=max_exceptions);
    for _ in 0..count {
        let i = rng.gen_range(0..index_bound.max(1));
        let ring = &model.stalk(i).ring;
        exceptions.push((i, rng.gen_range(0..ring.size()) as u16));
    }
    for (&i, s) in model.exceptional() {
        if rng.gen_bool(0.5) || (default != tail.ring.zero() && default != tail.ring.one()) {
            exceptions.push((i, rng.gen_range(0..s.ring.size()) as u16));
        }
    }
    RPElement::new(model, default, exceptions).expect("sampled values lie in their carriers")
}

fn random_term<R: Rng + ?Sized>(rng: &mut R, vars: &[String], depth: u32) -> RingTerm {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..6) {
            0 => RingTerm::Zero,
            1 => RingTerm::One,
            _ if vars.is_empty() => RingTerm::One,
            _ => RingTerm::Var(vars.choose(rng).expect("nonempty").clone()),
        };
    }
    match rng.gen_range(0..5) {
        0 => RingTerm::neg(random_term(rng, vars, depth - 1)),
        1 | 2 => RingTerm::add(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)),
        _ => RingTerm::mul(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)),
    }
}

/// A random equation between terms of depth at most `term_depth` over `vars`.
pub fn random_atomic_formula<R: Rng + ?Sized>(rng: &mut R, vars: &[String], term_depth: u32) -> RingFormula {
    RingFormula::eq(random_term(rng, vars, term_depth), random_term(rng, vars, term_depth))
}

/// A random quantifier-free formula with exactly `atoms` atomic leaves
/// combined by `~`, `&`, `|`.
pub fn random_ring_formula<R: Rng + ?Sized>(rng: &mut R, vars: &[String], atoms: usize, term_depth: u32) -> RingFormula {
    let mut f = if atoms <= 1 {
        random_atomic_formula(rng, vars, term_depth)
    } else {
        let left = rng.gen_range(1..atoms);
        let l = random_ring_formula(rng, vars, left, term_depth);
        let r = random_ring_formula(rng, vars, atoms - left, term_depth);
        if rng.gen_bool(0.5) {
            Formula::and(l, r)
        } else {
            Formula::or(l, r)
        }
    };
    if rng.gen_bool(0.3) {
        f = Formula::not(f);
    }
    f
}
