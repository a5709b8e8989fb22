//! Random generators shared by the integration tests.
#![allow(dead_code)]

pub mod corpus;

use fvrp_core::boolalg::{BoolEnv, FinCofSet};
use fvrp_core::formula::{BoolFormula, BoolTerm, Formula};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_fincof(rng: &mut impl Rng) -> FinCofSet {
    let size = rng.gen_range(0..=4);
    let mut pool: Vec<u64> = (0..7).collect();
    pool.shuffle(rng);
    let support = pool.into_iter().take(size);
    if rng.gen_bool(0.5) {
        FinCofSet::cofinite(support)
    } else {
        FinCofSet::finite(support)
    }
}

pub fn random_env(rng: &mut impl Rng, params: &[&str]) -> BoolEnv {
    params.iter().map(|p| (p.to_string(), random_fincof(rng))).collect()
}

pub fn random_bool_term(rng: &mut impl Rng, vars: &[String], depth: u32) -> BoolTerm {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..12) {
            0 => BoolTerm::Zero,
            1 => BoolTerm::One,
            _ => BoolTerm::Var(vars.choose(rng).expect("nonempty scope").clone()),
        };
    }
    let l = random_bool_term(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => BoolTerm::complement(l),
        1 => BoolTerm::meet(l, random_bool_term(rng, vars, depth - 1)),
        2 => BoolTerm::join(l, random_bool_term(rng, vars, depth - 1)),
        _ => BoolTerm::diff(l, random_bool_term(rng, vars, depth - 1)),
    }
}

fn random_bool_atom(rng: &mut impl Rng, vars: &[String], max_count: u32) -> BoolFormula {
    let t = random_bool_term(rng, vars, 2);
    match rng.gen_range(0..5) {
        0 => BoolFormula::eq(t, random_bool_term(rng, vars, 1)),
        1 => BoolFormula::leq(t, random_bool_term(rng, vars, 1)),
        2 => BoolFormula::fin(t),
        _ => BoolFormula::count_at_least(rng.gen_range(1..=max_count), t),
    }
}

/// A random formula over `vars` with at most `depth` nested quantifiers and
/// `C_n` indices at most `max_count`.
pub fn random_bool_formula(
    rng: &mut impl Rng,
    vars: &mut Vec<String>,
    depth: u32,
    size: u32,
    max_count: u32,
) -> BoolFormula {
    if size == 0 || rng.gen_bool(0.25) {
        return random_bool_atom(rng, vars, max_count);
    }
    let roll = rng.gen_range(0..10);
    if depth > 0 && roll < 4 {
        let name = format!("b{}", vars.len());
        vars.push(name.clone());
        let body = random_bool_formula(rng, vars, depth - 1, size - 1, max_count);
        vars.pop();
        return if roll < 3 { Formula::exists(name, body) } else { Formula::forall(name, body) };
    }
    let l = random_bool_formula(rng, vars, depth, size - 1, max_count);
    match roll {
        4 => Formula::not(l),
        5 | 6 => Formula::and(l, random_bool_formula(rng, vars, depth, size - 1, max_count)),
        7 | 8 => Formula::or(l, random_bool_formula(rng, vars, depth, size - 1, max_count)),
        _ => Formula::implies(l, random_bool_formula(rng, vars, depth, size - 1, max_count)),
    }
}
