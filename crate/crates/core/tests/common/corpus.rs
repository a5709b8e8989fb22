//! Reference models and the curated sentence corpus.
#![allow(dead_code)]

use fvrp_core::formula::{parse_ring_formula, Formula, RingFormula};
use fvrp_core::rprod::{random_ring_formula, RPModel};
use rand::Rng;

pub const RESTRICTED_GF4: &str = "tail = gf4\nphi = \"x*x = x\"";
pub const FULL_GF4: &str = "tail = gf4\nphi = \"x = x\"";
pub const BOOLEAN: &str = "tail = zmod(2)\nphi = \"x = x\"";
pub const GF4_WITH_EXCEPTIONS: &str = "tail = gf4\nphi = \"x*x = x\"\nexception 0 = zmod(2)\nexception 2 = gf4";
pub const BOOLEAN_WITH_ZMOD3: &str = "tail = zmod(2)\nphi = \"x = x\"\nexception 1 = zmod(3)";
pub const ZMOD3_WITH_GF4: &str = "tail = zmod(3)\nphi = \"x = x\"\nexception 0 = gf4";

pub fn model(config: &str) -> RPModel {
    RPModel::from_config(config).expect("reference model")
}

pub fn models() -> Vec<(&'static str, RPModel)> {
    [
        ("restricted-gf4", RESTRICTED_GF4),
        ("full-gf4", FULL_GF4),
        ("boolean", BOOLEAN),
        ("gf4-with-exceptions", GF4_WITH_EXCEPTIONS),
        ("boolean-with-zmod3", BOOLEAN_WITH_ZMOD3),
        ("zmod3-with-gf4", ZMOD3_WITH_GF4),
    ]
    .into_iter()
    .map(|(name, cfg)| (name, model(cfg)))
    .collect()
}

/// (model name, sentence, expected truth value).
pub const CURATED: &[(&str, &str, bool)] = &[
    ("restricted-gf4", "E x. E u. (u*(x*x + x) = 1)", false),
    ("full-gf4", "E x. E u. (u*(x*x + x) = 1)", true),
    ("boolean", "E x. (x*x = x & ~x = 0 & ~x = 1)", true),
    ("restricted-gf4", "A x. (x*x*x*x = x)", true),
    ("full-gf4", "A x. (x*x*x*x = x)", true),
    ("restricted-gf4", "A x. (x*x = x)", false),
    ("boolean", "A x. (x*x = x)", true),
    ("boolean", "A x. (x + x = 0)", true),
    ("restricted-gf4", "E x. (x*x + x + 1 = 0)", false),
    ("full-gf4", "E x. (x*x + x + 1 = 0)", true),
    ("boolean-with-zmod3", "E x. ~(x*x = x)", true),
    ("boolean-with-zmod3", "A x. (x*x*x = x)", true),
    ("boolean-with-zmod3", "A x. (x + x = 0)", false),
    ("gf4-with-exceptions", "E x. E y. (x*y = 1 & ~(x*x = x))", true),
    ("zmod3-with-gf4", "E x. (x*x = 1 & ~(x = 1) & ~(x + 1 = 0))", true),
    ("zmod3-with-gf4", "A x. E y. (x*y*x = x)", true),
    ("restricted-gf4", "A x. (~(x = 0) -> E y. (x*y = 1))", false),
    ("full-gf4", "E x. (x*x = x & ~(x = 0) & A y. (x*y = y -> y = 0 | y = x))", false),
];

pub fn parse(s: &str) -> RingFormula {
    parse_ring_formula(s).expect("corpus formula")
}

/// A random existential or universal sentence with at most
/// `max_quantifiers` quantifiers and `max_atoms` equations.
pub fn random_sentence(rng: &mut impl Rng, max_quantifiers: usize, max_atoms: usize) -> (RingFormula, bool) {
    let vars = ["x".to_string(), "y".to_string()];
    let q = rng.gen_range(1..=max_quantifiers.min(2));
    let atoms = rng.gen_range(1..=max_atoms);
    let mut sentence = random_ring_formula(rng, &vars[..q], atoms, 2);
    let universal = rng.gen_bool(0.5);
    for v in vars[..q].iter().rev() {
        sentence = if universal { Formula::forall(v.clone(), sentence) } else { Formula::exists(v.clone(), sentence) };
    }
    (sentence, universal)
}
