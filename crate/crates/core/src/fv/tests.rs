use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::formula::{parse_ring_formula, Formula};
use crate::rprod::{pi1_decide, random_atomic_formula, random_element, random_ring_formula, sigma1_decide, RPElement, SigmaLimits};
use crate::stalk::{check_partition, make_ring, RingSpec};

fn p(s: &str) -> RingFormula {
    parse_ring_formula(s).unwrap()
}

fn model(tail: &str, phi: &str, exceptions: &[(u64, &str)]) -> RPModel {
    let ex = exceptions.iter().map(|&(i, s)| (i, s.parse().unwrap())).collect();
    RPModel::new(tail.parse().unwrap(), p(phi), ex).unwrap()
}

fn opts() -> ReduceOptions {
    ReduceOptions::default()
}

#[test]
fn atomic_and_negated_reductions() {
    let r = reduce(&p("x = 0"), &p("x*x = x"), &opts()).unwrap();
    assert_eq!(r.cells, vec![p("x = 0"), p("~(x = 0)")]);
    assert_eq!(r.psi.to_string(), "y0 = 1");
    let r = reduce(&p("~(x = 0)"), &p("x*x = x"), &opts()).unwrap();
    assert_eq!(r.cells, vec![p("x = 0"), p("~(x = 0)")]);
    assert_eq!(r.psi.to_string(), "~(y0 = 1)");
    assert!(matches!(reduce(&p("x = 0"), &p("x = y"), &opts()), Err(FvError::PhiArity(_))));
}

#[test]
fn existential_reduction_decides_on_gf4() {
    let m = model("gf4", "x*x = x", &[]);
    let theta = p("E x. (x*x = x)");
    let r = reduce(&theta, m.phi(), &opts()).unwrap();
    assert!(r.free_vars.is_empty());
    assert!(evaluate_reduction(&m, &r, &RPEnv::new()).unwrap());
    assert!(decide_in_model(&m, &theta, &opts()).unwrap());
}

#[test]
fn reference_sentences() {
    let restricted = model("gf4", "x*x = x", &[]);
    let full = model("gf4", "x = x", &[]);
    let sigma = p("E x. E u. (u*(x*x + x) = 1)");
    assert!(!decide_in_model(&restricted, &sigma, &opts()).unwrap());
    assert!(decide_in_model(&full, &sigma, &opts()).unwrap());
    let quartic = p("A x. (x*x*x*x = x)");
    assert!(decide_in_model(&restricted, &quartic, &opts()).unwrap());
    assert!(decide_in_model(&full, &quartic, &opts()).unwrap());
    let boolean = model("zmod(2)", "x = x", &[]);
    assert!(decide_in_model(&boolean, &p("E x. (x*x = x & ~x = 0 & ~x = 1)"), &opts()).unwrap());
    assert!(matches!(decide_in_model(&boolean, &p("x = 0"), &opts()), Err(FvError::FreeVariables(_))));
}

#[test]
fn evaluation_with_parameters() {
    let m = model("gf4", "x*x = x", &[]);
    let env = |lit: &str| -> RPEnv { [("x".to_string(), RPElement::parse(&m, lit).unwrap())].into_iter().collect() };
    assert!(!evaluate_in_model(&m, &p("x*x = x"), &env("default=1; 5:=a"), &opts()).unwrap());
    assert!(evaluate_in_model(&m, &p("x*x = x"), &env("default=1"), &opts()).unwrap());

    let z2 = model("zmod(2)", "x = x", &[]);
    let doubled = p("E w. (w + w = x)");
    for lit in ["default=0", "default=1", "default=0; 3:=1", "default=1; 0:=0, 2:=0"] {
        let f = RPElement::parse(&z2, lit).unwrap();
        let env: RPEnv = [("x".to_string(), f.clone())].into_iter().collect();
        assert_eq!(evaluate_in_model(&z2, &doubled, &env, &opts()).unwrap(), f == RPElement::zero(&z2), "{lit}");
    }
}

#[test]
fn shadowed_binder_is_renamed() {
    let m = model("zmod(2)", "x = x", &[]);
    let theta = p("x = 0 & E x. x = 1");
    let r = reduce_in_model(&theta, &m, &opts()).unwrap();
    assert_eq!(r.free_vars, vec!["x".to_string()]);
    for c in &r.cells {
        assert!(c.free_vars().iter().all(|v| v == "x"));
    }
    let zero: RPEnv = [("x".to_string(), RPElement::zero(&m))].into_iter().collect();
    assert!(evaluate_in_model(&m, &theta, &zero, &opts()).unwrap());
}

#[test]
fn cells_partition_every_stalk() {
    let phi = p("x*x = x");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let vars = vec!["x".to_string(), "y".to_string()];
    for _ in 0..20 {
        let body = random_ring_formula(&mut rng, &vars, 2, 1);
        let theta = Formula::exists("y", body);
        let r = reduce(&theta, &phi, &opts()).unwrap();
        let free: Vec<String> = r.free_vars.clone();
        for spec in [RingSpec::ZMod(2), RingSpec::Gf4, RingSpec::ZMod(3)] {
            let ring = make_ring(&spec).unwrap();
            assert_eq!(check_partition(&ring, &r.partition(), &free), Ok(None), "{theta} over {spec}");
        }
    }
}

#[test]
fn reduction_is_deterministic() {
    let m = model("gf4", "x*x = x", &[(0, "zmod(2)")]);
    let theta = p("A x. E y. (x*y = x & ~(y = 0))");
    let a = reduce_in_model(&theta, &m, &opts()).unwrap();
    let b = reduce_in_model(&theta, &m, &opts()).unwrap();
    assert_eq!(a.to_string(), b.to_string());
    assert_eq!(a.render_structured(), b.render_structured());
    assert_eq!(reduce(&p("E x. x = y"), m.phi(), &opts()).unwrap().to_string(), reduce(&p("E x. x = y"), m.phi(), &opts()).unwrap().to_string());
}

#[test]
fn cell_cap_is_enforced() {
    let theta = p("E x. E y. (x*y = 1 & x + y = 1)");
    let tight = ReduceOptions { max_cells: 8 };
    assert!(matches!(reduce(&theta, &p("x = x"), &tight), Err(FvError::ResourceLimit(_))));
}

#[test]
fn conjunctions_of_equations_match_boolean_values() {
    let m = model("gf4", "x*x = x", &[(1, "zmod(2)")]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vars = vec!["x".to_string(), "y".to_string()];
    for _ in 0..50 {
        let theta = Formula::and(random_atomic_formula(&mut rng, &vars, 2), random_atomic_formula(&mut rng, &vars, 2));
        let env: RPEnv = vars.iter().map(|v| (v.clone(), random_element(&mut rng, &m, 2, 5))).collect();
        let direct = boolean_value(&m, &theta, &env).unwrap().is_one();
        assert_eq!(evaluate_in_model(&m, &theta, &env, &opts()).unwrap(), direct, "{theta}");
    }
}

#[test]
fn negation_is_not_pointwise() {
    // x != 0 in the product does not make x nonzero at every index.
    let m = model("zmod(2)", "x = x", &[]);
    let f = RPElement::parse(&m, "default=1; 0:=0").unwrap();
    let env: RPEnv = [("x".to_string(), f)].into_iter().collect();
    let theta = p("~(x = 0)");
    assert!(evaluate_in_model(&m, &theta, &env, &opts()).unwrap());
    assert!(!boolean_value(&m, &theta, &env).unwrap().is_one());
}

#[test]
fn pipeline_agrees_with_direct_oracle() {
    let models = [
        model("gf4", "x*x = x", &[]),
        model("gf4", "x = x", &[]),
        model("zmod(2)", "x = x", &[(3, "zmod(3)")]),
        model("zmod(3)", "x = x", &[(0, "gf4")]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let vars = ["x".to_string(), "y".to_string()];
    let limits = SigmaLimits::default();
    for k in 0..40 {
        let m = &models[k % models.len()];
        let quantifiers = rng.gen_range(1..=2);
        let atoms = rng.gen_range(1..=3);
        let matrix = random_ring_formula(&mut rng, &vars[..quantifiers], atoms, 2);
        let universal = rng.gen_bool(0.5);
        let mut sentence = matrix;
        for v in vars[..quantifiers].iter().rev() {
            sentence = if universal { Formula::forall(v.clone(), sentence) } else { Formula::exists(v.clone(), sentence) };
        }
        let expected = if universal { pi1_decide(m, &sentence, &limits) } else { sigma1_decide(m, &sentence, &limits) }.unwrap();
        assert_eq!(decide_in_model(m, &sentence, &opts()).unwrap(), expected, "{sentence} in\n{m}");
    }
}
