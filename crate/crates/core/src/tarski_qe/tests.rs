use super::*;
use crate::boolalg::FinCofSet;
use crate::formula::parse_bool_formula;

fn f(s: &str) -> BoolFormula {
    parse_bool_formula(s).unwrap()
}

fn env1(x: FinCofSet) -> BoolEnv {
    [("x".to_string(), x)].into_iter().collect()
}

/// Small finite and cofinite values of a single variable.
fn sample_values() -> Vec<FinCofSet> {
    let mut out = Vec::new();
    for mask in 0u64..32 {
        let support: Vec<u64> = (0..5).filter(|i| mask >> i & 1 == 1).collect();
        out.push(FinCofSet::finite(support.clone()));
        out.push(FinCofSet::cofinite(support));
    }
    out
}

fn assert_equivalent_on_samples(a: &str, b: &str) {
    let (fa, fb) = (f(a), f(b));
    let qa = eliminate_quantifiers(&fa).unwrap();
    for x in sample_values() {
        let e = env1(x.clone());
        let expected = bounded_witness_evaluate(&fb, &e, &OracleConfig::default()).unwrap();
        assert_eq!(evaluate_with_params(&fa, &e).unwrap(), expected, "{a} at x = {x}");
        assert_eq!(evaluate_with_params(&qa, &e).unwrap(), expected, "{qa} at x = {x}");
        assert_eq!(
            bounded_witness_evaluate(&fa, &e, &OracleConfig::default()).unwrap(),
            expected,
            "oracle on {a} at x = {x}"
        );
    }
}

#[test]
fn bounded_finite_subset_of_size_two() {
    assert_equivalent_on_samples("E y. (y <= x & C2(y) & Fin(y))", "C2(x)");
}

#[test]
fn infinite_split_of_parameter() {
    assert_equivalent_on_samples("E y. (~Fin(y ^ x) & ~Fin(x \\ y))", "~Fin(x)");
}

#[test]
fn output_is_quantifier_free_over_minterms() {
    let q = eliminate_quantifiers(&f("E y. (y <= x & C2(y) & Fin(y))")).unwrap();
    assert!(q.is_quantifier_free());
    assert_eq!(q.to_string(), "C2(x)");
    let q = eliminate_quantifiers(&f("E y. (~Fin(y ^ x) & ~Fin(x \\ y))")).unwrap();
    assert_eq!(q.to_string(), "~Fin(x)");
}

#[test]
fn quantifier_free_input_is_normalized_only() {
    let g = f("C2(x) & Fin(x v y)");
    let q = eliminate_quantifiers(&g).unwrap();
    assert!(q.free_vars().is_subset(&g.free_vars()));
    for x in sample_values() {
        for y in [FinCofSet::zero(), FinCofSet::finite([7]), FinCofSet::cofinite([0, 1])] {
            let e: BoolEnv = [("x".to_string(), x.clone()), ("y".to_string(), y)].into_iter().collect();
            let direct = crate::boolalg::count_at_least(&x, 2)
                && crate::boolalg::is_fin(&x.join(&e["y"]));
            assert_eq!(evaluate_with_params(&q, &e).unwrap(), direct);
        }
    }
}

/// Two disjoint pieces of two atoms each fit exactly when the parameter has
/// at least four atoms: counting past the largest index in the input.
#[test]
fn sums_of_counts_are_not_saturated() {
    let g = f("E y. (C2(x ^ y) & C2(x \\ y))");
    assert_eq!(eliminate_quantifiers(&g).unwrap().to_string(), "C4(x)");
}

#[test]
fn idempotence() {
    for s in [
        "E y. (y <= x & C2(y) & Fin(y))",
        "E y. (~Fin(y ^ x) & ~Fin(x \\ y))",
        "E y. (C2(x ^ y) & C2(x \\ y))",
        "A y. (y <= x -> Fin(y) | ~Fin(z \\ y))",
        "E y. (y ^ x = 0 & C3(y) & ~C3(z v y) & Fin(z))",
    ] {
        let once = eliminate_quantifiers(&f(s)).unwrap();
        let twice = eliminate_quantifiers(&once).unwrap();
        assert_eq!(once, twice, "{s}");
    }
}

#[test]
fn sentence_examples() {
    assert!(!decide_sentence(&f("Fin(1)")).unwrap());
    assert!(!decide_sentence(&f("C1(0)")).unwrap());
    assert!(decide_sentence(&f("A x. (~Fin(x) -> E y. (y <= x & ~Fin(y) & ~Fin(x \\ y)))")).unwrap());
    assert!(decide_sentence(&f("E x. (C2(x) & ~C3(x) & Fin(x))")).unwrap());
    assert!(decide_sentence(&f("A x. (~(x = 0) -> E y. (y <= x & C1(y) & ~C2(y)))")).unwrap());
    for n in 1..=5 {
        let s = format!("A x. (~C{}(x) -> Fin(x))", n + 1);
        assert!(decide_sentence(&f(&s)).unwrap(), "{s}");
    }
}

#[test]
fn sentences_reject_free_variables() {
    assert_eq!(decide_sentence(&f("Fin(x)")), Err(QeError::FreeVariables(vec!["x".into()])));
}

#[test]
fn evaluation_examples() {
    let y = |s: &str| -> BoolEnv { [("y".to_string(), s.parse().unwrap())].into_iter().collect() };
    assert!(evaluate_with_params(&f("Fin(y)"), &y("{3}")).unwrap());
    assert!(!evaluate_with_params(&f("C2(y) & Fin(y)"), &y("co{}")).unwrap());
    let y0: BoolEnv = [("y0".to_string(), FinCofSet::one())].into_iter().collect();
    assert!(evaluate_with_params(&f("y0 = 1"), &y0).unwrap());
    assert_eq!(
        evaluate_with_params(&f("Fin(x)"), &BoolEnv::new()),
        Err(QeError::UnboundVariable("x".into()))
    );
}

#[test]
fn evaluation_matches_oracle_on_finite_parameter() {
    let e = env1(FinCofSet::finite([0, 1, 2]));
    let g = f("E y. (y <= x & C2(y))");
    assert!(evaluate_with_params(&g, &e).unwrap());
    assert!(bounded_witness_evaluate(&g, &e, &OracleConfig::default()).unwrap());
}

/// A quantifier block whose body says the bound variables partition a
/// parameter: the engine only visits consistent cells.
#[test]
fn partition_blocks_stay_small() {
    let k = 12;
    let ys: Vec<String> = (0..k).map(|i| format!("b{i}")).collect();
    let terms: Vec<BoolTerm> = ys.iter().map(|v| BoolTerm::Var(v.clone())).collect();
    let mut body = BoolFormula::partition_of(&terms);
    for t in &terms {
        body = BoolFormula::and(body, BoolFormula::count_at_least(1, t.clone()));
    }
    body = BoolFormula::and(body, BoolFormula::leq(terms[0].clone(), BoolTerm::Var("x".into())));
    let mut g = body;
    for v in ys.iter().rev() {
        g = BoolFormula::exists(v.clone(), g);
    }
    assert!(evaluate_with_params(&g, &env1(FinCofSet::finite([1, 2]))).unwrap());
    assert!(!evaluate_with_params(&g, &env1(FinCofSet::zero())).unwrap());
    assert!(decide_sentence(&BoolFormula::exists("x", g)).unwrap());
}

#[test]
fn normal_form_evaluation_agrees() {
    let g = f("E y. (y <= x & C2(y) & ~Fin(z \\ y))");
    let nf = eliminate_to_normal_form(&g, &QeLimits::default()).unwrap();
    for x in sample_values().into_iter().step_by(7) {
        for z in [FinCofSet::finite([1]), FinCofSet::cofinite([2, 3])] {
            let e: BoolEnv = [("x".to_string(), x.clone()), ("z".to_string(), z)].into_iter().collect();
            assert_eq!(evaluate_normal_form(&nf, &e).unwrap(), evaluate_with_params(&g, &e).unwrap());
        }
    }
}

#[test]
fn constraint_rendering() {
    let c = CellConstraint { cell: 1, lower: 2, upper: Some(4), finiteness: Finiteness::MustBeFinite };
    assert!(c.is_satisfiable());
    assert!(c.admits(Some(3)) && !c.admits(Some(4)) && !c.admits(None));
    let bad = CellConstraint { cell: 0, lower: 3, upper: Some(2), finiteness: Finiteness::MustBeFinite };
    assert!(!bad.is_satisfiable());
    assert_eq!(minterm(&["x".into(), "y".into()], 1).to_string(), "x ^ !y");
    assert_eq!(minterm(&[], 0).to_string(), "1");
}
