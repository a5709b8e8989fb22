use std::collections::BTreeMap;

use super::*;
use crate::formula::{parse_ring_formula, sign_partition, Partition};

fn ring(s: &str) -> FiniteRing {
    make_ring(&s.parse().unwrap()).unwrap()
}

fn holds(r: &FiniteRing, f: &str) -> bool {
    eval_stalk_formula(r, &parse_ring_formula(f).unwrap(), &BTreeMap::new()).unwrap()
}

fn names(r: &FiniteRing, es: &[Elem]) -> Vec<String> {
    es.iter().map(|&e| r.name(e).to_string()).collect()
}

#[test]
fn zmod_idempotents_and_connectedness() {
    let z4 = ring("zmod(4)");
    assert_eq!(names(&z4, &z4.idempotents()), ["0", "1"]);
    assert!(is_connected(&z4));
    let z6 = ring("zmod(6)");
    assert_eq!(names(&z6, &z6.idempotents()), ["0", "1", "3", "4"]);
    assert!(!is_connected(&z6));
    assert!(is_connected(&ring("zmod(9)")));
    assert_eq!(make_ring(&RingSpec::ZMod(1)), Err(StalkError::ModulusTooSmall(1)));
}

#[test]
fn gf4_tables() {
    let f = ring("gf4");
    let e = |n: &str| f.element(n).unwrap();
    let (a, b, one) = (e("a"), e("b"), e("1"));
    assert_eq!(f.mul(a, a), b);
    assert_eq!(f.mul(a, b), one);
    assert_eq!(f.mul(b, b), a);
    assert_eq!(f.add(a, b), one);
    assert!(f.elements().all(|x| f.add(x, x) == f.zero()));
    // Every nonzero element is a unit: a field.
    assert_eq!(f.units().len(), 3);
    assert!(is_connected(&f));
}

#[test]
fn stalk_satisfaction_examples() {
    let f = ring("gf4");
    assert!(!holds(&f, "E x. (x*x = x & ~x = 0 & ~x = 1)"));
    assert!(holds(&f, "E x. x*x + x = 1"));
    assert!(holds(&ring("zmod(4)"), "A x. x + x + x + x = 0"));
    let err = eval_stalk_formula(&f, &parse_ring_formula("x = 0").unwrap(), &BTreeMap::new());
    assert_eq!(err, Err(StalkError::UnboundVariable("x".into())));
}

#[test]
fn restricting_formula_examples() {
    let f = ring("gf4");
    let phi = parse_ring_formula("x*x = x").unwrap();
    assert_eq!(names(&f, &validate_restricting_formula(&f, &phi).unwrap()), ["0", "1"]);
    let zero = parse_ring_formula("x = 0").unwrap();
    assert!(matches!(validate_restricting_formula(&f, &zero), Err(StalkError::NotUnitalSubring(_))));
    let z4 = ring("zmod(4)");
    match validate_restricting_formula(&z4, &phi) {
        Err(StalkError::NotUnitalSubring(msg)) => assert_eq!(msg, "1 + 1 = 2 is not in the defined set"),
        other => panic!("{other:?}"),
    }
    let two = parse_ring_formula("x = y").unwrap();
    assert!(matches!(validate_restricting_formula(&f, &two), Err(StalkError::WrongArity(_))));
}

#[test]
fn defined_subring_is_a_ring() {
    let f = ring("gf4");
    let set = validate_restricting_formula(&f, &parse_ring_formula("x*x = x").unwrap()).unwrap();
    let sub = f.restrict(&set).unwrap();
    assert_eq!(sub.size(), 2);
    assert!(is_connected(&sub));
}

#[test]
fn table_specs() {
    let spec: RingSpec = "table(0 1; 0 1 / 1 0; 0 0 / 0 1)".parse().unwrap();
    assert_eq!(spec.to_string(), "table(0 1; 0 1 / 1 0; 0 0 / 0 1)");
    let r = make_ring(&spec).unwrap();
    assert!(holds(&r, "A x. x*x = x"));
    // Not distributive: multiplication by a constant nonzero map.
    let broken: RingSpec = "table(0 1; 0 1 / 1 0; 0 0 / 0 0)".parse().unwrap();
    assert!(matches!(make_ring(&broken), Err(StalkError::AxiomViolation(_))));
    assert!("zmod(x)".parse::<RingSpec>().is_err());
    assert!("table(0 1; 0 1)".parse::<RingSpec>().is_err());
}

/// Satisfaction does not depend on how the carrier is named or ordered.
#[test]
fn satisfaction_is_invariant_under_renaming() {
    let f = ring("gf4");
    // Carrier order b, a, 1, 0 with fresh names.
    let perm: Vec<Elem> = vec![3, 2, 1, 0];
    let new_names: Vec<String> = ["w", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let pos = |e: Elem| perm.iter().position(|&p| p == e).unwrap() as Elem;
    let table = |op: &dyn Fn(Elem, Elem) -> Elem| -> Vec<Vec<Elem>> {
        perm.iter().map(|&a| perm.iter().map(|&b| pos(op(a, b))).collect()).collect()
    };
    let copy = FiniteRing::from_tables("copy", new_names, table(&|a, b| f.add(a, b)), table(&|a, b| f.mul(a, b))).unwrap();
    for s in [
        "E x. x*x + x = 1",
        "A x. (x = 0 | E y. x*y = 1)",
        "E x. E y. (~x = y & x*x = y & y*y = x)",
        "A x. x*x*x*x = x",
        "E x. (x*x = x & ~x = 0 & ~x = 1)",
    ] {
        assert_eq!(holds(&f, s), holds(&copy, s), "{s}");
    }
}

#[test]
fn sign_cells_partition_every_stalk() {
    let fs: Vec<_> = ["x*x = x", "x = 1", "E y. x*y = 1"].iter().map(|s| parse_ring_formula(s).unwrap()).collect();
    let p = sign_partition(&fs);
    for spec in ["gf4", "zmod(4)", "zmod(6)"] {
        assert_eq!(check_partition(&ring(spec), &p, &["x".into()]).unwrap(), None);
    }
    let overlapping = Partition { cells: vec![fs[0].clone(), fs[1].clone()] };
    assert!(check_partition(&ring("gf4"), &overlapping, &["x".into()]).unwrap().is_some());
}
