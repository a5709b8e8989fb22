mod common;

use std::time::Instant;

use fvrp_core::tarski_qe::{bounded_witness_evaluate, evaluate_with_params, OracleConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn elimination_agrees_with_witness_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = ["p", "q"];
    let start = Instant::now();
    for i in 0..80 {
        let mut vars: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let f = common::random_bool_formula(&mut rng, &mut vars, 2, 4, 3);
        for _ in 0..8 {
            let env = common::random_env(&mut rng, &params);
            let t0 = Instant::now();
            let expected = bounded_witness_evaluate(&f, &env, &OracleConfig::default()).unwrap();
            let dt = t0.elapsed();
            if dt.as_millis() > 200 {
                eprintln!("slow oracle {dt:?}: {f}");
            }
            assert_eq!(evaluate_with_params(&f, &env).unwrap(), expected, "formula #{i}: {f} at {env:?}");
        }
    }
    eprintln!("elapsed {:?}", start.elapsed());
}
