//! Sampled verification that a model behaves as the theory of restricted
//! products predicts: Boolean values exist and are computed correctly,
//! atomic truth is "value = 1", `phi` fails only finitely often, the value
//! algebra with its finite ideal looks like the finite/cofinite algebra, and
//! witnesses can be patched together.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sample::{random_atomic_formula, random_element, random_ring_formula};
use super::{boolean_value, patch_witness, RPElement, RPEnv, RPModel, RprodError};
use crate::boolalg::{is_fin, FinCofSet, PeriodicSet};
use crate::formula::{Formula, RingFormula, RingTerm};
use crate::stalk::{eval_stalk_formula, is_connected, Elem};

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    /// Test hook: flip coordinate 0 of every Boolean value used by the
    /// atomic-truth check.
    pub corrupt_boolean_values: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { samples: 100, seed: 0x5eed, corrupt_boolean_values: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub entries: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{} {}: {}", if e.passed { "PASS" } else { "FAIL" }, e.name, e.detail)?;
        }
        Ok(())
    }
}

const VARS: [&str; 2] = ["x", "y"];

struct Checker<'a> {
    model: &'a RPModel,
    rng: ChaCha8Rng,
    options: CheckOptions,
}

type Outcome = Result<(), String>;

impl Checker<'_> {
    fn element(&mut self) -> RPElement {
        random_element(&mut self.rng, self.model, 3, 8)
    }

    fn env(&mut self) -> RPEnv {
        VARS.iter().map(|v| (v.to_string(), self.element())).collect()
    }

    fn formula(&mut self) -> RingFormula {
        let vars: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
        let atoms = self.rng.gen_range(1..=3);
        random_ring_formula(&mut self.rng, &vars, atoms, 2)
    }

    fn show(&self, env: &RPEnv) -> String {
        env.iter().map(|(v, e)| format!("{v} = [{}]", e.to_literal(self.model))).collect::<Vec<_>>().join(", ")
    }

    fn atomic_algebra(&mut self) -> Outcome {
        for s in self.model.stalks() {
            if !is_connected(&s.ring) {
                return Err(format!("stalk {} has a nontrivial idempotent", s.ring));
            }
        }
        // With connected stalks an idempotent is 0 or 1 at every index, so
        // it is determined by its support, a finite or cofinite set.
        let x_one = RingFormula::eq(var("x"), RingTerm::One);
        let x_zero = RingFormula::eq(var("x"), RingTerm::Zero);
        for _ in 0..self.options.samples {
            let f = self.element();
            let e = RPElement::mul(self.model, &f, &f).map_err(|e| e.to_string())?;
            if e != f {
                continue;
            }
            let env: RPEnv = [("x".to_string(), e)].into_iter().collect();
            let one = boolean_value(self.model, &x_one, &env).map_err(|e| e.to_string())?;
            let zero = boolean_value(self.model, &x_zero, &env).map_err(|e| e.to_string())?;
            if !one.join(&zero).is_one() {
                return Err(format!("idempotent {} is neither 0 nor 1 somewhere", self.show(&env)));
            }
        }
        Ok(())
    }

    fn value_totality(&mut self) -> Outcome {
        for _ in 0..self.options.samples {
            let theta = self.formula();
            let env = self.env();
            let value = boolean_value(self.model, &theta, &env).map_err(|e| format!("{theta}: {e}"))?;
            let mut probe: Vec<u64> = env.values().flat_map(|e| e.exceptions().keys().copied()).collect();
            probe.extend(self.model.exceptional().keys().copied());
            let top = probe.iter().copied().max().unwrap_or(0);
            probe.extend([top + 1, top + 2, top + 1000]);
            for i in probe {
                let ring = &self.model.stalk(i).ring;
                let vals: BTreeMap<String, Elem> = env.iter().map(|(v, e)| (v.clone(), e.value_at(self.model, i))).collect();
                let holds = eval_stalk_formula(ring, &theta, &vals).map_err(|e| e.to_string())?;
                if holds != value.contains(i) {
                    return Err(format!("[[{theta}]] at {} is {value} but index {i} disagrees", self.show(&env)));
                }
            }
        }
        Ok(())
    }

    fn atomic_truth(&mut self) -> Outcome {
        let vars: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
        for k in 0..self.options.samples {
            let theta = if k == 0 {
                RingFormula::eq(RingTerm::mul(var("x"), RingTerm::One), var("x"))
            } else {
                random_atomic_formula(&mut self.rng, &vars, 2)
            };
            let env = self.env();
            let Formula::Atom(atom) = &theta else { unreachable!("atomic") };
            let left = RPElement::eval_term(self.model, &atom.left, &env).map_err(|e| e.to_string())?;
            let right = RPElement::eval_term(self.model, &atom.right, &env).map_err(|e| e.to_string())?;
            let truth = left == right;
            let mut value = boolean_value(self.model, &theta, &env).map_err(|e| e.to_string())?;
            if self.options.corrupt_boolean_values {
                value = value.diff(&FinCofSet::singleton(0)).join(&FinCofSet::singleton(0).diff(&value));
            }
            if truth != value.is_one() {
                return Err(format!("{theta} at {}: ring truth {truth} but value {value}", self.show(&env)));
            }
        }
        Ok(())
    }

    fn phi_almost_everywhere(&mut self) -> Outcome {
        let not_phi = Formula::not(self.model.phi_at("x"));
        for _ in 0..self.options.samples {
            let env: RPEnv = [("x".to_string(), self.element())].into_iter().collect();
            let value = boolean_value(self.model, &not_phi, &env).map_err(|e| e.to_string())?;
            if !is_fin(&value) {
                return Err(format!("[[~phi]] at {} is {value}", self.show(&env)));
            }
        }
        Ok(())
    }

    fn fin_ideal(&mut self) -> Outcome {
        if is_fin(&FinCofSet::one()) || !is_fin(&FinCofSet::zero()) {
            return Err("Fin is not a proper ideal".into());
        }
        let mut values = Vec::new();
        for _ in 0..self.options.samples {
            let theta = self.formula();
            let env = self.env();
            values.push(boolean_value(self.model, &theta, &env).map_err(|e| e.to_string())?);
        }
        for (k, v) in values.iter().enumerate() {
            if v.size().is_some() != is_fin(v) {
                return Err(format!("{v}: finitely many atoms disagrees with Fin"));
            }
            if !is_fin(v) {
                let p = PeriodicSet::from(v);
                let half = p.half().ok_or_else(|| format!("{v} cannot be split"))?;
                if half.is_finite() || p.diff(&half).is_finite() || !half.diff(&p).is_empty() {
                    return Err(format!("{v} has no splitting into two infinite parts"));
                }
            }
            let w = &values[(k + 1) % values.len()];
            if is_fin(v) && is_fin(w) && !is_fin(&v.join(w)) {
                return Err(format!("{v} v {w} is not finite"));
            }
            if is_fin(v) && !is_fin(&v.meet(w)) {
                return Err(format!("{v} ^ {w} is not finite"));
            }
        }
        Ok(())
    }

    fn witness_patching(&mut self) -> Outcome {
        let vars: Vec<String> = ["x", "w"].iter().map(|v| v.to_string()).collect();
        for _ in 0..self.options.samples {
            let atoms = self.rng.gen_range(1..=2);
            let theta = random_ring_formula(&mut self.rng, &vars, atoms, 2);
            let env: RPEnv = [("x".to_string(), self.element())].into_iter().collect();
            let exists = Formula::exists("w", theta.clone());
            let exists_phi = Formula::exists("w", Formula::and(self.model.phi_at("w"), theta.clone()));
            let v_exists = boolean_value(self.model, &exists, &env).map_err(|e| e.to_string())?;
            let v_phi = boolean_value(self.model, &exists_phi, &env).map_err(|e| e.to_string())?;
            let premise = is_fin(&v_exists.diff(&v_phi));
            match patch_witness(self.model, &theta, "w", &env) {
                Ok(g) => {
                    if !premise {
                        return Err(format!("{theta}: witness returned although the premise fails"));
                    }
                    let mut full = env.clone();
                    full.insert("w".to_string(), g);
                    let v_g = boolean_value(self.model, &theta, &full).map_err(|e| e.to_string())?;
                    if !is_fin(&v_exists.diff(&v_g)) {
                        return Err(format!("{theta} at {}: witness misses {}", self.show(&full), v_exists.diff(&v_g)));
                    }
                }
                Err(RprodError::PremiseViolated(_)) if !premise => {}
                Err(e) => return Err(format!("{theta} at {}: {e}", self.show(&env))),
            }
        }
        Ok(())
    }
}

fn var(name: &str) -> RingTerm {
    RingTerm::Var(name.to_string())
}

/// Run every check; failures are reported as entries, never as errors.
pub fn check_axioms(model: &RPModel, options: &CheckOptions) -> AxiomReport {
    let mut checker = Checker { model, rng: ChaCha8Rng::seed_from_u64(options.seed), options: *options };
    type Check<'a> = fn(&mut Checker<'a>) -> Outcome;
    let checks: [(&'static str, Check); 6] = [
        ("atomic-algebra", Checker::atomic_algebra),
        ("value-totality", Checker::value_totality),
        ("atomic-truth", Checker::atomic_truth),
        ("witness-patching", Checker::witness_patching),
        ("phi-almost-everywhere", Checker::phi_almost_everywhere),
        ("fin-ideal", Checker::fin_ideal),
    ];
    let entries = checks
        .into_iter()
        .map(|(name, check)| match check(&mut checker) {
            Ok(()) => AxiomCheck { name, passed: true, detail: format!("{} samples", options.samples) },
            Err(detail) => AxiomCheck { name, passed: false, detail },
        })
        .collect();
    AxiomReport { entries }
}
