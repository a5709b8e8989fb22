//! Quantifier elimination for the theory of infinite atomic Boolean algebras
//! with a distinguished proper ideal `Fin` of finite elements, in the
//! language with the counting predicates `C_n`.
//!
//! Elimination works on size classes of the minterms ("cells") of the free
//! variables; see `engine` for the mechanics. Everything is decided in the
//! standard model: subsets of the naturals with `Fin` the finite sets.
//! Parameters are finite or cofinite sets, while quantifiers range over all
//! subsets.

mod classes;
mod engine;
mod mdd;
mod normal_form;
mod oracle;

use std::collections::HashMap;

use thiserror::Error;

use crate::boolalg::{bool_term_eval, BoolAlgError, BoolEnv};
use crate::formula::{BoolFormula, BoolTerm};
use engine::{Ctx, Engine};

pub use classes::split_feasible;
pub use normal_form::{CellConstraint, Finiteness, QFNormalForm};
pub use oracle::{bounded_witness_evaluate, OracleConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QeError {
    #[error("formula has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("quantifier depth {depth} exceeds the configured bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

/// Size limits for one elimination run.
#[derive(Clone, Copy, Debug)]
pub struct QeLimits {
    pub max_nodes: usize,
    pub max_active_cells: usize,
    /// Free variables of a formula eliminated without parameter values.
    pub max_free_vars: usize,
}

impl Default for QeLimits {
    fn default() -> Self {
        QeLimits { max_nodes: 4_000_000, max_active_cells: 1 << 20, max_free_vars: 16 }
    }
}

fn engine_for(f: &BoolFormula, limits: &QeLimits) -> Engine {
    Engine::new(f.max_count_index(), limits.max_nodes, limits.max_active_cells)
}

/// Eliminate quantifiers, producing the normal form over the minterms of the
/// free variables of `f` (sorted by name).
pub fn eliminate_to_normal_form(f: &BoolFormula, limits: &QeLimits) -> Result<QFNormalForm, QeError> {
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    if vars.len() > limits.max_free_vars {
        return Err(QeError::ResourceLimit(format!(
            "{} free variables (limit {})",
            vars.len(),
            limits.max_free_vars
        )));
    }
    let mut engine = engine_for(f, limits);
    let ctx = Ctx { vars: vars.clone(), active: (0..1u64 << vars.len()).collect() };
    let m = engine.build(f, &ctx)?;
    let m = engine.mgr.shrink(m)?;
    Ok(QFNormalForm::from_mdd(&engine.mgr, m, vars))
}

/// A quantifier-free equivalent over atoms `C_n(t)`, `Fin(t)` and `t = 0`,
/// where each `t` is a minterm of the free variables. Canonical: equivalent
/// inputs with the same free variables give the same output.
pub fn eliminate_quantifiers(f: &BoolFormula) -> Result<BoolFormula, QeError> {
    Ok(eliminate_to_normal_form(f, &QeLimits::default())?.to_formula())
}

/// Truth value of a sentence. Without free variables the only cell is `1`,
/// which is infinite.
pub fn decide_sentence(f: &BoolFormula) -> Result<bool, QeError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(QeError::FreeVariables(free.into_iter().collect()));
    }
    evaluate_with_params(f, &BoolEnv::new())
}

/// Truth value of `f` with its free variables set to finite/cofinite values.
///
/// Elimination runs relative to the parameter cells that are actually
/// nonempty, so the work depends on the support of the values rather than on
/// the number of parameters.
pub fn evaluate_with_params(f: &BoolFormula, env: &BoolEnv) -> Result<bool, QeError> {
    evaluate_with_limits(f, env, &QeLimits::default())
}

pub fn evaluate_with_limits(f: &BoolFormula, env: &BoolEnv, limits: &QeLimits) -> Result<bool, QeError> {
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    if let Some(v) = vars.iter().find(|v| !env.contains_key(*v)) {
        return Err(QeError::UnboundVariable(v.clone()));
    }
    if vars.len() > 63 {
        return Err(QeError::ResourceLimit("more than 63 parameters".into()));
    }
    let sizes = cell_sizes(&vars, env);
    let mut active: Vec<u64> = sizes.keys().copied().collect();
    active.sort_unstable();
    let mut engine = engine_for(f, limits);
    let m = engine.build(f, &Ctx { vars, active })?;
    Ok(engine.eval(m, &sizes))
}

/// Sizes of the nonempty minterm cells of the parameter values.
fn cell_sizes(vars: &[String], env: &BoolEnv) -> HashMap<u64, Option<u64>> {
    let values: Vec<_> = vars.iter().map(|v| &env[v]).collect();
    let cell_of = |i: u64| -> u64 {
        values.iter().enumerate().fold(0, |m, (b, s)| if s.contains(i) { m | 1 << b } else { m })
    };
    let mut sizes: HashMap<u64, Option<u64>> = HashMap::new();
    let mut explicit = std::collections::BTreeSet::new();
    for s in &values {
        explicit.extend(s.support().iter().copied());
    }
    for &i in &explicit {
        let e = sizes.entry(cell_of(i)).or_insert(Some(0));
        *e = e.map(|k| k + 1);
    }
    // Indices beyond every support share one cell, which is infinite.
    let generic = values.iter().enumerate().fold(0, |m, (b, s)| if s.is_cofinite() { m | 1 << b } else { m });
    sizes.insert(generic, None);
    sizes
}

/// Evaluate a quantifier-free normal form at parameter values.
pub fn evaluate_normal_form(nf: &QFNormalForm, env: &BoolEnv) -> Result<bool, QeError> {
    let mut cache = HashMap::new();
    for conj in &nf.disjuncts {
        for c in conj {
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(c.cell) {
                let value = bool_term_eval(&nf.cell_term(c.cell), env)
                    .map_err(|err| match err {
                        BoolAlgError::UnboundVariable(v) => QeError::UnboundVariable(v),
                        other => QeError::UnboundVariable(other.to_string()),
                    })?;
                e.insert(value.size());
            }
        }
    }
    Ok(nf.holds_at_sizes(|cell| cache[&cell]))
}

/// The minterm term of `cell` over `vars`.
pub fn minterm(vars: &[String], cell: u64) -> BoolTerm {
    QFNormalForm { vars: vars.to_vec(), disjuncts: Vec::new() }.cell_term(cell)
}

#[cfg(test)]
mod tests;
