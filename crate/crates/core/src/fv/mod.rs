//! Feferman-Vaught reduction for restricted products.
//!
//! A ring formula `theta(x1..xn)` is reduced to a partition of ring formulas
//! `cell_0..cell_m` and a Boolean formula `psi(y0..ym)` such that in every
//! restricted product, `theta(f)` holds iff `psi([[cell_0(f)]], ...,
//! [[cell_m(f)]])` holds in the Boolean algebra of idempotents with its
//! ideal of finite elements.

mod reduce;

use std::fmt;

use thiserror::Error;

use crate::boolalg::BoolEnv;
use crate::formula::{BoolFormula, BoolTerm, Partition, RingFormula};
use crate::rprod::{boolean_value, RPEnv, RPModel, RprodError};
use crate::tarski_qe::{evaluate_with_params, QeError};

use reduce::Reducer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FvError {
    #[error("restricting formula must have exactly one free variable, found {0:?}")]
    PhiArity(Vec<String>),
    #[error("expected a sentence, found free variables {0:?}")]
    FreeVariables(Vec<String>),
    #[error("no argument for free variable `{0}`")]
    UnboundVariable(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("{0}")]
    Formula(String),
    #[error(transparent)]
    Rprod(#[from] RprodError),
    #[error("Boolean evaluation failed: {0}")]
    Qe(#[from] QeError),
}

#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    /// Largest number of cells any step may produce.
    pub max_cells: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { max_cells: 4096 }
    }
}

/// Cells, the Boolean formula over their variables `y0, y1, ...`, and one
/// trace line per reduction step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub formula: RingFormula,
    pub free_vars: Vec<String>,
    pub cells: Vec<RingFormula>,
    pub cell_vars: Vec<String>,
    pub psi: BoolFormula,
    pub trace: Vec<String>,
    /// Whether cells empty in every stalk of a model were dropped.
    pub model_pruned: bool,
}

impl ReductionResult {
    pub fn partition(&self) -> Partition {
        Partition { cells: self.cells.clone() }
    }

    /// Line-oriented `key=value` form.
    pub fn render_structured(&self) -> String {
        let mut lines = vec![
            format!("formula={}", self.formula),
            format!("free_vars={}", self.free_vars.join(",")),
            format!("model_pruned={}", self.model_pruned),
            format!("cells={}", self.cells.len()),
        ];
        for (v, c) in self.cell_vars.iter().zip(&self.cells) {
            lines.push(format!("cell.{v}={c}"));
        }
        lines.push(format!("psi={}", self.psi));
        for (k, t) in self.trace.iter().enumerate() {
            lines.push(format!("trace.{k}={t}"));
        }
        lines.join("\n")
    }
}

impl fmt::Display for ReductionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formula: {}", self.formula)?;
        writeln!(f, "cells: {}", self.cells.len())?;
        for (v, c) in self.cell_vars.iter().zip(&self.cells) {
            writeln!(f, "  {v} := {c}")?;
        }
        writeln!(f, "psi: {}", self.psi)?;
        write!(f, "trace:")?;
        for (k, t) in self.trace.iter().enumerate() {
            write!(f, "\n  {}. {t}", k + 1)?;
        }
        Ok(())
    }
}

fn run(theta: &RingFormula, phi: &RingFormula, model: Option<&RPModel>, options: &ReduceOptions) -> Result<ReductionResult, FvError> {
    let phi_free: Vec<String> = phi.free_vars().into_iter().collect();
    if phi_free.len() != 1 {
        return Err(FvError::PhiArity(phi_free));
    }
    let free_vars: Vec<String> = theta.free_vars().into_iter().collect();
    let core = theta.to_core_connectives();
    let mut reducer = Reducer::new(phi, &phi_free[0], model, options.max_cells);
    let node = reducer.node(&core, &free_vars)?;
    let cell_vars: Vec<String> = (0..node.cells.len()).map(|i| format!("y{i}")).collect();
    let renaming = node.vars.iter().cloned().zip(cell_vars.iter().map(|y| BoolTerm::Var(y.clone()))).collect();
    Ok(ReductionResult {
        formula: theta.clone(),
        free_vars,
        cells: node.cells,
        cell_vars,
        psi: node.psi.substitute_all(&renaming),
        trace: reducer.trace,
        model_pruned: model.is_some(),
    })
}

/// The reduction valid in every restricted product by `phi`. Sign patterns
/// that are inconsistent in every ring are left out; nothing else is pruned.
pub fn reduce(theta: &RingFormula, phi: &RingFormula, options: &ReduceOptions) -> Result<ReductionResult, FvError> {
    run(theta, phi, None, options)
}

/// The reduction for one model: cells realized by no tuple of any of the
/// model's stalks are dropped, which keeps nested quantifiers tractable.
pub fn reduce_in_model(theta: &RingFormula, model: &RPModel, options: &ReduceOptions) -> Result<ReductionResult, FvError> {
    run(theta, model.phi(), Some(model), options)
}

/// Evaluate `psi` at the Boolean values of the cells.
pub fn evaluate_reduction(model: &RPModel, reduction: &ReductionResult, env: &RPEnv) -> Result<bool, FvError> {
    if let Some(v) = reduction.free_vars.iter().find(|v| !env.contains_key(*v)) {
        return Err(FvError::UnboundVariable(v.clone()));
    }
    let used = reduction.psi.free_vars();
    let mut values = BoolEnv::new();
    for (y, cell) in reduction.cell_vars.iter().zip(&reduction.cells) {
        if used.contains(y) {
            values.insert(y.clone(), boolean_value(model, cell, env)?);
        }
    }
    Ok(evaluate_with_params(&reduction.psi, &values)?)
}

/// Truth of a sentence in the restricted product.
pub fn decide_in_model(model: &RPModel, sentence: &RingFormula, options: &ReduceOptions) -> Result<bool, FvError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(FvError::FreeVariables(free.into_iter().collect()));
    }
    let reduction = reduce_in_model(sentence, model, options)?;
    evaluate_reduction(model, &reduction, &RPEnv::new())
}

/// Truth of `theta` at eventually-default arguments.
pub fn evaluate_in_model(model: &RPModel, theta: &RingFormula, env: &RPEnv, options: &ReduceOptions) -> Result<bool, FvError> {
    let reduction = reduce_in_model(theta, model, options)?;
    evaluate_reduction(model, &reduction, env)
}

#[cfg(test)]
mod tests;
