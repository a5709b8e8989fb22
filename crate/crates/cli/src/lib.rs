//! Command-line front end for the restricted-product toolkit.
//!
//! Exit codes: 0 success, 1 disagreement or failed axiom check, 2 usage or
//! parse error, 3 resource limit exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use fvrp_core::formula::{parse_bool_formula, parse_ring_formula, BoolFormula, Formula, RingFormula};
use fvrp_core::fv::{evaluate_reduction, reduce, reduce_in_model, FvError, ReduceOptions};
use fvrp_core::rprod::{
    check_axioms, fin_defining_characterization, pi1_decide, sharp_probe, sigma1_decide, CheckOptions, RPElement, RPEnv,
    RPModel, RprodError, SharpOutcome, SigmaLimits,
};
use fvrp_core::tarski_qe::{decide_sentence, eliminate_to_normal_form, QeError, QeLimits};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "fvrp", version, about = "Decide and reduce first-order formulas over restricted products of finite rings")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// Formula arguments accept literal text or `@path` to read a file.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a ring formula to cells and a Boolean formula.
    Reduce {
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        formula: String,
        /// Drop cells that are empty in every stalk of this model.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 4096)]
        max_cells: usize,
    },
    /// Decide a ring sentence in a model with the reduction pipeline.
    Decide {
        #[arg(long)]
        model: String,
        #[arg(long)]
        sentence: String,
        #[arg(long, default_value_t = 4096)]
        max_cells: usize,
    },
    /// Evaluate a ring formula at element arguments.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        formula: String,
        /// `default=<e>; <i>:=<e>, ...`, optionally prefixed by `<var>:`.
        /// Unprefixed arguments bind the free variables in sorted order.
        #[arg(long = "arg")]
        args: Vec<String>,
        #[arg(long, default_value_t = 4096)]
        max_cells: usize,
    },
    /// Eliminate quantifiers from a Boolean formula.
    Qe {
        #[arg(long)]
        formula: String,
    },
    /// Decide a Boolean sentence in infinite atomic Boolean algebras with Fin.
    Bdecide {
        #[arg(long)]
        sentence: String,
    },
    /// Sampled checks of the restricted-product axioms on a model.
    CheckAxioms {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Corrupt Boolean values in the atomic-truth check (self-test).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Compare the reduction pipeline with the direct existential/universal
    /// oracle.
    Oracle {
        #[arg(long)]
        model: String,
        #[arg(long)]
        sentence: String,
        #[arg(long, default_value_t = 4096)]
        max_cells: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_tuple_evaluations: u64,
    },
    /// Search for a unit pair whose Boolean value covers a finite
    /// idempotent.
    SharpProbe {
        #[arg(long)]
        model: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 16)]
        search_bound: u64,
    },
    /// Print the unit-pair condition characterizing finite idempotents.
    FinChar {
        #[arg(long)]
        phi: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<FvError> for CliError {
    fn from(e: FvError) -> Self {
        match e {
            FvError::ResourceLimit(_) | FvError::Qe(QeError::ResourceLimit(_)) | FvError::Rprod(RprodError::ResourceLimit(_)) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<RprodError> for CliError {
    fn from(e: RprodError) -> Self {
        match e {
            RprodError::ResourceLimit(_) => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<QeError> for CliError {
    fn from(e: QeError) -> Self {
        match e {
            QeError::ResourceLimit(_) | QeError::DepthExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn text_arg(value: &str) -> Result<String, CliError> {
    match value.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}"))),
        None => Ok(value.to_string()),
    }
}

fn ring_formula(value: &str) -> Result<RingFormula, CliError> {
    let text = text_arg(value)?;
    parse_ring_formula(text.trim()).map_err(|e| CliError::Usage(format!("cannot parse `{}`: {e}", text.trim())))
}

fn bool_formula(value: &str) -> Result<BoolFormula, CliError> {
    let text = text_arg(value)?;
    parse_bool_formula(text.trim()).map_err(|e| CliError::Usage(format!("cannot parse `{}`: {e}", text.trim())))
}

fn load_model(path: &str) -> Result<RPModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    RPModel::from_config(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn bind_args(model: &RPModel, theta: &RingFormula, args: &[String]) -> Result<RPEnv, CliError> {
    let free: Vec<String> = theta.free_vars().into_iter().collect();
    let mut env = RPEnv::new();
    let mut positional = Vec::new();
    for a in args {
        let a = a.trim();
        match a.split_once(':') {
            Some((name, literal)) if !a.starts_with("default") => {
                env.insert(name.trim().to_string(), RPElement::parse(model, literal)?);
            }
            _ => positional.push(RPElement::parse(model, a)?),
        }
    }
    let unbound: Vec<&String> = free.iter().filter(|v| !env.contains_key(*v)).collect();
    if positional.len() != unbound.len() {
        return Err(CliError::Usage(format!(
            "free variables {free:?} need {} more arguments, {} given",
            unbound.len(),
            positional.len()
        )));
    }
    for (v, e) in unbound.into_iter().cloned().collect::<Vec<_>>().into_iter().zip(positional) {
        env.insert(v, e);
    }
    Ok(env)
}

fn verdict(format: Format, value: bool) -> String {
    match format {
        Format::Text => value.to_string(),
        Format::Structured => format!("verdict={value}"),
    }
}

/// Run one command; returns the text to print and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Reduce { phi, formula, model, max_cells } => {
            let theta = ring_formula(formula)?;
            let options = ReduceOptions { max_cells: *max_cells };
            let result = match (model, phi) {
                (Some(path), None) => reduce_in_model(&theta, &load_model(path)?, &options)?,
                (None, Some(phi)) => reduce(&theta, &ring_formula(phi)?, &options)?,
                (Some(path), Some(phi)) => {
                    let m = load_model(path)?;
                    if ring_formula(phi)? != *m.phi() {
                        return Err(CliError::Usage("--phi differs from the model's phi".into()));
                    }
                    reduce_in_model(&theta, &m, &options)?
                }
                (None, None) => return Err(CliError::Usage("reduce needs --phi or --model".into())),
            };
            let out = match format {
                Format::Text => result.to_string(),
                Format::Structured => result.render_structured(),
            };
            Ok((out, 0))
        }
        Command::Decide { model, sentence, max_cells } => {
            let m = load_model(model)?;
            let s = ring_formula(sentence)?;
            let free = s.free_vars();
            if !free.is_empty() {
                return Err(CliError::Usage(format!("not a sentence: free variables {free:?}")));
            }
            let r = reduce_in_model(&s, &m, &ReduceOptions { max_cells: *max_cells })?;
            Ok((verdict(format, evaluate_reduction(&m, &r, &RPEnv::new())?), 0))
        }
        Command::Eval { model, formula, args, max_cells } => {
            let m = load_model(model)?;
            let theta = ring_formula(formula)?;
            let env = bind_args(&m, &theta, args)?;
            let r = reduce_in_model(&theta, &m, &ReduceOptions { max_cells: *max_cells })?;
            Ok((verdict(format, evaluate_reduction(&m, &r, &env)?), 0))
        }
        Command::Qe { formula } => {
            let f = bool_formula(formula)?;
            let nf = eliminate_to_normal_form(&f, &QeLimits::default())?;
            let out = match format {
                Format::Text => nf.to_formula().to_string(),
                Format::Structured => format!("input={f}\nfree_vars={}\nformula={}", nf.vars.join(","), nf.to_formula()),
            };
            Ok((out, 0))
        }
        Command::Bdecide { sentence } => {
            let f = bool_formula(sentence)?;
            Ok((verdict(format, decide_sentence(&f)?), 0))
        }
        Command::CheckAxioms { model, samples, seed, inject_fault } => {
            let m = load_model(model)?;
            let options = CheckOptions { samples: *samples, seed: *seed, corrupt_boolean_values: *inject_fault };
            let report = check_axioms(&m, &options);
            let out = match format {
                Format::Text => report.to_string(),
                Format::Structured => report
                    .entries
                    .iter()
                    .map(|e| format!("axiom.{}={}\ndetail.{}={}", e.name, if e.passed { "pass" } else { "fail" }, e.name, e.detail))
                    .chain([format!("all_passed={}", report.all_passed())])
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            Ok((out, if report.all_passed() { 0 } else { 1 }))
        }
        Command::Oracle { model, sentence, max_cells, max_tuple_evaluations } => {
            let m = load_model(model)?;
            let s = ring_formula(sentence)?;
            let free = s.free_vars();
            if !free.is_empty() {
                return Err(CliError::Usage(format!("not a sentence: free variables {free:?}")));
            }
            let r = reduce_in_model(&s, &m, &ReduceOptions { max_cells: *max_cells })?;
            let pipeline = evaluate_reduction(&m, &r, &RPEnv::new())?;
            let limits = SigmaLimits { max_tuple_evaluations: *max_tuple_evaluations, ..SigmaLimits::default() };
            let direct = match &s {
                Formula::Exists(..) => Some(sigma1_decide(&m, &s, &limits)),
                Formula::Forall(..) => Some(pi1_decide(&m, &s, &limits)),
                _ => None,
            };
            let direct = match direct {
                Some(Ok(v)) => Some(v),
                Some(Err(RprodError::Shape { .. })) | None => None,
                Some(Err(e)) => return Err(e.into()),
            };
            let agree = direct.is_none_or(|d| d == pipeline);
            let shown = direct.map_or("n/a".to_string(), |d| d.to_string());
            let out = match format {
                Format::Text => format!("pipeline: {pipeline}\noracle: {shown}\nagree: {agree}"),
                Format::Structured => format!("pipeline={pipeline}\noracle={shown}\nagree={agree}"),
            };
            Ok((out, if agree { 0 } else { 1 }))
        }
        Command::SharpProbe { model, element, search_bound } => {
            let m = load_model(model)?;
            let e = RPElement::parse(&m, element.trim())?;
            let out = match (sharp_probe(&m, &e, *search_bound)?, format) {
                (SharpOutcome::Found(g, h), Format::Text) => format!("found g = {}, h = {}", g.to_literal(&m), h.to_literal(&m)),
                (SharpOutcome::Found(g, h), Format::Structured) => {
                    format!("outcome=found\ng={}\nh={}", g.to_literal(&m), h.to_literal(&m))
                }
                (SharpOutcome::NotFound, Format::Text) => "not found".to_string(),
                (SharpOutcome::NotFound, Format::Structured) => "outcome=not_found".to_string(),
            };
            Ok((out, 0))
        }
        Command::FinChar { phi } => {
            let c = fin_defining_characterization(&ring_formula(phi)?)?;
            let out = match format {
                Format::Text => c.to_string(),
                Format::Structured => c.record(),
            };
            Ok((out, 0))
        }
    }
}

/// Parse `args` (including the program name) and run, writing to the given
/// streams. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
