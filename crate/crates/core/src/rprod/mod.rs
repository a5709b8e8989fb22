//! Restricted products of finite connected rings.
//!
//! A model has a tail stalk used at all but finitely many indices and a
//! finite map of exceptional stalks. The product is restricted by a formula
//! `phi(x)` that defines a unital subring in every stalk: an element must
//! satisfy `phi` at all but finitely many indices. Indices are the naturals.

mod axioms;
mod element;
mod sample;
mod sharp;
mod sigma;
mod value;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::boolalg::FinCofSet;
use crate::formula::{parse_ring_formula, ParseError, RingFormula};
use crate::stalk::{is_connected, validate_restricting_formula, CompiledFormula, Elem, FiniteRing, RingSpec, StalkError};

pub use axioms::{check_axioms, AxiomCheck, AxiomReport, CheckOptions};
pub use element::{RPElement, RPEnv};
pub use sample::{random_atomic_formula, random_element, random_ring_formula};
pub use sharp::{fin_defining_characterization, is_polynomial_identity, sharp_probe, sharp_value, FinCharacterization, SharpOutcome};
pub use sigma::{pi1_decide, sigma1_decide, SigmaLimits};
pub use value::{boolean_value, boolean_value_args, patch_witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RprodError {
    #[error("stalk {stalk}: {source}")]
    Stalk { stalk: String, source: StalkError },
    #[error("stalk {0} is not connected")]
    NotConnected(String),
    #[error("phi does not define a unital subring of {stalk}: {violation}")]
    NotUnitalSubring { stalk: String, violation: String },
    #[error("restricting formula must have exactly one free variable, found {0:?}")]
    PhiArity(Vec<String>),
    #[error("cannot parse phi: {0}")]
    PhiParse(ParseError),
    #[error("model config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("default {0} does not satisfy phi in the tail")]
    DefaultViolatesPhi(String),
    #[error("bad value at index {index}: {message}")]
    BadCarrier { index: u64, message: String },
    #[error("malformed element literal `{0}`")]
    BadLiteral(String),
    #[error("elements belong to different models")]
    ModelMismatch,
    #[error("formula has free variables {expected:?} but {given} arguments were given")]
    Arity { expected: Vec<String>, given: usize },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("not a {expected} sentence: {reason}")]
    Shape { expected: &'static str, reason: String },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("witness premise violated: {0} is not finite")]
    PremiseViolated(FinCofSet),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

static NEXT_MODEL_ID: AtomicU64 = AtomicU64::new(1);

/// A stalk together with the elements satisfying `phi` in it.
#[derive(Clone, Debug)]
pub struct Stalk {
    pub spec: RingSpec,
    pub ring: FiniteRing,
    pub phi_set: Vec<Elem>,
}

impl Stalk {
    fn new(spec: RingSpec, phi: &RingFormula) -> Result<Self, RprodError> {
        let label = spec.to_string();
        let ring = spec.build().map_err(|source| RprodError::Stalk { stalk: label.clone(), source })?;
        if !is_connected(&ring) {
            return Err(RprodError::NotConnected(label));
        }
        let phi_set = validate_restricting_formula(&ring, phi).map_err(|e| match e {
            StalkError::NotUnitalSubring(violation) => RprodError::NotUnitalSubring { stalk: label.clone(), violation },
            source => RprodError::Stalk { stalk: label.clone(), source },
        })?;
        Ok(Stalk { spec, ring, phi_set })
    }

    pub fn satisfies_phi(&self, e: Elem) -> bool {
        self.phi_set.contains(&e)
    }
}

/// A restricted product with a uniform tail and finitely many exceptional
/// stalks.
#[derive(Clone, Debug)]
pub struct RPModel {
    id: u64,
    phi: RingFormula,
    phi_var: String,
    tail: Stalk,
    exceptional: BTreeMap<u64, Stalk>,
}

impl RPModel {
    pub fn new(tail: RingSpec, phi: RingFormula, exceptional: BTreeMap<u64, RingSpec>) -> Result<Self, RprodError> {
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        if free.len() != 1 {
            return Err(RprodError::PhiArity(free));
        }
        let tail = Stalk::new(tail, &phi)?;
        let exceptional = exceptional
            .into_iter()
            .map(|(i, spec)| Ok((i, Stalk::new(spec, &phi)?)))
            .collect::<Result<_, RprodError>>()?;
        Ok(RPModel {
            id: NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed),
            phi,
            phi_var: free.into_iter().next().expect("one free variable"),
            tail,
            exceptional,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn phi(&self) -> &RingFormula {
        &self.phi
    }

    /// The free variable of `phi`.
    pub fn phi_var(&self) -> &str {
        &self.phi_var
    }

    /// `phi` with its free variable renamed to `var`.
    pub fn phi_at(&self, var: &str) -> RingFormula {
        self.phi.substitute(&self.phi_var, &crate::formula::RingTerm::Var(var.to_string()))
    }

    pub fn tail(&self) -> &Stalk {
        &self.tail
    }

    pub fn exceptional(&self) -> &BTreeMap<u64, Stalk> {
        &self.exceptional
    }

    pub fn stalk(&self, i: u64) -> &Stalk {
        self.exceptional.get(&i).unwrap_or(&self.tail)
    }

    pub fn is_exceptional(&self, i: u64) -> bool {
        self.exceptional.contains_key(&i)
    }

    /// Distinct stalks in a fixed order: the tail, then exceptional stalks by
    /// index.
    pub fn stalks(&self) -> impl Iterator<Item = &Stalk> {
        std::iter::once(&self.tail).chain(self.exceptional.values())
    }

    pub(crate) fn compile(&self, f: &RingFormula, vars: &[String]) -> Result<CompiledFormula, RprodError> {
        CompiledFormula::compile(f, vars).map_err(|e| match e {
            StalkError::UnboundVariable(v) => RprodError::UnboundVariable(v),
            other => RprodError::Stalk { stalk: "formula".into(), source: other },
        })
    }

    /// Parse a model description:
    ///
    /// ```text
    /// tail = gf4
    /// phi = "x*x = x"
    /// exception 0 = zmod(2)
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_config(text: &str) -> Result<Self, RprodError> {
        let mut tail = None;
        let mut phi = None;
        let mut exceptional = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| RprodError::Config { line: n + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let ring = |v: &str| v.parse::<RingSpec>().map_err(|e| err(e.to_string()));
            if key == "tail" {
                tail = Some(ring(value)?);
            } else if key == "phi" {
                let text = value
                    .strip_prefix('"')
                    .and_then(|v| v.strip_suffix('"'))
                    .ok_or_else(|| err("phi must be a quoted formula".into()))?;
                phi = Some(parse_ring_formula(text).map_err(RprodError::PhiParse)?);
            } else if let Some(index) = key.strip_prefix("exception") {
                let index: u64 = index.trim().parse().map_err(|_| err(format!("bad exception index `{}`", index.trim())))?;
                if exceptional.insert(index, ring(value)?).is_some() {
                    return Err(err(format!("duplicate exception {index}")));
                }
            } else {
                return Err(err(format!("unknown key `{key}`")));
            }
        }
        let missing = |what: &str| RprodError::Config { line: 0, message: format!("missing `{what}`") };
        RPModel::new(tail.ok_or_else(|| missing("tail"))?, phi.ok_or_else(|| missing("phi"))?, exceptional)
    }
}

impl fmt::Display for RPModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tail = {}", self.tail.spec)?;
        write!(f, "phi = \"{}\"", self.phi)?;
        for (i, s) in &self.exceptional {
            write!(f, "\nexception {i} = {}", s.spec)?;
        }
        Ok(())
    }
}
