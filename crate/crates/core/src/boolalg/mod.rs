//! The algebra of finite and cofinite subsets of the naturals with `Fin`
//! interpreted as the ideal of finite sets.
//!
//! Boolean values of eventually-default elements of a restricted product
//! always land here. Quantifiers of the Boolean language range over the full
//! power set, so witnesses for them may leave this algebra; see
//! [`PeriodicSet`] for the larger algebra used by the reference oracle.

mod periodic;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::BoolTerm;

pub use periodic::PeriodicSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolAlgError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("malformed set literal `{0}` (expected `{{1,2}}` or `co{{1,2}}`)")]
    BadLiteral(String),
}

/// A finite set (`support`) or the complement of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinCofSet {
    support: BTreeSet<u64>,
    cofinite: bool,
}

impl FinCofSet {
    pub fn zero() -> Self {
        FinCofSet::default()
    }

    pub fn one() -> Self {
        FinCofSet { support: BTreeSet::new(), cofinite: true }
    }

    pub fn finite(support: impl IntoIterator<Item = u64>) -> Self {
        FinCofSet { support: support.into_iter().collect(), cofinite: false }
    }

    /// The complement of `support`.
    pub fn cofinite(support: impl IntoIterator<Item = u64>) -> Self {
        FinCofSet { support: support.into_iter().collect(), cofinite: true }
    }

    pub fn singleton(i: u64) -> Self {
        Self::finite([i])
    }

    pub fn support(&self) -> &BTreeSet<u64> {
        &self.support
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn contains(&self, i: u64) -> bool {
        self.support.contains(&i) != self.cofinite
    }

    pub fn is_zero(&self) -> bool {
        !self.cofinite && self.support.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.cofinite && self.support.is_empty()
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<u64> {
        (!self.cofinite).then_some(self.support.len() as u64)
    }

    pub fn complement(&self) -> Self {
        FinCofSet { support: self.support.clone(), cofinite: !self.cofinite }
    }

    pub fn meet(&self, other: &Self) -> Self {
        match (self.cofinite, other.cofinite) {
            (false, false) => Self::finite(self.support.intersection(&other.support).copied()),
            (false, true) => Self::finite(self.support.difference(&other.support).copied()),
            (true, false) => Self::finite(other.support.difference(&self.support).copied()),
            (true, true) => Self::cofinite(self.support.union(&other.support).copied()),
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        self.complement().meet(&other.complement()).complement()
    }

    pub fn diff(&self, other: &Self) -> Self {
        self.meet(&other.complement())
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.diff(other).is_zero()
    }

    /// The singletons below a finite set, in increasing order.
    pub fn atoms_below(&self) -> Option<Vec<FinCofSet>> {
        (!self.cofinite).then(|| self.support.iter().map(|&i| Self::singleton(i)).collect())
    }
}

impl fmt::Display for FinCofSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cofinite {
            f.write_str("co")?;
        }
        f.write_str("{")?;
        for (k, i) in self.support.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for FinCofSet {
    type Err = BoolAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BoolAlgError::BadLiteral(s.to_string());
        let t = s.trim();
        let (cofinite, rest) = match t.strip_prefix("co") {
            Some(r) => (true, r.trim_start()),
            None => (false, t),
        };
        let inner = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
        let mut support = BTreeSet::new();
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                support.insert(part.trim().parse::<u64>().map_err(|_| bad())?);
            }
        }
        Ok(FinCofSet { support, cofinite })
    }
}

pub type BoolEnv = BTreeMap<String, FinCofSet>;

/// Set-theoretic value of a Boolean term.
pub fn bool_term_eval(t: &BoolTerm, env: &BoolEnv) -> Result<FinCofSet, BoolAlgError> {
    Ok(match t {
        BoolTerm::Var(v) => env.get(v).cloned().ok_or_else(|| BoolAlgError::UnboundVariable(v.clone()))?,
        BoolTerm::Zero => FinCofSet::zero(),
        BoolTerm::One => FinCofSet::one(),
        BoolTerm::Meet(l, r) => bool_term_eval(l, env)?.meet(&bool_term_eval(r, env)?),
        BoolTerm::Join(l, r) => bool_term_eval(l, env)?.join(&bool_term_eval(r, env)?),
        BoolTerm::Complement(x) => bool_term_eval(x, env)?.complement(),
        BoolTerm::Diff(l, r) => bool_term_eval(l, env)?.diff(&bool_term_eval(r, env)?),
    })
}

/// `C_n(s)`: `s` has at least `n` elements.
pub fn count_at_least(s: &FinCofSet, n: u32) -> bool {
    assert!(n >= 1, "C_n requires n >= 1");
    s.size().is_none_or(|k| k >= u64::from(n))
}

pub fn is_fin(s: &FinCofSet) -> bool {
    !s.is_cofinite()
}

/// The size of a set as seen by `C_n` atoms with `n <= cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SizeDescriptor {
    /// Exactly `k < cutoff` atoms.
    Exact(u64),
    /// Finite with at least `cutoff` atoms.
    AtLeastFinite(u64),
    Infinite,
}

impl SizeDescriptor {
    /// Whether a set of `size` elements (`None` = infinite) has this descriptor.
    pub fn admits(&self, size: Option<u64>) -> bool {
        match (self, size) {
            (SizeDescriptor::Exact(k), Some(s)) => *k == s,
            (SizeDescriptor::AtLeastFinite(n), Some(s)) => s >= *n,
            (SizeDescriptor::Infinite, None) => true,
            _ => false,
        }
    }

    /// All descriptors for a cutoff, in increasing size order.
    pub fn all(cutoff: u64) -> Vec<SizeDescriptor> {
        (0..cutoff)
            .map(SizeDescriptor::Exact)
            .chain([SizeDescriptor::AtLeastFinite(cutoff), SizeDescriptor::Infinite])
            .collect()
    }
}

pub fn descriptor_of(s: &FinCofSet, cutoff: u64) -> SizeDescriptor {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    match s.size() {
        None => SizeDescriptor::Infinite,
        Some(k) if k < cutoff => SizeDescriptor::Exact(k),
        Some(_) => SizeDescriptor::AtLeastFinite(cutoff),
    }
}
