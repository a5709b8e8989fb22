use std::collections::BTreeSet;

use super::FinCofSet;

/// An eventually periodic subset of the naturals: a periodic pattern with
/// finitely many membership flips.
///
/// These sets form an atomic Boolean algebra containing the finite/cofinite
/// algebra in which every infinite set splits into two infinite halves, so
/// with `Fin` read as "finite" it satisfies the axioms of `T^fin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSet {
    pattern: Vec<bool>,
    flips: BTreeSet<u64>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PeriodicSet {
    pub fn empty() -> Self {
        PeriodicSet { pattern: vec![false], flips: BTreeSet::new() }
    }

    pub fn full() -> Self {
        PeriodicSet { pattern: vec![true], flips: BTreeSet::new() }
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.pattern[(n % self.period() as u64) as usize] != self.flips.contains(&n)
    }

    pub fn is_finite(&self) -> bool {
        self.pattern.iter().all(|b| !b)
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<u64> {
        self.is_finite().then_some(self.flips.len() as u64)
    }

    pub fn is_empty(&self) -> bool {
        self.size() == Some(0)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let (p, q) = (self.period(), other.period());
        let period = p / gcd(p, q) * q;
        let pattern: Vec<bool> =
            (0..period).map(|r| op(self.pattern[r % p], other.pattern[r % q])).collect();
        let flips = self
            .flips
            .union(&other.flips)
            .copied()
            .filter(|&n| op(self.contains(n), other.contains(n)) != pattern[(n % period as u64) as usize])
            .collect();
        PeriodicSet { pattern, flips }
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn diff(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        PeriodicSet { pattern: self.pattern.iter().map(|b| !b).collect(), flips: self.flips.clone() }
    }

    /// The `k` smallest elements (fewer if the set is smaller).
    pub fn first(&self, k: usize) -> PeriodicSet {
        let mut taken = BTreeSet::new();
        if self.is_finite() {
            taken.extend(self.flips.iter().copied().take(k));
        } else {
            let mut n = 0u64;
            while taken.len() < k {
                if self.contains(n) {
                    taken.insert(n);
                }
                n += 1;
            }
        }
        PeriodicSet { pattern: vec![false], flips: taken }
    }

    /// For an infinite set, an infinite subset whose relative complement is
    /// also infinite: the elements beyond every flip lying in even blocks of
    /// the period. `None` for finite sets.
    pub fn half(&self) -> Option<PeriodicSet> {
        if self.is_finite() {
            return None;
        }
        let p = self.period();
        let beyond = self.flips.iter().next_back().map_or(0, |m| m + 1);
        let start = beyond.div_ceil(p as u64) * p as u64;
        let pattern: Vec<bool> = (0..2 * p).map(|r| r < p && self.pattern[r]).collect();
        let flips = (0..start).filter(|&n| pattern[(n % (2 * p) as u64) as usize]).collect();
        Some(PeriodicSet { pattern, flips })
    }
}

impl From<&FinCofSet> for PeriodicSet {
    fn from(s: &FinCofSet) -> Self {
        PeriodicSet { pattern: vec![s.is_cofinite()], flips: s.support().clone() }
    }
}
