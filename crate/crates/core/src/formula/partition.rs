use super::{Formula, RingFormula};

/// A finite sequence of ring formulas over a shared variable context that is
/// meant to be a partition: the disjunction is valid and the cells are
/// pairwise inconsistent. The invariant is checked semantically on finite
/// stalks (see `stalk::check_partition`), not by a prover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub cells: Vec<RingFormula>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// All `2^l` sign patterns `±f_1 & ... & ±f_l`, positive before negated,
/// lexicographically in the order of `fs`. For `l = 0` the single cell is
/// `0 = 0`.
pub fn sign_partition(fs: &[RingFormula]) -> Partition {
    if fs.is_empty() {
        return Partition { cells: vec![RingFormula::truth()] };
    }
    let l = fs.len();
    let cells = (0..1usize << l)
        .map(|pattern| {
            let lits = fs.iter().enumerate().map(|(i, f)| {
                // Bit (l - 1 - i) set means f_i is negated.
                if pattern >> (l - 1 - i) & 1 == 1 {
                    Formula::not(f.clone())
                } else {
                    f.clone()
                }
            });
            Formula::conjoin(lits).expect("l > 0")
        })
        .collect();
    Partition { cells }
}
