//! Size classes of minterm cells.
//!
//! With cutoff `M` a cell's size falls into one of `M + 2` classes: exact
//! sizes `0..M`, "finite and at least `M`" (class `M`), and infinite (class
//! `M + 1`). These are the [`SizeDescriptor`]s of `boolalg` indexed densely.

use crate::boolalg::SizeDescriptor;

pub(crate) type Class = u32;

pub(crate) fn class_count(cutoff: u32) -> usize {
    cutoff as usize + 2
}

pub(crate) fn class_of_size(size: Option<u64>, cutoff: u32) -> Class {
    match size {
        None => cutoff + 1,
        Some(s) if s < u64::from(cutoff) => s as Class,
        Some(_) => cutoff,
    }
}

pub(crate) fn descriptor(class: Class, cutoff: u32) -> SizeDescriptor {
    if class < cutoff {
        SizeDescriptor::Exact(u64::from(class))
    } else if class == cutoff {
        SizeDescriptor::AtLeastFinite(u64::from(cutoff))
    } else {
        SizeDescriptor::Infinite
    }
}

/// Size range of a descriptor: finite sizes `[lo, hi)` (`hi = None` means
/// unbounded) or the infinite size.
#[derive(Clone, Copy)]
struct Range {
    lo: u64,
    hi: Option<u64>,
    infinite: bool,
}

fn range(d: SizeDescriptor) -> Range {
    match d {
        SizeDescriptor::Exact(k) => Range { lo: k, hi: Some(k + 1), infinite: false },
        SizeDescriptor::AtLeastFinite(n) => Range { lo: n, hi: None, infinite: false },
        SizeDescriptor::Infinite => Range { lo: 0, hi: None, infinite: true },
    }
}

/// Whether a set described by `parent` can be the disjoint union of sets
/// described by `left` and `right`: some size in `parent` is the sum of a
/// size in `left` and a size in `right`, where an infinite summand makes the
/// sum infinite. Infinite sets split into two infinite parts, so every
/// combination with an infinite summand is realizable by an infinite parent.
pub fn split_feasible(parent: SizeDescriptor, left: SizeDescriptor, right: SizeDescriptor) -> bool {
    let (p, a, b) = (range(parent), range(left), range(right));
    if p.infinite {
        return a.infinite || b.infinite;
    }
    if a.infinite || b.infinite {
        return false;
    }
    let lo = a.lo + b.lo;
    let hi = match (a.hi, b.hi) {
        (Some(x), Some(y)) => Some(x + y - 1),
        _ => None,
    };
    let lo = lo.max(p.lo);
    match (hi, p.hi) {
        (None, None) => true,
        (Some(h), None) | (None, Some(h)) => lo < h,
        (Some(h1), Some(h2)) => lo < h1.min(h2),
    }
}

/// `table[p][a][b]` for parent cutoff `2M` and child cutoff `M`.
pub(crate) fn split_table(cutoff: u32) -> Vec<Vec<Vec<bool>>> {
    let parent_cutoff = 2 * cutoff;
    (0..class_count(parent_cutoff) as Class)
        .map(|p| {
            (0..class_count(cutoff) as Class)
                .map(|a| {
                    (0..class_count(cutoff) as Class)
                        .map(|b| {
                            split_feasible(
                                descriptor(p, parent_cutoff),
                                descriptor(a, cutoff),
                                descriptor(b, cutoff),
                            )
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sizes `0..bound` plus the infinite size.
    fn sizes(bound: u64) -> Vec<Option<u64>> {
        (0..bound).map(Some).chain([None]).collect()
    }

    /// The feasibility relation agrees with explicit sizes: finite sizes up to
    /// a bound well past both cutoffs, plus the infinite size, which splits as
    /// infinite + anything.
    #[test]
    fn split_table_matches_explicit_sizes() {
        for cutoff in 1..=5u32 {
            let table = split_table(cutoff);
            let bound = 4 * u64::from(cutoff) + 4;
            for (p, row) in table.iter().enumerate() {
                for (a, col) in row.iter().enumerate() {
                    for (b, &feasible) in col.iter().enumerate() {
                        let dp = descriptor(p as Class, 2 * cutoff);
                        let da = descriptor(a as Class, cutoff);
                        let db = descriptor(b as Class, cutoff);
                        let witnessed = sizes(bound).iter().any(|&sa| {
                            da.admits(sa)
                                && sizes(bound).iter().any(|&sb| {
                                    db.admits(sb)
                                        && dp.admits(match (sa, sb) {
                                            (Some(x), Some(y)) => Some(x + y),
                                            _ => None,
                                        })
                                })
                        });
                        assert_eq!(feasible, witnessed, "M={cutoff} p={dp:?} a={da:?} b={db:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn same_cutoff_sum_is_lossy() {
        // Parent size 3 is "at least 3" for cutoff 3, yet cannot split as 2 + 2;
        // the projection therefore doubles the cutoff.
        let parent = SizeDescriptor::AtLeastFinite(3);
        assert!(split_feasible(parent, SizeDescriptor::Exact(2), SizeDescriptor::Exact(2)));
        assert!(!SizeDescriptor::Exact(4).admits(Some(3)));
        let table = split_table(3);
        assert!(!table[3][2][2]);
        assert!(table[4][2][2]);
    }
}
