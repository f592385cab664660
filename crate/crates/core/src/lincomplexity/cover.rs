use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use super::ceil_log2;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Reduced};
use crate::rational::Rational;

/// All subset sums of a generator vector. The empty generator gives `{0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSumSet {
    generator: Vec<Rational>,
    sums: BTreeSet<Rational>,
}

impl PartialSumSet {
    pub fn generator(&self) -> &[Rational] {
        &self.generator
    }

    pub fn sums(&self) -> &BTreeSet<Rational> {
        &self.sums
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.sums.contains(value)
    }

    pub fn is_superset_of<'a>(&self, values: impl IntoIterator<Item = &'a Rational>) -> bool {
        values.into_iter().all(|v| self.sums.contains(v))
    }
}

pub fn partial_sum_set(w: &[Rational], caps: &Caps) -> Result<PartialSumSet> {
    Caps::check("generator length", w.len(), caps.pss_len)?;
    let mut sums = BTreeSet::new();
    sums.insert(Rational::zero());
    for wi in w {
        let shifted: Vec<Rational> = sums.iter().map(|s| s + wi).collect();
        sums.extend(shifted);
    }
    Ok(PartialSumSet {
        generator: w.to_vec(),
        sums,
    })
}

/// Smallest `k` and a witness `w ∈ Q^k` with `pss(w) ⊇ Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub k: usize,
    pub w: Vec<Rational>,
    /// For every target, a 1-based subset of generator indices summing to it.
    pub assignment: BTreeMap<Rational, Vec<usize>>,
}

impl CoverResult {
    /// The subset for `y` as a bit mask over generator positions.
    pub fn subset_mask(&self, y: &Rational) -> Option<u32> {
        self.assignment
            .get(y)
            .map(|s| s.iter().fold(0u32, |m, &i| m | 1 << (i - 1)))
    }

    /// Re-checks that every assigned subset sums to its target.
    pub fn is_consistent(&self) -> bool {
        self.assignment.iter().all(|(y, subset)| {
            let sum: Rational = subset.iter().map(|&i| self.w[i - 1].clone()).sum();
            &sum == y
        })
    }
}

/// Finds the minimum covering dimension by ascending `k`, starting from
/// `⌈log2 |Y ∪ {0}|⌉`.
///
/// For a fixed `k`, targets are processed in order of decreasing magnitude
/// and each is assigned a nonempty subset of generator coordinates; every
/// assignment adds the equation `Σ_{i∈S} w_i = y` to an exact echelon system
/// and branches that make the system inconsistent are cut. Coordinates not
/// yet used by any equation are interchangeable, so a new subset may only
/// extend into them as a prefix. Once the system has full rank `w` is fixed
/// and the remaining targets are simple membership checks in `pss(w)`.
pub fn min_pss_cover(targets: &BTreeSet<Rational>, k_cap: usize, caps: &Caps) -> Result<CoverResult> {
    Caps::check("|Y|", targets.len(), caps.cover_targets)?;
    Caps::check("k_cap", k_cap, caps.cover_k)?;

    let mut nonzero: Vec<Rational> = targets.iter().filter(|y| !y.is_zero()).cloned().collect();
    nonzero.sort_by(|a, b| b.abs().cmp(&a.abs()).then_with(|| a.cmp(b)));

    let lower = ceil_log2(nonzero.len() + 1);
    for k in lower..=k_cap {
        let mut search = CoverSearch::new(&nonzero, k);
        if let Some((w, masks)) = search.run() {
            let mut assignment = BTreeMap::new();
            if targets.iter().any(Zero::is_zero) {
                assignment.insert(Rational::zero(), Vec::new());
            }
            for (y, mask) in nonzero.iter().zip(masks) {
                let subset = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                assignment.insert(y.clone(), subset);
            }
            let result = CoverResult { k, w, assignment };
            debug_assert!(result.is_consistent());
            return Ok(result);
        }
    }
    Err(Error::CoverNotFound { k_cap })
}

/// Subsets of `k` generator coordinates that touch the `used` leading ones
/// freely but extend into the untouched ones only as a prefix, paired with
/// the new `used` count. Untouched coordinates are interchangeable, so this
/// keeps one representative per permutation class.
pub(super) fn prefix_masks(k: usize, used: usize) -> impl Iterator<Item = (u32, usize)> {
    (0..=k - used).flat_map(move |extend| {
        let fresh = ((1u32 << extend) - 1) << used;
        (0..1u32 << used).map(move |inner| (inner | fresh, used + extend))
    })
}

struct CoverSearch<'a> {
    targets: &'a [Rational],
    k: usize,
    basis: EchelonBasis,
    masks: Vec<u32>,
}

impl<'a> CoverSearch<'a> {
    fn new(targets: &'a [Rational], k: usize) -> Self {
        CoverSearch {
            targets,
            k,
            basis: EchelonBasis::new(k),
            masks: Vec::with_capacity(targets.len()),
        }
    }

    fn run(&mut self) -> Option<(Vec<Rational>, Vec<u32>)> {
        if self.targets.is_empty() {
            return Some((Vec::new(), Vec::new()));
        }
        self.descend(0, 0)
    }

    /// `used` counts the leading coordinates touched by earlier subsets.
    fn descend(&mut self, idx: usize, used: usize) -> Option<(Vec<Rational>, Vec<u32>)> {
        if idx == self.targets.len() {
            return Some((self.basis.solve(), self.masks.clone()));
        }
        if self.basis.rank() == self.k {
            return self.complete_fixed(idx);
        }
        let y = &self.targets[idx];
        for (mask, next_used) in prefix_masks(self.k, used) {
            if mask == 0 {
                continue;
            }
            let row = (0..self.k)
                .map(|i| Rational::from_integer(i64::from(mask >> i & 1).into()))
                .collect();
            let pushed = match self.basis.reduce(row, y.clone()) {
                Reduced::Inconsistent => continue,
                Reduced::Consistent => false,
                Reduced::Independent(r) => {
                    self.basis.push(r);
                    true
                }
            };
            self.masks.push(mask);
            let found = self.descend(idx + 1, next_used);
            self.masks.pop();
            if pushed {
                self.basis.pop();
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// With `w` determined, checks the remaining targets against `pss(w)`.
    fn complete_fixed(&self, idx: usize) -> Option<(Vec<Rational>, Vec<u32>)> {
        let w = self.basis.solve();
        let mut first_subset: HashMap<Rational, u32> = HashMap::new();
        let mut sums = vec![Rational::zero(); 1 << self.k];
        for mask in 1..(1u32 << self.k) {
            let low = mask.trailing_zeros() as usize;
            sums[mask as usize] = &sums[(mask & (mask - 1)) as usize] + &w[low];
            first_subset.entry(sums[mask as usize].clone()).or_insert(mask);
        }
        let mut masks = self.masks.clone();
        for y in &self.targets[idx..] {
            masks.push(*first_subset.get(y)?);
        }
        Some((w, masks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn set(values: &[i64]) -> BTreeSet<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn partial_sums() {
        let caps = Caps::default();
        assert_eq!(partial_sum_set(&[], &caps).unwrap().sums(), &set(&[0]));
        assert_eq!(
            partial_sum_set(&ints(&[1, -2]), &caps).unwrap().sums(),
            &set(&[0, 1, -2, -1])
        );
        assert_eq!(partial_sum_set(&ints(&[1, 1]), &caps).unwrap().sums(), &set(&[0, 1, 2]));
        let long = vec![int(1); 25];
        assert!(matches!(partial_sum_set(&long, &caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn cover_examples() {
        let caps = Caps::default();
        let zero = min_pss_cover(&set(&[0]), 8, &caps).unwrap();
        assert_eq!(zero.k, 0);
        assert!(zero.w.is_empty());

        let evens = min_pss_cover(&set(&[0, 2, 4, 6]), 8, &caps).unwrap();
        assert_eq!(evens.k, 2);
        assert_eq!(evens.w, ints(&[4, 2]));
        assert!(evens.is_consistent());
        assert!(partial_sum_set(&evens.w, &caps)
            .unwrap()
            .is_superset_of(&set(&[0, 2, 4, 6])));

        let single = min_pss_cover(&set(&[5]), 8, &caps).unwrap();
        assert_eq!((single.k, single.w.clone()), (1, ints(&[5])));
    }

    #[test]
    fn cover_needs_full_dimension_without_relations() {
        let caps = Caps::default();
        let r = min_pss_cover(&set(&[1, 2, 4]), 8, &caps).unwrap();
        assert_eq!(r.k, 3);
        let r = min_pss_cover(&set(&[1, 2, 3]), 8, &caps).unwrap();
        assert_eq!(r.k, 2);
    }

    #[test]
    fn cover_errors() {
        let caps = Caps::default();
        assert!(matches!(
            min_pss_cover(&set(&[1, 2, 4]), 2, &caps),
            Err(Error::CoverNotFound { k_cap: 2 })
        ));
        assert!(matches!(
            min_pss_cover(&set(&(1..=11).collect::<Vec<_>>()), 8, &caps),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            min_pss_cover(&set(&[1]), 9, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
