use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::cover::{min_pss_cover, prefix_masks, CoverResult};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Reduced};
use crate::pbf::{LinearizationCertificate, PointAssignment, TermFunction, TruthTable};
use crate::rational::Rational;

/// Search nodes allowed per call of the exact all-Boolean search.
const NODE_BUDGET: u64 = 20_000_000;

/// `lc_B(f)` together with a linearization of that size.
#[derive(Debug, Clone)]
pub struct BooleanCover {
    pub k: usize,
    /// `false` when `k` is only the range-cover upper bound.
    pub exact: bool,
    /// Range `Y` of the nonlinear part.
    pub range: BTreeSet<Rational>,
    /// Smallest `w` with `pss(w) ⊇ Y`, when within the cover caps.
    pub range_cover: Option<CoverResult>,
    pub certificate: LinearizationCertificate,
}

/// Computes `lc_B(f)`, the fewest arbitrary Boolean functions linearizing `f`.
///
/// A cover `pss(w) ⊇ Y` of the range of `f̃` always yields a linearization of
/// size `dim w`, but it need not be optimal: the affine part of a
/// linearization is free, so `f - ℓ` may have a cheaper range for some other
/// affine `ℓ` (`x1x2 + x1x3 + x2x3 - x1x2x3` has `Y = {0,1,2}` yet equals
/// `x1 + x2 + x3 - 1` plus one indicator). For `n ≤ caps.boolean_arity` the
/// sizes below the range cover are therefore decided by an exact search; above
/// that arity the range cover is returned with `exact = false`.
pub fn lc_boolean<F>(f: F, arity: usize, k_cap: usize, caps: &Caps) -> Result<BooleanCover>
where
    F: Fn(&PointAssignment) -> Rational,
{
    Caps::check("arity", arity, caps.enumeration)?;
    Caps::check("k_cap", k_cap, caps.cover_k)?;
    let values: Vec<Rational> = (0..1u64 << arity)
        .map(|m| f(&PointAssignment::from_mask(arity, m)))
        .collect();
    let tilde = nonlinear_values(&values, arity);
    let range: BTreeSet<Rational> = tilde.iter().cloned().collect();

    let range_cover = match min_pss_cover(&range, k_cap, caps) {
        Ok(c) => Some(c),
        Err(Error::CapExceeded { .. } | Error::CoverNotFound { .. }) => None,
        Err(e) => return Err(e),
    };
    let upper = range_cover.as_ref().map_or(k_cap + 1, |c| c.k);

    let mut exact = upper <= 1;
    if !exact && arity <= caps.boolean_arity {
        exact = true;
        for k in 1..upper.min(k_cap + 1) {
            let mut search = ShiftedSearch::new(arity, k, &tilde);
            if let Some(found) = search.descend(0, 0, None) {
                let certificate = found.certificate(&values, arity)?;
                debug_assert_eq!(certificate.size(), k);
                return Ok(BooleanCover {
                    k,
                    exact: true,
                    range,
                    range_cover,
                    certificate,
                });
            }
            if search.exhausted {
                exact = false;
                break;
            }
        }
    }

    let Some(cover) = range_cover else {
        return Err(Error::CoverNotFound { k_cap });
    };
    let certificate = range_certificate(&values, &tilde, &cover, arity)?;
    Ok(BooleanCover {
        k: cover.k,
        exact,
        range,
        range_cover: Some(cover),
        certificate,
    })
}

/// `f̃(x) = f(x) - f(0) - Σ_i (f(e_i) - f(0)) x_i` at every mask.
fn nonlinear_values(values: &[Rational], arity: usize) -> Vec<Rational> {
    let f0 = &values[0];
    let a: Vec<Rational> = (0..arity).map(|i| &values[1 << i] - f0).collect();
    values
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let mut t = v - f0;
            for (i, ai) in a.iter().enumerate() {
                if m >> i & 1 == 1 {
                    t -= ai;
                }
            }
            t
        })
        .collect()
}

/// `g_i(x) = 1` iff generator `i` is in the subset assigned to `f̃(x)`.
fn range_certificate(
    values: &[Rational],
    tilde: &[Rational],
    cover: &CoverResult,
    arity: usize,
) -> Result<LinearizationCertificate> {
    let beta = values[0].clone();
    let a: Vec<Rational> = (0..arity).map(|i| &values[1 << i] - &beta).collect();
    let mut terms = Vec::with_capacity(cover.k);
    for (i, wi) in cover.w.iter().enumerate() {
        if wi.is_zero() {
            continue;
        }
        let bits = tilde
            .iter()
            .map(|y| cover.subset_mask(y).is_some_and(|s| s >> i & 1 == 1))
            .collect();
        terms.push((TermFunction::Table(TruthTable::new(arity, bits)?), wi.clone()));
    }
    LinearizationCertificate::new(a, beta, terms)
}

/// One step of the exact search: choose the generator subset active at a unit
/// vector, or at a point of weight at least 2.
#[derive(Debug, Clone, Copy)]
enum Step {
    Unit(usize),
    Point(usize),
}

/// Decides whether `f̃ = Σ_{i≤k} w_i g̃_i` for Boolean `g_i`.
///
/// Complementing a `g_i` only moves weight into the affine part, so every
/// `g_i(0) = 0` and then `g̃_i(x) = g_i(x) - Σ_{j∈x} g_i(e_j)`. With
/// `U_j = {i : g_i(e_j) = 1}` and `S_x = {i : g_i(x) = 1}` each point `x` of
/// weight ≥ 2 gives the equation `w(S_x) - Σ_{j∈x} w(U_j) = f̃(x)` in `w`
/// alone. Steps are ordered so every point follows the unit vectors it
/// contains; untouched generator coordinates are broken by the prefix rule.
struct ShiftedSearch<'a> {
    k: usize,
    tilde: &'a [Rational],
    steps: Vec<Step>,
    basis: EchelonBasis,
    chosen: Vec<u32>,
    units: Vec<u32>,
    nodes: u64,
    exhausted: bool,
}

struct Fixed {
    w: Vec<Rational>,
    subset_of: HashMap<Rational, u32>,
}

struct ShiftedSolution {
    w: Vec<Rational>,
    /// Subset per mask; index 0 is the origin and always empty.
    subsets: Vec<u32>,
}

impl<'a> ShiftedSearch<'a> {
    fn new(arity: usize, k: usize, tilde: &'a [Rational]) -> Self {
        let mut steps = Vec::with_capacity(tilde.len());
        for j in 0..arity {
            steps.push(Step::Unit(j));
            for low in 0..1usize << j {
                if low != 0 {
                    steps.push(Step::Point(low | 1 << j));
                }
            }
        }
        ShiftedSearch {
            k,
            tilde,
            steps,
            basis: EchelonBasis::new(k),
            chosen: Vec::with_capacity(tilde.len()),
            units: vec![0; arity],
            nodes: 0,
            exhausted: false,
        }
    }

    fn shift(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.units.len())
            .filter(move |j| x >> j & 1 == 1)
            .map(|j| self.units[j] as usize)
    }

    fn descend(&mut self, idx: usize, used: usize, fixed: Option<&Fixed>) -> Option<ShiftedSolution> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.exhausted = true;
        }
        if self.exhausted {
            return None;
        }
        if idx == self.steps.len() {
            return Some(self.solution(fixed));
        }
        match self.steps[idx] {
            Step::Unit(j) => {
                for (mask, next_used) in prefix_masks(self.k, used) {
                    self.units[j] = mask;
                    self.chosen.push(mask);
                    let found = self.descend(idx + 1, next_used, fixed);
                    self.chosen.pop();
                    if found.is_some() || self.exhausted {
                        return found;
                    }
                }
                None
            }
            Step::Point(x) => match fixed {
                Some(fx) => {
                    let mut t = self.tilde[x].clone();
                    for u in self.shift(x).collect::<Vec<_>>() {
                        t += subset_sum(&fx.w, u as u32);
                    }
                    let mask = *fx.subset_of.get(&t)?;
                    self.chosen.push(mask);
                    let found = self.descend(idx + 1, used, fixed);
                    self.chosen.pop();
                    found
                }
                None => self.branch_point(idx, x, used),
            },
        }
    }

    fn branch_point(&mut self, idx: usize, x: usize, used: usize) -> Option<ShiftedSolution> {
        let mut base = vec![0i64; self.k];
        for u in self.shift(x) {
            for (i, b) in base.iter_mut().enumerate() {
                *b -= i64::from(u >> i & 1 == 1);
            }
        }
        for (mask, next_used) in prefix_masks(self.k, used) {
            let row = base
                .iter()
                .enumerate()
                .map(|(i, &b)| Rational::from_integer((b + i64::from(mask >> i & 1)).into()))
                .collect();
            let pushed = match self.basis.reduce(row, self.tilde[x].clone()) {
                Reduced::Inconsistent => continue,
                Reduced::Consistent => false,
                Reduced::Independent(r) => {
                    self.basis.push(r);
                    true
                }
            };
            self.chosen.push(mask);
            let found = if self.basis.rank() == self.k {
                let fixed = self.fix();
                self.descend(idx + 1, next_used, Some(&fixed))
            } else {
                self.descend(idx + 1, next_used, None)
            };
            self.chosen.pop();
            if pushed {
                self.basis.pop();
            }
            if found.is_some() || self.exhausted {
                return found;
            }
        }
        None
    }

    fn fix(&self) -> Fixed {
        let w = self.basis.solve();
        let mut subset_of = HashMap::new();
        for mask in 0..1u32 << self.k {
            subset_of.entry(subset_sum(&w, mask)).or_insert(mask);
        }
        Fixed { w, subset_of }
    }

    fn solution(&self, fixed: Option<&Fixed>) -> ShiftedSolution {
        let w = fixed.map_or_else(|| self.basis.solve(), |f| f.w.clone());
        let mut subsets = vec![0u32; self.tilde.len()];
        for (step, &mask) in self.steps.iter().zip(&self.chosen) {
            match *step {
                Step::Unit(j) => subsets[1 << j] = mask,
                Step::Point(x) => subsets[x] = mask,
            }
        }
        ShiftedSolution { w, subsets }
    }
}

fn subset_sum(w: &[Rational], mask: u32) -> Rational {
    w.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, wi)| wi.clone())
        .sum()
}

impl ShiftedSolution {
    fn certificate(&self, values: &[Rational], arity: usize) -> Result<LinearizationCertificate> {
        let beta = values[0].clone();
        let a = (0..arity)
            .map(|j| &values[1 << j] - &beta - subset_sum(&self.w, self.subsets[1 << j]))
            .collect();
        let mut terms = Vec::new();
        for (i, wi) in self.w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            let bits = self.subsets.iter().map(|s| s >> i & 1 == 1).collect();
            terms.push((TermFunction::Table(TruthTable::new(arity, bits)?), wi.clone()));
        }
        LinearizationCertificate::new(a, beta, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbf::{parse_poly, verify_certificate, MultilinearPoly};
    use crate::rational::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lc_b_of(p: &MultilinearPoly) -> BooleanCover {
        let caps = Caps::default();
        let r = lc_boolean(|x| p.evaluate(x).unwrap(), p.arity(), 8, &caps).unwrap();
        assert!(verify_certificate(|x| p.evaluate(x).unwrap(), p.arity(), &r.certificate, &caps).unwrap());
        assert_eq!(r.certificate.size(), r.k);
        r
    }

    fn lc_b(text: &str) -> BooleanCover {
        lc_b_of(&parse_poly(text).unwrap())
    }

    /// Smallest `k` such that the value vector lies in the span of the
    /// constant, the coordinates and `k` indicator vectors, by trying all
    /// `k`-subsets of truth tables.
    fn span_oracle(values: &[Rational], arity: usize) -> usize {
        let points = 1usize << arity;
        let base: Vec<Vec<Rational>> = std::iter::once(vec![int(1); points])
            .chain((0..arity).map(|j| (0..points).map(|m| int((m >> j & 1) as i64)).collect()))
            .collect();
        let table = |t: usize| -> Vec<Rational> { (0..points).map(|m| int((t >> m & 1) as i64)).collect() };
        let in_span = |cols: &[Vec<Rational>]| -> bool {
            let rows: Vec<Vec<Rational>> = (0..points)
                .map(|m| cols.iter().map(|c| c[m].clone()).collect())
                .collect();
            crate::linalg::solve_exact(cols.len(), &rows, values).is_some()
        };
        for k in 0.. {
            let mut idx: Vec<usize> = (0..k).collect();
            let tables = 1usize << points;
            loop {
                let mut cols = base.clone();
                cols.extend(idx.iter().map(|&t| table(t)));
                if in_span(&cols) {
                    return k;
                }
                // next k-combination of 0..tables
                let mut i = k;
                while i > 0 && idx[i - 1] == tables - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for l in i..k {
                    idx[l] = idx[l - 1] + 1;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn affine_has_zero_complexity() {
        let r = lc_b("n=3\n4\n2 * x1\n-1 * x3\n");
        assert_eq!(r.k, 0);
        assert!(r.exact);
        assert_eq!(r.range, [int(0)].into_iter().collect());
    }

    #[test]
    fn single_product() {
        let r = lc_b("n=2\nx1*x2\n");
        assert_eq!(r.range, [int(0), int(1)].into_iter().collect());
        assert_eq!(r.k, 1);
    }

    #[test]
    fn labs_three() {
        let r = lc_b("n=3\n5\n-4 * x1\n-4 * x3\n8 * x1*x3\n");
        assert_eq!(r.range, [int(0), int(8)].into_iter().collect());
        assert_eq!(r.k, 1);
    }

    #[test]
    fn worked_example_beats_range_cover() {
        let r = lc_b("n=3\nx1*x2\nx1*x3\nx2*x3\n-1 * x1*x2*x3\n");
        assert_eq!(r.range, [int(0), int(1), int(2)].into_iter().collect());
        assert_eq!(r.range_cover.as_ref().unwrap().k, 2);
        assert_eq!(r.k, 1);
        assert!(r.exact);
    }

    #[test]
    fn matches_span_oracle_on_small_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            // Three variables are drawn with at most two indicators so the
            // oracle stops early.
            let arity = if trial < 25 { 2 } else { 3 };
            let values: Vec<Rational> = if arity == 2 {
                (0..4).map(|_| int(rng.gen_range(-2..=2))).collect()
            } else {
                let (t1, t2): (u32, u32) = (rng.gen_range(0..256), rng.gen_range(0..256));
                let (b1, b2) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                let a: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
                (0..8usize)
                    .map(|m| {
                        let lin = a[0] + (0..3).filter(|j| m >> j & 1 == 1).map(|j| a[j + 1]).sum::<i64>();
                        int(lin + b1 * i64::from(t1 >> m & 1) + b2 * i64::from(t2 >> m & 1))
                    })
                    .collect()
            };
            let caps = Caps::default();
            let r = lc_boolean(|x| values[x.to_mask() as usize].clone(), arity, 8, &caps).unwrap();
            assert!(r.exact);
            assert_eq!(r.k, span_oracle(&values, arity), "values {values:?}");
            assert!(
                verify_certificate(|x| values[x.to_mask() as usize].clone(), arity, &r.certificate, &caps).unwrap()
            );
        }
    }

    #[test]
    fn above_exact_arity_reports_bound() {
        let p = parse_poly("n=5\nx1*x2\n").unwrap();
        let r = lc_b_of(&p);
        assert_eq!(r.k, 1);
        assert!(r.exact);
        let p = parse_poly("n=5\nx1*x2\n2 * x3*x4*x5\n").unwrap();
        let r = lc_b_of(&p);
        assert!(!r.exact);
        assert_eq!(r.k, 2);
    }
}
