use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{solve_exact, EchelonBasis, Reduced};
use crate::pbf::{LinearizationCertificate, MultilinearPoly, SignedProduct, TermFunction};
use crate::rational::Rational;

/// Limits for the signed-product search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcSearchBudget {
    /// Largest `|I| + |J|` of a candidate product.
    pub max_degree: usize,
    /// Largest support size tried.
    pub max_support: usize,
    pub time_limit: Duration,
}

impl Default for LcSearchBudget {
    fn default() -> Self {
        LcSearchBudget {
            max_degree: 5,
            max_support: 8,
            time_limit: Duration::from_secs(60),
        }
    }
}

impl LcSearchBudget {
    fn validate(&self) -> Result<()> {
        if self.max_degree == 0 || self.max_support == 0 || self.time_limit.is_zero() {
            return Err(Error::InvalidArgument("search budget fields must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SignedProductSearch {
    pub certificate: LinearizationCertificate,
    /// `false` when the budget ran out; the certificate is then only an
    /// upper bound (the monomial linearization).
    pub optimal: bool,
    /// Search nodes visited.
    pub nodes: u64,
}

impl SignedProductSearch {
    pub fn size(&self) -> usize {
        self.certificate.size()
    }
}

/// One signed product with its nonlinear part in the monomial basis.
struct Candidate {
    product: SignedProduct,
    vector: Vec<Rational>,
    /// Target monomials this candidate has a nonzero coefficient on.
    touches: u64,
}

/// Minimum-size linearization over products `g_{I,J}` with
/// `2 ≤ |I| + |J| ≤ max_degree`.
///
/// Works on the nonlinear part: `f̃` must be a linear combination of the
/// nonlinear parts `g̃` of the chosen products. Supports are enumerated by
/// ascending size and, within a size, lexicographically in canonical
/// candidate order, so the first hit is the reported witness. A candidate in
/// the span of those already chosen is skipped (a smaller support would have
/// worked), and a branch is cut when some monomial of `f̃` can no longer be
/// reached by any remaining candidate.
pub fn lc_signed_products_exact(
    poly: &MultilinearPoly,
    budget: &LcSearchBudget,
    caps: &Caps,
) -> Result<SignedProductSearch> {
    budget.validate()?;
    let n = poly.arity();
    Caps::check("arity", n, caps.signed_arity)?;

    let target_poly = poly.nonlinear_part();
    if target_poly.is_zero() {
        return Ok(SignedProductSearch {
            certificate: finish(poly, &[], &[])?,
            optimal: true,
            nodes: 0,
        });
    }

    // Coordinates: all monomials of degree >= 2, in mask order.
    let mut column_of = vec![usize::MAX; 1 << n];
    let mut width = 0;
    for (mask, column) in column_of.iter_mut().enumerate() {
        if mask.count_ones() >= 2 {
            *column = width;
            width += 1;
        }
    }
    let mut target = vec![Rational::zero(); width];
    let mut target_bits = Vec::new();
    for (key, coeff) in target_poly.terms() {
        let col = column_of[key.mask() as usize];
        target[col] = coeff.clone();
        target_bits.push(col);
    }
    let support_bit = |col: usize| -> u64 { target_bits.iter().position(|&c| c == col).map_or(0, |p| 1u64 << p) };
    let all_targets: u64 = if target_bits.len() == 64 {
        u64::MAX
    } else {
        (1u64 << target_bits.len()) - 1
    };

    let candidates = enumerate_candidates(n, budget.max_degree)?
        .into_iter()
        .map(|product| {
            let mut vector = vec![Rational::zero(); width];
            let (p, j) = (product.positive_mask(), product.complemented_mask());
            let mut touches = 0;
            // Σ_{K⊆J} (-1)^{|K|} x_{I∪K}
            let mut sub = j;
            loop {
                let mask = (p | sub) as usize;
                if mask.count_ones() >= 2 {
                    let sign = if sub.count_ones() % 2 == 0 { 1 } else { -1 };
                    vector[column_of[mask]] = Rational::from_integer(sign.into());
                    touches |= support_bit(column_of[mask]);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & j;
            }
            Candidate {
                product,
                vector,
                touches,
            }
        })
        .collect::<Vec<_>>();

    let mut reachable = vec![0u64; candidates.len() + 1];
    for i in (0..candidates.len()).rev() {
        reachable[i] = reachable[i + 1] | candidates[i].touches;
    }

    let mut search = SupportSearch {
        candidates: &candidates,
        reachable: &reachable,
        all_targets,
        target: &target,
        basis: EchelonBasis::new(width),
        chosen: Vec::new(),
        deadline: Instant::now() + budget.time_limit,
        nodes: 0,
        timed_out: false,
    };

    for size in 1..=budget.max_support {
        if let Some((chosen, weights)) = search.run(size) {
            let picked: Vec<&SignedProduct> = chosen.iter().map(|&i| &candidates[i].product).collect();
            return Ok(SignedProductSearch {
                certificate: finish(poly, &picked, &weights)?,
                optimal: true,
                nodes: search.nodes,
            });
        }
        if search.timed_out {
            break;
        }
    }
    Ok(SignedProductSearch {
        certificate: LinearizationCertificate::monomial(poly)?,
        optimal: false,
        nodes: search.nodes,
    })
}

/// All products with `2 ≤ degree ≤ max_degree` on `n` variables, sorted in
/// canonical order.
fn enumerate_candidates(n: usize, max_degree: usize) -> Result<Vec<SignedProduct>> {
    let mut out = Vec::new();
    for support in 0u64..1 << n {
        let degree = support.count_ones() as usize;
        if degree < 2 || degree > max_degree {
            continue;
        }
        let mut positive = support;
        loop {
            out.push(SignedProduct::from_masks(positive, support & !positive)?);
            if positive == 0 {
                break;
            }
            positive = (positive - 1) & support;
        }
    }
    out.sort();
    Ok(out)
}

struct SupportSearch<'a> {
    candidates: &'a [Candidate],
    reachable: &'a [u64],
    all_targets: u64,
    target: &'a [Rational],
    basis: EchelonBasis,
    chosen: Vec<usize>,
    deadline: Instant,
    nodes: u64,
    timed_out: bool,
}

impl SupportSearch<'_> {
    fn run(&mut self, size: usize) -> Option<(Vec<usize>, Vec<Rational>)> {
        self.descend(0, size, 0)
    }

    fn descend(&mut self, start: usize, slots: usize, touched: u64) -> Option<(Vec<usize>, Vec<Rational>)> {
        self.nodes += 1;
        if self.nodes % 4096 == 0 && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        if self.timed_out {
            return None;
        }
        if slots == 0 {
            return self.try_solve();
        }
        let missing = self.all_targets & !touched;
        for idx in start..=self.candidates.len() - slots {
            if missing & !self.reachable[idx] != 0 {
                break;
            }
            let cand = &self.candidates[idx];
            let row = match self.basis.reduce(cand.vector.clone(), Rational::zero()) {
                Reduced::Independent(r) => r,
                _ => continue,
            };
            self.basis.push(row);
            self.chosen.push(idx);
            let found = self.descend(idx + 1, slots - 1, touched | cand.touches);
            self.chosen.pop();
            self.basis.pop();
            if found.is_some() || self.timed_out {
                return found;
            }
        }
        None
    }

    fn try_solve(&self) -> Option<(Vec<usize>, Vec<Rational>)> {
        if !matches!(
            self.basis.reduce(self.target.to_vec(), Rational::zero()),
            Reduced::Consistent
        ) {
            return None;
        }
        // Unknowns are the weights of the chosen candidates; one equation per monomial.
        let s = self.chosen.len();
        let rows: Vec<Vec<Rational>> = (0..self.target.len())
            .map(|col| {
                self.chosen
                    .iter()
                    .map(|&c| self.candidates[c].vector[col].clone())
                    .collect()
            })
            .collect();
        let weights = solve_exact(s, &rows, self.target)?;
        if weights.iter().any(Zero::is_zero) {
            return None;
        }
        Some((self.chosen.clone(), weights))
    }
}

/// Assembles a certificate from chosen products and weights; the affine
/// remainder `f - Σ b_i g_i` supplies `a` and `β`.
fn finish(
    poly: &MultilinearPoly,
    products: &[&SignedProduct],
    weights: &[Rational],
) -> Result<LinearizationCertificate> {
    let n = poly.arity();
    let mut remainder = poly.clone();
    let mut terms = Vec::with_capacity(products.len());
    for (&g, b) in products.iter().zip(weights) {
        remainder = &remainder - &g.to_poly(n)?.scale(b);
        terms.push((TermFunction::Product(g.clone()), b.clone()));
    }
    debug_assert!(remainder.is_affine());
    let (a, beta) = remainder.affine_part();
    LinearizationCertificate::new(a, beta, terms)
}
