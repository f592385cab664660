//! Linearization complexities.
//!
//! `lc_M` is read off the multilinear form. `lc_B` is bounded above by the
//! smallest vector whose partial sums cover the range of the nonlinear part
//! and decided exactly on small arities. `lc_C` is found by an exact
//! minimum-support search over signed products.

mod boolean;
mod cover;
mod signed;

pub use boolean::{lc_boolean, BooleanCover};
pub use cover::{min_pss_cover, partial_sum_set, CoverResult, PartialSumSet};
pub use signed::{lc_signed_products_exact, LcSearchBudget, SignedProductSearch};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pbf::{interpolate_table, MultilinearPoly};
use crate::rational::Rational;

/// `lc_M(f)`: the number of monomials of degree at least 2.
pub fn lc_monomial(poly: &MultilinearPoly) -> usize {
    poly.monomial_count_deg2plus()
}

/// `2^n - n - 1`, the number of monomials of degree at least 2 on `n`
/// variables and hence an upper bound on every `lc_G` with `M ⊆ G`.
pub fn trivial_upper_bound(n: usize) -> Result<u64> {
    if n == 0 || n > 63 {
        return Err(Error::InvalidArgument(format!("n must be in 1..=63, got {n}")));
    }
    Ok((1u64 << n) - n as u64 - 1)
}

/// Outcome of [`random_table_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomCheck {
    pub samples: usize,
    /// Samples with `lc_M` equal to the trivial bound.
    pub at_bound: usize,
    /// Largest `lc_M` seen.
    pub max_lc: usize,
    pub bound: u64,
}

/// Interpolates `samples` random truth tables on `n` variables, with entries
/// `p/q` for `|p| ≤ 10^9` and `1 ≤ q ≤ 10^6`, drawn from a ChaCha8 stream
/// seeded with `seed`, and tallies their `lc_M` against `2^n - n - 1`.
pub fn random_table_check(n: usize, samples: usize, seed: u64, caps: &Caps) -> Result<RandomCheck> {
    Caps::check("arity", n, caps.enumeration)?;
    let bound = trivial_upper_bound(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut at_bound = 0;
    let mut max_lc = 0;
    for _ in 0..samples {
        let table = (0..1u64 << n)
            .map(|_| {
                let p: i64 = rng.gen_range(-1_000_000_000..=1_000_000_000);
                let q: i64 = rng.gen_range(1..=1_000_000);
                Rational::new(p.into(), q.into())
            })
            .collect();
        let lc = lc_monomial(&interpolate_table(n, table, caps)?);
        at_bound += usize::from(lc as u64 == bound);
        max_lc = max_lc.max(lc);
    }
    Ok(RandomCheck {
        samples,
        at_bound,
        max_lc,
        bound,
    })
}

/// `⌈log2 m⌉`, the fewest generators whose partial sums can take `m` values.
pub(crate) fn ceil_log2(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}
