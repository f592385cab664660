//! Low-autocorrelation binary sequences.
//!
//! The energy of `s ∈ {-1,+1}^N` is `E(s) = Σ_{d=1}^{N-1} C_d(s)²` with
//! `C_d(s) = Σ_{i=1}^{N-d} s_i s_{i+d}`. Substituting `s = 2x - 1` gives a
//! degree-4 pseudo-Boolean function `f_bern`.

mod models;
mod solve;
mod table;

use std::fmt;
use std::str::FromStr;

pub use models::{indicator_only_ip, standard_ip, value_indicator_ip, LabsInstance, PairVarMode};
pub use solve::{exhaustive_solve, LabsResult};
pub use table::{render_csv, render_table, table_harness, TableOptions, TableRow, CSV_HEADER};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pbf::{MultilinearPoly, TermKey};
use crate::rational::int;

/// A `±1` sequence, written as a `+`/`-` string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinSequence {
    spins: Vec<i8>,
}

impl SpinSequence {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::InvalidArgument("empty spin sequence".into()));
        }
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!("spin {bad} is not ±1")));
        }
        Ok(SpinSequence { spins })
    }

    /// `s_i = 2x_i - 1`; bit `i` of `mask` is `x_{i+1}`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        SpinSequence {
            spins: (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// The inverse of [`SpinSequence::from_mask`].
    pub fn to_mask(&self) -> u64 {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn negated(&self) -> Self {
        SpinSequence {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        SpinSequence {
            spins: self.spins.iter().rev().copied().collect(),
        }
    }

    /// `C_d` for `d = 1..N-1`.
    pub fn correlations(&self) -> Vec<i64> {
        let n = self.spins.len();
        (1..n)
            .map(|d| (0..n - d).map(|i| i64::from(self.spins[i] * self.spins[i + d])).sum())
            .collect()
    }
}

impl FromStr for SpinSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spins = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidArgument(format!("bad spin symbol `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        SpinSequence::new(spins)
    }
}

impl fmt::Display for SpinSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.spins {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

pub fn energy(s: &SpinSequence) -> i64 {
    s.correlations().iter().map(|c| c * c).sum()
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("N must be at least 3, got {n}")));
    }
    Ok(())
}

/// `C_d(2x - 1) = Σ_i (4x_i x_{i+d} - 2x_i - 2x_{i+d} + 1)` as a polynomial.
pub(crate) fn correlation_poly(n: usize, d: usize) -> MultilinearPoly {
    let mut p = MultilinearPoly::zero(n).expect("n >= 1");
    for i in 0..n - d {
        let (a, b) = (1u64 << i, 1u64 << (i + d));
        p.add_term(TermKey::from_mask(a | b), int(4)).expect("in range");
        p.add_term(TermKey::from_mask(a), int(-2)).expect("in range");
        p.add_term(TermKey::from_mask(b), int(-2)).expect("in range");
        p.add_term(TermKey::CONSTANT, int(1)).expect("in range");
    }
    p
}

/// Exact multilinear expansion of `f_bern_N(x) = E(2x - 1)`.
pub fn f_bern_poly(n: usize, caps: &Caps) -> Result<MultilinearPoly> {
    check_n(n)?;
    Caps::check("LABS expansion N", n, caps.labs_expand)?;
    let mut f = MultilinearPoly::zero(n)?;
    for d in 1..n {
        let c = correlation_poly(n, d);
        f = &f + &(&c * &c);
    }
    Ok(f)
}

/// Number of quadruples `p < q < r < s ≤ N` with `p + s = q + r`, i.e. the
/// degree-4 monomials of `f_bern_N`.
pub fn degree4_count(n: usize) -> u64 {
    let mut count = 0;
    for p in 1..=n {
        for q in p + 1..=n {
            for r in q + 1..=n {
                let s = q + r - p;
                if s <= n {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Which candidate values of `C_d` get an indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LdMode {
    /// `-(N-d), -(N-d)+2, ..., N-d`.
    #[default]
    Parity,
    /// Every integer in `[-(N-d), N-d]`.
    FullRange,
}

impl FromStr for LdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parity" => Ok(LdMode::Parity),
            "full_range" | "full-range" => Ok(LdMode::FullRange),
            other => Err(Error::InvalidArgument(format!("unknown L_d mode `{other}`"))),
        }
    }
}

pub fn l_set(n: usize, d: usize, mode: LdMode) -> Result<Vec<i64>> {
    if d == 0 || d >= n {
        return Err(Error::InvalidArgument(format!(
            "d must be in 1..={}, got {d}",
            n.saturating_sub(1)
        )));
    }
    let m = (n - d) as i64;
    let step = match mode {
        LdMode::Parity => 2,
        LdMode::FullRange => 1,
    };
    Ok((-m..=m).step_by(step).collect())
}

/// `Σ_{d=1}^{N-1} (N+1-d) = N(N+1)/2 - 1` indicator functions suffice to
/// linearize `f_bern_N`; always at most `N²`.
pub fn lcb_upper(n: usize) -> Result<u64> {
    check_n(n)?;
    let n = n as u64;
    let k = n * (n + 1) / 2 - 1;
    debug_assert!(k <= n * n);
    Ok(k)
}
