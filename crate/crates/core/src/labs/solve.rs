use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{check_n, SpinSequence};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Free spins fixed per work chunk; the chunking is independent of the
/// worker count so results do not depend on it.
const PREFIX_BITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabsResult {
    pub optimum: i64,
    /// Lexicographically smallest optimal sequence with `s_1 = +`, `+ < -`.
    pub witness: SpinSequence,
    /// Sequences evaluated, `2^(N-1)`.
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Best `(energy, key)` in one chunk. `key` orders sequences
/// lexicographically: bit `N-1-i` is set iff `s_{i+1} = -1`.
fn solve_chunk(n: usize, prefix_bits: usize, prefix: u64) -> (i64, u64) {
    let mut s = vec![1i32; n];
    let mut key = 0u64;
    for b in 0..prefix_bits {
        if prefix >> b & 1 == 1 {
            s[1 + b] = -1;
            key |= 1 << (n - 2 - b);
        }
    }
    let mut c: Vec<i32> = (1..n).map(|d| (0..n - d).map(|i| s[i] * s[i + d]).sum()).collect();
    let energy = |c: &[i32]| -> i64 { c.iter().map(|&v| i64::from(v) * i64::from(v)).sum() };

    let mut best = (energy(&c), key);
    let free_start = 1 + prefix_bits;
    let free = n - free_start;
    for step in 1u64..1 << free {
        let k = free_start + step.trailing_zeros() as usize;
        let old = s[k];
        for d in 1..n {
            let mut around = 0;
            if k + d < n {
                around += s[k + d];
            }
            if k >= d {
                around += s[k - d];
            }
            c[d - 1] -= 2 * old * around;
        }
        s[k] = -old;
        key ^= 1 << (n - 1 - k);
        let e = energy(&c);
        if e < best.0 || (e == best.0 && key < best.1) {
            best = (e, key);
        }
    }
    best
}

/// Exact LABS optimum by enumerating all sequences with `s_1 = +1`.
///
/// The remaining spins are split into `2^p` chunks by their first `p` spins;
/// each chunk walks the rest in Gray-code order, updating every `C_d` in
/// `O(1)` per flipped spin. Chunks run on `workers` threads and are combined
/// by `(energy, lexicographic witness)`.
pub fn exhaustive_solve(n: usize, workers: usize, caps: &Caps) -> Result<LabsResult> {
    check_n(n)?;
    Caps::check("exhaustive N", n, caps.labs_exhaustive)?;
    if workers == 0 {
        return Err(Error::InvalidArgument("workers must be positive".into()));
    }
    let start = Instant::now();
    let prefix_bits = PREFIX_BITS.min(n - 1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?;
    let (optimum, key) = pool.install(|| {
        (0..1u64 << prefix_bits)
            .into_par_iter()
            .map(|prefix| solve_chunk(n, prefix_bits, prefix))
            .min()
            .expect("at least one chunk")
    });
    let spins = (0..n)
        .map(|i| if key >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
        .collect();
    let witness = SpinSequence::new(spins)?;
    debug_assert_eq!(super::energy(&witness), optimum);
    Ok(LabsResult {
        optimum,
        witness,
        nodes: 1 << (n - 1),
        elapsed: start.elapsed(),
    })
}
