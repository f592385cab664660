use std::fmt;

use crate::error::{Error, Result};

/// A vertex `x ∈ {0,1}^n`. Position `i` holds `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointAssignment {
    bits: Vec<bool>,
}

impl PointAssignment {
    pub fn new(bits: Vec<bool>) -> Self {
        PointAssignment { bits }
    }

    pub fn zeros(n: usize) -> Self {
        PointAssignment { bits: vec![false; n] }
    }

    /// Bit `i` of `mask` becomes `x_{i+1}`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        PointAssignment {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// Parses a string of `0`/`1` characters, `x_1` first.
    pub fn parse(text: &str) -> Result<Self> {
        text.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("not a 0/1 string: `{text}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PointAssignment::new)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Value of `x_i` for a 1-based index.
    pub fn get(&self, index: usize) -> bool {
        self.bits[index - 1]
    }

    /// Inverse of [`PointAssignment::from_mask`]. Only meaningful for `n ≤ 64`.
    pub fn to_mask(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn check_arity(&self, arity: usize) -> Result<()> {
        if self.bits.len() == arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: arity,
                actual: self.bits.len(),
            })
        }
    }
}

impl fmt::Display for PointAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All `2^n` vertices in mask order.
pub fn all_points(n: usize) -> impl Iterator<Item = PointAssignment> {
    (0..1u64 << n).map(move |m| PointAssignment::from_mask(n, m))
}
