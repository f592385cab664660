use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::point::PointAssignment;
use super::poly::MultilinearPoly;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest arity for which a truth table is materialized.
pub const MAX_TABLE_ARITY: usize = 24;

/// `g_{I,J}(x) = Π_{i∈I} x_i · Π_{j∈J} (1 - x_j)`, a product of possibly
/// complemented variables. Index sets are 1-based and kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedProduct {
    positive: Vec<usize>,
    complemented: Vec<usize>,
}

impl SignedProduct {
    pub fn new(positive: &[usize], complemented: &[usize]) -> Result<Self> {
        let mut positive = positive.to_vec();
        let mut complemented = complemented.to_vec();
        positive.sort_unstable();
        positive.dedup();
        complemented.sort_unstable();
        complemented.dedup();
        if let Some(&zero) = positive.iter().chain(&complemented).find(|&&i| i == 0) {
            return Err(Error::IndexOutOfRange { index: zero, arity: 0 });
        }
        if let Some(&both) = positive.iter().find(|i| complemented.binary_search(i).is_ok()) {
            return Err(Error::OverlappingProduct(both));
        }
        Ok(SignedProduct { positive, complemented })
    }

    /// Builds the product from masks (bit `i` is variable `i+1`).
    pub fn from_masks(positive: u64, complemented: u64) -> Result<Self> {
        let ix = |m: u64| -> Vec<usize> { (0..64).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect() };
        Self::new(&ix(positive), &ix(complemented))
    }

    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    pub fn complemented(&self) -> &[usize] {
        &self.complemented
    }

    pub fn degree(&self) -> usize {
        self.positive.len() + self.complemented.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.complemented.is_empty()
    }

    fn max_index(&self) -> usize {
        self.positive
            .iter()
            .chain(&self.complemented)
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn check_arity(&self, arity: usize) -> Result<()> {
        let max = self.max_index();
        if max > arity {
            Err(Error::IndexOutOfRange { index: max, arity })
        } else {
            Ok(())
        }
    }

    pub fn positive_mask(&self) -> u64 {
        self.positive.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn complemented_mask(&self) -> u64 {
        self.complemented.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn eval(&self, x: &PointAssignment) -> Result<bool> {
        self.check_arity(x.len())?;
        Ok(self.positive.iter().all(|&i| x.get(i)) && self.complemented.iter().all(|&j| !x.get(j)))
    }

    pub fn eval_mask(&self, mask: u64) -> bool {
        let p = self.positive_mask();
        mask & p == p && mask & self.complemented_mask() == 0
    }

    /// Multilinear expansion, `Σ_{K⊆J} (-1)^{|K|} x_{I∪K}`.
    pub fn to_poly(&self, arity: usize) -> Result<MultilinearPoly> {
        self.check_arity(arity)?;
        let one = MultilinearPoly::constant(arity, Rational::one())?;
        let mut acc = MultilinearPoly::monomial(arity, &self.positive, Rational::one())?;
        for &j in &self.complemented {
            acc = &acc * &(&one - &MultilinearPoly::var(arity, j)?);
        }
        Ok(acc)
    }
}

/// Canonical candidate order: degree, then `I`, then `J`, both compared as
/// sorted index lists.
impl Ord for SignedProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.positive.cmp(&other.positive))
            .then_with(|| self.complemented.cmp(&other.complemented))
    }
}

impl PartialOrd for SignedProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_set(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for SignedProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I={} J={}", fmt_set(&self.positive), fmt_set(&self.complemented))
    }
}

/// An explicit truth table; entry `m` is the value at the vertex with mask `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<Self> {
        if arity > MAX_TABLE_ARITY {
            return Err(Error::CapExceeded {
                what: "truth table arity",
                requested: arity,
                limit: MAX_TABLE_ARITY,
            });
        }
        if bits.len() != 1 << arity {
            return Err(Error::InvalidArgument(format!(
                "truth table for arity {arity} needs {} entries, got {}",
                1u64 << arity,
                bits.len()
            )));
        }
        Ok(TruthTable { arity, bits })
    }

    /// Parses a `0`/`1` string of length `2^arity`; whitespace is ignored.
    pub fn parse(arity: usize, text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!("bad truth-table symbol `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(arity, bits)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get_mask(&self, mask: u64) -> bool {
        self.bits[mask as usize]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

type Evaluator = Arc<dyn Fn(&PointAssignment) -> bool + Send + Sync>;

/// A Boolean function `{0,1}^n → {0,1}` given by a pure evaluator.
#[derive(Clone)]
pub struct BooleanFn {
    arity: usize,
    eval: Evaluator,
}

impl BooleanFn {
    pub fn from_fn<F>(arity: usize, f: F) -> Self
    where
        F: Fn(&PointAssignment) -> bool + Send + Sync + 'static,
    {
        BooleanFn {
            arity,
            eval: Arc::new(f),
        }
    }

    pub fn from_table(table: TruthTable) -> Self {
        let arity = table.arity;
        BooleanFn::from_fn(arity, move |x| table.get_mask(x.to_mask()))
    }

    pub fn from_signed_product(product: SignedProduct, arity: usize) -> Result<Self> {
        product.check_arity(arity)?;
        let (p, c) = (product.positive_mask(), product.complemented_mask());
        Ok(BooleanFn::from_fn(arity, move |x| {
            let m = x.to_mask();
            m & p == p && m & c == 0
        }))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, x: &PointAssignment) -> Result<bool> {
        x.check_arity(self.arity)?;
        Ok((self.eval)(x))
    }

    pub fn eval_mask(&self, mask: u64) -> bool {
        (self.eval)(&PointAssignment::from_mask(self.arity, mask))
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        if self.arity > MAX_TABLE_ARITY {
            return Err(Error::CapExceeded {
                what: "truth table arity",
                requested: self.arity,
                limit: MAX_TABLE_ARITY,
            });
        }
        let bits = (0..1u64 << self.arity).map(|m| self.eval_mask(m)).collect();
        TruthTable::new(self.arity, bits)
    }
}

impl fmt::Debug for BooleanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BooleanFn")
            .field("arity", &self.arity)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbf::all_points;
    use crate::rational::int;

    #[test]
    fn signed_product_examples() {
        let empty = SignedProduct::new(&[], &[]).unwrap();
        assert!(empty.eval(&PointAssignment::parse("101").unwrap()).unwrap());

        let g1 = SignedProduct::new(&[], &[1, 2, 3]).unwrap();
        assert!(g1.eval(&PointAssignment::parse("000").unwrap()).unwrap());
        assert!(!g1.eval(&PointAssignment::parse("010").unwrap()).unwrap());

        let mixed = SignedProduct::new(&[1], &[2]).unwrap();
        assert!(!mixed.eval(&PointAssignment::parse("11").unwrap()).unwrap());
        assert!(mixed.eval(&PointAssignment::parse("10").unwrap()).unwrap());

        assert!(matches!(
            mixed.eval(&PointAssignment::parse("1").unwrap()),
            Err(Error::IndexOutOfRange { index: 2, arity: 1 })
        ));
        assert!(matches!(
            SignedProduct::new(&[1, 2], &[2]),
            Err(Error::OverlappingProduct(2))
        ));
    }

    #[test]
    fn expansion_matches_evaluation() {
        let g = SignedProduct::new(&[2], &[1, 3]).unwrap();
        let p = g.to_poly(3).unwrap();
        for x in all_points(3) {
            let expected = int(i64::from(g.eval(&x).unwrap()));
            assert_eq!(p.evaluate(&x).unwrap(), expected, "at {x}");
        }
        assert_eq!(p.num_terms(), 4);
    }

    #[test]
    fn canonical_order() {
        let mut v = [
            SignedProduct::new(&[1, 2], &[]).unwrap(),
            SignedProduct::new(&[2], &[1]).unwrap(),
            SignedProduct::new(&[], &[1, 2]).unwrap(),
            SignedProduct::new(&[1], &[2]).unwrap(),
            SignedProduct::new(&[], &[1, 2, 3]).unwrap(),
        ];
        v.sort();
        let shown: Vec<String> = v.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            shown,
            [
                "I={} J={1,2}",
                "I={1} J={2}",
                "I={1,2} J={}",
                "I={2} J={1}",
                "I={} J={1,2,3}"
            ]
        );
    }

    #[test]
    fn boolean_fn_table_agrees() {
        let xor = BooleanFn::from_fn(2, |x| x.get(1) ^ x.get(2));
        let table = xor.truth_table().unwrap();
        assert_eq!(table.to_string(), "0110");
        let back = BooleanFn::from_table(table.clone());
        for m in 0..4 {
            assert_eq!(back.eval_mask(m), xor.eval_mask(m));
        }
        assert_eq!(TruthTable::parse(2, "01 10").unwrap(), table);
        assert!(TruthTable::parse(2, "011").is_err());
    }
}
