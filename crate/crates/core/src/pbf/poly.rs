use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::point::PointAssignment;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest supported arity; term keys are stored as 64-bit masks.
pub const MAX_ARITY: usize = 64;

/// Index set of a monomial, stored as a bit mask (bit `i` is `x_{i+1}`).
///
/// Keys order by degree first and then lexicographically by their sorted
/// index lists, so `{} < {1} < {2} < {1,2} < {1,3} < {2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TermKey(u64);

impl TermKey {
    pub const CONSTANT: TermKey = TermKey(0);

    pub fn from_mask(mask: u64) -> Self {
        TermKey(mask)
    }

    /// Builds a key from 1-based indices. Duplicates collapse (`x_i² = x_i`).
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i == 0 || i > MAX_ARITY {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    arity: MAX_ARITY,
                });
            }
            mask |= 1 << (i - 1);
        }
        Ok(TermKey(mask))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Sorted 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    /// Highest index used, or 0 for the constant term.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn is_satisfied_by(self, mask: u64) -> bool {
        mask & self.0 == self.0
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                // `self` holds the smallest index where the two lists differ.
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.indices().iter().map(|i| format!("x{i}")).collect();
        f.write_str(&names.join("*"))
    }
}

/// Multilinear polynomial with exact rational coefficients.
///
/// This is the canonical form of a pseudo-Boolean function: zero
/// coefficients are never stored, so two polynomials are equal exactly when
/// they represent the same function on `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    arity: usize,
    terms: BTreeMap<TermKey, Rational>,
}

impl MultilinearPoly {
    pub fn zero(arity: usize) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "arity must be in 1..={MAX_ARITY}, got {arity}"
            )));
        }
        Ok(MultilinearPoly {
            arity,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(arity: usize, value: Rational) -> Result<Self> {
        let mut p = Self::zero(arity)?;
        p.add_term(TermKey::CONSTANT, value)?;
        Ok(p)
    }

    /// The polynomial `x_index` (1-based).
    pub fn var(arity: usize, index: usize) -> Result<Self> {
        Self::monomial(arity, &[index], Rational::one())
    }

    pub fn monomial(arity: usize, indices: &[usize], coeff: Rational) -> Result<Self> {
        let mut p = Self::zero(arity)?;
        p.add_term(TermKey::from_indices(indices)?, coeff)?;
        Ok(p)
    }

    /// Builds a polynomial from `(indices, coefficient)` pairs; repeated keys add up.
    pub fn from_terms<I, S>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: AsRef<[usize]>,
    {
        let mut p = Self::zero(arity)?;
        for (indices, coeff) in terms {
            p.add_term(TermKey::from_indices(indices.as_ref())?, coeff)?;
        }
        Ok(p)
    }

    /// Adds `coeff` to the coefficient of `key`, dropping it if it cancels.
    pub fn add_term(&mut self, key: TermKey, coeff: Rational) -> Result<()> {
        if key.max_index() > self.arity {
            return Err(Error::IndexOutOfRange {
                index: key.max_index(),
                arity: self.arity,
            });
        }
        self.add_unchecked(key, coeff);
        Ok(())
    }

    fn add_unchecked(&mut self, key: TermKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (TermKey, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, key: TermKey) -> Rational {
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, x: &PointAssignment) -> Result<Rational> {
        x.check_arity(self.arity)?;
        Ok(self.evaluate_mask(x.to_mask()))
    }

    /// Evaluates at the vertex encoded by `mask` (bit `i` is `x_{i+1}`).
    pub fn evaluate_mask(&self, mask: u64) -> Rational {
        let mut acc = Rational::zero();
        for (key, coeff) in &self.terms {
            if key.is_satisfied_by(mask) {
                acc += coeff;
            }
        }
        acc
    }

    /// Highest degree among stored terms; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.terms.keys().all(|k| k.degree() <= 1)
    }

    /// Number of terms of degree at least 2, which is `lc_M` of the function.
    pub fn monomial_count_deg2plus(&self) -> usize {
        self.terms.keys().filter(|k| k.degree() >= 2).count()
    }

    /// `f(x) - f(0) - Σ (f(e_i) - f(0)) x_i`.
    pub fn nonlinear_part(&self) -> MultilinearPoly {
        let n = self.arity;
        let at_zero = self.evaluate_mask(0);
        let mut out = self.clone();
        out.add_unchecked(TermKey::CONSTANT, -at_zero.clone());
        for i in 0..n {
            let slope = self.evaluate_mask(1 << i) - &at_zero;
            out.add_unchecked(TermKey(1 << i), -slope);
        }
        out
    }

    /// The affine part `(a, β)` that [`nonlinear_part`](Self::nonlinear_part) removes.
    pub fn affine_part(&self) -> (Vec<Rational>, Rational) {
        let beta = self.evaluate_mask(0);
        let a = (0..self.arity).map(|i| self.evaluate_mask(1 << i) - &beta).collect();
        (a, beta)
    }

    pub fn scale(&self, factor: &Rational) -> MultilinearPoly {
        let mut out = MultilinearPoly {
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        for (k, c) in &self.terms {
            out.add_unchecked(*k, c * factor);
        }
        out
    }

    fn check_same_arity(&self, other: &MultilinearPoly) {
        assert_eq!(self.arity, other.arity, "polynomial arithmetic requires equal arities");
    }
}

impl Add for &MultilinearPoly {
    type Output = MultilinearPoly;

    fn add(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        self.check_same_arity(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_unchecked(*k, c.clone());
        }
        out
    }
}

impl Sub for &MultilinearPoly {
    type Output = MultilinearPoly;

    fn sub(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        self.check_same_arity(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_unchecked(*k, -c.clone());
        }
        out
    }
}

impl Neg for &MultilinearPoly {
    type Output = MultilinearPoly;

    fn neg(self) -> MultilinearPoly {
        self.scale(&-Rational::one())
    }
}

/// Product reduced with `x_i² = x_i`.
impl Mul for &MultilinearPoly {
    type Output = MultilinearPoly;

    fn mul(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        self.check_same_arity(rhs);
        let mut out = MultilinearPoly {
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_unchecked(TermKey(ka.0 | kb.0), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultilinearPoly {
    /// Writes the text format: an `n=<arity>` header, then one term per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.arity)?;
        for (key, coeff) in &self.terms {
            let c = crate::rational::format_rational(coeff);
            if key.degree() == 0 {
                writeln!(f, "{c}")?;
            } else {
                writeln!(f, "{c} * {key}")?;
            }
        }
        Ok(())
    }
}

/// The unique multilinear polynomial agreeing with `values` on `{0,1}^n`.
pub fn interpolate<F>(arity: usize, values: F, caps: &Caps) -> Result<MultilinearPoly>
where
    F: Fn(&PointAssignment) -> Rational,
{
    Caps::check("arity", arity, caps.enumeration)?;
    let table = (0..1u64 << arity)
        .map(|m| values(&PointAssignment::from_mask(arity, m)))
        .collect();
    interpolate_table(arity, table, caps)
}

/// Interpolates a table indexed by vertex mask.
///
/// Expanding `Σ_X f(χ(X)) Π_{i∈X} x_i Π_{i∉X} (1-x_i)` gives the coefficient
/// of `Π_{i∈S} x_i` as `Σ_{T⊆S} (-1)^{|S|-|T|} f(χ(T))`, computed here with
/// the in-place subset (Möbius) transform.
pub fn interpolate_table(arity: usize, mut table: Vec<Rational>, caps: &Caps) -> Result<MultilinearPoly> {
    Caps::check("arity", arity, caps.enumeration)?;
    if table.len() != 1 << arity {
        return Err(Error::InvalidArgument(format!(
            "truth table for arity {arity} needs {} entries, got {}",
            1u64 << arity,
            table.len()
        )));
    }
    for bit in 0..arity {
        let step = 1usize << bit;
        for mask in 0..table.len() {
            if mask & step != 0 {
                let lower = table[mask ^ step].clone();
                table[mask] -= lower;
            }
        }
    }
    let mut out = MultilinearPoly::zero(arity)?;
    for (mask, coeff) in table.into_iter().enumerate() {
        out.add_unchecked(TermKey(mask as u64), coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn example() -> MultilinearPoly {
        MultilinearPoly::from_terms(
            3,
            [
                (vec![1, 2], int(1)),
                (vec![1, 3], int(1)),
                (vec![2, 3], int(1)),
                (vec![1, 2, 3], int(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn key_order_is_degree_then_lex() {
        let keys: Vec<TermKey> = [&[2, 3][..], &[1], &[], &[1, 3], &[2], &[1, 2], &[1, 2, 3]]
            .iter()
            .map(|ix| TermKey::from_indices(ix).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        let lists: Vec<Vec<usize>> = sorted.iter().map(|k| k.indices()).collect();
        assert_eq!(
            lists,
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
    }

    #[test]
    fn evaluate_examples() {
        let zero = MultilinearPoly::zero(3).unwrap();
        let p = PointAssignment::parse("101").unwrap();
        assert_eq!(zero.evaluate(&p).unwrap(), int(0));
        let f = example();
        assert_eq!(f.evaluate(&PointAssignment::parse("111").unwrap()).unwrap(), int(2));
        assert_eq!(f.evaluate(&PointAssignment::parse("110").unwrap()).unwrap(), int(1));
        assert!(matches!(
            f.evaluate(&PointAssignment::parse("11").unwrap()),
            Err(Error::ArityMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn interpolate_examples() {
        let caps = Caps::default();
        let and = interpolate(2, |x| int(i64::from(x.get(1) && x.get(2))), &caps).unwrap();
        assert_eq!(and, MultilinearPoly::monomial(2, &[1, 2], int(1)).unwrap());

        let affine = interpolate(1, |x| if x.get(1) { int(7) } else { int(3) }, &caps).unwrap();
        let expected = MultilinearPoly::from_terms(1, [(vec![], int(3)), (vec![1], int(4))]).unwrap();
        assert_eq!(affine, expected);

        let capped = Caps::default().lowered_to(4);
        assert!(matches!(
            interpolate(5, |_| int(0), &capped),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn nonlinear_part_examples() {
        let affine = MultilinearPoly::from_terms(2, [(vec![], int(2)), (vec![2], int(-5))]).unwrap();
        assert!(affine.nonlinear_part().is_zero());

        let x1x2 = MultilinearPoly::monomial(2, &[1, 2], int(1)).unwrap();
        assert_eq!(x1x2.nonlinear_part(), x1x2);

        let bern3 = MultilinearPoly::from_terms(
            3,
            [
                (vec![], int(5)),
                (vec![1], int(-4)),
                (vec![3], int(-4)),
                (vec![1, 3], int(8)),
            ],
        )
        .unwrap();
        let tilde = bern3.nonlinear_part();
        assert_eq!(tilde, MultilinearPoly::monomial(3, &[1, 3], int(8)).unwrap());
        assert_eq!(tilde.evaluate_mask(0b001), int(0));
        assert_eq!(tilde.evaluate_mask(0b100), int(0));
    }

    #[test]
    fn counts() {
        let f = example();
        assert_eq!(f.monomial_count_deg2plus(), 4);
        assert_eq!(f.degree(), 3);
        assert!(!f.is_affine());
        let affine = MultilinearPoly::from_terms(3, [(vec![1], int(1)), (vec![], int(-1))]).unwrap();
        assert_eq!(affine.monomial_count_deg2plus(), 0);
        assert!(affine.is_affine());
    }

    #[test]
    fn multiplication_is_multilinear() {
        let x1 = MultilinearPoly::var(2, 1).unwrap();
        let sq = &x1 * &x1;
        assert_eq!(sq, x1);
        let one = MultilinearPoly::constant(2, int(1)).unwrap();
        let x2 = MultilinearPoly::var(2, 2).unwrap();
        let prod = &(&one - &x1) * &(&one - &x2);
        assert_eq!(prod.num_terms(), 4);
        assert_eq!(prod.evaluate_mask(0), int(1));
        assert_eq!(prod.evaluate_mask(0b11), int(0));
    }

    #[test]
    fn rejects_out_of_range_terms() {
        let mut p = MultilinearPoly::zero(2).unwrap();
        assert!(matches!(
            p.add_term(TermKey::from_indices(&[3]).unwrap(), int(1)),
            Err(Error::IndexOutOfRange { index: 3, arity: 2 })
        ));
        assert!(MultilinearPoly::zero(0).is_err());
    }
}
