//! Exact incremental Gaussian elimination.

use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    pivot: usize,
}

/// Outcome of reducing an equation against the current basis.
#[derive(Debug)]
pub(crate) enum Reduced {
    /// Adds a new pivot; pass it to [`EchelonBasis::push`].
    Independent(PendingRow),
    /// Implied by the basis.
    Consistent,
    /// Contradicts the basis.
    Inconsistent,
}

#[derive(Debug)]
pub(crate) struct PendingRow(Row);

/// Row-echelon system of linear equations supporting stack-like push/pop,
/// so depth-first searches can add and retract equations cheaply.
///
/// Each stored row is reduced against all earlier rows and scaled to a unit
/// pivot.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    width: usize,
    rows: Vec<Row>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut coeffs: Vec<Rational>, mut rhs: Rational) -> Reduced {
        debug_assert_eq!(coeffs.len(), self.width);
        for row in &self.rows {
            let factor = coeffs[row.pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (c, r) in coeffs.iter_mut().zip(&row.coeffs) {
                if !r.is_zero() {
                    *c -= &factor * r;
                }
            }
            rhs -= &factor * &row.rhs;
        }
        match coeffs.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                let scale = Rational::one() / &coeffs[pivot];
                if !scale.is_one() {
                    for c in coeffs.iter_mut() {
                        *c *= &scale;
                    }
                    rhs *= &scale;
                }
                Reduced::Independent(PendingRow(Row { coeffs, rhs, pivot }))
            }
            None if rhs.is_zero() => Reduced::Consistent,
            None => Reduced::Inconsistent,
        }
    }

    pub fn push(&mut self, row: PendingRow) {
        self.rows.push(row.0);
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }

    /// A solution with every free variable set to zero.
    pub fn solve(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.width];
        for row in self.rows.iter().rev() {
            let mut value = row.rhs.clone();
            for (j, c) in row.coeffs.iter().enumerate() {
                if j != row.pivot && !c.is_zero() {
                    value -= c * &x[j];
                }
            }
            x[row.pivot] = value;
        }
        x
    }
}

/// Solves `rows · x = rhs` exactly; free variables are set to zero.
pub(crate) fn solve_exact(width: usize, rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let mut basis = EchelonBasis::new(width);
    for (row, b) in rows.iter().zip(rhs) {
        match basis.reduce(row.clone(), b.clone()) {
            Reduced::Independent(r) => basis.push(r),
            Reduced::Consistent => {}
            Reduced::Inconsistent => return None,
        }
    }
    Some(basis.solve())
}
