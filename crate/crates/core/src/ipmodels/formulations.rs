use std::fmt;

use num_traits::{One, Zero};

use super::model::{MilpModel, Sense};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pbf::{BooleanFn, LinearizationCertificate, PointAssignment, SignedProduct, TermFunction};
use crate::rational::{int, Rational};

fn check_linear(a: &[Rational], arity: usize) -> Result<()> {
    if a.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            actual: a.len(),
        });
    }
    Ok(())
}

fn add_x_vars(model: &mut MilpModel, a: &[Rational]) -> Result<Vec<usize>> {
    a.iter()
        .enumerate()
        .map(|(i, ai)| {
            let v = model.add_binary(format!("x{}", i + 1))?;
            model.add_objective(v, ai);
            Ok(v)
        })
        .collect()
}

/// Fortet's formulation of `aᵀx + β + Σ b_t g_{I_t,J_t}(x)`: one binary `f<t>`
/// per product with rows `f ≤ x_i` (`i ∈ I`), `f + x_j ≤ 1` (`j ∈ J`) and
/// `Σ_I x_i - Σ_J x_j - f ≤ |I| - 1`.
pub fn fortet_model(
    a: &[Rational],
    beta: &Rational,
    products: &[(SignedProduct, Rational)],
    arity: usize,
) -> Result<MilpModel> {
    check_linear(a, arity)?;
    let mut model = MilpModel::new("fortet");
    let x = add_x_vars(&mut model, a)?;
    model.add_offset(beta);
    for (t, (g, b)) in products.iter().enumerate() {
        g.check_arity(arity)?;
        if g.degree() == 0 {
            return Err(Error::InvalidArgument(format!("product {} is empty", t + 1)));
        }
        let name = format!("f{}", t + 1);
        let y = model.add_binary(&name)?;
        model.add_objective(y, b);
        for &i in g.positive() {
            model.add_constraint(
                format!("{name}_x{i}"),
                [(y, int(1)), (x[i - 1], int(-1))],
                Sense::Le,
                Rational::zero(),
            )?;
        }
        for &j in g.complemented() {
            model.add_constraint(
                format!("{name}_n{j}"),
                [(y, int(1)), (x[j - 1], int(1))],
                Sense::Le,
                Rational::one(),
            )?;
        }
        let mut terms: Vec<(usize, Rational)> = g.positive().iter().map(|&i| (x[i - 1], int(1))).collect();
        terms.extend(g.complemented().iter().map(|&j| (x[j - 1], int(-1))));
        terms.push((y, int(-1)));
        model.add_constraint(
            format!("{name}_all"),
            terms,
            Sense::Le,
            int(g.positive().len() as i64 - 1),
        )?;
    }
    Ok(model)
}

/// Fortet model of a certificate whose terms are all signed products.
pub fn fortet_from_certificate(cert: &LinearizationCertificate) -> Result<MilpModel> {
    let products = cert
        .terms()
        .iter()
        .map(|(t, b)| match t {
            TermFunction::Product(g) => Ok((g.clone(), b.clone())),
            TermFunction::Table(_) => Err(Error::InvalidArgument(
                "Fortet formulation needs signed-product terms".into(),
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    fortet_model(cert.a(), cert.beta(), &products, cert.arity())
}

fn vertex_label(mask: u64, arity: usize) -> String {
    (0..arity).map(|j| if mask >> j & 1 == 1 { '1' } else { '0' }).collect()
}

/// Terms and right-hand side of the no-good row for vertex `mask`:
/// `Σ_{x̄_j=0} x_j + Σ_{x̄_j=1} (1 - x_j) + y ≥ 1` when `g(x̄) = 1`, with
/// `1 - y` in place of `y` otherwise. Constants are moved to the right.
fn nogood_row(x: &[usize], y: usize, mask: u64, g_value: bool) -> (Vec<(usize, Rational)>, Rational) {
    let ones = mask.count_ones() as i64;
    let mut terms: Vec<(usize, Rational)> = x
        .iter()
        .enumerate()
        .map(|(j, &v)| (v, int(if mask >> j & 1 == 1 { -1 } else { 1 })))
        .collect();
    if g_value {
        terms.push((y, int(1)));
        (terms, int(1 - ones))
    } else {
        terms.push((y, int(-1)));
        (terms, int(-ones))
    }
}

/// The exponential no-good formulation: for each weighted function `(g_i, b_i)`
/// a binary `y<i>` and one row per vertex of the cube forcing `y_i = g_i(x)`.
pub fn nogood_model(
    fns: &[(BooleanFn, Rational)],
    a: &[Rational],
    beta: &Rational,
    arity: usize,
    caps: &Caps,
) -> Result<MilpModel> {
    check_linear(a, arity)?;
    Caps::check("no-good arity", arity, caps.nogood_arity)?;
    let mut model = MilpModel::new("nogood");
    let x = add_x_vars(&mut model, a)?;
    model.add_offset(beta);
    for (i, (g, b)) in fns.iter().enumerate() {
        if g.arity() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                actual: g.arity(),
            });
        }
        let y = model.add_binary(format!("y{}", i + 1))?;
        model.add_objective(y, b);
        for mask in 0..1u64 << arity {
            let (terms, rhs) = nogood_row(&x, y, mask, g.eval_mask(mask));
            model.add_constraint(
                format!("ng{}_{}", i + 1, vertex_label(mask, arity)),
                terms,
                Sense::Ge,
                rhs,
            )?;
        }
    }
    Ok(model)
}

/// A violated no-good row found by [`separate_nogood`].
#[derive(Debug, Clone, PartialEq)]
pub struct NogoodCut {
    pub vertex: PointAssignment,
    /// `g` at the vertex; selects the `y` or `1 - y` form of the row.
    pub g_value: bool,
    /// `1 - lhs` at the separated point.
    pub violation: f64,
}

impl NogoodCut {
    /// The row over the given `x` and `y` variable indices, constants moved
    /// to the right-hand side.
    pub fn row(&self, x: &[usize], y: usize) -> (Vec<(usize, Rational)>, Sense, Rational) {
        let (terms, rhs) = nogood_row(x, y, self.vertex.to_mask(), self.g_value);
        (terms, Sense::Ge, rhs)
    }

    pub fn add_to(&self, model: &mut MilpModel, name: impl Into<String>, x: &[usize], y: usize) -> Result<usize> {
        let (terms, sense, rhs) = self.row(x, y);
        model.add_constraint(name, terms, sense, rhs)
    }
}

impl fmt::Display for NogoodCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, bit) in self.vertex.bits().iter().enumerate() {
            if j > 0 {
                f.write_str(" + ")?;
            }
            if *bit {
                write!(f, "(1 - x{})", j + 1)?;
            } else {
                write!(f, "x{}", j + 1)?;
            }
        }
        if !self.vertex.is_empty() {
            f.write_str(" + ")?;
        }
        f.write_str(if self.g_value { "y" } else { "(1 - y)" })?;
        f.write_str(" >= 1")
    }
}

/// Separates the no-good rows of `g` at a fractional point.
///
/// Rounds `x̂` to the nearest vertex (`≥ 1/2` rounds up), then tests the row of
/// that vertex and of each single-coordinate flip, `n + 1` evaluations of
/// `g` in total. Returns the most violated of these rows, the earliest on
/// ties, or `None` when none is violated by more than `1e-9`.
pub fn separate_nogood(g: &BooleanFn, y: f64, x_hat: &[f64]) -> Result<Option<NogoodCut>> {
    let n = g.arity();
    if x_hat.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            actual: x_hat.len(),
        });
    }
    if !x_hat.iter().chain([&y]).all(|v| (0.0..=1.0).contains(v)) {
        return Err(Error::InvalidArgument("separation point must lie in [0,1]".into()));
    }
    let base: u64 = x_hat
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= 0.5)
        .fold(0, |m, (j, _)| m | 1 << j);

    let mut best: Option<NogoodCut> = None;
    for flip in std::iter::once(None).chain((0..n).map(Some)) {
        let mask = flip.map_or(base, |j| base ^ 1 << j);
        let g_value = g.eval_mask(mask);
        let mut lhs: f64 = x_hat
            .iter()
            .enumerate()
            .map(|(j, &v)| if mask >> j & 1 == 1 { 1.0 - v } else { v })
            .sum();
        lhs += if g_value { y } else { 1.0 - y };
        let violation = 1.0 - lhs;
        if violation > 1e-9 && best.as_ref().is_none_or(|b| violation > b.violation) {
            best = Some(NogoodCut {
                vertex: PointAssignment::from_mask(n, mask),
                g_value,
                violation,
            });
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipmodels::integer_completions;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    fn and2() -> BooleanFn {
        BooleanFn::from_fn(2, |x| x.get(1) && x.get(2))
    }

    #[test]
    fn fortet_single_product() {
        let g = SignedProduct::new(&[1, 2], &[]).unwrap();
        let m = fortet_model(&[int(0), int(0)], &int(0), &[(g, int(1))], 2).unwrap();
        let s = m.stats();
        assert_eq!((s.vars, s.cons, s.nonzeros), (3, 3, 8));
    }

    #[test]
    fn fortet_worked_example_and_empty() {
        let g = SignedProduct::new(&[], &[1, 2, 3]).unwrap();
        let m = fortet_model(&[int(1), int(1), int(1)], &int(-1), &[(g, int(1))], 3).unwrap();
        assert_eq!((m.stats().vars, m.stats().cons), (4, 4));
        let e = fortet_model(&[int(1)], &int(0), &[], 1).unwrap();
        assert_eq!((e.stats().vars, e.stats().cons), (1, 0));
    }

    #[test]
    fn fortet_forces_product_value() {
        let g = SignedProduct::new(&[1, 3], &[2, 4]).unwrap();
        let m = fortet_model(&vec![int(0); 4], &int(0), &[(g.clone(), int(1))], 4).unwrap();
        for mask in 0..16u64 {
            let mut fixed: Vec<Option<i64>> = (0..4).map(|j| Some((mask >> j & 1) as i64)).collect();
            fixed.push(None);
            let sols = integer_completions(&m, &fixed, 10).unwrap();
            assert_eq!(sols.len(), 1);
            assert_eq!(sols[0][4], i64::from(g.eval_mask(mask)));
        }
    }

    #[test]
    fn nogood_one_variable_rows() {
        let id = BooleanFn::from_fn(1, |x| x.get(1));
        let m = nogood_model(&[(id, int(1))], &[int(0)], &int(0), 1, &Caps::default()).unwrap();
        assert_eq!(m.stats().cons, 2);
        let x1 = m.var_index("x1").unwrap();
        let y = m.var_index("y1").unwrap();
        // vertex 0, g = 0: x1 + (1 - y) >= 1
        let c0 = m.constraint("ng1_0").unwrap();
        assert_eq!(c0.terms(), &[(x1, int(1)), (y, int(-1))]);
        assert_eq!(c0.rhs, int(0));
        // vertex 1, g = 1: (1 - x1) + y >= 1
        let c1 = m.constraint("ng1_1").unwrap();
        assert_eq!(c1.terms(), &[(x1, int(-1)), (y, int(1))]);
        assert_eq!(c1.rhs, int(0));
    }

    #[test]
    fn nogood_forces_function_value() {
        let maj = BooleanFn::from_fn(3, |x| (x.get(1) as u8 + x.get(2) as u8 + x.get(3) as u8) >= 2);
        let m = nogood_model(&[(maj.clone(), int(2))], &vec![int(0); 3], &int(0), 3, &Caps::default()).unwrap();
        assert_eq!((m.stats().vars, m.stats().cons), (4, 8));
        for mask in 0..8u64 {
            let mut fixed: Vec<Option<i64>> = (0..3).map(|j| Some((mask >> j & 1) as i64)).collect();
            fixed.push(None);
            let sols = integer_completions(&m, &fixed, 10).unwrap();
            assert_eq!(
                sols,
                vec![{
                    let mut v: Vec<i64> = fixed.iter().take(3).map(|f| f.unwrap()).collect();
                    v.push(i64::from(maj.eval_mask(mask)));
                    v
                }]
            );
        }
        let big = BooleanFn::from_fn(13, |_| true);
        assert!(matches!(
            nogood_model(&[(big, int(1))], &vec![int(0); 13], &int(0), 13, &Caps::default()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn separation_examples() {
        let cut = separate_nogood(&and2(), 0.1, &[0.6, 0.6]).unwrap().unwrap();
        assert_eq!(cut.vertex, PointAssignment::parse("11").unwrap());
        assert!(cut.g_value);
        assert!((cut.violation - 0.1).abs() < 1e-12);
        assert_eq!(cut.to_string(), "(1 - x1) + (1 - x2) + y >= 1");

        assert!(separate_nogood(&and2(), 1.0, &[1.0, 1.0]).unwrap().is_none());
        assert!(separate_nogood(&and2(), 0.0, &[0.0, 0.0]).unwrap().is_none());
        assert!(separate_nogood(&and2(), 0.0, &[0.0]).is_err());
    }

    #[test]
    fn separation_counts_evaluations_and_ties_round_up() {
        let calls = Arc::new(AtomicUsize::new(0));
        let counter = calls.clone();
        let g = BooleanFn::from_fn(4, move |x| {
            counter.fetch_add(1, Ordering::SeqCst);
            x.get(1)
        });
        let cut = separate_nogood(&g, 0.0, &[0.5, 0.0, 0.0, 0.0]).unwrap().unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), 5);
        assert_eq!(cut.vertex, PointAssignment::parse("1000").unwrap());
    }

    #[test]
    fn separated_row_matches_model_row() {
        let m = nogood_model(&[(and2(), int(1))], &[int(0), int(0)], &int(0), 2, &Caps::default()).unwrap();
        let cut = separate_nogood(&and2(), 0.1, &[0.6, 0.6]).unwrap().unwrap();
        let (terms, sense, rhs) = cut.row(&[0, 1], 2);
        let c = m.constraint("ng1_11").unwrap();
        assert_eq!((terms.as_slice(), sense, rhs), (c.terms(), c.sense, c.rhs.clone()));
    }
}
