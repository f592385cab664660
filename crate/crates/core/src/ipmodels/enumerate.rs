use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::model::{MilpModel, Sense};
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Row {
    terms: Vec<(usize, i128)>,
    sense: Sense,
    rhs: i128,
}

/// Scales a row by the lcm of its denominators into `i128`s.
fn integer_row(terms: &[(usize, Rational)], sense: Sense, rhs: &Rational) -> Result<Row> {
    let lcm = terms
        .iter()
        .map(|(_, c)| c.denom())
        .chain(std::iter::once(rhs.denom()))
        .fold(BigInt::one(), |acc, d| acc.lcm(d));
    let to_i128 = |r: &Rational| -> Result<i128> {
        (r.numer() * (&lcm / r.denom()))
            .to_i128()
            .ok_or_else(|| Error::InvalidModel("coefficient too large for enumeration".into()))
    };
    Ok(Row {
        terms: terms
            .iter()
            .map(|(v, c)| Ok((*v, to_i128(c)?)))
            .collect::<Result<_>>()?,
        sense,
        rhs: to_i128(rhs)?,
    })
}

/// All integer assignments that agree with `fixed` and satisfy the model,
/// up to `limit` of them, in lexicographic order of variable values.
///
/// Every variable must be fixed or integral with finite bounds. Rows are
/// checked by interval bounds on their unassigned part after each
/// assignment, which is enough to enumerate the small models in this crate
/// completely.
pub fn integer_completions(model: &MilpModel, fixed: &[Option<i64>], limit: usize) -> Result<Vec<Vec<i64>>> {
    let vars = model.vars();
    if fixed.len() != vars.len() {
        return Err(Error::ArityMismatch {
            expected: vars.len(),
            actual: fixed.len(),
        });
    }
    let mut lo = Vec::with_capacity(vars.len());
    let mut hi = Vec::with_capacity(vars.len());
    for (var, f) in vars.iter().zip(fixed) {
        let bound = |b: &Option<Rational>, up: bool| -> Result<i64> {
            let b = b.as_ref().ok_or_else(|| {
                Error::InvalidModel(format!("variable `{}` needs finite bounds to enumerate", var.name))
            })?;
            let r = if up { b.floor() } else { b.ceil() };
            r.to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidModel(format!("bound of `{}` out of range", var.name)))
        };
        match f {
            Some(v) => {
                lo.push(*v);
                hi.push(*v);
            }
            None => {
                if !var.var_type.is_integral() {
                    return Err(Error::InvalidModel(format!(
                        "continuous variable `{}` must be fixed",
                        var.name
                    )));
                }
                lo.push(bound(&var.lower, false)?);
                hi.push(bound(&var.upper, true)?);
            }
        }
    }

    let rows = model
        .constraints()
        .iter()
        .map(|c| integer_row(c.terms(), c.sense, &c.rhs))
        .collect::<Result<Vec<_>>>()?;
    let mut rows_of = vec![Vec::new(); vars.len()];
    for (r, row) in rows.iter().enumerate() {
        for &(v, c) in &row.terms {
            rows_of[v].push((r, c));
        }
    }
    let range = |c: i128, l: i64, h: i64| -> (i128, i128) {
        let (a, b) = (c * i128::from(l), c * i128::from(h));
        (a.min(b), a.max(b))
    };
    let fixed_sum = vec![0i128; rows.len()];
    let mut min_rest = vec![0i128; rows.len()];
    let mut max_rest = vec![0i128; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for &(v, c) in &row.terms {
            let (a, b) = range(c, lo[v], hi[v]);
            min_rest[r] += a;
            max_rest[r] += b;
        }
    }

    let mut state = Enumeration {
        rows: &rows,
        rows_of: &rows_of,
        lo: &lo,
        hi: &hi,
        fixed_sum,
        min_rest,
        max_rest,
        current: vec![0; vars.len()],
        out: Vec::new(),
        limit,
    };
    if (0..rows.len()).all(|r| state.row_ok(r)) {
        state.descend(0);
    }
    Ok(state.out)
}

struct Enumeration<'a> {
    rows: &'a [Row],
    rows_of: &'a [Vec<(usize, i128)>],
    lo: &'a [i64],
    hi: &'a [i64],
    fixed_sum: Vec<i128>,
    min_rest: Vec<i128>,
    max_rest: Vec<i128>,
    current: Vec<i64>,
    out: Vec<Vec<i64>>,
    limit: usize,
}

impl Enumeration<'_> {
    fn row_ok(&self, r: usize) -> bool {
        let (min, max) = (
            self.fixed_sum[r] + self.min_rest[r],
            self.fixed_sum[r] + self.max_rest[r],
        );
        let rhs = self.rows[r].rhs;
        match self.rows[r].sense {
            Sense::Le => min <= rhs,
            Sense::Ge => max >= rhs,
            Sense::Eq => min <= rhs && rhs <= max,
        }
    }

    fn shift(&mut self, v: usize, value: i64, sign: i128) {
        for &(r, c) in &self.rows_of[v] {
            let (a, b) = {
                let (x, y) = (c * i128::from(self.lo[v]), c * i128::from(self.hi[v]));
                (x.min(y), x.max(y))
            };
            self.min_rest[r] -= sign * a;
            self.max_rest[r] -= sign * b;
            self.fixed_sum[r] += sign * c * i128::from(value);
        }
    }

    fn descend(&mut self, v: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if v == self.current.len() {
            self.out.push(self.current.clone());
            return;
        }
        for value in self.lo[v]..=self.hi[v] {
            self.current[v] = value;
            self.shift(v, value, 1);
            if self.rows_of[v].iter().all(|&(r, _)| self.row_ok(r)) {
                self.descend(v + 1);
            }
            self.shift(v, value, -1);
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}
