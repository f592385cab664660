use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarType {
    Continuous,
    Binary,
    Integer,
}

impl VarType {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarType::Continuous)
    }
}

/// A decision variable. `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDef {
    pub name: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub var_type: VarType,
}

impl VarDef {
    pub fn binary(name: impl Into<String>) -> Self {
        VarDef {
            name: name.into(),
            lower: Some(Rational::zero()),
            upper: Some(Rational::one()),
            var_type: VarType::Binary,
        }
    }

    pub fn continuous(name: impl Into<String>, lower: Option<Rational>, upper: Option<Rational>) -> Self {
        VarDef {
            name: name.into(),
            lower,
            upper,
            var_type: VarType::Continuous,
        }
    }

    pub fn integer(name: impl Into<String>, lower: Option<Rational>, upper: Option<Rational>) -> Self {
        VarDef {
            name: name.into(),
            lower,
            upper,
            var_type: VarType::Integer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// A linear row. Terms reference variables by model index, sorted by index,
/// with no duplicates and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    pub fn activity(&self, values: &[Rational]) -> Rational {
        self.terms.iter().map(|(v, c)| c * &values[*v]).sum()
    }

    pub fn is_satisfied(&self, values: &[Rational]) -> bool {
        self.sense.holds(&self.activity(values), &self.rhs)
    }

    /// How far `values` is from satisfying the row; zero when satisfied.
    pub fn violation(&self, values: &[Rational]) -> Rational {
        let lhs = self.activity(values);
        let diff = &lhs - &self.rhs;
        match self.sense {
            Sense::Le if diff > Rational::zero() => diff,
            Sense::Ge if diff < Rational::zero() => -diff,
            Sense::Eq => num_traits::Signed::abs(&diff),
            _ => Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelStats {
    pub vars: usize,
    pub cons: usize,
    /// Constraint-matrix entries plus objective entries.
    pub nonzeros: usize,
}

/// A minimization MILP with a constant objective offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpModel {
    name: String,
    vars: Vec<VarDef>,
    index: HashMap<String, usize>,
    cons: Vec<Constraint>,
    con_names: HashMap<String, usize>,
    objective: Vec<Rational>,
    offset: Rational,
}

/// Merges duplicate indices, drops zeros and sorts by index.
fn normalize_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Vec<(usize, Rational)> {
    let mut terms: Vec<(usize, Rational)> = terms.into_iter().collect();
    terms.sort_by_key(|(v, _)| *v);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
    for (v, c) in terms {
        match out.last_mut() {
            Some((last, acc)) if *last == v => *acc += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel {
            name: name.into(),
            vars: Vec::new(),
            index: HashMap::new(),
            cons: Vec::new(),
            con_names: HashMap::new(),
            objective: Vec::new(),
            offset: Rational::zero(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn add_var(&mut self, var: VarDef) -> Result<usize> {
        if self.index.contains_key(&var.name) {
            return Err(Error::InvalidModel(format!("duplicate variable `{}`", var.name)));
        }
        if let (Some(lo), Some(hi)) = (&var.lower, &var.upper) {
            if lo > hi {
                return Err(Error::InvalidModel(format!(
                    "variable `{}` has lower > upper",
                    var.name
                )));
            }
        }
        if var.var_type == VarType::Binary
            && (var.lower != Some(Rational::zero()) || var.upper != Some(Rational::one()))
        {
            return Err(Error::InvalidModel(format!(
                "binary `{}` must have bounds [0, 1]",
                var.name
            )));
        }
        let id = self.vars.len();
        self.index.insert(var.name.clone(), id);
        self.vars.push(var);
        self.objective.push(Rational::zero());
        Ok(id)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<usize> {
        self.add_var(VarDef::binary(name))
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) -> Result<usize> {
        let name = name.into();
        if self.con_names.contains_key(&name) {
            return Err(Error::InvalidModel(format!("duplicate constraint `{name}`")));
        }
        let terms = normalize_terms(terms);
        if let Some((v, _)) = terms.iter().find(|(v, _)| *v >= self.vars.len()) {
            return Err(Error::InvalidModel(format!(
                "constraint `{name}` references unknown variable {v}"
            )));
        }
        let id = self.cons.len();
        self.con_names.insert(name.clone(), id);
        self.cons.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
        Ok(id)
    }

    /// Adds `coeff` to the objective coefficient of `var`.
    pub fn add_objective(&mut self, var: usize, coeff: &Rational) {
        self.objective[var] += coeff;
    }

    pub fn add_offset(&mut self, value: &Rational) {
        self.offset += value;
    }

    pub fn vars(&self) -> &[VarDef] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.con_names.get(name).map(|&i| &self.cons[i])
    }

    /// Nonzero objective coefficients in variable order.
    pub fn objective_terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.objective.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn objective_coefficient(&self, var: usize) -> &Rational {
        &self.objective[var]
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// Objective value including the offset.
    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective_terms().map(|(v, c)| c * &values[v]).sum::<Rational>() + &self.offset
    }

    /// Whether `values` satisfies every row, bound and integrality condition.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.vars.len()
            && self.vars.iter().zip(values).all(|(var, x)| {
                var.lower.as_ref().is_none_or(|lo| x >= lo)
                    && var.upper.as_ref().is_none_or(|hi| x <= hi)
                    && (!var.var_type.is_integral() || x.is_integer())
            })
            && self.cons.iter().all(|c| c.is_satisfied(values))
    }

    pub fn stats(&self) -> ModelStats {
        ModelStats {
            vars: self.vars.len(),
            cons: self.cons.len(),
            nonzeros: self.cons.iter().map(|c| c.terms.len()).sum::<usize>() + self.objective_terms().count(),
        }
    }
}

/// `(vars, cons, nonzeros)` of a model.
pub fn model_stats(model: &MilpModel) -> ModelStats {
    model.stats()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn builds_and_checks() {
        let mut m = MilpModel::new("t");
        let x = m.add_binary("x").unwrap();
        let y = m.add_var(VarDef::continuous("y", Some(int(0)), None)).unwrap();
        m.add_constraint("c", [(y, int(1)), (x, int(2)), (y, int(1))], Sense::Ge, int(1))
            .unwrap();
        m.add_objective(y, &int(3));
        m.add_offset(&frac(1, 2));
        assert_eq!(m.constraints()[0].terms(), &[(x, int(2)), (y, int(2))]);
        assert_eq!(
            m.stats(),
            ModelStats {
                vars: 2,
                cons: 1,
                nonzeros: 3
            }
        );
        assert!(m.is_feasible(&[int(0), frac(1, 2)]));
        assert!(!m.is_feasible(&[frac(1, 2), int(1)]));
        assert_eq!(m.objective_value(&[int(1), int(1)]), frac(7, 2));
    }

    #[test]
    fn rejects_malformed() {
        let mut m = MilpModel::new("t");
        m.add_binary("x").unwrap();
        assert!(m.add_binary("x").is_err());
        assert!(m.add_var(VarDef::continuous("y", Some(int(2)), Some(int(1)))).is_err());
        assert!(m.add_constraint("c", [(5, int(1))], Sense::Le, int(0)).is_err());
        m.add_constraint("c", [(0, int(1))], Sense::Le, int(0)).unwrap();
        assert!(m.add_constraint("c", [(0, int(1))], Sense::Le, int(0)).is_err());
    }

    #[test]
    fn empty_model_stats() {
        let m = MilpModel::new("e");
        assert_eq!((m.stats().vars, m.stats().cons, m.stats().nonzeros), (0, 0, 0));
    }

    #[test]
    fn violation_amounts() {
        let mut m = MilpModel::new("t");
        let x = m.add_binary("x").unwrap();
        m.add_constraint("c", [(x, int(1))], Sense::Ge, int(1)).unwrap();
        assert_eq!(m.constraints()[0].violation(&[frac(1, 4)]), frac(3, 4));
        assert_eq!(m.constraints()[0].violation(&[int(1)]), int(0));
    }
}
