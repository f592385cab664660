//! CPLEX LP-format export.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::model::{MilpModel, VarType};
use crate::error::{Error, Result};
use crate::rational::{format_rational, non_terminating_factor, to_terminating_decimal, Rational};

const TERMS_PER_LINE: usize = 8;
const RESERVED: [&str; 4] = ["inf", "infinity", "free", "obj"];

/// Accepts `[A-Za-z_][A-Za-z0-9_]*` up to 255 characters, minus a few
/// keywords of the format.
pub fn validate_name(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = name.len() <= 255
        && chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.iter().any(|r| r.eq_ignore_ascii_case(name));
    if ok {
        Ok(())
    } else {
        Err(Error::UnrepresentableName(name.to_string()))
    }
}

/// Least common multiple of the non-terminating denominator parts.
fn scale_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&non_terminating_factor(v)))
}

/// Factor the objective is multiplied by on export so that every
/// coefficient has a terminating decimal expansion. Reported LP objective
/// values must be divided by it (and the offset added back).
pub fn lp_objective_scale(model: &MilpModel) -> BigInt {
    scale_of(model.objective_terms().map(|(_, c)| c))
}

fn decimal(value: &Rational) -> String {
    to_terminating_decimal(value).expect("scaled to a terminating decimal")
}

fn write_terms(out: &mut String, terms: &[(&str, Rational)]) {
    for (k, (name, coeff)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let magnitude = coeff.abs();
        let sign = if coeff.is_negative() { "-" } else { "+" };
        match (k, magnitude.is_one()) {
            (0, true) if sign == "+" => write!(out, " {name}"),
            (0, true) => write!(out, " -{name}"),
            (0, false) if sign == "+" => write!(out, " {} {name}", decimal(&magnitude)),
            (0, false) => write!(out, " -{} {name}", decimal(&magnitude)),
            (_, true) => write!(out, " {sign} {name}"),
            (_, false) => write!(out, " {sign} {} {name}", decimal(&magnitude)),
        }
        .unwrap();
    }
}

/// The model in LP format, integrality included.
pub fn write_lp(model: &MilpModel) -> Result<String> {
    render(model, false)
}

/// The LP relaxation: binaries become `[0, 1]` bounds and integrality is dropped.
pub fn write_lp_relaxation(model: &MilpModel) -> Result<String> {
    render(model, true)
}

fn render(model: &MilpModel, relax: bool) -> Result<String> {
    let vars = model.vars();
    for v in vars {
        validate_name(&v.name)?;
    }
    for c in model.constraints() {
        validate_name(&c.name)?;
    }
    let name_of = |v: usize| vars[v].name.as_str();

    let mut out = String::new();
    writeln!(out, "\\ model: {}", model.name()).unwrap();
    writeln!(out, "\\ objective offset: {}", format_rational(model.offset())).unwrap();
    let scale = lp_objective_scale(model);
    if !scale.is_one() {
        writeln!(out, "\\ objective scale: {scale}").unwrap();
    }
    if relax {
        out.push_str("\\ relaxation\n");
    }

    out.push_str("Minimize\n obj:");
    let scale_r = Rational::from_integer(scale);
    let mut obj: Vec<(&str, Rational)> = model
        .objective_terms()
        .map(|(v, c)| (name_of(v), c * &scale_r))
        .collect();
    if obj.is_empty() {
        if let Some(first) = vars.first() {
            obj.push((first.name.as_str(), Rational::zero()));
        }
    }
    if obj.len() == 1 && obj[0].1.is_zero() {
        write!(out, " 0 {}", obj[0].0).unwrap();
    } else {
        write_terms(&mut out, &obj);
    }
    out.push('\n');

    out.push_str("Subject To\n");
    for c in model.constraints() {
        let row_scale = Rational::from_integer(scale_of(c.terms().iter().map(|(_, v)| v).chain([&c.rhs])));
        let terms: Vec<(&str, Rational)> = c.terms().iter().map(|(v, k)| (name_of(*v), k * &row_scale)).collect();
        write!(out, " {}:", c.name).unwrap();
        if terms.is_empty() {
            match vars.first() {
                Some(first) => write!(out, " 0 {}", first.name).unwrap(),
                None => return Err(Error::InvalidModel(format!("row `{}` has no variables", c.name))),
            }
        } else {
            write_terms(&mut out, &terms);
        }
        writeln!(out, " {} {}", c.sense, decimal(&(&c.rhs * &row_scale))).unwrap();
    }

    let bound = |v: &Option<Rational>, name: &str| -> Result<String> {
        let v = v.as_ref().expect("bound present");
        to_terminating_decimal(v).ok_or_else(|| {
            Error::InvalidModel(format!(
                "bound {} of `{name}` has no finite decimal form",
                format_rational(v)
            ))
        })
    };
    let mut bounds = String::new();
    for v in vars {
        let binary = v.var_type == VarType::Binary;
        if binary && !relax {
            continue;
        }
        let zero_lower = v.lower.as_ref().is_some_and(Zero::is_zero);
        match (&v.lower, &v.upper) {
            (None, None) => writeln!(bounds, " {} free", v.name).unwrap(),
            (None, Some(_)) => writeln!(bounds, " -inf <= {} <= {}", v.name, bound(&v.upper, &v.name)?).unwrap(),
            (Some(_), None) if zero_lower => {}
            (Some(_), None) => writeln!(bounds, " {} >= {}", v.name, bound(&v.lower, &v.name)?).unwrap(),
            (Some(_), Some(_)) => writeln!(
                bounds,
                " {} <= {} <= {}",
                bound(&v.lower, &v.name)?,
                v.name,
                bound(&v.upper, &v.name)?
            )
            .unwrap(),
        }
    }
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        out.push_str(&bounds);
    }

    if !relax {
        for (section, kind) in [("General", VarType::Integer), ("Binary", VarType::Binary)] {
            let names: Vec<&str> = vars
                .iter()
                .filter(|v| v.var_type == kind)
                .map(|v| v.name.as_str())
                .collect();
            if names.is_empty() {
                continue;
            }
            writeln!(out, "{section}").unwrap();
            for chunk in names.chunks(TERMS_PER_LINE * 2) {
                writeln!(out, " {}", chunk.join(" ")).unwrap();
            }
        }
    }
    out.push_str("End\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipmodels::model::{Sense, VarDef};
    use crate::rational::{frac, int};

    fn tiny() -> MilpModel {
        let mut m = MilpModel::new("tiny");
        let x = m.add_var(VarDef::continuous("x1", Some(int(0)), None)).unwrap();
        m.add_objective(x, &int(1));
        m.add_constraint("c1", [(x, int(1))], Sense::Ge, frac(1, 2)).unwrap();
        m
    }

    #[test]
    fn tiny_golden() {
        let text = write_lp(&tiny()).unwrap();
        assert_eq!(
            text,
            "\\ model: tiny\n\\ objective offset: 0\nMinimize\n obj: x1\nSubject To\n c1: x1 >= 0.5\nEnd\n"
        );
    }

    #[test]
    fn empty_constraints_and_sections() {
        let mut m = MilpModel::new("e");
        let b = m.add_binary("b").unwrap();
        let z = m.add_var(VarDef::integer("z", Some(int(-2)), Some(int(3)))).unwrap();
        m.add_var(VarDef::continuous("u", None, None)).unwrap();
        m.add_objective(b, &int(-1));
        m.add_objective(z, &frac(5, 2));
        m.add_offset(&frac(1, 3));
        let text = write_lp(&m).unwrap();
        assert_eq!(
            text,
            "\\ model: e\n\\ objective offset: 1/3\nMinimize\n obj: -b + 2.5 z\nSubject To\nBounds\n -2 <= z <= 3\n u free\nGeneral\n z\nBinary\n b\nEnd\n"
        );
        let relaxed = write_lp_relaxation(&m).unwrap();
        assert!(relaxed.contains(" 0 <= b <= 1\n"));
        assert!(!relaxed.contains("Binary"));
        assert!(!relaxed.contains("General"));
    }

    #[test]
    fn non_terminating_coefficients_are_scaled() {
        let mut m = MilpModel::new("s");
        let x = m.add_binary("x").unwrap();
        let y = m.add_binary("y").unwrap();
        m.add_objective(x, &frac(1, 3));
        m.add_objective(y, &frac(1, 6));
        m.add_constraint("r", [(x, frac(2, 3)), (y, int(1))], Sense::Le, frac(1, 7))
            .unwrap();
        assert_eq!(lp_objective_scale(&m), BigInt::from(3));
        let text = write_lp(&m).unwrap();
        assert!(text.contains("\\ objective scale: 3\n"));
        assert!(text.contains(" obj: x + 0.5 y\n"));
        assert!(text.contains(" r: 14 x + 21 y <= 3\n"));
    }

    #[test]
    fn names_are_checked() {
        assert!(validate_name("z3_m2").is_ok());
        for bad in ["", "3x", "a-b", "x y", "free", "Inf"] {
            assert!(
                matches!(validate_name(bad), Err(Error::UnrepresentableName(_))),
                "{bad}"
            );
        }
        let mut m = MilpModel::new("bad");
        m.add_binary("x.1").unwrap();
        assert!(write_lp(&m).is_err());
    }

    #[test]
    fn long_rows_wrap() {
        let mut m = MilpModel::new("w");
        let ids: Vec<usize> = (0..20).map(|i| m.add_binary(format!("v{i}")).unwrap()).collect();
        m.add_constraint("all", ids.iter().map(|&v| (v, int(2))), Sense::Le, int(7))
            .unwrap();
        let text = write_lp(&m).unwrap();
        let row: Vec<&str> = text.lines().skip_while(|l| !l.starts_with(" all:")).take(3).collect();
        assert_eq!(row[0], " all: 2 v0 + 2 v1 + 2 v2 + 2 v3 + 2 v4 + 2 v5 + 2 v6 + 2 v7");
        assert!(row[2].ends_with("<= 7"));
    }
}
