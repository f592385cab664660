//! Polynomial text format.
//!
//! ```text
//! n=3
//! -1
//! 1 * x1*x2
//! 3/2 * x1*x2*x3
//! ```
//!
//! The first non-comment line is the `n=<arity>` header. Every further line
//! holds one term: a rational coefficient, then `*` and the variables, or a
//! bare coefficient for the constant. A term written without a coefficient
//! (`x1*x2`, `-x3`) has coefficient ±1. Repeated terms are summed and `#`
//! starts a comment.

use num_traits::One;

use super::poly::{MultilinearPoly, TermKey};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

pub fn parse_poly(text: &str) -> Result<MultilinearPoly> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n=<arity>` header"))?;
    let arity = parse_header(header).ok_or_else(|| Error::parse(line_no, "expected `n=<arity>`"))?;
    let mut poly = MultilinearPoly::zero(arity).map_err(|e| Error::parse(line_no, e.to_string()))?;

    for (line_no, line) in lines {
        let (key, coeff) = parse_term(line).map_err(|m| Error::parse(line_no, m))?;
        poly.add_term(key, coeff)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    Ok(poly)
}

fn parse_header(line: &str) -> Option<usize> {
    let (lhs, rhs) = line.split_once('=')?;
    (lhs.trim() == "n").then(|| rhs.trim().parse().ok())?
}

fn parse_term(line: &str) -> Result<(TermKey, Rational), String> {
    let factors: Vec<&str> = line.split('*').map(str::trim).collect();
    let mut coeff = Rational::one();
    let mut indices = Vec::new();
    for (pos, factor) in factors.iter().enumerate() {
        let (negate, body) = match factor.strip_prefix('-') {
            Some(rest) if rest.trim_start().starts_with('x') => (true, rest.trim_start()),
            _ => (false, *factor),
        };
        if let Some(index) = body.strip_prefix('x') {
            let index: usize = index.parse().map_err(|_| format!("bad variable `{factor}`"))?;
            if index == 0 {
                return Err("variables are numbered from x1".into());
            }
            if negate {
                if pos != 0 {
                    return Err(format!("unexpected sign in `{factor}`"));
                }
                coeff = -coeff;
            }
            indices.push(index);
        } else if pos == 0 {
            coeff = parse_rational(factor).map_err(|e| e.to_string())?;
        } else {
            return Err(format!("coefficient `{factor}` must come first"));
        }
    }
    let key = TermKey::from_indices(&indices).map_err(|e| e.to_string())?;
    Ok((key, coeff))
}
