//! Linearization certificates `f(x) = aᵀx + β + Σ b_i g_i(x)` and their
//! text form:
//!
//! ```text
//! certificate n=3 size=1 beta=-1
//! a1 = 1
//! a2 = 1
//! a3 = 1
//! C I={} J={1,2,3} b=1
//! ```
//!
//! Term lines start with the family tag: `M` and `C` carry the index sets of
//! a signed product, `B` carries an explicit truth table (`B table=0110 b=2`).

use std::fmt;

use num_traits::Zero;

use super::boolean::{BooleanFn, SignedProduct, TruthTable};
use super::point::PointAssignment;
use super::poly::MultilinearPoly;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Monomials.
    M,
    /// Products of possibly complemented variables.
    C,
    /// Arbitrary Boolean functions.
    B,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::M => "M",
            Family::C => "C",
            Family::B => "B",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "M" | "m" => Ok(Family::M),
            "C" | "c" => Ok(Family::C),
            "B" | "b" => Ok(Family::B),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// Descriptor of one auxiliary function of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermFunction {
    Product(SignedProduct),
    Table(TruthTable),
}

impl TermFunction {
    /// Smallest family containing the function's descriptor.
    pub fn family(&self) -> Family {
        match self {
            TermFunction::Product(p) if p.is_monomial() => Family::M,
            TermFunction::Product(_) => Family::C,
            TermFunction::Table(_) => Family::B,
        }
    }

    pub fn eval_mask(&self, mask: u64) -> bool {
        match self {
            TermFunction::Product(p) => p.eval_mask(mask),
            TermFunction::Table(t) => t.get_mask(mask),
        }
    }

    pub fn to_boolean_fn(&self, arity: usize) -> Result<BooleanFn> {
        match self {
            TermFunction::Product(p) => BooleanFn::from_signed_product(p.clone(), arity),
            TermFunction::Table(t) => {
                if t.arity() != arity {
                    return Err(Error::ArityMismatch {
                        expected: arity,
                        actual: t.arity(),
                    });
                }
                Ok(BooleanFn::from_table(t.clone()))
            }
        }
    }

    fn check_arity(&self, arity: usize) -> Result<()> {
        match self {
            TermFunction::Product(p) => p.check_arity(arity),
            TermFunction::Table(t) if t.arity() == arity => Ok(()),
            TermFunction::Table(t) => Err(Error::ArityMismatch {
                expected: arity,
                actual: t.arity(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizationCertificate {
    arity: usize,
    a: Vec<Rational>,
    beta: Rational,
    terms: Vec<(TermFunction, Rational)>,
}

impl LinearizationCertificate {
    pub fn new(a: Vec<Rational>, beta: Rational, terms: Vec<(TermFunction, Rational)>) -> Result<Self> {
        let arity = a.len();
        for (g, b) in &terms {
            if b.is_zero() {
                return Err(Error::InvalidArgument("certificate weights must be nonzero".into()));
            }
            g.check_arity(arity)?;
        }
        Ok(LinearizationCertificate { arity, a, beta, terms })
    }

    /// The linearization by monomials read off the multilinear form; its size
    /// is `lc_M`.
    pub fn monomial(poly: &MultilinearPoly) -> Result<Self> {
        let (a, beta) = poly.affine_part();
        let terms = poly
            .terms()
            .filter(|(k, _)| k.degree() >= 2)
            .map(|(k, c)| {
                Ok((
                    TermFunction::Product(SignedProduct::from_masks(k.mask(), 0)?),
                    c.clone(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(a, beta, terms)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn terms(&self) -> &[(TermFunction, Rational)] {
        &self.terms
    }

    /// Largest family any term belongs to (`M` for an empty certificate).
    pub fn family(&self) -> Family {
        self.terms.iter().map(|(g, _)| g.family()).max().unwrap_or(Family::M)
    }

    pub fn evaluate_mask(&self, mask: u64) -> Rational {
        let mut acc = self.beta.clone();
        for (i, ai) in self.a.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc += ai;
            }
        }
        for (g, b) in &self.terms {
            if g.eval_mask(mask) {
                acc += b;
            }
        }
        acc
    }

    /// Parses the text form written by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing certificate header"))?;
        let fields = header
            .strip_prefix("certificate")
            .ok_or_else(|| Error::parse(line_no, "expected `certificate n=.. size=.. beta=..`"))?;
        let (mut arity, mut size, mut beta) = (None, None, None);
        for field in fields.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, format!("bad field `{field}`")))?;
            match key {
                "n" => arity = value.parse::<usize>().ok(),
                "size" => size = value.parse::<usize>().ok(),
                "beta" => beta = Some(parse_rational(value).map_err(|e| Error::parse(line_no, e.to_string()))?),
                _ => return Err(Error::parse(line_no, format!("unknown field `{key}`"))),
            }
        }
        let (arity, size, beta) = match (arity, size, beta) {
            (Some(n), Some(s), Some(b)) => (n, s, b),
            _ => return Err(Error::parse(line_no, "header needs n, size and beta")),
        };

        let mut a = vec![Rational::zero(); arity];
        let mut seen_a = vec![false; arity];
        let mut terms = Vec::new();
        for (line_no, line) in lines {
            let err = |m: String| Error::parse(line_no, m);
            if let Some(rest) = line.strip_prefix('a') {
                let (index, value) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `a<i> = <value>`".into()))?;
                let index: usize = index.trim().parse().map_err(|_| err("bad index".into()))?;
                if index == 0 || index > arity {
                    return Err(err(format!("a{index} out of range")));
                }
                a[index - 1] = parse_rational(value).map_err(|e| err(e.to_string()))?;
                seen_a[index - 1] = true;
                continue;
            }
            let mut parts = line.split_whitespace();
            let family: Family = parts
                .next()
                .unwrap_or("")
                .parse()
                .map_err(|e: Error| err(e.to_string()))?;
            let mut positive = None;
            let mut complemented = None;
            let mut table = None;
            let mut weight = None;
            for part in parts {
                let (key, value) = part.split_once('=').ok_or_else(|| err(format!("bad field `{part}`")))?;
                match key {
                    "I" => positive = Some(parse_set(value).map_err(err)?),
                    "J" => complemented = Some(parse_set(value).map_err(err)?),
                    "table" => table = Some(TruthTable::parse(arity, value).map_err(|e| err(e.to_string()))?),
                    "b" => weight = Some(parse_rational(value).map_err(|e| err(e.to_string()))?),
                    _ => return Err(err(format!("unknown field `{key}`"))),
                }
            }
            let weight = weight.ok_or_else(|| err("missing b=".into()))?;
            let function = match family {
                Family::B => TermFunction::Table(table.ok_or_else(|| err("B terms need table=".into()))?),
                Family::M | Family::C => {
                    let product = SignedProduct::new(&positive.unwrap_or_default(), &complemented.unwrap_or_default())
                        .map_err(|e| err(e.to_string()))?;
                    if family == Family::M && !product.is_monomial() {
                        return Err(err("M terms cannot have complemented variables".into()));
                    }
                    TermFunction::Product(product)
                }
            };
            terms.push((function, weight));
        }
        if let Some(missing) = seen_a.iter().position(|s| !s) {
            return Err(Error::parse(line_no, format!("missing a{}", missing + 1)));
        }
        if terms.len() != size {
            return Err(Error::parse(
                line_no,
                format!("header says size={size} but {} terms follow", terms.len()),
            ));
        }
        Self::new(a, beta, terms)
    }
}

fn parse_set(text: &str) -> std::result::Result<Vec<usize>, String> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("expected `{{..}}`, got `{text}`"))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("bad index `{s}`")))
        .collect()
}

impl fmt::Display for LinearizationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "certificate n={} size={} beta={}",
            self.arity,
            self.size(),
            format_rational(&self.beta)
        )?;
        for (i, ai) in self.a.iter().enumerate() {
            writeln!(f, "a{} = {}", i + 1, format_rational(ai))?;
        }
        for (g, b) in &self.terms {
            let b = format_rational(b);
            match g {
                TermFunction::Product(p) => writeln!(f, "{} {p} b={b}", g.family())?,
                TermFunction::Table(t) => writeln!(f, "B table={t} b={b}")?,
            }
        }
        Ok(())
    }
}

/// Checks the linearization identity exactly at every vertex of `{0,1}^n`.
pub fn verify_certificate<F>(f: F, arity: usize, cert: &LinearizationCertificate, caps: &Caps) -> Result<bool>
where
    F: Fn(&PointAssignment) -> Rational,
{
    Caps::check("arity", arity, caps.enumeration)?;
    if cert.arity != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            actual: cert.arity,
        });
    }
    Ok((0..1u64 << arity).all(|m| f(&PointAssignment::from_mask(arity, m)) == cert.evaluate_mask(m)))
}
