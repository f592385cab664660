use std::str::FromStr;

use super::{check_n, f_bern_poly, l_set, LdMode, SpinSequence};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ipmodels::{fortet_model, MilpModel, Sense};
use crate::pbf::SignedProduct;
use crate::rational::int;

/// Which pair-product variables `y_{i,j}` the value-indicator model declares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PairVarMode {
    /// One per `i < j`.
    #[default]
    UpperTriangle,
    /// One per ordered pair `i ≠ j`; rows still use only `i < j`.
    OrderedCompat,
}

impl FromStr for PairVarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper_triangle" | "upper-triangle" => Ok(PairVarMode::UpperTriangle),
            "ordered_compat" | "ordered-compat" => Ok(PairVarMode::OrderedCompat),
            other => Err(Error::InvalidArgument(format!("unknown pair mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabsInstance {
    pub n: usize,
    pub ld_mode: LdMode,
    pub pair_var_mode: PairVarMode,
}

impl LabsInstance {
    /// The model as displayed: `y` over `i < j`, parity `L_d`.
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(LabsInstance {
            n,
            ld_mode: LdMode::Parity,
            pair_var_mode: PairVarMode::UpperTriangle,
        })
    }

    /// Compatibility counting: ordered pairs, full-range `L_d`.
    pub fn compat(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(LabsInstance {
            n,
            ld_mode: LdMode::FullRange,
            pair_var_mode: PairVarMode::OrderedCompat,
        })
    }
}

/// `z<d>_p<ℓ>` for `ℓ ≥ 0`, `z<d>_m<|ℓ|>` otherwise.
pub(crate) fn z_name(d: usize, l: i64) -> String {
    if l >= 0 {
        format!("z{d}_p{l}")
    } else {
        format!("z{d}_m{}", -l)
    }
}

/// Fortet linearization of every monomial of degree ≥ 2 of `f_bern_N`; the
/// linear part goes on `x` and the constant into the offset.
pub fn standard_ip(n: usize, caps: &Caps) -> Result<MilpModel> {
    let f = f_bern_poly(n, caps)?;
    let (a, beta) = f.affine_part();
    let products = f
        .terms()
        .filter(|(k, _)| k.degree() >= 2)
        .map(|(k, c)| Ok((SignedProduct::new(&k.indices(), &[])?, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    let mut model = fortet_model(&a, &beta, &products, n)?;
    model.set_name(format!("labs_standard_{n}"));
    Ok(model)
}

/// `x` plus indicators `z_{d,ℓ}` (parity `L_d`), each tied to
/// `[C_d(2x-1) = ℓ]` by one no-good row per vertex of the cube.
pub fn indicator_only_ip(n: usize, caps: &Caps) -> Result<MilpModel> {
    check_n(n)?;
    Caps::check("indicator-only N", n, caps.labs_indicator_only)?;
    let mut model = MilpModel::new(format!("labs_indicator_only_{n}"));
    let x: Vec<usize> = (1..=n)
        .map(|i| model.add_binary(format!("x{i}")))
        .collect::<Result<_>>()?;
    let correlations: Vec<Vec<i64>> = (0..1u64 << n)
        .map(|m| SpinSequence::from_mask(n, m).correlations())
        .collect();
    for d in 1..n {
        for l in l_set(n, d, LdMode::Parity)? {
            let name = z_name(d, l);
            let z = model.add_binary(&name)?;
            model.add_objective(z, &int(l * l));
            for (mask, c) in correlations.iter().enumerate() {
                let mask = mask as u64;
                let hit = c[d - 1] == l;
                let ones = mask.count_ones() as i64;
                let mut terms: Vec<_> = x
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| (v, int(if mask >> j & 1 == 1 { -1 } else { 1 })))
                    .collect();
                terms.push((z, int(if hit { 1 } else { -1 })));
                let rhs = if hit { 1 - ones } else { -ones };
                let label: String = (0..n).map(|j| if mask >> j & 1 == 1 { '1' } else { '0' }).collect();
                model.add_constraint(format!("ng_{name}_{label}"), terms, Sense::Ge, int(rhs))?;
            }
        }
    }
    Ok(model)
}

/// The value-indicator model: `y_{i,j} = [x_i = x_j]` by four rows per
/// `i < j`, one `z_{d,ℓ}` per candidate value with `Σ_ℓ z_{d,ℓ} = 1` and
/// `Σ_i (2y_{i,i+d} - 1) = Σ_ℓ ℓ z_{d,ℓ}`, objective `Σ ℓ² z_{d,ℓ}`.
pub fn value_indicator_ip(instance: &LabsInstance) -> Result<MilpModel> {
    let n = instance.n;
    check_n(n)?;
    let mut model = MilpModel::new(format!("labs_value_indicator_{n}"));
    let x: Vec<usize> = (1..=n)
        .map(|i| model.add_binary(format!("x{i}")))
        .collect::<Result<_>>()?;
    // y[i][j] for i < j, 0-based
    let mut y = vec![vec![usize::MAX; n]; n];
    for (i, row) in y.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let declare = match instance.pair_var_mode {
                PairVarMode::UpperTriangle => i < j,
                PairVarMode::OrderedCompat => i != j,
            };
            if declare {
                *slot = model.add_binary(format!("y{}_{}", i + 1, j + 1))?;
            }
        }
    }
    let mut z = Vec::with_capacity(n - 1);
    for d in 1..n {
        let values = l_set(n, d, instance.ld_mode)?;
        let mut vars = Vec::with_capacity(values.len());
        for l in values {
            let v = model.add_binary(z_name(d, l))?;
            model.add_objective(v, &int(l * l));
            vars.push((l, v));
        }
        z.push(vars);
    }

    for i in 0..n {
        for j in i + 1..n {
            let (xi, xj, yij) = (x[i], x[j], y[i][j]);
            let tag = format!("{}_{}", i + 1, j + 1);
            model.add_constraint(
                format!("q1_{tag}"),
                [(xi, int(1)), (xj, int(1)), (yij, int(1))],
                Sense::Ge,
                int(1),
            )?;
            model.add_constraint(
                format!("q2_{tag}"),
                [(xi, int(1)), (xj, int(-1)), (yij, int(-1))],
                Sense::Ge,
                int(-1),
            )?;
            model.add_constraint(
                format!("q3_{tag}"),
                [(xi, int(-1)), (xj, int(1)), (yij, int(-1))],
                Sense::Ge,
                int(-1),
            )?;
            model.add_constraint(
                format!("q4_{tag}"),
                [(xi, int(1)), (xj, int(1)), (yij, int(-1))],
                Sense::Le,
                int(1),
            )?;
        }
    }
    for (d, vars) in (1..n).zip(&z) {
        model.add_constraint(
            format!("conv_{d}"),
            vars.iter().map(|&(_, v)| (v, int(1))),
            Sense::Eq,
            int(1),
        )?;
    }
    for (d, vars) in (1..n).zip(&z) {
        let terms = (0..n - d)
            .map(|i| (y[i][i + d], int(2)))
            .chain(vars.iter().map(|&(l, v)| (v, int(-l))));
        model.add_constraint(format!("ind_{d}"), terms, Sense::Eq, int((n - d) as i64))?;
    }
    Ok(model)
}
