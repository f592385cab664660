use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::Duration;

use super::{exhaustive_solve, standard_ip, value_indicator_ip, LabsInstance};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ipmodels::{solve_external, MilpModel, ModelStats, SolveMode, SolverBridgeConfig};

pub const CSV_HEADER: &str = "N,opt,std_vars,std_cons,std_bound,vi_vars,vi_cons,vi_bound,nodes,time_s";

#[derive(Debug, Clone)]
pub struct TableOptions {
    pub workers: usize,
    /// When set, LP relaxation bounds are computed through the bridge.
    pub bridge: Option<SolverBridgeConfig>,
    /// Fill `time_s`; off by default so output is reproducible.
    pub timing: bool,
    pub caps: Caps,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            workers: 1,
            bridge: None,
            timing: false,
            caps: Caps::default(),
        }
    }
}

/// One line of the report; `None` fields are printed blank.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub opt: Option<i64>,
    pub std: Option<ModelStats>,
    pub std_bound: Option<f64>,
    pub vi: ModelStats,
    pub vi_bound: Option<f64>,
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

fn lp_bound(model: &MilpModel, bridge: Option<&SolverBridgeConfig>) -> Result<Option<f64>> {
    let Some(bridge) = bridge else {
        return Ok(None);
    };
    let config = SolverBridgeConfig {
        mode: SolveMode::LpRelaxation,
        ..bridge.clone()
    };
    Ok(Some(solve_external(model, &config)?.objective))
}

/// Builds one row per `N`: the optimum when `N` is within the exhaustive cap,
/// standard-IP sizes when within the expansion cap, value-indicator sizes in
/// the compatibility counting, and LP bounds when a bridge is given.
///
/// The value-indicator bound is taken from the parity model: with full-range
/// `L_d` the relaxation can put all weight on `z_{d,0}` and drops to 0.
pub fn table_harness(range: RangeInclusive<usize>, options: &TableOptions) -> Result<Vec<TableRow>> {
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty N range".into()));
    }
    let caps = &options.caps;
    let bridge = options.bridge.as_ref();
    range
        .map(|n| {
            let solved = if n <= caps.labs_exhaustive {
                Some(exhaustive_solve(n, options.workers, caps)?)
            } else {
                None
            };
            let (std, std_bound) = if n <= caps.labs_expand {
                let model = standard_ip(n, caps)?;
                (Some(model.stats()), lp_bound(&model, bridge)?)
            } else {
                (None, None)
            };
            let vi_model = value_indicator_ip(&LabsInstance::compat(n)?)?;
            let vi_bound = match bridge {
                Some(_) => lp_bound(&value_indicator_ip(&LabsInstance::new(n)?)?, bridge)?,
                None => None,
            };
            Ok(TableRow {
                n,
                opt: solved.as_ref().map(|r| r.optimum),
                std,
                std_bound,
                vi: vi_model.stats(),
                vi_bound,
                nodes: solved.as_ref().map(|r| r.nodes),
                time: solved.filter(|_| options.timing).map(|r| r.elapsed),
            })
        })
        .collect()
}

/// Six decimals with trailing zeros trimmed; `-0` prints as `0`.
fn format_bound(b: f64) -> String {
    let s = format!("{b:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn fields(row: &TableRow) -> [String; 10] {
    fn opt<T: ToString>(v: Option<T>) -> String {
        v.map(|v| v.to_string()).unwrap_or_default()
    }
    [
        row.n.to_string(),
        opt(row.opt),
        opt(row.std.map(|s| s.vars)),
        opt(row.std.map(|s| s.cons)),
        row.std_bound.map(format_bound).unwrap_or_default(),
        row.vi.vars.to_string(),
        row.vi.cons.to_string(),
        row.vi_bound.map(format_bound).unwrap_or_default(),
        opt(row.nodes),
        row.time.map(|t| format!("{:.3}", t.as_secs_f64())).unwrap_or_default(),
    ]
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&fields(row).join(","));
        out.push('\n');
    }
    out
}

/// Right-aligned columns under the CSV header names; blanks print as `-`.
pub fn render_table(rows: &[TableRow]) -> String {
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            fields(r)
                .into_iter()
                .map(|f| if f.is_empty() { "-".to_string() } else { f })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let mut line = |cols: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cols.zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  "));
    };
    line(&mut header.iter().copied());
    for row in &cells {
        line(&mut row.iter().map(String::as_str));
    }
    out
}
