//! Delegation to an external solver process.
//!
//! The model is written to an LP file, the configured shell command is run
//! with `{lp}` and `{sol}` replaced by the file paths, and the solution file
//! it leaves behind is parsed. Solution files hold `name value` lines, `#`
//! comments, and optionally `=obj= value` and `=status= word` lines.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::str::FromStr;

use num_traits::ToPrimitive;

use super::lp::{lp_objective_scale, write_lp, write_lp_relaxation};
use super::model::MilpModel;
use crate::error::{Error, Result};
use crate::rational::to_f64;

pub const ENV_COMMAND: &str = "PBLIN_SOLVER_CMD";
pub const ENV_MODE: &str = "PBLIN_SOLVER_MODE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    LpRelaxation,
    #[default]
    Integer,
}

impl FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lp_relaxation" | "lp" => Ok(SolveMode::LpRelaxation),
            "integer" | "mip" => Ok(SolveMode::Integer),
            other => Err(Error::InvalidArgument(format!("unknown solve mode `{other}`"))),
        }
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::LpRelaxation => "lp_relaxation",
            SolveMode::Integer => "integer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverBridgeConfig {
    /// Shell command with `{lp}` and `{sol}` placeholders.
    pub command: String,
    pub mode: SolveMode,
}

impl SolverBridgeConfig {
    pub fn new(command: impl Into<String>, mode: SolveMode) -> Result<Self> {
        let command = command.into();
        if command.trim().is_empty() {
            return Err(Error::InvalidArgument("solver command is empty".into()));
        }
        Ok(SolverBridgeConfig { command, mode })
    }

    /// Reads `PBLIN_SOLVER_CMD` and `PBLIN_SOLVER_MODE`; `None` when no
    /// command is set.
    pub fn from_env() -> Result<Option<Self>> {
        let Ok(command) = std::env::var(ENV_COMMAND) else {
            return Ok(None);
        };
        let mode = match std::env::var(ENV_MODE) {
            Ok(m) => m.parse()?,
            Err(_) => SolveMode::default(),
        };
        Self::new(command, mode).map(Some)
    }

    /// Parses `key = value` lines with keys `command` and `mode`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut command = None;
        let mut mode = SolveMode::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(no + 1, "expected `key = value`"))?;
            match key.trim() {
                "command" => command = Some(value.trim().to_string()),
                "mode" => mode = value.parse()?,
                other => return Err(Error::parse(no + 1, format!("unknown key `{other}`"))),
            }
        }
        let command = command.ok_or_else(|| Error::parse(0, "missing `command`"))?;
        Self::new(command, mode)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSolution {
    pub status: String,
    /// Objective of the solved problem, offset included.
    pub objective: f64,
    pub assignment: Option<BTreeMap<String, f64>>,
}

fn shell_quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

/// Writes the model, runs the solver and reads back its solution.
pub fn solve_external(model: &MilpModel, config: &SolverBridgeConfig) -> Result<ExternalSolution> {
    let dir = tempfile::tempdir()?;
    let lp_path = dir.path().join("model.lp");
    let sol_path = dir.path().join("model.sol");
    let text = match config.mode {
        SolveMode::LpRelaxation => write_lp_relaxation(model)?,
        SolveMode::Integer => write_lp(model)?,
    };
    std::fs::write(&lp_path, text)?;

    let command = config
        .command
        .replace("{lp}", &shell_quote(&lp_path))
        .replace("{sol}", &shell_quote(&sol_path));
    let output = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .output()
        .map_err(|source| Error::SolverLaunch {
            command: command.clone(),
            source,
        })?;
    if !output.status.success() {
        return Err(Error::SolverFailed {
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    let text = std::fs::read_to_string(&sol_path).map_err(|e| Error::SolverOutput {
        path: sol_path.clone(),
        message: format!("cannot read solution file: {e}"),
    })?;
    parse_solution(&text, model, &sol_path)
}

/// Parses a solution file for `model`. An `=obj=` line is taken as the
/// value of the exported (scaled, offset-free) objective; without one the
/// objective is recomputed from the assignment.
pub fn parse_solution(text: &str, model: &MilpModel, path: &Path) -> Result<ExternalSolution> {
    let bad = |line: usize, message: String| Error::SolverOutput {
        path: PathBuf::from(path),
        message: format!("line {line}: {message}"),
    };
    let number =
        |line: usize, s: &str| -> Result<f64> { s.parse::<f64>().map_err(|_| bad(line, format!("bad number `{s}`"))) };
    let mut status = "optimal".to_string();
    let mut reported = None;
    let mut assignment = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(key), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(no + 1, format!("expected `name value`, got `{line}`")));
        };
        match key {
            "=obj=" => reported = Some(number(no + 1, value)?),
            "=status=" => status = value.to_string(),
            name => {
                if model.var_index(name).is_none() {
                    return Err(bad(no + 1, format!("unknown variable `{name}`")));
                }
                assignment.insert(name.to_string(), number(no + 1, value)?);
            }
        }
    }
    let offset = to_f64(model.offset());
    let objective = match reported {
        Some(v) => v / lp_objective_scale(model).to_f64().unwrap_or(1.0) + offset,
        None if !assignment.is_empty() || model.objective_terms().next().is_none() => {
            model
                .objective_terms()
                .map(|(v, c)| to_f64(c) * assignment.get(&model.vars()[v].name).copied().unwrap_or(0.0))
                .sum::<f64>()
                + offset
        }
        None => {
            return Err(Error::SolverOutput {
                path: PathBuf::from(path),
                message: "no objective and no assignment".into(),
            })
        }
    };
    Ok(ExternalSolution {
        status,
        objective,
        assignment: (!assignment.is_empty()).then_some(assignment),
    })
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
        m.add_offset(&int(2));
        m.add_constraint("c1", [(x, int(1))], Sense::Ge, frac(1, 2)).unwrap();
        m
    }

    #[test]
    fn config_parsing() {
        let c = SolverBridgeConfig::parse("# solver\ncommand = run {lp} {sol}\nmode = lp_relaxation\n").unwrap();
        assert_eq!(c.command, "run {lp} {sol}");
        assert_eq!(c.mode, SolveMode::LpRelaxation);
        assert!(SolverBridgeConfig::parse("mode = integer\n").is_err());
        assert!(SolverBridgeConfig::parse("command = x\ncolour = red\n").is_err());
        assert!(SolverBridgeConfig::new("  ", SolveMode::Integer).is_err());
    }

    #[test]
    fn solution_parsing() {
        let m = tiny();
        let p = Path::new("s.sol");
        let s = parse_solution("# hi\nx1 0.5\n", &m, p).unwrap();
        assert_eq!(s.objective, 2.5);
        assert_eq!(s.assignment.unwrap()["x1"], 0.5);
        let s = parse_solution("=obj= 0.5\n=status= optimal\n", &m, p).unwrap();
        assert_eq!((s.objective, s.status.as_str()), (2.5, "optimal"));
        assert!(matches!(
            parse_solution("y 1\n", &m, p),
            Err(Error::SolverOutput { .. })
        ));
        assert!(matches!(parse_solution("x1\n", &m, p), Err(Error::SolverOutput { .. })));
        assert!(matches!(parse_solution("", &m, p), Err(Error::SolverOutput { .. })));
    }

    #[test]
    fn runs_a_shell_solver() {
        let config =
            SolverBridgeConfig::new("test -s {lp} && printf 'x1 0.5\\n' > {sol}", SolveMode::LpRelaxation).unwrap();
        let s = solve_external(&tiny(), &config).unwrap();
        assert_eq!(s.objective, 2.5);
    }

    #[test]
    fn reports_failures_distinctly() {
        let failing = SolverBridgeConfig::new("echo boom >&2; exit 3", SolveMode::Integer).unwrap();
        match solve_external(&tiny(), &failing) {
            Err(Error::SolverFailed { status, stderr }) => {
                assert!(status.contains('3'), "{status}");
                assert_eq!(stderr, "boom");
            }
            other => panic!("{other:?}"),
        }
        let silent = SolverBridgeConfig::new("true", SolveMode::Integer).unwrap();
        assert!(matches!(
            solve_external(&tiny(), &silent),
            Err(Error::SolverOutput { .. })
        ));
    }
}
