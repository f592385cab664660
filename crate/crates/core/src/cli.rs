//! The `pblin` command line.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::caps::Caps;
use crate::error::{Error, ErrorKind, Result};
use crate::ipmodels::{
    fortet_from_certificate, nogood_model, separate_nogood, solve_external, write_lp, write_lp_relaxation, MilpModel,
    SolveMode, SolverBridgeConfig, ENV_COMMAND, ENV_MODE,
};
use crate::labs::{
    energy, exhaustive_solve, f_bern_poly, indicator_only_ip, render_csv, render_table, standard_ip, table_harness,
    value_indicator_ip, LabsInstance, LdMode, PairVarMode, SpinSequence, TableOptions,
};
use crate::lincomplexity::{lc_boolean, lc_monomial, lc_signed_products_exact, random_table_check, LcSearchBudget};
use crate::pbf::{
    parse_poly, verify_certificate, BooleanFn, Family, LinearizationCertificate, MultilinearPoly, TruthTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_BRIDGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "pblin",
    version,
    about = "Linearization complexity of pseudo-Boolean functions"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Machine-readable CSV instead of the human format.
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `key = value` configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one cap, e.g. `--cap labs_exhaustive=20`.
    #[arg(long = "cap", global = true, value_name = "NAME=VALUE")]
    caps: Vec<String>,
    /// Lower every cap to at most this value.
    #[arg(long, global = true, value_name = "N")]
    enum_cap: Option<usize>,
    /// Allow caps above their defaults.
    #[arg(long, global = true)]
    unsafe_caps: bool,
    /// Report wall-clock times.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a polynomial in canonical form.
    Expand {
        /// Polynomial file, `-` for stdin.
        #[arg(required_unless_present = "labs", conflicts_with = "labs")]
        input: Option<PathBuf>,
        /// Expand the LABS objective of length N instead.
        #[arg(long, value_name = "N")]
        labs: Option<usize>,
    },
    /// Linearization complexity of a polynomial.
    Lc {
        input: PathBuf,
        #[arg(long, value_parser = parse_family, default_value = "M")]
        family: Family,
        /// Largest `|I| + |J|` tried by the signed-product search.
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        /// Largest support tried by the signed-product search.
        #[arg(long, default_value_t = 8)]
        max_support: usize,
        /// Seconds allowed for the signed-product search.
        #[arg(long, default_value_t = 60)]
        time_limit: u64,
        /// Largest number of Boolean functions tried for family B.
        #[arg(long, default_value_t = 8)]
        k_cap: usize,
    },
    /// Build an IP model and print its size.
    Model(ModelArgs),
    /// Low-autocorrelation binary sequences.
    Labs {
        #[command(subcommand)]
        command: LabsCommand,
    },
    /// Separate the no-good rows of a Boolean function at a point.
    Separate {
        /// Truth-table file: `n=<arity>` then a 0/1 string indexed by vertex.
        input: PathBuf,
        /// Comma-separated values of x in [0,1].
        #[arg(long, value_name = "X1,X2,..")]
        x: String,
        /// Value of the auxiliary variable y in [0,1].
        #[arg(long)]
        y: f64,
    },
    /// Interpolate random rational tables and compare lc_M with 2^n - n - 1.
    CheckRandom {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Standard,
    IndicatorOnly,
    ValueIndicator,
    Fortet,
    Nogood,
}

#[derive(Debug, Args)]
struct ModelArgs {
    kind: ModelKind,
    /// N for the LABS models, a polynomial file for fortet and nogood.
    target: String,
    /// Ordered pair variables and full-range L_d.
    #[arg(long)]
    compat: bool,
    /// Value range of the correlations: `parity` or `full-range`
    #[arg(long, value_parser = parse_ld_mode)]
    ld_mode: Option<LdMode>,
    /// Pair variables: `upper-triangle` or `ordered-compat`
    #[arg(long, value_parser = parse_pair_mode)]
    pair_mode: Option<PairVarMode>,
    /// Certificate family for fortet (M or C) and nogood (M, C or B).
    #[arg(long, value_parser = parse_family, default_value = "M")]
    family: Family,
    /// Write the model in LP format.
    #[arg(long, value_name = "PATH")]
    write_lp: Option<PathBuf>,
    /// Write the LP relaxation instead of the integer program.
    #[arg(long)]
    relaxation: bool,
    /// Solve through the configured external solver.
    #[arg(long)]
    solve: bool,
}

#[derive(Debug, Subcommand)]
enum LabsCommand {
    /// Exact optimum by exhaustive search.
    Solve { n: usize },
    /// Energy of a `+`/`-` sequence.
    Energy { sequence: String },
    /// Table of model sizes, optima and (with a solver) LP bounds.
    Table {
        /// `N1..N2` or a single N.
        #[arg(value_parser = parse_range)]
        range: RangeInclusive<usize>,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ld_mode(s: &str) -> std::result::Result<LdMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pair_mode(s: &str) -> std::result::Result<PairVarMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `N1..N2` or `N`, got `{s}`");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Settings after merging the config file, the environment and the flags.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub solver: Option<SolverBridgeConfig>,
    pub caps: Caps,
    pub csv: bool,
    pub seed: u64,
    pub workers: usize,
    pub timing: bool,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            solver: None,
            caps: Caps::default(),
            csv: false,
            seed: 0,
            workers: 1,
            timing: false,
        }
    }
}

impl CliConfig {
    /// Applies `key = value` lines. Keys: `solver_command`, `solver_mode`,
    /// `format` (`table` or `csv`), `seed`, `workers`, `cap.<name>`.
    pub fn apply_file(&mut self, text: &str, unsafe_caps: bool) -> Result<()> {
        let mut command = None;
        let mut mode = None;
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |m: String| Error::Parse {
                line: no + 1,
                message: m,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value
                    .parse::<u64>()
                    .map_err(|_| parse_err(format!("bad number `{value}`")))
            };
            match key {
                "solver_command" => command = Some(value.to_string()),
                "solver_mode" => mode = Some(value.parse::<SolveMode>()?),
                "format" => {
                    self.csv = match value {
                        "csv" => true,
                        "table" => false,
                        other => return Err(parse_err(format!("unknown format `{other}`"))),
                    }
                }
                "seed" => self.seed = number()?,
                "workers" => self.workers = number()? as usize,
                _ => match key.strip_prefix("cap.") {
                    Some(name) => self.caps.set(name, number()? as usize, unsafe_caps)?,
                    None => return Err(parse_err(format!("unknown key `{key}`"))),
                },
            }
        }
        if let Some(command) = command {
            self.solver = Some(SolverBridgeConfig::new(command, mode.unwrap_or_default())?);
        } else if let (Some(mode), Some(solver)) = (mode, self.solver.as_mut()) {
            solver.mode = mode;
        }
        Ok(())
    }

    fn from_args(global: &GlobalArgs) -> Result<Self> {
        let mut config = CliConfig::default();
        if let Some(path) = &global.config {
            config.apply_file(&std::fs::read_to_string(path)?, global.unsafe_caps)?;
        }
        if let Ok(command) = std::env::var(ENV_COMMAND) {
            let mode = match std::env::var(ENV_MODE) {
                Ok(m) => m.parse()?,
                Err(_) => config.solver.as_ref().map(|s| s.mode).unwrap_or_default(),
            };
            config.solver = Some(SolverBridgeConfig::new(command, mode)?);
        }
        if let Some(limit) = global.enum_cap {
            config.caps = config.caps.lowered_to(limit);
        }
        for spec in &global.caps {
            let (name, value) = spec
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected NAME=VALUE, got `{spec}`")))?;
            let value = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad cap value in `{spec}`")))?;
            config.caps.set(name.trim(), value, global.unsafe_caps)?;
        }
        config.csv |= global.csv;
        config.timing |= global.timing;
        if let Some(seed) = global.seed {
            config.seed = seed;
        }
        if let Some(workers) = global.workers {
            config.workers = workers;
        }
        if config.workers == 0 {
            return Err(Error::InvalidArgument("--workers must be positive".into()));
        }
        Ok(config)
    }
}

pub fn exit_code(error: &Error) -> i32 {
    match error.kind() {
        ErrorKind::BadInput => EXIT_BAD_INPUT,
        ErrorKind::CapExceeded => EXIT_CAP,
        ErrorKind::Bridge => EXIT_BRIDGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let result = CliConfig::from_args(&cli.global).and_then(|config| execute(&cli.command, &config, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_poly(path: &Path) -> Result<MultilinearPoly> {
    parse_poly(&read_input(path)?)
}

/// `n=<arity>` followed by the table bits.
fn read_truth_table(path: &Path) -> Result<TruthTable> {
    let text = read_input(path)?;
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n=<arity>` header"))?;
    let arity = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::parse(1, "expected `n=<arity>`"))?;
    TruthTable::parse(arity, &lines.collect::<String>())
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e)
}

fn execute(command: &Command, config: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Expand { input, labs } => {
            let poly = match (input, labs) {
                (_, Some(n)) => f_bern_poly(*n, &config.caps)?,
                (Some(path), None) => read_poly(path)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            write!(out, "{poly}").map_err(io)?;
        }
        Command::Lc {
            input,
            family,
            max_degree,
            max_support,
            time_limit,
            k_cap,
        } => {
            let poly = read_poly(input)?;
            let budget = LcSearchBudget {
                max_degree: *max_degree,
                max_support: *max_support,
                time_limit: Duration::from_secs(*time_limit),
            };
            cmd_lc(&poly, *family, &budget, *k_cap, config, out)?;
        }
        Command::Model(args) => return cmd_model(args, config, out),
        Command::Labs { command } => cmd_labs(command, config, out)?,
        Command::Separate { input, x, y } => {
            let table = read_truth_table(input)?;
            let x_hat = x
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad coordinate `{v}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let g = BooleanFn::from_table(table);
            match separate_nogood(&g, *y, &x_hat)? {
                Some(cut) => writeln!(out, "violated: {cut} (violation {:.6})", cut.violation),
                None => writeln!(out, "none"),
            }
            .map_err(io)?;
        }
        Command::CheckRandom { n, samples } => {
            let check = random_table_check(*n, *samples, config.seed, &config.caps)?;
            if config.csv {
                writeln!(out, "n,samples,seed,bound,at_bound,max_lc").map_err(io)?;
                writeln!(
                    out,
                    "{n},{},{},{},{},{}",
                    check.samples, config.seed, check.bound, check.at_bound, check.max_lc
                )
                .map_err(io)?;
            } else {
                writeln!(
                    out,
                    "n={n} samples={} seed={} bound={} at_bound={} max_lc={}",
                    check.samples, config.seed, check.bound, check.at_bound, check.max_lc
                )
                .map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_lc(
    poly: &MultilinearPoly,
    family: Family,
    budget: &LcSearchBudget,
    k_cap: usize,
    config: &CliConfig,
    out: &mut dyn Write,
) -> Result<()> {
    let caps = &config.caps;
    let (k, exact, certificate) = match family {
        Family::M => (lc_monomial(poly), true, LinearizationCertificate::monomial(poly)?),
        Family::C => {
            let found = lc_signed_products_exact(poly, budget, caps)?;
            (found.size(), found.optimal, found.certificate)
        }
        Family::B => {
            let f = |x: &crate::pbf::PointAssignment| poly.evaluate(x).expect("arity checked");
            let cover = lc_boolean(f, poly.arity(), k_cap, caps)?;
            (cover.k, cover.exact, cover.certificate)
        }
    };
    let verified = verify_certificate(
        |x| poly.evaluate(x).expect("arity checked"),
        poly.arity(),
        &certificate,
        caps,
    )?;
    if config.csv {
        writeln!(out, "family,n,k,exact,verified").map_err(io)?;
        writeln!(out, "{family},{},{k},{exact},{verified}", poly.arity()).map_err(io)?;
    } else {
        writeln!(
            out,
            "family={family} n={} k={k} exact={exact} verified={verified}",
            poly.arity()
        )
        .map_err(io)?;
        write!(out, "{certificate}").map_err(io)?;
    }
    if !verified {
        return Err(Error::InvalidArgument("certificate failed verification".into()));
    }
    Ok(())
}

fn labs_n(target: &str) -> Result<usize> {
    target
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("expected N, got `{target}`")))
}

fn certificate_for(poly: &MultilinearPoly, family: Family, caps: &Caps) -> Result<LinearizationCertificate> {
    Ok(match family {
        Family::M => LinearizationCertificate::monomial(poly)?,
        Family::C => lc_signed_products_exact(poly, &LcSearchBudget::default(), caps)?.certificate,
        Family::B => {
            let f = |x: &crate::pbf::PointAssignment| poly.evaluate(x).expect("arity checked");
            lc_boolean(f, poly.arity(), caps.cover_k, caps)?.certificate
        }
    })
}

fn cmd_model(args: &ModelArgs, config: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let caps = &config.caps;
    let model: MilpModel = match args.kind {
        ModelKind::Standard => standard_ip(labs_n(&args.target)?, caps)?,
        ModelKind::IndicatorOnly => indicator_only_ip(labs_n(&args.target)?, caps)?,
        ModelKind::ValueIndicator => {
            let n = labs_n(&args.target)?;
            let mut instance = if args.compat {
                LabsInstance::compat(n)?
            } else {
                LabsInstance::new(n)?
            };
            if let Some(mode) = args.ld_mode {
                instance.ld_mode = mode;
            }
            if let Some(mode) = args.pair_mode {
                instance.pair_var_mode = mode;
            }
            value_indicator_ip(&instance)?
        }
        ModelKind::Fortet => {
            let poly = read_poly(Path::new(&args.target))?;
            fortet_from_certificate(&certificate_for(&poly, args.family, caps)?)?
        }
        ModelKind::Nogood => {
            let poly = read_poly(Path::new(&args.target))?;
            Caps::check("no-good arity", poly.arity(), caps.nogood_arity)?;
            let cert = certificate_for(&poly, args.family, caps)?;
            let fns = cert
                .terms()
                .iter()
                .map(|(g, b)| Ok((g.to_boolean_fn(cert.arity())?, b.clone())))
                .collect::<Result<Vec<_>>>()?;
            nogood_model(&fns, cert.a(), cert.beta(), cert.arity(), caps)?
        }
    };
    let stats = model.stats();
    if let Some(path) = &args.write_lp {
        let text = if args.relaxation {
            write_lp_relaxation(&model)?
        } else {
            write_lp(&model)?
        };
        std::fs::write(path, text)?;
    }
    let solution = if args.solve {
        let mut bridge = config
            .solver
            .clone()
            .ok_or_else(|| Error::InvalidArgument(format!("--solve needs a solver command ({ENV_COMMAND})")))?;
        if args.relaxation {
            bridge.mode = SolveMode::LpRelaxation;
        }
        Some((bridge.mode, solve_external(&model, &bridge)?))
    } else {
        None
    };
    if config.csv {
        writeln!(out, "model,vars,cons,nonzeros,status,objective").map_err(io)?;
        let (status, objective) = solution
            .as_ref()
            .map(|(_, s)| (s.status.clone(), s.objective.to_string()))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{status},{objective}",
            model.name(),
            stats.vars,
            stats.cons,
            stats.nonzeros
        )
        .map_err(io)?;
    } else {
        writeln!(
            out,
            "model={} vars={} cons={} nonzeros={}",
            model.name(),
            stats.vars,
            stats.cons,
            stats.nonzeros
        )
        .map_err(io)?;
        if let Some((mode, s)) = &solution {
            writeln!(out, "mode={mode} status={} objective={}", s.status, s.objective).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_labs(command: &LabsCommand, config: &CliConfig, out: &mut dyn Write) -> Result<()> {
    match command {
        LabsCommand::Solve { n } => {
            let r = exhaustive_solve(*n, config.workers, &config.caps)?;
            let time = config.timing.then(|| format!("{:.3}", r.elapsed.as_secs_f64()));
            if config.csv {
                writeln!(out, "N,opt,witness,nodes,time_s").map_err(io)?;
                writeln!(
                    out,
                    "{n},{},{},{},{}",
                    r.optimum,
                    r.witness,
                    r.nodes,
                    time.unwrap_or_default()
                )
                .map_err(io)?;
            } else {
                write!(out, "N={n} opt={} witness={} nodes={}", r.optimum, r.witness, r.nodes).map_err(io)?;
                if let Some(t) = time {
                    write!(out, " time_s={t}").map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
        }
        LabsCommand::Energy { sequence } => {
            let s: SpinSequence = sequence.parse()?;
            if config.csv {
                writeln!(out, "sequence,energy\n{s},{}", energy(&s)).map_err(io)?;
            } else {
                writeln!(out, "energy={}", energy(&s)).map_err(io)?;
            }
        }
        LabsCommand::Table { range } => {
            let options = TableOptions {
                workers: config.workers,
                bridge: config.solver.clone(),
                timing: config.timing,
                caps: config.caps.clone(),
            };
            let rows = table_harness(range.clone(), &options)?;
            let text = if config.csv {
                render_csv(&rows)
            } else {
                render_table(&rows)
            };
            out.write_all(text.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("pblin").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..10").unwrap(), 3..=10);
        assert_eq!(parse_range("3..=4").unwrap(), 3..=4);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn config_file() {
        let mut c = CliConfig::default();
        c.apply_file("# comment\nformat = csv\nseed = 9\ncap.labs_exhaustive = 12\nsolver_command = echo {lp}\nsolver_mode = lp\n", false)
            .unwrap();
        assert!(c.csv);
        assert_eq!(c.seed, 9);
        assert_eq!(c.caps.labs_exhaustive, 12);
        assert_eq!(c.solver.unwrap().mode, SolveMode::LpRelaxation);
        let mut c = CliConfig::default();
        assert!(c.apply_file("cap.labs_exhaustive = 40", false).is_err());
        assert!(c.apply_file("cap.labs_exhaustive = 40", true).is_ok());
        assert!(c.apply_file("bogus = 1", false).is_err());
    }

    #[test]
    fn energy_and_solve() {
        assert_eq!(
            run_args(&["labs", "energy", "+++-"]),
            (0, "energy=2\n".into(), String::new())
        );
        let (code, out, _) = run_args(&["labs", "solve", "13"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("N=13 opt=6 witness="), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["labs", "energy", "+0"]).0, EXIT_BAD_INPUT);
        assert_eq!(
            run_args(&["labs", "solve", "5", "--cap", "labs_exhaustive=4"]).0,
            EXIT_CAP
        );
        assert_eq!(
            run_args(&["labs", "solve", "5", "--cap", "labs_exhaustive=40"]).0,
            EXIT_BAD_INPUT
        );
        assert_eq!(run_args(&["bogus"]).0, EXIT_BAD_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }
}
