//! Command-line front end. Every run reads a JSON [`RunConfig`], and every
//! report embeds the resolved config and seed.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{KorobovError, Result};
use crate::format::{fmt_f64, to_json};
use crate::fourier::FourierPolynomial;
use crate::index_set::{self, IndexSet};
use crate::lattice::{self, SearchMode};
use crate::quantum::QuantumPlan;
use crate::randomized::{cost_model_randomized, McReport, McRun};
use crate::selftest;
use crate::space::{SpaceDescriptor, WeightSchedule};
use crate::tractability::{self, Setting};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Linear,
    Quadratic,
    Constant,
}

/// The cost `c(d)` of one function value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostOfD {
    pub kind: CostKind,
    pub scale: f64,
}

impl Default for CostOfD {
    fn default() -> Self {
        Self { kind: CostKind::Linear, scale: 1.0 }
    }
}

impl CostOfD {
    pub fn eval(&self, d: usize) -> f64 {
        let d = d as f64;
        match self.kind {
            CostKind::Linear => self.scale * d,
            CostKind::Quadratic => self.scale * d * d,
            CostKind::Constant => self.scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub index_set_max: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { index_set_max: index_set::DEFAULT_CAP }
    }
}

/// Random unit-norm input used by the approximation subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub support: usize,
    pub max_freq: u32,
}

impl Default for TestFunction {
    fn default() -> Self {
        Self { support: 10, max_freq: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(default = "default_mode")]
    pub mode: SearchMode,
}

fn default_mode() -> SearchMode {
    SearchMode::Cbc
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { n: 101, mode: SearchMode::Cbc }
    }
}

fn default_epsilon() -> f64 {
    0.25
}

fn default_trials() -> u64 {
    100
}

fn default_grid() -> Vec<f64> {
    (1..=6).map(|k| 0.5f64.powi(k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d: usize,
    pub alpha: f64,
    pub weights: WeightSchedule,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub cost_c_of_d: CostOfD,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default = "default_grid")]
    pub epsilon_grid: Vec<f64>,
    /// Dimensions for `growth`; empty means `[d]`.
    #[serde(default)]
    pub d_grid: Vec<usize>,
    #[serde(default)]
    pub lattice: LatticeConfig,
    #[serde(default)]
    pub test_function: TestFunction,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| KorobovError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(KorobovError::Config(format!("epsilon = {} must lie in (0, 1)", self.epsilon)));
        }
        if let Some(bad) = self.epsilon_grid.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return Err(KorobovError::Config(format!("epsilon_grid value {bad} outside (0, 1)")));
        }
        if self.trials == 0 {
            return Err(KorobovError::Config("trials must be positive".into()));
        }
        self.space().map(|_| ())
    }

    pub fn space(&self) -> Result<SpaceDescriptor> {
        SpaceDescriptor::new(self.d, self.alpha, self.weights.clone())
    }

    fn test_function(&self, space: &SpaceDescriptor) -> Result<FourierPolynomial> {
        FourierPolynomial::random_unit(space, self.test_function.support, self.test_function.max_freq, self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "korobov", version, about = "Approximation in weighted Korobov spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Overrides the seed of the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Enumerate R(eps, d).
    IndexSet,
    /// Truncate a random unit-norm input and report the exact error.
    ApproxWorst,
    /// Monte Carlo coefficient estimation with an error report.
    ApproxMc,
    /// The simulated quantum algorithm with a resource report.
    ApproxQuantum,
    /// Search and certify a lattice generator.
    LatticeSearch,
    /// Tractability verdicts for all settings.
    Tractability,
    /// |R(eps, d)| over the epsilon and dimension grids.
    Growth,
    /// Randomized against quantum cost.
    Speedup,
    /// Run the oracle suite.
    Selftest,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| KorobovError::Config("this subcommand needs --config FILE".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| KorobovError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn with_provenance(cfg: &RunConfig, report: impl Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(report)?;
    if let Value::Object(map) = &mut v {
        map.insert("config".into(), serde_json::to_value(cfg)?);
        map.insert("seed".into(), json!(cfg.seed));
    }
    Ok(v)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => csv_cell(&Value::String(other.to_string())),
    }
}

/// Top-level scalars of a report as `field,value` rows.
fn flat_csv(v: &Value) -> String {
    let mut out = String::from("field,value\n");
    if let Value::Object(map) = v {
        for (k, x) in map {
            if !x.is_object() && !x.is_array() {
                out.push_str(&format!("{k},{}\n", csv_cell(x)));
            }
        }
    }
    out
}

/// One subcommand; returns the text to emit.
pub fn execute(cli: &Cli) -> Result<String> {
    if cli.command == Command::Selftest {
        let report = selftest::run();
        let text = match cli.format {
            Some(Format::Csv) => {
                let mut out = String::from("name,passed,detail\n");
                for c in &report.checks {
                    out.push_str(&format!("{},{},{}\n", c.name, c.passed, csv_cell(&Value::String(c.detail.clone()))));
                }
                out
            }
            _ => to_json(&report)?,
        };
        if !report.all_passed {
            emit(cli, &text)?;
            return Err(KorobovError::Internal("selftest failed".into()));
        }
        return Ok(text);
    }

    let cfg = load_config(cli)?;
    let space = cfg.space()?;
    let c_of_d = |d: usize| cfg.cost_c_of_d.eval(d);
    let json_default = |v: Value| -> Result<String> {
        match cli.format {
            Some(Format::Csv) => Ok(flat_csv(&v)),
            _ => to_json(&v),
        }
    };

    match cli.command {
        Command::IndexSet => {
            let set = IndexSet::enumerate_with_cap(&space, cfg.epsilon, cfg.caps.index_set_max)?;
            match cli.format {
                Some(Format::Csv) => {
                    let header: Vec<String> = (1..=space.dim()).map(|j| format!("h{j}")).collect();
                    let mut out = header.join(",") + "\n";
                    for h in set.members() {
                        let row: Vec<String> = h.iter().map(|v| v.to_string()).collect();
                        out.push_str(&(row.join(",") + "\n"));
                    }
                    Ok(out)
                }
                _ => {
                    let mut v = with_provenance(&cfg, &set)?;
                    v["R_size"] = json!(set.cardinality());
                    to_json(&v)
                }
            }
        }
        Command::ApproxWorst => {
            let f = cfg.test_function(&space)?;
            let set = IndexSet::enumerate_with_cap(&space, cfg.epsilon, cfg.caps.index_set_max)?;
            let approx = set.truncate(&f)?;
            let error = approx.l2_distance(&f)?;
            json_default(with_provenance(
                &cfg,
                json!({
                    "epsilon": cfg.epsilon,
                    "R_size": set.cardinality(),
                    "input_norm": f.korobov_norm(&space)?,
                    "kept_terms": approx.len(),
                    "achieved_error": error,
                    "within_epsilon": error <= cfg.epsilon,
                }),
            )?)
        }
        Command::ApproxMc => {
            let f = cfg.test_function(&space)?;
            let run = McRun::new(&space, cfg.epsilon, cfg.seed)?;
            let report = McReport {
                epsilon: cfg.epsilon,
                n: run.n(),
                r_size: run.index_set().cardinality() as u64,
                expected_sq_error: run.expected_sq_error(&f)?,
                empirical: run.empirical_error(&f, cfg.trials)?,
                cost: cost_model_randomized(&space, cfg.epsilon, c_of_d)?,
            };
            json_default(with_provenance(&cfg, report)?)
        }
        Command::ApproxQuantum => {
            let f = cfg.test_function(&space)?;
            let plan = QuantumPlan::new(&space, cfg.epsilon, c_of_d)?;
            let out = plan.run_parallel(&f, cfg.seed)?;
            out.report().validate()?;
            json_default(with_provenance(&cfg, plan.report(&out))?)
        }
        Command::LatticeSearch => {
            let rule = lattice::search_generator(&space, cfg.lattice.n, cfg.lattice.mode)?;
            let error = lattice::worst_case_int_error(&space, &rule)?;
            let bound = lattice::int_error_bound(&space, rule.n());
            let dual = lattice::worst_case_int_error_dual(&space, &rule).ok();
            json_default(with_provenance(
                &cfg,
                json!({
                    "rule": rule,
                    "mode": cfg.lattice.mode,
                    "error": error,
                    "error_dual": dual,
                    "bound": bound,
                    "certified": error <= bound,
                }),
            )?)
        }
        Command::Tractability => {
            let verdicts = Setting::ALL
                .iter()
                .map(|&s| tractability::verdict(&space, s))
                .collect::<Result<Vec<_>>>()?;
            match cli.format {
                Some(Format::Csv) => {
                    let mut out = String::from("setting,strongly_tractable,tractable,exponent_low,exponent_high,notes\n");
                    for v in &verdicts {
                        let setting = serde_json::to_value(v.setting)?;
                        out.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            csv_cell(&setting),
                            v.strongly_tractable,
                            v.tractable,
                            fmt_f64(v.exponent_low),
                            fmt_f64(v.exponent_high),
                            csv_cell(&Value::String(v.notes.clone()))
                        ));
                    }
                    Ok(out)
                }
                _ => to_json(&with_provenance(
                    &cfg,
                    json!({ "exponent_all": tractability::exponent_all(&space)?, "verdicts": verdicts }),
                )?),
            }
        }
        Command::Growth => {
            let dims = if cfg.d_grid.is_empty() { vec![cfg.d] } else { cfg.d_grid.clone() };
            let study = tractability::growth_study(&space, &cfg.epsilon_grid, &dims, cfg.caps.index_set_max)?;
            match cli.format {
                Some(Format::Json) => to_json(&with_provenance(&cfg, &study)?),
                _ => Ok(study.to_csv()),
            }
        }
        Command::Speedup => {
            let table = tractability::speedup_table(&space, &cfg.epsilon_grid, c_of_d)?;
            match cli.format {
                Some(Format::Json) => to_json(&with_provenance(&cfg, &table)?),
                _ => Ok(table.to_csv()),
            }
        }
        Command::Selftest => unreachable!("handled above"),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Parses `args`, runs the subcommand and maps errors to exit codes:
/// 2 for configuration errors, 3 for infeasible runs and exceeded caps,
/// 1 otherwise.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
