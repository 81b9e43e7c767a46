//! Command-line front end. [`run`] is the whole program minus process exit.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::additive::{additive_stp_witness, classify_additive, ClassificationReport, StpVerdict};
use crate::configs::Config;
use crate::engine::{self, space_time, temporal_cycle, CycleResult};
use crate::error::CaError;
use crate::oracles::{equicontinuity_oracle, surjectivity_oracle, EquicontinuityOutcome};
use crate::periodicity::{
    self, blocking_word_search, find_stp_witness, jointly_periodic_points, product_witness_scan,
    stp_empty_scan, BlockingCert, JpPoint, ProductScanBounds, ProductWitness, ScanReport,
    StpWitness, WitnessSearch,
};
use crate::rules::{parse_rule_spec, Rule, TableRule};
use crate::sweep::{sweep, SweepSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "periodika",
    version,
    about = "Periodic points of one-dimensional cellular automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide surjectivity, sensitivity and the size of the strictly
    /// temporally periodic set.
    Classify(ClassifyArgs),
    /// Space-time diagram of a configuration.
    Simulate(SimulateArgs),
    /// Jointly periodic points of a given spatial period.
    Jp(JpArgs),
    /// Search for a blocking word.
    Blocking(BlockingArgs),
    /// Construct a strictly temporally periodic point.
    Witness(WitnessArgs),
    /// Search eventually periodic configurations for strictly temporally
    /// periodic points.
    Scan(ScanArgs),
    /// Classify every additive rule of a modulus and radius.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Ascii,
    Pgm,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub rule: String,
    /// Power budget of the equicontinuity search for table rules.
    #[arg(long, default_value_t = 64)]
    pub budget: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub rule: String,
    #[arg(long)]
    pub config: String,
    #[arg(long, default_value_t = 16)]
    pub steps: usize,
    /// Inclusive coordinate window `lo:hi`.
    #[arg(long, allow_hyphen_values = true, default_value = "-16:16")]
    pub window: String,
    /// Also report the temporal cycle of the configuration.
    #[arg(long)]
    pub cycle: bool,
    #[arg(long, default_value_t = engine::DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    #[arg(long, default_value_t = engine::DEFAULT_MAX_MID)]
    pub max_mid: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct JpArgs {
    #[arg(long)]
    pub rule: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub t_max: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SearchBounds {
    #[arg(long, default_value_t = 6)]
    pub k_max: usize,
    #[arg(long, default_value_t = 2)]
    pub bg_period: usize,
    #[arg(long, default_value_t = 16)]
    pub steps: usize,
    #[arg(long, default_value_t = 64)]
    pub t_max: usize,
    #[arg(long, default_value_t = 64)]
    pub budget: u32,
}

impl SearchBounds {
    fn search(&self) -> WitnessSearch {
        WitnessSearch {
            k_max: self.k_max,
            bg_period: self.bg_period,
            steps: self.steps,
            t_max: self.t_max,
            equicontinuity_budget: self.budget,
        }
    }
}

#[derive(Args, Debug)]
pub struct BlockingArgs {
    #[arg(long)]
    pub rule: String,
    #[command(flatten)]
    pub bounds: SearchBounds,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub rule: String,
    /// Second factor: search the product rule instead.
    #[arg(long)]
    pub product: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub jp_len_max: usize,
    #[command(flatten)]
    pub bounds: SearchBounds,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub rule: String,
    #[arg(long, default_value_t = periodicity::DEFAULT_SCAN_TAIL_MAX)]
    pub tail_period_max: usize,
    #[arg(long, default_value_t = periodicity::DEFAULT_SCAN_MID_MAX)]
    pub mid_len_max: usize,
    #[arg(long, default_value_t = periodicity::DEFAULT_SCAN_T_MAX)]
    pub t_max: usize,
    #[arg(long, default_value_t = periodicity::DEFAULT_VIOLATION_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Cross-check every verdict against the brute-force oracles.
    #[arg(long)]
    pub check_oracles: bool,
    #[arg(long, default_value_t = 64)]
    pub budget: u32,
    #[command(flatten)]
    pub output: Output,
}

/// Oracle-only classification of a rule given by its table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub rule: String,
    pub surjective: bool,
    pub budget: u32,
    pub equicontinuity: EquicontinuityOutcome,
    pub stp: StpVerdict,
}

#[derive(Serialize)]
struct SimulateOutput {
    rule: String,
    config: String,
    steps: usize,
    lo: i64,
    hi: i64,
    rows: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<CycleResult>,
    max_steps: usize,
    max_mid: usize,
}

#[derive(Serialize)]
struct JpOutput {
    rule: String,
    n: usize,
    t_max: usize,
    points: Vec<JpPoint>,
}

#[derive(Serialize)]
struct BlockingOutput {
    rule: String,
    bounds: WitnessSearch,
    certificate: Option<BlockingCert>,
}

#[derive(Serialize)]
struct WitnessOutput {
    rule: String,
    bounds: WitnessSearch,
    witness: Option<StpWitness>,
}

#[derive(Serialize)]
struct ProductOutput {
    first: String,
    second: String,
    bounds: ProductScanBounds,
    witnesses: Vec<ProductWitness>,
}

#[derive(Serialize)]
struct ScanOutput {
    rule: String,
    #[serde(flatten)]
    report: ScanReport,
}

enum Failure {
    Ca(CaError),
    Io(String),
    Usage(String),
}

impl From<CaError> for Failure {
    fn from(e: CaError) -> Self {
        Failure::Ca(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Ca(CaError::ResourceCap(_)) => EXIT_RESOURCE,
            Failure::Ca(CaError::NotSurjective | CaError::DegenerateMiddle) => EXIT_FAILURE,
            Failure::Ca(_) | Failure::Usage(_) => EXIT_PARSE,
            Failure::Io(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Ca(e) => e.to_string(),
            Failure::Io(s) | Failure::Usage(s) => s.clone(),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return EXIT_PARSE;
            }
            let _ = stdout.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn rule_table(spec: &str) -> Outcome<(Rule, TableRule)> {
    let rule = parse_rule_spec(spec)?;
    let table = rule.to_table()?;
    Ok((rule, table))
}

fn parse_window(s: &str) -> Outcome<(i64, i64)> {
    let bad = || Failure::Usage(format!("window `{s}` is not of the form lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Failure::Usage(format!("window `{s}` is empty")));
    }
    Ok((lo, hi))
}

fn positive(name: &str, value: usize) -> Outcome<()> {
    if value == 0 {
        Err(Failure::Usage(format!("--{name} must be positive")))
    } else {
        Ok(())
    }
}

fn emit(output: &Output, bytes: &[u8], stdout: &mut dyn Write) -> Outcome<()> {
    match &output.out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("cannot write output: {e}"))),
    }
}

/// `path = value` lines for every leaf of a JSON document.
fn flatten_text(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, child, out);
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
            other => out.push_str(&format!("{prefix} = {other}\n")),
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}

fn emit_document<T: Serialize>(output: &Output, doc: &T, stdout: &mut dyn Write) -> Outcome<()> {
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("outputs serialize");
            s.push('\n');
            s
        }
        Format::Text => flatten_text(&serde_json::to_value(doc).expect("outputs serialize")),
        Format::Ascii | Format::Pgm => {
            return Err(Failure::Usage(format!(
                "format {:?} is only available for simulate",
                output.format
            )))
        }
    };
    emit(output, text.as_bytes(), stdout)
}

/// Classification of a rule given by its table, from the oracles alone.
/// A surjective rule with a repeating power has `F^p = id`, so every
/// point is temporally periodic and the spatially aperiodic ones form a
/// residual set.
pub fn classify_table(spec: &str, rule: &TableRule, budget: u32) -> crate::Result<TableReport> {
    let surjective = surjectivity_oracle(rule)?;
    let equicontinuity = equicontinuity_oracle(rule, budget)?;
    let stp = if surjective && equicontinuity.cert().is_some() {
        StpVerdict::Residual
    } else {
        StpVerdict::Unknown
    };
    Ok(TableReport {
        rule: spec.to_string(),
        surjective,
        budget,
        equicontinuity,
        stp,
    })
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Outcome<()> {
    match command {
        Command::Classify(a) => {
            let rule = parse_rule_spec(&a.rule)?;
            match rule.as_additive() {
                Some(additive) => {
                    let report: ClassificationReport = classify_additive(additive)?;
                    emit_document(&a.output, &report, stdout)
                }
                None => {
                    positive("budget", a.budget as usize)?;
                    let report = classify_table(&a.rule, &rule.to_table()?, a.budget)?;
                    emit_document(&a.output, &report, stdout)
                }
            }
        }
        Command::Simulate(a) => simulate(a, stdout),
        Command::Jp(a) => {
            positive("n", a.n)?;
            positive("t-max", a.t_max)?;
            let (_, table) = rule_table(&a.rule)?;
            let census = jointly_periodic_points(&table, a.n, a.t_max)?;
            let doc = JpOutput {
                rule: a.rule.clone(),
                n: a.n,
                t_max: a.t_max,
                points: census.points,
            };
            emit_document(&a.output, &doc, stdout)
        }
        Command::Blocking(a) => {
            let (_, table) = rule_table(&a.rule)?;
            let bounds = a.bounds.search();
            check_search(&bounds)?;
            let cert = equicontinuity_oracle(&table, bounds.equicontinuity_budget)?.cert();
            let found =
                blocking_word_search(&table, bounds.k_max, bounds.bg_period, bounds.steps, cert)?;
            let doc = BlockingOutput {
                rule: a.rule.clone(),
                bounds,
                certificate: found,
            };
            emit_document(&a.output, &doc, stdout)
        }
        Command::Witness(a) => {
            let (rule, table) = rule_table(&a.rule)?;
            let bounds = a.bounds.search();
            check_search(&bounds)?;
            if let Some(second) = &a.product {
                let (_, g) = rule_table(second)?;
                let product_bounds = ProductScanBounds {
                    witness: bounds,
                    jp_len_max: a.jp_len_max,
                };
                let witnesses = product_witness_scan(&table, &g, &product_bounds)?;
                let doc = ProductOutput {
                    first: a.rule.clone(),
                    second: second.clone(),
                    bounds: product_bounds,
                    witnesses,
                };
                return emit_document(&a.output, &doc, stdout);
            }
            let witness = match rule.as_additive() {
                Some(additive) => additive_stp_witness(additive, &bounds)?,
                None => find_stp_witness(&table, &bounds)?,
            };
            let doc = WitnessOutput {
                rule: a.rule.clone(),
                bounds,
                witness,
            };
            emit_document(&a.output, &doc, stdout)
        }
        Command::Scan(a) => {
            positive("tail-period-max", a.tail_period_max)?;
            positive("t-max", a.t_max)?;
            let (_, table) = rule_table(&a.rule)?;
            let report = stp_empty_scan(&table, a.tail_period_max, a.mid_len_max, a.t_max, a.cap)?;
            let doc = ScanOutput {
                rule: a.rule.clone(),
                report,
            };
            emit_document(&a.output, &doc, stdout)
        }
        Command::Sweep(a) => {
            positive("budget", a.budget as usize)?;
            let summary: SweepSummary = sweep(a.m, a.r, a.check_oracles.then_some(a.budget))?;
            emit_document(&a.output, &summary, stdout)
        }
    }
}

fn check_search(bounds: &WitnessSearch) -> Outcome<()> {
    positive("k-max", bounds.k_max)?;
    positive("bg-period", bounds.bg_period)?;
    positive("t-max", bounds.t_max)?;
    positive("budget", bounds.equicontinuity_budget as usize)
}

fn simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Outcome<()> {
    let (_, table) = rule_table(&a.rule)?;
    let config: Config = a.config.parse()?;
    let (lo, hi) = parse_window(&a.window)?;
    positive("max-steps", a.max_steps)?;
    let (trace, cycle) = match &config {
        Config::Cyclic(x) => (
            space_time(&table, x, a.steps, lo, hi)?,
            a.cycle
                .then(|| temporal_cycle(&table, x, a.max_steps, a.max_mid))
                .transpose()?,
        ),
        Config::Ep(x) => (
            space_time(&table, x, a.steps, lo, hi)?,
            a.cycle
                .then(|| temporal_cycle(&table, x, a.max_steps, a.max_mid))
                .transpose()?,
        ),
    };
    match a.output.format {
        Format::Ascii => emit(&a.output, trace.to_ascii().as_bytes(), stdout),
        Format::Pgm => emit(&a.output, &trace.to_pgm(), stdout),
        Format::Json | Format::Text => {
            let doc = SimulateOutput {
                rule: a.rule.clone(),
                config: config.to_string(),
                steps: a.steps,
                lo,
                hi,
                rows: trace
                    .rows
                    .iter()
                    .map(|r| crate::configs::word_string(r))
                    .collect(),
                cycle,
                max_steps: a.max_steps,
                max_mid: a.max_mid,
            };
            emit_document(&a.output, &doc, stdout)
        }
    }
}
