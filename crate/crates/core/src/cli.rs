//! `keepdice` command-line front end.
//!
//! Every subcommand produces an [`OutputDocument`] rendered as JSON (default)
//! or CSV. Exact values are `"num/den"` strings; columns ending in `_approx`
//! hold decimal approximations with `--precision` fractional digits.
//!
//! Exit status: 0 on success, 1 on a domain error (one line on stderr of the
//! form `error: E_CODE: message`), 2 on a usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::builder::PossibleValuesParser;
use clap::builder::TypedValueParser;
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asymptotics;
use crate::error::Error;
use crate::exact::{self, PowerSumRoute};
use crate::experiment::{ExperimentSpec, Mode};
use crate::montecarlo;
use crate::rational::{to_decimal_string, to_fraction_string, Rational};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(
    name = "keepdice",
    version,
    about = "Exact distributions and expected values for keep-highest / keep-lowest dice rolls"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Fractional digits in decimal approximations.
    #[arg(long, default_value_t = 6, global = true)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact frequency and probability of every outcome.
    Pmf(ExperimentArgs),
    /// Exact expected value.
    Ev(ExperimentArgs),
    /// Large-die limit of E/s.
    Limit(LimitArgs),
    /// Relative gain of advantage over a single roll.
    Gain(GainLossArgs),
    /// Relative loss of disadvantage against a single roll.
    Loss(GainLossArgs),
    /// Exact E/s along a schedule of die sizes, with the gap to the limit.
    Converge(ConvergeArgs),
    /// Seeded Monte Carlo simulation compared against the exact PMF.
    Simulate(SimulateArgs),
    /// Bernoulli numbers B_0..B_n (B_1 = -1/2).
    Bernoulli(BernoulliArgs),
}

fn mode_parser() -> impl TypedValueParser<Value = Mode> {
    PossibleValuesParser::new(Mode::ALL.map(Mode::name))
        .map(|s| s.parse::<Mode>().expect("restricted to known modes"))
}

/// Accepts a plain integer or `base^exp`, e.g. `10^18`.
fn parse_sides(text: &str) -> Result<u64, String> {
    let text = text.trim();
    let parsed = match text.split_once('^') {
        Some((base, exp)) => {
            let base: u64 = base.trim().parse().map_err(|e| format!("bad base: {e}"))?;
            let exp: u32 = exp
                .trim()
                .parse()
                .map_err(|e| format!("bad exponent: {e}"))?;
            base.checked_pow(exp)
        }
        None => return text.parse().map_err(|e| format!("{e}")),
    };
    parsed.ok_or_else(|| format!("`{text}` does not fit in 64 bits"))
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long, value_parser = mode_parser())]
    mode: Mode,
    /// Number of rolls; defaults to 1 in single mode.
    #[arg(short, long)]
    rolls: Option<u32>,
    /// Number of sides, e.g. 20 or 10^18.
    #[arg(short, long, value_parser = parse_sides)]
    sides: u64,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, value_parser = mode_parser())]
    mode: Mode,
    #[arg(short, long)]
    rolls: Option<u32>,
}

#[derive(Debug, Args)]
struct GainLossArgs {
    #[arg(short, long)]
    rolls: u32,
    #[arg(short, long, value_parser = parse_sides)]
    sides: u64,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long, value_parser = mode_parser())]
    mode: Mode,
    #[arg(short, long)]
    rolls: Option<u32>,
    /// Comma-separated, strictly increasing die sizes.
    #[arg(short, long, value_parser = parse_sides, value_delimiter = ',', required = true)]
    sides: Vec<u64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BernoulliArgs {
    /// Largest index n.
    #[arg(short = 'n', long, default_value_t = 20)]
    max_index: usize,
}

/// Machine-readable result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    /// Column order of each row; also the CSV header.
    pub columns: Vec<String>,
    pub rows: Vec<BTreeMap<String, String>>,
    /// Run-level statistics for commands that have them (`simulate`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<BTreeMap<String, String>>,
}

impl OutputDocument {
    fn new(command: &str, columns: &[&str]) -> Self {
        OutputDocument {
            schema_version: SCHEMA_VERSION.to_owned(),
            command: command.to_owned(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
            summary: None,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_owned(), value.to_string());
        self
    }

    fn push_row(&mut self, values: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows
            .push(self.columns.iter().cloned().zip(values).collect());
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            let record = self
                .columns
                .iter()
                .map(|c| row.get(c).map(String::as_str).unwrap_or(""));
            writer.write_record(record).expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("csv output is utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

enum Failure {
    Usage(clap::Error),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, message))
}

fn resolve_rolls(mode: Mode, rolls: Option<u32>) -> Result<u32, Failure> {
    match (mode, rolls) {
        (_, Some(r)) => Ok(r),
        (Mode::Single, None) => Ok(1),
        (_, None) => Err(usage(
            ErrorKind::MissingRequiredArgument,
            format!("--rolls is required in {mode} mode"),
        )),
    }
}

struct Ctx<'a> {
    precision: usize,
    warnings: &'a mut Vec<String>,
}

impl Ctx<'_> {
    fn approx(&self, q: &Rational) -> String {
        to_decimal_string(q, self.precision)
    }

    fn float(&self, x: f64) -> String {
        format!("{x:.prec$}", prec = self.precision)
    }

    fn spec(&mut self, args: &ExperimentArgs) -> Result<ExperimentSpec, Failure> {
        let rolls = resolve_rolls(args.mode, args.rolls)?;
        let spec = ExperimentSpec::new(args.sides, rolls, args.mode)?;
        if spec.is_degenerate() {
            self.warnings.push(format!(
                "{} with a single roll is the single-roll experiment",
                spec.mode()
            ));
        }
        Ok(spec)
    }
}

fn spec_params(doc: OutputDocument, spec: &ExperimentSpec) -> OutputDocument {
    doc.param("mode", spec.mode())
        .param("rolls", spec.rolls())
        .param("sides", spec.sides())
}

fn execute(command: &Command, ctx: &mut Ctx<'_>) -> Result<OutputDocument, Failure> {
    let doc = match command {
        Command::Pmf(args) => {
            let spec = ctx.spec(args)?;
            let pmf = exact::pmf(&spec)?;
            let mut doc = spec_params(
                OutputDocument::new(
                    "pmf",
                    &["outcome", "frequency", "probability", "probability_approx"],
                ),
                &spec,
            );
            for (i, f, p) in pmf.iter() {
                doc.push_row(vec![
                    i.to_string(),
                    f.to_string(),
                    to_fraction_string(p),
                    ctx.approx(p),
                ]);
            }
            doc
        }
        Command::Ev(args) => {
            let spec = ctx.spec(args)?;
            let ev = exact::expected_value(&spec);
            let route = match spec.mode() {
                Mode::Single => "closed",
                _ => PowerSumRoute::for_terms(spec.sides() - 1).name(),
            };
            let mut doc = spec_params(
                OutputDocument::new(
                    "ev",
                    &[
                        "mode",
                        "rolls",
                        "sides",
                        "expected_value",
                        "expected_value_approx",
                        "power_sum_route",
                    ],
                ),
                &spec,
            );
            doc.push_row(vec![
                spec.mode().to_string(),
                spec.rolls().to_string(),
                spec.sides().to_string(),
                to_fraction_string(&ev),
                ctx.approx(&ev),
                route.to_owned(),
            ]);
            doc
        }
        Command::Limit(args) => {
            let rolls = resolve_rolls(args.mode, args.rolls)?;
            let limit = asymptotics::limit_ratio(args.mode, rolls)?;
            let mut doc = OutputDocument::new("limit", &["mode", "rolls", "limit", "limit_approx"])
                .param("mode", args.mode)
                .param("rolls", rolls);
            doc.push_row(vec![
                args.mode.to_string(),
                rolls.to_string(),
                to_fraction_string(&limit),
                ctx.approx(&limit),
            ]);
            doc
        }
        Command::Gain(args) | Command::Loss(args) => {
            let (name, value) = match command {
                Command::Gain(_) => ("gain", asymptotics::relative_gain(args.rolls, args.sides)?),
                _ => ("loss", asymptotics::relative_loss(args.rolls, args.sides)?),
            };
            let limit = asymptotics::gain_loss_limit(args.rolls)?;
            let column = format!("relative_{name}");
            let column_approx = format!("{column}_approx");
            let mut doc = OutputDocument::new(
                name,
                &[
                    "rolls",
                    "sides",
                    &column,
                    &column_approx,
                    "limit",
                    "limit_approx",
                ],
            )
            .param("rolls", args.rolls)
            .param("sides", args.sides);
            doc.push_row(vec![
                args.rolls.to_string(),
                args.sides.to_string(),
                to_fraction_string(&value),
                ctx.approx(&value),
                to_fraction_string(&limit),
                ctx.approx(&limit),
            ]);
            doc
        }
        Command::Converge(args) => {
            let rolls = resolve_rolls(args.mode, args.rolls)?;
            let rows = asymptotics::convergence_table(args.mode, rolls, &args.sides)?;
            let schedule: Vec<String> = args.sides.iter().map(u64::to_string).collect();
            let mut doc = OutputDocument::new(
                "converge",
                &[
                    "sides",
                    "ratio",
                    "ratio_approx",
                    "limit",
                    "gap",
                    "gap_approx",
                ],
            )
            .param("mode", args.mode)
            .param("rolls", rolls)
            .param("sides", schedule.join(","));
            for row in rows {
                doc.push_row(vec![
                    row.sides().to_string(),
                    to_fraction_string(row.ratio()),
                    ctx.approx(row.ratio()),
                    to_fraction_string(row.limit()),
                    to_fraction_string(row.gap()),
                    ctx.approx(row.gap()),
                ]);
            }
            doc
        }
        Command::Simulate(args) => {
            let spec = ctx.spec(&args.experiment)?;
            let result = montecarlo::simulate(&spec, args.trials, args.seed)?;
            let pmf = exact::pmf(&spec)?;
            let ev = exact::expected_value(&spec);
            let distance = montecarlo::empirical_pmf_distance(&result, &pmf)?;
            let mut doc = spec_params(
                OutputDocument::new(
                    "simulate",
                    &[
                        "outcome",
                        "count",
                        "empirical_probability_approx",
                        "exact_probability",
                        "exact_probability_approx",
                    ],
                ),
                &spec,
            )
            .param("trials", args.trials)
            .param("seed", args.seed);
            let n = result.trials() as f64;
            for ((i, _, p), &count) in pmf.iter().zip(result.counts()) {
                doc.push_row(vec![
                    i.to_string(),
                    count.to_string(),
                    ctx.float(count as f64 / n),
                    to_fraction_string(p),
                    ctx.approx(p),
                ]);
            }
            let summary = [
                ("trials", result.trials().to_string()),
                ("seed", result.seed().to_string()),
                ("empirical_mean_approx", ctx.float(result.empirical_mean())),
                ("standard_error_approx", ctx.float(result.standard_error())),
                ("expected_value", to_fraction_string(&ev)),
                ("expected_value_approx", ctx.approx(&ev)),
                ("z_score_approx", ctx.float(result.z_score(&ev))),
                ("tv_distance_approx", ctx.float(distance)),
            ];
            doc.summary = Some(
                summary
                    .into_iter()
                    .map(|(k, v)| (k.to_owned(), v))
                    .collect(),
            );
            doc
        }
        Command::Bernoulli(args) => {
            let table = asymptotics::bernoulli_table(args.max_index);
            let mut doc = OutputDocument::new("bernoulli", &["index", "value", "value_approx"])
                .param("max_index", args.max_index)
                .param("convention", "B1=-1/2");
            for (j, b) in table.values().iter().enumerate() {
                doc.push_row(vec![j.to_string(), to_fraction_string(b), ctx.approx(b)]);
            }
            doc
        }
    };
    Ok(doc.param("precision", ctx.precision))
}

/// Runs the CLI on `argv` (including the program name), writing the document
/// to `out` and diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => return report_clap(e, out, err),
    };
    let mut warnings = Vec::new();
    let mut ctx = Ctx {
        precision: cli.precision,
        warnings: &mut warnings,
    };
    let outcome = execute(&cli.command, &mut ctx);
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match outcome {
        Ok(doc) => match out.write_all(doc.render(cli.format).as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: E_IO: {e}");
                1
            }
        },
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {}: {e}", e.code());
            1
        }
        Err(Failure::Usage(e)) => report_clap(e, out, err),
    }
}

fn report_clap(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(out, "{}", e.render());
            0
        }
        _ => {
            let _ = write!(err, "{}", e.render());
            let _ = writeln!(err);
            let _ = write!(err, "{}", Cli::command().render_help());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("keepdice").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn sides_parser() {
        assert_eq!(parse_sides("20"), Ok(20));
        assert_eq!(parse_sides("10^18"), Ok(1_000_000_000_000_000_000));
        assert_eq!(parse_sides("2^10"), Ok(1024));
        assert!(parse_sides("10^20").is_err());
        assert!(parse_sides("x").is_err());
        assert!(parse_sides("-3").is_err());
    }

    #[test]
    fn ev_json() {
        let (code, out, _) = call(&["ev", "--mode", "advantage", "--rolls", "2", "--sides", "6"]);
        assert_eq!(code, 0);
        let doc: OutputDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.schema_version, SCHEMA_VERSION);
        assert_eq!(doc.command, "ev");
        assert_eq!(doc.rows[0]["expected_value"], "161/36");
        assert_eq!(doc.rows[0]["expected_value_approx"], "4.472222");
        assert_eq!(doc.params["rolls"], "2");
    }

    #[test]
    fn pmf_csv() {
        let (code, out, _) = call(&["pmf", "--mode", "single", "--sides", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "outcome,frequency,probability,probability_approx");
        assert_eq!(lines.len(), 5);
        assert!(lines[1..]
            .iter()
            .all(|l| l.split(',').nth(2) == Some("1/4")));
        assert!(out.ends_with('\n'));
    }

    #[test]
    fn limit_and_precision() {
        let (code, out, _) = call(&[
            "limit",
            "--mode",
            "advantage",
            "--rolls",
            "2",
            "--precision",
            "3",
        ]);
        assert_eq!(code, 0);
        let doc: OutputDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.rows[0]["limit"], "2/3");
        assert_eq!(doc.rows[0]["limit_approx"], "0.667");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(
            call(&["ev", "--mode", "advantage", "--sides", "6", "--bogus"]).0,
            2
        );
        assert_eq!(call(&["ev", "--mode", "advantage", "--sides", "6"]).0, 2);
        assert_eq!(
            call(&["ev", "--mode", "sideways", "-r", "2", "--sides", "6"]).0,
            2
        );
        let (code, out, err) = call(&["ev", "--mode", "advantage", "-r", "2", "--sides", "1"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("error: E_SIDES:"));
        assert_eq!(call(&["ev", "--mode", "single", "-r", "2", "-s", "6"]).0, 1);
        assert_eq!(call(&["limit", "--mode", "single"]).0, 1);
        assert_eq!(
            call(&["converge", "--mode", "advantage", "-r", "2", "-s", "10,5"]).0,
            1
        );
        assert_eq!(
            call(&["simulate", "--mode", "single", "-s", "6", "--trials", "0"]).0,
            1
        );
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn usage_error_prints_help() {
        let (_, _, err) = call(&["frobnicate"]);
        assert!(err.contains("Usage"));
        assert!(err.contains("converge"));
    }

    #[test]
    fn degenerate_warning() {
        let (code, _, err) = call(&["ev", "--mode", "disadvantage", "-r", "1", "-s", "6"]);
        assert_eq!(code, 0);
        assert!(err.starts_with("warning:"));
    }

    #[test]
    fn bernoulli_rows() {
        let (code, out, _) = call(&["bernoulli", "-n", "4"]);
        assert_eq!(code, 0);
        let doc: OutputDocument = serde_json::from_str(&out).unwrap();
        let values: Vec<&str> = doc.rows.iter().map(|r| r["value"].as_str()).collect();
        assert_eq!(values, ["1/1", "-1/2", "1/6", "0/1", "-1/30"]);
    }

    #[test]
    fn simulate_summary() {
        let (code, out, _) = call(&[
            "simulate",
            "--mode",
            "advantage",
            "-r",
            "2",
            "-s",
            "6",
            "--trials",
            "20000",
            "--seed",
            "3",
        ]);
        assert_eq!(code, 0);
        let doc: OutputDocument = serde_json::from_str(&out).unwrap();
        let summary = doc.summary.unwrap();
        assert_eq!(summary["expected_value"], "161/36");
        assert_eq!(summary["trials"], "20000");
        let total: u64 = doc
            .rows
            .iter()
            .map(|r| r["count"].parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, 20000);
    }
}
