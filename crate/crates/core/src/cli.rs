//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a check failed or a computation did not
//! converge, `2` invalid arguments.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::BoundsError;
use crate::intervals::{
    alpha_star, qhat_binomlike, qhat_f, qhat_g, qhat_hoeffding, CiQuery, IntervalResult, Method,
    Side,
};
use crate::verify::{
    builtin_policy, run_sequential_many, run_suite, table1_check, table2_check, Perturbation,
    Suite, SuiteConfig,
};

/// Environment variable overriding the number of decimals printed by `bound`.
pub const DIGITS_ENV: &str = "BERNOULLI_BOUNDS_DIGITS";
pub const DEFAULT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "bernoulli-bounds",
    version,
    about = "One-sided confidence bounds on the average success probability of independent Bernoulli trials"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file; `-` writes to standard output.
    #[arg(long, short, default_value = "-", global = true)]
    pub output: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds for a single observation of k successes in n rounds.
    Bound(BoundArgs),
    /// Curves behind the two comparison panels.
    Figure(FigureArgs),
    /// Reproduce the α† table and the peak-binomial table against golden data.
    Tables(TablesArgs),
    /// Run verification sweeps.
    Verify(VerifyArgs),
    /// Simulate sequential experiments driven by a builtin policy.
    Sequential(SequentialArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub alpha: f64,
    /// Comma-separated list of f, g, hoeffding, binomlike, clopper-pearson.
    #[arg(long, value_delimiter = ',', default_value = "f,g")]
    pub methods: Vec<Method>,
    #[arg(long, value_enum, default_value_t = SideArg::Lower)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Lower,
    Upper,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    /// Bounds against k at fixed n and α.
    A,
    /// Bounds against α at fixed n and k.
    B,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub panel: Panel,
    #[arg(long)]
    pub n: usize,
    /// Required for panel a.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Required for panel b.
    #[arg(long)]
    pub k: Option<usize>,
    /// Log-spaced α points in [1e-4, 1] for panel b.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Shift one computed cell to check that mismatches are caught.
    #[arg(long, hide = true)]
    pub perturb_self_test: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Coverage,
    Tightness,
    Lemmas,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Monte Carlo trials per model; 0 runs the exact checks only.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SequentialArgs {
    /// constant:<p>, adversarial-threshold or momentum.
    #[arg(long)]
    pub policy: String,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub runs: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

enum Failure {
    Usage(String),
    Check(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Domain(_) => Failure::Usage(e.to_string()),
            BoundsError::NoConvergence { .. } => Failure::Check(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = if cli.output.as_os_str() == "-" {
        dispatch(&cli, out, err)
    } else {
        match File::create(&cli.output) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                dispatch(&cli, &mut w, err).and_then(|()| w.flush().map_err(Failure::from))
            }
            Err(e) => Err(Failure::Usage(format!(
                "cannot create {}: {e}",
                cli.output.display()
            ))),
        }
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "FAIL: {msg}");
            1
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Bound(a) => cmd_bound(a, cli.format, out),
        Command::Figure(a) => cmd_figure(a, cli.format, out),
        Command::Tables(a) => cmd_tables(a, cli.format, out, err),
        Command::Verify(a) => cmd_verify(a, cli.format, out),
        Command::Sequential(a) => cmd_sequential(a, cli.format, out),
    }
}

/// Rows written either as CSV with a header or as one JSON object per line.
struct RowWriter<'a> {
    csv: Option<csv::Writer<&'a mut dyn Write>>,
    json: Option<&'a mut dyn Write>,
}

impl<'a> RowWriter<'a> {
    fn new(format: Format, out: &'a mut dyn Write) -> Self {
        match format {
            Format::Csv => Self {
                csv: Some(
                    csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(out),
                ),
                json: None,
            },
            Format::Jsonl => Self {
                csv: None,
                json: Some(out),
            },
        }
    }

    fn row<T: Serialize>(&mut self, row: &T) -> CmdResult {
        if let Some(w) = self.csv.as_mut() {
            w.serialize(row)?;
        }
        if let Some(w) = self.json.as_mut() {
            serde_json::to_writer(&mut **w, row)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    fn finish(mut self) -> io::Result<&'a mut dyn Write> {
        if let Some(w) = self.csv.take() {
            return w.into_inner().map_err(|e| e.into_error());
        }
        Ok(self.json.take().expect("one sink is always set"))
    }
}

fn output_digits() -> usize {
    std::env::var(DIGITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|d| d.min(17))
        .unwrap_or(DEFAULT_DIGITS)
}

#[derive(Serialize)]
struct BoundRow {
    method: Method,
    side: Side,
    n: usize,
    k: usize,
    alpha: f64,
    value: String,
    advisory: &'static str,
}

#[derive(Serialize)]
struct BoundJson<'a> {
    #[serde(flatten)]
    result: &'a IntervalResult,
    formatted: String,
}

fn cmd_bound(a: &BoundArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let query = CiQuery::new(a.n, a.k, a.alpha)?;
    let sides: &[Side] = match a.side {
        SideArg::Lower => &[Side::Lower],
        SideArg::Upper => &[Side::Upper],
        SideArg::Both => &[Side::Lower, Side::Upper],
    };
    let mut results = Vec::new();
    for &side in sides {
        for &m in &a.methods {
            results.push(m.bound(query, side)?);
        }
    }
    let digits = output_digits();
    let mut w = RowWriter::new(format, out);
    for r in &results {
        let value = format!("{:.*}", digits, r.value);
        match format {
            Format::Csv => w.row(&BoundRow {
                method: r.method,
                side: r.side,
                n: a.n,
                k: a.k,
                alpha: a.alpha,
                value,
                advisory: r.advisory.map_or("", |x| x.name()),
            })?,
            Format::Jsonl => w.row(&BoundJson {
                result: r,
                formatted: value,
            })?,
        }
    }
    w.finish()?;
    Ok(())
}

#[derive(Serialize)]
struct FigureRowA {
    k: usize,
    qhat_f: f64,
    qhat_g: f64,
    qhat_1: f64,
    qhat_h: f64,
}

#[derive(Serialize)]
struct FigureRowB {
    alpha: f64,
    qhat_f: f64,
    qhat_g: f64,
    qhat_1: f64,
    qhat_h: f64,
}

fn figure_values(q: CiQuery) -> Result<[f64; 4], Failure> {
    let h = if q.alpha > 0.0 {
        qhat_hoeffding(q)?.value
    } else {
        0.0
    };
    Ok([
        qhat_f(q)?.value,
        qhat_g(q)?.value,
        qhat_binomlike(q)?.value,
        h,
    ])
}

/// `points` log-spaced values in `[1e-4, 1]` plus `α*(k, n)` and `1/4`, sorted.
pub fn alpha_grid(n: usize, k: usize, points: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..points)
            .map(|i| 10f64.powf(-4.0 + 4.0 * i as f64 / (points - 1) as f64))
            .collect(),
    };
    if let Some(last) = grid.last_mut() {
        *last = 1.0;
    }
    if let Ok(star) = alpha_star(n, k) {
        if star > 0.0 {
            grid.push(star);
        }
    }
    grid.push(0.25);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn cmd_figure(a: &FigureArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let mut w = RowWriter::new(format, out);
    match a.panel {
        Panel::A => {
            let alpha = a
                .alpha
                .ok_or_else(|| Failure::Usage("panel a needs --alpha".into()))?;
            CiQuery::new(a.n, 0, alpha)?;
            for k in 0..=a.n {
                let [qhat_f, qhat_g, qhat_1, qhat_h] = figure_values(CiQuery::new(a.n, k, alpha)?)?;
                w.row(&FigureRowA {
                    k,
                    qhat_f,
                    qhat_g,
                    qhat_1,
                    qhat_h,
                })?;
            }
        }
        Panel::B => {
            let k =
                a.k.ok_or_else(|| Failure::Usage("panel b needs --k".into()))?;
            CiQuery::new(a.n, k, 0.5)?;
            for alpha in alpha_grid(a.n, k, a.points) {
                let [qhat_f, qhat_g, qhat_1, qhat_h] = figure_values(CiQuery::new(a.n, k, alpha)?)?;
                w.row(&FigureRowB {
                    alpha,
                    qhat_f,
                    qhat_g,
                    qhat_1,
                    qhat_h,
                })?;
            }
        }
    }
    w.finish()?;
    Ok(())
}

fn cmd_tables(
    a: &TablesArgs,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let perturb = a.perturb_self_test.then_some(Perturbation {
        n: 10,
        d: 5,
        delta: 1e-3,
    });
    let mut cells = table1_check(perturb)?;
    cells.extend(table2_check()?);
    let mut w = RowWriter::new(format, out);
    for c in &cells {
        w.row(c)?;
    }
    w.finish()?;
    let bad: Vec<_> = cells.iter().filter(|c| !c.pass).collect();
    for c in &bad {
        writeln!(
            err,
            "mismatch: table {} n={} d={} computed {} golden {}",
            c.table, c.n, c.d, c.value, c.golden
        )?;
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} of {} table cells differ from the golden values",
            bad.len(),
            cells.len()
        )))
    }
}

fn cmd_verify(a: &VerifyArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let suite = match a.suite {
        SuiteArg::Coverage => Suite::Coverage,
        SuiteArg::Tightness => Suite::Tightness,
        SuiteArg::Lemmas => Suite::Lemmas,
        SuiteArg::All => Suite::All,
    };
    let checks = run_suite(
        suite,
        SuiteConfig {
            n_max: a.n_max,
            trials: a.trials,
            seed: a.seed,
        },
    )?;
    let mut w = RowWriter::new(format, out);
    for c in &checks {
        w.row(c)?;
    }
    w.finish()?;
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(Failure::Check(format!(
            "{}/{}: {}",
            c.suite, c.check, c.detail
        ))),
    }
}

#[derive(Serialize)]
struct SequentialRow {
    run: u64,
    qbar: f64,
    successes: usize,
    qhat_f: f64,
    covered: bool,
}

fn cmd_sequential(a: &SequentialArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let policy = builtin_policy(&a.policy)?;
    CiQuery::new(a.n, 0, a.alpha)?;
    let (runs, summary) = run_sequential_many(policy.as_ref(), a.n, a.alpha, a.runs, a.seed)?;
    let mut w = RowWriter::new(format, out);
    for r in &runs {
        w.row(&SequentialRow {
            run: r.run,
            qbar: r.realized_qbar,
            successes: r.successes,
            qhat_f: r.qhat_f,
            covered: r.covered,
        })?;
    }
    let out = w.finish()?;
    match format {
        Format::Csv => writeln!(
            out,
            "# summary policy={} n={} alpha={} runs={} seed={} covered={} covered_fraction={} sigma={} pass={} rng={}",
            summary.policy,
            summary.n,
            summary.alpha,
            summary.runs,
            summary.seed,
            summary.covered,
            summary.covered_fraction,
            summary.sigma,
            summary.pass,
            summary.rng
        )?,
        Format::Jsonl => {
            serde_json::to_writer(&mut *out, &serde_json::json!({ "summary": summary }))?;
            out.write_all(b"\n")?;
        }
    }
    if summary.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "covered fraction {} below {} - 3 sigma ({})",
            summary.covered_fraction,
            1.0 - a.alpha,
            summary.sigma
        )))
    }
}
