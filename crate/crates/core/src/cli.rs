//! Command-line front end. Every command builds an [`OutputRecord`], which
//! is rendered as aligned text, JSON or CSV. Output is a pure function of
//! the arguments; timings are left to the caller's diagnostic stream.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bijection::verify_bijection;
use crate::exactnum::{format_decimal, BigRat};
use crate::lattice::{
    bridge_from_scores, brute_force_egz, enumerate_bridges_area_zero_mod_n,
    enumerate_score_sequences, DEFAULT_ENUMERATION_BOUND,
};
use crate::lktransform::{
    check_infinite_divisibility, lk_forward, lk_inverse, moser_constant,
    regular_variation_diagnostic, working_precision, AsymptoticsConfig, LkEstimator, RatSeq,
};
use crate::sequences::{egz_table, parts_table, score_counts, strong_counts};

#[derive(Debug, Parser)]
#[command(
    name = "scoreseq",
    version,
    about = "Score sequences, EGZ numbers and Levy-Khintchine transforms"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Largest n accepted by exhaustive enumerations.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND, global = true)]
    pub bound: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumerateKind {
    /// Score sequences of length n.
    Scores,
    /// Bridges of length 2n with area divisible by n.
    Bridges,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// EGZ numbers N_1..N_n.
    Egz {
        n_max: usize,
        /// Compare against subset enumeration for n up to this value.
        #[arg(long, value_name = "UP_TO")]
        check_oracle: Option<usize>,
    },
    /// Score-sequence counts S_0..S_n.
    Scores {
        n_max: usize,
        /// Add the parts-refined counts A(n,1..n).
        #[arg(long)]
        parts: bool,
        /// Add the strong counts T_n.
        #[arg(long)]
        strong: bool,
        /// Compare against exhaustive enumeration for n up to this value.
        #[arg(long, value_name = "UP_TO")]
        check_oracle: Option<usize>,
    },
    /// Levy-Khintchine transform of a sequence read one value per line.
    Lk {
        /// Input file; stdin when absent or "-".
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Direction::Forward)]
        direction: Direction,
        /// Also check that the transform of S_n is N_n up to the input length.
        #[arg(long)]
        check_id: bool,
    },
    /// Exhaustively verify the shift bijection at n.
    Bijection { n: usize },
    /// Moser's constant and the convergence of n^(5/2) S_n / 4^n.
    Asymptotics {
        n_max: usize,
        /// Truncation K of the exponent series.
        #[arg(long = "K", short = 'K', default_value_t = 10_000)]
        truncation: usize,
        /// Significant digits.
        #[arg(long, default_value_t = 10)]
        digits: u32,
    },
    /// Dump score sequences or bridges with area divisible by n.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumerateKind,
        n: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Compute(#[from] crate::error::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(crate::error::Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub diagnostics: BTreeMap<String, String>,
}

impl OutputRecord {
    fn new(command: &str, columns: &[&str]) -> Self {
        OutputRecord {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    fn diag(&mut self, key: &str, value: impl ToString) {
        self.diagnostics.insert(key.to_string(), value.to_string());
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: OutputRecord,
    /// False when a verification the command performed failed.
    pub passed: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Egz {
            n_max,
            check_oracle,
        } => cmd_egz(*n_max, *check_oracle, cli.bound),
        Command::Scores {
            n_max,
            parts,
            strong,
            check_oracle,
        } => cmd_scores(*n_max, *parts, *strong, *check_oracle, cli.bound),
        Command::Lk {
            input,
            direction,
            check_id,
        } => {
            let text = read_input(input.as_ref())?;
            cmd_lk(&text, *direction, *check_id)
        }
        Command::Bijection { n } => cmd_bijection(*n, cli.bound),
        Command::Asymptotics {
            n_max,
            truncation,
            digits,
        } => cmd_asymptotics(*n_max, *truncation, *digits),
        Command::Enumerate { kind, n } => cmd_enumerate(*kind, *n, cli.bound),
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => text = std::fs::read_to_string(p)?,
        _ => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

/// One integer or `p/q` per line; `#` starts a comment, blank lines are skipped.
pub fn parse_sequence(text: &str) -> Result<RatSeq, CliError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: BigRat = body.parse().map_err(|e| CliError::Parse {
            line: i + 1,
            message: format!("cannot parse {body:?} as an integer or p/q rational: {e}"),
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::Usage("input contains no values".into()));
    }
    Ok(RatSeq::new(values))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "match"
    } else {
        "MISMATCH"
    }
}

fn check_oracle_bound(up_to: usize, bound: usize) -> Result<(), CliError> {
    if up_to > bound {
        return Err(CliError::Usage(format!(
            "--check-oracle {up_to} exceeds the enumeration bound {bound} (raise --bound)"
        )));
    }
    Ok(())
}

pub fn cmd_egz(
    n_max: usize,
    check_oracle: Option<usize>,
    bound: usize,
) -> Result<Outcome, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let table = egz_table(n_max)?;
    let mut columns = vec!["n", "N_n"];
    if check_oracle.is_some() {
        columns.push("brute_force");
    }
    let mut rec = OutputRecord::new("egz", &columns);
    rec.param("n_max", n_max);
    let mut passed = true;
    if let Some(up_to) = check_oracle {
        check_oracle_bound(up_to, bound)?;
        rec.param("check_oracle", up_to);
    }
    for n in 1..=n_max {
        let mut row = vec![n.to_string(), table[n].to_string()];
        if let Some(up_to) = check_oracle {
            if n <= up_to {
                let brute = brute_force_egz(n, bound)?;
                passed &= brute == table[n];
                row.push(brute.to_string());
            } else {
                row.push("-".into());
            }
        }
        rec.rows.push(row);
    }
    if check_oracle.is_some() {
        rec.diag("oracle", verdict(passed));
    }
    Ok(Outcome {
        record: rec,
        passed,
    })
}

pub fn cmd_scores(
    n_max: usize,
    parts: bool,
    strong: bool,
    check_oracle: Option<usize>,
    bound: usize,
) -> Result<Outcome, CliError> {
    let s = score_counts(n_max)?;
    let mut columns = vec!["n", "S_n"];
    if strong {
        columns.push("T_n");
    }
    if parts {
        columns.push("A_n_m");
    }
    if check_oracle.is_some() {
        columns.push("enumerated");
    }
    let mut rec = OutputRecord::new("scores", &columns);
    rec.param("n_max", n_max);
    if strong {
        rec.param("strong", true);
    }
    if parts {
        rec.param("parts", true);
    }
    if let Some(up_to) = check_oracle {
        check_oracle_bound(up_to, bound)?;
        rec.param("check_oracle", up_to);
    }
    let t = if strong && n_max >= 1 {
        Some(strong_counts(n_max)?)
    } else {
        None
    };
    let table = if parts && n_max >= 1 {
        Some(parts_table(n_max)?)
    } else {
        None
    };
    let mut passed = true;
    for n in 0..=n_max {
        let mut row = vec![n.to_string(), s[n].to_string()];
        if strong {
            row.push(match (&t, n) {
                (Some(t), n) if n >= 1 => t[n].to_string(),
                _ => "-".into(),
            });
        }
        if parts {
            row.push(
                table
                    .as_ref()
                    .and_then(|tb| tb.row(n))
                    .map(|r| r.iter().join(" "))
                    .unwrap_or_else(|| "-".into()),
            );
        }
        if let Some(up_to) = check_oracle {
            if n <= up_to {
                let count = enumerate_score_sequences(n, bound)?.len();
                passed &= s[n] == count;
                row.push(count.to_string());
            } else {
                row.push("-".into());
            }
        }
        rec.rows.push(row);
    }
    if check_oracle.is_some() {
        rec.diag("oracle", verdict(passed));
    }
    Ok(Outcome {
        record: rec,
        passed,
    })
}

pub fn cmd_lk(text: &str, direction: Direction, check_id: bool) -> Result<Outcome, CliError> {
    let input = parse_sequence(text)?;
    let (name, output) = match direction {
        Direction::Forward => ("forward", lk_forward(&input)?),
        Direction::Inverse => ("inverse", lk_inverse(&input)?),
    };
    let mut rec = OutputRecord::new("lk", &["n", "input", "output"]);
    rec.param("direction", name);
    rec.param("length", input.len());
    for (n, (a, b)) in input.values.iter().zip(&output.values).enumerate() {
        rec.rows
            .push(vec![n.to_string(), a.to_string(), b.to_string()]);
    }
    // The verdict needs a positive sequence with a_0 = 1.
    let sequence = match direction {
        Direction::Forward => &input,
        Direction::Inverse => &output,
    };
    if sequence.values.iter().all(|v| *v > 0) {
        let report = check_infinite_divisibility(sequence)?;
        rec.diag("divisibility", report.verdict());
    }
    let mut passed = true;
    if check_id {
        let n_max = input.len() - 1;
        rec.param("check_id", true);
        if n_max == 0 {
            rec.diag("identity", "trivial at length 1");
        } else {
            let s = score_counts(n_max)?;
            let egz = egz_table(n_max)?;
            let star = lk_forward(&RatSeq::from_ints(&s.values))?;
            passed = star == RatSeq::from_ints(&egz.values);
            rec.diag(
                "identity",
                if passed {
                    format!("transform of S_n equals N_n for n <= {n_max}")
                } else {
                    format!("transform of S_n differs from N_n below n = {n_max}")
                },
            );
        }
    }
    Ok(Outcome {
        record: rec,
        passed,
    })
}

pub fn cmd_bijection(n: usize, bound: usize) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let report = verify_bijection(n, bound)?;
    let mut rec = OutputRecord::new(
        "bijection",
        &[
            "n",
            "score_sequences",
            "domain",
            "codomain",
            "injective",
            "surjective",
        ],
    );
    rec.param("n", n);
    rec.rows.push(vec![
        n.to_string(),
        report.score_sequences.to_string(),
        report.domain_size.to_string(),
        report.codomain_size.to_string(),
        report.is_injective.to_string(),
        report.is_surjective.to_string(),
    ]);
    rec.diag("summary", &report);
    for (i, f) in report.failures.iter().enumerate() {
        rec.diag(
            &format!("failure_{i:04}"),
            serde_json::to_string(f).expect("failure serialises"),
        );
    }
    Ok(Outcome {
        record: rec,
        passed: report.is_bijective(),
    })
}

/// `n_max, n_max/2, n_max/4, ...` down to 1, ascending.
pub fn doubling_schedule(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = n_max;
    while n >= 1 {
        out.push(n);
        n /= 2;
    }
    out.reverse();
    out
}

pub fn cmd_asymptotics(n_max: usize, truncation: usize, digits: u32) -> Result<Outcome, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let constant = moser_constant(truncation, digits)?;
    let prec = working_precision(digits);
    let d = digits as usize;

    let s = score_counts(n_max)?;
    let egz = egz_table(truncation.max(n_max))?;
    let a_star = RatSeq::normalized(&egz, 4);
    let cfg = AsymptoticsConfig {
        gamma: BigRat::from((-3, 2)),
        truncation,
        digits,
    };
    let estimator = LkEstimator::new(&a_star, cfg)?;

    let mut rec = OutputRecord::new(
        "asymptotics",
        &[
            "n",
            "scaled_S_n",
            "ratio_to_C",
            "deviation",
            "lk_estimate_ratio",
        ],
    );
    rec.param("n_max", n_max);
    rec.param("K", truncation);
    rec.param("digits", digits);
    rec.diag("C", format_decimal(&constant.value, d));
    rec.diag("C_tail_bound", format_decimal(&constant.tail_bound, 3));
    rec.diag(
        "exponent_tail_bound",
        format_decimal(&constant.exponent_tail_bound, 3),
    );
    rec.diag("gamma", "-3/2");
    if let Some(idx) = regular_variation_diagnostic(&a_star, egz.n_max() / 2) {
        rec.diag("empirical_index", format!("{idx:.6}"));
    }

    let mut deviations = Vec::new();
    for n in doubling_schedule(n_max) {
        // n^(5/2) S_n / 4^n; the power of 4 is an exact binary shift.
        let mut scaled = Float::with_val(prec, &s[n]);
        scaled >>= 2 * n as u32;
        let exact_normalized = scaled.clone();
        scaled *= (n * n) as u64;
        scaled *= Float::with_val(prec, n).sqrt();
        let ratio = Float::with_val(prec, &scaled / &constant.value);
        let deviation = Float::with_val(prec, &ratio - 1u32).abs();
        let estimate = estimator.estimate(n)?;
        let est_ratio = Float::with_val(prec, &estimate / &exact_normalized);
        rec.rows.push(vec![
            n.to_string(),
            format_decimal(&scaled, d),
            format_decimal(&ratio, d),
            format_decimal(&deviation, 3),
            format_decimal(&est_ratio, d),
        ]);
        deviations.push(deviation);
    }
    let decreasing = deviations.windows(2).all(|w| w[1] < w[0]);
    rec.diag("deviation_decreasing", decreasing);
    Ok(Outcome {
        record: rec,
        passed: true,
    })
}

pub fn cmd_enumerate(kind: EnumerateKind, n: usize, bound: usize) -> Result<Outcome, CliError> {
    let rec = match kind {
        EnumerateKind::Scores => {
            let mut rec = OutputRecord::new("enumerate", &["index", "scores", "down_steps"]);
            rec.param("kind", "scores");
            rec.param("n", n);
            for (i, s) in enumerate_score_sequences(n, bound)?.iter().enumerate() {
                let bridge = if n == 0 {
                    String::new()
                } else {
                    bridge_from_scores(s)?.down_steps().iter().join(" ")
                };
                rec.rows
                    .push(vec![i.to_string(), s.scores().iter().join(" "), bridge]);
            }
            rec.diag("count", rec.rows.len());
            rec
        }
        EnumerateKind::Bridges => {
            let mut rec =
                OutputRecord::new("enumerate", &["index", "down_steps", "area", "ends_up"]);
            rec.param("kind", "bridges");
            rec.param("n", n);
            for (i, b) in enumerate_bridges_area_zero_mod_n(n, bound)?
                .iter()
                .enumerate()
            {
                rec.rows.push(vec![
                    i.to_string(),
                    b.down_steps().iter().join(" "),
                    b.sawtooth_area().to_string(),
                    b.ends_with_up_step().to_string(),
                ]);
            }
            rec.diag("count", rec.rows.len());
            rec
        }
    };
    Ok(Outcome {
        record: rec,
        passed: true,
    })
}

pub fn render(rec: &OutputRecord, format: Format) -> String {
    match format {
        Format::Text => render_text(rec),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rec).expect("record serialises");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(rec),
    }
}

fn render_text(rec: &OutputRecord) -> String {
    let mut out = String::new();
    let params = rec
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .join(" ");
    out.push_str(&format!("# {} {}\n", rec.command, params).replace(" \n", "\n"));
    let mut widths: Vec<usize> = rec.columns.iter().map(|c| c.len()).collect();
    for row in &rec.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .join("  ")
            .trim_end()
            .to_string()
    };
    out.push_str(&line(&rec.columns));
    out.push('\n');
    for row in &rec.rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    for (k, v) in &rec.diagnostics {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out
}

/// Metadata goes in `#` comment lines ahead of the header row.
fn render_csv(rec: &OutputRecord) -> String {
    let mut out = String::new();
    out.push_str(&format!("# command: {}\n", rec.command));
    for (k, v) in &rec.parameters {
        out.push_str(&format!("# param {k}: {v}\n"));
    }
    for (k, v) in &rec.diagnostics {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&rec.columns).expect("in-memory write");
    for row in &rec.rows {
        w.write_record(row).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    out
}
