//! Command-line front end: load, qualify, mine, generate rules, report.
//!
//! Exit codes: 0 success (including empty results), 1 input errors,
//! 2 invalid configuration, 3 oracle mismatch, 4 no qualified dimensions.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::csv_io::load_csv;
use crate::error::Error;
use crate::miner::{mine, mine_with_workers, MiningConfig, DEFAULT_MIN_CONFIDENCE};
use crate::oracle::{compare_levels, compare_rules, oracle_mine_exact, oracle_rules, to_levels};
use crate::report::{emit_report, OracleCheck, ReportFormat, RunReport};
use crate::rules::generate_rules;
use crate::table::{profile_dimensions, qualify_dimensions};
use crate::TOLERANCE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;
pub const EXIT_NOT_QUALIFIED: i32 = 4;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Text => ReportFormat::Text,
        }
    }
}

/// Mine fuzzy multidimensional association rules from a categorical CSV table.
#[derive(Debug, Parser)]
#[command(name = "fuzzy-mdar", version)]
struct Args {
    /// CSV file; the first line holds dimension names
    #[arg(long)]
    input: PathBuf,

    /// Maximum number of distinct values for a dimension to be mined (>= 2)
    #[arg(long)]
    lambda: usize,

    /// Comma-separated minimum supports; entry i applies to (i+1)-itemsets,
    /// the last one repeats
    #[arg(long, value_name = "BETA,...")]
    min_support: String,

    #[arg(long, default_value_t = DEFAULT_MIN_CONFIDENCE)]
    min_confidence: f64,

    /// Largest itemset size (defaults to lambda)
    #[arg(long)]
    max_k: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cross-check the result against the exact brute-force miner
    #[arg(long)]
    oracle: bool,

    /// Treat the first column as transaction ids
    #[arg(long)]
    tid_column: bool,

    /// Worker threads for support counting (defaults to available cores)
    #[arg(long)]
    workers: Option<usize>,

    /// Perturb one oracle support before comparing (exercises exit code 3)
    #[arg(long, hide = true)]
    inject_oracle_fault: bool,
}

fn parse_betas(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("invalid minimum support {s:?}: {e}"))
        })
        .collect()
}

/// Runs the tool on `args` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let fail = |err: &mut dyn Write, code: i32, msg: &dyn std::fmt::Display| {
        let _ = writeln!(err, "error: {msg}");
        code
    };

    let config = match parse_betas(&args.min_support)
        .map_err(Error::InvalidConfig)
        .and_then(|beta| MiningConfig::new(args.lambda, beta, args.min_confidence, args.max_k))
    {
        Ok(c) => c,
        Err(e) => return fail(err, EXIT_CONFIG, &e),
    };
    if args.workers == Some(0) {
        return fail(err, EXIT_CONFIG, &"--workers must be at least 1");
    }

    let started = Instant::now();
    let table = match load_csv(&args.input, args.tid_column) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                err,
                EXIT_INPUT,
                &format_args!("{}: {e}", args.input.display()),
            )
        }
    };
    let profiles = profile_dimensions(&table);
    let schema = match qualify_dimensions(&profiles, config.lambda, table.row_count()) {
        Ok(s) => s,
        Err(e @ Error::QualificationEmpty { .. }) => return fail(err, EXIT_NOT_QUALIFIED, &e),
        Err(e) => return fail(err, EXIT_CONFIG, &e),
    };
    if let Err(e) = config.check_beta_bound(schema.len()) {
        return fail(err, EXIT_CONFIG, &e);
    }

    let mined = match args.workers {
        Some(w) => mine_with_workers(&schema, &table, &config, w),
        None => mine(&schema, &table, &config),
    };
    let levels = match mined {
        Ok(l) => l,
        Err(e) => return fail(err, EXIT_INPUT, &e),
    };
    let rules = match generate_rules(&levels, config.min_confidence) {
        Ok(r) => r,
        Err(e) => return fail(err, EXIT_INPUT, &e),
    };

    let oracle_check = if args.oracle {
        let exact = match oracle_mine_exact(&schema, &table, &config) {
            Ok(l) => l,
            Err(e) => return fail(err, EXIT_CONFIG, &e),
        };
        let mut oracle_levels = to_levels(&exact, &config);
        if args.inject_oracle_fault {
            if let Some(v) = oracle_levels
                .first_mut()
                .and_then(|l| l.entries.values_mut().next())
            {
                *v += 1e-6;
            }
        }
        let exact_rules = oracle_rules(&schema, &table, &exact, config.min_confidence);
        let mut diffs = compare_levels(&schema, &levels, &oracle_levels, TOLERANCE);
        diffs.extend(compare_rules(&schema, &rules, &exact_rules, TOLERANCE));
        Some(OracleCheck::new(diffs))
    } else {
        None
    };

    let mut report = RunReport::new(
        &config,
        &profiles,
        &schema,
        &levels,
        &rules,
        started.elapsed(),
    );
    let matched = oracle_check.as_ref().is_none_or(OracleCheck::matched);
    report.oracle_check = oracle_check;
    if let Err(e) = out.write_all(emit_report(&report, args.format.into()).as_bytes()) {
        return fail(err, EXIT_INPUT, &e);
    }
    if matched {
        EXIT_OK
    } else {
        let _ = writeln!(err, "error: miner and oracle disagree");
        EXIT_ORACLE_MISMATCH
    }
}
