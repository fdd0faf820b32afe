//! Run reports and their JSON, CSV and text renderings.
//!
//! All reals are printed with exactly six decimals, rounding half to even on
//! the exact binary value.

use std::fmt::{self, Write as _};
use std::time::Duration;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::miner::{FrequentLevel, MiningConfig};
use crate::rules::Rule;
use crate::table::{DimensionProfile, QualifiedSchema};

/// A real rendered with six fixed decimals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed(pub f64);

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fixed6(self.0))
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fixed6(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

/// Six-decimal rendering with round-half-to-even.
pub fn fixed6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    // an f64 has at most 1074 fractional digits, so this expansion is exact
    let exact = format!("{:.1100}", x.abs());
    let (int_part, frac) = exact.split_once('.').expect("fractional digits requested");
    let (kept, rest) = frac.split_at(6);
    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(kept.bytes())
        .map(|b| b - b'0')
        .collect();
    let rest = rest.as_bytes();
    let round_up = match rest[0] {
        b'6'..=b'9' => true,
        b'5' => rest[1..].iter().any(|&d| d != b'0') || digits.last().unwrap() % 2 == 1,
        _ => false,
    };
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - 6;
    let mut out = String::new();
    if x.is_sign_negative() && digits.iter().any(|&d| d != 0) {
        out.push('-');
    }
    for d in &digits[..split] {
        out.push(char::from(b'0' + d));
    }
    out.push('.');
    for d in &digits[split..] {
        out.push(char::from(b'0' + d));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub lambda: usize,
    pub min_support: Vec<Fixed>,
    pub min_confidence: Fixed,
    pub max_k: Option<usize>,
    pub effective_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionSummary {
    pub name: String,
    pub cardinality: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedDimension {
    pub name: String,
    pub cardinality: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemsetSupport {
    pub itemset: String,
    pub support: Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub k: usize,
    pub min_support: Fixed,
    pub itemsets: Vec<ItemsetSupport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleReport {
    pub antecedent: String,
    pub consequent: String,
    pub support: Fixed,
    pub confidence: Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub status: String,
    pub differences: Vec<String>,
}

impl OracleCheck {
    pub fn new(differences: Vec<String>) -> Self {
        let status = if differences.is_empty() {
            "match"
        } else {
            "mismatch"
        };
        Self {
            status: status.to_string(),
            differences,
        }
    }

    pub fn matched(&self) -> bool {
        self.differences.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config_echo: ConfigEcho,
    pub qualified_dimensions: Vec<DimensionSummary>,
    pub excluded_dimensions: Vec<ExcludedDimension>,
    pub levels: Vec<LevelReport>,
    pub rules: Vec<RuleReport>,
    pub row_count: usize,
    pub timing_ms: Fixed,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_check: Option<OracleCheck>,
}

impl RunReport {
    pub fn new(
        config: &MiningConfig,
        profiles: &[DimensionProfile],
        schema: &QualifiedSchema,
        levels: &[FrequentLevel],
        rules: &[Rule],
        elapsed: Duration,
    ) -> Self {
        let labels = schema.labeler();
        let qualified_dimensions = schema
            .qualified
            .iter()
            .map(|d| DimensionSummary {
                name: d.name.clone(),
                cardinality: d.cardinality(),
            })
            .collect();
        let excluded_dimensions = profiles
            .iter()
            .filter(|p| {
                !schema
                    .qualified
                    .iter()
                    .any(|q| q.dimension_index == p.dimension_index)
            })
            .map(|p| ExcludedDimension {
                name: p.name.clone(),
                cardinality: p.cardinality(),
                reason: if p.cardinality() == 0 {
                    "no values".to_string()
                } else {
                    "cardinality exceeds lambda".to_string()
                },
            })
            .collect();
        let levels = levels
            .iter()
            .map(|l| LevelReport {
                k: l.k,
                min_support: Fixed(l.threshold),
                itemsets: l
                    .entries
                    .iter()
                    .map(|(s, v)| ItemsetSupport {
                        itemset: labels.itemset(s),
                        support: Fixed(*v),
                    })
                    .collect(),
            })
            .collect();
        let rules = rules
            .iter()
            .map(|r| RuleReport {
                antecedent: labels.itemset(&r.antecedent),
                consequent: labels.itemset(&r.consequent),
                support: Fixed(r.support),
                confidence: Fixed(r.confidence),
            })
            .collect();
        Self {
            config_echo: ConfigEcho {
                lambda: config.lambda,
                min_support: config.beta.iter().copied().map(Fixed).collect(),
                min_confidence: Fixed(config.min_confidence),
                max_k: config.max_k,
                effective_cap: config.effective_cap(schema.len()),
            },
            qualified_dimensions,
            excluded_dimensions,
            levels,
            rules,
            row_count: schema.m_rows,
            timing_ms: Fixed(elapsed.as_secs_f64() * 1000.0),
            oracle_check: None,
        }
    }
}

pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serialises");
            s.push('\n');
            s
        }
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Text => emit_text(report),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_csv(report: &RunReport) -> String {
    let mut out = String::from("k,itemset,support\n");
    for level in &report.levels {
        for entry in &level.itemsets {
            let _ = writeln!(
                out,
                "{},{},{}",
                level.k,
                csv_cell(&entry.itemset),
                entry.support
            );
        }
    }
    out.push_str("\nantecedent,consequent,support,confidence\n");
    for r in &report.rules {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_cell(&r.antecedent),
            csv_cell(&r.consequent),
            r.support,
            r.confidence
        );
    }
    if let Some(check) = &report.oracle_check {
        out.push_str("\noracle_status,difference\n");
        if check.differences.is_empty() {
            let _ = writeln!(out, "{},", check.status);
        }
        for d in &check.differences {
            let _ = writeln!(out, "{},{}", check.status, csv_cell(d));
        }
    }
    out
}

fn emit_text(report: &RunReport) -> String {
    let mut out = String::new();
    let c = &report.config_echo;
    let betas: Vec<String> = c.min_support.iter().map(Fixed::to_string).collect();
    let _ = writeln!(out, "Fuzzy multidimensional association rules");
    let _ = writeln!(out, "rows: {}", report.row_count);
    let _ = writeln!(
        out,
        "lambda: {}  min support: {}  min confidence: {}  level cap: {}",
        c.lambda,
        betas.join(", "),
        c.min_confidence,
        c.effective_cap
    );

    let _ = writeln!(
        out,
        "\nQualified dimensions (|M| = {})",
        report.qualified_dimensions.len()
    );
    for d in &report.qualified_dimensions {
        let _ = writeln!(out, "  {:<12} {}", d.name, d.cardinality);
    }
    if !report.excluded_dimensions.is_empty() {
        let _ = writeln!(out, "\nExcluded dimensions");
        for d in &report.excluded_dimensions {
            let _ = writeln!(out, "  {:<12} {}  ({})", d.name, d.cardinality, d.reason);
        }
    }

    if report.levels.is_empty() {
        let _ = writeln!(out, "\nNo frequent itemsets.");
    }
    for level in &report.levels {
        let _ = writeln!(
            out,
            "\nL_{} (beta_{} = {})",
            level.k, level.k, level.min_support
        );
        let width = level
            .itemsets
            .iter()
            .map(|e| e.itemset.chars().count() + 2)
            .max()
            .unwrap_or(0);
        for e in &level.itemsets {
            let shown = format!("{{{}}}", e.itemset);
            let pad = width.saturating_sub(shown.chars().count());
            let _ = writeln!(out, "  {shown}{}  {}", " ".repeat(pad), e.support);
        }
    }

    let _ = writeln!(out, "\nRules ({})", report.rules.len());
    for r in &report.rules {
        let _ = writeln!(
            out,
            "  {} => {}  support {}  confidence {}",
            r.antecedent, r.consequent, r.support, r.confidence
        );
    }

    if let Some(check) = &report.oracle_check {
        let _ = writeln!(out, "\nOracle cross-check: {}", check.status);
        for d in &check.differences {
            let _ = writeln!(out, "  {d}");
        }
    }
    let _ = writeln!(out, "\nelapsed: {} ms", report.timing_ms);
    out
}
