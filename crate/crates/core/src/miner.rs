//! Level-wise search for frequent fuzzy itemsets.
//!
//! Every transaction that contains an itemset contributes the same degree,
//! `1 / max n(D)` over the itemset's dimensions, so the fuzzy support of an
//! itemset is its matching-row count divided by that largest cardinality.
//! The miner exploits this by keeping one row bitset per item and
//! intersecting bitsets instead of materialising membership vectors.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;
use std::thread;

use crate::error::{Error, Result};
use crate::membership::MembershipVector;
use crate::table::{Item, Itemset, QualifiedSchema, RelationalTable};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    pub lambda: usize,
    /// `beta[k-1]` is the minimum support of k-itemsets; the last entry
    /// repeats for deeper levels.
    pub beta: Vec<f64>,
    pub min_confidence: f64,
    pub max_k: Option<usize>,
}

pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.5;

impl MiningConfig {
    pub fn new(
        lambda: usize,
        beta: Vec<f64>,
        min_confidence: f64,
        max_k: Option<usize>,
    ) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::InvalidConfig(format!(
                "lambda must be at least 2, got {lambda}"
            )));
        }
        if beta.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one minimum support is required".into(),
            ));
        }
        if let Some(b) = beta.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "minimum support must be positive, got {b}"
            )));
        }
        if !(0.0..=1.0).contains(&min_confidence) {
            return Err(Error::InvalidConfig(format!(
                "minimum confidence must lie in [0, 1], got {min_confidence}"
            )));
        }
        if max_k == Some(0) {
            return Err(Error::InvalidConfig("max-k must be at least 1".into()));
        }
        Ok(Self {
            lambda,
            beta,
            min_confidence,
            max_k,
        })
    }

    pub fn beta_for(&self, k: usize) -> f64 {
        self.beta[(k.max(1) - 1).min(self.beta.len() - 1)]
    }

    /// Largest itemset size the search may reach: `max_k` (or `lambda`),
    /// clamped to the number of qualified dimensions.
    pub fn effective_cap(&self, qualified_dimensions: usize) -> usize {
        self.max_k.unwrap_or(self.lambda).min(qualified_dimensions)
    }

    /// Every minimum support must lie in `(0, |M|]`.
    pub fn check_beta_bound(&self, qualified_dimensions: usize) -> Result<()> {
        let bound = qualified_dimensions as f64;
        match self.beta.iter().find(|b| **b > bound) {
            Some(b) => Err(Error::InvalidConfig(format!(
                "minimum support {b} exceeds the number of qualified dimensions ({qualified_dimensions})"
            ))),
            None => Ok(()),
        }
    }
}

/// Frequent itemsets of one size, `L_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentLevel {
    pub k: usize,
    /// The minimum support applied at this level.
    pub threshold: f64,
    pub entries: BTreeMap<Itemset, f64>,
}

impl FrequentLevel {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, itemset: &Itemset) -> Option<f64> {
        self.entries.get(itemset).copied()
    }
}

pub fn support(vector: &MembershipVector) -> f64 {
    vector.degrees.iter().sum()
}

pub(crate) fn is_frequent(support: f64, threshold: f64) -> bool {
    support >= threshold - TOLERANCE
}

/// Row bitsets for every item of a qualified schema.
struct RowIndex<'a> {
    schema: &'a QualifiedSchema,
    words: usize,
    /// `bits[dimension][value]`, values in the dimension's canonical order.
    bits: Vec<Vec<Vec<u64>>>,
}

impl<'a> RowIndex<'a> {
    fn build(schema: &'a QualifiedSchema, table: &RelationalTable) -> Self {
        let words = table.row_count().div_ceil(64);
        let bits = schema
            .qualified
            .iter()
            .map(|dim| {
                let mut columns = vec![vec![0u64; words]; dim.cardinality()];
                for row in 0..table.row_count() {
                    if let Some(value) = table.cell(row, dim.dimension_index) {
                        if let Ok(v) = dim.distinct_values.binary_search(value) {
                            columns[v][row / 64] |= 1 << (row % 64);
                        }
                    }
                }
                columns
            })
            .collect();
        Self {
            schema,
            words,
            bits,
        }
    }

    fn item_bits(&self, item: &Item) -> Option<&[u64]> {
        let dim = self.schema.dimension(item.dimension_index);
        let v = dim.distinct_values.binary_search(&item.value).ok()?;
        Some(&self.bits[item.dimension_index][v])
    }

    fn support(&self, itemset: &Itemset) -> f64 {
        let items = itemset.items();
        if items.is_empty() {
            return self.schema.m_rows as f64;
        }
        let mut acc = vec![u64::MAX; self.words];
        let mut widest = 0;
        for item in items {
            let Some(bits) = self.item_bits(item) else {
                return 0.0;
            };
            for (a, b) in acc.iter_mut().zip(bits) {
                *a &= b;
            }
            widest = widest.max(self.schema.cardinality(item.dimension_index));
        }
        let rows: u32 = acc.iter().map(|w| w.count_ones()).sum();
        f64::from(rows) / widest as f64
    }
}

fn threshold_level(
    index: &RowIndex<'_>,
    candidates: Vec<Itemset>,
    k: usize,
    threshold: f64,
    workers: usize,
) -> FrequentLevel {
    let score = |chunk: &[Itemset]| -> Vec<(Itemset, f64)> {
        chunk
            .iter()
            .filter_map(|c| {
                let s = index.support(c);
                is_frequent(s, threshold).then(|| (c.clone(), s))
            })
            .collect()
    };
    let entries = if workers <= 1 || candidates.len() < 2 * workers {
        score(&candidates).into_iter().collect()
    } else {
        let chunk_len = candidates.len().div_ceil(workers);
        thread::scope(|scope| {
            let handles: Vec<_> = candidates
                .chunks(chunk_len)
                .map(|chunk| scope.spawn(move || score(chunk)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("support worker panicked"))
                .collect()
        })
    };
    FrequentLevel {
        k,
        threshold,
        entries,
    }
}

pub fn frequent_singletons(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    beta_1: f64,
) -> FrequentLevel {
    let index = RowIndex::build(schema, table);
    let candidates = schema
        .all_items()
        .into_iter()
        .map(Itemset::singleton)
        .collect();
    threshold_level(&index, candidates, 1, beta_1, 1)
}

/// Joins pairs of `(k-1)`-itemsets that share their first `k-2` items and
/// keeps the unions whose every `(k-1)`-subset is frequent.
pub fn generate_candidates(previous: &FrequentLevel) -> Vec<Itemset> {
    let keys: Vec<&Itemset> = previous.entries.keys().collect();
    let prefix = previous.k.saturating_sub(1);
    let mut out = Vec::new();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            if a.items()[..prefix] != b.items()[..prefix] {
                break;
            }
            let (last_a, last_b) = (&a.items()[prefix], &b.items()[prefix]);
            if last_a.dimension_index >= last_b.dimension_index {
                continue;
            }
            let mut items = a.items().to_vec();
            items.push(last_b.clone());
            let candidate = Itemset::from_sorted(items);
            // dropping either of the last two items gives b or a
            let closed = (0..prefix).all(|p| previous.entries.contains_key(&candidate.without(p)));
            if closed {
                out.push(candidate);
            }
        }
    }
    out
}

pub fn mine(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    config: &MiningConfig,
) -> Result<Vec<FrequentLevel>> {
    let workers = thread::available_parallelism().map_or(1, NonZeroUsize::get);
    mine_with_workers(schema, table, config, workers)
}

/// Runs the level-wise search with candidate supports spread over `workers`
/// threads. The output does not depend on `workers`.
pub fn mine_with_workers(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    config: &MiningConfig,
    workers: usize,
) -> Result<Vec<FrequentLevel>> {
    if schema.is_empty() {
        return Err(Error::QualificationEmpty {
            lambda: schema.lambda,
        });
    }
    let index = RowIndex::build(schema, table);
    let cap = config.effective_cap(schema.len());
    let singletons = schema
        .all_items()
        .into_iter()
        .map(Itemset::singleton)
        .collect();
    let first = threshold_level(&index, singletons, 1, config.beta_for(1), workers);
    if first.is_empty() {
        return Ok(Vec::new());
    }
    let mut levels = vec![first];
    for k in 2..=cap {
        let candidates = generate_candidates(levels.last().unwrap());
        if candidates.is_empty() {
            break;
        }
        let level = threshold_level(&index, candidates, k, config.beta_for(k), workers);
        if level.is_empty() {
            break;
        }
        levels.push(level);
    }
    Ok(levels)
}
