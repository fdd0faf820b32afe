//! Brute-force reference miner in exact rational arithmetic.
//!
//! Shares only the table types with the main miner. Every inter-dimension
//! itemset up to the level cap is enumerated and its support is summed row by
//! row from the raw cells, with no pruning and no floating point until the
//! final comparison.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::miner::{FrequentLevel, MiningConfig};
use crate::rules::Rule;
use crate::table::{CategoricalValue, Item, Itemset, QualifiedSchema, RelationalTable};

pub type Rational = BigRational;

/// Largest number of itemsets the oracle will enumerate.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

fn tolerance() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("finite threshold")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact fuzzy support: sum over rows of the minimum `eta / n(D)` across the
/// itemset's items.
pub fn oracle_support(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    itemset: &Itemset,
) -> Rational {
    let mut total = Rational::zero();
    for row in 0..table.row_count() {
        let mut degree = Rational::one();
        for item in itemset.items() {
            let dim = &schema.qualified[item.dimension_index];
            let term = if table.cell(row, dim.dimension_index) == Some(&item.value) {
                Rational::new(BigInt::one(), BigInt::from(dim.distinct_values.len()))
            } else {
                Rational::zero()
            };
            if term < degree {
                degree = term;
            }
        }
        total += degree;
    }
    total
}

/// Number of inter-dimension itemsets with 1..=cap items.
pub fn itemset_count(schema: &QualifiedSchema, cap: usize) -> u128 {
    // by_size[s] = number of itemsets with s items over the dimensions seen so far
    let mut by_size = vec![0u128; cap + 1];
    by_size[0] = 1;
    for dim in &schema.qualified {
        let n = dim.cardinality() as u128;
        for s in (1..=cap).rev() {
            by_size[s] = by_size[s].saturating_add(by_size[s - 1].saturating_mul(n));
        }
    }
    by_size[1..].iter().fold(0u128, |a, b| a.saturating_add(*b))
}

fn enumerate(schema: &QualifiedSchema, cap: usize) -> Vec<Itemset> {
    fn walk(
        schema: &QualifiedSchema,
        dim: usize,
        cap: usize,
        current: &mut Vec<Item>,
        out: &mut Vec<Itemset>,
    ) {
        if dim == schema.qualified.len() {
            if !current.is_empty() {
                out.push(Itemset::new(current.clone()).expect("one item per dimension"));
            }
            return;
        }
        walk(schema, dim + 1, cap, current, out);
        if current.len() < cap {
            for value in &schema.qualified[dim].distinct_values {
                current.push(Item::new(dim, value.clone()));
                walk(schema, dim + 1, cap, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(schema, 0, cap, &mut Vec::new(), &mut out);
    out
}

/// Exact frequent itemsets, one map per non-empty level.
///
/// An itemset of size k is frequent when every nonempty subset `J` of it
/// (itself included) reaches `beta_{|J|}`. With non-increasing thresholds
/// this is just `support >= beta_k`; with arbitrary thresholds it is the set
/// a level-wise search can reach.
pub fn oracle_mine_exact(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    config: &MiningConfig,
) -> Result<Vec<BTreeMap<Itemset, Rational>>> {
    let cap = config.effective_cap(schema.len());
    let count = itemset_count(schema, cap);
    if count > ENUMERATION_LIMIT {
        return Err(Error::OracleTooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let supports: BTreeMap<Itemset, Rational> = enumerate(schema, cap)
        .into_iter()
        .map(|s| {
            let sup = oracle_support(schema, table, &s);
            (s, sup)
        })
        .collect();
    let tol = tolerance();
    let reaches = |s: &Itemset| supports[s] >= exact(config.beta_for(s.len())) - &tol;

    let mut levels: Vec<BTreeMap<Itemset, Rational>> = vec![BTreeMap::new(); cap];
    for (itemset, sup) in &supports {
        let k = itemset.len();
        let all_subsets = (1..(1u64 << k)).all(|mask| reaches(&itemset.select(mask)));
        if all_subsets {
            levels[k - 1].insert(itemset.clone(), sup.clone());
        }
    }
    while levels.last().is_some_and(BTreeMap::is_empty) {
        levels.pop();
    }
    Ok(levels)
}

pub fn oracle_mine(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    config: &MiningConfig,
) -> Result<Vec<FrequentLevel>> {
    Ok(to_levels(
        &oracle_mine_exact(schema, table, config)?,
        config,
    ))
}

/// Converts exact levels to floating-point [`FrequentLevel`]s.
pub fn to_levels(
    exact: &[BTreeMap<Itemset, Rational>],
    config: &MiningConfig,
) -> Vec<FrequentLevel> {
    exact
        .iter()
        .enumerate()
        .map(|(i, level)| FrequentLevel {
            k: i + 1,
            threshold: config.beta_for(i + 1),
            entries: level.iter().map(|(s, r)| (s.clone(), to_f64(r))).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub support: Rational,
    pub confidence: Rational,
}

/// Every split of every exact frequent itemset, with the antecedent support
/// recomputed from the table.
pub fn oracle_rules(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    levels: &[BTreeMap<Itemset, Rational>],
    min_confidence: f64,
) -> Vec<OracleRule> {
    let floor = exact(min_confidence) - tolerance();
    let mut out = Vec::new();
    for level in levels {
        for (itemset, sup) in level {
            let k = itemset.len();
            if k < 2 {
                continue;
            }
            let full = (1u64 << k) - 1;
            for mask in 1..full {
                let antecedent = itemset.select(mask);
                let confidence = sup / oracle_support(schema, table, &antecedent);
                if confidence >= floor {
                    out.push(OracleRule {
                        antecedent,
                        consequent: itemset.select(full ^ mask),
                        support: sup.clone(),
                        confidence,
                    });
                }
            }
        }
    }
    out
}

/// Differences between miner levels and oracle levels: missing or extra
/// itemsets and supports further apart than `tolerance`.
pub fn compare_levels(
    schema: &QualifiedSchema,
    miner: &[FrequentLevel],
    oracle: &[FrequentLevel],
    tolerance: f64,
) -> Vec<String> {
    let labels = schema.labeler();
    let flatten = |levels: &[FrequentLevel]| -> BTreeMap<Itemset, f64> {
        levels
            .iter()
            .flat_map(|l| l.entries.iter().map(|(s, v)| (s.clone(), *v)))
            .collect()
    };
    let (m, o) = (flatten(miner), flatten(oracle));
    let mut diffs = Vec::new();
    let keys: BTreeSet<&Itemset> = m.keys().chain(o.keys()).collect();
    for key in keys {
        let name = labels.itemset(key);
        match (m.get(key), o.get(key)) {
            (Some(_), None) => diffs.push(format!("itemset {name} frequent in miner only")),
            (None, Some(_)) => diffs.push(format!("itemset {name} frequent in oracle only")),
            (Some(a), Some(b)) if (a - b).abs() > tolerance => {
                diffs.push(format!("itemset {name}: miner support {a} vs oracle {b}"))
            }
            _ => {}
        }
    }
    diffs
}

pub fn compare_rules(
    schema: &QualifiedSchema,
    miner: &[Rule],
    oracle: &[OracleRule],
    tolerance: f64,
) -> Vec<String> {
    let labels = schema.labeler();
    let m: BTreeMap<(&Itemset, &Itemset), (f64, f64)> = miner
        .iter()
        .map(|r| ((&r.antecedent, &r.consequent), (r.support, r.confidence)))
        .collect();
    let o: BTreeMap<(&Itemset, &Itemset), (f64, f64)> = oracle
        .iter()
        .map(|r| {
            (
                (&r.antecedent, &r.consequent),
                (to_f64(&r.support), to_f64(&r.confidence)),
            )
        })
        .collect();
    let mut diffs = Vec::new();
    if m.len() != miner.len() {
        diffs.push("miner emitted duplicate rules".to_string());
    }
    let keys: BTreeSet<_> = m.keys().chain(o.keys()).copied().collect();
    for key in keys {
        let name = format!("{} => {}", labels.itemset(key.0), labels.itemset(key.1));
        match (m.get(&key), o.get(&key)) {
            (Some(_), None) => diffs.push(format!("rule {name} emitted by miner only")),
            (None, Some(_)) => diffs.push(format!("rule {name} emitted by oracle only")),
            (Some(a), Some(b)) => {
                if (a.0 - b.0).abs() > tolerance {
                    diffs.push(format!(
                        "rule {name}: miner support {} vs oracle {}",
                        a.0, b.0
                    ));
                }
                if (a.1 - b.1).abs() > tolerance {
                    diffs.push(format!(
                        "rule {name}: miner confidence {} vs oracle {}",
                        a.1, b.1
                    ));
                }
            }
            (None, None) => unreachable!(),
        }
    }
    diffs
}

fn dimension_name(mut index: usize) -> String {
    // A..Z, then AA, AB, ...
    let mut name = Vec::new();
    loop {
        name.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    name.reverse();
    String::from_utf8(name).unwrap()
}

/// Deterministic pseudo-random categorical table. Dimension `j` draws its
/// domain size uniformly from `1..=max_values` and labels its values
/// `<name>1`, `<name>2`, ...
pub fn random_table(seed: u64, rows: usize, dims: usize, max_values: usize) -> RelationalTable {
    assert!(
        rows >= 1 && dims >= 1 && max_values >= 1,
        "counts must be positive"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..dims).map(dimension_name).collect();
    let domains: Vec<Vec<CategoricalValue>> = names
        .iter()
        .map(|name| {
            let n = rng.gen_range(1..=max_values);
            (1..=n)
                .map(|v| CategoricalValue::new(&format!("{name}{v}")).unwrap())
                .collect()
        })
        .collect();
    let cells = (0..rows)
        .map(|_| {
            domains
                .iter()
                .map(|domain| Some(domain[rng.gen_range(0..domain.len())].clone()))
                .collect()
        })
        .collect();
    let ids = (1..=rows).map(|i| format!("T{i}")).collect();
    RelationalTable::new(ids, names, cells).expect("generated table is rectangular")
}
