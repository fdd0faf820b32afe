#![allow(dead_code)]

use std::collections::BTreeSet;

use fuzzy_mdar::membership::membership_vector;
use fuzzy_mdar::miner::{mine_with_workers, support};
use fuzzy_mdar::oracle::{
    compare_levels, compare_rules, oracle_mine, oracle_mine_exact, oracle_rules, random_table,
};
use fuzzy_mdar::table::{profile_dimensions, qualify_dimensions};
use fuzzy_mdar::{
    generate_rules, FrequentLevel, Itemset, MiningConfig, QualifiedSchema, RelationalTable, Rule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

pub const TABLE_ONE_CSV: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/table1.csv");

pub struct Case {
    pub seed: u64,
    pub table: RelationalTable,
    pub schema: QualifiedSchema,
    pub config: MiningConfig,
}

/// Random table and configuration within the oracle's comfort zone:
/// rows <= 30, dims <= 6, values per dimension <= 5, lambda in 2..=5.
/// Returns `None` when no dimension qualifies.
pub fn random_case(seed: u64) -> Option<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    let rows = rng.gen_range(1..=30);
    let dims = rng.gen_range(1..=6);
    let max_values = rng.gen_range(1..=5);
    let lambda = rng.gen_range(2..=5);
    let table = random_table(seed, rows, dims, max_values);
    let schema = qualify_dimensions(&profile_dimensions(&table), lambda, rows).ok()?;
    let bound = schema.len() as f64;
    let beta = (0..rng.gen_range(1..=3))
        .map(|_| {
            if rng.gen_bool(0.5) {
                // thresholds that land exactly on attainable supports
                let denominator = rng.gen_range(1..=5) as f64;
                (rng.gen_range(1..=(bound * denominator) as u32) as f64 / denominator).min(bound)
            } else {
                rng.gen_range(0.05..=bound.min(4.0))
            }
        })
        .collect();
    let max_k = rng.gen_bool(0.3).then(|| rng.gen_range(1..=6));
    let min_confidence = if rng.gen_bool(0.3) {
        0.0
    } else {
        rng.gen_range(0.0..=1.0)
    };
    let config = MiningConfig::new(lambda, beta, min_confidence, max_k).unwrap();
    Some(Case {
        seed,
        table,
        schema,
        config,
    })
}

/// The first `n` seeds that produce a non-empty schema.
pub fn random_cases(n: usize) -> Vec<Case> {
    (0u64..).filter_map(random_case).take(n).collect()
}

pub fn table_one() -> RelationalTable {
    fuzzy_mdar::csv_io::load_csv(TABLE_ONE_CSV, false).unwrap()
}

pub fn paper_config() -> MiningConfig {
    MiningConfig::new(3, vec![2.0, 2.0, 1.5], 0.0, None).unwrap()
}

pub fn schema_for(table: &RelationalTable, lambda: usize) -> QualifiedSchema {
    qualify_dimensions(&profile_dimensions(table), lambda, table.row_count()).unwrap()
}

pub fn itemset(schema: &QualifiedSchema, labels: &[(&str, &str)]) -> Itemset {
    Itemset::new(
        labels
            .iter()
            .map(|(d, v)| schema.item(d, v).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn keys(level: &FrequentLevel, schema: &QualifiedSchema) -> BTreeSet<String> {
    let l = schema.labeler();
    level.entries.keys().map(|s| l.itemset(s)).collect()
}

/// Miner against oracle on one case; returns every difference found.
pub fn oracle_differences(case: &Case, workers: usize) -> Vec<String> {
    let levels = mine_with_workers(&case.schema, &case.table, &case.config, workers).unwrap();
    let rules = generate_rules(&levels, case.config.min_confidence).unwrap();
    let oracle = oracle_mine(&case.schema, &case.table, &case.config).unwrap();
    let exact = oracle_mine_exact(&case.schema, &case.table, &case.config).unwrap();
    let oracle_rules = oracle_rules(
        &case.schema,
        &case.table,
        &exact,
        case.config.min_confidence,
    );
    let mut diffs = compare_levels(&case.schema, &levels, &oracle, TOL);
    if levels.len() != oracle.len() {
        diffs.push(format!(
            "miner has {} levels, oracle {}",
            levels.len(),
            oracle.len()
        ));
    }
    diffs.extend(compare_rules(&case.schema, &rules, &oracle_rules, TOL));
    diffs
}

fn vector_support(schema: &QualifiedSchema, table: &RelationalTable, set: &Itemset) -> f64 {
    support(&membership_vector(schema, table, set))
}

/// Structural invariants of a mining result; returns violations.
pub fn invariant_violations(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    levels: &[FrequentLevel],
    rules: &[Rule],
) -> Vec<String> {
    let mut out = Vec::new();
    let m = table.row_count() as f64;

    for level in levels {
        for (set, &sup) in &level.entries {
            let k = set.len();
            if k != level.k {
                out.push(format!("{set:?} stored at level {}", level.k));
            }
            // anti-monotonicity over all proper nonempty subsets
            for mask in 1..(1u64 << k) - 1 {
                let sub = set.select(mask);
                if vector_support(schema, table, &sub) < sup - TOL {
                    out.push(format!("subset {sub:?} has lower support than {set:?}"));
                }
            }
            // downward closure of the emitted levels
            if k >= 2 {
                let previous = levels.iter().find(|l| l.k == k - 1);
                for i in 0..k {
                    if previous.and_then(|l| l.get(&set.without(i))).is_none() {
                        out.push(format!("{set:?} has an infrequent (k-1)-subset"));
                    }
                }
            }
            let bound = m / set
                .items()
                .iter()
                .map(|i| schema.cardinality(i.dimension_index))
                .max()
                .unwrap() as f64;
            if sup > bound + TOL {
                out.push(format!("{set:?} support {sup} above bound {bound}"));
            }
            let v = membership_vector(schema, table, set);
            if v.degrees.iter().any(|d| !(0.0..=1.0).contains(d)) {
                out.push(format!("{set:?} has a degree outside [0, 1]"));
            }
        }
    }

    for (d, dim) in schema.qualified.iter().enumerate() {
        let items: Vec<_> = schema
            .all_items()
            .into_iter()
            .filter(|i| i.dimension_index == d)
            .collect();
        for item in &items {
            let v = membership_vector(schema, table, &Itemset::singleton(item.clone()));
            if v.degrees.iter().any(|x| !(0.0..=1.0).contains(x)) {
                out.push(format!("{item:?} has a degree outside [0, 1]"));
            }
        }
        if dim.missing_count == 0 {
            let total: f64 = items
                .iter()
                .map(|i| vector_support(schema, table, &Itemset::singleton(i.clone())))
                .sum();
            let expected = m / dim.cardinality() as f64;
            if (total - expected).abs() > TOL {
                out.push(format!(
                    "dimension {} conserves {total}, expected {expected}",
                    dim.name
                ));
            }
        }
    }

    for rule in rules {
        if !(0.0..=1.0).contains(&rule.confidence) {
            out.push(format!(
                "rule confidence {} outside [0, 1]",
                rule.confidence
            ));
        }
    }
    out
}
