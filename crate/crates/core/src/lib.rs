//! Fuzzy multidimensional association rule mining over categorical
//! relational tables.
//!
//! Dimensions with at most `lambda` distinct values are mined. An item
//! `(D, v)` belongs to a transaction with degree `1/n(D)`, an itemset with the
//! minimum of its items' degrees, and fuzzy support is the sum of degrees over
//! all transactions. Frequent itemsets are found level by level with Apriori
//! pruning and turned into rules filtered by fuzzy confidence.
//!
//! ```
//! use fuzzy_mdar::{csv_io, miner, rules, table};
//!
//! let table = csv_io::parse_csv("TID,A,B\nT1,a1,b1\nT2,a1,b2\nT3,a2,b1\n", false).unwrap();
//! let profiles = table::profile_dimensions(&table);
//! let schema = table::qualify_dimensions(&profiles, 2, table.row_count()).unwrap();
//! let config = miner::MiningConfig::new(2, vec![0.5], 0.5, None).unwrap();
//! let levels = miner::mine(&schema, &table, &config).unwrap();
//! let rules = rules::generate_rules(&levels, config.min_confidence).unwrap();
//! assert_eq!(levels[0].len(), 4);
//! assert!(!rules.is_empty());
//! ```

pub mod cli;
pub mod csv_io;
pub mod error;
pub mod membership;
pub mod miner;
pub mod oracle;
pub mod report;
pub mod rules;
pub mod table;

pub use error::{Error, Result};
pub use miner::{mine, FrequentLevel, MiningConfig};
pub use rules::{generate_rules, Rule};
pub use table::{Item, Itemset, QualifiedSchema, RelationalTable};

/// Absolute tolerance for support and confidence comparisons.
pub const TOLERANCE: f64 = 1e-9;
