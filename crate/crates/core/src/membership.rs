//! Fuzzy membership of items and itemsets in transactions.
//!
//! An item `(D, v)` belongs to a transaction with degree `1/n(D)` when the
//! transaction's cell in `D` is `v`, and 0 otherwise. An itemset's degree is
//! the minimum of its items' degrees.

use crate::table::{Item, Itemset, QualifiedSchema, RelationalTable};

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVector {
    pub itemset: Itemset,
    /// One degree per transaction, each in `[0, 1]`.
    pub degrees: Vec<f64>,
}

/// Boolean membership: 1 iff the row's cell in the item's dimension is the
/// item's value. A missing cell never matches.
pub fn eta(schema: &QualifiedSchema, table: &RelationalTable, row: usize, item: &Item) -> u8 {
    let column = schema.dimension(item.dimension_index).dimension_index;
    match table.cell(row, column) {
        Some(v) if *v == item.value => 1,
        _ => 0,
    }
}

pub fn item_degree(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    row: usize,
    item: &Item,
) -> f64 {
    f64::from(eta(schema, table, row, item)) / schema.cardinality(item.dimension_index) as f64
}

/// Minimum item degree over the itemset; 1 for the empty itemset.
pub fn itemset_degree(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    row: usize,
    itemset: &Itemset,
) -> f64 {
    itemset
        .items()
        .iter()
        .map(|item| item_degree(schema, table, row, item))
        .fold(1.0, f64::min)
}

pub fn membership_vector(
    schema: &QualifiedSchema,
    table: &RelationalTable,
    itemset: &Itemset,
) -> MembershipVector {
    let degrees = (0..table.row_count())
        .map(|row| itemset_degree(schema, table, row, itemset))
        .collect();
    MembershipVector {
        itemset: itemset.clone(),
        degrees,
    }
}
