//! Relational table model, dimension profiling and lambda qualification.
//!
//! A [`RelationalTable`] is a rectangular grid of categorical cells: rows are
//! transactions and columns are dimensions. Mining only considers the
//! dimensions whose number of distinct values does not exceed `lambda`; those
//! form the [`QualifiedSchema`] that every later stage indexes into.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A category label. Compared by exact bytes, case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoricalValue(Arc<str>);

impl CategoricalValue {
    pub fn new(label: &str) -> Result<Self> {
        if label.is_empty() {
            return Err(Error::InvalidTable(
                "categorical values must be non-empty".into(),
            ));
        }
        Ok(Self(Arc::from(label)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CategoricalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Row-major grid of categorical cells. `None` is a missing cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalTable {
    transaction_ids: Vec<String>,
    dimension_names: Vec<String>,
    cells: Vec<Option<CategoricalValue>>,
}

impl RelationalTable {
    /// Builds a table, checking it is rectangular, non-empty and has unique,
    /// non-empty dimension names.
    pub fn new(
        transaction_ids: Vec<String>,
        dimension_names: Vec<String>,
        rows: Vec<Vec<Option<CategoricalValue>>>,
    ) -> Result<Self> {
        if dimension_names.is_empty() {
            return Err(Error::InvalidTable("table has no dimensions".into()));
        }
        if rows.is_empty() {
            return Err(Error::InvalidTable("table has no rows".into()));
        }
        if transaction_ids.len() != rows.len() {
            return Err(Error::InvalidTable(format!(
                "{} transaction ids for {} rows",
                transaction_ids.len(),
                rows.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &dimension_names {
            if name.is_empty() {
                return Err(Error::InvalidTable("empty dimension name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidTable(format!(
                    "duplicate dimension name {name:?}"
                )));
            }
        }
        let width = dimension_names.len();
        let mut cells = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidTable(format!(
                    "row {} has {} cells, expected {width}",
                    i + 1,
                    row.len()
                )));
            }
            cells.extend(row);
        }
        Ok(Self {
            transaction_ids,
            dimension_names,
            cells,
        })
    }

    /// Convenience constructor from string labels; an empty label is a
    /// missing cell and transaction ids are `T1..Tm`.
    pub fn from_labels<S: AsRef<str>>(dimension_names: &[&str], rows: &[Vec<S>]) -> Result<Self> {
        let ids = (1..=rows.len()).map(|i| format!("T{i}")).collect();
        let names = dimension_names.iter().map(|s| s.to_string()).collect();
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let c = c.as_ref();
                        if c.is_empty() {
                            Ok(None)
                        } else {
                            CategoricalValue::new(c).map(Some)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ids, names, rows)
    }

    pub fn row_count(&self) -> usize {
        self.transaction_ids.len()
    }

    pub fn dimension_count(&self) -> usize {
        self.dimension_names.len()
    }

    pub fn transaction_ids(&self) -> &[String] {
        &self.transaction_ids
    }

    pub fn dimension_names(&self) -> &[String] {
        &self.dimension_names
    }

    pub fn cell(&self, row: usize, column: usize) -> Option<&CategoricalValue> {
        self.cells[row * self.dimension_names.len() + column].as_ref()
    }

    pub fn row(&self, row: usize) -> &[Option<CategoricalValue>] {
        let width = self.dimension_names.len();
        &self.cells[row * width..(row + 1) * width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Option<CategoricalValue>]> + '_ {
        self.cells.chunks(self.dimension_names.len())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.dimension_names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionProfile {
    /// Column ordinal in the source table.
    pub dimension_index: usize,
    pub name: String,
    /// Distinct non-missing labels, sorted lexicographically.
    pub distinct_values: Vec<CategoricalValue>,
    pub missing_count: usize,
}

impl DimensionProfile {
    /// Number of distinct categories, `n(D)`.
    pub fn cardinality(&self) -> usize {
        self.distinct_values.len()
    }

    pub fn contains(&self, value: &CategoricalValue) -> bool {
        self.distinct_values.binary_search(value).is_ok()
    }
}

pub fn profile_dimensions(table: &RelationalTable) -> Vec<DimensionProfile> {
    (0..table.dimension_count())
        .map(|col| {
            let mut distinct = BTreeSet::new();
            let mut missing_count = 0;
            for row in table.rows() {
                match &row[col] {
                    Some(v) => {
                        distinct.insert(v.clone());
                    }
                    None => missing_count += 1,
                }
            }
            DimensionProfile {
                dimension_index: col,
                name: table.dimension_names()[col].clone(),
                distinct_values: distinct.into_iter().collect(),
                missing_count,
            }
        })
        .collect()
}

/// The dimensions that take part in mining, `M = {D | 1 <= n(D) <= lambda}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifiedSchema {
    pub qualified: Vec<DimensionProfile>,
    pub lambda: usize,
    pub m_rows: usize,
}

impl QualifiedSchema {
    /// `|M|`.
    pub fn len(&self) -> usize {
        self.qualified.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qualified.is_empty()
    }

    pub fn dimension(&self, index: usize) -> &DimensionProfile {
        &self.qualified[index]
    }

    pub fn cardinality(&self, index: usize) -> usize {
        self.qualified[index].cardinality()
    }

    /// Looks up an item by dimension name and value label.
    pub fn item(&self, dimension: &str, value: &str) -> Option<Item> {
        let index = self.qualified.iter().position(|d| d.name == dimension)?;
        let value = CategoricalValue::new(value).ok()?;
        self.qualified[index]
            .contains(&value)
            .then(|| Item::new(index, value))
    }

    /// Every item of every qualified dimension, in canonical order.
    pub fn all_items(&self) -> Vec<Item> {
        self.qualified
            .iter()
            .enumerate()
            .flat_map(|(i, d)| {
                d.distinct_values
                    .iter()
                    .map(move |v| Item::new(i, v.clone()))
            })
            .collect()
    }

    pub fn labeler(&self) -> ItemLabeler<'_> {
        ItemLabeler::new(self)
    }
}

pub fn qualify_dimensions(
    profiles: &[DimensionProfile],
    lambda: usize,
    m_rows: usize,
) -> Result<QualifiedSchema> {
    if lambda < 2 {
        return Err(Error::InvalidConfig(format!(
            "lambda must be at least 2, got {lambda}"
        )));
    }
    let qualified: Vec<_> = profiles
        .iter()
        .filter(|p| (1..=lambda).contains(&p.cardinality()))
        .cloned()
        .collect();
    if qualified.is_empty() {
        return Err(Error::QualificationEmpty { lambda });
    }
    Ok(QualifiedSchema {
        qualified,
        lambda,
        m_rows,
    })
}

/// A `(dimension, value)` pair. `dimension_index` indexes
/// [`QualifiedSchema::qualified`], not the table columns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item {
    pub dimension_index: usize,
    pub value: CategoricalValue,
}

impl Item {
    pub fn new(dimension_index: usize, value: CategoricalValue) -> Self {
        Self {
            dimension_index,
            value,
        }
    }
}

/// Inter-dimension itemset: sorted by `(dimension_index, value)`, at most one
/// item per dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Itemset {
    items: Vec<Item>,
}

impl Itemset {
    pub fn new(mut items: Vec<Item>) -> Result<Self> {
        items.sort();
        if items
            .windows(2)
            .any(|w| w[0].dimension_index == w[1].dimension_index)
        {
            return Err(Error::InvalidItemset("itemset repeats a dimension".into()));
        }
        Ok(Self { items })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(item: Item) -> Self {
        Self { items: vec![item] }
    }

    /// Caller guarantees `items` is sorted with strictly increasing dimensions.
    pub(crate) fn from_sorted(items: Vec<Item>) -> Self {
        debug_assert!(items
            .windows(2)
            .all(|w| w[0].dimension_index < w[1].dimension_index));
        Self { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The itemset with the item at `position` removed.
    pub fn without(&self, position: usize) -> Self {
        let mut items = self.items.clone();
        items.remove(position);
        Self { items }
    }

    /// Items selected by the bits of `mask` (bit `i` picks item `i`).
    pub fn select(&self, mask: u64) -> Self {
        let items = self
            .items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, item)| item.clone())
            .collect();
        Self { items }
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        self.items
            .iter()
            .all(|i| other.items.binary_search(i).is_ok())
    }
}

/// Renders items and itemsets for reports. An item is shown by its value
/// label alone, or as `dimension=value` when the same label occurs in more
/// than one qualified dimension.
pub struct ItemLabeler<'a> {
    schema: &'a QualifiedSchema,
    shared: BTreeSet<&'a str>,
}

impl<'a> ItemLabeler<'a> {
    fn new(schema: &'a QualifiedSchema) -> Self {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for d in &schema.qualified {
            for v in &d.distinct_values {
                *counts.entry(v.as_str()).or_default() += 1;
            }
        }
        let shared = counts
            .into_iter()
            .filter(|&(_, n)| n > 1)
            .map(|(label, _)| label)
            .collect();
        Self { schema, shared }
    }

    pub fn item(&self, item: &Item) -> String {
        let label = item.value.as_str();
        if self.shared.contains(label) {
            format!(
                "{}={}",
                self.schema.qualified[item.dimension_index].name, label
            )
        } else {
            label.to_string()
        }
    }

    pub fn itemset(&self, itemset: &Itemset) -> String {
        itemset
            .items()
            .iter()
            .map(|i| self.item(i))
            .collect::<Vec<_>>()
            .join(" ∧ ")
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const TABLE_ONE: [[&str; 6]; 10] = [
        ["A1", "B1", "C1", "D1", "E1", "F1"],
        ["A2", "B2", "C2", "D1", "E1", "F2"],
        ["A2", "B2", "C2", "D2", "E1", "F1"],
        ["A1", "B3", "C2", "D1", "E1", "F4"],
        ["A2", "B3", "C2", "D1", "E2", "F3"],
        ["A2", "B1", "C2", "D1", "E2", "F1"],
        ["A1", "B2", "C1", "D2", "E1", "F4"],
        ["A1", "B2", "C2", "D1", "E1", "F2"],
        ["A1", "B2", "C1", "D2", "E1", "F4"],
        ["A2", "B3", "C1", "D1", "E2", "F3"],
    ];

    pub fn table_one() -> RelationalTable {
        let rows: Vec<Vec<&str>> = TABLE_ONE.iter().map(|r| r.to_vec()).collect();
        RelationalTable::from_labels(&["A", "B", "C", "D", "E", "F"], &rows).unwrap()
    }

    pub fn table_one_schema(lambda: usize) -> (RelationalTable, QualifiedSchema) {
        let table = table_one();
        let profiles = profile_dimensions(&table);
        let schema = qualify_dimensions(&profiles, lambda, table.row_count()).unwrap();
        (table, schema)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn names(schema: &QualifiedSchema) -> Vec<&str> {
        schema.qualified.iter().map(|d| d.name.as_str()).collect()
    }

    #[test]
    fn profiles_table_one() {
        let profiles = profile_dimensions(&table_one());
        assert_eq!(profiles.len(), 6);
        assert_eq!(profiles[0].cardinality(), 2);
        assert_eq!(profiles[1].cardinality(), 3);
        assert_eq!(profiles[5].cardinality(), 4);
        let f: Vec<_> = profiles[5]
            .distinct_values
            .iter()
            .map(|v| v.as_str())
            .collect();
        assert_eq!(f, ["F1", "F2", "F3", "F4"]);
        assert!(profiles.iter().all(|p| p.missing_count == 0));
    }

    #[test]
    fn all_missing_column_has_zero_cardinality() {
        let table = RelationalTable::from_labels(&["X"], &[vec![""], vec![""], vec![""]]).unwrap();
        let p = profile_dimensions(&table);
        assert_eq!(p[0].cardinality(), 0);
        assert_eq!(p[0].missing_count, 3);
        assert!(matches!(
            qualify_dimensions(&p, 5, 3),
            Err(Error::QualificationEmpty { lambda: 5 })
        ));
    }

    #[test]
    fn qualification_with_lambda_three_drops_f() {
        let (_, schema) = table_one_schema(3);
        assert_eq!(names(&schema), ["A", "B", "C", "D", "E"]);
        assert_eq!(schema.len(), 5);
    }

    #[test]
    fn qualification_with_lambda_two_drops_b_and_f() {
        let (_, schema) = table_one_schema(2);
        assert_eq!(names(&schema), ["A", "C", "D", "E"]);
    }

    #[test]
    fn large_lambda_keeps_everything_and_is_idempotent() {
        let table = table_one();
        let profiles = profile_dimensions(&table);
        let schema = qualify_dimensions(&profiles, 10, 10).unwrap();
        assert_eq!(schema.len(), 6);
        let again = qualify_dimensions(&schema.qualified, 10, 10).unwrap();
        assert_eq!(again, schema);
    }

    #[test]
    fn lambda_below_two_rejected() {
        let profiles = profile_dimensions(&table_one());
        assert!(matches!(
            qualify_dimensions(&profiles, 1, 10),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn nothing_qualifies() {
        let table =
            RelationalTable::from_labels(&["X"], &[vec!["a"], vec!["b"], vec!["c"]]).unwrap();
        let p = profile_dimensions(&table);
        assert!(matches!(
            qualify_dimensions(&p, 2, 3),
            Err(Error::QualificationEmpty { .. })
        ));
    }

    #[test]
    fn table_invariants_enforced() {
        let v = |s: &str| Some(CategoricalValue::new(s).unwrap());
        let dup = RelationalTable::new(
            vec!["T1".into()],
            vec!["A".into(), "A".into()],
            vec![vec![v("x"), v("y")]],
        );
        assert!(dup.is_err());
        let ragged = RelationalTable::new(
            vec!["T1".into(), "T2".into()],
            vec!["A".into(), "B".into()],
            vec![vec![v("x"), v("y")], vec![v("x")]],
        );
        assert!(ragged.is_err());
        let empty = RelationalTable::new(vec![], vec!["A".into()], vec![]);
        assert!(empty.is_err());
        assert!(CategoricalValue::new("").is_err());
    }

    #[test]
    fn itemset_rejects_repeated_dimension_and_sorts() {
        let v = |s: &str| CategoricalValue::new(s).unwrap();
        assert!(Itemset::new(vec![Item::new(0, v("A1")), Item::new(0, v("A2"))]).is_err());
        let set = Itemset::new(vec![Item::new(2, v("C2")), Item::new(0, v("A1"))]).unwrap();
        assert_eq!(set.items()[0].dimension_index, 0);
        assert_eq!(set.without(0).items()[0].value.as_str(), "C2");
        assert_eq!(set.select(0b10).len(), 1);
        assert!(set.select(0b01).is_subset_of(&set));
    }

    #[test]
    fn labeler_qualifies_shared_labels() {
        let table = RelationalTable::from_labels(
            &["smoker", "asthma", "age"],
            &[vec!["yes", "no", "old"], vec!["no", "yes", "young"]],
        )
        .unwrap();
        let schema = qualify_dimensions(&profile_dimensions(&table), 2, 2).unwrap();
        let labeler = schema.labeler();
        let set = Itemset::new(vec![
            schema.item("smoker", "yes").unwrap(),
            schema.item("age", "old").unwrap(),
        ])
        .unwrap();
        assert_eq!(labeler.itemset(&set), "smoker=yes ∧ old");
    }

    #[test]
    fn schema_item_lookup() {
        let (_, schema) = table_one_schema(3);
        assert_eq!(schema.item("B", "B2").unwrap().dimension_index, 1);
        assert!(schema.item("F", "F1").is_none());
        assert!(schema.item("A", "A9").is_none());
        assert_eq!(schema.all_items().len(), 11);
    }
}
