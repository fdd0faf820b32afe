use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("invalid itemset: {0}")]
    InvalidItemset(String),

    #[error("no dimension has between 1 and {lambda} distinct values")]
    QualificationEmpty { lambda: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("antecedent support must be positive, got {0}")]
    ZeroAntecedentSupport(f64),

    #[error("union support {union} exceeds antecedent support {antecedent}")]
    SupportExceedsAntecedent { union: f64, antecedent: f64 },

    #[error("support of subset {0} is missing from the frequent levels")]
    MissingSubsetSupport(String),

    #[error("oracle enumeration would visit {count} itemsets (limit {limit})")]
    OracleTooLarge { count: u128, limit: u128 },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("input has no transactions")]
    EmptyInput,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
