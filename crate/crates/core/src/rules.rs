//! Association rules and fuzzy confidence.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::miner::FrequentLevel;
use crate::table::{Itemset, QualifiedSchema};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    /// Support of `antecedent ∪ consequent`.
    pub support: f64,
    pub confidence: f64,
}

impl Rule {
    pub fn render(&self, schema: &QualifiedSchema) -> String {
        let l = schema.labeler();
        format!(
            "{} => {}",
            l.itemset(&self.antecedent),
            l.itemset(&self.consequent)
        )
    }
}

/// `support(A ∪ B) / support(A)`. Ratios that overshoot 1 by floating noise
/// are clamped; a real overshoot is an error.
pub fn confidence(support_union: f64, support_antecedent: f64) -> Result<f64> {
    if support_antecedent.is_nan() || support_antecedent <= 0.0 {
        return Err(Error::ZeroAntecedentSupport(support_antecedent));
    }
    if support_union > support_antecedent + TOLERANCE {
        return Err(Error::SupportExceedsAntecedent {
            union: support_union,
            antecedent: support_antecedent,
        });
    }
    Ok((support_union / support_antecedent).clamp(0.0, 1.0))
}

/// Emits every rule `A => I \ A` for each frequent itemset `I` with at least
/// two items and each nonempty proper subset `A`, keeping those with
/// confidence at least `min_confidence`.
pub fn generate_rules(levels: &[FrequentLevel], min_confidence: f64) -> Result<Vec<Rule>> {
    let lookup = |subset: &Itemset| -> Result<f64> {
        levels
            .iter()
            .find(|l| l.k == subset.len())
            .and_then(|l| l.get(subset))
            .ok_or_else(|| Error::MissingSubsetSupport(format!("{subset:?}")))
    };
    let mut rules = Vec::new();
    for level in levels.iter().filter(|l| l.k >= 2) {
        let full = (1u64 << level.k) - 1;
        for (itemset, &support) in &level.entries {
            for mask in 1..full {
                let antecedent = itemset.select(mask);
                let confidence = confidence(support, lookup(&antecedent)?)?;
                if confidence >= min_confidence - TOLERANCE {
                    rules.push(Rule {
                        antecedent,
                        consequent: itemset.select(full & !mask),
                        support,
                        confidence,
                    });
                }
            }
        }
    }
    rules.sort_by(rule_order);
    rules.dedup_by(|a, b| a.antecedent == b.antecedent && a.consequent == b.consequent);
    Ok(rules)
}

/// Confidence descending, then support descending, then antecedent and
/// consequent in canonical order.
pub fn rule_order(a: &Rule, b: &Rule) -> Ordering {
    b.confidence
        .total_cmp(&a.confidence)
        .then_with(|| b.support.total_cmp(&a.support))
        .then_with(|| a.antecedent.cmp(&b.antecedent))
        .then_with(|| a.consequent.cmp(&b.consequent))
}
