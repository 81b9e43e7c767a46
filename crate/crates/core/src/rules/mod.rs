//! Local rules: lookup tables, additive rules over Z_m and rule literals.

mod additive;
mod spec;
pub(crate) mod table;

pub use additive::AdditiveRule;
pub use spec::{parse_rule_spec, wolfram_table, RuleSpec};
pub use table::{Permutativity, TableRule, MAX_TABLE_ENTRIES};

use crate::error::Result;

/// Either kind of rule a literal can denote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Table(TableRule),
    Additive(AdditiveRule),
}

impl Rule {
    pub fn to_table(&self) -> Result<TableRule> {
        match self {
            Rule::Table(t) => Ok(t.clone()),
            Rule::Additive(a) => a.to_table(),
        }
    }

    pub fn as_additive(&self) -> Option<&AdditiveRule> {
        match self {
            Rule::Additive(a) => Some(a),
            Rule::Table(_) => None,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            Rule::Table(t) => t.alphabet_size(),
            Rule::Additive(a) => a.modulus() as usize,
        }
    }
}

/// Additive expansion: `f(x_{-r}, ..., x_r) = [Σ a_i x_i]_m` as a table.
pub fn table_from_additive(rule: &AdditiveRule) -> Result<TableRule> {
    rule.to_table()
}

/// Permutativity of a table rule in its outermost cells.
pub fn is_permutative(rule: &TableRule) -> Permutativity {
    rule.permutativity()
}

/// Canonical minimal-window form of a table rule.
pub fn canonicalize_table(rule: &TableRule) -> TableRule {
    rule.canonical()
}
