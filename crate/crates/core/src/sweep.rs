//! Exhaustive sweeps over additive rules of a given modulus and radius.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::additive::{
    classify_additive, is_sensitive_additive, is_surjective_additive, StpVerdict,
};
use crate::error::{CaError, Result};
use crate::oracles::{equicontinuity_oracle, surjectivity_oracle};
use crate::rules::AdditiveRule;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "CA_PERIODIKA_THREADS";

/// Largest number of rules a single sweep enumerates.
pub const MAX_SWEEP_RULES: u64 = 1 << 20;

/// Every additive rule over Z_m with coefficients `c_{-r}, ..., c_r` in `0..m`.
pub fn all_rules(m: u64, r: u32) -> Result<Vec<AdditiveRule>> {
    let width = 2 * r + 1;
    let count = m
        .checked_pow(width)
        .filter(|&n| n <= MAX_SWEEP_RULES)
        .ok_or_else(|| {
            CaError::ResourceCap(format!("{m}^{width} rules exceed {MAX_SWEEP_RULES}"))
        })?;
    (0..count)
        .map(|mut idx| {
            let mut dense = vec![0i64; width as usize];
            for slot in dense.iter_mut().rev() {
                *slot = (idx % m) as i64;
                idx /= m;
            }
            AdditiveRule::from_dense(m, &dense)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleChecks {
    pub budget: u32,
    /// Rules where the gcd criterion and the balance oracle disagree.
    pub surjectivity_disagreements: Vec<String>,
    /// Surjective rules where the coefficient sensitivity test and the
    /// power-repeat search disagree.
    pub equicontinuity_disagreements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub m: u64,
    pub r: u32,
    pub rules: usize,
    pub surjective: usize,
    pub sensitive: usize,
    pub stp: BTreeMap<String, usize>,
    pub oracle_checks: Option<OracleChecks>,
}

impl SweepSummary {
    pub fn disagreements(&self) -> usize {
        self.oracle_checks.as_ref().map_or(0, |c| {
            c.surjectivity_disagreements.len() + c.equicontinuity_disagreements.len()
        })
    }
}

/// Runs `f` on a pool sized by [`THREADS_ENV`], or rayon's default.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

struct RuleOutcome {
    surjective: bool,
    sensitive: bool,
    stp: StpVerdict,
    surjectivity_mismatch: bool,
    equicontinuity_mismatch: bool,
}

fn examine(rule: &AdditiveRule, check: Option<u32>) -> Result<RuleOutcome> {
    let report = classify_additive(rule)?;
    let mut outcome = RuleOutcome {
        surjective: report.surjective,
        sensitive: report.sensitive,
        stp: report.stp,
        surjectivity_mismatch: false,
        equicontinuity_mismatch: false,
    };
    if let Some(budget) = check {
        let table = rule.to_table()?;
        outcome.surjectivity_mismatch =
            surjectivity_oracle(&table)? != is_surjective_additive(rule);
        if outcome.surjective {
            let certified = equicontinuity_oracle(&table, budget)?.cert().is_some();
            outcome.equicontinuity_mismatch = certified == is_sensitive_additive(rule);
        }
    }
    Ok(outcome)
}

/// Classifies every rule; with `check_budget`, cross-checks the gcd
/// criteria against the brute-force oracles.
pub fn sweep(m: u64, r: u32, check_budget: Option<u32>) -> Result<SweepSummary> {
    let rules = all_rules(m, r)?;
    let outcomes: Vec<RuleOutcome> = with_thread_cap(|| {
        rules
            .par_iter()
            .map(|rule| examine(rule, check_budget))
            .collect::<Result<_>>()
    })?;
    let mut stp = BTreeMap::new();
    for o in &outcomes {
        *stp.entry(o.stp.to_string()).or_insert(0) += 1;
    }
    let oracle_checks = check_budget.map(|budget| {
        let pick = |bad: fn(&RuleOutcome) -> bool| {
            rules
                .iter()
                .zip(&outcomes)
                .filter(|(_, o)| bad(o))
                .map(|(rule, _)| rule.spec_string())
                .collect()
        };
        OracleChecks {
            budget,
            surjectivity_disagreements: pick(|o| o.surjectivity_mismatch),
            equicontinuity_disagreements: pick(|o| o.equicontinuity_mismatch),
        }
    });
    Ok(SweepSummary {
        m,
        r,
        rules: rules.len(),
        surjective: outcomes.iter().filter(|o| o.surjective).count(),
        sensitive: outcomes.iter().filter(|o| o.sensitive).count(),
        stp,
        oracle_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_triples() {
        let rules = all_rules(3, 1).unwrap();
        assert_eq!(rules.len(), 27);
        assert_eq!(rules[5].dense(), vec![0, 1, 2]);
        assert!(all_rules(10, 4).is_err());
    }

    #[test]
    fn small_sweep_agrees() {
        let s = sweep(2, 1, Some(64)).unwrap();
        assert_eq!(s.rules, 8);
        assert_eq!(s.disagreements(), 0);
        // every rule but the zero rule has an odd coefficient
        assert_eq!(s.surjective, 7);
    }
}
