//! Brute-force deciders that do not rely on the additive algebra.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{CaError, Result};
use crate::rules::TableRule;
use crate::Letter;

/// Distinct preimage-count vectors explored before giving up.
pub const MAX_BALANCE_VECTORS: usize = 1 << 21;

/// Largest table the equicontinuity oracle will build for a rule power.
pub const MAX_POWER_ENTRIES: usize = 1 << 18;

/// Largest radius the equicontinuity oracle will build for a rule power.
pub const MAX_POWER_RADIUS: u32 = 12;

/// Exact surjectivity test by balance counting.
///
/// A rule of window width `w` is surjective iff every word of length `n`
/// has exactly `|A|^{w-1}` preimages of length `n + w - 1`. Preimage counts
/// are tracked per de Bruijn state (the last `w - 1` preimage letters);
/// since every count vector of a balanced rule sums to `|A|^{w-1}`, only
/// finitely many vectors are reachable, and the search closes over all of
/// them.
pub fn surjectivity_oracle(rule: &TableRule) -> Result<bool> {
    let rule = rule.canonical();
    let k = rule.alphabet_size();
    if rule.width() == 0 {
        return Ok(false);
    }
    let states = rule.table().len() / k;
    let total = states as u64;
    let table = rule.table();

    let start = vec![1u32; states];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut next = vec![vec![0u32; states]; k];
    while let Some(counts) = queue.pop_front() {
        for row in next.iter_mut() {
            row.fill(0);
        }
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..k {
                let idx = s * k + a;
                let image = table[idx] as usize;
                next[image][idx % states] += c;
            }
        }
        for row in &next {
            if row.iter().map(|&c| c as u64).sum::<u64>() != total {
                return Ok(false);
            }
            if !seen.contains(row) {
                if seen.len() >= MAX_BALANCE_VECTORS {
                    return Err(CaError::ResourceCap(format!(
                        "more than {MAX_BALANCE_VECTORS} preimage-count vectors"
                    )));
                }
                seen.insert(row.clone());
                queue.push_back(row.clone());
            }
        }
    }
    Ok(true)
}

/// Witness of `F^q = F^{q+p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquicontinuityCert {
    pub q: u32,
    pub p: u32,
}

/// Outcome of [`equicontinuity_oracle`]. `Unknown` is not a disproof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum EquicontinuityOutcome {
    Certified(EquicontinuityCert),
    Unknown { examined: u32, reason: String },
}

impl EquicontinuityOutcome {
    pub fn cert(&self) -> Option<EquicontinuityCert> {
        match self {
            EquicontinuityOutcome::Certified(c) => Some(*c),
            EquicontinuityOutcome::Unknown { .. } => None,
        }
    }
}

/// Searches for the first repeat among `F^0, F^1, ...` with `q + p ≤ budget`.
pub fn equicontinuity_oracle(rule: &TableRule, budget: u32) -> Result<EquicontinuityOutcome> {
    if budget == 0 {
        return Err(CaError::InvalidArgument("budget must be positive".into()));
    }
    let base = rule.canonical();
    let k = rule.alphabet_size();
    let mut seen: HashMap<TableRule, u32> = HashMap::new();
    let mut power = TableRule::identity(k)?;
    for n in 0..=budget {
        if let Some(&q) = seen.get(&power) {
            return Ok(EquicontinuityOutcome::Certified(EquicontinuityCert {
                q,
                p: n - q,
            }));
        }
        if n == budget {
            break;
        }
        let width = power.width() + base.width().saturating_sub(1);
        let entries = (k as f64).powi(width as i32);
        let radius = (-(power.lo() + base.lo())).max(power.hi() + base.hi());
        if entries > MAX_POWER_ENTRIES as f64 || radius > MAX_POWER_RADIUS as i64 {
            return Ok(EquicontinuityOutcome::Unknown {
                examined: n,
                reason: format!("power {} exceeds the table cap", n + 1),
            });
        }
        let next = base.compose(&power)?.canonical();
        seen.insert(std::mem::replace(&mut power, next), n);
    }
    Ok(EquicontinuityOutcome::Unknown {
        examined: budget,
        reason: format!("no repeat with q + p <= {budget}"),
    })
}

/// Componentwise product `(F × G)(x, y) = (F(x), G(y))` over the alphabet
/// `A × B`, letter `(a, b)` encoded as `a · |B| + b`.
pub fn product_rule(f: &TableRule, g: &TableRule) -> Result<TableRule> {
    let ka = f.alphabet_size();
    let kb = g.alphabet_size();
    let k = ka * kb;
    if k > Letter::MAX as usize + 1 {
        return Err(CaError::ResourceCap(format!(
            "product alphabet of {k} letters does not fit a byte"
        )));
    }
    let windows: Vec<(i64, i64)> = [f, g]
        .iter()
        .filter(|r| r.width() > 0)
        .map(|r| (r.lo(), r.hi()))
        .collect();
    let lo = windows.iter().map(|w| w.0).min().unwrap_or(0);
    let hi = windows.iter().map(|w| w.1).max().unwrap_or(-1);
    let fp = f.padded(lo, hi)?;
    let gp = g.padded(lo, hi)?;
    let width = fp.width();
    let mut first = vec![0 as Letter; width];
    let mut second = vec![0 as Letter; width];
    TableRule::from_fn(k, lo, width, |n| {
        for (j, &c) in n.iter().enumerate() {
            first[j] = (c as usize / kb) as Letter;
            second[j] = (c as usize % kb) as Letter;
        }
        (fp.eval(&first) as usize * kb + gp.eval(&second) as usize) as Letter
    })
}
