//! Exact application of global rules to finitely described configurations.

use std::collections::HashMap;
use std::hash::Hash;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::configs::{Configuration, CyclicConfig, EpConfig};
use crate::error::{CaError, Result};
use crate::rules::TableRule;
use crate::Letter;

pub const DEFAULT_MAX_STEPS: usize = 100_000;
pub const DEFAULT_MAX_MID: usize = 10_000;

fn check_alphabet<C: Configuration>(rule: &TableRule, x: &C) -> Result<()> {
    let top = x.max_letter();
    if top as usize >= rule.alphabet_size() {
        return Err(CaError::AlphabetMismatch {
            letter: top as u32,
            alphabet: rule.alphabet_size(),
        });
    }
    Ok(())
}

/// `out[j] = f(input[j .. j + width])` for every full window of `input`.
pub(crate) fn apply_windows(rule: &TableRule, input: &[Letter], out: &mut Vec<Letter>) {
    out.clear();
    let w = rule.width();
    let table = rule.table();
    if w == 0 {
        out.resize(input.len() + 1, table[0]);
        return;
    }
    if input.len() < w {
        return;
    }
    let k = rule.alphabet_size();
    let modulus = table.len() / k;
    let mut idx = input[..w - 1]
        .iter()
        .fold(0usize, |acc, &a| acc * k + a as usize);
    out.reserve(input.len() - w + 1);
    for &a in &input[w - 1..] {
        idx = (idx % modulus) * k + a as usize;
        out.push(table[idx]);
    }
}

/// Image of a spatially periodic configuration.
pub fn step_cyclic(rule: &TableRule, x: &CyclicConfig) -> Result<CyclicConfig> {
    check_alphabet(rule, x)?;
    let n = x.period() as i64;
    if rule.width() == 0 {
        return Ok(CyclicConfig::uniform(rule.table()[0]));
    }
    let input = x.window(rule.lo(), n + rule.hi());
    let mut out = Vec::new();
    apply_windows(rule, &input, &mut out);
    CyclicConfig::new(out, 0)
}

/// Image of an eventually periodic configuration, canonicalized.
///
/// Tails map to the images of the periodic tails; the middle widens by the
/// rule's window on each side.
pub fn step_ep(rule: &TableRule, x: &EpConfig) -> Result<EpConfig> {
    check_alphabet(rule, x)?;
    if rule.width() == 0 {
        let c = rule.table()[0];
        return EpConfig::from_parts(vec![c], Vec::new(), vec![c], 0);
    }
    let (lo, hi) = (rule.lo(), rule.hi());
    let pl = x.left().len() as i64;
    let pr = x.right().len() as i64;
    let mid_lo = x.start() - hi;
    let mid_hi = x.end() - lo;
    let input = x.window(mid_lo - pl + lo, mid_hi + pr + hi);
    let mut out = Vec::new();
    apply_windows(rule, &input, &mut out);
    let a = pl as usize;
    let b = (mid_hi - mid_lo + pl) as usize;
    let right = out.split_off(b);
    let mid = out.split_off(a);
    EpConfig::from_parts(out, mid, right, mid_lo)
}

/// Configurations the engine can iterate exactly.
pub trait Evolve: Configuration + Clone + Eq + Hash {
    fn step(&self, rule: &TableRule) -> Result<Self>;

    /// Size of the non-periodic part, used as a growth bound.
    fn mid_len(&self) -> usize;
}

impl Evolve for CyclicConfig {
    fn step(&self, rule: &TableRule) -> Result<Self> {
        step_cyclic(rule, self)
    }

    fn mid_len(&self) -> usize {
        0
    }
}

impl Evolve for EpConfig {
    fn step(&self, rule: &TableRule) -> Result<Self> {
        step_ep(rule, self)
    }

    fn mid_len(&self) -> usize {
        self.mid().len()
    }
}

/// `F^n(x)`.
pub fn iterate<C: Evolve>(rule: &TableRule, x: &C, n: usize) -> Result<C> {
    let mut y = x.clone();
    for _ in 0..n {
        y = y.step(rule)?;
    }
    Ok(y)
}

/// Why a cycle search stopped without closing a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeoutReason {
    Steps,
    MidGrowth,
}

/// Outcome of [`temporal_cycle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CycleResult {
    /// `F^{preperiod + period}(x) = F^{preperiod}(x)`, both minimal.
    Cycle { preperiod: usize, period: usize },
    /// No repeat within the bounds; `steps` images were examined.
    Timeout { steps: usize, reason: TimeoutReason },
}

impl CycleResult {
    /// Temporal period when `x` itself lies on a cycle.
    pub fn period_if_periodic(&self) -> Option<usize> {
        match *self {
            CycleResult::Cycle {
                preperiod: 0,
                period,
            } => Some(period),
            _ => None,
        }
    }
}

/// Finds the eventual cycle of the orbit of `x` by memoizing canonical forms.
pub fn temporal_cycle<C: Evolve>(
    rule: &TableRule,
    x: &C,
    max_steps: usize,
    max_mid: usize,
) -> Result<CycleResult> {
    let mut seen: HashMap<C, usize> = HashMap::new();
    let mut current = x.clone();
    for t in 0..=max_steps {
        if current.mid_len() > max_mid {
            return Ok(CycleResult::Timeout {
                steps: t,
                reason: TimeoutReason::MidGrowth,
            });
        }
        if let Some(&first) = seen.get(&current) {
            return Ok(CycleResult::Cycle {
                preperiod: first,
                period: t - first,
            });
        }
        if t == max_steps {
            break;
        }
        let next = current.step(rule)?;
        seen.insert(current, t);
        current = next;
    }
    Ok(CycleResult::Timeout {
        steps: max_steps,
        reason: TimeoutReason::Steps,
    })
}

/// Least `t ≤ t_max` with `F^t(x) = x`, if any.
pub fn return_time<C: Evolve>(rule: &TableRule, x: &C, t_max: usize) -> Result<Option<usize>> {
    let mut current = x.clone();
    for t in 1..=t_max {
        current = current.step(rule)?;
        if current == *x {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Rows `F^t(x)` sampled on the coordinate window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceTimeTrace {
    pub alphabet: usize,
    pub lo: i64,
    pub hi: i64,
    pub rows: Vec<Vec<Letter>>,
}

impl SpaceTimeTrace {
    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// One row per line, letters as base-36 digits.
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            s.push_str(&crate::configs::word_string(row));
            s.push('\n');
        }
        s
    }

    /// Binary P5 graymap, one pixel per cell, value scaled by `255/(|A|-1)`.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width(), self.rows.len())?;
        let scale = 255 / (self.alphabet.max(2) - 1);
        let pixels: Vec<u8> = self
            .rows
            .iter()
            .flatten()
            .map(|&a| (a as usize * scale).min(255) as u8)
            .collect();
        out.write_all(&pixels)
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_pgm(&mut buf)
            .expect("writing to a Vec cannot fail");
        buf
    }
}

/// Space-time diagram of `steps` iterations on the window `[lo, hi]`.
pub fn space_time<C: Evolve>(
    rule: &TableRule,
    x: &C,
    steps: usize,
    lo: i64,
    hi: i64,
) -> Result<SpaceTimeTrace> {
    if lo > hi {
        return Err(CaError::InvalidArgument(format!(
            "empty window [{lo}, {hi}]"
        )));
    }
    let mut rows = Vec::with_capacity(steps + 1);
    let mut current = x.clone();
    rows.push(current.window(lo, hi + 1));
    for _ in 0..steps {
        current = current.step(rule)?;
        rows.push(current.window(lo, hi + 1));
    }
    Ok(SpaceTimeTrace {
        alphabet: rule.alphabet_size(),
        lo,
        hi,
        rows,
    })
}
