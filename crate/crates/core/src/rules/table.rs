use std::fmt;

use crate::error::{CaError, Result};
use crate::Letter;

/// Hard cap on the number of entries a single lookup table may hold.
pub const MAX_TABLE_ENTRIES: usize = 1 << 24;

/// A local rule given as an explicit lookup table.
///
/// The rule reads the window of cells `[lo, lo + width)` relative to the
/// updated cell: `F(x)_i = f(x_{i+lo}, ..., x_{i+lo+width-1})`. Symmetric
/// rules of radius `r` use `lo = -r`, `width = 2r + 1`. Canonical forms may
/// carry an asymmetric window (one-sided rules) or an empty window
/// (constant rules).
///
/// Table entries are indexed by the neighborhood read as a big-endian
/// base-`|A|` number, leftmost cell most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableRule {
    alphabet: usize,
    lo: i64,
    width: usize,
    table: Vec<Letter>,
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&n| n <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| {
                CaError::ResourceCap(format!(
                    "table over {base} letters with {exp} cells exceeds {MAX_TABLE_ENTRIES} entries"
                ))
            })?;
    }
    Ok(acc)
}

impl TableRule {
    /// Symmetric rule of the given radius.
    pub fn new(alphabet: usize, radius: u32, table: Vec<Letter>) -> Result<Self> {
        Self::with_window(alphabet, -(radius as i64), 2 * radius as usize + 1, table)
    }

    /// Rule reading the window `[lo, lo + width)`.
    pub fn with_window(alphabet: usize, lo: i64, width: usize, table: Vec<Letter>) -> Result<Self> {
        if alphabet < 2 {
            return Err(CaError::AlphabetTooSmall(alphabet));
        }
        if alphabet > Letter::MAX as usize + 1 {
            return Err(CaError::ResourceCap(format!(
                "alphabet of {alphabet} letters does not fit a byte"
            )));
        }
        let entries = checked_pow(alphabet, width)?;
        if table.len() != entries {
            return Err(CaError::InvalidArgument(format!(
                "table has {} entries, expected {entries}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= alphabet) {
            return Err(CaError::AlphabetMismatch {
                letter: bad as u32,
                alphabet,
            });
        }
        Ok(TableRule {
            alphabet,
            lo: if width == 0 { 0 } else { lo },
            width,
            table,
        })
    }

    /// Builds a table by evaluating `f` on every neighborhood of the window.
    pub fn from_fn<F>(alphabet: usize, lo: i64, width: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[Letter]) -> Letter,
    {
        let entries = checked_pow(alphabet.max(2), width)?;
        let mut digits = vec![0 as Letter; width];
        let mut table = Vec::with_capacity(entries);
        for _ in 0..entries {
            table.push(f(&digits));
            increment(&mut digits, alphabet);
        }
        Self::with_window(alphabet, lo, width, table)
    }

    pub fn identity(alphabet: usize) -> Result<Self> {
        Self::from_fn(alphabet, 0, 1, |n| n[0])
    }

    /// The left shift `σ(x)_i = x_{i+1}`, written as a radius-1 rule.
    pub fn shift(alphabet: usize) -> Result<Self> {
        Self::from_fn(alphabet, -1, 3, |n| n[2])
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    /// Leftmost cell read, relative to the updated cell.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Rightmost cell read; `lo - 1` for constant rules.
    pub fn hi(&self) -> i64 {
        self.lo + self.width as i64 - 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Smallest symmetric radius containing the window.
    pub fn radius(&self) -> u32 {
        if self.width == 0 {
            0
        } else {
            (-self.lo).max(self.hi()).max(0) as u32
        }
    }

    pub fn table(&self) -> &[Letter] {
        &self.table
    }

    pub fn index_of(&self, neighborhood: &[Letter]) -> usize {
        debug_assert_eq!(neighborhood.len(), self.width);
        neighborhood
            .iter()
            .fold(0usize, |acc, &d| acc * self.alphabet + d as usize)
    }

    /// Evaluates the local rule on a neighborhood of exactly `width` letters.
    pub fn eval(&self, neighborhood: &[Letter]) -> Letter {
        self.table[self.index_of(neighborhood)]
    }

    /// Same rule over the wider window `[lo, hi]`, ignoring the added cells.
    pub fn padded(&self, lo: i64, hi: i64) -> Result<TableRule> {
        let width = (hi - lo + 1).max(0) as usize;
        if self.width == 0 {
            let c = self.table[0];
            return TableRule::from_fn(self.alphabet, lo, width, |_| c);
        }
        if lo > self.lo || (self.width > 0 && hi < self.hi()) {
            return Err(CaError::InvalidArgument(format!(
                "window [{lo}, {hi}] does not contain [{}, {}]",
                self.lo,
                self.hi()
            )));
        }
        let skip = (self.lo - lo) as usize;
        TableRule::from_fn(self.alphabet, lo, width, |n| {
            self.eval(&n[skip..skip + self.width])
        })
    }

    /// Whether the output depends on the cell at window index `pos`.
    pub fn is_essential(&self, pos: usize) -> bool {
        let k = self.alphabet;
        let stride = k.pow((self.width - 1 - pos) as u32);
        (0..self.table.len())
            .filter(|idx| (idx / stride) % k == 0)
            .any(|idx| (1..k).any(|d| self.table[idx + d * stride] != self.table[idx]))
    }

    /// Drops window index `pos`, assuming the rule does not depend on it.
    fn drop_position(&self, pos: usize) -> TableRule {
        let k = self.alphabet;
        let new_width = self.width - 1;
        let stride = k.pow((self.width - 1 - pos) as u32);
        let mut table = Vec::with_capacity(self.table.len() / k);
        for idx in 0..self.table.len() {
            if (idx / stride) % k == 0 {
                table.push(self.table[idx]);
            }
        }
        let lo = if pos == 0 { self.lo + 1 } else { self.lo };
        TableRule {
            alphabet: k,
            lo: if new_width == 0 { 0 } else { lo },
            width: new_width,
            table,
        }
    }

    /// Minimal window form: both outermost cells are essential, or the
    /// window is empty (constant rule). Two rules induce the same global
    /// map iff their canonical forms are identical.
    pub fn canonical(&self) -> TableRule {
        let mut rule = self.clone();
        while rule.width > 0 && !rule.is_essential(0) {
            rule = rule.drop_position(0);
        }
        while rule.width > 0 && !rule.is_essential(rule.width - 1) {
            rule = rule.drop_position(rule.width - 1);
        }
        rule
    }

    /// Table of `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &TableRule) -> Result<TableRule> {
        if self.alphabet != inner.alphabet {
            return Err(CaError::InvalidArgument(format!(
                "alphabet mismatch: {} vs {}",
                self.alphabet, inner.alphabet
            )));
        }
        let k = self.alphabet;
        if self.width == 0 {
            return Ok(self.clone());
        }
        if inner.width == 0 {
            let c = inner.table[0];
            let value = self.eval(&vec![c; self.width]);
            return TableRule::with_window(k, 0, 0, vec![value]);
        }
        let width = self.width + inner.width - 1;
        let lo = self.lo + inner.lo;
        let entries = checked_pow(k, width)?;
        let inner_size = inner.table.len();
        let mut table = Vec::with_capacity(entries);
        let strides: Vec<usize> = (0..self.width)
            .map(|j| k.pow((self.width - 1 - j) as u32))
            .collect();
        for idx in 0..entries {
            let mut outer = 0usize;
            for &stride in &strides {
                let sub = (idx / stride) % inner_size;
                outer = outer * k + inner.table[sub] as usize;
            }
            table.push(self.table[outer]);
        }
        TableRule::with_window(k, lo, width, table)
    }

    /// Canonical table of the `n`-th power (`n = 0` is the identity).
    pub fn power(&self, n: u32) -> Result<TableRule> {
        let mut acc = TableRule::identity(self.alphabet)?;
        let base = self.canonical();
        for _ in 0..n {
            acc = base.compose(&acc)?.canonical();
        }
        Ok(acc)
    }

    /// Permutativity in the leftmost and rightmost window cells.
    pub fn permutativity(&self) -> Permutativity {
        if self.width == 0 {
            return Permutativity::default();
        }
        let k = self.alphabet;
        let outer = self.table.len() / k;
        let rightmost = (0..outer).all(|prefix| {
            let mut seen = vec![false; k];
            (0..k).all(|a| !std::mem::replace(&mut seen[self.table[prefix * k + a] as usize], true))
        });
        let leftmost = (0..outer).all(|suffix| {
            let mut seen = vec![false; k];
            (0..k).all(|a| {
                !std::mem::replace(&mut seen[self.table[a * outer + suffix] as usize], true)
            })
        });
        Permutativity {
            leftmost,
            rightmost,
        }
    }
}

/// Result of [`TableRule::permutativity`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Permutativity {
    pub leftmost: bool,
    pub rightmost: bool,
}

/// Odometer increment of a big-endian digit vector.
pub(crate) fn increment(digits: &mut [Letter], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        if (*d as usize) + 1 < base {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

impl fmt::Display for TableRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "table(k={}, window=[{}, {}])",
            self.alphabet,
            self.lo,
            self.hi()
        )
    }
}
