//! Finitely described configurations of `A^Z`.
//!
//! [`CyclicConfig`] holds spatially periodic configurations `^∞u^∞`;
//! [`EpConfig`] holds eventually periodic ones `^∞u · v · w^∞`. Both are
//! kept in a canonical form at all times, so structural equality is
//! equality of the denoted biinfinite sequences.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{CaError, Result};
use crate::Letter;

/// Read access to a biinfinite configuration.
pub trait Configuration {
    /// Letter at coordinate `i`.
    fn at(&self, i: i64) -> Letter;

    /// The same configuration as an eventually periodic one.
    fn to_ep(&self) -> EpConfig;

    /// Letters on `[lo, hi)`.
    fn window(&self, lo: i64, hi: i64) -> Vec<Letter> {
        (lo..hi).map(|i| self.at(i)).collect()
    }

    /// Largest letter occurring anywhere.
    fn max_letter(&self) -> Letter;
}

fn primitive_root_len(word: &[Letter]) -> usize {
    let n = word.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| word[i] == word[i - p]))
        .unwrap_or(n)
}

fn least_rotation(word: &[Letter]) -> usize {
    let n = word.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|j| word[(a + j) % n])
                .cmp((0..n).map(|j| word[(b + j) % n]))
        })
        .unwrap_or(0)
}

/// Spatially periodic configuration: `x_i = word[(i + phase) mod |word|]`.
///
/// Canonical form: `word` is the lexicographically least rotation of the
/// primitive root and `phase < |word|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicConfig {
    word: Vec<Letter>,
    phase: usize,
}

impl CyclicConfig {
    pub fn new(word: Vec<Letter>, phase: i64) -> Result<Self> {
        if word.is_empty() {
            return Err(CaError::InvalidArgument("empty cyclic word".into()));
        }
        let p = primitive_root_len(&word);
        let root = &word[..p];
        let s = least_rotation(root);
        let rotated: Vec<Letter> = (0..p).map(|j| root[(j + s) % p]).collect();
        let phase = (phase - s as i64).rem_euclid(p as i64) as usize;
        Ok(CyclicConfig {
            word: rotated,
            phase,
        })
    }

    /// Uniform configuration `^∞a^∞`.
    pub fn uniform(a: Letter) -> Self {
        CyclicConfig {
            word: vec![a],
            phase: 0,
        }
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    /// Least spatial period.
    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// `σ^n(x)`.
    pub fn shift(&self, n: i64) -> Self {
        let p = self.word.len() as i64;
        CyclicConfig {
            word: self.word.clone(),
            phase: (self.phase as i64 + n).rem_euclid(p) as usize,
        }
    }

    /// Letterwise combination of several periodic configurations.
    pub fn zip<F>(configs: &[&CyclicConfig], mut f: F) -> Result<CyclicConfig>
    where
        F: FnMut(&[Letter]) -> Letter,
    {
        let period = configs.iter().fold(1usize, |acc, c| acc.lcm(&c.period()));
        let mut column = vec![0; configs.len()];
        let word = (0..period as i64)
            .map(|i| {
                for (slot, c) in column.iter_mut().zip(configs) {
                    *slot = c.at(i);
                }
                f(&column)
            })
            .collect();
        CyclicConfig::new(word, 0)
    }
}

impl Configuration for CyclicConfig {
    fn at(&self, i: i64) -> Letter {
        let p = self.word.len() as i64;
        self.word[(i + self.phase as i64).rem_euclid(p) as usize]
    }

    fn to_ep(&self) -> EpConfig {
        let p = self.word.len() as i64;
        EpConfig::from_parts(self.window(-p, 0), Vec::new(), self.window(0, p), 0)
            .expect("nonempty tails")
    }

    fn max_letter(&self) -> Letter {
        self.word.iter().copied().max().unwrap_or(0)
    }
}

/// Eventually periodic configuration `^∞u · v · w^∞`.
///
/// The middle word `v` occupies `[start, start + |v|)`, the last letter of
/// `u` sits at `start - 1` and the first letter of `w` at `start + |v|`.
///
/// Canonical form: tails are primitive; `v` is the shortest middle word,
/// `start` is the first coordinate deviating from the left tail; spatially
/// periodic configurations have empty `v`, `start = 0` and `u = w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpConfig {
    left: Vec<Letter>,
    mid: Vec<Letter>,
    right: Vec<Letter>,
    start: i64,
}

impl EpConfig {
    /// Canonicalizes arbitrary parts; both tails must be nonempty.
    pub fn from_parts(
        left: Vec<Letter>,
        mid: Vec<Letter>,
        right: Vec<Letter>,
        start: i64,
    ) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(CaError::InvalidArgument(
                "eventually periodic tails must be nonempty".into(),
            ));
        }
        Ok(canonicalize(left, mid, right, start))
    }

    /// `^∞a · v · b^∞` with single-letter tails.
    pub fn defect(background: Letter, mid: Vec<Letter>, start: i64) -> Self {
        canonicalize(vec![background], mid, vec![background], start)
    }

    pub fn left(&self) -> &[Letter] {
        &self.left
    }

    pub fn mid(&self) -> &[Letter] {
        &self.mid
    }

    pub fn right(&self) -> &[Letter] {
        &self.right
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last middle coordinate.
    pub fn end(&self) -> i64 {
        self.start + self.mid.len() as i64
    }

    /// `σ^n(x)`.
    pub fn shift(&self, n: i64) -> Self {
        if n == 0 {
            return self.clone();
        }
        canonicalize(
            self.left.clone(),
            self.mid.clone(),
            self.right.clone(),
            self.start - n,
        )
    }

    /// True iff the configuration is fixed by some power of the shift.
    pub fn is_spatially_periodic(&self) -> bool {
        self.mid.is_empty() && self.left == self.right
    }

    /// Letterwise combination of several eventually periodic configurations.
    pub fn zip<F>(configs: &[&EpConfig], mut f: F) -> Result<EpConfig>
    where
        F: FnMut(&[Letter]) -> Letter,
    {
        let first = configs
            .first()
            .ok_or_else(|| CaError::InvalidArgument("nothing to combine".into()))?;
        let lo = configs.iter().map(|c| c.start).min().unwrap_or(first.start);
        let hi = configs.iter().map(|c| c.end()).max().unwrap_or(first.end());
        let pl = configs.iter().fold(1usize, |acc, c| acc.lcm(&c.left.len())) as i64;
        let pr = configs
            .iter()
            .fold(1usize, |acc, c| acc.lcm(&c.right.len())) as i64;
        let mut column = vec![0; configs.len()];
        let mut tabulate = |a: i64, b: i64| -> Vec<Letter> {
            (a..b)
                .map(|i| {
                    for (slot, c) in column.iter_mut().zip(configs) {
                        *slot = c.at(i);
                    }
                    f(&column)
                })
                .collect()
        };
        let left = tabulate(lo - pl, lo);
        let mid = tabulate(lo, hi);
        let right = tabulate(hi, hi + pr);
        EpConfig::from_parts(left, mid, right, lo)
    }
}

fn canonicalize(left: Vec<Letter>, mid: Vec<Letter>, right: Vec<Letter>, start: i64) -> EpConfig {
    let pl = primitive_root_len(&left);
    let pr = primitive_root_len(&right);
    let left = &left[left.len() - pl..];
    let right = &right[..pr];
    let end = start + mid.len() as i64;
    let x = |i: i64| -> Letter {
        if i < start {
            left[(i - start).rem_euclid(pl as i64) as usize]
        } else if i < end {
            mid[(i - start) as usize]
        } else {
            right[(i - end).rem_euclid(pr as i64) as usize]
        }
    };
    let left_ext = |i: i64| left[(i - start).rem_euclid(pl as i64) as usize];
    let right_ext = |i: i64| right[(i - end).rem_euclid(pr as i64) as usize];
    let horizon = pl.lcm(&pr) as i64;

    let first_dev = (start..end + horizon).find(|&i| x(i) != left_ext(i));
    let Some(a) = first_dev else {
        let p = pl as i64;
        let root: Vec<Letter> = (0..p).map(left_ext).collect();
        return EpConfig {
            left: root.clone(),
            mid: Vec::new(),
            right: root,
            start: 0,
        };
    };
    let b = (start - horizon..end)
        .rev()
        .find(|&i| x(i) != right_ext(i))
        .expect("a configuration agreeing with both tails is spatially periodic");
    let tab = |lo: i64, hi: i64| -> Vec<Letter> { (lo..hi).map(x).collect() };
    if a <= b {
        EpConfig {
            left: tab(a - pl as i64, a),
            mid: tab(a, b + 1),
            right: tab(b + 1, b + 1 + pr as i64),
            start: a,
        }
    } else {
        EpConfig {
            left: tab(a - pl as i64, a),
            mid: Vec::new(),
            right: tab(a, a + pr as i64),
            start: a,
        }
    }
}

/// Canonical form of `^∞left · mid · right^∞` placed at `start`.
pub fn canonicalize_ep(
    left: Vec<Letter>,
    mid: Vec<Letter>,
    right: Vec<Letter>,
    start: i64,
) -> Result<EpConfig> {
    EpConfig::from_parts(left, mid, right, start)
}

impl Configuration for EpConfig {
    fn at(&self, i: i64) -> Letter {
        if i < self.start {
            self.left[(i - self.start).rem_euclid(self.left.len() as i64) as usize]
        } else if i < self.end() {
            self.mid[(i - self.start) as usize]
        } else {
            self.right[(i - self.end()).rem_euclid(self.right.len() as i64) as usize]
        }
    }

    fn to_ep(&self) -> EpConfig {
        self.clone()
    }

    fn max_letter(&self) -> Letter {
        self.left
            .iter()
            .chain(&self.mid)
            .chain(&self.right)
            .copied()
            .max()
            .unwrap_or(0)
    }
}

/// Equality of the denoted biinfinite configurations, across classes.
pub fn same_configuration<X: Configuration, Y: Configuration>(x: &X, y: &Y) -> bool {
    x.to_ep() == y.to_ep()
}

/// Value of the Cantor distance `d(x, y) = 2^{-n}`, `n` the least `i ≥ 0`
/// with `x_i ≠ y_i` or `x_{-i} ≠ y_{-i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    /// The configurations are equal.
    Zero,
    /// `d = 2^{-exponent}`.
    Exact { exponent: u32 },
    /// Distinct, but agreeing on `(-depth, depth)`: `0 < d < 2^{-depth+1}`.
    Below { depth: u32 },
}

impl Distance {
    /// First-disagreement index, `None` for equal configurations.
    pub fn exponent(&self) -> Option<u32> {
        match *self {
            Distance::Zero => None,
            Distance::Exact { exponent } => Some(exponent),
            Distance::Below { depth } => Some(depth),
        }
    }

    /// Float value, upper bound for `Below`.
    pub fn as_f64(&self) -> f64 {
        match self.exponent() {
            None => 0.0,
            Some(n) => 0.5f64.powi(n as i32),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Distance::Zero => f.write_str("0"),
            Distance::Exact { exponent: 0 } => f.write_str("1"),
            Distance::Exact { exponent } => write!(f, "1/2^{exponent}"),
            Distance::Below { depth } => write!(f, "<1/2^{}", depth.saturating_sub(1)),
        }
    }
}

/// Cantor distance examined on coordinates `|i| < depth`.
pub fn metric_distance<X: Configuration, Y: Configuration>(x: &X, y: &Y, depth: u32) -> Distance {
    for n in 0..depth {
        let i = n as i64;
        if x.at(i) != y.at(i) || x.at(-i) != y.at(-i) {
            return Distance::Exact { exponent: n };
        }
    }
    if same_configuration(x, y) {
        Distance::Zero
    } else {
        Distance::Below { depth }
    }
}

/// Pair of configurations, a point of a product system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductConfig<C> {
    pub first: C,
    pub second: C,
}

impl<C: Configuration> ProductConfig<C> {
    /// `d_∞` on the product: the larger of the two component distances.
    pub fn distance(&self, other: &ProductConfig<C>, depth: u32) -> Distance {
        let a = metric_distance(&self.first, &other.first, depth);
        let b = metric_distance(&self.second, &other.second, depth);
        match (a.exponent(), b.exponent()) {
            (None, None) => Distance::Zero,
            (Some(_), None) => a,
            (None, Some(_)) => b,
            (Some(p), Some(q)) => {
                if p <= q {
                    a
                } else {
                    b
                }
            }
        }
    }
}

impl ProductConfig<EpConfig> {
    /// Encodes the pair over the product alphabet as `a · |B| + b`.
    pub fn encode(&self, second_alphabet: usize) -> Result<EpConfig> {
        let k = second_alphabet as u32;
        EpConfig::zip(&[&self.first, &self.second], |c| {
            (c[0] as u32 * k + c[1] as u32) as Letter
        })
    }

    pub fn decode(x: &EpConfig, second_alphabet: usize) -> Result<Self> {
        let k = second_alphabet as u32;
        Ok(ProductConfig {
            first: EpConfig::zip(&[x], |c| (c[0] as u32 / k) as Letter)?,
            second: EpConfig::zip(&[x], |c| (c[0] as u32 % k) as Letter)?,
        })
    }
}

fn letter_char(a: Letter) -> char {
    std::char::from_digit(a as u32, 36).unwrap_or('?')
}

fn parse_word(s: &str, offset: usize) -> Result<Vec<Letter>> {
    s.char_indices()
        .map(|(j, c)| {
            c.to_digit(36)
                .map(|d| d as Letter)
                .ok_or_else(|| CaError::syntax(offset + j, format!("invalid letter `{c}`")))
        })
        .collect()
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[Letter]) -> fmt::Result {
    word.iter()
        .try_for_each(|&a| write!(f, "{}", letter_char(a)))
}

/// Renders letters as base-36 digits.
pub fn word_string(word: &[Letter]) -> String {
    word.iter().map(|&a| letter_char(a)).collect()
}

fn split_anchor(text: &str, offset: usize) -> Result<(&str, i64)> {
    match text.split_once('@') {
        None => Ok((text, 0)),
        Some((body, n)) => {
            let at = offset + body.len() + 1;
            let n = n
                .parse()
                .map_err(|_| CaError::syntax(at, format!("invalid coordinate `{n}`")))?;
            Ok((body, n))
        }
    }
}

impl fmt::Display for CyclicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("cyclic:")?;
        write_word(f, &self.word)?;
        if self.phase != 0 {
            write!(f, "@{}", self.phase)?;
        }
        Ok(())
    }
}

impl fmt::Display for EpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ep:")?;
        write_word(f, &self.left)?;
        f.write_str("|")?;
        write_word(f, &self.mid)?;
        f.write_str("|")?;
        write_word(f, &self.right)?;
        if self.start != 0 {
            write!(f, "@{}", self.start)?;
        }
        Ok(())
    }
}

impl FromStr for CyclicConfig {
    type Err = CaError;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("cyclic:")
            .ok_or_else(|| CaError::syntax(0, "expected `cyclic:`"))?;
        let (word, phase) = split_anchor(body, 7)?;
        if word.is_empty() {
            return Err(CaError::syntax(7, "empty cyclic word"));
        }
        CyclicConfig::new(parse_word(word, 7)?, phase)
    }
}

impl FromStr for EpConfig {
    type Err = CaError;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("ep:")
            .ok_or_else(|| CaError::syntax(0, "expected `ep:`"))?;
        let (parts, start) = split_anchor(body, 3)?;
        let pieces: Vec<&str> = parts.split('|').collect();
        let [l, m, r] = pieces[..] else {
            return Err(CaError::syntax(3, "expected `<left>|<mid>|<right>`"));
        };
        let m_at = 3 + l.len() + 1;
        let r_at = m_at + m.len() + 1;
        if l.is_empty() {
            return Err(CaError::syntax(3, "empty left tail"));
        }
        if r.is_empty() {
            return Err(CaError::syntax(r_at, "empty right tail"));
        }
        EpConfig::from_parts(
            parse_word(l, 3)?,
            parse_word(m, m_at)?,
            parse_word(r, r_at)?,
            start,
        )
    }
}

/// A configuration literal of either class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Config {
    Cyclic(CyclicConfig),
    Ep(EpConfig),
}

impl FromStr for Config {
    type Err = CaError;

    fn from_str(s: &str) -> Result<Self> {
        if s.starts_with("cyclic:") {
            s.parse().map(Config::Cyclic)
        } else if s.starts_with("ep:") {
            s.parse().map(Config::Ep)
        } else {
            Err(CaError::syntax(0, "expected `cyclic:` or `ep:`"))
        }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Config::Cyclic(c) => c.fmt(f),
            Config::Ep(e) => e.fmt(f),
        }
    }
}

impl Configuration for Config {
    fn at(&self, i: i64) -> Letter {
        match self {
            Config::Cyclic(c) => c.at(i),
            Config::Ep(e) => e.at(i),
        }
    }

    fn to_ep(&self) -> EpConfig {
        match self {
            Config::Cyclic(c) => c.to_ep(),
            Config::Ep(e) => e.clone(),
        }
    }

    fn max_letter(&self) -> Letter {
        match self {
            Config::Cyclic(c) => c.max_letter(),
            Config::Ep(e) => e.max_letter(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(s: &str) -> EpConfig {
        s.parse().unwrap()
    }

    fn cyc(s: &str) -> CyclicConfig {
        s.parse().unwrap()
    }

    #[test]
    fn cyclic_shift() {
        let x = CyclicConfig::new(vec![1, 0], 0).unwrap();
        assert_eq!(x.shift(1), CyclicConfig::new(vec![1, 0], 1).unwrap());
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(1).at(0), 0);
    }

    #[test]
    fn ep_shift_moves_start() {
        let x = ep("ep:0|1|0");
        assert_eq!(x.start(), 0);
        let y = x.shift(3);
        assert_eq!(y.start(), -3);
        assert_eq!(
            (y.left(), y.mid(), y.right()),
            (&[0][..], &[1][..], &[0][..])
        );
    }

    #[test]
    fn absorbable_middle_vanishes() {
        let x = ep("ep:01|01|01");
        assert!(x.mid().is_empty());
        assert!(x.is_spatially_periodic());
        assert!(same_configuration(&x, &cyc("cyclic:01")));
    }

    #[test]
    fn canonical_defect_unchanged() {
        let x = EpConfig::from_parts(vec![0], vec![1], vec![0], 0).unwrap();
        assert_eq!(
            (x.left(), x.mid(), x.right(), x.start()),
            (&[0][..], &[1][..], &[0][..], 0)
        );
    }

    #[test]
    fn leading_letter_absorbed_into_left_tail() {
        let x = EpConfig::from_parts(vec![0, 0], vec![0, 1], vec![0], 0).unwrap();
        assert_eq!(x.left(), &[0]);
        assert_eq!(x.mid(), &[1]);
        assert_eq!(x.start(), 1);
    }

    #[test]
    fn distinct_tails_not_periodic() {
        let x = ep("ep:0||01");
        assert!(!x.is_spatially_periodic());
        assert!(!ep("ep:0|1|0").is_spatially_periodic());
        // boundary pushed right past the shared leading 0
        assert_eq!((x.start(), x.right()), (1, &[1, 0][..]));
    }

    #[test]
    fn cyclic_equality() {
        assert_eq!(cyc("cyclic:0101"), cyc("cyclic:01"));
        assert_ne!(cyc("cyclic:01"), cyc("cyclic:01@1"));
        assert!(same_configuration(&ep("ep:0||0"), &cyc("cyclic:0")));
    }

    #[test]
    fn distances() {
        let zero = cyc("cyclic:0");
        assert_eq!(
            metric_distance(&zero, &ep("ep:0|1|0"), 8),
            Distance::Exact { exponent: 0 }
        );
        assert_eq!(
            metric_distance(&zero, &ep("ep:0|1|0@-2"), 8),
            Distance::Exact { exponent: 2 }
        );
        assert_eq!(
            metric_distance(&cyc("cyclic:01"), &cyc("cyclic:10@1"), 8),
            Distance::Zero
        );
        assert_eq!(
            metric_distance(&zero, &ep("ep:0|1|0@20"), 8),
            Distance::Below { depth: 8 }
        );
        assert_eq!(Distance::Exact { exponent: 2 }.as_f64(), 0.25);
    }

    #[test]
    fn literal_round_trip() {
        for s in ["ep:0|212|0@-1", "cyclic:011@2", "ep:0||1", "cyclic:0"] {
            let c: Config = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
    }

    #[test]
    fn literal_errors() {
        assert!(matches!(
            "ep:0|1".parse::<EpConfig>(),
            Err(CaError::Syntax { .. })
        ));
        assert!(matches!(
            "ep:0|1|".parse::<EpConfig>(),
            Err(CaError::Syntax { position: 7, .. })
        ));
        assert!(matches!(
            "cyclic:0#1".parse::<CyclicConfig>(),
            Err(CaError::Syntax { position: 8, .. })
        ));
        assert!("cyclic:01@x".parse::<CyclicConfig>().is_err());
    }

    #[test]
    fn product_encoding() {
        let p = ProductConfig {
            first: ep("ep:0|1|0"),
            second: cyc("cyclic:110").to_ep(),
        };
        let enc = p.encode(2).unwrap();
        assert_eq!(enc.at(0), 2 + cyc("cyclic:110").at(0));
        assert_eq!(ProductConfig::decode(&enc, 2).unwrap(), p);
    }
}
