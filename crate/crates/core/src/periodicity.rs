//! Periodic orbits: jointly periodic census, blocking words, witnesses of
//! strictly temporally periodic points, and scans for such points.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configs::{Configuration, CyclicConfig, EpConfig, ProductConfig};
use crate::engine::{self, apply_windows, iterate, return_time, step_ep, temporal_cycle};
use crate::error::{CaError, Result};
use crate::oracles::{self, product_rule, EquicontinuityCert};
use crate::rules::table::{checked_pow, increment};
use crate::rules::TableRule;
use crate::Letter;

/// Default cap on reported scan violations.
pub const DEFAULT_VIOLATION_CAP: usize = 100;

/// Default scan bounds: tail period, middle length, return time.
pub const DEFAULT_SCAN_TAIL_MAX: usize = 2;
pub const DEFAULT_SCAN_MID_MAX: usize = 3;
pub const DEFAULT_SCAN_T_MAX: usize = 32;

/// A jointly periodic point and its least temporal period.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JpPoint {
    #[serde(with = "literal")]
    pub config: CyclicConfig,
    pub period: usize,
}

/// All configurations of spatial period dividing `length` that lie on a
/// temporal cycle of length at most the requested bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JpCensus {
    pub length: usize,
    pub points: Vec<JpPoint>,
}

impl JpCensus {
    pub fn period_of(&self, x: &CyclicConfig) -> Option<usize> {
        self.points
            .iter()
            .find(|p| &p.config == x)
            .map(|p| p.period)
    }
}

fn word_of(mut index: usize, k: usize, n: usize) -> Vec<Letter> {
    let mut w = vec![0; n];
    for slot in w.iter_mut().rev() {
        *slot = (index % k) as Letter;
        index /= k;
    }
    w
}

/// Exhaustive census of the finite map induced on words of length `n`.
pub fn jointly_periodic_points(rule: &TableRule, n: usize, t_max: usize) -> Result<JpCensus> {
    if n == 0 {
        return Err(CaError::InvalidArgument("length must be positive".into()));
    }
    let k = rule.alphabet_size();
    let count = checked_pow(k, n)?;
    let (lo, hi) = (rule.lo(), rule.hi());
    let mut image = vec![0usize; count];
    let mut buf = Vec::new();
    let mut out = Vec::new();
    for (idx, slot) in image.iter_mut().enumerate() {
        let w = word_of(idx, k, n);
        buf.clear();
        buf.extend((lo..n as i64 + hi.max(lo - 1)).map(|i| w[i.rem_euclid(n as i64) as usize]));
        if rule.width() == 0 {
            out.clear();
            out.resize(n, rule.table()[0]);
        } else {
            apply_windows(rule, &buf, &mut out);
        }
        *slot = out.iter().fold(0usize, |acc, &a| acc * k + a as usize);
    }

    // Cycle members of a functional graph: walk each unvisited node until a
    // node of the current walk repeats.
    const UNSEEN: u32 = u32::MAX;
    let mut walk_id = vec![UNSEEN; count];
    let mut on_cycle = vec![0usize; count];
    for startnode in 0..count {
        if walk_id[startnode] != UNSEEN {
            continue;
        }
        let mut v = startnode;
        while walk_id[v] == UNSEEN {
            walk_id[v] = startnode as u32;
            v = image[v];
        }
        if walk_id[v] == startnode as u32 && on_cycle[v] == 0 {
            let mut len = 1;
            let mut u = image[v];
            while u != v {
                u = image[u];
                len += 1;
            }
            let mut u = v;
            loop {
                on_cycle[u] = len;
                u = image[u];
                if u == v {
                    break;
                }
            }
        }
    }

    let mut points = BTreeMap::new();
    for (idx, &period) in on_cycle.iter().enumerate() {
        if period > 0 && period <= t_max {
            points.insert(CyclicConfig::new(word_of(idx, k, n), 0)?, period);
        }
    }
    Ok(JpCensus {
        length: n,
        points: points
            .into_iter()
            .map(|(config, period)| JpPoint { config, period })
            .collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockingStatus {
    /// Verified on finitely many backgrounds for finitely many steps.
    BoundedVerified,
    /// Proven for all configurations and all times.
    Exact,
}

/// A word `u` such that in every configuration with `u` at `[0, |u|)` the
/// cells `[offset, offset + width)` follow the same orbit for all times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingCert {
    #[serde(with = "word")]
    pub word: Vec<Letter>,
    pub offset: usize,
    pub width: usize,
    pub verified_background_period: usize,
    pub verified_steps: usize,
    pub status: BlockingStatus,
}

/// Bounds for [`blocking_word_search`] and witness construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub k_max: usize,
    pub bg_period: usize,
    pub steps: usize,
    pub t_max: usize,
    pub equicontinuity_budget: u32,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch {
            k_max: 6,
            bg_period: 2,
            steps: 16,
            t_max: 64,
            equicontinuity_budget: 64,
        }
    }
}

fn all_words(k: usize, max_len: usize) -> Vec<Vec<Letter>> {
    let mut words = Vec::new();
    for len in 1..=max_len {
        let mut w = vec![0 as Letter; len];
        loop {
            words.push(w.clone());
            if !increment(&mut w, k) {
                break;
            }
        }
    }
    words
}

/// Every cell of the column depends only on letters of the word, for
/// every power the certificate leaves distinct.
fn column_determined(powers: &[TableRule], len: usize, offset: usize, width: usize) -> bool {
    powers.iter().all(|power| {
        power.width() == 0
            || (offset as i64 + power.lo() >= 0
                && (offset + width - 1) as i64 + power.hi() < len as i64)
    })
}

fn column_constant_on_backgrounds(
    rule: &TableRule,
    word: &[Letter],
    offset: usize,
    width: usize,
    backgrounds: &[Vec<Letter>],
    steps: usize,
) -> Result<bool> {
    let mut reference: Option<Vec<Vec<Letter>>> = None;
    for a in backgrounds {
        for b in backgrounds {
            let mut x = EpConfig::from_parts(a.clone(), word.to_vec(), b.clone(), 0)?;
            let lo = offset as i64;
            let hi = lo + width as i64;
            let mut column = Vec::with_capacity(steps + 1);
            column.push(x.window(lo, hi));
            for _ in 0..steps {
                x = step_ep(rule, &x)?;
                column.push(x.window(lo, hi));
            }
            match &reference {
                None => reference = Some(column),
                Some(r) if *r != column => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(true)
}

/// First word (by length, then lexicographically, then by offset) whose
/// radius-wide column is independent of the surrounding letters.
///
/// With an equicontinuity certificate `F^q = F^{q+p}` the search is exact:
/// the column is decided by the finitely many distinct powers. Without
/// one, candidates are checked on backgrounds of period `≤ bg_period` for
/// `steps` steps only.
pub fn blocking_word_search(
    rule: &TableRule,
    k_max: usize,
    bg_period: usize,
    steps: usize,
    equicontinuity: Option<EquicontinuityCert>,
) -> Result<Option<BlockingCert>> {
    let k = rule.alphabet_size();
    let width = (rule.radius() as usize).max(1);
    let powers = match equicontinuity {
        Some(cert) => Some(
            (0..cert.q + cert.p)
                .map(|n| rule.power(n))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let backgrounds = all_words(k, bg_period.max(1));
    for len in width..=k_max {
        let mut u = vec![0 as Letter; len];
        loop {
            for offset in 0..=len - width {
                let exact = powers
                    .as_ref()
                    .map(|ps| column_determined(ps, len, offset, width));
                if exact == Some(false) {
                    continue;
                }
                if column_constant_on_backgrounds(rule, &u, offset, width, &backgrounds, steps)? {
                    return Ok(Some(BlockingCert {
                        word: u,
                        offset,
                        width,
                        verified_background_period: bg_period.max(1),
                        verified_steps: steps,
                        status: if exact == Some(true) {
                            BlockingStatus::Exact
                        } else {
                            BlockingStatus::BoundedVerified
                        },
                    }));
                }
                // an exact pass must survive every finite check
                debug_assert!(exact.is_none());
            }
            if !increment(&mut u, k) {
                break;
            }
        }
    }
    Ok(None)
}

/// A configuration that is temporally but not spatially periodic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StpWitness {
    #[serde(with = "literal")]
    pub config: EpConfig,
    pub period: usize,
}

impl StpWitness {
    /// Re-checks `F^t(y) = y`, minimality of `t`, and spatial aperiodicity.
    pub fn verify(&self, rule: &TableRule) -> Result<bool> {
        if self.config.is_spatially_periodic() || self.period == 0 {
            return Ok(false);
        }
        let back = iterate(rule, &self.config, self.period)?;
        Ok(back == self.config
            && return_time(rule, &self.config, self.period)? == Some(self.period))
    }
}

/// Builds `y = ^∞w · u · w^∞` from a blocking word `w` and checks that
/// `y` returns to itself within `t_max` steps.
pub fn stp_witness(
    rule: &TableRule,
    cert: &BlockingCert,
    u: &[Letter],
    t_max: usize,
) -> Result<Option<StpWitness>> {
    if !oracles::surjectivity_oracle(rule)? {
        return Err(CaError::NotSurjective);
    }
    if u.iter().any(|&a| a as usize >= rule.alphabet_size()) {
        return Err(CaError::InvalidArgument(
            "middle word outside the alphabet".into(),
        ));
    }
    let y = EpConfig::from_parts(cert.word.clone(), u.to_vec(), cert.word.clone(), 0)?;
    if y.is_spatially_periodic() {
        return Err(CaError::DegenerateMiddle);
    }
    let cycle = temporal_cycle(rule, &y, t_max, engine::DEFAULT_MAX_MID)?;
    Ok(cycle
        .period_if_periodic()
        .map(|period| StpWitness { config: y, period }))
}

/// Blocking word search followed by [`stp_witness`] over short middles.
///
/// Returns `None` when the rule is not surjective, has no blocking word
/// within the bounds, or no middle word closes a cycle in time.
pub fn find_stp_witness(rule: &TableRule, search: &WitnessSearch) -> Result<Option<StpWitness>> {
    if !oracles::surjectivity_oracle(rule)? {
        return Ok(None);
    }
    let cert = oracles::equicontinuity_oracle(rule, search.equicontinuity_budget)?.cert();
    let Some(blocking) =
        blocking_word_search(rule, search.k_max, search.bg_period, search.steps, cert)?
    else {
        return Ok(None);
    };
    for u in all_words(rule.alphabet_size(), 2) {
        match stp_witness(rule, &blocking, &u, search.t_max) {
            Ok(Some(w)) => return Ok(Some(w)),
            Ok(None) | Err(CaError::DegenerateMiddle) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// A scan hit: temporally periodic yet not spatially periodic.
pub type ScanViolation = StpWitness;

/// Outcome of [`stp_empty_scan`] together with the bounds it ran at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub tail_period_max: usize,
    pub mid_len_max: usize,
    pub t_max: usize,
    pub examined: usize,
    pub violations: Vec<ScanViolation>,
    pub truncated: bool,
}

fn primitive_words(k: usize, max_len: usize) -> Vec<Vec<Letter>> {
    all_words(k, max_len)
        .into_iter()
        .filter(|w| {
            let n = w.len();
            (1..n).all(|p| n % p != 0 || (p..n).any(|i| w[i] != w[i - p]))
        })
        .collect()
}

/// Uncanonicalized `^∞left · mid · right^∞`, stepped in place. Tail
/// lengths never change, so the middle only grows.
struct Orbit {
    left: Vec<Letter>,
    mid: Vec<Letter>,
    right: Vec<Letter>,
    start: i64,
    input: Vec<Letter>,
    out: Vec<Letter>,
}

impl Orbit {
    fn new(x: &EpConfig) -> Self {
        Orbit {
            left: x.left().to_vec(),
            mid: x.mid().to_vec(),
            right: x.right().to_vec(),
            start: x.start(),
            input: Vec::new(),
            out: Vec::new(),
        }
    }

    fn end(&self) -> i64 {
        self.start + self.mid.len() as i64
    }

    fn at(&self, i: i64) -> Letter {
        if i < self.start {
            self.left[(i - self.start).rem_euclid(self.left.len() as i64) as usize]
        } else if i < self.end() {
            self.mid[(i - self.start) as usize]
        } else {
            self.right[(i - self.end()).rem_euclid(self.right.len() as i64) as usize]
        }
    }

    fn step(&mut self, rule: &TableRule) {
        if rule.width() == 0 {
            let c = rule.table()[0];
            self.left.fill(c);
            self.mid.fill(c);
            self.right.fill(c);
            return;
        }
        let (pl, pr) = (self.left.len(), self.right.len());
        let mid_lo = self.start - rule.hi();
        let mid_hi = self.end() - rule.lo();
        let mut input = std::mem::take(&mut self.input);
        input.clear();
        let from = mid_lo - pl as i64 + rule.lo();
        let phase = (from - self.start).rem_euclid(pl as i64) as usize;
        input.extend(
            self.left
                .iter()
                .cycle()
                .skip(phase)
                .take((self.start - from) as usize),
        );
        input.extend_from_slice(&self.mid);
        let to = mid_hi + pr as i64 + rule.hi();
        input.extend(self.right.iter().cycle().take((to - self.end()) as usize));
        apply_windows(rule, &input, &mut self.out);
        self.input = input;
        let mid_len = (mid_hi - mid_lo) as usize;
        self.left.copy_from_slice(&self.out[..pl]);
        self.mid.clear();
        self.mid.extend_from_slice(&self.out[pl..pl + mid_len]);
        self.right.copy_from_slice(&self.out[pl + mid_len..]);
        self.start = mid_lo;
    }

    /// Equality with `x`, valid once both tails have returned: beyond one
    /// tail period past either middle, both sides are the same periodic
    /// sequence.
    fn agrees_with(&self, x: &EpConfig) -> bool {
        let lo = self.start.min(x.start()) - self.left.len() as i64;
        let hi = self.end().max(x.end()) + self.right.len() as i64;
        (lo..hi).all(|i| self.at(i) == x.at(i))
    }
}

/// Searches eventually periodic configurations for strictly temporally
/// periodic points.
///
/// Enumerates canonical `^∞u · v · w^∞` with `v` at coordinate 0,
/// primitive tails of length `≤ tail_period_max` and `|v| ≤ mid_len_max`
/// (shifts add nothing: both periodicity notions are shift invariant).
/// Every configuration returning to itself within `t_max` steps while
/// not being spatially periodic is reported, capped at `cap`.
pub fn stp_empty_scan(
    rule: &TableRule,
    tail_period_max: usize,
    mid_len_max: usize,
    t_max: usize,
    cap: usize,
) -> Result<ScanReport> {
    let k = rule.alphabet_size();
    let tails = primitive_words(k, tail_period_max);

    // A temporally periodic configuration has temporally periodic tails
    // whose periods divide its own.
    let tail_periods: Vec<Option<usize>> = tails
        .iter()
        .map(|w| return_time(rule, &CyclicConfig::new(w.clone(), 0)?, t_max))
        .collect::<Result<_>>()?;
    let mut mids = vec![Vec::new()];
    mids.extend(all_words(k, mid_len_max));

    let pairs: Vec<(usize, usize)> = (0..tails.len())
        .flat_map(|a| (0..tails.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| tail_periods[a].is_some() && tail_periods[b].is_some())
        .collect();

    let per_pair: Vec<(usize, Vec<ScanViolation>)> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<(usize, Vec<ScanViolation>)> {
            let (u, w) = (&tails[a], &tails[b]);
            let step = tail_periods[a].unwrap().lcm(&tail_periods[b].unwrap());
            let mut examined = 0;
            let mut hits = Vec::new();
            for v in &mids {
                let x = EpConfig::from_parts(u.clone(), v.clone(), w.clone(), 0)?;
                if x.left() != &u[..] || x.mid() != &v[..] || x.right() != &w[..] || x.start() != 0
                {
                    continue;
                }
                if x.is_spatially_periodic() {
                    continue;
                }
                examined += 1;
                let mut y = Orbit::new(&x);
                for t in 1..=t_max {
                    y.step(rule);
                    if t % step == 0 && y.agrees_with(&x) {
                        hits.push(StpWitness {
                            config: x,
                            period: t,
                        });
                        break;
                    }
                }
            }
            Ok((examined, hits))
        })
        .collect::<Result<_>>()?;

    let examined = per_pair.iter().map(|(n, _)| n).sum();
    let mut violations: Vec<ScanViolation> =
        per_pair.into_iter().flat_map(|(_, hits)| hits).collect();
    violations.sort();
    let truncated = violations.len() > cap;
    violations.truncate(cap);
    Ok(ScanReport {
        tail_period_max,
        mid_len_max,
        t_max,
        examined,
        violations,
        truncated,
    })
}

/// Bounds for [`product_witness_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductScanBounds {
    pub witness: WitnessSearch,
    /// Largest spatial period of the jointly periodic partner.
    pub jp_len_max: usize,
}

impl Default for ProductScanBounds {
    fn default() -> Self {
        ProductScanBounds {
            witness: WitnessSearch::default(),
            jp_len_max: 3,
        }
    }
}

/// A strictly temporally periodic point of `F × G`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductWitness {
    #[serde(with = "literal")]
    pub first: EpConfig,
    #[serde(with = "literal")]
    pub second: EpConfig,
    /// The pair over the product alphabet, letter `(a, b)` as `a·|B| + b`.
    #[serde(with = "literal")]
    pub encoded: EpConfig,
    pub period: usize,
}

/// Pairs a strictly temporally periodic point of `f` with jointly periodic
/// points of `g`; each pair is re-verified under the product rule.
pub fn product_witness_scan(
    f: &TableRule,
    g: &TableRule,
    bounds: &ProductScanBounds,
) -> Result<Vec<ProductWitness>> {
    let Some(fw) = find_stp_witness(f, &bounds.witness)? else {
        return Ok(Vec::new());
    };
    let product = product_rule(f, g)?;
    let kb = g.alphabet_size();
    let mut partners = BTreeMap::new();
    for n in 1..=bounds.jp_len_max {
        for point in jointly_periodic_points(g, n, bounds.witness.t_max)?.points {
            partners.entry(point.config).or_insert(point.period);
        }
    }
    let mut out = Vec::new();
    for (y, tg) in partners {
        let pair = ProductConfig {
            first: fw.config.clone(),
            second: y.to_ep(),
        };
        let encoded = pair.encode(kb)?;
        let bound = fw.period.lcm(&tg);
        let candidate = StpWitness {
            config: encoded.clone(),
            period: match return_time(&product, &encoded, bound)? {
                Some(t) => t,
                None => continue,
            },
        };
        if candidate.verify(&product)? {
            out.push(ProductWitness {
                first: pair.first,
                second: pair.second,
                encoded,
                period: candidate.period,
            });
        }
    }
    out.sort();
    Ok(out)
}

mod literal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod word {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Letter;

    pub fn serialize<S: Serializer>(value: &[Letter], s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&crate::configs::word_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Letter>, D::Error> {
        let s = String::deserialize(d)?;
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|v| v as Letter)
                    .ok_or_else(|| serde::de::Error::custom(format!("invalid letter `{c}`")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::AdditiveRule;

    fn rule90() -> TableRule {
        TableRule::from_fn(2, -1, 3, |n| n[0] ^ n[2]).unwrap()
    }

    fn m4() -> TableRule {
        AdditiveRule::from_dense(4, &[2, 1, 2])
            .unwrap()
            .to_table()
            .unwrap()
    }

    fn cyc(s: &str) -> CyclicConfig {
        s.parse().unwrap()
    }

    fn ep(s: &str) -> EpConfig {
        s.parse().unwrap()
    }

    #[test]
    fn census_rule90_length3() {
        let census = jointly_periodic_points(&rule90(), 3, 64).unwrap();
        for w in ["cyclic:000", "cyclic:110", "cyclic:101", "cyclic:011"] {
            assert_eq!(census.period_of(&cyc(w)), Some(1), "{w}");
        }
        assert_eq!(census.period_of(&cyc("cyclic:111")), None);
    }

    #[test]
    fn census_identity_and_shift() {
        let census = jointly_periodic_points(&TableRule::identity(2).unwrap(), 2, 8).unwrap();
        assert_eq!(census.points.len(), 4);
        assert!(census.points.iter().all(|p| p.period == 1));

        let census = jointly_periodic_points(&TableRule::shift(2).unwrap(), 2, 8).unwrap();
        assert_eq!(census.points.len(), 4);
        assert_eq!(census.period_of(&cyc("cyclic:0")), Some(1));
        assert_eq!(census.period_of(&cyc("cyclic:1")), Some(1));
        assert_eq!(census.period_of(&cyc("cyclic:01")), Some(2));
        assert_eq!(census.period_of(&cyc("cyclic:10")), Some(2));
    }

    #[test]
    fn blocking_for_equicontinuous_rule() {
        let cert = oracles::equicontinuity_oracle(&m4(), 64).unwrap().cert();
        let b = blocking_word_search(&m4(), 4, 2, 8, cert).unwrap().unwrap();
        assert_eq!(
            (b.word.as_slice(), b.offset, b.width),
            (&[0, 0, 0][..], 1, 1)
        );
        assert_eq!(b.status, BlockingStatus::Exact);
    }

    #[test]
    fn blocking_bounded_without_certificate() {
        let b = blocking_word_search(&m4(), 4, 2, 8, None).unwrap().unwrap();
        assert_eq!((b.word.as_slice(), b.offset), (&[0, 0, 0][..], 1));
        assert_eq!(b.status, BlockingStatus::BoundedVerified);
        assert_eq!(
            blocking_word_search(&rule90(), 4, 2, 8, None).unwrap(),
            None
        );
    }

    #[test]
    fn blocking_identity() {
        let id = TableRule::identity(2).unwrap();
        let cert = oracles::equicontinuity_oracle(&id, 8).unwrap().cert();
        let b = blocking_word_search(&id, 3, 2, 4, cert).unwrap().unwrap();
        assert_eq!((b.word.as_slice(), b.offset, b.width), (&[0][..], 0, 1));
        assert_eq!(b.status, BlockingStatus::Exact);
    }

    #[test]
    fn witnesses() {
        let cert = oracles::equicontinuity_oracle(&m4(), 64).unwrap().cert();
        let b = blocking_word_search(&m4(), 4, 2, 8, cert).unwrap().unwrap();
        let w = stp_witness(&m4(), &b, &[1], 8).unwrap().unwrap();
        assert_eq!((w.config.clone(), w.period), (ep("ep:0|1|0"), 2));
        assert!(w.verify(&m4()).unwrap());
        assert_eq!(
            stp_witness(&m4(), &b, &[0], 8),
            Err(CaError::DegenerateMiddle)
        );

        let id = TableRule::identity(2).unwrap();
        let b = blocking_word_search(&id, 3, 2, 4, None).unwrap().unwrap();
        let w = stp_witness(&id, &b, &[1], 4).unwrap().unwrap();
        assert_eq!(w.period, 1);
    }

    #[test]
    fn rule90_fake_certificate_finds_nothing() {
        let fake = BlockingCert {
            word: vec![0],
            offset: 0,
            width: 1,
            verified_background_period: 0,
            verified_steps: 0,
            status: BlockingStatus::BoundedVerified,
        };
        assert_eq!(stp_witness(&rule90(), &fake, &[1], 32).unwrap(), None);
        let and = TableRule::from_fn(2, -1, 3, |n| n[1] & n[2]).unwrap();
        assert_eq!(
            stp_witness(&and, &fake, &[1], 32),
            Err(CaError::NotSurjective)
        );
    }

    #[test]
    fn scans() {
        let r = stp_empty_scan(&rule90(), 2, 3, 32, 100).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.examined > 0);
        let r = stp_empty_scan(&TableRule::shift(2).unwrap(), 2, 2, 16, 100).unwrap();
        assert!(r.violations.is_empty());

        let r = stp_empty_scan(&m4(), 1, 1, 4, 100).unwrap();
        // 2 is fixed: its neighbors see 2·2 ≡ 0
        for (c, t) in [(1, 2), (2, 1), (3, 2)] {
            let hit = r
                .violations
                .iter()
                .find(|v| v.config == EpConfig::defect(0, vec![c], 0));
            assert_eq!(hit.map(|v| v.period), Some(t));
        }
        assert_eq!(r.violations.len(), 48);
        assert!(!r.truncated);
        let capped = stp_empty_scan(&m4(), 1, 1, 4, 10).unwrap();
        assert!(capped.truncated);
        assert_eq!(capped.violations[..], r.violations[..10]);
    }

    #[test]
    fn product_witnesses() {
        let found = product_witness_scan(&m4(), &rule90(), &ProductScanBounds::default()).unwrap();
        let target = found
            .iter()
            .find(|w| w.first == ep("ep:0|1|0") && w.second == cyc("cyclic:110").to_ep())
            .expect("pairing with 110");
        assert_eq!(target.period, 2);

        let id = TableRule::identity(2).unwrap();
        let shift = TableRule::shift(2).unwrap();
        let found = product_witness_scan(&id, &shift, &ProductScanBounds::default()).unwrap();
        let target = found
            .iter()
            .find(|w| w.second == cyc("cyclic:0").to_ep())
            .unwrap();
        assert_eq!((target.first.clone(), target.period), (ep("ep:0|1|0"), 1));

        assert!(
            product_witness_scan(&rule90(), &m4(), &ProductScanBounds::default())
                .unwrap()
                .is_empty()
        );
    }
}
