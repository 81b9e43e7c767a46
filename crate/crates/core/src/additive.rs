//! Decision procedures for additive cellular automata over Z_m.
//!
//! Surjectivity and sensitivity follow from gcd conditions on the
//! coefficients. The prime-power reductions `[F]_{p^k}` of a rule are each
//! equicontinuous, positively expansive, or transitive without being
//! expansive, depending on where the coefficients coprime to `p` sit; the
//! set of strictly temporally periodic points of the whole rule is dense
//! exactly when one factor is equicontinuous and empty otherwise.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{crt_combine, factorize, gcd_all};
use crate::configs::{CyclicConfig, EpConfig};
use crate::engine::return_time;
use crate::error::{CaError, Result};
use crate::periodicity::{find_stp_witness, StpWitness, WitnessSearch};
use crate::rules::AdditiveRule;
use crate::Letter;

/// Gcd surjectivity criterion: `gcd(m, a_{-r}, ..., a_r) = 1`.
pub fn is_surjective_additive(rule: &AdditiveRule) -> bool {
    gcd_all(std::iter::once(rule.modulus()).chain(rule.coeffs().values().copied())) == 1
}

fn off_center_gcd(rule: &AdditiveRule) -> u64 {
    gcd_all(
        rule.coeffs()
            .iter()
            .filter(|(&i, _)| i != 0)
            .map(|(_, &c)| c),
    )
}

/// Prime `p | m` not dividing the gcd of the off-center coefficients, if any.
pub fn sensitivity_prime(rule: &AdditiveRule) -> Option<u64> {
    let g = off_center_gcd(rule);
    factorize(rule.modulus())
        .into_iter()
        .map(|(p, _)| p)
        .find(|&p| g % p != 0)
}

/// Sensitivity to initial conditions; its negation is equicontinuity.
pub fn is_sensitive_additive(rule: &AdditiveRule) -> bool {
    sensitivity_prime(rule).is_some()
}

/// The reduction `[F]_{p^k}` for one prime power of the modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerFactor {
    pub p: u64,
    pub k: u32,
    pub rule: AdditiveRule,
}

impl PrimePowerFactor {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// One factor per prime power of `m`, coefficients reduced mod `p^k`.
pub fn decompose_crt(rule: &AdditiveRule) -> Vec<PrimePowerFactor> {
    factorize(rule.modulus())
        .into_iter()
        .map(|(p, k)| PrimePowerFactor {
            p,
            k,
            rule: rule.reduce(p.pow(k)).expect("p^k >= 2"),
        })
        .collect()
}

fn factor_moduli(factors: &[PrimePowerFactor]) -> Vec<u64> {
    factors.iter().map(PrimePowerFactor::modulus).collect()
}

/// Residues of a letter modulo each factor.
pub fn crt_split_letter(letter: u64, moduli: &[u64]) -> Vec<u64> {
    moduli.iter().map(|&q| letter % q).collect()
}

/// Inverse of [`crt_split_letter`].
pub fn crt_join_letter(residues: &[u64], moduli: &[u64]) -> Result<u64> {
    if residues.len() != moduli.len() {
        return Err(CaError::InvalidArgument(format!(
            "{} residues for {} moduli",
            residues.len(),
            moduli.len()
        )));
    }
    crt_combine(residues, moduli).ok_or_else(|| {
        CaError::InvalidArgument(format!("residues {residues:?} out of range for {moduli:?}"))
    })
}

/// Letterwise projection of a configuration over Z_m onto each factor.
pub fn crt_split_cyclic(
    x: &CyclicConfig,
    factors: &[PrimePowerFactor],
) -> Result<Vec<CyclicConfig>> {
    factor_moduli(factors)
        .into_iter()
        .map(|q| CyclicConfig::zip(&[x], |c| (c[0] as u64 % q) as Letter))
        .collect()
}

/// Inverse of [`crt_split_cyclic`].
pub fn crt_join_cyclic(
    parts: &[CyclicConfig],
    factors: &[PrimePowerFactor],
) -> Result<CyclicConfig> {
    let moduli = factor_moduli(factors);
    let refs: Vec<&CyclicConfig> = parts.iter().collect();
    let mut failure = None;
    let joined = CyclicConfig::zip(&refs, |c| join_column(c, &moduli, &mut failure))?;
    failure.map_or(Ok(joined), Err)
}

pub fn crt_split_ep(x: &EpConfig, factors: &[PrimePowerFactor]) -> Result<Vec<EpConfig>> {
    factor_moduli(factors)
        .into_iter()
        .map(|q| EpConfig::zip(&[x], |c| (c[0] as u64 % q) as Letter))
        .collect()
}

pub fn crt_join_ep(parts: &[EpConfig], factors: &[PrimePowerFactor]) -> Result<EpConfig> {
    let moduli = factor_moduli(factors);
    let refs: Vec<&EpConfig> = parts.iter().collect();
    let mut failure = None;
    let joined = EpConfig::zip(&refs, |c| join_column(c, &moduli, &mut failure))?;
    failure.map_or(Ok(joined), Err)
}

fn join_column(column: &[Letter], moduli: &[u64], failure: &mut Option<CaError>) -> Letter {
    let residues: Vec<u64> = column.iter().map(|&c| c as u64).collect();
    match crt_join_letter(&residues, moduli) {
        Ok(v) if v <= Letter::MAX as u64 => v as Letter,
        Ok(v) => {
            failure.get_or_insert(CaError::ResourceCap(format!(
                "letter {v} does not fit a byte"
            )));
            0
        }
        Err(e) => {
            failure.get_or_insert(e);
            0
        }
    }
}

/// Extreme indices carrying a coefficient coprime to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryIndices {
    #[serde(rename = "L")]
    pub left: i64,
    #[serde(rename = "R")]
    pub right: i64,
}

pub fn boundary_indices(factor: &PrimePowerFactor) -> Result<BoundaryIndices> {
    let coprime: Vec<i64> = factor
        .rule
        .coeffs()
        .iter()
        .filter(|(_, &c)| c % factor.p != 0)
        .map(|(&i, _)| i)
        .collect();
    match (coprime.first(), coprime.last()) {
        (Some(&left), Some(&right)) => Ok(BoundaryIndices { left, right }),
        _ => Err(CaError::NotSurjective),
    }
}

/// Power `f^h` whose support is `[hL, hR]` with both extreme coefficients
/// coprime to `p`, i.e. a rule permutative in both outermost variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutativePowerCert {
    pub h: u32,
    pub coeffs: BTreeMap<i64, u64>,
}

/// Outcome of [`permutative_power`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutativePower {
    Found(PermutativePowerCert),
    NotFoundWithin(u32),
}

/// Default search bound for [`permutative_power`]: `4 p^k`.
pub fn default_h_max(factor: &PrimePowerFactor) -> u32 {
    u32::try_from(4 * factor.modulus()).unwrap_or(u32::MAX)
}

/// Least `h ≤ h_max` making `f^h` permutative in its outermost variables.
pub fn permutative_power(factor: &PrimePowerFactor, h_max: u32) -> Result<PermutativePower> {
    let b = boundary_indices(factor)?;
    let mut power = AdditiveRule::identity(factor.modulus())?;
    for h in 1..=h_max {
        power = power.compose(&factor.rule)?;
        let (lo, hi) = (h as i64 * b.left, h as i64 * b.right);
        let inside = power.coeffs().keys().all(|&i| lo <= i && i <= hi);
        if inside && power.coeff(lo) % factor.p != 0 && power.coeff(hi) % factor.p != 0 {
            return Ok(PermutativePower::Found(PermutativePowerCert {
                h,
                coeffs: power.coeffs().clone(),
            }));
        }
    }
    Ok(PermutativePower::NotFoundWithin(h_max))
}

/// Dynamical class of a surjective prime-power additive rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorClass {
    Equicontinuous,
    PositivelyExpansive,
    TransitiveNotExpansive,
}

fn class_from_boundary(b: BoundaryIndices) -> FactorClass {
    if b.left == 0 && b.right == 0 {
        FactorClass::Equicontinuous
    } else if b.left < 0 && 0 < b.right {
        FactorClass::PositivelyExpansive
    } else {
        FactorClass::TransitiveNotExpansive
    }
}

/// Trichotomy by the signs of the boundary indices:
/// `L = R = 0` equicontinuous, `L < 0 < R` positively expansive,
/// otherwise transitive but not positively expansive.
pub fn classify_prime_power(factor: &PrimePowerFactor) -> Result<FactorClass> {
    boundary_indices(factor).map(class_from_boundary)
}

/// Size of the set of strictly temporally periodic points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StpVerdict {
    /// Residual (and therefore dense).
    Residual,
    Dense,
    Empty,
    Unknown,
}

impl fmt::Display for StpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Per-factor line of a [`ClassificationReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub p: u64,
    pub k: u32,
    /// `None` when the factor is not surjective.
    pub class: Option<FactorClass>,
    #[serde(rename = "L")]
    pub left: Option<i64>,
    #[serde(rename = "R")]
    pub right: Option<i64>,
    /// Least permutative power, `None` if not found within the bound.
    pub h: Option<u32>,
}

/// Every decided property of an additive rule, with the values used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub rule: String,
    pub surjective: bool,
    pub sensitive: bool,
    pub equicontinuous: bool,
    /// `None` when the rule is not surjective.
    pub transitive: Option<bool>,
    /// `None` when undecided.
    pub positively_expansive: Option<bool>,
    pub stp: StpVerdict,
    pub factors: Vec<FactorReport>,
    pub certificates: BTreeMap<String, String>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CaError::syntax(e.column(), e.to_string()))
    }
}

/// Full classification of an additive rule.
pub fn classify_additive(rule: &AdditiveRule) -> Result<ClassificationReport> {
    let m = rule.modulus();
    let mut certificates = BTreeMap::new();
    let surjective = is_surjective_additive(rule);
    let coeff_list = rule
        .dense()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    certificates.insert(
        "surjective".to_string(),
        format!(
            "gcd(m={m}; {coeff_list}) = {}",
            gcd_all(std::iter::once(m).chain(rule.coeffs().values().copied()))
        ),
    );
    let sensitive_at = sensitivity_prime(rule);
    let sensitive = sensitive_at.is_some();
    let off = off_center_gcd(rule);
    certificates.insert(
        "sensitive".to_string(),
        match sensitive_at {
            Some(p) => {
                format!("prime {p} divides m={m} but not gcd of off-center coefficients = {off}")
            }
            None => format!("every prime of m={m} divides gcd of off-center coefficients = {off}"),
        },
    );

    let mut factors = Vec::new();
    let mut classes = Vec::new();
    for factor in decompose_crt(rule) {
        let boundary = boundary_indices(&factor).ok();
        let class = boundary.map(class_from_boundary);
        let h = match boundary {
            Some(_) => match permutative_power(&factor, default_h_max(&factor))? {
                PermutativePower::Found(cert) => Some(cert.h),
                PermutativePower::NotFoundWithin(_) => None,
            },
            None => None,
        };
        if let Some(c) = class {
            classes.push(c);
        }
        factors.push(FactorReport {
            p: factor.p,
            k: factor.k,
            class,
            left: boundary.map(|b| b.left),
            right: boundary.map(|b| b.right),
            h,
        });
    }
    let factor_list = factors
        .iter()
        .map(|f| format!("{}^{}", f.p, f.k))
        .collect::<Vec<_>>()
        .join(" x ");
    certificates.insert("factors".to_string(), format!("Z_{m} = {factor_list}"));

    let (transitive, positively_expansive, stp) = if surjective {
        let any_equicontinuous = classes.contains(&FactorClass::Equicontinuous);
        let all_equicontinuous = classes.iter().all(|&c| c == FactorClass::Equicontinuous);
        let all_expansive = classes
            .iter()
            .all(|&c| c == FactorClass::PositivelyExpansive);
        let stp = if all_equicontinuous {
            StpVerdict::Residual
        } else if any_equicontinuous {
            StpVerdict::Dense
        } else {
            StpVerdict::Empty
        };
        certificates.insert(
            "transitive".to_string(),
            if any_equicontinuous {
                "some factor has L = R = 0 (equicontinuous)".to_string()
            } else {
                "no factor has L = R = 0; every factor is transitive".to_string()
            },
        );
        certificates.insert(
            "positively_expansive".to_string(),
            if all_expansive {
                "every factor has L < 0 < R".to_string()
            } else {
                "some factor is equicontinuous or one-sided".to_string()
            },
        );
        certificates.insert(
            "stp".to_string(),
            match stp {
                StpVerdict::Residual => "whole rule equicontinuous: F^p = identity".to_string(),
                StpVerdict::Dense => "an equicontinuous factor carries dense STP".to_string(),
                _ => "all factors transitive: STP empty".to_string(),
            },
        );
        (Some(!any_equicontinuous), Some(all_expansive), stp)
    } else {
        certificates.insert(
            "stp".to_string(),
            "rule not surjective: no verdict".to_string(),
        );
        (None, None, StpVerdict::Unknown)
    };

    Ok(ClassificationReport {
        rule: rule.spec_string(),
        surjective,
        sensitive,
        equicontinuous: !sensitive,
        transitive,
        positively_expansive,
        stp,
        factors,
        certificates,
    })
}

/// Strictly temporally periodic point of an additive rule with an
/// equicontinuous factor: a witness for that factor, paired with the
/// quiescent configuration on every other factor, joined letterwise and
/// re-verified under the full rule.
pub fn additive_stp_witness(
    rule: &AdditiveRule,
    search: &WitnessSearch,
) -> Result<Option<StpWitness>> {
    if !is_surjective_additive(rule) {
        return Err(CaError::NotSurjective);
    }
    let factors = decompose_crt(rule);
    let Some(chosen) = factors
        .iter()
        .position(|f| classify_prime_power(f) == Ok(FactorClass::Equicontinuous))
    else {
        return Ok(None);
    };
    let factor_table = factors[chosen].rule.to_table()?;
    let Some(local) = find_stp_witness(&factor_table, search)? else {
        return Ok(None);
    };
    let parts: Vec<EpConfig> = (0..factors.len())
        .map(|i| {
            if i == chosen {
                local.config.clone()
            } else {
                EpConfig::defect(0, Vec::new(), 0)
            }
        })
        .collect();
    let joined = crt_join_ep(&parts, &factors)?;
    let table = rule.to_table()?;
    let Some(period) = return_time(&table, &joined, search.t_max)? else {
        return Ok(None);
    };
    let witness = StpWitness {
        config: joined,
        period,
    };
    Ok(witness.verify(&table)?.then_some(witness))
}
