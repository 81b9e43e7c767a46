use std::collections::BTreeMap;
use std::fmt;

use crate::error::{CaError, Result};
use crate::rules::table::TableRule;
use crate::Letter;

/// Additive local rule `f(x_{-r}, ..., x_r) = [Σ a_i x_i]_m`, stored as a
/// sparse Laurent polynomial over Z_m. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveRule {
    modulus: u64,
    coeffs: BTreeMap<i64, u64>,
    declared_radius: u32,
}

impl AdditiveRule {
    /// Builds a rule from `(index, coefficient)` pairs; coefficients are
    /// reduced mod `modulus` and zeros dropped.
    pub fn new<I>(modulus: u64, declared_radius: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        if modulus < 2 {
            return Err(CaError::ModulusTooSmall(modulus));
        }
        let mut map = BTreeMap::new();
        for (index, c) in coeffs {
            if index.unsigned_abs() > declared_radius as u64 {
                return Err(CaError::IndexOutsideRadius {
                    index,
                    radius: declared_radius,
                });
            }
            let entry = map.entry(index).or_insert(0u64);
            *entry = ((*entry as i128 + c as i128).rem_euclid(modulus as i128)) as u64;
        }
        map.retain(|_, c| *c != 0);
        Ok(AdditiveRule {
            modulus,
            coeffs: map,
            declared_radius,
        })
    }

    /// Rule from the dense list `c_{-r}, ..., c_r`.
    pub fn from_dense(modulus: u64, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(CaError::InvalidArgument(format!(
                "expected an odd number of coefficients, got {}",
                coeffs.len()
            )));
        }
        let r = (coeffs.len() / 2) as i64;
        Self::new(
            modulus,
            r as u32,
            coeffs.iter().enumerate().map(|(j, &c)| (j as i64 - r, c)),
        )
    }

    pub fn identity(modulus: u64) -> Result<Self> {
        Self::new(modulus, 0, [(0, 1)])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, u64> {
        &self.coeffs
    }

    pub fn coeff(&self, index: i64) -> u64 {
        self.coeffs.get(&index).copied().unwrap_or(0)
    }

    pub fn declared_radius(&self) -> u32 {
        self.declared_radius
    }

    /// Smallest and largest index carrying a nonzero coefficient.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// Dense coefficients `c_{-r}, ..., c_r` for the declared radius.
    pub fn dense(&self) -> Vec<u64> {
        let r = self.declared_radius as i64;
        (-r..=r).map(|i| self.coeff(i)).collect()
    }

    /// Same rule with every coefficient reduced mod `modulus`.
    pub fn reduce(&self, modulus: u64) -> Result<Self> {
        Self::new(
            modulus,
            self.declared_radius,
            self.coeffs.iter().map(|(&i, &c)| (i, (c % modulus) as i64)),
        )
    }

    /// Rule of the composition `self ∘ inner` (apply `inner` first). Its
    /// polynomial is the product of the two Laurent polynomials.
    pub fn compose(&self, inner: &AdditiveRule) -> Result<Self> {
        if self.modulus != inner.modulus {
            return Err(CaError::ModulusMismatch(self.modulus, inner.modulus));
        }
        let m = self.modulus as u128;
        let mut product: BTreeMap<i64, u64> = BTreeMap::new();
        for (&i, &a) in &self.coeffs {
            for (&j, &b) in &inner.coeffs {
                let entry = product.entry(i + j).or_insert(0);
                *entry = ((*entry as u128 + a as u128 * b as u128) % m) as u64;
            }
        }
        product.retain(|_, c| *c != 0);
        Ok(AdditiveRule {
            modulus: self.modulus,
            coeffs: product,
            declared_radius: self.declared_radius + inner.declared_radius,
        })
    }

    /// `h`-fold composition by binary exponentiation (`h = 0` is the identity).
    pub fn power(&self, h: u32) -> Self {
        let mut result = AdditiveRule {
            modulus: self.modulus,
            coeffs: BTreeMap::from([(0, 1)]),
            declared_radius: 0,
        };
        let mut base = self.clone();
        let mut e = h;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base).expect("same modulus");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("same modulus");
            }
        }
        result
    }

    /// Expands the rule into a lookup table over Z_m of the declared radius.
    pub fn to_table(&self) -> Result<TableRule> {
        if self.modulus > Letter::MAX as u64 + 1 {
            return Err(CaError::ResourceCap(format!(
                "modulus {} does not fit a byte alphabet",
                self.modulus
            )));
        }
        let r = self.declared_radius as i64;
        let dense = self.dense();
        let m = self.modulus;
        TableRule::from_fn(m as usize, -r, (2 * r + 1) as usize, |n| {
            let sum: u64 = n.iter().zip(&dense).map(|(&x, &a)| x as u64 * a).sum();
            (sum % m) as Letter
        })
    }

    /// Rule-spec literal, e.g. `additive:m=4;r=1;c=2,1,2`.
    pub fn spec_string(&self) -> String {
        let coeffs: Vec<String> = self.dense().iter().map(u64::to_string).collect();
        format!(
            "additive:m={};r={};c={}",
            self.modulus,
            self.declared_radius,
            coeffs.join(",")
        )
    }
}

impl fmt::Display for AdditiveRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(m: u64, c: &[i64]) -> AdditiveRule {
        AdditiveRule::from_dense(m, c).unwrap()
    }

    fn coeffs(r: &AdditiveRule) -> Vec<(i64, u64)> {
        r.coeffs().iter().map(|(&i, &c)| (i, c)).collect()
    }

    #[test]
    fn trims_and_reduces() {
        let r = rule(4, &[6, -3, 8]);
        assert_eq!(coeffs(&r), vec![(-1, 2), (0, 1)]);
        assert_eq!(r.declared_radius(), 1);
    }

    #[test]
    fn table_entries() {
        let t = rule(4, &[2, 1, 2]).to_table().unwrap();
        assert_eq!(t.eval(&[0, 0, 0]), 0);
        assert_eq!(t.eval(&[1, 0, 0]), 2);
        let r90 = rule(2, &[1, 0, 1]).to_table().unwrap();
        assert_eq!(r90.eval(&[1, 1, 1]), 0);
    }

    #[test]
    fn composition_examples() {
        let r90 = rule(2, &[1, 0, 1]);
        assert_eq!(coeffs(&r90.compose(&r90).unwrap()), vec![(-2, 1), (2, 1)]);
        let id = AdditiveRule::identity(2).unwrap();
        assert_eq!(id.compose(&r90).unwrap().coeffs(), r90.coeffs());
        let sq = rule(4, &[2, 1, 2]).power(2);
        assert_eq!(coeffs(&sq), vec![(0, 1)]);
        assert_eq!(sq.declared_radius(), 2);
        assert_eq!(coeffs(&rule(9, &[3, 1, 0]).power(3)), vec![(0, 1)]);
        assert_eq!(rule(6, &[4, 1, 4]).power(1), rule(6, &[4, 1, 4]));
    }

    #[test]
    fn modulus_mismatch() {
        assert_eq!(
            rule(2, &[1]).compose(&rule(3, &[1])),
            Err(CaError::ModulusMismatch(2, 3))
        );
    }

    #[test]
    fn index_beyond_radius() {
        assert!(matches!(
            AdditiveRule::new(5, 1, [(2, 1)]),
            Err(CaError::IndexOutsideRadius {
                index: 2,
                radius: 1
            })
        ));
    }
}
