//! Textual rule specifications.
//!
//! ```text
//! additive:m=<int>;r=<int>;c=<c_{-r}>,...,<c_r>
//! wolfram:<code>[;k=<alphabet>;r=<radius>]
//! ```

use num_bigint::BigUint;

use crate::error::{CaError, Result};
use crate::rules::{AdditiveRule, Rule, TableRule};
use crate::Letter;

/// Parsed but not yet expanded rule literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    Additive {
        modulus: u64,
        radius: u32,
        coeffs: Vec<i64>,
    },
    Wolfram {
        code: BigUint,
        alphabet: usize,
        radius: u32,
    },
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(CaError::syntax(self.pos, format!("expected `{lit}`")))
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.expect(lit).is_ok()
    }

    fn digits(&mut self, allow_sign: bool) -> Result<(usize, &'a str)> {
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut end = start;
        if allow_sign && end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let digits_from = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_from {
            return Err(CaError::syntax(start, "expected an integer"));
        }
        self.pos = end;
        Ok((start, &self.text[start..end]))
    }

    fn int<T: std::str::FromStr>(&mut self, allow_sign: bool) -> Result<T> {
        let (at, s) = self.digits(allow_sign)?;
        s.parse()
            .map_err(|_| CaError::syntax(at, format!("integer `{s}` out of range")))
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(CaError::syntax(self.pos, "unexpected trailing input"))
        }
    }
}

impl RuleSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor { text, pos: 0 };
        if cur.eat("additive:") {
            cur.expect("m=")?;
            let modulus: u64 = cur.int(false)?;
            cur.expect(";r=")?;
            let radius: u32 = cur.int(false)?;
            cur.expect(";c=")?;
            let list_at = cur.pos;
            let mut coeffs = vec![cur.int::<i64>(true)?];
            while cur.eat(",") {
                coeffs.push(cur.int(true)?);
            }
            cur.finish()?;
            let expected = 2 * radius as usize + 1;
            if coeffs.len() != expected {
                return Err(CaError::syntax(
                    list_at,
                    format!("expected {expected} coefficients, found {}", coeffs.len()),
                ));
            }
            Ok(RuleSpec::Additive {
                modulus,
                radius,
                coeffs,
            })
        } else if cur.eat("wolfram:") {
            let (at, code) = cur.digits(false)?;
            let code = code
                .parse::<BigUint>()
                .map_err(|e| CaError::syntax(at, e.to_string()))?;
            let mut alphabet = 2usize;
            let mut radius = 1u32;
            if cur.eat(";k=") {
                alphabet = cur.int(false)?;
                cur.expect(";r=")?;
                radius = cur.int(false)?;
            }
            cur.finish()?;
            Ok(RuleSpec::Wolfram {
                code,
                alphabet,
                radius,
            })
        } else {
            Err(CaError::syntax(0, "expected `additive:` or `wolfram:`"))
        }
    }

    pub fn build(&self) -> Result<Rule> {
        match self {
            RuleSpec::Additive {
                modulus,
                radius,
                coeffs,
            } => {
                if *modulus < 2 {
                    return Err(CaError::ModulusTooSmall(*modulus));
                }
                let r = *radius as i64;
                let rule = AdditiveRule::new(
                    *modulus,
                    *radius,
                    coeffs.iter().enumerate().map(|(j, &c)| (j as i64 - r, c)),
                )?;
                Ok(Rule::Additive(rule))
            }
            RuleSpec::Wolfram {
                code,
                alphabet,
                radius,
            } => wolfram_table(code, *alphabet, *radius).map(Rule::Table),
        }
    }
}

/// Expands a Wolfram code: base-`k` digit `i` of the code is the image of
/// the neighborhood whose big-endian base-`k` value is `i`.
pub fn wolfram_table(code: &BigUint, alphabet: usize, radius: u32) -> Result<TableRule> {
    if alphabet < 2 {
        return Err(CaError::AlphabetTooSmall(alphabet));
    }
    let width = 2 * radius as usize + 1;
    let entries = crate::rules::table::checked_pow(alphabet, width)?;
    let base = BigUint::from(alphabet);
    let mut rest = code.clone();
    let mut table = Vec::with_capacity(entries);
    for _ in 0..entries {
        let digit = (&rest % &base)
            .to_u64_digits()
            .first()
            .copied()
            .unwrap_or(0);
        table.push(digit as Letter);
        rest /= &base;
    }
    if rest != BigUint::ZERO {
        return Err(CaError::InvalidArgument(format!(
            "Wolfram code {code} exceeds {alphabet}^{entries}"
        )));
    }
    TableRule::new(alphabet, radius, table)
}

/// Parses a rule literal into the rule it denotes.
pub fn parse_rule_spec(text: &str) -> Result<Rule> {
    RuleSpec::parse(text)?.build()
}
