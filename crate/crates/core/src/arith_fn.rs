//! Multiplicative arithmetic functions given by their prime-power values.
//!
//! A [`FunctionRule`] only describes `f(p^α)`. The evaluator fixes
//! `f(0) = 0` and `f(1) = 1` and extends multiplicatively over the
//! factorization.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{factorize, is_prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    /// Schemmel totient `S_r`; `r = 1` is Euler's φ.
    Schemmel { r: u64 },
    /// Finite table of `(p, α) -> f(p^α)`.
    Custom(BTreeMap<(u64, u32), u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionRule {
    name: String,
    kind: RuleKind,
}

impl FunctionRule {
    pub fn schemmel(r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidRule("schemmel rule needs r >= 1".into()));
        }
        Ok(Self {
            name: format!("schemmel:{r}"),
            kind: RuleKind::Schemmel { r },
        })
    }

    pub fn euler_totient() -> Self {
        Self::schemmel(1).expect("r = 1 is valid")
    }

    pub fn custom<I>(name: impl Into<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u64, u32), u64)>,
    {
        let mut table = BTreeMap::new();
        for ((p, alpha), value) in entries {
            if !is_prime(p) {
                return Err(Error::InvalidRule(format!(
                    "table key p = {p} is not prime"
                )));
            }
            if alpha == 0 {
                return Err(Error::InvalidRule(format!(
                    "table key ({p}, 0) has exponent 0"
                )));
            }
            if let Some(old) = table.insert((p, alpha), value) {
                if old != value {
                    return Err(Error::InvalidRule(format!(
                        "conflicting entries for f({p}^{alpha}): {old} and {value}"
                    )));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            kind: RuleKind::Custom(table),
        })
    }

    /// Loads a custom rule from its JSON document.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::RuleUnreadable {
            path: path.to_path_buf(),
            source,
        })?;
        let doc: RuleDocument = serde_json::from_str(&text).map_err(|source| Error::RuleFile {
            path: path.to_path_buf(),
            source,
        })?;
        doc.into_rule()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    pub fn eval_prime_power(&self, p: u64, alpha: u32) -> Result<u64> {
        debug_assert!(alpha >= 1);
        match &self.kind {
            RuleKind::Schemmel { r } => {
                if p <= *r {
                    return Ok(0);
                }
                p.checked_pow(alpha - 1)
                    .and_then(|pk| pk.checked_mul(p - r))
                    .ok_or_else(|| Error::Overflow(format!("{}({p}^{alpha})", self.name)))
            }
            RuleKind::Custom(table) => table
                .get(&(p, alpha))
                .copied()
                .ok_or(Error::RuleIncomplete { p, alpha }),
        }
    }

    pub fn eval(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        let mut acc = 1u64;
        for &(p, alpha) in factorize(n)?.factors() {
            let v = self.eval_prime_power(p, alpha)?;
            if v == 0 {
                // skip the remaining factors; the product is 0 regardless
                return Ok(0);
            }
            acc = acc
                .checked_mul(v)
                .ok_or_else(|| Error::Overflow(format!("{}({n})", self.name)))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for FunctionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Parses the inline `schemmel:<r>` form.
impl FromStr for FunctionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = s
            .strip_prefix("schemmel:")
            .ok_or_else(|| Error::InvalidRule(format!("{s:?} is not of the form schemmel:<r>")))?;
        let r: u64 = r
            .parse()
            .map_err(|_| Error::InvalidRule(format!("{s:?}: r must be a positive integer")))?;
        Self::schemmel(r)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleDocument {
    pub name: String,
    pub entries: Vec<RuleEntry>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RuleEntry {
    pub p: u64,
    pub alpha: u32,
    pub value: u64,
}

impl RuleDocument {
    pub fn into_rule(self) -> Result<FunctionRule> {
        FunctionRule::custom(
            self.name,
            self.entries.into_iter().map(|e| ((e.p, e.alpha), e.value)),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    I,
    II,
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: Property,
    pub p: u64,
    pub alpha: u32,
    /// `f(p^α)`, the value that broke the property.
    pub witness: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SkipReason {
    /// A value the check needs is missing from a custom table.
    Uncovered,
    /// `p^α` or `f(p^α)` does not fit in 64 bits.
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub p: u64,
    pub alpha: u32,
    pub reason: SkipReason,
}

/// Finite-range evidence for properties I–III. Passing certifies only the
/// checked slice, never the rule as a whole.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub rule: String,
    pub prime_bound: u64,
    pub exponent_bound: u32,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub skipped: Vec<Skip>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `d | m` with `d | 0` for every `d` and `0 | m` only for `m = 0`.
pub fn divides(d: u64, m: u64) -> bool {
    if d == 0 {
        m == 0
    } else {
        m.is_multiple_of(d)
    }
}

/// Checks properties I–III for every prime `p <= prime_bound` and
/// `1 <= α <= exponent_bound`.
pub fn validate(rule: &FunctionRule, prime_bound: u64, exponent_bound: u32) -> ValidationReport {
    let mut report = ValidationReport {
        rule: rule.name().to_owned(),
        prime_bound,
        exponent_bound,
        checked: 0,
        violations: Vec::new(),
        skipped: Vec::new(),
    };
    let skip_reason = |e: &Error| match e {
        Error::RuleIncomplete { .. } => SkipReason::Uncovered,
        _ => SkipReason::Overflow,
    };

    for p in crate::factorization::sieve_primes(prime_bound) {
        let fp = rule.eval_prime_power(p, 1);
        for alpha in 1..=exponent_bound {
            let mut skip = |reason| report.skipped.push(Skip { p, alpha, reason });
            let value = match rule.eval_prime_power(p, alpha) {
                Ok(v) => v,
                Err(e) => {
                    skip(skip_reason(&e));
                    continue;
                }
            };
            let fp = match &fp {
                Ok(v) => *v,
                Err(e) => {
                    skip(skip_reason(e));
                    continue;
                }
            };
            report.checked += 1;
            let mut violate = |property| {
                report.violations.push(Violation {
                    property,
                    p,
                    alpha,
                    witness: value,
                })
            };

            // I: f(p^α) < p^α; a p^α beyond u64 exceeds every u64 value
            if let Some(pk) = p.checked_pow(alpha) {
                if value >= pk {
                    violate(Property::I);
                }
            }
            // II: f(p) | f(p^α)
            if !divides(fp, value) {
                violate(Property::II);
            }
            // III: every prime q | f(p^α) divides p·f(p); vacuous for 0
            if value != 0 {
                let ok = factorize(value)
                    .map(|f| f.primes().all(|q| q == p || divides(q, fp)))
                    .unwrap_or(true);
                if !ok {
                    violate(Property::III);
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GlobalProperty {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GlobalViolation {
    pub property: GlobalProperty,
    pub n: u64,
    /// `f(n)`.
    pub value: u64,
    /// For B, the prime whose image fails to divide `f(n)`.
    pub prime: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalReport {
    pub n_bound: u64,
    pub violations: Vec<GlobalViolation>,
    /// `n` whose value could not be computed (uncovered table entry or overflow).
    pub uncovered: Vec<u64>,
}

/// Checks properties A (`f(n) < n`) and B (`f(p) | f(n)` for `p | n`) for
/// `2 <= n <= n_bound`.
pub fn check_global_properties(rule: &FunctionRule, n_bound: u64) -> GlobalReport {
    let mut report = GlobalReport {
        n_bound,
        violations: Vec::new(),
        uncovered: Vec::new(),
    };
    'outer: for n in 2..=n_bound {
        let Ok(value) = rule.eval(n) else {
            report.uncovered.push(n);
            continue;
        };
        if value >= n {
            report.violations.push(GlobalViolation {
                property: GlobalProperty::A,
                n,
                value,
                prime: None,
            });
        }
        let factorization = factorize(n).expect("n >= 2");
        let mut images = Vec::with_capacity(factorization.factors().len());
        for p in factorization.primes() {
            match rule.eval_prime_power(p, 1) {
                Ok(fp) => images.push((p, fp)),
                Err(_) => {
                    report.uncovered.push(n);
                    continue 'outer;
                }
            }
        }
        for (p, fp) in images {
            if !divides(fp, value) {
                report.violations.push(GlobalViolation {
                    property: GlobalProperty::B,
                    n,
                    value,
                    prime: Some(p),
                });
            }
        }
    }
    report
}
