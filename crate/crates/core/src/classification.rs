//! The sets P, Q, S and T, the fast route to `H`, and the empirical checks
//! tying them together.
//!
//! Primes are split into P (`H(p) = 1`) and Q (`H(p) = 0`) by iterating the
//! rule from `p`. Those verdicts are memoized, and then `H(n)` reduces to
//! asking whether `n` has a prime divisor in Q; no composite is ever iterated
//! on the fast path.
//!
//! T is defined recursively: `1 ∈ T`, a prime `p ∈ T` iff `f(p) ∈ T`, and a
//! composite is in T iff it splits into two members of T greater than one.
//! [`PrimeClassification::in_t`] uses the equivalent prime-divisor form;
//! [`literal_t_table`] evaluates the factor-pair form as stated.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;

use crate::arith_fn::FunctionRule;
use crate::dynamics::{h_direct, iterate};
use crate::error::{Error, Result};
use crate::factorization::{factorize, is_prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    InP,
    InQ,
}

/// Memoized P/Q verdicts and T-membership for one rule.
///
/// The caches take concurrent readers. Every entry is a deterministic
/// function of its key, so racing writers store equal values.
#[derive(Debug)]
pub struct PrimeClassification<'a> {
    rule: &'a FunctionRule,
    verdicts: RwLock<HashMap<u64, Verdict>>,
    t_members: RwLock<HashMap<u64, bool>>,
}

fn cached<V: Copy>(map: &RwLock<HashMap<u64, V>>, key: u64) -> Option<V> {
    map.read().expect("memo lock poisoned").get(&key).copied()
}

fn store<V>(map: &RwLock<HashMap<u64, V>>, key: u64, value: V) {
    map.write().expect("memo lock poisoned").insert(key, value);
}

impl<'a> PrimeClassification<'a> {
    pub fn new(rule: &'a FunctionRule) -> Self {
        Self {
            rule,
            verdicts: RwLock::default(),
            t_members: RwLock::default(),
        }
    }

    pub fn rule(&self) -> &FunctionRule {
        self.rule
    }

    /// Number of memoized prime verdicts.
    pub fn cached_primes(&self) -> usize {
        self.verdicts.read().expect("memo lock poisoned").len()
    }

    pub fn classify_prime(&self, p: u64) -> Result<Verdict> {
        if let Some(v) = cached(&self.verdicts, p) {
            return Ok(v);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        self.classify_known_prime(p)
    }

    // caller guarantees primality
    fn classify_known_prime(&self, p: u64) -> Result<Verdict> {
        if let Some(v) = cached(&self.verdicts, p) {
            return Ok(v);
        }
        let verdict = match h_direct(self.rule, p)? {
            1 => Verdict::InP,
            _ => Verdict::InQ,
        };
        store(&self.verdicts, p, verdict);
        Ok(verdict)
    }

    /// `n ∈ S`: no prime divisor of `n` lies in Q. `0 ∉ S`.
    pub fn in_s(&self, n: u64) -> Result<bool> {
        if n == 0 {
            return Ok(false);
        }
        for p in factorize(n)?.primes() {
            if self.classify_known_prime(p)? == Verdict::InQ {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `n ∈ T`, using the prime-divisor criterion for composites. `0 ∉ T`.
    pub fn in_t(&self, n: u64) -> Result<bool> {
        self.in_t_guarded(n, n)
    }

    fn in_t_guarded(&self, n: u64, start: u64) -> Result<bool> {
        if n == 0 {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        if let Some(t) = cached(&self.t_members, n) {
            return Ok(t);
        }
        let factorization = factorize(n)?;
        let member = if factorization.is_prime() {
            let image = self.rule.eval_prime_power(n, 1)?;
            if image >= n {
                return Err(Error::NonDescending {
                    start,
                    value: n,
                    image,
                });
            }
            self.in_t_guarded(image, start)?
        } else {
            let mut all = true;
            for p in factorization.primes() {
                if !self.in_t_guarded(p, start)? {
                    all = false;
                    break;
                }
            }
            all
        };
        store(&self.t_members, n, member);
        Ok(member)
    }

    /// `H(n)` via `n ∈ S`.
    pub fn h_fast(&self, n: u64) -> Result<u64> {
        self.in_s(n).map(u64::from)
    }

    /// Pairs `x <= y` with `x·y <= bound` and `H(xy) != H(x)·H(y)`, all three
    /// values from [`h_direct`].
    pub fn verify_theorem(&self, bound: u64) -> Result<Vec<(u64, u64)>> {
        let h = direct_table(self.rule, bound)?;
        let mut counterexamples = Vec::new();
        for x in 1..=bound {
            if x * x > bound {
                break;
            }
            for y in x..=bound / x {
                let (x_, y_) = (x as usize, y as usize);
                if h[x_ * y_] != h[x_] * h[y_] {
                    counterexamples.push((x, y));
                }
            }
        }
        Ok(counterexamples)
    }

    /// `n <= bound` where [`Self::h_fast`] and [`h_direct`] disagree.
    pub fn verify_h_agreement(&self, bound: u64) -> Result<Vec<u64>> {
        let mut mismatches = Vec::new();
        for n in 1..=bound {
            if self.h_fast(n)? != h_direct(self.rule, n)? {
                mismatches.push(n);
            }
        }
        Ok(mismatches)
    }

    /// `n <= bound` with `n ∈ S` and `n ∈ T` disagreeing.
    pub fn verify_s_equals_t(&self, bound: u64) -> Result<Vec<u64>> {
        let mut mismatches = Vec::new();
        for n in 1..=bound {
            if self.in_s(n)? != self.in_t(n)? {
                mismatches.push(n);
            }
        }
        Ok(mismatches)
    }

    /// `(k, r)` with `k <= bound`, `r <= depth` and `f^r(k) ∈ S` disagreeing
    /// with `k ∈ S`.
    pub fn verify_orbit_closure(&self, bound: u64, depth: u64) -> Result<Vec<(u64, u64)>> {
        let mut counterexamples = Vec::new();
        for k in 1..=bound {
            let k_in_s = self.in_s(k)?;
            let mut x = k;
            for r in 1..=depth {
                x = iterate(self.rule, x, 1)?;
                if self.in_s(x)? != k_in_s {
                    counterexamples.push((k, r));
                }
            }
        }
        Ok(counterexamples)
    }

    /// Divisor closure of T, checked against the literal factor-pair
    /// criterion. Reports `(k, d)`:
    /// - `k ∈ T` (literally) but its divisor `d ∉ T`;
    /// - every prime divisor of `k` is in T but `k ∉ T` (with `d = k`);
    /// - the memoized and literal criteria disagree on `k` (with `d = k`).
    pub fn verify_divisor_closure(&self, bound: u64) -> Result<Vec<(u64, u64)>> {
        let literal = literal_t_table(self.rule, bound)?;
        let mut counterexamples = Vec::new();
        for k in 1..=bound {
            let factorization = factorize(k)?;
            let k_in_t = literal[k as usize];
            if k_in_t != self.in_t(k)? {
                counterexamples.push((k, k));
                continue;
            }
            if k_in_t {
                for d in factorization.divisors() {
                    if !literal[d as usize] {
                        counterexamples.push((k, d));
                    }
                }
            } else if factorization.primes().all(|p| literal[p as usize]) {
                counterexamples.push((k, k));
            }
        }
        Ok(counterexamples)
    }
}

/// `H(n)` for `n` in `0..=bound` from [`h_direct`]; index 0 holds 0.
pub fn direct_table(rule: &FunctionRule, bound: u64) -> Result<Vec<u64>> {
    let mut h = vec![0; bound as usize + 1];
    for n in 1..=bound {
        h[n as usize] = h_direct(rule, n)?;
    }
    Ok(h)
}

/// T-membership for `0..=bound` from the defining criteria as written,
/// searching factor pairs `x₁·x₂ = x` for composites. Built bottom-up since
/// every criterion refers only to smaller integers (for rules with
/// `f(p) < p`).
pub fn literal_t_table(rule: &FunctionRule, bound: u64) -> Result<Vec<bool>> {
    let mut t = vec![false; bound as usize + 1];
    if bound >= 1 {
        t[1] = true;
    }
    for x in 2..=bound {
        let mut split = None;
        let mut d = 2;
        while d * d <= x {
            if x % d == 0 {
                let pair_in_t = t[d as usize] && t[(x / d) as usize];
                split = Some(split.unwrap_or(false) || pair_in_t);
                if pair_in_t {
                    break;
                }
            }
            d += 1;
        }
        t[x as usize] = match split {
            Some(member) => member,
            None => {
                let image = rule.eval_prime_power(x, 1)?;
                if image >= x {
                    return Err(Error::NonDescending {
                        start: x,
                        value: x,
                        image,
                    });
                }
                t[image as usize]
            }
        };
    }
    Ok(t)
}
