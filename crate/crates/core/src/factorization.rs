//! Prime sieve, trial-division factorization and divisor enumeration.
//!
//! Factorization runs trial division against a cached table of primes. The
//! table covers primes up to a configurable limit (`ITERFIX_SIEVE_LIMIT`,
//! default 10^7); cofactors that outlive the table continue with odd trial
//! divisors, so results stay exact for every `u64`, only slower.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;
pub const SIEVE_LIMIT_VAR: &str = "ITERFIX_SIEVE_LIMIT";

/// Primes in `[2, limit]`, ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        if let Some(start) = i.checked_mul(i) {
            for j in (start..=limit).step_by(i) {
                composite[j] = true;
            }
        }
    }
    primes
}

/// Reads the sieve limit override from the environment.
pub fn configured_sieve_limit() -> Result<u64> {
    match std::env::var(SIEVE_LIMIT_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SIEVE_LIMIT),
        Err(e) => Err(Error::Config(format!("{SIEVE_LIMIT_VAR}: {e}"))),
        Ok(raw) => {
            let limit: u64 = raw.trim().parse().map_err(|_| {
                Error::Config(format!("{SIEVE_LIMIT_VAR}={raw:?} is not an integer"))
            })?;
            if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
                return Err(Error::Config(format!(
                    "{SIEVE_LIMIT_VAR}={limit} outside [2, {MAX_SIEVE_LIMIT}]"
                )));
            }
            Ok(limit)
        }
    }
}

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    /// All positive divisors, ascending, including 1 and the value itself.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, alpha) in &self.factors {
            let prev = divs.len();
            let mut pk = 1u64;
            for _ in 0..alpha {
                // pk divides value, so this cannot overflow
                pk *= p;
                for i in 0..prev {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, alpha)| alpha).sum()
    }
}

/// Cached prime table backing trial division.
#[derive(Debug)]
pub struct Sieve {
    limit: u64,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            primes: sieve_primes(limit),
        }
    }

    /// Process-wide sieve, sized from `ITERFIX_SIEVE_LIMIT` (falling back to
    /// the default when the variable is unset or malformed).
    pub fn global() -> &'static Sieve {
        static GLOBAL: OnceLock<Sieve> = OnceLock::new();
        GLOBAL.get_or_init(|| Sieve::new(configured_sieve_limit().unwrap_or(DEFAULT_SIEVE_LIMIT)))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n <= self.limit {
            return self.primes.binary_search(&n).is_ok();
        }
        self.factorize(n).map(|f| f.is_prime()).unwrap_or(false)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::ZeroFactorization);
        }
        let mut rest = n;
        let mut factors = Vec::new();
        let mut take = |rest: &mut u64, p: u64| {
            let mut alpha = 0;
            while (*rest).is_multiple_of(p) {
                *rest /= p;
                alpha += 1;
            }
            if alpha > 0 {
                factors.push((p, alpha));
            }
        };

        let mut exhausted = true;
        for &p in &self.primes {
            if p > rest / p {
                exhausted = false;
                break;
            }
            take(&mut rest, p);
        }
        if exhausted && rest > 1 {
            // Past the table: odd candidates starting after the last prime.
            let mut d = self
                .primes
                .last()
                .map_or(2, |&p| if p == 2 { 3 } else { p + 2 });
            if d == 2 {
                take(&mut rest, 2);
                d = 3;
            }
            while d <= rest / d {
                take(&mut rest, d);
                d += 2;
            }
        }
        if rest > 1 {
            factors.push((rest, 1));
        }
        Ok(Factorization { value: n, factors })
    }
}

/// Factorizes `n` with the process-wide sieve. Rejects `n = 0`.
pub fn factorize(n: u64) -> Result<Factorization> {
    Sieve::global().factorize(n)
}

pub fn is_prime(n: u64) -> bool {
    Sieve::global().is_prime(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2
            && (2..n)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn sieve_small_limits() {
        assert!(sieve_primes(0).is_empty());
        assert!(sieve_primes(1).is_empty());
        assert_eq!(sieve_primes(2), vec![2]);
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let oracle: Vec<u64> = (0..=100).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(oracle.len(), 25);
        assert_eq!(sieve_primes(100), oracle);

        let oracle: Vec<u64> = (0..=5000).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(sieve_primes(5000), oracle);
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert!(trial_division_is_prime(9973));
        assert_eq!(factorize(9973).unwrap().factors(), &[(9973, 1)]);
        assert!(matches!(factorize(0), Err(Error::ZeroFactorization)));
    }

    #[test]
    fn factorize_beyond_sieve_table() {
        // tiny table forces the odd-candidate fallback
        let sieve = Sieve::new(10);
        assert_eq!(sieve.factorize(169).unwrap().factors(), &[(13, 2)]);
        assert_eq!(
            sieve.factorize(2 * 3 * 101 * 103).unwrap().factors(),
            &[(2, 1), (3, 1), (101, 1), (103, 1)]
        );
        assert!(sieve.is_prime(10007));
        assert!(!sieve.is_prime(10007 * 10009));

        let empty = Sieve::new(1);
        assert_eq!(
            empty.factorize(360).unwrap().factors(),
            &[(2, 3), (3, 2), (5, 1)]
        );
    }

    #[test]
    fn factorize_large_values() {
        // largest prime below 10^14; its square root sits at the table edge
        let p = 99_999_999_999_973;
        assert_eq!(factorize(p).unwrap().factors(), &[(p, 1)]);
        assert_eq!(factorize(p * 3).unwrap().factors(), &[(3, 1), (p, 1)]);
        assert_eq!(factorize(u64::MAX).unwrap().factors().len(), 7);
        assert_eq!(factorize(1 << 63).unwrap().factors(), &[(2, 63)]);
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(factorize(1).unwrap().divisors(), vec![1]);
        assert_eq!(factorize(12).unwrap().divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(9973).unwrap().divisors(), vec![1, 9973]);
    }

    #[test]
    fn big_omega_examples() {
        assert_eq!(factorize(1).unwrap().big_omega(), 0);
        assert_eq!(factorize(12).unwrap().big_omega(), 3);
        assert_eq!(factorize(64).unwrap().big_omega(), 6);
    }

    #[test]
    fn factorization_invariants_exhaustive() {
        for n in 1..=20_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.is_one(), n == 1);
            let mut product = 1u64;
            for w in f.factors().windows(2) {
                assert!(w[0].0 < w[1].0);
            }
            for &(p, alpha) in f.factors() {
                assert!(trial_division_is_prime(p));
                assert!(alpha >= 1);
                product *= p.pow(alpha);
            }
            assert_eq!(product, n);

            let divs = f.divisors();
            let expected: u64 = f.factors().iter().map(|&(_, a)| a as u64 + 1).product();
            assert_eq!(divs.len() as u64, expected);
            if n <= 2000 {
                let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
                assert_eq!(divs, brute);
            }
        }
    }
}
