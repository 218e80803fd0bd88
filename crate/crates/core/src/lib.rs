//! Iterated multiplicative arithmetic functions.
//!
//! Given a multiplicative `f` with `f(p^α) < p^α`, `f(p) | f(p^α)` and every
//! prime divisor of `f(p^α)` dividing `p·f(p)`, iterating `f` from any
//! positive `n` lands in `{0, 1}`. The limit `H(n)` is completely
//! multiplicative. This crate computes `H` by direct iteration and by prime
//! classification, and checks the surrounding set identities on finite ranges.

pub mod arith_fn;
pub mod classification;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod factorization;

pub use arith_fn::{check_global_properties, validate, FunctionRule, RuleKind, ValidationReport};
pub use classification::{literal_t_table, PrimeClassification, Verdict};
pub use dynamics::{h_direct, iterate, trajectory, Trajectory};
pub use error::{Error, Result};
pub use factorization::{factorize, sieve_primes, Factorization, Sieve};
