//! Iteration of a rule down to its fixed point in `{0, 1}`.

use serde::Serialize;

use crate::arith_fn::FunctionRule;
use crate::error::{Error, Result};

/// The orbit `n, f(n), f²(n), …` up to the first element of `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub start: u64,
    pub steps: Vec<u64>,
}

impl Trajectory {
    /// Number of applications of `f` performed.
    pub fn length(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn last(&self) -> u64 {
        *self
            .steps
            .last()
            .expect("trajectory always holds its start")
    }
}

/// `f^m(n)`, with `f^0(n) = n`.
pub fn iterate(rule: &FunctionRule, n: u64, m: u64) -> Result<u64> {
    let mut x = n;
    for _ in 0..m {
        if x <= 1 {
            // 0 and 1 are fixed points
            break;
        }
        x = rule.eval(x)?;
    }
    Ok(x)
}

/// Materializes the orbit of `n`. Fails if a value above 1 does not strictly
/// descend, or if `{0, 1}` is not reached within `n` applications.
pub fn trajectory(rule: &FunctionRule, n: u64) -> Result<Trajectory> {
    let mut steps = vec![n];
    let mut x = n;
    while x > 1 {
        if steps.len() as u64 > n {
            return Err(Error::NonDescending {
                start: n,
                value: x,
                image: x,
            });
        }
        let next = rule.eval(x)?;
        if next >= x {
            return Err(Error::NonDescending {
                start: n,
                value: x,
                image: next,
            });
        }
        steps.push(next);
        x = next;
    }
    Ok(Trajectory { start: n, steps })
}

/// `H(n) = lim f^m(n)` computed from the definition.
pub fn h_direct(rule: &FunctionRule, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Config("H is defined for n >= 1 only".into()));
    }
    trajectory(rule, n).map(|t| t.last())
}
