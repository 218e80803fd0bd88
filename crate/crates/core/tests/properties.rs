use proptest::prelude::*;

use iterfix::classification::PrimeClassification;
use iterfix::{
    check_global_properties, factorize, h_direct, literal_t_table, sieve_primes, validate,
    FunctionRule,
};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Prime-power table for every `p^α <= bound`, built from `f(p)` and a
/// shift `e < α` as `f(p^α) = f(p)·p^e`. Such tables satisfy I–III.
fn in_class_table(bound: u64, seeds: &[(u64, u32)]) -> Vec<((u64, u32), u64)> {
    let mut entries = Vec::new();
    for (i, p) in sieve_primes(bound).into_iter().enumerate() {
        let (fp_seed, e_seed) = seeds[i % seeds.len()];
        let fp = fp_seed % p;
        let mut alpha = 1;
        let mut pk = p;
        while pk <= bound {
            let e = if alpha == 1 { 0 } else { e_seed % alpha };
            entries.push(((p, alpha), fp * p.pow(e)));
            alpha += 1;
            pk *= p;
        }
    }
    entries
}

proptest! {
    #[test]
    fn factorization_round_trips(n in 1u64..10_000_000) {
        let f = factorize(n).unwrap();
        let product: u64 = f.factors().iter().map(|&(p, a)| p.pow(a)).product();
        prop_assert_eq!(product, n);
        let count: u64 = f.factors().iter().map(|&(_, a)| a as u64 + 1).product();
        prop_assert_eq!(f.divisors().len() as u64, count);
    }

    #[test]
    fn big_omega_is_additive(m in 1u64..100_000, n in 1u64..100_000) {
        let omega = |x| factorize(x).unwrap().big_omega();
        prop_assert_eq!(omega(m * n), omega(m) + omega(n));
    }

    #[test]
    fn schemmel_is_multiplicative(r in 1u64..8, m in 1u64..50_000, n in 1u64..50_000) {
        prop_assume!(gcd(m, n) == 1);
        let rule = FunctionRule::schemmel(r).unwrap();
        prop_assert_eq!(rule.eval(m * n).unwrap(), rule.eval(m).unwrap() * rule.eval(n).unwrap());
    }

    #[test]
    fn schemmel_descends(r in 1u64..8, n in 2u64..10_000_000) {
        prop_assert!(FunctionRule::schemmel(r).unwrap().eval(n).unwrap() < n);
    }

    #[test]
    fn schemmel_validates(r in 1u64..50) {
        let report = validate(&FunctionRule::schemmel(r).unwrap(), 300, 5);
        prop_assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn h_is_completely_multiplicative(r in 1u64..8, x in 1u64..3000, y in 1u64..3000) {
        let rule = FunctionRule::schemmel(r).unwrap();
        let hxy = h_direct(&rule, x * y).unwrap();
        prop_assert_eq!(hxy, h_direct(&rule, x).unwrap() * h_direct(&rule, y).unwrap());
        prop_assert_eq!(PrimeClassification::new(&rule).h_fast(x * y).unwrap(), hxy);
    }

    #[test]
    fn s_and_t_agree(r in 1u64..12, n in 1u64..1_000_000) {
        let rule = FunctionRule::schemmel(r).unwrap();
        let c = PrimeClassification::new(&rule);
        prop_assert_eq!(c.in_s(n).unwrap(), c.in_t(n).unwrap());
    }

    #[test]
    fn random_rules_in_class_obey_every_identity(
        seeds in prop::collection::vec((0u64..1000, 0u32..8), 1..12)
    ) {
        let bound = 300;
        let rule = FunctionRule::custom("random", in_class_table(bound, &seeds)).unwrap();
        prop_assert!(validate(&rule, bound, 8).passed());
        prop_assert!(check_global_properties(&rule, bound).violations.is_empty());

        let c = PrimeClassification::new(&rule);
        prop_assert!(c.verify_theorem(bound).unwrap().is_empty());
        prop_assert!(c.verify_h_agreement(bound).unwrap().is_empty());
        prop_assert!(c.verify_s_equals_t(bound).unwrap().is_empty());
        prop_assert!(c.verify_orbit_closure(bound, 6).unwrap().is_empty());
        prop_assert!(c.verify_divisor_closure(bound).unwrap().is_empty());
    }

    #[test]
    fn local_properties_imply_global(
        seeds in prop::collection::vec((0u64..1000, 0u32..8), 1..12),
        noise in prop::collection::vec(prop::option::weighted(0.1, 0u64..64), 16)
    ) {
        // in-class table over every prime power <= 60 with a few entries
        // overwritten by arbitrary values
        let bound = 60;
        let entries: Vec<_> = in_class_table(bound, &seeds)
            .into_iter()
            .zip(noise.iter().cycle())
            .map(|(((p, alpha), v), n)| ((p, alpha), n.map_or(v, |n| n % p.pow(alpha))))
            .collect();
        let rule = FunctionRule::custom("perturbed", entries).unwrap();
        let global = check_global_properties(&rule, bound);
        prop_assert!(global.uncovered.is_empty());
        if validate(&rule, bound, 6).passed() {
            prop_assert!(global.violations.is_empty());
        }
    }
}

#[test]
fn literal_and_memoized_t_agree_on_larger_range() {
    for r in 1..=6 {
        let rule = FunctionRule::schemmel(r).unwrap();
        let literal = literal_t_table(&rule, 5000).unwrap();
        let c = PrimeClassification::new(&rule);
        for n in 1..=5000u64 {
            assert_eq!(literal[n as usize], c.in_t(n).unwrap(), "r = {r}, n = {n}");
        }
    }
}

#[test]
fn closed_forms_on_fast_path() {
    let s2 = FunctionRule::schemmel(2).unwrap();
    let s3 = FunctionRule::schemmel(3).unwrap();
    let (c2, c3) = (PrimeClassification::new(&s2), PrimeClassification::new(&s3));
    for n in 1..=10_000u64 {
        assert_eq!(c2.h_fast(n).unwrap(), n % 2);
        assert_eq!(c3.h_fast(n).unwrap(), u64::from(n == 1));
    }
}
