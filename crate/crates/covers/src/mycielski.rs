//! Prime factorization and the completely additive function
//! `f(∏ p_t^α_t) = Σ α_t(p_t − 1)`, together with the three-way
//! index/depth inequality chain checker.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithmeticError {
    #[error("argument must be a positive integer")]
    Nonpositive,
}

/// Prime-power decomposition with primes distinct and ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// `(prime, exponent)` pairs, ascending by prime. Empty for n = 1.
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, a)| p.pow(a))
            .product::<u64>()
            .max(1)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, a)| a == 1)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(p, a)| {
                if a == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{a}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Complete factorization by trial division; n = 1 yields the empty list.
pub fn factorize(n: u64) -> Result<Factorization, ArithmeticError> {
    if n == 0 {
        return Err(ArithmeticError::Nonpositive);
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut a = 0;
        while *rest % p == 0 {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            pairs.push((p, a));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut p: u64 = 5;
    while p.saturating_mul(p) <= rest {
        push(p, &mut rest);
        push(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(Factorization { pairs })
}

/// `f(n) = Σ α_t(p_t − 1)` over the factorization of n; f(1) = 0.
pub fn mycielski_f(n: u64) -> Result<u64, ArithmeticError> {
    Ok(factorize(n)?
        .pairs
        .iter()
        .map(|&(p, a)| u64::from(a) * (p - 1))
        .sum())
}

/// `Σ (α_t − 1)(p_t − 1)` over the factorization of n; zero for squarefree n.
pub fn conjecture11_bound(n: u64) -> Result<u64, ArithmeticError> {
    Ok(factorize(n)?
        .pairs
        .iter()
        .map(|&(p, a)| u64::from(a - 1) * (p - 1))
        .sum())
}

/// Evaluation of `index − 1 ≥ d ≥ f(index) ≥ log₂ index` on one instance.
/// The log term is compared exactly as `2^f ≥ index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainReport {
    pub index: u64,
    pub d: u64,
    pub f: u64,
    pub index_minus_one_ge_d: bool,
    pub d_ge_f: bool,
    pub f_ge_log2_index: bool,
}

impl ChainReport {
    pub fn all_hold(&self) -> bool {
        self.index_minus_one_ge_d && self.d_ge_f && self.f_ge_log2_index
    }
}

pub fn check_chain16(index: u64, d: u64) -> Result<ChainReport, ArithmeticError> {
    if index == 0 {
        return Err(ArithmeticError::Nonpositive);
    }
    let f = mycielski_f(index)?;
    Ok(ChainReport {
        index,
        d,
        f,
        index_minus_one_ge_d: index - 1 >= d,
        d_ge_f: d >= f,
        f_ge_log2_index: pow2_at_least(f, index),
    })
}

/// Exact `2^e ≥ n` without floating point.
pub fn pow2_at_least(e: u64, n: u64) -> bool {
    e >= 63 || (1u64 << e) >= n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(1).unwrap().pairs(), &[]);
        assert_eq!(factorize(97).unwrap().pairs(), &[(97, 1)]);
        assert_eq!(factorize(0), Err(ArithmeticError::Nonpositive));
        assert_eq!(factorize(60).unwrap().to_string(), "2^2·3·5");
        assert_eq!(factorize(1).unwrap().to_string(), "1");
    }

    #[test]
    fn factorization_reconstructs_value() {
        for n in 1..=2000u64 {
            assert_eq!(factorize(n).unwrap().value(), n);
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(mycielski_f(1).unwrap(), 0);
        assert_eq!(mycielski_f(12).unwrap(), 4);
        assert_eq!(mycielski_f(60).unwrap(), 8);
    }

    #[test]
    fn conjecture_bound_examples() {
        assert_eq!(conjecture11_bound(30).unwrap(), 0); // squarefree
        assert_eq!(conjecture11_bound(12).unwrap(), 1);
        assert_eq!(conjecture11_bound(8).unwrap(), 2);
    }

    #[test]
    fn chain_examples() {
        let r = check_chain16(6, 3).unwrap();
        assert_eq!(r.f, 3);
        assert!(r.all_hold());
        assert!(check_chain16(1, 0).unwrap().all_hold());
        let r = check_chain16(60, 59).unwrap();
        assert_eq!(r.f, 8);
        assert!(r.all_hold());
        // d below f(index) breaks the middle inequality
        assert!(!check_chain16(60, 7).unwrap().d_ge_f);
    }

    #[test]
    fn f_bounds_over_range() {
        for n in 1..=100_000u64 {
            let f = mycielski_f(n).unwrap();
            assert!(n - 1 >= f, "n-1 >= f(n) failed at {n}");
            assert!(pow2_at_least(f, n), "2^f(n) >= n failed at {n}");
            // equality in the log bound exactly at powers of two
            let is_pow2 = n.is_power_of_two();
            let exact = f < 63 && (1u64 << f) == n;
            assert_eq!(is_pow2, exact, "log-bound equality mismatch at {n}");
        }
    }

    proptest! {
        #[test]
        fn f_is_completely_additive(a in 1u64..10_000, b in 1u64..10_000) {
            let fa = mycielski_f(a).unwrap();
            let fb = mycielski_f(b).unwrap();
            prop_assert_eq!(mycielski_f(a * b).unwrap(), fa + fb);
        }
    }
}
