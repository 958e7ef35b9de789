//! Exact integer number-theoretic kernels.
//!
//! Sieved tables of the Moebius function mu(n), Euler phi(n) and smallest
//! prime factors; divisor enumeration; weighted Moebius inversion
//! `X(n) = (1/n) sum_{d|n} a(d) mu(n/d)`; gcd-sums
//! `sum_{k=1..n} f(gcd(n,k)) = sum_{d|n} phi(d) f(n/d)`; and the periodic
//! characters used by the theta-quotient identities.

use crate::error::{Error, Result};
use num_rational::Ratio;

/// Hard cap on sieve size; beyond this the table would not fit comfortably
/// in memory and callers should restructure their computation.
const MAX_SIEVE: u64 = 1 << 31;

/// Immutable sieved tables of mu, phi and smallest prime factor up to `n_max`.
///
/// Built once with a linear sieve; safe to share across threads.
#[derive(Debug, Clone)]
pub struct ArithTables {
    n_max: u64,
    mu: Vec<i8>,
    phi: Vec<u64>,
    spf: Vec<u32>,
}

impl ArithTables {
    /// Sieve all tables up to `n_max` inclusive.
    pub fn build(n_max: u64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Capacity("table bound must be at least 1".into()));
        }
        if n_max > MAX_SIEVE {
            return Err(Error::Capacity(format!(
                "table bound {n_max} exceeds the supported maximum {MAX_SIEVE}"
            )));
        }
        let n = n_max as usize;
        let mut spf = vec![0u32; n + 1];
        let mut mu = vec![0i8; n + 1];
        let mut phi = vec![0u64; n + 1];
        let mut primes: Vec<u32> = Vec::new();

        mu[1] = 1;
        phi[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                phi[i] = i as u64 - 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                let ip = i * p;
                spf[ip] = p as u32;
                if i % p == 0 {
                    mu[ip] = 0;
                    phi[ip] = phi[i] * p as u64;
                    break;
                } else {
                    mu[ip] = -mu[i];
                    phi[ip] = phi[i] * (p as u64 - 1);
                }
            }
        }
        Ok(ArithTables { n_max, mu, phi, spf })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// mu(n) for 1 <= n <= n_max.
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// phi(n) for 1 <= n <= n_max.
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize]
    }

    /// Smallest prime factor of n (n itself when prime), 2 <= n <= n_max.
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Prime factorization as (prime, exponent) pairs, ascending primes.
    ///
    /// Uses the sieved spf table when `n <= n_max`, trial division otherwise.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1, "factorize requires n >= 1");
        let mut out = Vec::new();
        let mut m = n;
        if n <= self.n_max {
            while m > 1 {
                let p = self.spf[m as usize] as u64;
                let mut e = 0u32;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                out.push((p, e));
            }
        } else {
            let mut p = 2u64;
            while p * p <= m {
                if m % p == 0 {
                    let mut e = 0u32;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    out.push((p, e));
                }
                p += if p == 2 { 1 } else { 2 };
            }
            if m > 1 {
                out.push((m, 1));
            }
        }
        out
    }

    /// All positive divisors of n, ascending, duplicate-free.
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let factors = self.factorize(n);
        let mut divs = vec![1u64];
        for &(p, e) in &factors {
            let prev_len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..prev_len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Weighted Moebius inversion in exact rational arithmetic:
    /// `X(n) = (1/n) sum_{d|n} a(d) mu(n/d)`.
    ///
    /// Inverse of the divisor-sum relation `a(n) = sum_{d|n} d * X(d)`,
    /// which holds exactly for the returned values.
    pub fn weighted_mobius_invert_rational<F>(&self, a: F, n: u64) -> Ratio<i128>
    where
        F: Fn(u64) -> Ratio<i128>,
    {
        let mut acc = Ratio::from_integer(0i128);
        for d in self.divisors(n) {
            let m = self.mu_of(n / d);
            if m != 0 {
                acc += a(d) * Ratio::from_integer(m as i128);
            }
        }
        acc / Ratio::from_integer(n as i128)
    }

    /// Floating-point variant of [`weighted_mobius_invert_rational`]
    /// for real-valued coefficient sequences.
    ///
    /// [`weighted_mobius_invert_rational`]: ArithTables::weighted_mobius_invert_rational
    pub fn weighted_mobius_invert<F>(&self, a: F, n: u64) -> f64
    where
        F: Fn(u64) -> f64,
    {
        let mut acc = 0.0;
        for d in self.divisors(n) {
            let m = self.mu_of(n / d);
            if m != 0 {
                acc += a(d) * m as f64;
            }
        }
        acc / n as f64
    }

    /// Plain Moebius-inverted divisor sum `sum_{d|n} a(d) mu(n/d)`
    /// (no 1/n weight).
    pub fn mobius_convolve<F>(&self, a: F, n: u64) -> f64
    where
        F: Fn(u64) -> f64,
    {
        let mut acc = 0.0;
        for d in self.divisors(n) {
            let m = self.mu_of(n / d);
            if m != 0 {
                acc += a(d) * m as f64;
            }
        }
        acc
    }

    /// `sum_{k=1..n} f(gcd(n, k))`, computed through the phi-convolution
    /// `sum_{d|n} phi(d) f(n/d)` (the count of k with gcd(n,k) = n/d is
    /// phi(d)).
    pub fn gcd_sum<F>(&self, f: F, n: u64) -> f64
    where
        F: Fn(u64) -> f64,
    {
        let mut acc = 0.0;
        for d in self.divisors(n) {
            acc += self.phi_of(d) as f64 * f(n / d);
        }
        acc
    }

    fn mu_of(&self, n: u64) -> i8 {
        if n <= self.n_max {
            self.mu[n as usize]
        } else {
            mu_from_factorization(&self.factorize(n))
        }
    }

    fn phi_of(&self, n: u64) -> u64 {
        if n <= self.n_max {
            self.phi[n as usize]
        } else {
            let mut ph = 1u64;
            for (p, e) in self.factorize(n) {
                ph *= (p - 1) * p.pow(e - 1);
            }
            ph
        }
    }
}

fn mu_from_factorization(factors: &[(u64, u32)]) -> i8 {
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A period-p sequence of integer values indexed by residue.
///
/// `values[n mod p]` is the value at n; index 0 holds the value at the
/// residue 0 class (n divisible by p).
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicChar {
    period: u64,
    values: Vec<i64>,
}

impl PeriodicChar {
    pub fn new(period: u64, values: Vec<i64>) -> Result<Self> {
        if period == 0 || values.len() != period as usize {
            return Err(Error::Domain(format!(
                "periodic sequence needs exactly {period} values"
            )));
        }
        Ok(PeriodicChar { period, values })
    }

    /// The constant sequence 1 (period 1).
    pub fn one() -> Self {
        PeriodicChar { period: 1, values: vec![1] }
    }

    /// The alternating sequence (-1)^(n+1): +1 at odd n, -1 at even n.
    pub fn alternating() -> Self {
        PeriodicChar { period: 2, values: vec![-1, 1] }
    }

    /// Legendre symbol (n|5): +1 at n = 1,4; -1 at n = 2,3; 0 at 5|n (mod 5).
    pub fn legendre5() -> Self {
        PeriodicChar { period: 5, values: vec![0, 1, -1, -1, 1] }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn value(&self, n: u64) -> i64 {
        self.values[(n % self.period) as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Sum of one full period; zero for the mean-zero characters that admit
    /// L-values down to s > 0.
    pub fn period_sum(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn is_mean_zero(&self) -> bool {
        self.period_sum() == 0
    }

    /// Largest absolute value over a period.
    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

/// The five-case character of the theta-quotient identities:
/// +1 at residues a and p-a, -1 at residues b and p-b, 0 at the residue 0
/// class, 0 elsewhere. Requires p > 2a, p > 2b, a != b.
pub fn x2_character(p: u64, a: u64, b: u64) -> Result<PeriodicChar> {
    validate_x2_params(p, a, b)?;
    let mut values = vec![0i64; p as usize];
    values[a as usize] = 1;
    values[(p - a) as usize] = 1;
    values[b as usize] = -1;
    values[(p - b) as usize] = -1;
    PeriodicChar::new(p, values)
}

/// Shared domain check for (p, a, b) triples: p > 2a, p > 2b, a != b, a,b >= 1.
pub fn validate_x2_params(p: u64, a: u64, b: u64) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("residues a, b must be at least 1".into()));
    }
    if a == b {
        return Err(Error::Domain("residues a and b must differ".into()));
    }
    if p <= 2 * a || p <= 2 * b {
        return Err(Error::Domain(format!(
            "need p > 2a and p > 2b, got p = {p}, a = {a}, b = {b}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn trial_mu(n: u64) -> i8 {
        let mut m = n;
        let mut count = 0;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                count += 1;
            }
            p += 1;
        }
        if m > 1 {
            count += 1;
        }
        if count % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn trial_phi(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(n, k) == 1).count() as u64
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn mu_small_values() {
        let t = ArithTables::build(6).unwrap();
        let mu: Vec<i8> = (1..=6).map(|n| t.mu(n)).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1]);
    }

    #[test]
    fn n_max_one() {
        let t = ArithTables::build(1).unwrap();
        assert_eq!(t.mu(1), 1);
        assert_eq!(t.phi(1), 1);
    }

    #[test]
    fn zero_bound_rejected() {
        assert!(matches!(ArithTables::build(0), Err(Error::Capacity(_))));
    }

    #[test]
    fn sieve_matches_trial_factorization() {
        let t = ArithTables::build(10_000).unwrap();
        for n in 1..=10_000u64 {
            assert_eq!(t.mu(n), trial_mu(n), "mu({n})");
        }
        // phi by definition is O(n^2) to check; sample densely at the low
        // end and sparsely above.
        for n in 1..=500u64 {
            assert_eq!(t.phi(n), trial_phi(n), "phi({n})");
        }
        for n in (501..=10_000u64).step_by(97) {
            assert_eq!(t.phi(n), trial_phi(n), "phi({n})");
        }
    }

    #[test]
    fn divisor_sum_laws() {
        let t = ArithTables::build(10_000).unwrap();
        for n in 1..=10_000u64 {
            let divs = t.divisors(n);
            let mu_sum: i64 = divs.iter().map(|&d| t.mu(d) as i64).sum();
            let phi_sum: u64 = divs.iter().map(|&d| t.phi(d)).sum();
            assert_eq!(mu_sum, if n == 1 { 1 } else { 0 }, "mu law at {n}");
            assert_eq!(phi_sum, n, "phi law at {n}");
        }
    }

    #[test]
    fn divisors_examples() {
        let t = ArithTables::build(100).unwrap();
        assert_eq!(t.divisors(1), vec![1]);
        assert_eq!(t.divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(t.divisors(12), vec![1, 2, 3, 4, 6, 12]);
        // beyond the sieve bound: trial-division path
        assert_eq!(t.divisors(101 * 103), vec![1, 101, 103, 101 * 103]);
    }

    #[test]
    fn divisors_sorted_and_dividing() {
        let t = ArithTables::build(3000).unwrap();
        for n in 1..=3000u64 {
            let divs = t.divisors(n);
            assert!(divs.windows(2).all(|w| w[0] < w[1]), "sorted at {n}");
            assert!(divs.iter().all(|&d| n % d == 0), "divide at {n}");
            let by_trial: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divs, by_trial, "complete at {n}");
        }
    }

    #[test]
    fn inversion_delta_gives_mu_over_n() {
        let t = ArithTables::build(200).unwrap();
        for n in 1..=200u64 {
            let x = t.weighted_mobius_invert_rational(
                |d| Ratio::from_integer(if d == 1 { 1 } else { 0 }),
                n,
            );
            assert_eq!(x, Ratio::new(t.mu(n) as i128, n as i128), "n = {n}");
        }
    }

    #[test]
    fn inversion_identity_gives_phi_over_n() {
        let t = ArithTables::build(1000).unwrap();
        for n in 1..=1000u64 {
            let x = t.weighted_mobius_invert_rational(|d| Ratio::from_integer(d as i128), n);
            assert_eq!(x, Ratio::new(t.phi(n) as i128, n as i128), "n = {n}");
            // round-trip: sum_{d|n} d * (phi(d)/d) = sum phi(d) = n
            let back: u64 = t.divisors(n).iter().map(|&d| t.phi(d)).sum();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn inversion_at_one_returns_a1() {
        let t = ArithTables::build(10).unwrap();
        let x = t.weighted_mobius_invert_rational(|_| Ratio::new(7i128, 3i128), 1);
        assert_eq!(x, Ratio::new(7, 3));
    }

    #[test]
    fn gcd_sum_examples() {
        let t = ArithTables::build(100).unwrap();
        // gcd(6,k), k=1..6 = 1,2,3,2,1,6 -> 15
        assert_eq!(t.gcd_sum(|m| m as f64, 6), 15.0);
        // n = 1: f(1)
        assert_eq!(t.gcd_sum(|m| (m * m) as f64, 1), 1.0);
        // gcd(5,k) = 1,1,1,1,5 -> 9
        assert_eq!(t.gcd_sum(|m| m as f64, 5), 9.0);
    }

    #[test]
    fn gcd_sum_matches_direct_enumeration() {
        let t = ArithTables::build(2000).unwrap();
        // deterministic pseudo-random f values
        let f = |m: u64| (((m * 2654435761) % 1000) as f64 - 500.0) / 250.0;
        for n in 1..=400u64 {
            let direct: f64 = (1..=n).map(|k| f(gcd(n, k))).sum();
            let viaphi = t.gcd_sum(f, n);
            assert!(
                (direct - viaphi).abs() <= 1e-9 * (1.0 + direct.abs()),
                "n = {n}: {direct} vs {viaphi}"
            );
        }
    }

    #[test]
    fn x2_five_one_two() {
        let x2 = x2_character(5, 1, 2).unwrap();
        let vals: Vec<i64> = (1..=5).map(|n| x2.value(n)).collect();
        assert_eq!(vals, vec![1, -1, -1, 1, 0]);
    }

    #[test]
    fn x2_matches_legendre_mod_5() {
        let x2 = x2_character(5, 1, 2).unwrap();
        // quadratic-residue enumeration: squares mod 5 are {1, 4}
        let qr: Vec<i64> = (0..5)
            .map(|r| {
                if r == 0 {
                    0
                } else if (1..5).any(|k| (k * k) % 5 == r) {
                    1
                } else {
                    -1
                }
            })
            .collect();
        for n in 1..=10_000u64 {
            assert_eq!(x2.value(n), qr[(n % 5) as usize], "n = {n}");
            assert_eq!(x2.value(n), PeriodicChar::legendre5().value(n));
        }
    }

    #[test]
    fn x2_seven_one_two() {
        let x2 = x2_character(7, 1, 2).unwrap();
        let vals: Vec<i64> = (1..=7).map(|n| x2.value(n)).collect();
        assert_eq!(vals, vec![1, -1, 0, 0, -1, 1, 0]);
    }

    #[test]
    fn x2_domain_errors() {
        assert!(x2_character(4, 2, 1).is_err()); // p = 2a
        assert!(x2_character(5, 1, 1).is_err()); // a = b
        assert!(x2_character(5, 0, 2).is_err()); // a = 0
        assert!(x2_character(6, 1, 3).is_err()); // p = 2b
    }

    #[test]
    fn tables_shared_across_threads() {
        use std::sync::Arc;
        let tables = Arc::new(ArithTables::build(5000).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let t = tables.clone();
                std::thread::spawn(move || {
                    let mut acc = 0.0;
                    for n in (1 + i..=5000u64).step_by(4) {
                        acc += t.gcd_sum(|m| 1.0 / m as f64, n);
                    }
                    acc
                })
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap().is_finite());
        }
    }

    #[test]
    fn mean_zero_flags() {
        assert!(!PeriodicChar::one().is_mean_zero());
        assert!(PeriodicChar::alternating().is_mean_zero());
        assert!(PeriodicChar::legendre5().is_mean_zero());
        assert!(x2_character(7, 1, 3).unwrap().is_mean_zero());
    }
}
