//! Moebius and divisor-count tables.
//!
//! Tables up to [`LINEAR_LIMIT`] come from a linear sieve over smallest prime
//! factors; larger ones are filled segment by segment.

use crate::error::{Error, Result};
use crate::precision::unit;
use rug::Float;
use std::sync::{Arc, Mutex, OnceLock};

pub const LINEAR_LIMIT: usize = 10_000_000;
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;
const SEGMENT: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    limit: usize,
    mu: Vec<i8>,
    d: Vec<u32>,
}

impl MobiusTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn mu(&self, n: usize) -> i8 {
        assert!(n >= 1 && n <= self.limit, "index {n} outside 1..={}", self.limit);
        self.mu[n]
    }

    pub fn divisors(&self, n: usize) -> u32 {
        assert!(n >= 1 && n <= self.limit, "index {n} outside 1..={}", self.limit);
        self.d[n]
    }

    /// Moebius values indexed from zero; slot 0 is unused and holds 0.
    pub fn mu_slice(&self) -> &[i8] {
        &self.mu
    }

    pub fn divisor_slice(&self) -> &[u32] {
        &self.d
    }

    /// Mertens function M(x) for x up to the table limit.
    pub fn mertens(&self, x: usize) -> i64 {
        let x = x.min(self.limit);
        self.mu[1..=x].iter().map(|&m| i64::from(m)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i8, u32)> + '_ {
        (1..=self.limit).map(move |n| (n, self.mu[n], self.d[n]))
    }
}

fn bytes_needed(limit: usize) -> u64 {
    (limit as u64 + 1) * 5
}

pub fn mobius_table(limit: usize) -> Result<MobiusTable> {
    mobius_table_with_budget(limit, DEFAULT_MEMORY_BUDGET)
}

pub fn mobius_table_with_budget(limit: usize, budget: u64) -> Result<MobiusTable> {
    if limit < 1 {
        return Err(Error::Domain("sieve limit must be at least 1".into()));
    }
    let need = bytes_needed(limit);
    if need > budget {
        return Err(Error::Capacity { requested: need, budget });
    }
    Ok(if limit <= LINEAR_LIMIT { mobius_table_linear(limit) } else { mobius_table_segmented(limit, SEGMENT) })
}

pub fn mobius_table_linear(limit: usize) -> MobiusTable {
    let n = limit.max(1);
    let mut mu = vec![0i8; n + 1];
    let mut d = vec![0u32; n + 1];
    let mut spf = vec![0u32; n + 1];
    let mut exp = vec![0u8; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    mu[1] = 1;
    d[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i);
            mu[i] = -1;
            d[i] = 2;
            exp[i] = 1;
        }
        let si = spf[i] as usize;
        for &p in &primes {
            if p > si || i * p > n {
                break;
            }
            let ip = i * p;
            spf[ip] = p as u32;
            if p == si {
                mu[ip] = 0;
                exp[ip] = exp[i] + 1;
                d[ip] = d[i] / (u32::from(exp[i]) + 1) * (u32::from(exp[i]) + 2);
            } else {
                mu[ip] = -mu[i];
                exp[ip] = 1;
                d[ip] = d[i] * 2;
            }
        }
    }
    MobiusTable { limit: n, mu, d }
}

pub fn mobius_table_segmented(limit: usize, segment: usize) -> MobiusTable {
    let n = limit.max(1);
    let segment = segment.max(16);
    let root = (n as f64).sqrt() as usize + 2;
    let primes = primes_up_to(root);
    let mut mu = vec![0i8; n + 1];
    let mut d = vec![0u32; n + 1];
    let mut rem = vec![0u64; segment];
    let mut lo = 1usize;
    while lo <= n {
        let hi = (lo + segment - 1).min(n);
        let len = hi - lo + 1;
        for k in 0..len {
            rem[k] = (lo + k) as u64;
            mu[lo + k] = 1;
            d[lo + k] = 1;
        }
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            let mut m = first;
            while m <= hi {
                let k = m - lo;
                let mut e = 0u32;
                while rem[k].is_multiple_of(p as u64) {
                    rem[k] /= p as u64;
                    e += 1;
                }
                mu[m] = if e >= 2 { 0 } else { -mu[m] };
                d[m] *= e + 1;
                m += p;
            }
        }
        for k in 0..len {
            if rem[k] > 1 {
                mu[lo + k] = -mu[lo + k];
                d[lo + k] *= 2;
            }
        }
        lo = hi + 1;
    }
    mu[0] = 0;
    d[0] = 0;
    MobiusTable { limit: n, mu, d }
}

pub fn primes_up_to(n: usize) -> Vec<usize> {
    let spf = smallest_prime_factors(n.max(2));
    (2..=n).filter(|&k| spf[k] as usize == k).collect()
}

fn spf_cache() -> &'static Mutex<Arc<Vec<u32>>> {
    static CACHE: OnceLock<Mutex<Arc<Vec<u32>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Arc::new(Vec::new())))
}

/// Smallest-prime-factor table covering at least `0..=n`, shared process-wide.
pub fn smallest_prime_factors(n: usize) -> Arc<Vec<u32>> {
    let mut guard = spf_cache().lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() > n {
        return Arc::clone(&guard);
    }
    let size = n.max(2 * guard.len()).max(1024);
    let mut spf = vec![0u32; size + 1];
    let mut primes = Vec::new();
    for i in 2..=size {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i);
        }
        for &p in &primes {
            if p > spf[i] as usize || i * p > size {
                break;
            }
            spf[i * p] = p as u32;
        }
    }
    *guard = Arc::new(spf);
    Arc::clone(&guard)
}

/// Mollifier coefficients c[n] = sum over d | n with d <= V of mu(d) d^shift.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    length: usize,
    shift: Float,
    limit: usize,
    c: Vec<Float>,
    rounding: f64,
}

impl CoeffTable {
    /// The mollifier length V.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn shift(&self) -> &Float {
        &self.shift
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn get(&self, n: usize) -> &Float {
        assert!(n >= 1 && n <= self.limit, "index {n} outside 1..={}", self.limit);
        &self.c[n]
    }

    /// Rounding error bound of c[n] per contributing divisor.
    pub fn rounding_per_divisor(&self) -> f64 {
        self.rounding
    }
}

/// Builds c[1..=limit] at the precision of `shift`.
pub fn coeff_table(length: usize, shift: &Float, limit: usize) -> Result<CoeffTable> {
    coeff_table_with_budget(length, shift, limit, DEFAULT_MEMORY_BUDGET)
}

pub fn coeff_table_with_budget(length: usize, shift: &Float, limit: usize, budget: u64) -> Result<CoeffTable> {
    if length < 2 || limit < length {
        return Err(Error::Domain(format!("coefficient table needs limit >= V >= 2, got V={length}, limit={limit}")));
    }
    if !shift.is_finite() {
        return Err(Error::Domain("exponent shift must be finite".into()));
    }
    let bits = shift.prec();
    let need = (limit as u64 + 1) * (48 + u64::from(bits) / 8);
    if need > budget {
        return Err(Error::Capacity { requested: need, budget });
    }
    let mobius = mobius_table(length)?;
    let mut c = vec![Float::new(bits); limit + 1];
    let mut biggest: f64 = 1.0;
    for d in 1..=length {
        let m = mobius.mu(d);
        if m == 0 {
            continue;
        }
        let mut w = Float::with_val(bits, Float::ln_u(d as u32));
        w *= shift;
        w.exp_mut();
        biggest = biggest.max(w.to_f64());
        if m < 0 {
            w = -w;
        }
        let mut n = d;
        while n <= limit {
            c[n] += &w;
            n += d;
        }
    }
    Ok(CoeffTable { length, shift: shift.clone(), limit, c, rounding: 8.0 * biggest * unit(bits) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = mobius_table(30).unwrap();
        let mu: Vec<i8> = (1..=12).map(|n| t.mu(n)).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
        let d: Vec<u32> = (1..=12).map(|n| t.divisors(n)).collect();
        assert_eq!(d, vec![1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]);
        assert_eq!(t.mu(30), -1);
        assert_eq!(t.divisors(30), 8);
    }

    #[test]
    fn segmented_agrees_with_linear() {
        for n in [1usize, 2, 17, 1000, 65_537] {
            assert_eq!(mobius_table_linear(n), mobius_table_segmented(n, 97));
        }
    }

    #[test]
    fn capacity_is_enforced() {
        match mobius_table_with_budget(1_000_000, 1000) {
            Err(Error::Capacity { .. }) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
        assert!(mobius_table(0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let zero = Float::with_val(128, 0);
        let t = coeff_table(10, &zero, 10).unwrap();
        assert_eq!(t.get(1).to_f64(), 1.0);
        for n in 2..=10 {
            assert!(t.get(n).is_zero(), "c[{n}]");
        }
        let e = Float::with_val(128, -0.3);
        let t = coeff_table(10, &e, 10).unwrap();
        let expect = 1.0 - 7f64.powf(-0.3);
        assert!((t.get(7).to_f64() - expect).abs() < 1e-15);
        assert!(coeff_table(10, &e, 5).is_err());
    }

    #[test]
    fn spf_table_grows() {
        let a = smallest_prime_factors(100);
        assert_eq!(a[91], 7);
        let b = smallest_prime_factors(5000);
        assert_eq!(b[4999], 4999);
        assert_eq!(b[4998], 2);
    }
}
