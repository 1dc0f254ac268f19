//! Bernoulli numbers and the complex log-gamma function.

use crate::error::{Error, Result};
use crate::precision::{mag, unit, CValue};
use rug::{Float, Integer};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Exact B_{2k} for k = 1..=count as (numerator, denominator).
fn exact_bernoulli(count: usize) -> Vec<(Integer, Integer)> {
    static CACHE: OnceLock<Mutex<Vec<(Integer, Integer)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() < count {
        let n = count.max(2 * guard.len());
        // Tangent numbers via the Brent-Harvey in-place recurrence.
        let mut tan = vec![Integer::new(); n + 1];
        tan[1] = Integer::from(1);
        for k in 2..=n {
            tan[k] = Integer::from(&tan[k - 1] * (k as u32 - 1));
        }
        for k in 2..=n {
            for j in k..=n {
                let a = Integer::from(&tan[j - 1] * (j - k) as u32);
                let b = Integer::from(&tan[j] * (j - k + 2) as u32);
                tan[j] = a + b;
            }
        }
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let two_k = 2 * k as u32;
            let mut num = Integer::from(&tan[k] * two_k);
            if k % 2 == 0 {
                num = -num;
            }
            let p = Integer::from(Integer::u_pow_u(2, two_k));
            let den = &p * Integer::from(&p - 1u32);
            let g = Integer::from(num.gcd_ref(&den));
            out.push((num / &g, den / g));
        }
        *guard = out;
    }
    guard[..count].to_vec()
}

/// B_2, B_4, ..., B_{2 count} rounded to `bits`.
pub fn bernoulli_even(count: usize, bits: u32) -> Vec<Float> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Float>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = guard.get(&bits) {
            if v.len() >= count {
                return v[..count].to_vec();
            }
        }
    }
    let exact = exact_bernoulli(count.max(16));
    let vals: Vec<Float> = exact.iter().map(|(n, d)| Float::with_val(bits, n) / Float::with_val(bits, d)).collect();
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.insert(bits, vals.clone());
    vals[..count].to_vec()
}

/// B_{2k} as doubles for k = 1..=count.
pub fn bernoulli_even_f64(count: usize) -> Vec<f64> {
    bernoulli_even(count, 64).iter().map(Float::to_f64).collect()
}

/// A logarithm of Gamma(z).  The imaginary part is only fixed modulo 2*pi,
/// which is all that exponentiation needs.
pub fn ln_gamma(z: &CValue) -> Result<CValue> {
    let bits = z.prec();
    if z.im.is_zero() && z.re <= 0 && z.re.is_integer() {
        return Err(Error::Pole(format!("Gamma at {}", z.re.to_f64())));
    }
    let threshold = 0.25 * f64::from(bits) + 8.0;
    let re = z.re.to_f64();
    let shift = if re >= threshold { 0 } else { (threshold - re).ceil() as u32 };
    let mut w = z.clone();
    let mut prod = CValue::one(bits);
    for _ in 0..shift {
        prod = &prod * &w;
        w = &w + &CValue::one(bits);
    }
    let mut out = stirling(&w)?;
    if shift > 0 {
        out = &out - &prod.ln()?;
    }
    Ok(out)
}

fn stirling(w: &CValue) -> Result<CValue> {
    let bits = w.prec();
    let half = CValue::from_f64(0.5, 0.0, bits);
    let lnw = w.ln()?;
    let ln2pi = Float::with_val(bits, crate::precision::pi(bits) * 2u32).ln();
    let mut sum = &(&(w - &half) * &lnw) - w;
    sum = &sum + &CValue::real(ln2pi / 2u32);
    let winv = w.recip()?;
    let winv2 = winv.square();
    let wm = w.abs_f64();
    let cos_half = (w.im.to_f64().atan2(w.re.to_f64()) / 2.0).cos();
    let max_terms = (bits as usize).max(32);
    let bern = bernoulli_even(max_terms + 1, bits);
    let mut pow = winv.clone();
    let mut tail = f64::INFINITY;
    for k in 1..=max_terms {
        let denom = (2 * k * (2 * k - 1)) as f64;
        let coeff = Float::with_val(bits, &bern[k - 1] / denom);
        let term = pow.scale(&coeff);
        sum = &sum + &term;
        pow = &pow * &winv2;
        let next = mag(&bern[k]) / ((2 * k + 2) * (2 * k + 1)) as f64 * wm.powi(-(2 * k as i32 + 1));
        let bound = next / cos_half.powi(2 * k as i32 + 2);
        if bound <= unit(bits) * sum.abs_f64().max(1.0) * 0.25 {
            tail = bound;
            break;
        }
    }
    if !tail.is_finite() {
        return Err(Error::NonConvergence("Stirling series did not reach working precision".into()));
    }
    Ok(sum.with_err(tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_bernoulli_numbers() {
        let b = exact_bernoulli(6);
        let expect = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730)];
        for (got, (n, d)) in b.iter().zip(expect) {
            assert_eq!(got.0, n);
            assert_eq!(got.1, d);
        }
    }

    #[test]
    fn ln_gamma_real_agrees_with_mpfr() {
        for x in [0.3, 1.0, 2.5, 7.25, 40.0] {
            let z = CValue::from_f64(x, 0.0, 128);
            let g = ln_gamma(&z).unwrap();
            let reference = Float::with_val(128, x).ln_gamma();
            let diff = (Float::with_val(128, &g.re - &reference)).to_f64().abs();
            assert!(diff <= g.err_bound + 1e-35, "x={x} diff={diff:e}");
            assert!(g.err_bound < 1e-30);
        }
    }

    #[test]
    fn ln_gamma_satisfies_recurrence() {
        let z = CValue::from_f64(0.25, 7.0, 192);
        let one = CValue::one(192);
        let lhs = ln_gamma(&(&z + &one)).unwrap();
        let rhs = &ln_gamma(&z).unwrap() + &z.ln().unwrap();
        let d = (&lhs - &rhs).exp();
        assert!((d.to_c64() - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-40);
    }

    #[test]
    fn gamma_poles_rejected() {
        assert!(ln_gamma(&CValue::from_f64(-3.0, 0.0, 64)).is_err());
        assert!(ln_gamma(&CValue::from_f64(0.0, 0.0, 64)).is_err());
    }
}
