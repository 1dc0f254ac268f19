//! Tables of n^{-s} built multiplicatively from prime powers.
//!
//! Only primes need a transcendental evaluation; every composite costs one
//! complex multiplication.

use crate::precision::{unit, CValue};
use crate::sieve::smallest_prime_factors;
use num_complex::Complex64;
use rug::Float;

pub struct MpPowers {
    pub re: Vec<Float>,
    pub im: Vec<Float>,
    /// ln n when requested, otherwise empty.
    pub ln: Vec<Float>,
    /// Relative rounding error bound shared by every entry.
    pub rel_err: f64,
    pub real: bool,
}

/// n^{-s} for 1 <= n <= n_max.  With `squarefree_only` the entries for
/// non-squarefree n are left at zero.
pub fn mp_powers(s: &CValue, n_max: usize, squarefree_only: bool, with_ln: bool) -> MpPowers {
    let bits = s.prec();
    let spf = smallest_prime_factors(n_max.max(2));
    let real = s.im.is_zero();
    let mut re = vec![Float::new(bits); n_max + 1];
    let mut im = vec![Float::new(bits); if real { 0 } else { n_max + 1 }];
    let mut ln = vec![Float::new(bits); if with_ln { n_max + 1 } else { 0 }];
    if n_max >= 1 {
        re[1] = Float::with_val(bits, 1);
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let m = n / p;
        if squarefree_only && m.is_multiple_of(p) {
            continue;
        }
        if p == n {
            let lp = Float::with_val(bits, Float::ln_u(p as u32));
            let modulus = Float::with_val(bits, &s.re * &lp);
            let modulus = Float::with_val(bits, -modulus).exp();
            if real {
                re[n] = modulus;
            } else {
                let phase = Float::with_val(bits, &s.im * &lp);
                let (sn, cs) = phase.sin_cos(Float::new(bits));
                re[n] = Float::with_val(bits, &modulus * &cs);
                im[n] = Float::with_val(bits, -(modulus * sn));
            }
            if with_ln {
                ln[n] = lp;
            }
        } else {
            if real {
                re[n] = Float::with_val(bits, &re[p] * &re[m]);
            } else {
                let mut a = Float::with_val(bits, &re[p] * &re[m]);
                a -= Float::with_val(bits, &im[p] * &im[m]);
                let mut b = Float::with_val(bits, &re[p] * &im[m]);
                b += Float::with_val(bits, &im[p] * &re[m]);
                re[n] = a;
                im[n] = b;
            }
            if with_ln {
                ln[n] = Float::with_val(bits, &ln[p] + &ln[m]);
            }
        }
    }
    let depth = (n_max.max(2) as f64).log2();
    MpPowers { re, im, ln, rel_err: (8.0 + 8.0 * depth) * unit(bits), real }
}

impl MpPowers {
    pub fn im(&self, n: usize) -> Option<&Float> {
        if self.real {
            None
        } else {
            Some(&self.im[n])
        }
    }
}

/// Double-precision n^{-s} for 1 <= n <= n_max.
pub fn c64_powers(s: Complex64, n_max: usize, squarefree_only: bool) -> Vec<Complex64> {
    let spf = smallest_prime_factors(n_max.max(2));
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if n_max >= 1 {
        out[1] = Complex64::new(1.0, 0.0);
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let m = n / p;
        if squarefree_only && m.is_multiple_of(p) {
            continue;
        }
        out[n] = if p == n { (-s * (p as f64).ln()).exp() } else { out[p] * out[m] };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicative_table_matches_direct_powers() {
        let s = CValue::from_f64(0.7, 13.0, 128);
        let t = mp_powers(&s, 500, false, true);
        for n in [1usize, 2, 12, 97, 360, 499, 500] {
            let direct = (-s.to_c64() * (n as f64).ln()).exp();
            let got = Complex64::new(t.re[n].to_f64(), t.im[n].to_f64());
            assert!((got - direct).norm() < 1e-13, "n={n}");
            if n > 1 {
                assert!((t.ln[n].to_f64() - (n as f64).ln()).abs() < 1e-14);
            }
        }
        let f = c64_powers(s.to_c64(), 500, true);
        assert_eq!(f[12], Complex64::new(0.0, 0.0));
        assert!((f[30] - (-s.to_c64() * 30f64.ln()).exp()).norm() < 1e-14);
    }
}
