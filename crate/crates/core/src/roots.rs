//! Real roots of the mollifier and critical-line zeros of zeta.

use crate::dirichlet::m_v;
use crate::error::{Error, Result};
use crate::precision::{float, CValue, PrecisionContext};
use crate::sieve::MobiusTable;
use crate::zetafn::hardy_z_at;
use rug::Float;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootStatus {
    Found,
    NoSignChange,
}

#[derive(Clone, Debug)]
pub struct RootResult {
    pub value: Float,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub within_stated_bound: bool,
    pub status: RootStatus,
    /// Number of sign changes seen by the scan (1 when the root looks unique).
    pub sign_changes: usize,
    /// Scanned (sigma, value) pairs, kept when no sign change was found.
    pub scan: Vec<(f64, f64)>,
}

const SCAN_STEPS: usize = 128;

fn mollifier_at(sigma: &Float, length: usize, table: &MobiusTable, ctx: &PrecisionContext) -> Result<(Float, f64)> {
    let v = m_v(&CValue::real(sigma.clone()), length, table, ctx)?;
    Ok((v.re, v.err_bound))
}

/// Scans sigma -> M_V(sigma) on [1 - R, 1 + R] and bisects the sign change
/// closest to 1.
pub fn find_mollifier_root(
    length: usize,
    radius: f64,
    table: &MobiusTable,
    ctx: &PrecisionContext,
) -> Result<RootResult> {
    find_mollifier_root_with_bound(length, radius, radius, table, ctx)
}

/// As [`find_mollifier_root`], flagging whether the root lies within
/// `stated_radius` of 1 even when a wider search radius was used.
pub fn find_mollifier_root_with_bound(
    length: usize,
    radius: f64,
    stated_radius: f64,
    table: &MobiusTable,
    ctx: &PrecisionContext,
) -> Result<RootResult> {
    if length < 2 {
        return Err(Error::Domain("mollifier root search needs V >= 2".into()));
    }
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::Domain(format!("bracket radius {radius} outside (0, 1]")));
    }
    if length > table.limit() {
        return Err(Error::Domain(format!("V={length} exceeds the Moebius table limit {}", table.limit())));
    }
    let bits = ctx.working_bits;
    let step = 2.0 * radius / SCAN_STEPS as f64;
    let mut scan = Vec::with_capacity(SCAN_STEPS + 1);
    let mut values = Vec::with_capacity(SCAN_STEPS + 1);
    for k in 0..=SCAN_STEPS {
        let sigma = float(bits, 1.0 - radius + step * k as f64);
        let (v, _) = mollifier_at(&sigma, length, table, ctx)?;
        scan.push((sigma.to_f64(), v.to_f64()));
        values.push((sigma, v));
    }
    let mut changes = Vec::new();
    for k in 0..SCAN_STEPS {
        let (a, b) = (&values[k].1, &values[k + 1].1);
        if a.is_zero() || (a.is_sign_negative() != b.is_sign_negative() && !b.is_zero()) {
            changes.push(k);
        }
    }
    if values[SCAN_STEPS].1.is_zero() {
        changes.push(SCAN_STEPS);
    }
    if changes.is_empty() {
        return Ok(RootResult {
            value: float(bits, f64::NAN),
            residual: f64::INFINITY,
            bracket: (1.0 - radius, 1.0 + radius),
            within_stated_bound: false,
            status: RootStatus::NoSignChange,
            sign_changes: 0,
            scan,
        });
    }
    let pick = *changes
        .iter()
        .min_by(|&&x, &&y| {
            let dx = (scan[x].0 + step / 2.0 - 1.0).abs();
            let dy = (scan[y].0 + step / 2.0 - 1.0).abs();
            dx.total_cmp(&dy)
        })
        .expect("non-empty");
    let tol = (-(f64::from(bits) / 2.0)).exp2();
    let (value, lo, hi) = if values[pick].1.is_zero() {
        let x = values[pick].0.clone();
        (x.clone(), x.clone(), x)
    } else {
        let mut lo = values[pick].0.clone();
        let mut hi = values[pick + 1].0.clone();
        let lo_neg = values[pick].1.is_sign_negative();
        let mut mid = Float::with_val(bits, &lo + &hi) / 2u32;
        for _ in 0..(2 * bits) {
            mid = Float::with_val(bits, &lo + &hi) / 2u32;
            if mid == lo || mid == hi {
                break;
            }
            let (fm, _) = mollifier_at(&mid, length, table, ctx)?;
            if fm.is_zero() || fm.to_f64().abs() <= tol {
                break;
            }
            if fm.is_sign_negative() == lo_neg {
                lo = mid.clone();
            } else {
                hi = mid.clone();
            }
        }
        (mid, lo, hi)
    };
    let (fv, err) = mollifier_at(&value, length, table, ctx)?;
    let dist = (value.to_f64() - 1.0).abs();
    Ok(RootResult {
        residual: fv.to_f64().abs() + err,
        bracket: (lo.to_f64(), hi.to_f64()),
        within_stated_bound: dist <= stated_radius,
        status: RootStatus::Found,
        sign_changes: changes.len(),
        value,
        scan: Vec::new(),
    })
}

/// Bisects Hardy's Z on [t_lo, t_hi] to |Z| <= min(1e-10, 2^{-bits/2}).
pub fn find_zeta_zero(t_lo: f64, t_hi: f64, ctx: &PrecisionContext) -> Result<RootResult> {
    let bits = ctx.working_bits;
    if !(t_hi > t_lo && t_lo >= 0.0) {
        return Err(Error::Domain(format!("bad bracket [{t_lo}, {t_hi}]")));
    }
    let mut lo = float(bits, t_lo);
    let mut hi = float(bits, t_hi);
    let zl = hardy_z_at(&lo, bits)?;
    let zh = hardy_z_at(&hi, bits)?;
    if zl.value.is_sign_negative() == zh.value.is_sign_negative() || zl.value.is_zero() || zh.value.is_zero() {
        if zl.value.is_zero() || zh.value.is_zero() {
            let v = if zl.value.is_zero() { lo } else { hi };
            return Ok(RootResult {
                value: v,
                residual: 0.0,
                bracket: (t_lo, t_hi),
                within_stated_bound: true,
                status: RootStatus::Found,
                sign_changes: 1,
                scan: Vec::new(),
            });
        }
        return Err(Error::NoSignChange(t_lo, t_hi));
    }
    let lo_neg = zl.value.is_sign_negative();
    let tol = 1e-10f64.min((-(f64::from(bits) / 2.0)).exp2());
    let mut best = Float::with_val(bits, &lo + &hi) / 2u32;
    let mut residual = f64::INFINITY;
    for _ in 0..(2 * bits) {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let z = hardy_z_at(&mid, bits)?;
        best = mid.clone();
        residual = z.value.to_f64().abs() + z.err_bound;
        if z.value.to_f64().abs() <= tol || z.value.to_f64().abs() <= z.err_bound {
            break;
        }
        if z.value.is_sign_negative() == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RootResult {
        value: best,
        residual,
        bracket: (lo.to_f64(), hi.to_f64()),
        within_stated_bound: true,
        status: RootStatus::Found,
        sign_changes: 1,
        scan: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::mobius_table;

    #[test]
    fn two_term_mollifier_has_no_root_near_one() {
        let t = mobius_table(10).unwrap();
        let r = find_mollifier_root(2, 0.1, &t, &PrecisionContext::new(64)).unwrap();
        assert_eq!(r.status, RootStatus::NoSignChange);
        assert_eq!(r.scan.len(), SCAN_STEPS + 1);
    }

    #[test]
    fn three_term_root() {
        let t = mobius_table(10).unwrap();
        let ctx = PrecisionContext::new(128);
        let r = find_mollifier_root(3, 1.0, &t, &ctx).unwrap();
        assert_eq!(r.status, RootStatus::Found);
        let x = r.value.to_f64();
        assert!(x < 1.0);
        assert!((1.0 - 2f64.powf(-x) - 3f64.powf(-x)).abs() < 1e-15);
        assert!(r.residual <= 2f64.powi(-64));
    }

    #[test]
    fn first_zeta_zeros() {
        let ctx = PrecisionContext::new(128);
        let g1 = find_zeta_zero(14.0, 14.2, &ctx).unwrap();
        assert!((g1.value.to_f64() - 14.134725141734693).abs() < 1e-12);
        assert!(g1.residual <= 1e-10);
        let g2 = find_zeta_zero(20.9, 21.1, &ctx).unwrap();
        assert!((g2.value.to_f64() - 21.022039638771555).abs() < 1e-12);
        assert!(matches!(find_zeta_zero(14.2, 14.3, &ctx), Err(Error::NoSignChange(..))));
    }
}
