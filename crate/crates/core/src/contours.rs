//! Perron-formula quadrature and argument-principle winding numbers.

use crate::error::{Error, Result};
use crate::precision::{CValue, PrecisionContext};
use crate::quadrature::{integrate, QuadOptions, QuadResult};
use crate::sieve::MobiusTable;
use crate::zetafn::fast;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub const ENVELOPE_CONSTANT: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourSpec {
    VerticalSegment { c: f64, half_height: f64 },
    Rectangle { left: f64, right: f64, half_height: f64 },
    Circle { center_re: f64, center_im: f64, radius: f64 },
}

impl ContourSpec {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("circle radius must be positive, got {radius}")));
        }
        Ok(ContourSpec::Circle { center_re: center.re, center_im: center.im, radius })
    }

    pub fn vertical(c: f64, half_height: f64) -> Result<Self> {
        if !(half_height >= 2.0) {
            return Err(Error::Domain(format!("Perron half-height must be at least 2, got {half_height}")));
        }
        Ok(ContourSpec::VerticalSegment { c, half_height })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindingTarget {
    InvZeta,
    Mollifier,
}

/// c = max(1 - sigma, 0) + 1/log V.
pub fn default_abscissa(sigma: f64, length: usize) -> f64 {
    (1.0 - sigma).max(0.0) + 1.0 / (length as f64).ln()
}

/// 10 (V^c log V / W + log V / V^sigma).
pub fn perron_envelope(sigma: f64, length: usize, c: f64, half_height: f64) -> f64 {
    let v = length as f64;
    let lv = v.ln();
    ENVELOPE_CONSTANT * (v.powf(c) * lv / half_height + lv / v.powf(sigma))
}

fn perron_integrand(s: Complex64, ln_v: f64, z: Complex64) -> Result<Complex64> {
    let zeta = fast::zeta(s + z)?;
    if zeta.norm() < 1e-12 {
        return Err(Error::NearZero(format!("zeta({}) vanishes on the Perron line", s + z)));
    }
    Ok((z * ln_v).exp() / (z * zeta))
}

fn line_breaks(lo: f64, hi: f64, scale: f64) -> Vec<f64> {
    // Geometric refinement toward y = 0, then panels no wider than 4.
    let mut pts = vec![lo, hi];
    if lo < 0.0 && hi > 0.0 {
        pts.push(0.0);
        let mut x = scale.max(1e-3);
        while x < hi.max(-lo) {
            if x < hi {
                pts.push(x);
            }
            if -x > lo {
                pts.push(-x);
            }
            x *= 2.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let pieces = ((w[1] - w[0]) / 4.0).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / pieces as f64);
        }
    }
    out
}

fn perron_options() -> QuadOptions {
    QuadOptions { abs_tol: 1e-11, rel_tol: 1e-10, max_panels: 400_000 }
}

/// (1/2 pi i) times the integral of V^z / (z zeta(s+z)) up the segment
/// Re z = c, |Im z| <= W.  The error bound is the quadrature estimate.
pub fn perron_mv(s: &CValue, length: usize, spec: &ContourSpec, ctx: &PrecisionContext) -> Result<CValue> {
    let (c, w) = match *spec {
        ContourSpec::VerticalSegment { c, half_height } => (c, half_height),
        _ => return Err(Error::Domain("Perron integral needs a vertical segment".into())),
    };
    let sc = s.to_c64();
    if !(c > (1.0 - sc.re).max(0.0)) {
        return Err(Error::Domain(format!("abscissa c={c} must exceed max(1 - sigma, 0)")));
    }
    if w < 2.0 {
        return Err(Error::Domain("Perron half-height must be at least 2".into()));
    }
    if length < 2 {
        return Err(Error::Domain("Perron integral needs V >= 2".into()));
    }
    let ln_v = (length as f64).ln();
    let f = |y: f64| -> Result<Complex64> {
        let z = Complex64::new(c, y);
        Ok(perron_integrand(sc, ln_v, z)? / (2.0 * PI))
    };
    let r = integrate(&f, &line_breaks(-w, w, c), &perron_options())?;
    Ok(quad_value(&r, ctx))
}

fn quad_value(r: &QuadResult, ctx: &PrecisionContext) -> CValue {
    CValue::from_c64(r.value, ctx.working_bits).with_err(r.error + 1e-13 * r.value.norm())
}

/// Pieces of the shifted Perron contour on the rectangle [left, c] x [-W, W].
#[derive(Clone, Debug)]
pub struct RectangleShift {
    pub vertical: CValue,
    pub residue: CValue,
    pub left: CValue,
    pub top: CValue,
    pub bottom: CValue,
    pub recombined: CValue,
}

/// Moves the Perron segment from Re z = c to Re z = left < 0.  The only pole
/// inside is z = 0 with residue 1/zeta(s), so the closed contour gives
/// vertical = residue + left + top - bottom.
pub fn rectangle_shift(
    s: &CValue,
    length: usize,
    c: f64,
    left: f64,
    half_height: f64,
    ctx: &PrecisionContext,
) -> Result<RectangleShift> {
    let sc = s.to_c64();
    if !(left < 0.0 && c > 0.0) {
        return Err(Error::Domain("rectangle must straddle z = 0".into()));
    }
    if sc.re + left <= 1.0 {
        return Err(Error::Domain("left edge must stay right of Re(s+z) = 1 to avoid zeta's pole and zeros".into()));
    }
    let vertical = perron_mv(s, length, &ContourSpec::vertical(c, half_height)?, ctx)?;
    let ln_v = (length as f64).ln();
    let opts = perron_options();
    let lf = |y: f64| -> Result<Complex64> { Ok(perron_integrand(sc, ln_v, Complex64::new(left, y))? / (2.0 * PI)) };
    let left_int = integrate(&lf, &line_breaks(-half_height, half_height, left.abs()), &opts)?;
    let horizontal = |sign: f64| {
        let h = move |x: f64| -> Result<Complex64> {
            let z = Complex64::new(x, sign * half_height);
            Ok(perron_integrand(sc, ln_v, z)? / Complex64::new(0.0, 2.0 * PI))
        };
        let pieces = 16;
        let breaks: Vec<f64> = (0..=pieces).map(|k| left + (c - left) * k as f64 / pieces as f64).collect();
        integrate(&h, &breaks, &opts)
    };
    let top = horizontal(1.0)?;
    let bottom = horizontal(-1.0)?;
    let residue = crate::zetafn::inv_zeta(s, ctx)?;
    let left = quad_value(&left_int, ctx);
    let top = quad_value(&top, ctx);
    let bottom = quad_value(&bottom, ctx);
    let recombined = &(&(&residue + &left) + &top) - &bottom;
    Ok(RectangleShift { vertical, residue, left, top, bottom, recombined })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindingResult {
    pub count: i64,
    pub raw_re: f64,
    pub raw_im: f64,
    pub nodes: usize,
}

struct Sampler<'a> {
    target: WindingTarget,
    center: Complex64,
    radius: f64,
    mu: Option<&'a [i8]>,
    length: usize,
}

impl<'a> Sampler<'a> {
    fn new(target: WindingTarget, circle: &ContourSpec, length: usize, table: Option<&'a MobiusTable>) -> Result<Self> {
        let (center, radius) = match *circle {
            ContourSpec::Circle { center_re, center_im, radius } => (Complex64::new(center_re, center_im), radius),
            _ => return Err(Error::Domain("winding numbers are taken on circles".into())),
        };
        let mu = match target {
            WindingTarget::Mollifier => {
                let t = table.ok_or_else(|| Error::Domain("mollifier winding needs a Moebius table".into()))?;
                if length > t.limit() {
                    return Err(Error::Domain(format!("V={length} exceeds the Moebius table limit")));
                }
                Some(t.mu_slice())
            }
            WindingTarget::InvZeta => None,
        };
        Ok(Self { target, center, radius, mu, length })
    }

    // f'/f and |f| at z.
    fn log_deriv(&self, z: Complex64) -> Result<(Complex64, f64)> {
        match (self.target, self.mu) {
            (WindingTarget::Mollifier, Some(mu)) => {
                let (m, dm) = fast::mollifier_pair(z, mu, self.length);
                Ok((dm / m, m.norm()))
            }
            _ => {
                let (zeta, dzeta) = fast::zeta_pair(z)?;
                // f = 1/zeta, f'/f = -zeta'/zeta.
                Ok((-dzeta / zeta, 1.0 / zeta.norm()))
            }
        }
    }

    /// Trapezoid sum on `m` nodes; fails when |f| nearly vanishes on the circle.
    fn sum(&self, m: usize) -> Result<Complex64> {
        use rayon::prelude::*;
        let vals: Vec<(Complex64, f64)> = (0..m)
            .into_par_iter()
            .map(|k| {
                let w = Complex64::from_polar(self.radius, 2.0 * PI * k as f64 / m as f64);
                let (ld, size) = self.log_deriv(self.center + w)?;
                Ok((ld * w, size))
            })
            .collect::<Result<Vec<_>>>()?;
        let total: Complex64 = vals.iter().map(|v| v.0).sum::<Complex64>() / m as f64;
        let smallest = vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let typical = vals.iter().map(|v| v.1).sum::<f64>() / m as f64;
        if !(smallest > 1e-10 * typical) {
            return Err(Error::ZeroOnContour(format!("|f| = {smallest:e} on the circle")));
        }
        Ok(total)
    }
}

/// The raw winding sum on a fixed number of nodes, for stability checks.
pub fn winding_sum(
    target: WindingTarget,
    circle: &ContourSpec,
    length: usize,
    table: Option<&MobiusTable>,
    nodes: usize,
) -> Result<Complex64> {
    if nodes < 4 {
        return Err(Error::Domain("winding sum needs at least 4 nodes".into()));
    }
    Sampler::new(target, circle, length, table)?.sum(nodes)
}

/// (1/2 pi i) times the contour integral of f'/f around a circle, for
/// f = 1/zeta or f = M_V.  The integrand runs in double precision: only the
/// nearest integer is wanted, and it must be stable under node doubling.
pub fn winding_number(
    target: WindingTarget,
    circle: &ContourSpec,
    length: usize,
    table: Option<&MobiusTable>,
    _ctx: &PrecisionContext,
) -> Result<WindingResult> {
    let sampler = Sampler::new(target, circle, length, table)?;
    let mut m = 64usize;
    let mut prev = sampler.sum(m)?;
    loop {
        m *= 2;
        if m > 1 << 16 {
            let n = prev.re.round();
            return Err(if (prev.re - n).abs() > 0.1 {
                Error::AmbiguousWinding(prev.re)
            } else {
                Error::NonConvergence("winding quadrature did not settle".into())
            });
        }
        let cur = sampler.sum(m)?;
        if (cur - prev).norm() < 1e-8 {
            let n = cur.re.round();
            if (cur.re - n).abs() > 0.1 || cur.im.abs() > 0.1 {
                return Err(Error::AmbiguousWinding(cur.re));
            }
            return Ok(WindingResult { count: n as i64, raw_re: cur.re, raw_im: cur.im, nodes: m });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_formula() {
        let e = perron_envelope(2.0, 50, 1.0 / 50f64.ln(), 500.0);
        let lv = 50f64.ln();
        let expect = 10.0 * (50f64.powf(1.0 / lv) * lv / 500.0 + lv / 2500.0);
        assert!((e - expect).abs() < 1e-15);
    }

    #[test]
    fn winding_of_reciprocal_zeta() {
        let ctx = PrecisionContext::new(64);
        let around_pole = ContourSpec::circle(Complex64::new(1.0, 0.0), 0.3).unwrap();
        let w = winding_number(WindingTarget::InvZeta, &around_pole, 0, None, &ctx).unwrap();
        assert_eq!(w.count, 1);
        let away = ContourSpec::circle(Complex64::new(3.0, 0.0), 0.3).unwrap();
        assert_eq!(winding_number(WindingTarget::InvZeta, &away, 0, None, &ctx).unwrap().count, 0);
    }
}
