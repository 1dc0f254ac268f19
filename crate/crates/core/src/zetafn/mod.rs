//! Riemann zeta, its derivative and reciprocal, the functional-equation factor,
//! Hardy's Z-function and related quantities at arbitrary precision.

pub mod fast;

use crate::error::{Error, Result};
use crate::powers::mp_powers;
use crate::precision::{float, mag, pi, unit, CValue, PrecisionContext, RValue};
use crate::quadrature::{integrate, QuadOptions};
use crate::special::{bernoulli_even, ln_gamma};
use num_complex::Complex64;
use rug::Float;

pub const BOUNDARY_CONSTANT: f64 = 0.034666;
pub const BOUNDARY_FLOOR: f64 = 705.0;
pub const BOUNDARY_SCALE: f64 = 47.886;
pub const DEFAULT_C1: f64 = 1.0 / 500.0;

/// Runs `eval` at increasing precision until the relative error target holds.
pub(crate) fn refine<F>(ctx: &PrecisionContext, eval: F) -> Result<CValue>
where
    F: Fn(u32) -> Result<CValue>,
{
    let mut bits = ctx.working_bits;
    let mut achieved = f64::INFINITY;
    for _ in 0..=ctx.max_retries {
        let v = eval(bits)?;
        let m = v.abs_f64();
        achieved = if m > 0.0 { v.err_bound / m } else { f64::INFINITY };
        if achieved <= ctx.target_rel_err {
            return Ok(v.round_to(ctx.working_bits));
        }
        bits *= 2;
    }
    Err(Error::PrecisionExhausted { retries: ctx.max_retries, achieved, target: ctx.target_rel_err })
}

/// zeta(s) for `order` 0 or zeta'(s) for `order` 1.
pub fn zeta_em(s: &CValue, order: u8, ctx: &PrecisionContext) -> Result<CValue> {
    if order > 1 {
        return Err(Error::Domain(format!("derivative order {order} not supported")));
    }
    refine(ctx, |bits| zeta_em_at(s, order, bits))
}

fn is_one(s: &CValue) -> bool {
    s.im.is_zero() && s.re == 1
}

/// One Euler-Maclaurin evaluation at a fixed precision, without the
/// relative-error retry loop.
pub fn zeta_em_at(s: &CValue, order: u8, bits: u32) -> Result<CValue> {
    if is_one(s) {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    let s = s.round_to(bits);
    let t = s.im.to_f64().abs();
    let mut cutoff = ((t / 2.0).ceil() as usize).max(bits as usize).max(8);
    loop {
        if let Some(v) = em_sum(&s, order, cutoff, bits)? {
            return Ok(v);
        }
        cutoff *= 2;
        if cutoff > 1 << 24 {
            return Err(Error::NonConvergence("Euler-Maclaurin cutoff grew beyond 2^24".into()));
        }
    }
}

fn em_sum(s: &CValue, order: u8, cutoff: usize, bits: u32) -> Result<Option<CValue>> {
    let pw = mp_powers(s, cutoff - 1, false, order == 1);
    let mut re = Float::new(bits);
    let mut im = Float::new(bits);
    let mut abs_sum = 0.0;
    let mut sens = 0.0;
    for k in 1..cutoff {
        let lk = (k as f64).ln();
        let m = pw.re[k].to_f64().hypot(pw.im(k).map_or(0.0, Float::to_f64));
        if order == 0 {
            re += &pw.re[k];
            if let Some(x) = pw.im(k) {
                im += x;
            }
            abs_sum += m;
            sens += m * lk;
        } else {
            re -= Float::with_val(bits, &pw.ln[k] * &pw.re[k]);
            if let Some(x) = pw.im(k) {
                im -= Float::with_val(bits, &pw.ln[k] * x);
            }
            abs_sum += m * lk;
            sens += m * lk * lk;
        }
    }
    let main_err = abs_sum * (pw.rel_err + cutoff as f64 * unit(bits)) + s.err_bound * sens;
    let mut total = CValue::new(re, im, main_err);

    let nf = float(bits, cutoff as f64);
    let ln_n = Float::with_val(bits, nf.ln_ref());
    let one = CValue::one(bits);
    let n_neg_s = (-s).exp_with_log_base(&ln_n);
    let n1s = n_neg_s.scale(&nf);
    let sm1 = s - &one;
    let lead = n1s.checked_div(&sm1)?;
    let half_n = n_neg_s.scale_f64(0.5);
    let tail = if order == 0 {
        &lead + &half_n
    } else {
        let a = lead.scale(&ln_n);
        let b = lead.checked_div(&sm1)?;
        let c = half_n.scale(&ln_n);
        -&(&(&a + &b) + &c)
    };
    total = &total + &tail;

    let max_depth = bits as usize + 60;
    let bern = bernoulli_even(max_depth, bits);
    let inv_n2 = Float::with_val(bits, 1) / Float::with_val(bits, nf.square_ref());
    let mut p = s.clone();
    let mut dp = one.clone();
    let mut npow = n_neg_s.scale(&Float::with_val(bits, 1 / &nf));
    let mut fact = Float::with_val(bits, 2);
    let mut prev = f64::INFINITY;
    let threshold = (4.0 - f64::from(bits)).exp2();
    let sigma = s.re.to_f64();
    for k in 1..=max_depth {
        let coef = Float::with_val(bits, &bern[k - 1] / &fact);
        let base = (&p * &npow).scale(&coef);
        let term = if order == 0 {
            base.clone()
        } else {
            let lhs = (&dp * &npow).scale(&coef);
            &lhs - &base.scale(&ln_n)
        };
        let tm = term.abs_f64();
        let eff = sigma + (2 * k) as f64 - 1.0;
        if eff > 0.0 {
            let factor = Complex64::new(sigma + (2 * k) as f64 - 1.0, s.im.to_f64()).norm() / eff;
            let bound = if order == 0 { factor * tm } else { 2.0 * factor * (tm + base.abs_f64()) };
            if bound <= threshold * total.abs_f64().max(1.0) {
                return Ok(Some(total.with_err(bound)));
            }
        }
        if k > 2 && tm > prev {
            return Ok(None);
        }
        prev = tm;
        total = &total + &term;
        let a = s + &CValue::from_f64((2 * k - 1) as f64, 0.0, bits);
        let b = s + &CValue::from_f64((2 * k) as f64, 0.0, bits);
        let q = &a * &b;
        let dq = &a + &b;
        dp = &(&dp * &q) + &(&p * &dq);
        p = &p * &q;
        npow = npow.scale(&inv_n2);
        fact *= ((2 * k + 1) * (2 * k + 2)) as u32;
    }
    Ok(None)
}

/// 1/zeta(s).
pub fn inv_zeta(s: &CValue, ctx: &PrecisionContext) -> Result<CValue> {
    let z = zeta_em(s, 0, ctx)?;
    if z.abs_f64() <= 4.0 * z.err_bound {
        return Err(Error::NearZero(format!("|zeta| = {:e} within 4x its error bound", z.abs_f64())));
    }
    z.recip()
}

/// chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s), so that zeta(s) = chi(s) zeta(1-s).
pub fn chi_factor(s: &CValue, ctx: &PrecisionContext) -> Result<CValue> {
    refine(ctx, |bits| chi_at(s, bits))
}

pub fn chi_at(s: &CValue, bits: u32) -> Result<CValue> {
    let s = s.round_to(bits);
    if s.im.is_zero() && s.re >= 1 && s.re.is_integer() {
        let k = s.re.to_f64() as u32;
        if k % 2 == 1 {
            return Err(Error::Pole(format!("chi at s = {k}")));
        }
        // Limit at even k: (-1)^(k/2) 2^(k-1) pi^k / (k-1)!
        use rug::ops::Pow;
        let mut v = Float::with_val(bits, pi(bits).pow(k));
        v *= Float::with_val(bits, Float::u_pow_u(2, k - 1));
        v /= Float::with_val(bits, Float::factorial(k - 1));
        if (k / 2) % 2 == 1 {
            v = -v;
        }
        let e = mag(&v) * 8.0 * unit(bits);
        return Ok(CValue::real(v).with_err(e));
    }
    let one = CValue::one(bits);
    let ln2 = Float::with_val(bits, Float::ln_u(2));
    let lnpi = Float::with_val(bits, pi(bits).ln_ref());
    let a = s.scale(&ln2);
    let b = (&s - &one).scale(&lnpi);
    let g = ln_gamma(&(&one - &s))?;
    let w = s.scale(&Float::with_val(bits, pi(bits) / 2u32));
    let ls = ln_sin(&w)?;
    let log_chi = &(&(&a + &b) + &g) + &ls;
    Ok(log_chi.exp())
}

/// A logarithm of sin(w), stable for large |Im w|.
fn ln_sin(w: &CValue) -> Result<CValue> {
    let bits = w.prec();
    let y = w.im.to_f64();
    if y.abs() < 1.0 {
        return w.sin().ln();
    }
    let one = CValue::one(bits);
    let ln2 = Float::with_val(bits, Float::ln_u(2));
    let half_pi = Float::with_val(bits, pi(bits) / 2u32);
    let iw = w.mul_i();
    if y > 0.0 {
        let e = iw.scale_f64(2.0).exp();
        let rest = (&one - &e).ln()?;
        let base = CValue::new(-ln2, half_pi, 0.0);
        Ok(&(&base - &iw) + &rest)
    } else {
        let e = iw.scale_f64(-2.0).exp();
        let rest = (&one - &e).ln()?;
        let base = CValue::new(-ln2, -half_pi, 0.0);
        Ok(&(&base + &iw) + &rest)
    }
}

/// Symmetric approximate functional equation with x = y = sqrt(|t|/2 pi).
/// The error bound includes the truncation envelope with constant 10.
pub fn afe_zeta(s: &CValue, ctx: &PrecisionContext) -> Result<CValue> {
    let sigma = s.re.to_f64();
    let t = s.im.to_f64().abs();
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::Domain(format!("approximate functional equation needs 0 <= sigma <= 1, got {sigma}")));
    }
    if t < 2.0 * std::f64::consts::PI {
        return Err(Error::Domain(format!("approximate functional equation needs |t| >= 2 pi, got {t}")));
    }
    let bits = ctx.working_bits;
    let x = (t / (2.0 * std::f64::consts::PI)).sqrt();
    let terms = x.floor() as usize;
    let s = s.round_to(bits);
    let reflected = &CValue::one(bits) - &s;
    let first = dirichlet_sum(&s, terms);
    let second = dirichlet_sum(&reflected, terms);
    let chi = chi_factor(&s, ctx)?;
    let value = &first + &(&chi * &second);
    let envelope = 10.0 * (x.powf(-sigma) + t.powf(0.5 - sigma) * x.powf(sigma - 1.0));
    Ok(value.with_err(envelope))
}

fn dirichlet_sum(s: &CValue, terms: usize) -> CValue {
    let bits = s.prec();
    let pw = mp_powers(s, terms, false, false);
    let mut re = Float::new(bits);
    let mut im = Float::new(bits);
    let mut abs_sum = 0.0;
    for k in 1..=terms {
        re += &pw.re[k];
        if let Some(x) = pw.im(k) {
            im += x;
        }
        abs_sum += pw.re[k].to_f64().hypot(pw.im(k).map_or(0.0, Float::to_f64));
    }
    CValue::new(re, im, abs_sum * (pw.rel_err + terms as f64 * unit(bits)))
}

/// Hardy's Z(t) = e^{i theta(t)} zeta(1/2 + it).
pub fn hardy_z(t: f64, ctx: &PrecisionContext) -> Result<RValue> {
    hardy_z_at(&float(ctx.working_bits, t), ctx.working_bits)
}

pub fn hardy_z_at(t: &Float, bits: u32) -> Result<RValue> {
    if *t < 0 {
        return Err(Error::Domain("hardy_z needs t >= 0".into()));
    }
    let s = CValue::new(float(bits, 0.5), Float::with_val(bits, t), 0.0);
    let z = zeta_em_at(&s, 0, bits)?;
    let g = ln_gamma(&CValue::new(float(bits, 0.25), Float::with_val(bits, t / 2u32), 0.0))?;
    let lnpi = Float::with_val(bits, pi(bits).ln_ref());
    let theta = Float::with_val(bits, &g.im - Float::with_val(bits, t * &lnpi) / 2u32);
    let theta_err = g.err_bound + 4.0 * unit(bits) * (mag(&theta) + 1.0);
    let rot = CValue::new(Float::new(bits), theta, theta_err).exp();
    let zz = &rot * &z;
    let slack = 4.0 * zz.err_bound + 16.0 * unit(bits) * zz.abs_f64();
    if mag(&zz.im) > slack {
        return Err(Error::PrecisionExhausted { retries: 0, achieved: mag(&zz.im), target: slack });
    }
    Ok(RValue::new(zz.re, zz.err_bound + mag(&zz.im)))
}

/// 1 - 0.034666 / log(max(|t|, 705) / 47.886).
pub fn zero_free_boundary(t: f64) -> f64 {
    1.0 - BOUNDARY_CONSTANT / (t.abs().max(BOUNDARY_FLOOR) / BOUNDARY_SCALE).ln()
}

/// The normalised form 1 - c1 / log(|t| + 2) used after the boundary is
/// simplified; `c1` defaults to [`DEFAULT_C1`].
pub fn zero_free_boundary_normalized(t: f64, c1: f64) -> f64 {
    1.0 - c1 / (t.abs() + 2.0).ln()
}

/// Integral of |zeta(sigma + it)|^2 over [t_lo, t_hi].
///
/// The quadrature tolerance is the context target, floored at 1e-12 because
/// the Gauss-Legendre nodes are double precision.
pub fn second_moment(sigma: f64, t_lo: f64, t_hi: f64, ctx: &PrecisionContext) -> Result<RValue> {
    if sigma <= 0.5 {
        return Err(Error::Domain(format!("second moment needs sigma > 1/2, got {sigma}")));
    }
    if t_lo < 0.0 || t_hi < t_lo || !t_hi.is_finite() {
        return Err(Error::Domain(format!("bad interval [{t_lo}, {t_hi}]")));
    }
    let bits = ctx.working_bits;
    if t_hi == t_lo {
        return Ok(RValue::new(Float::new(bits), 0.0));
    }
    let pieces = ((t_hi - t_lo) / 4.0).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces).map(|k| t_lo + (t_hi - t_lo) * k as f64 / pieces as f64).collect();
    let rel_tol = ctx.target_rel_err.max(1e-12);
    let f = |t: f64| -> Result<Complex64> {
        let z = zeta_em_at(&CValue::from_f64(sigma, t, bits), 0, bits)?;
        let m = z.abs_f64();
        Ok(Complex64::new(m * m, 0.0))
    };
    let opts = QuadOptions { abs_tol: 0.0, rel_tol, max_panels: 20_000 };
    let r = integrate(&f, &breaks, &opts)?;
    Ok(RValue::new(float(bits, r.value.re), r.error + 4e-16 * r.value.re.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(bits: u32) -> PrecisionContext {
        PrecisionContext::new(bits)
    }

    #[test]
    fn basel_and_zero() {
        let z = zeta_em(&CValue::from_f64(2.0, 0.0, 128), 0, &ctx(128)).unwrap();
        let exact = Float::with_val(128, pi(128).square_ref()) / 6u32;
        let diff = Float::with_val(128, &z.re - &exact).to_f64().abs();
        assert!(diff <= z.err_bound.max(1e-36));
        assert!(diff < 1e-30);
        let z0 = zeta_em(&CValue::from_f64(0.0, 0.0, 128), 0, &ctx(128)).unwrap();
        assert!((z0.re.to_f64() + 0.5).abs() < 1e-30);
    }

    #[test]
    fn pole_is_an_error() {
        assert!(matches!(zeta_em(&CValue::one(64), 0, &ctx(64)), Err(Error::Pole(_))));
        assert!(matches!(chi_factor(&CValue::one(64), &ctx(64)), Err(Error::Pole(_))));
    }

    #[test]
    fn derivative_matches_known_value() {
        // zeta'(0) = -ln(2 pi)/2
        let d = zeta_em(&CValue::from_f64(0.0, 0.0, 128), 1, &ctx(128)).unwrap();
        let exact = -(2.0 * std::f64::consts::PI).ln() / 2.0;
        assert!((d.re.to_f64() - exact).abs() < 1e-15);
        // derivative against a symmetric difference at modest height
        let s = CValue::from_f64(0.7, 21.0, 192);
        let d = zeta_em(&s, 1, &ctx(192)).unwrap();
        let h = 1e-20;
        let zp = zeta_em(&(&s + &CValue::from_f64(h, 0.0, 192)), 0, &ctx(192)).unwrap();
        let zm = zeta_em(&(&s - &CValue::from_f64(h, 0.0, 192)), 0, &ctx(192)).unwrap();
        let fd = (&zp - &zm).scale(&(Float::with_val(192, 0.5) / Float::with_val(192, h)));
        assert!((&fd - &d).abs_f64() < 1e-30, "{:?} {:?}", fd.to_c64(), d.to_c64());
    }

    #[test]
    fn chi_on_critical_line_and_even_integers() {
        let c = chi_factor(&CValue::from_f64(0.5, 20.0, 128), &ctx(128)).unwrap();
        assert!((c.abs_f64() - 1.0).abs() < 1e-25);
        let half = chi_factor(&CValue::from_f64(0.5, 0.0, 128), &ctx(128)).unwrap();
        assert!((half.re.to_f64() - 1.0).abs() < 1e-25);
        let two = chi_factor(&CValue::from_f64(2.0, 0.0, 128), &ctx(128)).unwrap();
        assert!((two.re.to_f64() + 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
        let near = chi_factor(&CValue::from_f64(2.0 + 1e-12, 0.0, 128), &ctx(128)).unwrap();
        assert!((near.re.to_f64() - two.re.to_f64()).abs() < 1e-9);
        let high = chi_factor(&CValue::from_f64(0.3, -900.0, 128), &ctx(128)).unwrap();
        let expect = (900.0 / (2.0 * std::f64::consts::PI)).powf(0.2);
        assert!((high.abs_f64() / expect - 1.0).abs() < 1e-3);
    }

    #[test]
    fn hardy_z_at_origin() {
        let z = hardy_z(0.0, &ctx(128)).unwrap();
        assert!((z.to_f64() + 1.4603545088095868).abs() < 1e-14);
    }

    #[test]
    fn boundary_values() {
        let b0 = zero_free_boundary(0.0);
        assert_eq!(b0, 1.0 - 0.034666 / (705.0f64 / 47.886).ln());
        assert_eq!(zero_free_boundary(705.0), b0);
        assert!(zero_free_boundary(1e6) > b0);
    }
}
