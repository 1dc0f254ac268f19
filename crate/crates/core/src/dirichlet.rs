//! Mollifiers M_V, the mollified zeta F_V, the two-sided combination G and
//! its high-order derivatives.

use crate::error::{Error, Result};
use crate::powers::mp_powers;
use crate::precision::{euler_gamma, float, mag, pi, unit, CValue, PrecisionContext};
use crate::sieve::{CoeffTable, MobiusTable};
use crate::special::bernoulli_even;
use crate::zetafn::zeta_em;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Tilde,
}

/// F_V(s) = zeta(s) M_V(s + root - 1).
#[derive(Clone, Debug)]
pub struct MollifierSpec {
    pub length: usize,
    pub root: Float,
    pub variant: Variant,
}

impl MollifierSpec {
    pub fn new(length: usize, root: Float, variant: Variant) -> Result<Self> {
        if length < 1 {
            return Err(Error::Domain("mollifier length must be positive".into()));
        }
        if !root.is_finite() || (root.to_f64() - 1.0).abs() > 1.0 {
            return Err(Error::Domain(format!("mollifier root {} is not within 1 of s = 1", root.to_f64())));
        }
        Ok(Self { length, root, variant })
    }

    /// The coefficient exponent 1 - root.
    pub fn shift(&self) -> Float {
        Float::with_val(self.root.prec(), 1 - &self.root)
    }
}

/// G(s) = U^(s - s0) (F_V(s + iv) + F_V(s - iv)) / 2.
#[derive(Clone, Debug)]
pub struct GSpec {
    pub mollifier: MollifierSpec,
    pub scale: u64,
    pub ordinate: Float,
    pub anchor: Float,
}

impl GSpec {
    pub fn new(mollifier: MollifierSpec, scale: u64, ordinate: Float, anchor: Float) -> Result<Self> {
        if scale < 2 || scale as usize > mollifier.length {
            return Err(Error::Domain(format!("need 2 <= U <= V, got U={scale}, V={}", mollifier.length)));
        }
        if ordinate < 2 {
            return Err(Error::Domain(format!("ordinate v must be at least 2, got {}", ordinate.to_f64())));
        }
        Ok(Self { mollifier, scale, ordinate, anchor })
    }
}

fn dirichlet_poly(s: &CValue, length: usize, table: &MobiusTable, with_derivative: bool) -> (CValue, CValue) {
    let bits = s.prec();
    let pw = mp_powers(s, length, true, with_derivative);
    let mu = table.mu_slice();
    let (mut re, mut im) = (Float::new(bits), Float::new(bits));
    let (mut dre, mut dim) = (Float::new(bits), Float::new(bits));
    let (mut abs_sum, mut sens, mut dsens) = (0.0, 0.0, 0.0);
    for n in 1..=length {
        let m = mu[n];
        if m == 0 {
            continue;
        }
        let mag_n = pw.re[n].to_f64().hypot(pw.im(n).map_or(0.0, Float::to_f64));
        let ln = (n as f64).ln();
        abs_sum += mag_n;
        sens += mag_n * ln;
        dsens += mag_n * ln * ln;
        if m > 0 {
            re += &pw.re[n];
            if let Some(x) = pw.im(n) {
                im += x;
            }
        } else {
            re -= &pw.re[n];
            if let Some(x) = pw.im(n) {
                im -= x;
            }
        }
        if with_derivative {
            let a = Float::with_val(bits, &pw.ln[n] * &pw.re[n]);
            let b = pw.im(n).map(|x| Float::with_val(bits, &pw.ln[n] * x));
            if m > 0 {
                dre -= a;
                if let Some(b) = b {
                    dim -= b;
                }
            } else {
                dre += a;
                if let Some(b) = b {
                    dim += b;
                }
            }
        }
    }
    let round = pw.rel_err + length as f64 * unit(bits);
    let value = CValue::new(re, im, abs_sum * round + s.err_bound * sens);
    let deriv = CValue::new(dre, dim, sens * round + s.err_bound * dsens);
    (value, deriv)
}

/// M_V(s) = sum over n <= V of mu(n) n^{-s}.
pub fn m_v(s: &CValue, length: usize, table: &MobiusTable, ctx: &PrecisionContext) -> Result<CValue> {
    if length > table.limit() {
        return Err(Error::Domain(format!("V={length} exceeds the Moebius table limit {}", table.limit())));
    }
    Ok(dirichlet_poly(&s.round_to(ctx.working_bits), length, table, false).0)
}

/// M_V(s) together with M_V'(s).
pub fn m_v_with_derivative(
    s: &CValue,
    length: usize,
    table: &MobiusTable,
    ctx: &PrecisionContext,
) -> Result<(CValue, CValue)> {
    if length > table.limit() {
        return Err(Error::Domain(format!("V={length} exceeds the Moebius table limit {}", table.limit())));
    }
    Ok(dirichlet_poly(&s.round_to(ctx.working_bits), length, table, true))
}

/// Poisson weight e^{-u} u^j / j!, at the precision of `u`.
pub fn p_weight(j: u32, u: &Float) -> Float {
    let bits = u.prec();
    let ln_fact = Float::with_val(bits, Float::factorial(j)).ln();
    p_weight_with(j, u, &ln_fact)
}

fn p_weight_with(j: u32, u: &Float, ln_fact: &Float) -> Float {
    let bits = u.prec();
    if u.is_zero() {
        return Float::with_val(bits, if j == 0 { 1 } else { 0 });
    }
    if *u > 0 {
        let mut e = Float::with_val(bits, u.ln_ref());
        e *= j;
        e -= u;
        e -= ln_fact;
        e.exp()
    } else {
        let mut p = Float::with_val(bits, u.pow(j));
        p *= Float::with_val(bits, (-u.clone()).exp_ref());
        p / Float::with_val(bits, ln_fact.exp_ref())
    }
}

/// F_V(s) = zeta(s) M_V(s + root - 1), entire when M_V(root) = 0.
pub fn f_v(s: &CValue, spec: &MollifierSpec, table: &MobiusTable, ctx: &PrecisionContext) -> Result<CValue> {
    let bits = ctx.working_bits;
    let s = s.round_to(bits);
    let one = CValue::one(bits);
    let sm1 = &s - &one;
    let half_bits = (-(f64::from(bits) / 2.0)).exp2();
    let near = (10.0 * s.err_bound).max(half_bits);
    if sm1.abs_f64() <= near {
        return f_v_near_one(&sm1, spec, table, ctx);
    }
    let z = zeta_em(&s, 0, ctx)?;
    let shifted = &s - &CValue::real(spec.shift());
    let m = m_v(&shifted, spec.length, table, ctx)?;
    Ok(&z * &m)
}

// zeta(s) ~ 1/(s-1) + gamma_E and M_V(root + h) ~ M_V(root) + h M_V'(root);
// the pole cancels because M_V(root) = 0.
fn f_v_near_one(sm1: &CValue, spec: &MollifierSpec, table: &MobiusTable, ctx: &PrecisionContext) -> Result<CValue> {
    let bits = ctx.working_bits;
    let root = CValue::real(Float::with_val(bits, &spec.root));
    let (m0, m1) = m_v_with_derivative(&root, spec.length, table, ctx)?;
    let tol = (-(f64::from(bits) / 2.0)).exp2();
    if m0.abs_f64() > tol {
        return Err(Error::PrecisionExhausted { retries: 0, achieved: m0.abs_f64(), target: tol });
    }
    let gamma = euler_gamma(bits);
    let value = &m1 + &m0.scale(&gamma);
    let r = spec.root.to_f64();
    let second: f64 =
        (1..=spec.length).filter(|&n| table.mu(n) != 0).map(|n| (n as f64).ln().powi(2) * (n as f64).powf(-r)).sum();
    let h = sm1.abs_f64();
    let trunc = h * (second / 2.0 + 0.6 * m1.abs_f64() + 1.0);
    Ok(value.with_err(trunc))
}

/// G(s) for the given spec.
pub fn g_uv(s: &CValue, g: &GSpec, table: &MobiusTable, ctx: &PrecisionContext) -> Result<CValue> {
    let bits = ctx.working_bits;
    let s = s.round_to(bits);
    let iv = CValue::new(Float::new(bits), Float::with_val(bits, &g.ordinate), 0.0);
    let upper = f_v(&(&s + &iv), &g.mollifier, table, ctx)?;
    let lower = if s.im.is_zero() { upper.conj() } else { f_v(&(&s - &iv), &g.mollifier, table, ctx)? };
    let offset = &s - &CValue::real(Float::with_val(bits, &g.anchor));
    let ln_u = Float::with_val(bits, Float::ln_u(g.scale as u32));
    let factor = offset.exp_with_log_base(&ln_u);
    let mut out = (&factor * &(&upper + &lower)).scale_f64(0.5);
    if s.im.is_zero() {
        out.im = Float::new(bits);
    }
    Ok(out)
}

/// Default Cauchy radius min(0.5, |s-1|/2), floored at 0.05.
pub fn default_cauchy_radius(s: &CValue) -> f64 {
    let d = (s.to_c64() - num_complex::Complex64::new(1.0, 0.0)).norm();
    (d / 2.0).clamp(0.05, 0.5)
}

/// (-z0)^j / j! D^j G(s), summed through the Poisson-weighted coefficient series.
///
/// Terms with n beyond the table limit are summed by Euler-Maclaurin per
/// divisor class instead of being bounded crudely.
pub fn g_deriv_series(
    j: u32,
    s: &CValue,
    g: &GSpec,
    coeffs: &CoeffTable,
    z0: f64,
    ctx: &PrecisionContext,
) -> Result<CValue> {
    let bits = ctx.working_bits;
    let sigma = s.re.to_f64();
    if sigma < 1.05 {
        return Err(Error::Domain(format!("series derivative needs Re(s) >= 1.05, got {sigma}")));
    }
    if coeffs.length() != g.mollifier.length {
        return Err(Error::InconsistentParams("coefficient table and mollifier lengths differ".into()));
    }
    let shift_gap = Float::with_val(bits, coeffs.shift() - g.mollifier.shift()).to_f64().abs();
    if shift_gap > 1e-12 {
        return Err(Error::InconsistentParams(format!("coefficient shift differs from 1 - root by {shift_gap:e}")));
    }
    if coeffs.limit() < g.scale as usize {
        return Err(Error::Domain("coefficient table shorter than U".into()));
    }
    if z0 == 0.0 {
        return Ok(CValue::zero(bits));
    }
    let s = s.round_to(bits);
    let zf = float(bits, z0);
    let ln_u = Float::with_val(bits, Float::ln_u(g.scale as u32));
    let ln_fact = Float::with_val(bits, Float::factorial(j)).ln();
    let iv = CValue::new(Float::new(bits), Float::with_val(bits, &g.ordinate), 0.0);
    let shifted = &s - &CValue::from_f64(z0, 0.0, bits);
    let limit = coeffs.limit();
    let exps = if s.im.is_zero() { vec![&shifted + &iv] } else { vec![&shifted + &iv, &shifted - &iv] };
    let mut main = CValue::zero(bits);
    let mut weights = vec![Float::new(bits); limit + 1];
    let mut weight_mag = vec![0.0f64; limit + 1];
    let mut first = true;
    for e in &exps {
        let pw = mp_powers(e, limit, false, true);
        let (mut re, mut im) = (Float::new(bits), Float::new(bits));
        let mut abs_sum = 0.0;
        for n in 1..=limit {
            if first {
                let mut u = Float::with_val(bits, &pw.ln[n] - &ln_u);
                u *= &zf;
                weights[n] = p_weight_with(j, &u, &ln_fact);
                weight_mag[n] = weights[n].to_f64().abs();
            }
            let c = coeffs.get(n);
            if c.is_zero() || weights[n].is_zero() {
                continue;
            }
            let cw = Float::with_val(bits, c * &weights[n]);
            re += Float::with_val(bits, &cw * &pw.re[n]);
            if let Some(x) = pw.im(n) {
                im += Float::with_val(bits, &cw * x);
            }
            abs_sum += cw.to_f64().abs() * pw.re[n].to_f64().hypot(pw.im(n).map_or(0.0, Float::to_f64));
        }
        first = false;
        let err = abs_sum * (pw.rel_err + 16.0 * unit(bits) + limit as f64 * unit(bits))
            + abs_sum * coeffs.rounding_per_divisor() * 64.0;
        main = &main + &CValue::new(re, im, err);
    }
    if s.im.is_zero() {
        main = CValue::new(Float::with_val(bits, &main.re * 2u32), Float::new(bits), 2.0 * main.err_bound);
    }
    let wplus = &s + &iv;
    let mut tail = series_tail(j, &wplus, g, coeffs, z0, &ln_u, bits)?;
    if s.im.is_zero() {
        tail = CValue::new(Float::with_val(bits, &tail.re * 2u32), Float::new(bits), 2.0 * tail.err_bound);
    } else {
        let wminus = &s - &iv;
        tail = &tail + &series_tail(j, &wminus, g, coeffs, z0, &ln_u, bits)?;
    }
    let offset = &s - &CValue::real(Float::with_val(bits, &g.anchor));
    let pre_main = (&offset - &CValue::from_f64(z0, 0.0, bits)).exp_with_log_base(&ln_u);
    let pre_tail = offset.exp_with_log_base(&ln_u);
    let total = &(&pre_main * &main) + &(&pre_tail * &tail);
    let mut out = total.scale_f64(0.5);
    if s.im.is_zero() {
        out.im = Float::new(bits);
    }
    let _ = weight_mag;
    Ok(out)
}

// Sum over n > limit of c_n n^{-w} (z0 log(n/U))^j / j!, split by divisor
// d <= V and evaluated with Euler-Maclaurin in the cofactor m = n/d.
fn series_tail(j: u32, w: &CValue, g: &GSpec, coeffs: &CoeffTable, z0: f64, ln_u: &Float, bits: u32) -> Result<CValue> {
    let limit = coeffs.limit();
    let length = coeffs.length();
    let mobius = crate::sieve::mobius_table(length)?;
    let one = CValue::one(bits);
    let a = w - &one;
    let jj = j as usize;
    let zf = float(bits, z0);
    let zpow = Float::with_val(bits, (&zf).pow(j));
    let inv_fact: Vec<Float> = (0..=jj).map(|k| Float::with_val(bits, Float::factorial(k as u32)).recip()).collect();
    let depth = 2 * bits as usize;
    let bern = bernoulli_even(depth, bits);
    let mut total = CValue::zero(bits);
    let _ = g;
    for d in 1..=length {
        let mu = mobius.mu(d);
        if mu == 0 {
            continue;
        }
        let m_start = limit / d + 1;
        let x = float(bits, (d * m_start) as f64);
        let ln_x = Float::with_val(bits, x.ln_ref());
        let gap = CValue::real(Float::with_val(bits, &ln_x - ln_u));
        // Integral term: z0^j X^{1-w} sum_k gap^{j-k} / ((j-k)! a^{k+1}) / d
        let inv_a = a.recip()?;
        let mut gap_pows = vec![CValue::one(bits)];
        for k in 1..=jj {
            let next = &gap_pows[k - 1] * &gap;
            gap_pows.push(next);
        }
        let mut integral = CValue::zero(bits);
        let mut apow = inv_a.clone();
        for k in 0..=jj {
            let term = (&gap_pows[jj - k] * &apow).scale(&inv_fact[jj - k]);
            integral = &integral + &term;
            apow = &apow * &inv_a;
        }
        let x1w = (&one - w).exp_with_log_base(&ln_x);
        integral = (&integral * &x1w).scale(&Float::with_val(bits, &zpow / d as u32));
        // Polynomial Q_n in (y - ln U): start with z0^j (y - ln U)^j / j!.
        let mut q: Vec<CValue> = vec![CValue::zero(bits); jj + 1];
        q[jj] = CValue::real(Float::with_val(bits, &zpow * &inv_fact[jj]));
        let eval_q = |q: &[CValue]| {
            let mut acc = CValue::zero(bits);
            for c in q.iter().rev() {
                acc = &(&acc * &gap) + c;
            }
            acc
        };
        let x_neg_w = (-w).exp_with_log_base(&ln_x);
        let boundary = (&x_neg_w * &eval_q(&q)).scale_f64(0.5);
        let mut sum = &integral + &boundary;
        // Euler-Maclaurin corrections: - B_{2k}/(2k)! h^{(2k-1)}(M),
        // h^{(n)}(M) = d^n X^{-w-n} Q_n(ln X).
        let mut order = 0usize;
        let advance = |q: &mut Vec<CValue>, n: usize| {
            // Q_{n+1} = (-w - n) Q_n + Q_n'
            let factor = &(-w) - &CValue::from_f64(n as f64, 0.0, bits);
            let mut out: Vec<CValue> = q.iter().map(|c| c * &factor).collect();
            for i in 1..q.len() {
                let d = q[i].scale_f64(i as f64);
                out[i - 1] = &out[i - 1] + &d;
            }
            *q = out;
        };
        let ratio = float(bits, d as f64) / &x;
        let mut scale_pow = x_neg_w.clone();
        let mut fact = Float::with_val(bits, 2);
        let mut prev = f64::INFINITY;
        let mut done = false;
        let threshold = (4.0 - f64::from(bits)).exp2();
        for k in 1..=depth {
            while order < 2 * k - 1 {
                advance(&mut q, order);
                order += 1;
                scale_pow = scale_pow.scale(&ratio);
            }
            let coef = Float::with_val(bits, &bern[k - 1] / &fact);
            let deriv = &scale_pow * &eval_q(&q);
            let term = deriv.scale(&coef);
            let tm = term.abs_f64();
            if tm <= threshold * sum.abs_f64().max(1e-300) {
                sum = sum.with_err(2.0 * tm);
                done = true;
                break;
            }
            if k > 2 && tm > prev {
                sum = sum.with_err(2.0 * prev);
                done = true;
                break;
            }
            prev = tm;
            sum = &sum - &term;
            fact *= ((2 * k + 1) * (2 * k + 2)) as u32;
            // keep scale_pow at order 2k-1 for the next pass
        }
        if !done {
            sum = sum.with_err(2.0 * prev);
        }
        let weight = Float::with_val(bits, Float::ln_u(d as u32)) * coeffs.shift();
        let mut weight = weight.exp();
        if mu < 0 {
            weight = -weight;
        }
        total = &total + &sum.scale(&weight);
    }
    Ok(total)
}

/// Samples of G on a circle, reused across node doublings and derivative orders.
pub struct CauchyCircle<'a> {
    center: CValue,
    radius: Float,
    g: &'a GSpec,
    table: &'a MobiusTable,
    ctx: PrecisionContext,
    nodes: Vec<CValue>,
    samples: Vec<CValue>,
}

impl<'a> CauchyCircle<'a> {
    pub fn new(
        center: &CValue,
        radius: f64,
        g: &'a GSpec,
        table: &'a MobiusTable,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("Cauchy radius must be positive, got {radius}")));
        }
        let bits = ctx.working_bits;
        Ok(Self {
            center: center.round_to(bits),
            radius: float(bits, radius),
            g,
            table,
            ctx: *ctx,
            nodes: Vec::new(),
            samples: Vec::new(),
        })
    }

    fn node(&self, k: usize, m: usize) -> CValue {
        let bits = self.ctx.working_bits;
        let angle = Float::with_val(bits, pi(bits) * 2u32) * k as u32 / m as u32;
        let (s, c) = angle.sin_cos(Float::new(bits));
        CValue::new(c, s, 0.0)
    }

    /// Ensures `m` equispaced samples (m a power of two multiple of the current count).
    fn ensure(&mut self, m: usize) -> Result<()> {
        if self.samples.len() == m {
            return Ok(());
        }
        let old = self.samples.len();
        let mut nodes = Vec::with_capacity(m);
        let step = m.checked_div(old).unwrap_or(1);
        let fresh: Vec<usize> = (0..m).filter(|k| old == 0 || k % step != 0).collect();
        let computed: Vec<(usize, CValue, CValue)> = {
            use rayon::prelude::*;
            fresh
                .par_iter()
                .map(|&k| {
                    let omega = self.node(k, m);
                    let z = &self.center + &omega.scale(&self.radius);
                    let v = g_uv(&z, self.g, self.table, &self.ctx)?;
                    Ok((k, omega, v))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let mut samples = vec![CValue::zero(self.ctx.working_bits); m];
        nodes.resize(m, CValue::zero(self.ctx.working_bits));
        if old > 0 {
            for k in 0..old {
                nodes[k * step] = self.nodes[k].clone();
                samples[k * step] = self.samples[k].clone();
            }
        }
        for (k, omega, v) in computed {
            nodes[k] = omega;
            samples[k] = v;
        }
        self.nodes = nodes;
        self.samples = samples;
        Ok(())
    }

    fn trapezoid(&self, j: u32, at: &CValue) -> Result<CValue> {
        let bits = self.ctx.working_bits;
        let m = self.samples.len();
        let mut acc = CValue::zero(bits);
        let offset = &at.round_to(bits) - &self.center;
        let mut max_err: f64 = 0.0;
        for (omega, gv) in self.nodes.iter().zip(&self.samples) {
            let ro = omega.scale(&self.radius);
            let den = &ro - &offset;
            let mut p = den.clone();
            for _ in 0..j {
                p = &p * &den;
            }
            let term = (gv * &ro).checked_div(&p)?;
            acc = &acc + &term;
            max_err = max_err.max(gv.err_bound * ro.abs_f64() / p.abs_f64());
        }
        let fact = Float::with_val(bits, Float::factorial(j)) / m as u32;
        Ok(acc.scale(&fact).with_err(mag(&Float::with_val(bits, Float::factorial(j))) * max_err))
    }

    /// D^j G at each point (inside the circle), doubling nodes until successive
    /// trapezoid values agree to the context's relative target.
    pub fn derivatives(&mut self, orders: &[u32], at: &[CValue]) -> Result<Vec<CValue>> {
        let top = orders.iter().copied().max().unwrap_or(0) as usize;
        let mut m = 32usize;
        while m < 2 * top + 16 {
            m *= 2;
        }
        let m_max = 1 << 13;
        self.ensure(m)?;
        let mut prev: Vec<CValue> = self.eval_all(orders, at)?;
        loop {
            m *= 2;
            if m > m_max {
                return Err(Error::NonConvergence(format!("Cauchy trapezoid needs more than {m_max} nodes")));
            }
            self.ensure(m)?;
            let cur = self.eval_all(orders, at)?;
            let mut ok = true;
            for (a, b) in prev.iter().zip(&cur) {
                let diff = (a - b).abs_f64();
                let scale = b.abs_f64();
                let floor = 64.0 * (b.err_bound + a.err_bound);
                if diff > self.ctx.target_rel_err * scale && diff > floor {
                    ok = false;
                }
            }
            if ok {
                return Ok(cur
                    .into_iter()
                    .zip(prev)
                    .map(|(c, p)| {
                        let d = (&c - &p).abs_f64();
                        c.with_err(d)
                    })
                    .collect());
            }
            prev = cur;
        }
    }

    fn eval_all(&self, orders: &[u32], at: &[CValue]) -> Result<Vec<CValue>> {
        let mut out = Vec::with_capacity(orders.len() * at.len());
        for x in at {
            for &j in orders {
                out.push(self.trapezoid(j, x)?);
            }
        }
        Ok(out)
    }

    pub fn node_count(&self) -> usize {
        self.samples.len()
    }

    /// D^j G at `at` from the samples already taken, without refinement.
    /// Call [`CauchyCircle::derivatives`] first to settle the node count.
    pub fn derivative_at(&self, j: u32, at: &CValue) -> Result<CValue> {
        if self.samples.is_empty() {
            return Err(Error::Domain("Cauchy circle has no samples yet".into()));
        }
        self.trapezoid(j, at)
    }
}

/// D^j G(s) by the Cauchy integral on |z - s| = radius.
pub fn g_deriv_cauchy(
    j: u32,
    s: &CValue,
    g: &GSpec,
    radius: f64,
    table: &MobiusTable,
    ctx: &PrecisionContext,
) -> Result<CValue> {
    let mut circle = CauchyCircle::new(s, radius, g, table, ctx)?;
    Ok(circle.derivatives(&[j], std::slice::from_ref(s))?.remove(0))
}

/// (sum_{j=1}^{J-1} (-z0 log U)^j / j!, U^{-z_gap} (-z0 log U)^J / J!).
pub fn taylor_main_terms(big_j: u32, z0: f64, scale: u64, z_gap: f64, bits: u32) -> Result<(Float, Float)> {
    if big_j < 2 {
        return Err(Error::Domain("J must be at least 2".into()));
    }
    let ln_u = Float::with_val(bits, Float::ln_u(scale as u32));
    let x = Float::with_val(bits, -(ln_u.clone() * z0));
    let mut term = Float::with_val(bits, 1);
    let mut partial = Float::new(bits);
    for j in 1..big_j {
        term *= &x;
        term /= j;
        partial += &term;
    }
    term *= &x;
    term /= big_j;
    let damp = Float::with_val(bits, -(ln_u * z_gap)).exp();
    Ok((partial, term * damp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::mobius_table;

    #[test]
    fn mollifier_small_cases() {
        let ctx = PrecisionContext::new(128);
        let t = mobius_table(20).unwrap();
        let s = CValue::from_f64(0.3, 5.0, 128);
        assert_eq!(m_v(&s, 1, &t, &ctx).unwrap().to_c64(), num_complex::Complex64::new(1.0, 0.0));
        let m3 = m_v(&CValue::one(128), 3, &t, &ctx).unwrap();
        assert!((m3.re.to_f64() - 1.0 / 6.0).abs() < 1e-30);
    }

    #[test]
    fn poisson_weights() {
        let zero = Float::with_val(128, 0);
        assert_eq!(p_weight(0, &zero).to_f64(), 1.0);
        assert_eq!(p_weight(3, &zero).to_f64(), 0.0);
        let two = Float::with_val(128, 2);
        let expect = (-2.0f64).exp() * 32.0 / 120.0;
        assert!((p_weight(5, &two).to_f64() - expect).abs() < 1e-16);
        let neg = Float::with_val(128, -1.5);
        let expect = 1.5f64.exp() * (-1.5f64).powi(3) / 6.0;
        assert!((p_weight(3, &neg).to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn taylor_terms() {
        let (p, r) = taylor_main_terms(2, 1.0 / 20f64.ln(), 20, 0.0, 128).unwrap();
        assert!((p.to_f64() + 1.0).abs() < 1e-15);
        assert!((r.to_f64() - 0.5).abs() < 1e-15);
        let (p, r) = taylor_main_terms(4, 0.0, 20, 0.0, 128).unwrap();
        assert!(p.is_zero() && r.is_zero());
    }
}
