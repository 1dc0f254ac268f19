use super::{instantiate, BoundReport, Entry, Instance, ParamSet, Regime};
use crate::dirichlet::{default_cauchy_radius, g_uv, m_v, taylor_main_terms, CauchyCircle};
use crate::error::Result;
use crate::format::double;
use crate::precision::{float, CValue, PrecisionContext};
use crate::quadrature::{integrate, QuadOptions};
use crate::zetafn::zeta_em;
use num_complex::Complex64;
use rug::ops::Pow;
use rug::Float;

/// Both sides of G(s0 - z0) = G(s0) + sum_{j<J} (-z0)^j/j! D^j G(s0) + R_J,
/// with R_J in integral form.
pub struct TaylorParts {
    pub left: CValue,
    pub anchor: CValue,
    pub terms: CValue,
    pub remainder: CValue,
    pub nodes: usize,
    pub panels: usize,
}

impl TaylorParts {
    pub fn right(&self) -> CValue {
        &(&self.anchor + &self.terms) + &self.remainder
    }

    pub fn discrepancy(&self) -> f64 {
        (&self.left - &self.right()).abs_f64()
    }

    /// Combined error bounds of both sides.
    pub fn budget(&self) -> f64 {
        self.left.err_bound + self.anchor.err_bound + self.terms.err_bound + self.remainder.err_bound
    }
}

pub fn taylor_parts(inst: &Instance, ctx: &PrecisionContext) -> Result<TaylorParts> {
    let bits = ctx.working_bits;
    let p = &inst.params;
    let big_j = p.big_j;
    let s0 = CValue::real(float(bits, p.s0));
    let target = CValue::real(float(bits, p.s0) - float(bits, p.z0));
    let left = g_uv(&target, &inst.g, &inst.table, ctx)?;
    let anchor = g_uv(&s0, &inst.g, &inst.table, ctx)?;
    if p.z0 == 0.0 {
        let zero = CValue::zero(bits);
        return Ok(TaylorParts { left, anchor, terms: zero.clone(), remainder: zero, nodes: 0, panels: 0 });
    }
    let center = CValue::real(float(bits, p.s0) - float(bits, p.z0) / 2u32);
    let radius = default_cauchy_radius(&center).max(p.z0);
    let mut circle = CauchyCircle::new(&center, radius, &inst.g, &inst.table, ctx)?;
    let orders: Vec<u32> = (1..=big_j).collect();
    let d = circle.derivatives(&orders, &[s0.clone(), target.clone()])?;
    let neg_z0 = float(bits, -p.z0);
    let mut coef = Float::with_val(bits, 1);
    let mut terms = CValue::zero(bits);
    for j in 1..big_j {
        coef *= &neg_z0;
        coef /= j;
        terms = &terms + &d[(j - 1) as usize].scale(&coef);
    }
    // R_J = (-z0)^J/(J-1)! * int_0^1 (1 - theta)^(J-1) D^J G(s0 - theta z0) dtheta.
    let z0 = float(bits, p.z0);
    let s0f = float(bits, p.s0);
    let circle_ref = &circle;
    let integrand = move |theta: f64| -> Result<Complex64> {
        let at = CValue::real(Float::with_val(bits, &s0f - Float::with_val(bits, &z0 * theta)));
        let dj = circle_ref.derivative_at(big_j, &at)?;
        Ok(dj.to_c64() * (1.0 - theta).powi(big_j as i32 - 1))
    };
    let scale = d[orders.len() - 1].abs_f64().max(d[2 * orders.len() - 1].abs_f64());
    let opts = QuadOptions { abs_tol: 1e-15 * scale.max(f64::MIN_POSITIVE), rel_tol: 1e-13, ..Default::default() };
    let q = integrate(&integrand, &[0.0, 0.5, 1.0], &opts)?;
    let mut rcoef = Float::with_val(bits, 1);
    for j in 1..big_j {
        rcoef *= &neg_z0;
        rcoef /= j;
    }
    rcoef *= &neg_z0;
    let worst_d = d[orders.len() - 1].err_bound.max(d[2 * orders.len() - 1].err_bound);
    let integral = CValue::from_c64(q.value, bits).with_err(q.error + 4.0 * f64::EPSILON * q.value.norm() + worst_d);
    let remainder = integral.scale(&rcoef);
    Ok(TaylorParts { left, anchor, terms, remainder, nodes: circle.node_count(), panels: q.panels })
}

/// Two-sided discrepancy of the Taylor identity with integral remainder.
pub fn taylor_identity_check(params: &ParamSet, ctx: &PrecisionContext) -> Result<BoundReport> {
    let inst = instantiate(params, ctx)?;
    let parts = taylor_parts(&inst, ctx)?;
    let mut rep = BoundReport::new("taylor", parts.discrepancy(), parts.budget());
    rep.hypotheses_satisfied = inst.notes.is_empty() && params.notes.is_empty();
    rep.notes = inst.notes.clone();
    push_parts(&mut rep, &parts);
    rep.extra.push(Entry::float("mollifier_root", &inst.root.value, inst.root.residual.max(f64::MIN_POSITIVE)));
    rep.params = Some(inst.params);
    Ok(rep)
}

fn push_parts(rep: &mut BoundReport, parts: &TaylorParts) {
    rep.extra.push(Entry::float("G_left", &parts.left.re, parts.left.err_bound));
    rep.extra.push(Entry::float("G_anchor", &parts.anchor.re, parts.anchor.err_bound));
    rep.extra.push(Entry::float("derivative_terms", &parts.terms.re, parts.terms.err_bound));
    rep.extra.push(Entry::float("remainder", &parts.remainder.re, parts.remainder.err_bound));
    rep.extra.push(Entry::num("discrepancy", parts.discrepancy()));
    rep.extra.push(Entry::num("budget", parts.budget()));
    rep.extra.push(Entry::num("cauchy_nodes", parts.nodes as f64));
    rep.extra.push(Entry::num("quadrature_panels", parts.panels as f64));
}

/// Threshold the closing comparison is set against: 7e^3 or 5e^3.
pub fn chain_threshold(regime: Regime) -> f64 {
    let e3 = 3f64.exp();
    match regime {
        Regime::Doublestar => 7.0 * e3,
        Regime::Star => 5.0 * e3,
    }
}

/// Every quantity of the closing argument, evaluated at the given
/// parameters. The report states numbers and hypothesis failures only.
pub fn final_report(params: &ParamSet, ctx: &PrecisionContext) -> Result<BoundReport> {
    let bits = ctx.working_bits;
    let inst = instantiate(params, ctx)?;
    let p = &inst.params;
    let parts = taylor_parts(&inst, ctx)?;

    // Zero-factor budget: G(s0 - z0) = U^{-z0} Re F_V(rho) with rho = beta0 + i gamma0.
    let rho = CValue::new(float(bits, p.s0) - float(bits, p.z0), float(bits, p.v), 0.0);
    let zeta = zeta_em(&rho, 0, ctx)?;
    let shifted = &rho - &CValue::real(inst.g.mollifier.shift());
    let m = m_v(&shifted, p.length as usize, &inst.table, ctx)?;
    let damp = (p.scale as f64).powf(-p.z0);
    let budget = damp * ((zeta.abs_f64() + zeta.err_bound) * (m.abs_f64() + m.err_bound)) + parts.left.err_bound;
    let zero_factor_holds = parts.left.abs_f64() <= budget;

    let x = p.z0 * (p.scale as f64).ln();
    let big_j = p.big_j;
    let (partial, last) = taylor_main_terms(big_j, p.z0, p.scale, 0.0, bits)?;
    let chain_sum = Float::with_val(bits, &partial + &last);
    let mut chain_value = Float::with_val(bits, Float::with_val(bits, x).pow(big_j - 1));
    chain_value /= Float::with_val(bits, Float::factorial(big_j));
    let chain_value = -chain_value;
    let lv = (p.length as f64).ln();
    let comparison = (4.0 * (1.0 - std::f64::consts::LN_2) * p.z0 / 3.0 * lv).exp() / (p.z0 * lv + 3.0).powi(2);
    let threshold = chain_threshold(p.regime);
    // Size of the error term the chain carries, implied constant 1.
    let chain_error = match p.regime {
        Regime::Doublestar => (p.length as f64).powf(-5.0 * p.r / 12.0 + 6.0 * p.epsilon),
        Regime::Star => (p.length as f64).powf(-2.0 * p.r) * lv.powi(3),
    };

    let mut rep = BoundReport::new(&format!("final-{}", regime_name(p.regime)), comparison, threshold);
    let mut notes = p.notes.clone();
    notes.extend(inst.notes.iter().cloned());
    let k = if p.regime == Regime::Doublestar { 10.0 } else { 30.0 };
    if (p.scale as f64).ln() < k / p.z0 {
        notes.push(format!("U = {} below exp({k}/z0) = exp({})", p.scale, double(k / p.z0)));
    }
    let j_gap = f64::from(big_j) - 1.0 > 2.0 * x;
    if !j_gap {
        notes.push("J - 1 > 2 z0 log U fails".into());
    }
    rep.hypotheses_satisfied = notes.is_empty();
    notes.push("report only: the numbers above are not evaluated against any conclusion".into());
    rep.notes = notes;
    push_parts(&mut rep, &parts);
    rep.extra.push(Entry::float("zeta_at_zero", &zeta.abs(), zeta.err_bound));
    rep.extra.push(Entry::num("zero_factor_budget", budget));
    rep.extra.push(Entry::text("zero_factor_holds", zero_factor_holds.to_string()));
    rep.extra.push(Entry::float("main_partial_sum", &partial, 0.0));
    rep.extra.push(Entry::float("main_last_term", &last, 0.0));
    rep.extra.push(Entry::float("chain_sum", &chain_sum, 0.0));
    rep.extra.push(Entry::float("chain_value", &chain_value, 0.0));
    rep.extra.push(Entry::num("z0_log_U", x));
    rep.extra.push(Entry::text("J_minus_1_exceeds_2_z0_log_U", j_gap.to_string()));
    rep.extra.push(Entry::num("chain_error_term", chain_error));
    rep.extra.push(Entry::num("comparison", comparison));
    rep.extra.push(Entry::num("threshold", threshold));
    rep.extra.push(Entry::float("mollifier_root", &inst.root.value, inst.root.residual.max(f64::MIN_POSITIVE)));
    rep.params = Some(inst.params);
    Ok(rep)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Star => "star",
        Regime::Doublestar => "doublestar",
    }
}
