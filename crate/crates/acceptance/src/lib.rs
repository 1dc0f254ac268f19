//! The ten acceptance criteria for zetalab, each returning a verdict and a
//! one-line account of what was measured.  Tolerances are pinned here.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use std::time::{Duration, Instant};
use zetalab::contours::{
    default_abscissa, perron_envelope, perron_mv, winding_number, winding_sum, ContourSpec, WindingTarget,
};
use zetalab::dirichlet::{
    default_cauchy_radius, f_v, g_deriv_cauchy, g_deriv_series, g_uv, m_v, p_weight, GSpec, MollifierSpec, Variant,
};
use zetalab::experiments::{
    build_params, check_bound, check_lemma1, factorial_margin, instantiate, taylor_parts, Overrides, Probe, Regime,
};
use zetalab::precision::{float, pi};
use zetalab::roots::{find_mollifier_root, find_zeta_zero};
use zetalab::sieve::{coeff_table, mobius_table};
use zetalab::zetafn::{chi_factor, zeta_em};
use zetalab::{CValue, PrecisionContext, Result};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn gamma1(bits: u32) -> Result<Float> {
    Ok(find_zeta_zero(14.0, 14.2, &PrecisionContext::new(bits))?.value)
}

fn lemma1_suite() -> Result<Outcome> {
    let mut failing = Vec::new();
    for big_j in (2..=40).step_by(2) {
        let rep = check_lemma1(big_j, 1e-3)?;
        let v = rep.violations.unwrap_or(0);
        if v > 0 {
            failing.push(format!("J={big_j}:{v}"));
        }
    }
    let factorial_ok = (1..=50).all(|j| factorial_margin(j, 256) <= 0);
    let detail = format!(
        "violations [{}]; j! <= j^(j+1) e^(1-j) for j <= 50: {factorial_ok}",
        if failing.is_empty() { "none".to_string() } else { failing.join(" ") }
    );
    Ok(outcome(failing.is_empty() && factorial_ok, detail))
}

fn poisson_identities() -> Result<Outcome> {
    let bits = 256;
    let mut worst_sum: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    let h = 1e-6;
    for u in [0.0, 0.5, 1.0, 5.0, 20.0] {
        let uf = float(bits, u);
        let mut total = Float::new(bits);
        for j in 0..=200 {
            total += p_weight(j, &uf);
        }
        worst_sum = worst_sum.max((total - 1u32).abs().to_f64());
        if u > 0.0 {
            let (up, dn) = (float(bits, u + h), float(bits, u - h));
            for j in 1..=200 {
                let fd = Float::with_val(bits, p_weight(j, &up) - p_weight(j, &dn)) / (2.0 * h);
                let exact = Float::with_val(bits, p_weight(j - 1, &uf) - p_weight(j, &uf));
                worst_fd = worst_fd.max((fd - exact).abs().to_f64());
            }
        }
    }
    let detail = format!(
        "max |sum p_j - 1| = {worst_sum:.2e} (<= 1e-15), max finite-difference residual = {worst_fd:.2e} (<= 1e-8)"
    );
    Ok(outcome(worst_sum <= 1e-15 && worst_fd <= 1e-8, detail))
}

fn zeta_accuracy() -> Result<Outcome> {
    let ctx = PrecisionContext::new(128);
    let z2 = zeta_em(&CValue::from_f64(2.0, 0.0, 128), 0, &ctx)?;
    let pi2 = Float::with_val(128, pi(128).square()) / 6u32;
    let basel = Float::with_val(128, &z2.re - &pi2).abs().to_f64();
    let g = gamma1(128)?;
    let in_bracket = g > 14.0 && g < 14.2;
    let rho = CValue::new(float(128, 0.5), g.clone(), 0.0);
    let at_zero = zeta_em(&rho, 0, &ctx)?.abs_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut fe_failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = rng.gen_range(std::f64::consts::TAU..100.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s = CValue::from_f64(rng.gen_range(0.01..0.99), t, 128);
        let lhs = zeta_em(&s, 0, &ctx)?;
        let one_minus = &CValue::one(128) - &s;
        let rhs = &chi_factor(&s, &ctx)? * &zeta_em(&one_minus, 0, &ctx)?;
        let resid = (&lhs - &rhs).abs_f64();
        let budget = lhs.err_bound + rhs.err_bound;
        worst = worst.max(resid / budget);
        if resid > budget {
            fe_failures += 1;
        }
    }
    let detail = format!(
        "|zeta(2) - pi^2/6| = {basel:.2e} (<= 1e-20); gamma_1 = {:.12} in (14, 14.2): {in_bracket}; |zeta(1/2+i gamma_1)| = {at_zero:.2e} (<= 1e-8); functional equation: {fe_failures}/100 points above budget (worst residual/budget {worst:.2e})",
        g.to_f64()
    );
    Ok(outcome(basel <= 1e-20 && in_bracket && at_zero <= 1e-8 && fe_failures == 0, detail))
}

fn perron_grid() -> Result<Outcome> {
    let ctx = PrecisionContext::new(64);
    let points = [(2.0, 0.0), (1.5, 3.0), (1.1, 10.0), (0.8, 5.0)];
    let settings = [(10, 100.0), (30, 500.0), (50, 1000.0), (100, 2000.0), (100, 10_000.0)];
    let mut worst: f64 = 0.0;
    let mut misses = 0;
    for &(sigma, t) in &points {
        let s = CValue::from_f64(sigma, t, 64);
        for &(v, w) in &settings {
            let table = mobius_table(v)?;
            let c = default_abscissa(sigma, v);
            let integral = perron_mv(&s, v, &ContourSpec::vertical(c, w)?, &ctx)?;
            let direct = m_v(&s, v, &table, &ctx)?;
            let gap = (&integral - &direct).abs_f64();
            let envelope = perron_envelope(sigma, v, c, w);
            worst = worst.max(gap / envelope);
            if gap > envelope {
                misses += 1;
            }
        }
    }
    let detail = format!(
        "{} grid points, {misses} outside the constant-10 envelope, worst gap/envelope {worst:.3}",
        points.len() * settings.len()
    );
    Ok(outcome(misses == 0, detail))
}

fn winding_counts() -> Result<Outcome> {
    let ctx = PrecisionContext::new(64);
    let mut parts = Vec::new();
    let mut pass = true;
    for (center, expect) in [(1.0, 1), (3.0, 0)] {
        let circle = ContourSpec::circle(Complex64::new(center, 0.0), 0.3)?;
        let w = winding_number(WindingTarget::InvZeta, &circle, 0, None, &ctx)?;
        let doubled = winding_sum(WindingTarget::InvZeta, &circle, 0, None, 2 * w.nodes)?;
        let stable =
            doubled.re.round() as i64 == w.count && (doubled - Complex64::new(w.raw_re, w.raw_im)).norm() < 1e-8;
        pass &= w.count == expect && stable;
        parts.push(format!(
            "|s-{center}|=0.3: {} (expected {expect}, {} nodes, doubled {:.3e})",
            w.count, w.nodes, doubled.re
        ));
    }
    Ok(outcome(pass, parts.join("; ")))
}

fn zero_factor() -> Result<Outcome> {
    let bits = 256;
    let ctx = PrecisionContext::new(bits);
    let rho = CValue::new(float(bits, 0.5), gamma1(bits)?, 0.0);
    let zeta = zeta_em(&rho, 0, &ctx)?;
    let mut parts = Vec::new();
    let mut pass = true;
    for length in [100, 1000] {
        let table = mobius_table(length)?;
        let root = find_mollifier_root(length, 0.5, &table, &ctx)?;
        let spec = MollifierSpec::new(length, root.value.clone(), Variant::Standard)?;
        let value = f_v(&rho, &spec, &table, &ctx)?;
        let shifted = &rho - &CValue::real(spec.shift());
        let m = m_v(&shifted, length, &table, &ctx)?;
        let budget = (m.abs_f64() + m.err_bound) * (zeta.abs_f64() + zeta.err_bound) + value.err_bound;
        // The comparison itself runs in doubles.
        let budget = budget * (1.0 + 8.0 * f64::EPSILON);
        pass &= value.abs_f64() <= budget;
        parts.push(format!(
            "V={length}: |f_v| = {:.3e}, budget {budget:.3e}, |zeta(rho)| = {:.1e}",
            value.abs_f64(),
            zeta.abs_f64()
        ));
    }
    Ok(outcome(pass, parts.join("; ")))
}

// j-th central difference of G at sigma, Richardson-extrapolated in h.
fn finite_difference(
    j: u32,
    sigma: f64,
    h: f64,
    g: &GSpec,
    table: &zetalab::sieve::MobiusTable,
    ctx: &PrecisionContext,
) -> Result<f64> {
    let bits = ctx.working_bits;
    let stencil = |h: f64| -> Result<Float> {
        let mut acc = Float::new(bits);
        let mut binom = Float::with_val(bits, 1);
        for k in 0..=j {
            let offset = (f64::from(j) / 2.0 - f64::from(k)) * h;
            let at = CValue::real(float(bits, sigma) + float(bits, offset));
            let value = g_uv(&at, g, table, ctx)?.re;
            let term = Float::with_val(bits, &binom * &value);
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            binom *= j - k;
            binom /= k + 1;
        }
        Ok(acc / Float::with_val(bits, float(bits, h).pow(j)))
    };
    let coarse = stencil(h)?;
    let fine = stencil(h / 2.0)?;
    Ok(((fine * 4u32 - coarse) / 3u32).to_f64())
}

fn derivative_methods() -> Result<Outcome> {
    let bits = 256;
    let ctx = PrecisionContext::new(bits);
    let length = 200;
    let table = mobius_table(length)?;
    let root = find_mollifier_root(length, 0.5, &table, &ctx)?;
    let spec = MollifierSpec::new(length, root.value.clone(), Variant::Standard)?;
    let g = GSpec::new(spec.clone(), 50, gamma1(bits)?, float(bits, 1.0))?;
    let coeffs = coeff_table(length, &spec.shift(), length * length)?;
    let z0 = 0.25;
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    let mut compared = 0;
    for sigma in [1.1, 1.5, 2.0] {
        let s = CValue::real(float(bits, sigma));
        for j in 1..=6u32 {
            let weight =
                Float::with_val(bits, Float::with_val(bits, -z0).pow(j)) / Float::with_val(bits, Float::factorial(j));
            let series = g_deriv_series(j, &s, &g, &coeffs, z0, &ctx)?;
            let series_value = Float::with_val(bits, &series.re / &weight).to_f64();
            let series_err = series.err_bound / weight.to_f64().abs();
            let cauchy = g_deriv_cauchy(j, &s, &g, default_cauchy_radius(&s), &table, &ctx)?;
            let fd = finite_difference(j, sigma, 1e-3, &g, &table, &ctx)?;
            let reference = cauchy.re.to_f64();
            for (other, other_err) in [(series_value, series_err), (fd, 0.0)] {
                let gap = (other - reference).abs();
                let allowed = (1e-6 * reference.abs()).max(cauchy.err_bound + other_err);
                compared += 1;
                worst = worst.max(gap / reference.abs().max(f64::MIN_POSITIVE));
                if gap > allowed {
                    fails += 1;
                }
            }
        }
    }
    let detail = format!("{compared} comparisons (series and finite differences against Cauchy), {fails} outside tolerance, worst relative gap {worst:.2e}");
    Ok(outcome(fails == 0, detail))
}

fn taylor_identity() -> Result<Outcome> {
    let ctx = PrecisionContext::new(128);
    let g1 = gamma1(128)?.to_f64();
    let run = |big_j: u32, z0: f64| -> Result<(f64, f64, f64)> {
        let over = Overrides { z0: Some(z0), scale: Some(20), big_j: Some(big_j), ..Default::default() };
        let params = build_params(Regime::Doublestar, 100, g1, 0.5, &over)?;
        let parts = taylor_parts(&instantiate(&params, &ctx)?, &ctx)?;
        Ok((parts.discrepancy(), parts.budget(), parts.remainder.abs_f64()))
    };
    let mut pass = true;
    let mut parts = Vec::new();
    let mut at_j4 = None;
    for big_j in [2, 4, 6] {
        let (disc, budget, rem) = run(big_j, 1e-3)?;
        pass &= disc <= 1e-8;
        parts.push(format!("J={big_j}: discrepancy {disc:.2e}"));
        if big_j == 4 {
            at_j4 = Some((disc, budget, rem));
        }
    }
    let (disc, budget, rem) = at_j4.expect("J=4 evaluated");
    let (disc_half, budget_half, rem_half) = run(4, 5e-4)?;
    // Below the rounding budget a discrepancy is noise; the O(z0^J) scaling
    // is then read off the remainder term itself.
    let noise = disc <= budget && disc_half <= budget_half;
    let halving = if noise { rem / rem_half } else { disc / disc_half };
    pass &= halving >= 8.0;
    parts.push(format!(
        "halving z0 at J=4: discrepancy {disc:.2e} -> {disc_half:.2e} (budgets {budget:.1e}, {budget_half:.1e}; at noise floor: {noise}), remainder ratio {:.2}, ratio used {halving:.2} (>= 8)",
        rem / rem_half
    ));
    Ok(outcome(pass, parts.join("; ")))
}

fn bound_trend() -> Result<Outcome> {
    let ctx = PrecisionContext::new(128);
    let g1 = gamma1(128)?.to_f64();
    let line = [Probe::At(Complex64::new(1.2, 0.0)), Probe::At(Complex64::new(3.0, 0.0))];
    let mut pass = true;
    let mut parts = Vec::new();
    for (lemma, regime) in [(3, Regime::Doublestar), (5, Regime::Star)] {
        let over = Overrides { c0: Some(1e-3), ..Default::default() };
        let params = build_params(regime, 10_000, g1, 0.5, &over)?;
        let rep = check_bound(lemma, &params, &line, &ctx)?;
        let (near, far) = (rep.rows[0].lhs, rep.rows[1].lhs);
        pass &= far < near;
        parts.push(format!("lemma {lemma}: |F-1| at 1.2 = {near:.3e}, at 3 = {far:.3e}"));
    }
    Ok(outcome(pass, parts.join("; ")))
}

fn reproducible_final() -> Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "precision_bits = 128\nthreads = 1\noutput_format = json\n")?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("final-{k}.json"));
        let argv = ["zetalab", "final", "--regime", "star", "--config", path_str(&config)?, "--out", path_str(&out)?];
        let status = zetalab::cli::run(argv);
        if status != 0 {
            return Ok(outcome(false, format!("run {k} exited with status {status}")));
        }
        outputs.push(std::fs::read(out)?);
    }
    let identical = outputs[0] == outputs[1];
    let report: serde_json::Value =
        serde_json::from_slice(&outputs[0]).map_err(|e| zetalab::Error::Io(e.to_string()))?;
    let notes: Vec<&str> =
        report["notes"].as_array().map(|a| a.iter().filter_map(|n| n.as_str()).collect()).unwrap_or_default();
    let desk = notes.iter().any(|n| n.starts_with("desk scale"));
    let unsatisfied = report["hypotheses_satisfied"] == serde_json::Value::Bool(false);
    let no_verdict = notes.iter().any(|n| n.starts_with("report only"));
    let detail = format!(
        "byte-identical: {identical} ({} bytes); desk-scale notes: {desk}; hypotheses_satisfied=false: {unsatisfied}; report-only note: {no_verdict}",
        outputs[0].len()
    );
    Ok(outcome(identical && desk && unsatisfied && no_verdict, detail))
}

fn path_str(p: &std::path::Path) -> Result<&str> {
    p.to_str().ok_or_else(|| zetalab::Error::Io(format!("non-UTF-8 path {}", p.display())))
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub check: fn() -> Result<Outcome>,
    pub time_limit: Duration,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        name: "Poisson-weight inequalities, even J <= 40",
        check: lemma1_suite,
        time_limit: Duration::from_secs(5),
    },
    Criterion {
        id: 2,
        name: "Poisson-weight identities",
        check: poisson_identities,
        time_limit: Duration::from_secs(5),
    },
    Criterion { id: 3, name: "zeta accuracy", check: zeta_accuracy, time_limit: Duration::from_secs(60) },
    Criterion {
        id: 4,
        name: "Perron integral against the direct sum",
        check: perron_grid,
        time_limit: Duration::from_secs(300),
    },
    Criterion { id: 5, name: "winding counts of 1/zeta", check: winding_counts, time_limit: Duration::from_secs(30) },
    Criterion { id: 6, name: "zero-factor property", check: zero_factor, time_limit: Duration::from_secs(30) },
    Criterion {
        id: 7,
        name: "derivative cross-method",
        check: derivative_methods,
        time_limit: Duration::from_secs(300),
    },
    Criterion {
        id: 8,
        name: "Taylor identity with integral remainder",
        check: taylor_identity,
        time_limit: Duration::from_secs(300),
    },
    Criterion { id: 9, name: "decay trend of F_V - 1", check: bound_trend, time_limit: Duration::from_secs(60) },
    Criterion {
        id: 10,
        name: "reproducible final report",
        check: reproducible_final,
        time_limit: Duration::from_secs(600),
    },
];

/// Runs one criterion; a result over its time limit counts as a failure.
pub fn evaluate(c: &Criterion) -> (bool, String) {
    let started = Instant::now();
    let result = (c.check)();
    let took = started.elapsed();
    let (pass, detail) = match result {
        Ok(o) => (o.pass && took <= c.time_limit, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let line = format!(
        "criterion {:>2} {} {}: {detail} [{:.2}s of {}s]",
        c.id,
        if pass { "PASS" } else { "FAIL" },
        c.name,
        took.as_secs_f64(),
        c.time_limit.as_secs()
    );
    (pass, line)
}
