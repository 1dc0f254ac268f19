//! Adaptive Gauss-Legendre quadrature for smooth complex-valued integrands.
//!
//! Panels are refined in rounds; within a round every live panel is bisected
//! independently, so the work can be spread over the rayon pool while the
//! final sum is taken in left-to-right panel order.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::OnceLock;

pub const NODES: usize = 16;

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-12, max_panels: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub evals: usize,
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

fn rule16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES))
}

fn panel<F>(f: &F, a: f64, b: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let (xs, ws) = rule16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(ws) {
        acc += f(mid + half * x)? * *w;
    }
    Ok(acc * half)
}

struct Live {
    a: f64,
    b: f64,
    whole: Complex64,
}

/// Integrates `f` over [breaks[0], breaks[last]], starting from the panels
/// delimited by `breaks`.
pub fn integrate<F>(f: &F, breaks: &[f64], opts: &QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    if breaks.len() < 2 {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0, evals: 0 });
    }
    let width = breaks[breaks.len() - 1] - breaks[0];
    if width == 0.0 {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0, evals: 0 });
    }
    let spans: Vec<(f64, f64)> = breaks.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect();
    let wholes: Vec<Complex64> = spans.par_iter().map(|&(a, b)| panel(f, a, b)).collect::<Result<Vec<_>>>()?;
    let mut evals = NODES * spans.len();
    let mut live: Vec<Live> = spans.iter().zip(wholes).map(|(&(a, b), whole)| Live { a, b, whole }).collect();
    let mut done: Vec<(f64, Complex64, f64)> = Vec::new();
    while !live.is_empty() {
        let halves: Vec<(Complex64, Complex64)> = live
            .par_iter()
            .map(|p| {
                let m = 0.5 * (p.a + p.b);
                Ok((panel(f, p.a, m)?, panel(f, m, p.b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        evals += 2 * NODES * live.len();
        let estimate: Complex64 =
            done.iter().map(|d| d.1).sum::<Complex64>() + halves.iter().map(|h| h.0 + h.1).sum::<Complex64>();
        let tol = opts.abs_tol.max(opts.rel_tol * estimate.norm());
        let mut next = Vec::new();
        for (p, (l, r)) in live.iter().zip(halves) {
            let refined = l + r;
            let err = (p.whole - refined).norm();
            let share = tol * (p.b - p.a) / width;
            if err <= share || (p.b - p.a) <= 1e-13 * width {
                done.push((p.a, refined, err));
            } else {
                let m = 0.5 * (p.a + p.b);
                next.push(Live { a: p.a, b: m, whole: l });
                next.push(Live { a: m, b: p.b, whole: r });
            }
        }
        if done.len() + next.len() > opts.max_panels {
            return Err(Error::NonConvergence(format!(
                "quadrature exceeded {} panels (tolerance {tol:e})",
                opts.max_panels
            )));
        }
        live = next;
    }
    done.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = done.iter().map(|d| d.1).sum();
    let error = done.iter().map(|d| d.2).sum();
    Ok(QuadResult { value, error, panels: done.len(), evals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (xs, ws) = gauss_legendre(16);
        let s: f64 = ws.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m30: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        let f = |x: f64| Ok(Complex64::new(0.0, 7.0 * x).exp());
        let r = integrate(&f, &[0.0, 1.0, 10.0], &QuadOptions::default()).unwrap();
        let exact = (Complex64::new(0.0, 70.0).exp() - 1.0) / Complex64::new(0.0, 7.0);
        assert!((r.value - exact).norm() < 1e-11);
        assert!(r.error < 1e-10);
    }

    #[test]
    fn budget_exhaustion_reports_error() {
        let f = |x: f64| Ok(Complex64::new((1.0 / (x + 1e-9)).sin(), 0.0));
        let opts = QuadOptions { max_panels: 20, ..Default::default() };
        assert!(integrate(&f, &[0.0, 1.0], &opts).is_err());
    }
}
