//! Three independent routes to the derivatives of G:
//! the Poisson-weighted coefficient series, the Cauchy integral on a circle,
//! and central finite differences.
//!
//!     cargo run --example derivative_methods

use rug::Float;
use std::time::Instant;
use zetalab::dirichlet::{default_cauchy_radius, g_deriv_cauchy, g_deriv_series, g_uv, GSpec, MollifierSpec, Variant};
use zetalab::roots::find_zeta_zero;
use zetalab::sieve::{coeff_table, mobius_table};
use zetalab::{CValue, PrecisionContext};

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(128);
    let length = 200;
    let table = mobius_table(length)?;
    let root = zetalab::roots::find_mollifier_root(length, 0.5, &table, &ctx)?;
    let gamma = find_zeta_zero(14.0, 14.2, &ctx)?.value;
    println!("s_V = {:.12}, gamma_1 = {:.12}", root.value.to_f64(), gamma.to_f64());
    let spec = MollifierSpec::new(length, root.value.clone(), Variant::Standard)?;
    let g = GSpec::new(spec.clone(), 50, gamma, Float::with_val(128, 1))?;
    let coeffs = coeff_table(length, &spec.shift(), length * length)?;
    let z0 = 0.25;
    for sigma in [1.1, 1.5, 2.0] {
        let s = CValue::from_f64(sigma, 0.0, 128);
        for j in 1..=6u32 {
            let t = Instant::now();
            let series = g_deriv_series(j, &s, &g, &coeffs, z0, &ctx)?;
            let ts = t.elapsed();
            let t = Instant::now();
            let cauchy = g_deriv_cauchy(j, &s, &g, default_cauchy_radius(&s), &table, &ctx)?;
            let tc = t.elapsed();
            let fact: f64 = (1..=j).map(f64::from).product();
            let weight = (-z0).powi(j as i32) / fact;
            let converted = cauchy.to_c64().re * weight;
            println!(
                "sigma={sigma} j={j}: series={:+.15e} (err {:.1e}, {ts:.2?})  cauchy={:+.15e} (err {:.1e}, {tc:.2?})  rel gap {:.1e}",
                series.to_c64().re,
                series.err_bound,
                converted,
                cauchy.err_bound * weight.abs(),
                (series.to_c64().re - converted).abs() / converted.abs()
            );
        }
        let _ = g_uv(&s, &g, &table, &ctx)?;
    }
    Ok(())
}
