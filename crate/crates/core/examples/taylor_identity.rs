// Checks G(s0 - z0) against its Taylor expansion with integral remainder
// for small z0, then halves z0 to watch the remainder shrink.

use zetalab::experiments::{build_params, taylor_identity_check, Overrides, Regime};
use zetalab::roots::find_zeta_zero;
use zetalab::PrecisionContext;

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(128);
    let gamma1 = find_zeta_zero(14.0, 14.2, &ctx)?.value.to_f64();
    for big_j in [2u32, 4, 6] {
        for z0 in [1e-3, 5e-4] {
            let over = Overrides { z0: Some(z0), scale: Some(20), big_j: Some(big_j), ..Default::default() };
            let params = build_params(Regime::Doublestar, 100, gamma1, 0.5, &over)?;
            let started = std::time::Instant::now();
            let rep = taylor_identity_check(&params, &ctx)?;
            println!(
                "J={big_j} z0={z0:e}: discrepancy {:.3e} budget {:.3e} remainder {} ({:.2?})",
                rep.lhs,
                rep.rhs_envelope,
                rep.get("remainder").unwrap_or("?"),
                started.elapsed()
            );
        }
    }
    Ok(())
}
