// Runs the closing chain for both regimes at V = 10^4 with gamma_0 = the
// first zero ordinate, and prints the report.

use zetalab::experiments::{build_params, final_report, Overrides, Regime};
use zetalab::roots::find_zeta_zero;
use zetalab::PrecisionContext;

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(128);
    let gamma1 = find_zeta_zero(14.0, 14.2, &ctx)?.value.to_f64();
    for regime in [Regime::Doublestar, Regime::Star] {
        let params = build_params(regime, 10_000, gamma1, 0.5, &Overrides::default())?;
        let started = std::time::Instant::now();
        let rep = final_report(&params, &ctx)?;
        println!("{regime:?} ({:.2?})", started.elapsed());
        for e in &rep.extra {
            println!("  {:<30} {}", e.name, e.value);
        }
        for n in &rep.notes {
            println!("  note: {n}");
        }
    }
    Ok(())
}
