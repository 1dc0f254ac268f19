// Real roots of M_V near s = 1 for growing V, with the scan's sign-change count.

use zetalab::roots::{find_mollifier_root, RootStatus};
use zetalab::sieve::mobius_table;
use zetalab::PrecisionContext;

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(128);
    let table = mobius_table(100_000)?;
    for (length, radius) in [(2, 0.1), (3, 1.0), (10, 0.5), (100, 0.2), (1000, 0.2), (10_000, 0.2), (100_000, 0.2)] {
        let r = find_mollifier_root(length, radius, &table, &ctx)?;
        match r.status {
            RootStatus::Found => println!(
                "V={length:>6} R={radius}: s_V = {:.15} residual {:.1e}, sign changes {}",
                r.value.to_f64(),
                r.residual,
                r.sign_changes
            ),
            RootStatus::NoSignChange => println!("V={length:>6} R={radius}: no sign change"),
        }
    }
    Ok(())
}
