// Locates the critical-line zeros in [10, 60] from sign changes of Z(t).

use zetalab::roots::find_zeta_zero;
use zetalab::zetafn::hardy_z;
use zetalab::PrecisionContext;

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(128);
    let step = 0.05;
    let mut t = 10.0;
    let mut prev = hardy_z(t, &ctx)?.to_f64();
    let mut zeros = Vec::new();
    while t < 60.0 {
        let next = hardy_z(t + step, &ctx)?.to_f64();
        if prev.signum() != next.signum() {
            zeros.push(find_zeta_zero(t, t + step, &ctx)?.value.to_f64());
        }
        prev = next;
        t += step;
    }
    for (k, g) in zeros.iter().enumerate() {
        println!("gamma_{} = {g:.10}", k + 1);
    }
    println!("{} zeros in [10, 60]", zeros.len());
    Ok(())
}
