// Perron's integral for M_V against the direct sum, with the truncation
// envelope at implied constant 10, and the rectangle-shift identity.

use zetalab::contours::{default_abscissa, perron_envelope, perron_mv, rectangle_shift, ContourSpec};
use zetalab::dirichlet::m_v;
use zetalab::sieve::mobius_table;
use zetalab::{CValue, PrecisionContext};

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(64);
    let table = mobius_table(100)?;
    let cases =
        [((2.0, 0.0), 50, 500.0), ((1.5, 3.0), 100, 1000.0), ((1.5, 3.0), 100, 2000.0), ((0.8, 5.0), 30, 200.0)];
    for ((sigma, t), v, w) in cases {
        let s = CValue::from_f64(sigma, t, ctx.working_bits);
        let c = default_abscissa(sigma, v);
        let started = std::time::Instant::now();
        let integral = perron_mv(&s, v, &ContourSpec::vertical(c, w)?, &ctx)?;
        let direct = m_v(&s, v, &table, &ctx)?;
        let gap = (&integral - &direct).abs_f64();
        let env = perron_envelope(sigma, v, c, w);
        println!(
            "s={sigma}+{t}i V={v} W={w}: |perron - M_V| = {gap:.3e}, envelope {env:.3e}, observed constant {:.3} ({:.2?})",
            10.0 * gap / env,
            started.elapsed()
        );
    }
    let s = CValue::from_f64(2.5, 1.0, 64);
    let shift = rectangle_shift(&s, 20, 1.0 / 20f64.ln(), -0.5, 50.0, &ctx)?;
    println!(
        "rectangle shift at s=2.5+1i, V=20: vertical {:?}, recombined {:?}, gap {:.3e}",
        shift.vertical.to_c64(),
        shift.recombined.to_c64(),
        (&shift.vertical - &shift.recombined).abs_f64()
    );
    Ok(())
}
