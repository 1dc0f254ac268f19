// Argument-principle counts for 1/zeta and for the mollifier M_V around s = 1.

use num_complex::Complex64;
use zetalab::contours::{winding_number, ContourSpec, WindingTarget};
use zetalab::sieve::mobius_table;
use zetalab::PrecisionContext;

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(64);
    for (center, radius) in [(1.0, 0.3), (3.0, 0.3), (0.5, 0.6)] {
        let circle = ContourSpec::circle(Complex64::new(center, 0.0), radius)?;
        let w = winding_number(WindingTarget::InvZeta, &circle, 0, None, &ctx)?;
        println!("1/zeta on |s-{center}| = {radius}: {} (raw {:.3e}, {} nodes)", w.count, w.raw_re, w.nodes);
    }
    let length = 10_000;
    let table = mobius_table(length)?;
    let radius = (length as f64).powf(0.9 - 1.0);
    let circle = ContourSpec::circle(Complex64::new(1.0, 0.0), radius)?;
    let w = winding_number(WindingTarget::Mollifier, &circle, length, Some(&table), &ctx)?;
    println!(
        "M_V, V={length}, on |s-1| = V^(a-1) = {radius:.4}: {} zeros (raw {:.6}, {} nodes)",
        w.count, w.raw_re, w.nodes
    );
    Ok(())
}
