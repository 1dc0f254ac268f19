// Moebius and divisor tables: linear vs segmented construction, Mertens
// values, and a shifted mollifier coefficient table.

use zetalab::precision::float;
use zetalab::sieve::{coeff_table, mobius_table_linear, mobius_table_segmented};

fn main() -> zetalab::Result<()> {
    let limit = 1_000_000;
    let started = std::time::Instant::now();
    let linear = mobius_table_linear(limit);
    let t_linear = started.elapsed();
    let started = std::time::Instant::now();
    let segmented = mobius_table_segmented(limit, 1 << 16);
    let t_segmented = started.elapsed();
    assert_eq!(linear.mu_slice(), segmented.mu_slice());
    assert_eq!(linear.divisor_slice(), segmented.divisor_slice());
    println!("N = {limit}: linear {t_linear:.2?}, segmented {t_segmented:.2?}, tables agree");
    for x in [10, 100, 1000, 10_000, 100_000, 1_000_000] {
        println!("  M({x}) = {}", linear.mertens(x));
    }
    let coeffs = coeff_table(100, &float(128, -0.01), 200)?;
    for n in [1, 7, 30, 150, 199] {
        println!("  c_{n} (V=100, shift -0.01) = {:.12}", coeffs.get(n).to_f64());
    }
    Ok(())
}
