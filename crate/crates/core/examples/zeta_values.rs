// zeta, zeta', the chi factor, the approximate functional equation and the
// Hardy Z-function at a few points.

use zetalab::format::decimal;
use zetalab::zetafn::{afe_zeta, chi_factor, hardy_z, second_moment, zero_free_boundary, zeta_em};
use zetalab::{CValue, PrecisionContext};

fn main() -> zetalab::Result<()> {
    let ctx = PrecisionContext::new(128);
    for (re, im) in [(2.0, 0.0), (0.0, 0.0), (0.5, 14.134725141734693), (3.0, 4.0), (-0.5, 20.0)] {
        let s = CValue::from_f64(re, im, 128);
        let z = zeta_em(&s, 0, &ctx)?;
        let dz = zeta_em(&s, 1, &ctx)?;
        println!(
            "zeta({re}+{im}i) = {} + {}i (err {:.1e}); zeta' = {:?}",
            decimal(&z.re, z.err_bound),
            decimal(&z.im, z.err_bound),
            z.err_bound,
            dz.to_c64()
        );
    }
    let s = CValue::from_f64(0.3, 30.0, 128);
    println!("chi(0.3+30i) = {:?}", chi_factor(&s, &ctx)?.to_c64());
    let s = CValue::from_f64(0.5, 100.0, 128);
    let afe = afe_zeta(&s, &ctx)?;
    let em = zeta_em(&s, 0, &ctx)?;
    println!(
        "afe(1/2+100i) = {:?}, envelope {:.3e}, |afe - zeta| = {:.3e}",
        afe.to_c64(),
        afe.err_bound,
        (&afe - &em).abs_f64()
    );
    for t in [0.0, 14.134725, 18.0] {
        let z = hardy_z(t, &ctx)?;
        println!("Z({t}) = {}", decimal(&z.value, z.err_bound));
    }
    let m = second_moment(2.0, 0.0, 1.0, &ctx)?;
    println!("int_0^1 |zeta(2+it)|^2 dt = {}", decimal(&m.value, m.err_bound));
    println!("zero-free boundary at t = 0, 10^6: {}, {}", zero_free_boundary(0.0), zero_free_boundary(1e6));
    Ok(())
}
