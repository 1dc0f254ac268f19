// Poisson-weight inequalities, the decay and growth bounds for F_V, and the
// derivative-expansion check, all at V = 10^4.

use num_complex::Complex64;
use zetalab::experiments::{build_params, check_bound, check_expansion, check_lemma1, Overrides, Probe, Regime};
use zetalab::PrecisionContext;

fn show(rep: &zetalab::experiments::BoundReport) {
    println!(
        "{}: lhs {:.3e} rhs {:.3e} ratio {:.3e} hypotheses {}",
        rep.lemma_id, rep.lhs, rep.rhs_envelope, rep.ratio, rep.hypotheses_satisfied
    );
    for row in &rep.rows {
        println!(
            "    {:<40} {:.3e} / {:.3e} = {:.3e}{}",
            row.label,
            row.lhs,
            row.rhs,
            row.ratio,
            if row.in_domain { "" } else { "  (outside domain)" }
        );
    }
}

fn main() -> zetalab::Result<()> {
    let started = std::time::Instant::now();
    for big_j in [2, 10, 40] {
        let rep = check_lemma1(big_j, 1e-3)?;
        println!("J={big_j}: violations {:?}, worst margin {:.3e}", rep.violations, rep.lhs);
    }
    println!("lemma 1 checks took {:.2?}", started.elapsed());

    let ctx = PrecisionContext::new(128);
    let gamma1 = 14.134725141734693;
    let dbl = build_params(Regime::Doublestar, 10_000, gamma1, 0.5, &Overrides::default())?;
    let star = build_params(Regime::Star, 10_000, gamma1, 0.5, &Overrides::default())?;
    let line: Vec<Probe> = [0.65, 0.8, 1.2, 1.5, 2.0, 3.0].iter().map(|&x| Probe::At(Complex64::new(x, 0.0))).collect();
    show(&check_bound(3, &dbl, &line, &ctx)?);
    let boundary = star.a - star.r + 2.0 / 10_000f64.ln();
    let mut tilde_line = line.clone();
    tilde_line.push(Probe::At(Complex64::new(boundary, 0.0)));
    show(&check_bound(5, &star, &tilde_line, &ctx)?);
    let shifts: Vec<Probe> = [(0.0, 0.0), (0.05, 0.0), (0.1, -0.05), (0.1, 0.0)]
        .iter()
        .map(|&(w, z)| Probe::Shifted { omega: Complex64::new(w, 0.0), z: Complex64::new(z, 0.0) })
        .collect();
    show(&check_bound(6, &dbl, &shifts, &ctx)?);
    show(&check_bound(7, &star, &shifts, &ctx)?);
    let rep = check_expansion(8, &dbl, &ctx)?;
    show(&rep);
    println!("    partial-sum ratio {}", rep.get("partial_ratio").unwrap_or("?"));
    for n in &rep.notes {
        println!("    note: {n}");
    }
    Ok(())
}
