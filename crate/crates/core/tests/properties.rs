use num_complex::Complex64;
use proptest::prelude::*;
use rug::Float;
use zetalab::contours::{rectangle_shift, winding_number, winding_sum, ContourSpec, WindingTarget};
use zetalab::dirichlet::{m_v, p_weight};
use zetalab::experiments::{build_params, check_bound, check_lemma1, Overrides, Probe, Regime};
use zetalab::precision::float;
use zetalab::roots::find_mollifier_root;
use zetalab::sieve::{coeff_table, mobius_table, mobius_table_linear, mobius_table_segmented};
use zetalab::zetafn::{chi_factor, hardy_z, zero_free_boundary, zeta_em};
use zetalab::{CValue, PrecisionContext};

fn light() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

#[test]
fn segmented_sieve_matches_linear_to_a_million() {
    let limit = 1_000_000;
    let a = mobius_table_linear(limit);
    let b = mobius_table_segmented(limit, 32_768);
    assert_eq!(a.mu_slice(), b.mu_slice());
    assert_eq!(a.divisor_slice(), b.divisor_slice());
}

#[test]
fn unshifted_coefficients_match_divisor_enumeration() {
    let length = 120;
    let table = mobius_table(length).unwrap();
    let coeffs = coeff_table(length, &Float::new(64), 10_000).unwrap();
    for n in 1..=10_000usize {
        let brute: i64 = (1..=length.min(n)).filter(|d| n % d == 0).map(|d| i64::from(table.mu(d))).sum();
        assert_eq!(coeffs.get(n).to_f64(), brute as f64, "n = {n}");
    }
}

#[test]
fn hardy_z_changes_sign_thirteen_times_on_ten_to_sixty() {
    let ctx = PrecisionContext::new(64);
    let mut prev = hardy_z(10.0, &ctx).unwrap().to_f64();
    let mut count = 0;
    for k in 1..=1000 {
        let cur = hardy_z(10.0 + 0.05 * f64::from(k), &ctx).unwrap().to_f64();
        if cur.signum() != prev.signum() {
            count += 1;
        }
        prev = cur;
    }
    assert_eq!(count, 13);
}

#[test]
fn zero_free_boundary_non_decreasing_past_705() {
    let mut prev = zero_free_boundary(705.0);
    for k in 1..2000 {
        let t = 705.0 * 1.01f64.powi(k);
        let cur = zero_free_boundary(t);
        assert!(cur >= prev);
        assert_eq!(cur, zero_free_boundary(-t));
        prev = cur;
    }
}

#[test]
fn rectangle_shift_recombines() {
    let ctx = PrecisionContext::new(64);
    for (sigma, t, length) in [(2.5, 1.0, 20), (2.2, -3.0, 30)] {
        let s = CValue::from_f64(sigma, t, 64);
        let c = 1.0 / (length as f64).ln();
        let shift = rectangle_shift(&s, length, c, -0.5, 50.0, &ctx).unwrap();
        let gap = (&shift.vertical - &shift.recombined).abs_f64();
        assert!(gap <= shift.vertical.err_bound + shift.recombined.err_bound + 1e-9, "gap {gap:e}");
    }
}

#[test]
fn bound_reports_are_reproducible() {
    let ctx = PrecisionContext::new(128);
    let params = build_params(Regime::Doublestar, 1000, 14.134725141734693, 0.5, &Overrides::default()).unwrap();
    let grid = [Probe::At(Complex64::new(1.5, 0.0)), Probe::At(Complex64::new(2.0, 1.0))];
    let a = serde_json::to_string(&check_bound(3, &params, &grid, &ctx).unwrap()).unwrap();
    let b = serde_json::to_string(&check_bound(3, &params, &grid, &ctx).unwrap()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(light())]

    #[test]
    fn mobius_sums_to_indicator(n in 1usize..20_000) {
        let table = mobius_table(n).unwrap();
        let total: i64 = (1..=n).filter(|d| n % d == 0).map(|d| i64::from(table.mu(d))).sum();
        prop_assert_eq!(total, i64::from(n == 1));
    }

    #[test]
    fn segmented_sieve_agrees(limit in 1usize..60_000, segment in 16usize..5_000) {
        let a = mobius_table_linear(limit);
        let b = mobius_table_segmented(limit, segment);
        prop_assert_eq!(a.mu_slice(), b.mu_slice());
        prop_assert_eq!(a.divisor_slice(), b.divisor_slice());
    }

    // |c_n(shift) - c_n(0)| <= |shift| e^{|shift| log V} sum_{d|n, d<=V} log d.
    #[test]
    fn shifted_coefficients_stay_near_unshifted(length in 2usize..300, shift in -0.5f64..0.5) {
        let limit = 3 * length;
        let shifted = coeff_table(length, &float(128, shift), limit).unwrap();
        let plain = coeff_table(length, &Float::new(128), limit).unwrap();
        let grow = (shift.abs() * (length as f64).ln()).exp();
        for n in 1..=limit {
            let logs: f64 = (1..=length.min(n)).filter(|d| n % d == 0).map(|d| (d as f64).ln()).sum();
            let gap = Float::with_val(128, shifted.get(n) - plain.get(n)).abs().to_f64();
            prop_assert!(gap <= shift.abs() * grow * logs + 1e-25, "n={} gap={:e}", n, gap);
        }
    }

    #[test]
    fn functional_equation(sigma in 0.01f64..0.99, t in 6.3f64..100.0, flip in any::<bool>()) {
        let ctx = PrecisionContext::new(128);
        let s = CValue::from_f64(sigma, if flip { -t } else { t }, 128);
        let lhs = zeta_em(&s, 0, &ctx).unwrap();
        let rhs = &chi_factor(&s, &ctx).unwrap() * &zeta_em(&(&CValue::one(128) - &s), 0, &ctx).unwrap();
        prop_assert!((&lhs - &rhs).abs_f64() <= lhs.err_bound + rhs.err_bound);
    }

    // Doubling the precision never moves a digit the error bound vouched for.
    #[test]
    fn precision_doubling_keeps_digits(sigma in -3.0f64..4.0, t in -80.0f64..80.0) {
        prop_assume!((sigma - 1.0).abs() > 1e-3 || t.abs() > 1e-3);
        let low = zeta_em(&CValue::from_f64(sigma, t, 128), 0, &PrecisionContext::new(128)).unwrap();
        let high = zeta_em(&CValue::from_f64(sigma, t, 256), 0, &PrecisionContext::new(256)).unwrap();
        prop_assert!((&low - &high).abs_f64() <= low.err_bound + high.err_bound);
    }

    #[test]
    fn poisson_weights_partition_unity(u in 0.0f64..20.0, k in 60u32..200) {
        let uf = float(256, u);
        let mut total = Float::new(256);
        for j in 0..=k {
            total += p_weight(j, &uf);
        }
        // Tail of the exponential series past K.
        let tail = p_weight(k + 1, &uf).to_f64() * 2.0;
        let sum = total.to_f64();
        prop_assert!(sum <= 1.0 + 1e-60 && sum >= 1.0 - tail - 1e-60);
    }

    #[test]
    fn lemma1_report_is_deterministic(half_j in 1u32..9) {
        let a = serde_json::to_string(&check_lemma1(2 * half_j, 1e-2).unwrap()).unwrap();
        let b = serde_json::to_string(&check_lemma1(2 * half_j, 1e-2).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    // No zero or pole of zeta other than s = 1 lies within 1 of 1 or of 3.
    #[test]
    fn winding_invariant_under_deformation(radius in 0.1f64..0.9, dx in -0.05f64..0.05, dy in -0.05f64..0.05) {
        let ctx = PrecisionContext::new(64);
        for (center, expect) in [(1.0, 1), (3.0, 0)] {
            let circle = ContourSpec::circle(Complex64::new(center + dx, dy), radius).unwrap();
            let w = winding_number(WindingTarget::InvZeta, &circle, 0, None, &ctx).unwrap();
            prop_assert_eq!(w.count, expect);
            let doubled = winding_sum(WindingTarget::InvZeta, &circle, 0, None, 2 * w.nodes).unwrap();
            prop_assert_eq!(doubled.re.round() as i64, expect);
        }
    }

    #[test]
    fn mollifier_root_recheck_at_double_precision(length in 3usize..3000) {
        let ctx = PrecisionContext::new(128);
        let table = mobius_table(length).unwrap();
        let first = find_mollifier_root(length, 1.0, &table, &ctx).unwrap();
        let again = find_mollifier_root(length, 1.0, &table, &ctx).unwrap();
        prop_assert_eq!(&first.value, &again.value);
        prop_assert_eq!(first.bracket, again.bracket);
        if first.status == zetalab::roots::RootStatus::Found {
            let at = CValue::real(Float::with_val(256, &first.value));
            let m = m_v(&at, length, &table, &PrecisionContext::new(256)).unwrap();
            prop_assert!(m.abs_f64() <= 4.0 * first.residual.max(1e-30));
        }
    }
}
