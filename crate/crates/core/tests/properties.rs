//! Randomized identities over the public surface.

mod common;

use std::f64::consts::PI;

use common::close;
use nu_deriv::bessel::{bessel_i, bessel_j, bessel_k, bessel_y};
use nu_deriv::derivs::{deriv, deriv_relation, DerivKind, Method};
use nu_deriv::harness::{run_consistency, GridSpec, Kind, Tolerances};
use nu_deriv::integrals::{g40, integral_closed, integral_meijer, IntegralKind};
use nu_deriv::scalar::{digamma, gamma, pochhammer};
use proptest::prelude::*;

fn off_integer(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_filter("away from integers", |v: &f64| (v - v.round()).abs() > 0.02)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(x in off_integer(-10.0, 10.0)) {
        let (a, b) = (gamma(x + 1.0).unwrap(), x * gamma(x).unwrap());
        prop_assert!((a - b).abs() <= 1e-13 * b.abs());
    }

    #[test]
    fn gamma_duplication(x in 0.01f64..10.0) {
        let lhs = 2f64.powf(2.0 * x - 1.0) * gamma(x).unwrap() * gamma(x + 0.5).unwrap();
        let rhs = PI.sqrt() * gamma(2.0 * x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn digamma_recurrence_and_reflection(x in off_integer(-8.0, 8.0)) {
        let rec = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        prop_assert!(rec.abs() <= 1e-13 * (1.0 / x).abs().max(1.0));
        let refl = digamma(1.0 - x).unwrap() - digamma(x).unwrap() - PI / (PI * x).tan();
        prop_assert!(refl.abs() <= 1e-13 * (PI / (PI * x).tan()).abs().max(1.0));
    }

    #[test]
    fn pochhammer_step(alpha in -6.0f64..6.0, k in 0u32..20) {
        let (a, b) = (pochhammer(alpha, k + 1), pochhammer(alpha, k) * (alpha + k as f64));
        prop_assert!((a - b).abs() <= 1e-14 * b.abs().max(1e-300));
    }

    #[test]
    fn wronskians(nu in 0.0f64..4.0, z in 0.3f64..25.0) {
        let w = bessel_j(nu + 1.0, z).unwrap() * bessel_y(nu, z).unwrap()
            - bessel_j(nu, z).unwrap() * bessel_y(nu + 1.0, z).unwrap();
        prop_assert!((w - 2.0 / (PI * z)).abs() <= 1e-10, "cylinder {}", w * PI * z / 2.0);
        let m = z * (bessel_i(nu, z).unwrap() * bessel_k(nu + 1.0, z).unwrap()
            + bessel_i(nu + 1.0, z).unwrap() * bessel_k(nu, z).unwrap());
        prop_assert!((m - 1.0).abs() <= 1e-10, "modified {m}");
    }

    #[test]
    fn k_is_even_in_order(nu in 0.0f64..6.0, z in 0.1f64..40.0) {
        prop_assert_eq!(bessel_k(nu, z).unwrap(), bessel_k(-nu, z).unwrap());
    }

    #[test]
    fn meijer_instances_with_both_orders_in_the_m_block_are_even(nu in 0.0f64..3.0, z in 0.3f64..6.0) {
        // G^{4,0} keeps ν and -ν among the first m lower parameters; in
        // G^{3,0} and G^{3,1} they sit on opposite sides and no symmetry holds
        let x = z * z;
        prop_assert_eq!(g40(nu, x).unwrap().value, g40(-nu, x).unwrap().value);
        prop_assert_eq!(
            integral_meijer(IntegralKind::K2, nu, z).unwrap().value,
            integral_meijer(IntegralKind::K2, -nu, z).unwrap().value
        );
    }

    #[test]
    fn dk_is_odd_in_order(nu in off_integer(0.05, 3.95), z in 0.3f64..10.0) {
        let a = deriv_relation(DerivKind::DK, nu, z).unwrap().value;
        let b = deriv_relation(DerivKind::DK, -nu, z).unwrap().value;
        prop_assert!((a + b).abs() <= 1e-10 * a.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closed_and_meijer_agree(nu in off_integer(0.05, 3.95), z in 0.3f64..10.0) {
        for kind in [DerivKind::DJ, DerivKind::DY, DerivKind::DI, DerivKind::DK] {
            let a = deriv(kind, nu, z, Method::Closed).unwrap();
            let b = deriv(kind, nu, z, Method::Meijer).unwrap();
            let tol = 1e-6f64.max(a.error_estimate).max(b.error_estimate);
            prop_assert!(close(a.value, b.value, tol), "{} {} {}: {} vs {}", kind, nu, z, a.value, b.value);
        }
    }

    #[test]
    fn product_rule(nu in off_integer(0.05, 3.95), z in 0.3f64..10.0) {
        let p = deriv(DerivKind::DJYProduct, nu, z, Method::Closed).unwrap().value;
        let dj = deriv(DerivKind::DJ, nu, z, Method::Closed).unwrap().value;
        let dy = deriv(DerivKind::DY, nu, z, Method::Closed).unwrap().value;
        let rule = bessel_y(nu, z).unwrap() * dj + bessel_j(nu, z).unwrap() * dy;
        prop_assert!(close(p, rule, 1e-7));
    }

    #[test]
    fn tail_integrals_decrease_in_z(nu in off_integer(0.1, 2.9), z in 0.3f64..6.0) {
        // positive integrands over (z, ∞)
        for kind in [IntegralKind::IK, IntegralKind::K2] {
            let a = integral_closed(kind, nu, z).unwrap().value;
            let b = integral_closed(kind, nu, z * 1.1).unwrap().value;
            prop_assert!(b < a);
        }
    }
}

#[test]
fn report_is_deterministic() {
    let grid = GridSpec::new(
        vec![0.6, 2.0],
        vec![1.0, 5.0],
        vec![Kind::Deriv(DerivKind::DK), Kind::Integral(IntegralKind::JY)],
        vec![Method::Closed, Method::Meijer, Method::FiniteDifference],
    )
    .unwrap();
    let a = run_consistency(&grid, Tolerances::default())
        .unwrap()
        .to_json();
    let b = run_consistency(&grid, Tolerances::default())
        .unwrap()
        .to_json();
    assert_eq!(a, b);
}
