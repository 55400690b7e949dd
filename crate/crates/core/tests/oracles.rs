//! Library values against the independent oracles in `common`.

mod common;

use std::f64::consts::PI;

use common::*;
use nu_deriv::bessel::{asympt_k, bessel_i, bessel_j, bessel_k, bessel_y};
use nu_deriv::derivs::{
    deriv, deriv_closed, deriv_meijer, deriv_relation, deriv_series, DerivKind, Method,
};
use nu_deriv::hypergeom::{
    asym_pfq_exponential, asym_pfq_oscillatory, bessel_square_2f3, eval_pfq, log_companion_3f4,
    HypergeometricSpec,
};
use nu_deriv::integrals::{integral_closed, integral_meijer, integral_quadrature, IntegralKind};
use nu_deriv::meijer::{eval_meijer, pfq_to_meijer};
use nu_deriv::scalar::gamma as lib_gamma;
use num_traits::ToPrimitive;

#[test]
fn bessel_values_match_series_oracle() {
    for &(nu, z) in &[(1.7, 3.2), (0.3, 0.5), (2.6, 8.0), (0.0, 2.0), (3.7, 5.0)] {
        let (a, b) = (bessel_j(nu, z).unwrap(), j(nu, z));
        assert!(close(a, b, 1e-11), "J({nu},{z}) {a} vs {b}");
    }
    for &(nu, z) in &[(2.3, 4.0), (0.5, 1.0), (1.4, 8.0), (0.0, 0.1)] {
        let (a, b) = (bessel_i(nu, z).unwrap(), i(nu, z));
        assert!((a - b).abs() <= 1e-11 * b.abs(), "I({nu},{z}) {a} vs {b}");
    }
}

#[test]
fn bessel_j_matches_exact_rational_series() {
    // J_ν(z) = (z/2)^ν/Γ(ν+1) · 0F1(; ν+1; -z²/4), the 0F1 summed exactly
    let (nu, z) = (1.7, 3.2);
    let f = pfq_exact_f64(&[], &[nu + 1.0], -0.25 * z * z);
    let oracle = (0.5 * z).powf(nu) / statrs::function::gamma::gamma(nu + 1.0) * f;
    let v = bessel_j(nu, z).unwrap();
    assert!(
        (v - oracle).abs() <= 1e-12 * oracle.abs(),
        "{v} vs {oracle}"
    );
}

#[test]
fn y_and_k_match_oracles_off_integers() {
    for &(nu, z) in &[(1.4, 0.8), (0.25, 2.0), (2.4, 8.0), (3.7, 0.5)] {
        let (a, b) = (bessel_y(nu, z).unwrap(), y(nu, z));
        assert!(close(a, b, 1e-10), "Y({nu},{z}) {a} vs {b}");
    }
    for &(nu, z) in &[
        (0.0, 2.0),
        (1.0, 0.5),
        (2.5, 2.0),
        (0.6, 8.0),
        (3.0, 20.0),
        (0.3, 40.0),
    ] {
        let (a, b) = (bessel_k(nu, z).unwrap(), k(nu, z));
        assert!((a - b).abs() <= 1e-12 * b, "K({nu},{z}) {a} vs {b}");
    }
}

#[test]
fn integer_order_y_against_symmetric_limit() {
    // (Y_ε + Y_-ε)/2 = Y_0 + O(ε²); two levels of ε remove that term
    let z = 2.0;
    let avg = |e: f64| 0.5 * (y(e, z) + y(-e, z));
    let oracle = (4.0 * avg(1e-3) - avg(2e-3)) / 3.0;
    let v = bessel_y(0.0, z).unwrap();
    assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
}

#[test]
fn large_argument_k_form_is_within_a_permille() {
    let (a, b) = (asympt_k(1.0, 20.0).unwrap(), k(1.0, 20.0));
    assert!((a - b).abs() <= 1e-3 * b);
}

#[test]
fn gamma_at_negative_half_integer_by_recurrence() {
    // Γ(-1.5) = Γ(2.5) / ((-1.5)(-0.5)(0.5)(1.5)), Γ(2.5) = 1.5·0.5·√π
    let g25 = 1.5 * 0.5 * PI.sqrt();
    let oracle = g25 / (-1.5 * -0.5 * 0.5 * 1.5);
    assert!((lib_gamma(-1.5).unwrap() - oracle).abs() <= 1e-14 * oracle);
}

#[test]
fn pfq_matches_exact_sums() {
    let cases: &[(&[f64], &[f64], f64)] = &[
        (&[0.8, 1.3], &[1.8, 1.8, 2.6], -25.0),
        (&[1.0, 1.0, 1.5], &[2.0, 2.0, 1.5, 2.5], -1.0),
        (&[0.25], &[1.5, 0.75], 12.0),
        (&[], &[1.0], -9.0),
        (&[0.3, 0.8], &[1.3, 1.3, 1.6], 64.0),
    ];
    for (a, b, x) in cases {
        let spec = HypergeometricSpec::new(a.to_vec(), b.to_vec()).unwrap();
        let v = eval_pfq(&spec, *x).unwrap().value;
        let oracle = pfq_exact_f64(a, b, *x);
        assert!(
            (v - oracle).abs() <= 1e-12 * oracle.abs().max(1.0),
            "{a:?} {b:?} {x}: {v} vs {oracle}"
        );
    }
}

#[test]
fn log_companion_at_half_order_matches_exact_sum() {
    let oracle = pfq_exact(
        &[ratio(1, 1), ratio(1, 1), ratio(3, 2)],
        &[ratio(2, 1), ratio(2, 1), ratio(3, 2), ratio(5, 2)],
        &ratio(-1, 1),
    )
    .to_f64()
    .unwrap();
    let v = log_companion_3f4(0.5, -1.0).unwrap().value;
    assert!((v - oracle).abs() <= 1e-15, "{v} vs {oracle}");
    let v = log_companion_3f4(0.6, -400.0).unwrap().value;
    let oracle = pfq_exact(
        &[ratio(1, 1), ratio(1, 1), ratio(3, 2)],
        &[ratio(2, 1), ratio(2, 1), ratio(7, 5), ratio(13, 5)],
        &ratio(-400, 1),
    )
    .to_f64()
    .unwrap();
    assert!(
        (v - oracle).abs() <= 1e-13 * oracle.abs().max(1e-3),
        "{v} vs {oracle}"
    );
}

#[test]
fn bessel_square_series_matches_quadrature_of_j_squared() {
    // 2F3(ν,ν+1/2; ν+1,ν+1,2ν+1; -z²) = 2νΓ²(ν+1)/(z/2)^{2ν} ∫_0^z J_ν²/t dt
    let (nu, z) = (1.0, 2.0);
    let f = |t: f64| if t == 0.0 { 0.0 } else { j(nu, t).powi(2) / t };
    let integral = simpson(&f, 0.0, z, 1e-15);
    let g = statrs::function::gamma::gamma(nu + 1.0);
    let oracle = 2.0 * nu * g * g / (0.5 * z).powf(2.0 * nu) * integral;
    let v = bessel_square_2f3(nu, -z * z).unwrap().value;
    assert!((v - oracle).abs() <= 1e-9, "{v} vs {oracle}");
}

#[test]
fn leading_asymptotics_within_two_percent_of_exact_sums() {
    let spec = |nu: f64| {
        HypergeometricSpec::new(vec![nu, nu + 0.5], vec![nu + 1.0, nu + 1.0, 2.0 * nu + 1.0])
            .unwrap()
    };
    let (nu, x) = (0.3, -400.0);
    let exact = pfq_exact_f64(&[nu, nu + 0.5], &[nu + 1.0, nu + 1.0, 2.0 * nu + 1.0], x);
    let v = asym_pfq_oscillatory(&spec(nu), x).unwrap();
    assert!((v - exact).abs() <= 0.02 * exact.abs(), "{v} vs {exact}");
    let (nu, x) = (0.4, 450.0);
    let exact = pfq_exact_f64(&[nu, nu + 0.5], &[nu + 1.0, nu + 1.0, 2.0 * nu + 1.0], x);
    let v = asym_pfq_exponential(&spec(nu), x).unwrap();
    assert!((v - exact).abs() <= 0.02 * exact.abs(), "{v} vs {exact}");
}

#[test]
fn meijer_bridge_reproduces_exact_sums() {
    let nu = 0.8;
    let a = [nu, nu + 0.5];
    let b = [nu + 1.0, nu + 1.0, 2.0 * nu + 1.0];
    let spec = HypergeometricSpec::new(a.to_vec(), b.to_vec()).unwrap();
    let (g, pref) = pfq_to_meijer(&spec).unwrap();
    for x in [0.5, 3.0, 11.0, 20.0] {
        let v = pref * eval_meijer(&g, x).unwrap().value;
        let oracle = pfq_exact_f64(&a, &b, -x);
        assert!(
            (v - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
            "x={x}: {v} vs {oracle}"
        );
    }
}

#[test]
fn half_order_integrals_by_reduction() {
    // I_{1/2}K_{1/2} = (1-e^{-2t})/(2t) and K_{1/2}² = (π/2)e^{-2t}/t
    let tail = exp_over_t_squared_tail(2.0);
    let ik = 0.5 - 0.5 * tail;
    let k2 = 0.5 * PI * tail;
    for v in [
        integral_closed(IntegralKind::IK, 0.5, 1.0).unwrap().value,
        integral_meijer(IntegralKind::IK, 0.5, 1.0).unwrap().value,
        integral_quadrature(IntegralKind::IK, 0.5, 1.0)
            .unwrap()
            .value,
    ] {
        assert!((v - ik).abs() < 1e-10, "{v} vs {ik}");
    }
    for v in [
        integral_closed(IntegralKind::K2, 0.5, 1.0).unwrap().value,
        integral_meijer(IntegralKind::K2, 0.5, 1.0).unwrap().value,
        integral_quadrature(IntegralKind::K2, 0.5, 1.0)
            .unwrap()
            .value,
    ] {
        assert!((v - k2).abs() < 1e-10, "{v} vs {k2}");
    }
}

#[test]
fn finite_range_integrals_match_simpson() {
    for &(nu, z) in &[(0.3, 0.5), (0.75, 2.0), (1.4, 5.0), (2.6, 1.0)] {
        let fj = |t: f64| if t == 0.0 { 0.0 } else { j(nu, t).powi(2) / t };
        let fi = |t: f64| if t == 0.0 { 0.0 } else { i(nu, t).powi(2) / t };
        // t^{2ν-1} is singular at 0 for ν < 1/2; split off a short head
        let head = 1e-6f64;
        let jo = simpson(&fj, head, z, 1e-14)
            + (0.5 * head).powf(2.0 * nu)
                / (2.0 * nu * statrs::function::gamma::gamma(nu + 1.0).powi(2));
        let io = simpson(&fi, head, z, 1e-14)
            + (0.5 * head).powf(2.0 * nu)
                / (2.0 * nu * statrs::function::gamma::gamma(nu + 1.0).powi(2));
        let jv = integral_closed(IntegralKind::J2, nu, z).unwrap().value;
        let iv = integral_closed(IntegralKind::I2, nu, z).unwrap().value;
        assert!(close(jv, jo, 1e-9), "J2 {nu} {z}: {jv} vs {jo}");
        assert!(close(iv, io, 1e-9), "I2 {nu} {z}: {iv} vs {io}");
    }
}

type Integrand = Box<dyn Fn(f64) -> f64>;

#[test]
fn tail_integrals_are_additive() {
    let (z1, z2) = (1.0, 3.0);
    for &nu in &[0.3, 1.4] {
        let cases: [(IntegralKind, Integrand); 4] = [
            (IntegralKind::JY, Box::new(move |t| j(nu, t) * y(nu, t) / t)),
            (IntegralKind::Y2, Box::new(move |t| y(nu, t).powi(2) / t)),
            (IntegralKind::IK, Box::new(move |t| i(nu, t) * k(nu, t) / t)),
            (IntegralKind::K2, Box::new(move |t| k(nu, t).powi(2) / t)),
        ];
        for (kind, f) in cases {
            let diff = integral_closed(kind, nu, z1).unwrap().value
                - integral_closed(kind, nu, z2).unwrap().value;
            let oracle = simpson(&|t| f(t), z1, z2, 1e-13);
            assert!(
                (diff - oracle).abs() <= 1e-8,
                "{kind} {nu}: {diff} vs {oracle}"
            );
        }
    }
}

#[test]
fn finite_range_integrals_increase_with_z() {
    for kind in [IntegralKind::J2, IntegralKind::I2] {
        let mut prev = 0.0;
        for z in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let v = integral_closed(kind, 0.75, z).unwrap().value;
            assert!(v > prev, "{kind} not increasing at z={z}");
            prev = v;
        }
    }
}

#[test]
fn small_z_ik_follows_the_log_law() {
    // the O(1) term of IK is [ψ(ν)+1/(2ν)]/(2ν), so the ratio to the pure
    // log law only nears 1 like 1/ln(1/z)
    let nu = 0.8;
    let gap = |z: f64| {
        let v = integral_closed(IntegralKind::IK, nu, z).unwrap().value;
        (v / ((2.0 / z).ln() / (2.0 * nu)) - 1.0).abs()
    };
    let (g3, g8) = (gap(1e-3), gap(1e-8));
    assert!(g8 <= 0.02, "gap {g8} at z = 1e-8");
    assert!(g8 < g3 && g3 < 0.05);
}

#[test]
fn derivative_examples_against_difference_oracle() {
    let cases: &[(DerivKind, &str, f64, f64, Method, f64)] = &[
        (DerivKind::DJ, "dJ", 0.5, 1.0, Method::Series, 1e-8),
        (DerivKind::DK, "dK", 0.5, 1.0, Method::Series, 1e-7),
        (DerivKind::DI, "dI", 2.3, 4.0, Method::Closed, 1e-7),
        (
            DerivKind::DJYProduct,
            "dJYprod",
            0.7,
            2.0,
            Method::Closed,
            1e-7,
        ),
        (DerivKind::DI, "dI", 1.0, 2.0, Method::Meijer, 1e-6),
        (DerivKind::DI, "dI", 0.5, 1.0, Method::Closed, 1e-7),
    ];
    for &(kind, name, nu, z, method, tol) in cases {
        let v = deriv(kind, nu, z, method).unwrap().value;
        let oracle = fd_oracle(name, nu, z);
        assert!(
            close(v, oracle, tol),
            "{name} {nu} {z} {method:?}: {v} vs {oracle}"
        );
    }
}

#[test]
fn order_zero_derivatives_against_difference_oracle() {
    // at ν = 0 the oracle differences J_{±h} directly
    let z = 2.0;
    let dj = deriv_series(DerivKind::DJ, 0.0, z).unwrap().value;
    let di = deriv_series(DerivKind::DI, 0.0, z).unwrap().value;
    assert!((dj - fd_oracle("dJ", 0.0, z)).abs() < 1e-8);
    assert!((di - fd_oracle("dI", 0.0, z)).abs() < 1e-8);
    let mj = deriv_meijer(DerivKind::DJ, 0.0, z).unwrap().value;
    assert!((mj - dj).abs() < 1e-9);
    // and the limits are (π/2)Y_0 and -K_0
    assert!((dj - 0.5 * PI * bessel_y(0.0, z).unwrap()).abs() < 1e-12);
    assert!((di + k(0.0, z)).abs() < 1e-12);
}

#[test]
fn order_zero_limits_converge_linearly() {
    let z = 2.0;
    let y0 = 0.5 * PI * bessel_y(0.0, z).unwrap();
    let k0 = k(0.0, z);
    let dev = |kind: DerivKind, nu: f64, limit: f64| {
        (deriv(kind, nu, z, Method::Meijer).unwrap().value - limit).abs()
    };
    for (kind, limit) in [(DerivKind::DJ, y0), (DerivKind::DI, -k0)] {
        let r = dev(kind, 1e-2, limit) / dev(kind, 1e-3, limit);
        assert!((r - 10.0).abs() < 1.0, "{kind}: ratio {r}");
    }
}

#[test]
fn relation_and_closed_agree() {
    for &(nu, z) in &[(1.5, 2.0), (0.6, 5.0), (2.4, 0.5)] {
        for kind in [DerivKind::DY, DerivKind::DK] {
            let a = deriv_relation(kind, nu, z).unwrap().value;
            let b = deriv_closed(kind, nu, z).unwrap().value;
            assert!(close(a, b, 1e-9), "{kind} {nu} {z}: {a} vs {b}");
        }
    }
}

#[test]
fn auto_dispatch_examples() {
    assert_eq!(
        deriv(DerivKind::DJ, 2.0, 1.5, Method::Auto).unwrap().route,
        "meijer"
    );
    assert_eq!(
        deriv(DerivKind::DK, 0.6, 2.0, Method::Auto).unwrap().route,
        "closed"
    );
    let a = deriv(DerivKind::DI, 0.6, 2.0, Method::Auto).unwrap().value;
    let b = deriv(DerivKind::DI, 0.6, 2.0, Method::Meijer)
        .unwrap()
        .value;
    assert!(close(a, b, 1e-6));
}
