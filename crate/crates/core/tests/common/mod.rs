//! Route-independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library: Bessel values come from direct
//! series (statrs for Γ) or a trapezoid rule on an integral representation,
//! hypergeometric sums are exact rationals, and quadrature is plain
//! adaptive Simpson.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::gamma;

/// `|a - b| <= tol * max(1, |b|)`
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Exact rational from an f64, which is itself a dyadic rational.
pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `pFq(a; b; x)` summed exactly in rationals until the term drops below
/// `1e-40` of the running sum (and past the largest term).
pub fn pfq_exact(a: &[BigRational], b: &[BigRational], x: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let mut peak = 1.0f64;
    for k in 0..20_000u32 {
        let kq = BigRational::from_integer(BigInt::from(k));
        let mut num = x.clone();
        for ai in a {
            num *= ai + &kq;
        }
        let mut den = &kq + BigRational::one();
        for bi in b {
            den *= bi + &kq;
        }
        if num.is_zero() {
            return sum;
        }
        term = term * num / den;
        sum += &term;
        let t = term.abs().to_f64().unwrap_or(f64::INFINITY);
        let s = sum.abs().to_f64().unwrap_or(f64::INFINITY);
        peak = peak.max(t);
        if t < peak && t <= 1e-40 * s.max(1e-300) {
            return sum;
        }
    }
    panic!("exact pFq sum did not settle");
}

pub fn pfq_exact_f64(a: &[f64], b: &[f64], x: f64) -> f64 {
    let a: Vec<_> = a.iter().map(|&v| rat(v)).collect();
    let b: Vec<_> = b.iter().map(|&v| rat(v)).collect();
    pfq_exact(&a, &b, &rat(x)).to_f64().unwrap()
}

/// `1/Γ(g)`, reflecting below 1/2 with `sin πg` reduced to the nearest
/// integer; statrs reflects with an unreduced sine, which costs digits
/// near negative integers.
pub fn recip_gamma(g: f64) -> f64 {
    if g >= 0.5 {
        return 1.0 / gamma(g);
    }
    let n = g.round();
    let sign = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let sin_pi = sign * (PI * (g - n)).sin();
    sin_pi * gamma(1.0 - g) / PI
}

/// `J_ν(z)` (sign -1) or `I_ν(z)` (sign +1) from the defining power series.
///
/// Γ is called once and the remaining reciprocals follow by recurrence, so
/// its rounding is a common factor; near integer orders `Y` divides a
/// difference of two such series by `sin πν` and would amplify independent
/// per-term errors.
pub fn bessel_series(nu: f64, z: f64, sign: f64) -> f64 {
    let x = 0.25 * z * z;
    // first term with a finite Γ(k + ν + 1)
    let mut k0 = 0u32;
    while {
        let g = k0 as f64 + nu + 1.0;
        g <= 0.0 && g == g.floor()
    } {
        k0 += 1;
    }
    let mut term = {
        let mut t = recip_gamma(k0 as f64 + nu + 1.0);
        for k in 1..=k0 {
            t *= sign * x / k as f64;
        }
        t
    };
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in k0..k0 + 200 {
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if k > k0 + 10 && term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let kf = (k + 1) as f64;
        term *= sign * x / (kf * (kf + nu));
    }
    (0.5 * z).powf(nu) * sum
}

pub fn j(nu: f64, z: f64) -> f64 {
    bessel_series(nu, z, -1.0)
}

pub fn i(nu: f64, z: f64) -> f64 {
    bessel_series(nu, z, 1.0)
}

/// `Y_ν` from `J_{±ν}`; `ν` must not be an integer.
pub fn y(nu: f64, z: f64) -> f64 {
    let (s, c) = (PI * nu).sin_cos();
    (j(nu, z) * c - j(-nu, z)) / s
}

/// `K_ν(z) = ∫_0^∞ e^{-z cosh t} cosh(νt) dt` by the trapezoid rule, which
/// converges geometrically for this analytic, doubly-exponentially
/// decaying integrand. Valid at every real order.
pub fn k(nu: f64, z: f64) -> f64 {
    let h = 1.0 / 64.0;
    let mut sum = 0.5 * (-z).exp();
    let mut n = 1;
    loop {
        let t = n as f64 * h;
        let ex = -z * t.cosh();
        let term = (ex + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp());
        sum += term;
        if ex + nu.abs() * t < -800.0 {
            break;
        }
        n += 1;
    }
    h * sum
}

/// Two-level Richardson central difference in `ν`, steps `1e-4` and `5e-5`.
pub fn richardson(f: impl Fn(f64) -> f64, nu: f64) -> f64 {
    let d = |h: f64| (f(nu + h) - f(nu - h)) / (2.0 * h);
    let (d1, d2) = (d(1e-4), d(5e-5));
    (4.0 * d2 - d1) / 3.0
}

/// Order derivative of the named base function by the difference oracle.
pub fn fd_oracle(kind: &str, nu: f64, z: f64) -> f64 {
    match kind {
        "dJ" => richardson(|n| j(n, z), nu),
        "dY" => richardson(|n| y(n, z), nu),
        "dI" => richardson(|n| i(n, z), nu),
        "dK" => richardson(|n| k(n, z), nu),
        "dJYprod" => richardson(|n| j(n, z) * y(n, z), nu),
        other => panic!("no oracle for {other}"),
    }
}

/// Adaptive Simpson on `[a, b]`.
pub fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `∫_0^1 e^{-c/u} du`, which equals `∫_1^∞ e^{-ct}/t² dt`.
pub fn exp_over_t_squared_tail(c: f64) -> f64 {
    let f = |u: f64| if u <= 0.0 { 0.0 } else { (-c / u).exp() };
    simpson(&f, 0.0, 1.0, 1e-15)
}
