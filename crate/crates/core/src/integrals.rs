//! Integrals of squares and products of Bessel functions weighted by `1/t`.
//!
//! Each kind has a closed hypergeometric form, most have a Meijer-G form,
//! and all have a direct quadrature built from the Bessel functions
//! themselves, which serves as the independent check on the other two.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bessel::{
    bessel_i, bessel_i_scaled, bessel_j, bessel_k, bessel_k_scaled, bessel_modulus_sq, bessel_y,
    SERIES_LIMIT,
};
use crate::error::{Error, Result};
use crate::hypergeom::{bessel_square_2f3_sq, log_companion_3f4_dd, signed_square};
use crate::meijer::{eval_meijer, MeijerSpec};
use crate::quad::{integrate, integrate_oscillatory, integrate_to_infinity, Tol};
use crate::result::{Combination, EvalResult, Warning};
use crate::scalar::{cos_pi, digamma, gamma, sin_pi};

/// Orders closer than this to an integer are refused by the closed forms.
pub const NEAR_INTEGER_GUARD: f64 = 1e-4;

/// The six weighted integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IntegralKind {
    /// `∫_0^z J_ν²(t)/t dt`
    J2,
    /// `∫_z^∞ J_ν(t)Y_ν(t)/t dt`
    JY,
    /// `∫_z^∞ Y_ν²(t)/t dt`
    Y2,
    /// `∫_0^z I_ν²(t)/t dt`
    I2,
    /// `∫_z^∞ I_ν(t)K_ν(t)/t dt`
    IK,
    /// `∫_z^∞ K_ν²(t)/t dt`
    K2,
}

impl IntegralKind {
    pub const ALL: [IntegralKind; 6] = [Self::J2, Self::JY, Self::Y2, Self::I2, Self::IK, Self::K2];

    pub fn name(self) -> &'static str {
        match self {
            Self::J2 => "J2",
            Self::JY => "JY",
            Self::Y2 => "Y2",
            Self::I2 => "I2",
            Self::IK => "IK",
            Self::K2 => "K2",
        }
    }

    /// Whether a Meijer-G form exists for this kind.
    pub fn has_meijer(self) -> bool {
        self != Self::I2
    }
}

impl fmt::Display for IntegralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegralKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown integral kind '{s}'")))
    }
}

fn check_z(z: f64) -> Result<()> {
    crate::scalar::RealArgument::new(z).map(|_| ())
}

fn require(
    ok: bool,
    formula: &'static str,
    hypothesis: &'static str,
    nu: f64,
    z: f64,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            formula,
            hypothesis,
            nu,
            z,
        })
    }
}

pub(crate) fn away_from_integer(nu: f64) -> bool {
    (nu - nu.round()).abs() >= NEAR_INTEGER_GUARD
}

/// `3F4(1, 1, 3/2; 2, 2, 2-ν, 2+ν; ±z²)`.
pub(crate) fn f34(nu: f64, z: f64, sign: f64) -> Result<EvalResult> {
    f34_dd(nu, z, sign).map(|(r, _)| r)
}

pub(crate) fn f34_dd(nu: f64, z: f64, sign: f64) -> Result<(EvalResult, crate::dd::DoubleDouble)> {
    log_companion_3f4_dd(nu, signed_square(z, sign))
}

/// `(z/2)^{2ν} / (2ν Γ²(ν+1)) · 2F3(ν, ν+1/2; ν+1, ν+1, 2ν+1; ±z²)`, the
/// closed form of `∫_0^z J_ν²/t` (minus sign) and `∫_0^z I_ν²/t` (plus).
pub(crate) fn square_integral(nu: f64, z: f64, sign: f64) -> Result<EvalResult> {
    let f = bessel_square_2f3_sq(nu, z, sign)?;
    let g = gamma(nu + 1.0)?;
    let pref = (0.5 * z).powf(2.0 * nu) / (2.0 * nu * g * g);
    let mut c = Combination::new();
    c.add(pref, &f);
    Ok(c.finish("closed"))
}

/// `z²/(4(1-ν²))·3F4(±z²)`, the logarithmic companion of the 2F3 terms.
fn log_companion(nu: f64, z: f64, sign: f64) -> Result<(f64, EvalResult)> {
    let f = f34(nu, z, sign)?;
    Ok((z * z / (4.0 * (1.0 - nu * nu)), f))
}

/// Closed hypergeometric form of an integral.
pub fn integral_closed(kind: IntegralKind, nu: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    let non_integer = away_from_integer(nu);
    match kind {
        IntegralKind::J2 | IntegralKind::I2 => {
            let name = if kind == IntegralKind::J2 {
                "closed form of int_0^z J_nu^2/t"
            } else {
                "closed form of int_0^z I_nu^2/t"
            };
            require(nu > 0.0, name, "nu > 0", nu, z)?;
            let sign = if kind == IntegralKind::J2 { -1.0 } else { 1.0 };
            square_integral(nu, z, sign)
        }
        IntegralKind::JY => {
            let f = "closed form of int_z^inf J_nu Y_nu/t";
            require(nu > 0.0, f, "nu > 0", nu, z)?;
            require(non_integer, f, "|nu - round(nu)| >= 1e-4", nu, z)?;
            closed_jy(nu, z)
        }
        IntegralKind::Y2 => {
            let f = "closed form of int_z^inf Y_nu^2/t";
            require(nu > 0.0, f, "nu > 0", nu, z)?;
            require(non_integer, f, "|nu - round(nu)| >= 1e-4", nu, z)?;
            closed_y2(nu, z)
        }
        IntegralKind::IK => {
            let f = "closed form of int_z^inf I_nu K_nu/t";
            require(nu > 0.0, f, "nu > 0", nu, z)?;
            require(non_integer, f, "|nu - round(nu)| >= 1e-4", nu, z)?;
            closed_ik(nu, z)
        }
        IntegralKind::K2 => {
            let f = "closed form of int_z^inf K_nu^2/t";
            require(non_integer, f, "|nu - round(nu)| >= 1e-4", nu, z)?;
            closed_k2(nu, z)
        }
    }
}

/// `-(1/πν)[ln(2/z) + ψ(ν) + 1/(2ν) + π cot(πν)(z/2)^{2ν}/(2Γ²(ν+1))·2F3(-z²)
/// + z²/(4(1-ν²))·3F4(-z²)]`
fn closed_jy(nu: f64, z: f64) -> Result<EvalResult> {
    let cot = cos_pi(nu) / sin_pi(nu);
    let j2 = square_integral(nu, z, -1.0)?;
    let (w, f) = log_companion(nu, z, -1.0)?;
    let s = -1.0 / (PI * nu);
    let mut c = Combination::new();
    c.add_scalar(s * ((2.0 / z).ln() + digamma(nu)? + 0.5 / nu));
    // π cot(πν)(z/2)^{2ν}/(2Γ²(ν+1)) F = πν cot(πν) · J2
    c.add(s * PI * nu * cot, &j2);
    c.add(s * w, &f);
    Ok(c.finish("closed"))
}

/// `1/(2π²ν)[(z/2)^{-2ν}Γ²(ν)·2F3(-ν…; -z²) - (z/2)^{2ν}Γ²(-ν)cos²(πν)·2F3(ν…; -z²)]
/// - (1 + 2cot²πν)/(2ν) - (2cot πν/(πν))·[z²/(4(1-ν²))·3F4 + ln(2/z) + 1/(2ν) + ψ(ν)]`
fn closed_y2(nu: f64, z: f64) -> Result<EvalResult> {
    let cot = cos_pi(nu) / sin_pi(nu);
    let cosv = cos_pi(nu);
    let fm = bessel_square_2f3_sq(-nu, z, -1.0)?;
    let fp = bessel_square_2f3_sq(nu, z, -1.0)?;
    let (w, f) = log_companion(nu, z, -1.0)?;
    let gp = gamma(nu)?;
    let gm = gamma(-nu)?;
    let lead = 1.0 / (2.0 * PI * PI * nu);
    let mut c = Combination::new();
    c.add(lead * (0.5 * z).powf(-2.0 * nu) * gp * gp, &fm);
    c.add(
        -lead * (0.5 * z).powf(2.0 * nu) * gm * gm * cosv * cosv,
        &fp,
    );
    c.add_scalar(-(1.0 + 2.0 * cot * cot) / (2.0 * nu));
    let k = -2.0 * cot / (PI * nu);
    c.add(k * w, &f);
    c.add_scalar(k * ((2.0 / z).ln() + 0.5 / nu + digamma(nu)?));
    Ok(c.finish("closed"))
}

/// `1/(2ν)[π csc(πν)(z/2)^{2ν}/(2Γ²(ν+1))·2F3(z²) - z²/(4(1-ν²))·3F4(z²)
/// + ln(2/z) + ψ(ν) + 1/(2ν)]`
fn closed_ik(nu: f64, z: f64) -> Result<EvalResult> {
    let csc = 1.0 / sin_pi(nu);
    let i2 = square_integral(nu, z, 1.0)?;
    let (w, f) = log_companion(nu, z, 1.0)?;
    let s = 0.5 / nu;
    let mut c = Combination::new();
    c.add(s * PI * nu * csc, &i2);
    c.add(-s * w, &f);
    c.add_scalar(s * ((2.0 / z).ln() + digamma(nu)? + 0.5 / nu));
    Ok(c.finish("closed"))
}

/// `1/(8ν){(z/2)^{-2ν}Γ²(ν)·2F3(-ν…; z²) - (z/2)^{2ν}Γ²(-ν)·2F3(ν…; z²)
/// + 4π csc(πν)[ln(z/2) + z²/(4(1-ν²))·3F4(z²) - 1/(2ν) - ψ(ν) - (π/2)cot(πν)]}`
fn closed_k2(nu: f64, z: f64) -> Result<EvalResult> {
    let csc = 1.0 / sin_pi(nu);
    let cot = cos_pi(nu) * csc;
    let fm = bessel_square_2f3_sq(-nu, z, 1.0)?;
    let fp = bessel_square_2f3_sq(nu, z, 1.0)?;
    let (w, f) = log_companion(nu, z, 1.0)?;
    let gp = gamma(nu)?;
    let gm = gamma(-nu)?;
    let s = 1.0 / (8.0 * nu);
    let l = 4.0 * PI * csc;
    let mut c = Combination::new();
    c.add(s * (0.5 * z).powf(-2.0 * nu) * gp * gp, &fm);
    c.add(-s * (0.5 * z).powf(2.0 * nu) * gm * gm, &fp);
    c.add(s * l * w, &f);
    c.add_scalar(s * l * ((0.5 * z).ln() - 0.5 / nu - digamma(nu)? - FRAC_PI_2 * cot));
    Ok(c.finish("closed"))
}

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `G^{3,0}_{2,4}(x | 1/2, 1; 0, 0, ν, -ν)`
pub fn g30(nu: f64, x: f64) -> Result<EvalResult> {
    let spec = MeijerSpec::new(3, 0, vec![0.5, 1.0], vec![0.0, 0.0, nu, -nu])?;
    eval_meijer(&spec, x)
}

/// `G^{3,1}_{2,4}(x | 1/2, 1; 0, 0, ν, -ν)`
pub fn g31(nu: f64, x: f64) -> Result<EvalResult> {
    let spec = MeijerSpec::new(3, 1, vec![0.5, 1.0], vec![0.0, 0.0, nu, -nu])?;
    eval_meijer(&spec, x)
}

/// `G^{4,0}_{2,4}(x | 1/2, 1; 0, 0, ν, -ν)`
pub fn g40(nu: f64, x: f64) -> Result<EvalResult> {
    let spec = MeijerSpec::new(4, 0, vec![0.5, 1.0], vec![0.0, 0.0, nu, -nu])?;
    eval_meijer(&spec, x)
}

/// `G^{4,0}_{3,5}(x | 1/2, 1/2-ν, 1; 0, 0, ν, -ν, 1/2-ν)`
pub fn g40_35(nu: f64, x: f64) -> Result<EvalResult> {
    let spec = MeijerSpec::new(
        4,
        0,
        vec![0.5, 0.5 - nu, 1.0],
        vec![0.0, 0.0, nu, -nu, 0.5 - nu],
    )?;
    eval_meijer(&spec, x)
}

/// `∫_z^∞ J_ν²(t)/t dt = G^{2,1}_{2,4}(z² | 1/2, 1; ν, 0, -ν, 0) / (2√π)`, from
/// `J_ν²(t) = G^{1,1}_{1,3}(t² | 1/2; ν, -ν, 0)/√π` integrated term by term.
pub fn j2_tail_meijer(nu: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    require(
        nu > 0.0,
        "Meijer form of int_z^inf J_nu^2/t",
        "nu > 0",
        nu,
        z,
    )?;
    let spec = MeijerSpec::new(2, 1, vec![0.5, 1.0], vec![nu, 0.0, -nu, 0.0])?;
    let mut c = Combination::new();
    c.add(0.5 / SQRT_PI, &eval_meijer(&spec, z * z)?);
    Ok(c.finish("meijer"))
}

/// Meijer-G form of an integral (all kinds except I2).
pub fn integral_meijer(kind: IntegralKind, nu: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    let x = z * z;
    let mut c = Combination::new();
    match kind {
        IntegralKind::J2 => {
            require(nu > 0.0, "Meijer form of int_0^z J_nu^2/t", "nu > 0", nu, z)?;
            c.add_scalar(0.5 / nu);
            c.add(-1.0, &j2_tail_meijer(nu, z)?);
        }
        IntegralKind::JY => {
            c.add(-0.5 / SQRT_PI, &g30(nu, x)?);
        }
        IntegralKind::Y2 => {
            require(
                nu > 0.0,
                "Meijer form of int_z^inf Y_nu^2/t",
                "nu > 0",
                nu,
                z,
            )?;
            c.add_scalar(0.5 / nu);
            c.add(1.0 / SQRT_PI, &g40_35(nu, x)?);
            c.add(-1.0, &square_integral(nu, z, -1.0)?);
        }
        IntegralKind::IK => {
            require(
                nu > 0.0,
                "Meijer form of int_z^inf I_nu K_nu/t",
                "nu > 0",
                nu,
                z,
            )?;
            c.add(0.25 / SQRT_PI, &g31(nu, x)?);
        }
        IntegralKind::K2 => {
            c.add(0.25 * SQRT_PI, &g40(nu, x)?);
        }
        IntegralKind::I2 => {
            return Err(Error::Precondition(format!(
                "no Meijer-G form is provided for {kind}"
            )))
        }
    }
    Ok(c.finish("meijer"))
}

/// Adaptive target for finite pieces; reported failure threshold below.
const QUAD_TOL: Tol = Tol::new(1e-14, 1e-13);
const QUAD_TARGET: f64 = 1e-8;
const OSC_TARGET: f64 = 1e-6;
/// Half the period of the `cos 2t` oscillation left in the tails.
const HALF_PERIOD: f64 = FRAC_PI_2;

fn nan_on_err(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

fn finalize(value: f64, error: f64, target: f64, terms: usize) -> Result<EvalResult> {
    if !value.is_finite() || !error.is_finite() || error > target * value.abs().max(1.0) {
        return Err(Error::QuadratureTolerance { achieved: error });
    }
    Ok(EvalResult::new(value, error, "quadrature").with_terms(terms))
}

/// `∫_0^z f(t)/t dt` for `f ~ t^{2ν}` at the origin, through `t = z·u^m`.
fn from_origin(nu: f64, z: f64, f: impl Fn(f64) -> f64) -> (f64, f64, usize) {
    let m = if nu < 1.0 { 1.0 / nu } else { 1.0 };
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let t = z * u.powf(m);
        if t <= 0.0 {
            return 0.0;
        }
        m * f(t) / u
    };
    let q = integrate(g, 0.0, 1.0, QUAD_TOL);
    (q.value, q.error, q.evals)
}

/// Direct numerical integration of the defining integrand.
pub fn integral_quadrature(kind: IntegralKind, nu: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    require(
        nu >= 0.0,
        "quadrature of Bessel integrals",
        "nu >= 0",
        nu,
        z,
    )?;
    match kind {
        IntegralKind::J2 | IntegralKind::I2 => {
            require(nu > 0.0, "quadrature from t = 0", "nu > 0", nu, z)?;
            let (v, e, n) = if kind == IntegralKind::J2 {
                from_origin(nu, z, |t| nan_on_err(bessel_j(nu, t)).powi(2))
            } else {
                from_origin(nu, z, |t| nan_on_err(bessel_i(nu, t)).powi(2))
            };
            finalize(v, e, QUAD_TARGET, n)
        }
        IntegralKind::IK => {
            let q = integrate_to_infinity(
                |t| nan_on_err(bessel_i_scaled(nu, t)) * nan_on_err(bessel_k_scaled(nu, t)) / t,
                z,
                QUAD_TOL,
            );
            finalize(q.value, q.error, QUAD_TARGET, q.evals)
        }
        IntegralKind::K2 => {
            let q = integrate_to_infinity(
                |t| {
                    let k = nan_on_err(bessel_k_scaled(nu, t)) * (-(t - z)).exp();
                    k * k / t
                },
                z,
                QUAD_TOL,
            );
            let scale = (-2.0 * z).exp();
            finalize(q.value * scale, q.error * scale, QUAD_TARGET, q.evals)
        }
        IntegralKind::JY | IntegralKind::Y2 => oscillatory_tail(kind, nu, z),
    }
}

/// JY and Y2 beyond `z`: adaptive rule up to `T0 = max(z, 30)`, then the
/// remainder split into its smooth and purely oscillatory parts.
fn oscillatory_tail(kind: IntegralKind, nu: f64, z: f64) -> Result<EvalResult> {
    let t0 = z.max(SERIES_LIMIT);
    let head = if t0 > z {
        let f = |t: f64| match kind {
            IntegralKind::JY => nan_on_err(bessel_j(nu, t)) * nan_on_err(bessel_y(nu, t)) / t,
            _ => nan_on_err(bessel_y(nu, t)).powi(2) / t,
        };
        let mut points = vec![z];
        let mut p = z + 2.0 * PI;
        while p < t0 {
            points.push(p);
            p += 2.0 * PI;
        }
        points.push(t0);
        crate::quad::integrate_panels(&f, &points, QUAD_TOL)
    } else {
        crate::quad::Quad {
            value: 0.0,
            error: 0.0,
            evals: 0,
        }
    };
    let (smooth, osc) = match kind {
        IntegralKind::JY => (
            None,
            integrate_oscillatory(
                |t| nan_on_err(bessel_j(nu, t)) * nan_on_err(bessel_y(nu, t)) / t,
                t0,
                HALF_PERIOD,
                1e-10,
                200,
            ),
        ),
        _ => {
            // Y² = (J² + Y²)/2 - (J² - Y²)/2
            let s = integrate_to_infinity(
                |t| 0.5 * nan_on_err(bessel_modulus_sq(nu, t)) / t,
                t0,
                QUAD_TOL,
            );
            let o = integrate_oscillatory(
                |t| {
                    let j = nan_on_err(bessel_j(nu, t));
                    let y = nan_on_err(bessel_y(nu, t));
                    -0.5 * (j * j - y * y) / t
                },
                t0,
                HALF_PERIOD,
                1e-10,
                200,
            );
            (Some(s), o)
        }
    };
    let mut value = head.value + osc.value;
    let mut error = head.error + osc.error;
    let mut evals = head.evals + osc.cells * 21;
    if let Some(s) = smooth {
        value += s.value;
        error += s.error;
        evals += s.evals;
    }
    let mut r = finalize(value, error, OSC_TARGET, evals)?;
    if !osc.converged {
        r.warnings.push(Warning::Accuracy {
            achieved: osc.error,
        });
    }
    Ok(r)
}

/// The two by-product θ-integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ApelblatKind {
    /// `∫_0^{π/2} tan θ · Y_0(z sin²θ) · J_ν(z cos²θ) dθ`
    J,
    /// `∫_0^{π/2} tan θ · K_0(z sin²θ) · I_ν(z cos²θ) dθ`
    I,
}

/// Closed right-hand side of a by-product integral, from 2F3 and Meijer-G.
pub fn apelblat_integral(kind: ApelblatKind, nu: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    require(nu > 0.0, "by-product theta integral", "nu > 0", nu, z)?;
    let x = z * z;
    let mut c = Combination::new();
    match kind {
        ApelblatKind::J => {
            c.add(bessel_y(nu, z)?, &square_integral(nu, z, -1.0)?);
            c.add(-bessel_j(nu, z)? / (2.0 * SQRT_PI), &g30(nu, x)?);
        }
        ApelblatKind::I => {
            c.add(bessel_i(nu, z)? / (4.0 * SQRT_PI), &g31(nu, x)?);
            c.add(bessel_k(nu, z)?, &square_integral(nu, z, 1.0)?);
        }
    }
    Ok(c.finish("closed"))
}

/// The θ-integral itself, by adaptive quadrature on the open interval.
pub fn apelblat_quadrature(kind: ApelblatKind, nu: f64, z: f64) -> Result<EvalResult> {
    check_z(z)?;
    require(nu > 0.0, "by-product theta integral", "nu > 0", nu, z)?;
    let f = |th: f64| {
        let (s, c) = th.sin_cos();
        let a = z * s * s;
        let b = z * c * c;
        if a <= 0.0 || b <= 0.0 {
            return 0.0;
        }
        let outer = match kind {
            ApelblatKind::J => nan_on_err(bessel_y(0.0, a)) * nan_on_err(bessel_j(nu, b)),
            ApelblatKind::I => nan_on_err(bessel_k(0.0, a)) * nan_on_err(bessel_i(nu, b)),
        };
        s / c * outer
    };
    let q = crate::quad::integrate_panels(
        &f,
        &[0.0, 0.25 * PI, 0.45 * PI, 0.5 * PI],
        Tol::new(1e-13, 1e-12),
    );
    finalize(q.value, q.error, QUAD_TARGET, q.evals).map(|mut r| {
        r.route = "quadrature";
        r
    })
}
