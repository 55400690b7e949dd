//! Order derivatives `∂J_ν/∂ν`, `∂Y_ν/∂ν`, `∂I_ν/∂ν`, `∂K_ν/∂ν` and
//! `∂(J_νY_ν)/∂ν` by several routes, plus the dispatcher choosing one.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bessel::{
    bessel_i, bessel_j, bessel_k, bessel_y, hyper0f1_dd, series_prefactor, SERIES_LIMIT,
};
use crate::dd::DoubleDouble as DD;
use crate::error::{Error, Result};
use crate::hypergeom::{
    bessel_square_2f3_dd, bessel_square_2f3_sq, signed_square, CANCELLATION_THRESHOLD,
};
use crate::integrals::{
    apelblat_quadrature, away_from_integer, f34, f34_dd, g30, g31, g40, g40_35,
    integral_quadrature, j2_tail_meijer, ApelblatKind, IntegralKind,
};
use crate::result::{Combination, EvalResult, Warning};
use crate::scalar::{cos_pi, digamma, gamma, recip_gamma, sin_pi};

const SQRT_PI: f64 = 1.772_453_850_905_516;
/// Past this `z` the Meijer route trades the alternating `2F3(-z²)` for the
/// Meijer-G tail of `∫ J_ν²/t`.
const MEIJER_TAIL_FROM: f64 = 8.0;
/// Step of the central difference; the second level uses `h/2`.
pub const FD_STEP: f64 = 1e-4;
const MAX_TERMS: usize = 10_000;

/// Route used to evaluate a derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Closed,
    Meijer,
    Quadrature,
    #[serde(rename = "fd")]
    FiniteDifference,
    Auto,
}

impl Method {
    pub const ROUTES: [Method; 5] = [
        Self::Series,
        Self::Closed,
        Self::Meijer,
        Self::Quadrature,
        Self::FiniteDifference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Series => "series",
            Self::Closed => "closed",
            Self::Meijer => "meijer",
            Self::Quadrature => "quadrature",
            Self::FiniteDifference => "fd",
            Self::Auto => "auto",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "series" => Self::Series,
            "closed" => Self::Closed,
            "meijer" => Self::Meijer,
            "quadrature" | "intrep" => Self::Quadrature,
            "fd" | "finite_difference" => Self::FiniteDifference,
            "auto" => Self::Auto,
            _ => return Err(Error::Precondition(format!("unknown method '{s}'"))),
        })
    }
}

/// Which order derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DerivKind {
    #[serde(rename = "dJ")]
    DJ,
    #[serde(rename = "dY")]
    DY,
    #[serde(rename = "dI")]
    DI,
    #[serde(rename = "dK")]
    DK,
    #[serde(rename = "dJYprod")]
    DJYProduct,
}

impl DerivKind {
    pub const ALL: [DerivKind; 5] = [Self::DJ, Self::DY, Self::DI, Self::DK, Self::DJYProduct];

    pub fn name(self) -> &'static str {
        match self {
            Self::DJ => "dJ",
            Self::DY => "dY",
            Self::DI => "dI",
            Self::DK => "dK",
            Self::DJYProduct => "dJYprod",
        }
    }

    /// Routes that can evaluate this kind at some order.
    pub fn routes(self) -> &'static [Method] {
        match self {
            Self::DJ | Self::DI | Self::DY | Self::DK => &Method::ROUTES,
            Self::DJYProduct => &[
                Method::Closed,
                Method::Meijer,
                Method::Quadrature,
                Method::FiniteDifference,
            ],
        }
    }
}

impl fmt::Display for DerivKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DerivKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dJ" => Self::DJ,
            "dY" => Self::DY,
            "dI" => Self::DI,
            "dK" => Self::DK,
            "dJYprod" | "dJY_product" => Self::DJYProduct,
            _ => {
                return Err(Error::Precondition(format!(
                    "unknown derivative kind '{s}'"
                )))
            }
        })
    }
}

fn domain(formula: &'static str, hypothesis: &'static str, nu: f64, z: f64) -> Error {
    Error::Domain {
        formula,
        hypothesis,
        nu,
        z,
    }
}

fn check(nu: f64, z: f64) -> Result<()> {
    crate::scalar::RealArgument::new(z)?;
    if !nu.is_finite() {
        return Err(Error::Precondition(format!(
            "order must be finite, got {nu}"
        )));
    }
    Ok(())
}

/// Log-weighted power series
/// `∂J_ν/∂ν = J_ν ln(z/2) - (z/2)^ν Σ ψ(ν+k+1)(-1)^k (z/2)^{2k}/(k! Γ(ν+k+1))`
/// and its unsigned counterpart for `∂I_ν/∂ν`.
///
/// Negative non-integer orders are accepted since the relations for `Y` and
/// `K` need the series at `-ν`.
pub fn deriv_series(kind: DerivKind, nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    let sign = match kind {
        DerivKind::DJ => -1.0,
        DerivKind::DI => 1.0,
        _ => {
            return Err(Error::Precondition(format!(
                "the log-weighted series covers dJ and dI only, not {kind}"
            )))
        }
    };
    let formula = if sign < 0.0 {
        "log-weighted series for dJ/dnu"
    } else {
        "log-weighted series for dI/dnu"
    };
    if nu <= -1.0 && nu == nu.round() {
        return Err(domain(formula, "nu not a negative integer", nu, z));
    }
    if z > SERIES_LIMIT {
        return Err(domain(formula, "z <= 30", nu, z));
    }
    let pref = series_prefactor(nu, z)?;
    let half = 0.5 * z;
    let x = DD::from_f64(half) * DD::from_f64(half);
    let log = DD::from_f64(half.ln());
    let mut psi = DD::from_f64(digamma(nu + 1.0)?);
    let mut t = DD::ONE;
    let mut sum = log - psi;
    let mut abs_sum = sum.abs().to_f64();
    let mut small = 0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let shifted = DD::sum(nu, kf);
        t = t * x / (shifted.mul_f64(kf));
        if sign < 0.0 {
            t = -t;
        }
        psi += DD::ONE / shifted;
        let term = t * (log - psi);
        sum += term;
        let mag = term.abs().to_f64();
        abs_sum += mag;
        if kf * kf > x.to_f64() && kf > nu.abs() + 2.0 {
            if mag <= 1e-17 * sum.abs().to_f64() || mag == 0.0 {
                small += 1;
                if small >= 3 {
                    let s = sum.to_f64();
                    let value = pref * s;
                    let err = (pref * (abs_sum * 1e-30 + mag)).abs() + value.abs() * f64::EPSILON;
                    let mut r = EvalResult::new(value, err, "series").with_terms(k + 1);
                    let amplification = abs_sum / s.abs();
                    if amplification > CANCELLATION_THRESHOLD {
                        r.warnings.push(Warning::Cancellation { amplification });
                    }
                    return Ok(r);
                }
            } else {
                small = 0;
            }
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// `∂Y/∂ν` and `∂K/∂ν` assembled from the series at `±ν` by differentiating
/// `Y_ν = (J_ν cos νπ - J_{-ν})/sin νπ` and `K_ν = (π/2)(I_{-ν} - I_ν)/sin νπ`.
pub fn deriv_relation(kind: DerivKind, nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    let formula = match kind {
        DerivKind::DY => "relation of dY/dnu to dJ/dnu at +-nu",
        DerivKind::DK => "relation of dK/dnu to dI/dnu at +-nu",
        _ => {
            return Err(Error::Precondition(format!(
                "the relations cover dY and dK only, not {kind}"
            )))
        }
    };
    if !away_from_integer(nu) {
        return Err(domain(formula, "|nu - round(nu)| >= 1e-4", nu, z));
    }
    let s = sin_pi(nu);
    let csc = 1.0 / s;
    let cot = cos_pi(nu) / s;
    let mut c = Combination::new();
    if kind == DerivKind::DY {
        // cot(J' - πY) + csc·D_J(-ν) - πJ
        let dp = deriv_series(DerivKind::DJ, nu, z)?;
        let dm = deriv_series(DerivKind::DJ, -nu, z)?;
        c.add(cot, &dp);
        c.add(csc, &dm);
        c.add_scalar(-PI * cot * bessel_y(nu, z)?);
        c.add_scalar(-PI * bessel_j(nu, z)?);
    } else {
        // (π/2)csc[-D_I(-ν) - D_I(ν)] - π cot K
        let dp = deriv_series(DerivKind::DI, nu, z)?;
        let dm = deriv_series(DerivKind::DI, -nu, z)?;
        c.add(-0.5 * PI * csc, &dp);
        c.add(-0.5 * PI * csc, &dm);
        c.add_scalar(-PI * cot * bessel_k(nu, z)?);
    }
    Ok(c.finish("relation"))
}

/// Ingredients shared by the closed forms at one `(ν, z)`.
struct ClosedParts {
    nu: f64,
    z: f64,
    csc: f64,
    cot: f64,
    /// `z²/(4(1-ν²))`
    w: f64,
    /// `(z/2)^{2ν}`
    up: f64,
    /// `(z/2)^{-2ν}`
    down: f64,
    gp2: f64,
    gm2: f64,
    psi: f64,
}

impl ClosedParts {
    fn new(nu: f64, z: f64) -> Result<Self> {
        let s = sin_pi(nu);
        let gp = gamma(nu)?;
        let gm = gamma(-nu)?;
        let up = (0.5 * z).powf(2.0 * nu);
        Ok(Self {
            nu,
            z,
            csc: 1.0 / s,
            cot: cos_pi(nu) / s,
            w: z * z / (4.0 * (1.0 - nu * nu)),
            up,
            down: 1.0 / up,
            gp2: gp * gp,
            gm2: gm * gm,
            psi: digamma(nu)?,
        })
    }

    /// `1/Γ²(ν+1)`
    fn rg2(&self) -> f64 {
        let r = recip_gamma(self.nu + 1.0);
        r * r
    }

    /// Scalar part `ln(2/z) + 1/(2ν) + ψ(ν)` of the oscillatory log block.
    fn log_j(&self) -> f64 {
        (2.0 / self.z).ln() + 0.5 / self.nu + self.psi
    }

    /// Scalar part `ln(z/2) - ψ(ν) - 1/(2ν)` of the modified log block.
    fn log_i(&self) -> f64 {
        (0.5 * self.z).ln() - self.psi - 0.5 / self.nu
    }
}

/// Closed hypergeometric forms of the derivatives.
pub fn deriv_closed(kind: DerivKind, nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    let formula = match kind {
        DerivKind::DJ => "closed form for dJ/dnu",
        DerivKind::DY => "closed form for dY/dnu",
        DerivKind::DI => "closed form for dI/dnu",
        DerivKind::DK => "closed form for dK/dnu",
        DerivKind::DJYProduct => "closed form for d(J Y)/dnu",
    };
    if nu <= 0.0 {
        return Err(domain(formula, "nu > 0", nu, z));
    }
    if !away_from_integer(nu) {
        return Err(domain(
            formula,
            "nu not an integer (|nu - round(nu)| >= 1e-4)",
            nu,
            z,
        ));
    }
    if z > SERIES_LIMIT {
        return Err(domain(formula, "z <= 30", nu, z));
    }
    let p = ClosedParts::new(nu, z)?;
    let mut c = Combination::new();
    match kind {
        DerivKind::DJ => {
            let j = bessel_j(nu, z)?;
            let jm = bessel_j(-nu, z)?;
            c.add(
                -0.5 * PI * jm * p.csc * p.rg2() * p.up,
                &bessel_square_2f3_sq(nu, z, -1.0)?,
            );
            c.add(-j * p.w, &f34(nu, z, -1.0)?);
            c.add_scalar(-j * p.log_j());
        }
        DerivKind::DY => {
            let j = bessel_j(nu, z)?;
            let jm = bessel_j(-nu, z)?;
            let y = bessel_y(nu, z)?;
            let cs = cos_pi(nu);
            let mix = y - 2.0 * p.cot * j;
            c.add(
                j * p.down * p.gp2 / (2.0 * PI),
                &bessel_square_2f3_sq(-nu, z, -1.0)?,
            );
            c.add_scalar(-PI * p.csc * p.csc * j);
            c.add(
                -cs / (2.0 * PI) * p.gm2 * p.up * jm,
                &bessel_square_2f3_sq(nu, z, -1.0)?,
            );
            c.add(p.w * mix, &f34(nu, z, -1.0)?);
            c.add_scalar(p.log_j() * mix);
        }
        DerivKind::DJYProduct => {
            let j = bessel_j(nu, z)?;
            let jm = bessel_j(-nu, z)?;
            let cs = cos_pi(nu);
            let j2 = j * j;
            c.add(
                jm / (2.0 * PI) * p.up * p.gm2 * (jm - 2.0 * cs * j),
                &bessel_square_2f3_sq(nu, z, -1.0)?,
            );
            c.add(
                j2 * p.down * p.gp2 / (2.0 * PI),
                &bessel_square_2f3_sq(-nu, z, -1.0)?,
            );
            c.add_scalar(-PI * p.csc * p.csc * j2);
            c.add(-2.0 * p.cot * j2 * p.w, &f34(nu, z, -1.0)?);
            c.add_scalar(-2.0 * p.cot * j2 * p.log_j());
        }
        DerivKind::DI => return closed_di(&p),
        DerivKind::DK => return closed_dk(&p),
    }
    Ok(c.finish("closed"))
}

/// Series sums behind the closed forms of `∂I/∂ν` and `∂K/∂ν`.
///
/// With `P± = (z/2)^{±ν}/Γ(1±ν)` and `S± = 0F1(; 1±ν; z²/4)`, so that
/// `I_{±ν} = P±S±`, the parts growing like `e^{2z}` collapse into
/// `P₊(a₁ - a₂)` and `P₋(b₁ + b₂)` with
/// `a₁ = S₋F₊/(2ν)`, `a₂ = wS₊G`, `b₁ = S₊F₋/(2ν)`, `b₂ = wS₋G`,
/// where `F± = 2F3(±ν…; z²)`, `G = 3F4(z²)` and `w = z²/(4(1-ν²))`.
/// The brackets are formed in double-double from the raw sums.
struct ModifiedParts {
    pp: f64,
    pm: f64,
    i: f64,
    im: f64,
    a1: DD,
    a2: DD,
    b1: DD,
    b2: DD,
    rel_fp: f64,
    rel_fm: f64,
    rel_g: f64,
    terms: usize,
}

impl ModifiedParts {
    fn new(nu: f64, z: f64) -> Result<Self> {
        let pp = series_prefactor(nu, z)?;
        let pm = series_prefactor(-nu, z)?;
        let (sp, _) = hyper0f1_dd(nu, z, false)?;
        let (sm, _) = hyper0f1_dd(-nu, z, false)?;
        let (fp_r, fp) = bessel_square_2f3_dd(nu, signed_square(z, 1.0))?;
        let (fm_r, fm) = bessel_square_2f3_dd(-nu, signed_square(z, 1.0))?;
        let (g_r, g) = f34_dd(nu, z, 1.0)?;
        let zd = DD::from_f64(z);
        let nd = DD::from_f64(nu);
        let w = zd * zd / (DD::ONE - nd * nd).mul_f64(4.0);
        let inv = DD::ONE / DD::from_f64(2.0 * nu);
        let rel = |r: &EvalResult| r.error_estimate / r.value.abs();
        Ok(Self {
            pp,
            pm,
            i: pp * sp.to_f64(),
            im: pm * sm.to_f64(),
            a1: sm * fp * inv,
            a2: w * sp * g,
            b1: sp * fm * inv,
            b2: w * sm * g,
            rel_fp: rel(&fp_r),
            rel_fm: rel(&fm_r),
            rel_g: rel(&g_r),
            terms: fp_r.terms + fm_r.terms + g_r.terms,
        })
    }

    fn bracket_a(&self) -> f64 {
        (self.a1 - self.a2).to_f64()
    }

    fn bracket_b(&self) -> f64 {
        (self.b1 + self.b2).to_f64()
    }

    /// Truncation error carried into `P₊·(a₁ - a₂)`.
    fn err_a(&self) -> f64 {
        self.pp.abs() * (self.a1.abs().to_f64() * self.rel_fp + self.a2.abs().to_f64() * self.rel_g)
    }

    fn err_b(&self) -> f64 {
        self.pm.abs() * (self.b1.abs().to_f64() * self.rel_fm + self.b2.abs().to_f64() * self.rel_g)
    }
}

fn assemble(parts: &[f64], series_err: f64, terms: usize) -> EvalResult {
    let value: f64 = parts.iter().sum();
    let magnitude: f64 = parts.iter().map(|v| v.abs()).sum();
    let err = series_err + 4.0 * f64::EPSILON * magnitude;
    let mut r = EvalResult::new(value, err, "closed").with_terms(terms);
    let amplification = magnitude / value.abs();
    if amplification > CANCELLATION_THRESHOLD {
        r.warnings.push(Warning::Cancellation { amplification });
    }
    r
}

/// Closed form of `∂I/∂ν`,
/// `I_ν[z²/(4(1-ν²))·3F4(z²) + ln(z/2) - ψ(ν) - 1/(2ν)] - I_{-ν}(π/2)csc νπ·(z/2)^{2ν}/Γ²(ν+1)·2F3(ν…; z²)`,
/// where `I_{-ν}(z/2)^{2ν}(π/2)csc νπ/Γ²(ν+1) = P₊S₋/(2ν)`.
fn closed_di(p: &ClosedParts) -> Result<EvalResult> {
    let m = ModifiedParts::new(p.nu, p.z)?;
    let parts = [-m.pp * m.bracket_a(), m.i * p.log_i()];
    Ok(assemble(&parts, m.err_a(), m.terms))
}

/// Closed form of `∂K/∂ν`,
/// `(π/2)csc νπ·[π cot νπ·I_ν - (I_ν + I_{-ν})Λ] + [I_{-ν}Γ²(-ν)(z/2)^{2ν}F₊ - I_νΓ²(ν)(z/2)^{-2ν}F₋]/4`
/// with `Λ = z²/(4(1-ν²))·3F4(z²) + ln(z/2) - ψ(ν) - 1/(2ν)`; the last
/// bracket regroups to `(π/2)csc νπ·[P₊a₁ - P₋b₁]`.
fn closed_dk(p: &ClosedParts) -> Result<EvalResult> {
    let m = ModifiedParts::new(p.nu, p.z)?;
    let h = 0.5 * PI * p.csc;
    let parts = [
        h * m.pp * m.bracket_a(),
        -h * m.pm * m.bracket_b(),
        h * PI * p.cot * m.i,
        -h * (m.i + m.im) * p.log_i(),
    ];
    Ok(assemble(&parts, h.abs() * (m.err_a() + m.err_b()), m.terms))
}

/// `2ν∫_0^z J_ν²/t = (z/2)^{2ν}/Γ²(ν+1)·2F3(-z²)`, finite as `ν → 0`.
fn j_block(nu: f64, z: f64) -> Result<EvalResult> {
    if nu == 0.0 || z <= MEIJER_TAIL_FROM {
        let r = recip_gamma(nu + 1.0);
        let mut c = Combination::new();
        c.add(
            (0.5 * z).powf(2.0 * nu) * r * r,
            &bessel_square_2f3_sq(nu, z, -1.0)?,
        );
        return Ok(c.finish("meijer"));
    }
    let mut c = Combination::new();
    c.add_scalar(1.0);
    c.add(-2.0 * nu, &j2_tail_meijer(nu, z)?);
    Ok(c.finish("meijer"))
}

/// `2ν∫_0^z I_ν²/t = (z/2)^{2ν}/Γ²(ν+1)·2F3(z²)`.
fn i_block(nu: f64, z: f64) -> Result<EvalResult> {
    let r = recip_gamma(nu + 1.0);
    let mut c = Combination::new();
    c.add(
        (0.5 * z).powf(2.0 * nu) * r * r,
        &bessel_square_2f3_sq(nu, z, 1.0)?,
    );
    Ok(c.finish("meijer"))
}

fn meijer_or_zero(nu: f64, g: impl Fn() -> Result<EvalResult>) -> Result<EvalResult> {
    if nu == 0.0 {
        Ok(EvalResult::new(0.0, 0.0, "meijer"))
    } else {
        g()
    }
}

/// Meijer-G forms of the derivatives; valid at integer orders and `ν = 0`.
pub fn deriv_meijer(kind: DerivKind, nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    if nu < 0.0 {
        return Err(domain(
            "Meijer-G form of the order derivative",
            "nu >= 0",
            nu,
            z,
        ));
    }
    let x = z * z;
    let mut c = Combination::new();
    match kind {
        DerivKind::DJ => {
            // (π/2)(Y·S - νJ·G30/√π)
            let s = j_block(nu, z)?;
            let g = meijer_or_zero(nu, || g30(nu, x))?;
            c.add(0.5 * PI * bessel_y(nu, z)?, &s);
            c.add(-0.5 * PI * nu * bessel_j(nu, z)? / SQRT_PI, &g);
        }
        DerivKind::DY => {
            // J(√π ν G40_35 - (π/2)S) + (√π/2)νY·G30
            let j = bessel_j(nu, z)?;
            let s = j_block(nu, z)?;
            let g35 = meijer_or_zero(nu, || g40_35(nu, x))?;
            let g = meijer_or_zero(nu, || g30(nu, x))?;
            c.add(SQRT_PI * nu * j, &g35);
            c.add(-0.5 * PI * j, &s);
            c.add(0.5 * SQRT_PI * nu * bessel_y(nu, z)?, &g);
        }
        DerivKind::DI => {
            // -νI·G31/(2√π) - K·T
            let t = i_block(nu, z)?;
            let g = meijer_or_zero(nu, || g31(nu, x))?;
            c.add(-nu * bessel_i(nu, z)? / (2.0 * SQRT_PI), &g);
            c.add(-bessel_k(nu, z)?, &t);
        }
        DerivKind::DK => {
            // (ν/2)(K·G31/√π - √π I·G40)
            let g1 = meijer_or_zero(nu, || g31(nu, x))?;
            let g4 = meijer_or_zero(nu, || g40(nu, x))?;
            c.add(0.5 * nu * bessel_k(nu, z)? / SQRT_PI, &g1);
            c.add(-0.5 * nu * SQRT_PI * bessel_i(nu, z)?, &g4);
        }
        DerivKind::DJYProduct => {
            let dj = deriv_meijer(DerivKind::DJ, nu, z)?;
            let dy = deriv_meijer(DerivKind::DY, nu, z)?;
            c.add(bessel_y(nu, z)?, &dj);
            c.add(bessel_j(nu, z)?, &dy);
        }
    }
    Ok(c.finish("meijer"))
}

/// Derivatives through integral representations, each integral evaluated
/// by quadrature. With `apelblat` set, `dJ` and `dI` use the θ-integrals
/// instead of the integrals over `t`.
pub fn deriv_intrep(kind: DerivKind, nu: f64, z: f64, apelblat: bool) -> Result<EvalResult> {
    check(nu, z)?;
    if nu <= 0.0 {
        return Err(domain(
            "integral representation of the order derivative",
            "nu > 0",
            nu,
            z,
        ));
    }
    let q = |k: IntegralKind| integral_quadrature(k, nu, z);
    let mut c = Combination::new();
    match (kind, apelblat) {
        (DerivKind::DJ, true) => c.add(PI * nu, &apelblat_quadrature(ApelblatKind::J, nu, z)?),
        (DerivKind::DI, true) => c.add(-2.0 * nu, &apelblat_quadrature(ApelblatKind::I, nu, z)?),
        (_, true) => {
            return Err(Error::Precondition(format!(
                "the theta-integral variant exists for dJ and dI only, not {kind}"
            )))
        }
        (DerivKind::DJ, false) => {
            // πν(Y·∫_0^z J²/t + J·∫_z^∞ JY/t)
            c.add(PI * nu * bessel_y(nu, z)?, &q(IntegralKind::J2)?);
            c.add(PI * nu * bessel_j(nu, z)?, &q(IntegralKind::JY)?);
        }
        (DerivKind::DY, false) => {
            // πν(J(∫_z^∞ Y²/t - 1/(2ν)) - Y·∫_z^∞ JY/t)
            let j = bessel_j(nu, z)?;
            c.add(PI * nu * j, &q(IntegralKind::Y2)?);
            c.add_scalar(-0.5 * PI * j);
            c.add(-PI * nu * bessel_y(nu, z)?, &q(IntegralKind::JY)?);
        }
        (DerivKind::DI, false) => {
            // -2ν(I·∫_z^∞ IK/t + K·∫_0^z I²/t)
            c.add(-2.0 * nu * bessel_i(nu, z)?, &q(IntegralKind::IK)?);
            c.add(-2.0 * nu * bessel_k(nu, z)?, &q(IntegralKind::I2)?);
        }
        (DerivKind::DK, false) => {
            // 2ν(K·∫_z^∞ IK/t - I·∫_z^∞ K²/t)
            c.add(2.0 * nu * bessel_k(nu, z)?, &q(IntegralKind::IK)?);
            c.add(-2.0 * nu * bessel_i(nu, z)?, &q(IntegralKind::K2)?);
        }
        (DerivKind::DJYProduct, false) => {
            // πν(Y²∫_0^z J²/t + J²(∫_z^∞ Y²/t - 1/(2ν))); the JY integrals cancel
            let j = bessel_j(nu, z)?;
            let y = bessel_y(nu, z)?;
            c.add(PI * nu * y * y, &q(IntegralKind::J2)?);
            c.add(PI * nu * j * j, &q(IntegralKind::Y2)?);
            c.add_scalar(-0.5 * PI * j * j);
        }
    }
    Ok(c.finish("quadrature"))
}

fn base_value(kind: DerivKind, nu: f64, z: f64) -> Result<f64> {
    match kind {
        DerivKind::DJ => bessel_j(nu, z),
        DerivKind::DY => bessel_y(nu, z),
        DerivKind::DI => bessel_i(nu, z),
        DerivKind::DK => bessel_k(nu, z),
        DerivKind::DJYProduct => Ok(bessel_j(nu, z)? * bessel_y(nu, z)?),
    }
}

/// Two-level Richardson central difference of the base function in `ν`.
pub fn deriv_fd(kind: DerivKind, nu: f64, z: f64) -> Result<EvalResult> {
    check(nu, z)?;
    let d = |h: f64| -> Result<f64> {
        Ok((base_value(kind, nu + h, z)? - base_value(kind, nu - h, z)?) / (2.0 * h))
    };
    let d1 = d(FD_STEP)?;
    let d2 = d(0.5 * FD_STEP)?;
    let value = (4.0 * d2 - d1) / 3.0;
    let f = base_value(kind, nu, z)?.abs().max(1e-300);
    // truncation of the h/2 level bounds the extrapolated error; the
    // base functions carry roughly 1e-13 relative error near integers
    let err = (d2 - d1).abs() / 3.0 + 1e-13 * f / FD_STEP;
    Ok(EvalResult::new(value, err, "fd").with_terms(8))
}

/// Route the dispatcher picks for `Method::Auto`.
pub fn auto_route(nu: f64, z: f64) -> Method {
    if !away_from_integer(nu) || z > SERIES_LIMIT {
        Method::Meijer
    } else {
        Method::Closed
    }
}

/// Evaluates `kind` at `(ν, z)` with `method`; the result names the route.
pub fn deriv(kind: DerivKind, nu: f64, z: f64, method: Method) -> Result<EvalResult> {
    let method = if method == Method::Auto {
        auto_route(nu, z)
    } else {
        method
    };
    match method {
        Method::Series => match kind {
            DerivKind::DJ | DerivKind::DI => deriv_series(kind, nu, z),
            DerivKind::DY | DerivKind::DK => deriv_relation(kind, nu, z),
            DerivKind::DJYProduct => Err(Error::Precondition(
                "no series route for the product derivative".into(),
            )),
        },
        Method::Closed => deriv_closed(kind, nu, z),
        Method::Meijer => deriv_meijer(kind, nu, z),
        Method::Quadrature => deriv_intrep(kind, nu, z, false),
        Method::FiniteDifference => deriv_fd(kind, nu, z),
        Method::Auto => unreachable!("auto resolved above"),
    }
}
