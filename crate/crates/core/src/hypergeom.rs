//! Generalized hypergeometric series and their leading large-argument forms.

use std::f64::consts::PI;

use crate::dd::DoubleDouble as DD;
use crate::error::{Error, Result};
use crate::result::{EvalResult, Warning};
use crate::scalar::{cos_pi, gamma};

const MAX_TERMS: usize = 10_000;
/// Ratio of largest partial sum to result above which cancellation is flagged.
pub const CANCELLATION_THRESHOLD: f64 = 1e8;

/// Parameters of `pFq(a; b; x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergeometricSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl HypergeometricSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if let Some(bad) = b.iter().find(|&&v| v <= 0.0 && v == v.floor()) {
            return Err(Error::Precondition(format!(
                "lower parameter {bad} is a non-positive integer"
            )));
        }
        if a.len() > b.len() + 1 {
            return Err(Error::Precondition(format!(
                "p = {} exceeds q + 1 = {}",
                a.len(),
                b.len() + 1
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Precondition("parameters must be finite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }
}

/// Running state shared by the series summers.
struct SeriesSum {
    sum: DD,
    max_partial: f64,
    small: u32,
}

impl SeriesSum {
    fn new() -> Self {
        Self {
            sum: DD::ONE,
            max_partial: 1.0,
            small: 0,
        }
    }

    /// Adds a term; returns true once three consecutive terms were below the
    /// double-double resolution of the sum.
    fn push(&mut self, term: DD) -> bool {
        self.sum += term;
        self.max_partial = self.max_partial.max(self.sum.hi.abs());
        if term.hi.abs() <= crate::dd::DD_TAIL * self.sum.hi.abs()
            || term.hi == 0.0 && self.sum.hi == 0.0
        {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.small >= 3
    }

    fn finish(self, last_term: f64, terms: usize, route: &'static str) -> EvalResult {
        let value = self.sum.to_f64();
        let rounding = self.max_partial * 1e-31;
        let mut r = EvalResult::new(value, last_term.abs() + rounding, route).with_terms(terms);
        let amplification = self.max_partial / value.abs();
        if amplification > CANCELLATION_THRESHOLD {
            r.warnings.push(Warning::Cancellation { amplification });
        }
        r
    }
}

/// `pFq(a; b; x)` by the term-ratio recurrence
/// `c_{k+1}/c_k = Π(a_i+k) / Π(b_j+k) · x/(k+1)`, in double-double.
///
/// The error estimate is the first omitted term plus the double-double
/// rounding floor. A cancellation warning is attached when the largest
/// partial sum exceeds the result by more than 1e8.
pub fn eval_pfq(spec: &HypergeometricSpec, x: f64) -> Result<EvalResult> {
    eval_pfq_dd(spec, x).map(|(r, _)| r)
}

/// [`eval_pfq`] together with the unrounded double-double sum.
pub(crate) fn eval_pfq_dd(spec: &HypergeometricSpec, x: f64) -> Result<(EvalResult, DD)> {
    if !x.is_finite() {
        return Err(Error::Precondition(format!(
            "argument must be finite, got {x}"
        )));
    }
    if spec.p() == spec.q() + 1 && x.abs() >= 1.0 {
        return Err(Error::Domain {
            formula: "pFq series with p = q + 1",
            hypothesis: "|x| < 1",
            nu: f64::NAN,
            z: x,
        });
    }
    let xd = DD::from_f64(x);
    let mut term = DD::ONE;
    let mut acc = SeriesSum::new();
    let mut last;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let mut num = xd;
        for &a in &spec.a {
            num = num * DD::sum(a, kf);
        }
        let mut den = DD::from_f64(kf + 1.0);
        for &b in &spec.b {
            den = den * DD::sum(b, kf);
        }
        term = term * num / den;
        last = term.hi;
        let done = acc.push(term);
        // A zero upper parameter truncates the series to a polynomial.
        if term.hi == 0.0 || done && converging(spec, x, k + 1) {
            let sum = acc.sum;
            return Ok((acc.finish(last, k + 2, "series"), sum));
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// True once the term ratio has dropped below 1/2 for good.
fn converging(spec: &HypergeometricSpec, x: f64, k: usize) -> bool {
    let kf = k as f64;
    let num: f64 = spec.a.iter().map(|a| (a + kf).abs()).product::<f64>() * x.abs();
    let den: f64 = spec.b.iter().map(|b| (b + kf).abs()).product::<f64>() * (kf + 1.0);
    num <= 0.5 * den
}

/// `2F3(μ, μ+1/2; μ+1, μ+1, 2μ+1; x)`, the series behind `∫ J_μ²/t`.
///
/// The ratio `(μ+1/2)_k/(2μ+1)_k` is formed with its paired factors
/// cancelled, so the removable 0/0 at `μ = -1/2, -3/2, …` resolves to its
/// limit, in which the terms `n < k <= 2n` (`μ = -n-1/2`) vanish.
pub fn bessel_square_2f3(mu: f64, x: f64) -> Result<EvalResult> {
    bessel_square_2f3_dd(mu, DD::from_f64(x)).map(|(r, _)| r)
}

/// `±z²` held exactly, so that the argument of a series carries no rounding.
pub(crate) fn signed_square(z: f64, sign: f64) -> DD {
    let zd = DD::from_f64(z);
    (zd * zd).mul_f64(sign)
}

/// [`bessel_square_2f3`] at `x = ±z²`.
pub(crate) fn bessel_square_2f3_sq(mu: f64, z: f64, sign: f64) -> Result<EvalResult> {
    bessel_square_2f3_dd(mu, signed_square(z, sign)).map(|(r, _)| r)
}

/// [`bessel_square_2f3`] together with the unrounded double-double sum.
pub(crate) fn bessel_square_2f3_dd(mu: f64, xd: DD) -> Result<(EvalResult, DD)> {
    let x = xd.hi;
    if mu <= -1.0 && mu == mu.floor() {
        return Err(Error::Pole {
            function: "2F3 lower parameter mu + 1",
            at: mu,
        });
    }
    // base_k = (μ)_k / ((μ+1)_k² k!) · x^k
    let mut base = DD::ONE;
    let mut acc = SeriesSum::new();
    let half = DD::from_f64(0.5);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let m_prev = DD::sum(mu, kf - 1.0);
        let m_k = DD::sum(mu, kf);
        base = base * xd * m_prev / (m_k * m_k * DD::from_f64(kf));
        // r_k = 2^{-ceil(k/2)} Π_{j=ceil(k/2)}^{k-1} (μ+1/2+j) / Π_{odd i<k} (2μ+1+i)
        let mut r = DD::ONE;
        let c = k.div_ceil(2);
        for _ in 0..c {
            r = r * half;
        }
        for j in c..k {
            r = r * (DD::sum(mu, j as f64) + half);
        }
        let mut i = 1;
        while i < k {
            r = r / DD::sum(2.0 * mu, 1.0 + i as f64);
            i += 2;
        }
        let term = base * r;
        let done = acc.push(term);
        if done && kf * kf > 4.0 * x.abs() && kf > 2.0 * mu.abs() + 2.0 {
            let sum = acc.sum;
            return Ok((acc.finish(term.hi, k + 1, "series"), sum));
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// `3F4(1, 1, 3/2; 2, 2, 2-ν, 2+ν; x)`, the logarithmic companion of
/// [`bessel_square_2f3`], with `2±ν+k` formed exactly in double-double.
pub fn log_companion_3f4(nu: f64, x: f64) -> Result<EvalResult> {
    log_companion_3f4_dd(nu, DD::from_f64(x)).map(|(r, _)| r)
}

pub(crate) fn log_companion_3f4_dd(nu: f64, xd: DD) -> Result<(EvalResult, DD)> {
    let x = xd.hi;
    for b in [2.0 - nu, 2.0 + nu] {
        if b <= 0.0 && b == b.floor() {
            return Err(Error::Pole {
                function: "3F4 lower parameter 2 -+ nu",
                at: nu,
            });
        }
    }
    let mut term = DD::ONE;
    let mut acc = SeriesSum::new();
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        // (1+k)²(3/2+k) / ((2+k)²(2-ν+k)(2+ν+k)(k+1))
        let num = xd * DD::from_f64(1.0 + kf) * DD::from_f64(1.5 + kf);
        let two_k = DD::from_f64(2.0 + kf);
        let den = two_k * two_k * DD::sum(-nu, 2.0 + kf) * DD::sum(nu, 2.0 + kf);
        term = term * num / den;
        let done = acc.push(term);
        if done && (kf + 2.0) * (kf + 2.0) > 2.0 * x.abs() && kf > nu.abs() {
            let sum = acc.sum;
            return Ok((acc.finish(term.hi, k + 2, "series"), sum));
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// Constants of the large-argument expansion of `pF(p+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticCoefficients {
    pub a_sum: f64,
    pub b_sum: f64,
    pub chi: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub c1: f64,
}

fn pair_sum(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..v.len() {
        for j in 0..i {
            s += v[i] * v[j];
        }
    }
    s
}

pub fn asymptotic_coefficients(spec: &HypergeometricSpec) -> AsymptoticCoefficients {
    let a_sum: f64 = spec.a.iter().sum();
    let b_sum: f64 = spec.b.iter().sum();
    let chi = 0.5 * (a_sum - b_sum + 0.5);
    let big_a = pair_sum(&spec.a);
    let big_b = pair_sum(&spec.b);
    let c1 =
        2.0 * (big_b - big_a + 0.25 * (3.0 * a_sum + b_sum - 2.0) * (a_sum - b_sum) - 3.0 / 16.0);
    AsymptoticCoefficients {
        a_sum,
        b_sum,
        chi,
        big_a,
        big_b,
        c1,
    }
}

fn check_asymptotic(spec: &HypergeometricSpec, x: f64) -> Result<()> {
    if spec.q() != spec.p() + 1 {
        return Err(Error::Precondition(format!(
            "large-argument form needs q = p + 1, got p = {}, q = {}",
            spec.p(),
            spec.q()
        )));
    }
    for i in 0..spec.p() {
        for j in 0..i {
            let d = spec.a[i] - spec.a[j];
            if d == d.round() {
                return Err(Error::Domain {
                    formula: "large-argument pF(p+1) expansion",
                    hypothesis: "a_j - a_k not an integer (simple poles)",
                    nu: d,
                    z: x,
                });
            }
        }
    }
    if x.abs() < 400.0 {
        return Err(Error::Domain {
            formula: "large-argument pF(p+1) expansion",
            hypothesis: "|x| >= 400",
            nu: f64::NAN,
            z: x,
        });
    }
    Ok(())
}

fn gamma_ratio_prefactor(spec: &HypergeometricSpec) -> Result<f64> {
    let mut g = 1.0;
    for &b in &spec.b {
        g *= gamma(b)?;
    }
    for &a in &spec.a {
        g /= gamma(a)?;
    }
    Ok(g)
}

/// Leading algebraic block `Σ_k Γ(a_k)Π_{j≠k}Γ(a_j-a_k)/ΠΓ(b_j-a_k)·w^{-a_k}`
/// (without the common `ΠΓ(b)/ΠΓ(a)` factor), with `w^{-a_k}` supplied.
fn algebraic_block(spec: &HypergeometricSpec, power: impl Fn(f64) -> f64) -> Result<f64> {
    let mut s = 0.0;
    for (k, &ak) in spec.a.iter().enumerate() {
        let mut t = gamma(ak)?;
        for (j, &aj) in spec.a.iter().enumerate() {
            if j != k {
                t *= gamma(aj - ak)?;
            }
        }
        for &b in &spec.b {
            t *= crate::scalar::recip_gamma(b - ak);
        }
        s += t * power(ak);
    }
    Ok(s)
}

/// Leading-order `pF(p+1)(a; b; x)` for large negative `x`.
pub fn asym_pfq_oscillatory(spec: &HypergeometricSpec, x: f64) -> Result<f64> {
    check_asymptotic(spec, x)?;
    if x >= 0.0 {
        return Err(Error::Precondition("oscillatory form needs x < 0".into()));
    }
    let y = -x;
    let c = asymptotic_coefficients(spec);
    let g = gamma_ratio_prefactor(spec)?;
    let phase = PI * c.chi + 2.0 * y.sqrt();
    let osc = g / PI.sqrt() * y.powf(c.chi) * (phase.cos() + c.c1 / (2.0 * y.sqrt()) * phase.sin());
    let alg = g * algebraic_block(spec, |a| y.powf(-a))?;
    Ok(osc + alg)
}

/// Leading-order `pF(p+1)(a; b; x)` for large positive `x`.
///
/// The exponential part carries its first correction `1 + c₁/(2√x)`; the
/// algebraic block keeps the real part of `(-x)^{-a}`, i.e. `x^{-a}cos πa`.
pub fn asym_pfq_exponential(spec: &HypergeometricSpec, x: f64) -> Result<f64> {
    check_asymptotic(spec, x)?;
    if x <= 0.0 {
        return Err(Error::Precondition("exponential form needs x > 0".into()));
    }
    let c = asymptotic_coefficients(spec);
    let g = gamma_ratio_prefactor(spec)?;
    let rx = x.sqrt();
    let exp_part =
        g / (2.0 * PI.sqrt()) * x.powf(c.chi) * (2.0 * rx).exp() * (1.0 + c.c1 / (2.0 * rx));
    let alg = g * algebraic_block(spec, |a| x.powf(-a) * cos_pi(a))?;
    Ok(exp_part + alg)
}
