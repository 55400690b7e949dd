//! Bessel functions J, Y, I, K of real order and positive real argument.
//!
//! Small and moderate arguments use the defining power series, summed in
//! double-double so the alternating J series keeps its digits up to z = 30.
//! Y and K are built from the J and I series through their defining ratios;
//! at integer order those ratios are 0/0 and the logarithmic series is used.
//! Large arguments switch to Hankel-type expansions, and K for z > 2 uses a
//! continued fraction because the ratio form loses about 2z/ln 10 digits.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::dd::{DoubleDouble as DD, DD_TAIL};
use crate::error::{Error, Result};
use crate::scalar::{cos_pi, ln_gamma_signed, recip_gamma, sin_pi, RealArgument};

/// Above this argument J, Y and I switch from series to asymptotics.
pub const SERIES_LIMIT: f64 = 30.0;
/// Above this argument K is computed by continued fraction.
const K_CF_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 10_000;

fn check_args(nu: f64, z: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(Error::Precondition(format!(
            "order must be finite, got {nu}"
        )));
    }
    RealArgument::new(z).map(|_| ())
}

fn is_integer(nu: f64) -> bool {
    nu == nu.round()
}

fn parity(n: f64) -> f64 {
    if (n.abs() as u64).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(z/2)^ν / Γ(ν+1)`, falling back to logarithms when the pieces over- or
/// underflow separately.
pub(crate) fn series_prefactor(nu: f64, z: f64) -> Result<f64> {
    let p = (0.5 * z).powf(nu);
    let r = recip_gamma(nu + 1.0);
    if r == 0.0 {
        return Ok(0.0);
    }
    let v = p * r;
    if p.is_finite() && p != 0.0 && v.is_finite() && r.is_finite() {
        return Ok(v);
    }
    let (lg, sign) = ln_gamma_signed(nu + 1.0)?;
    let l = nu * (0.5 * z).ln() - lg;
    if l > 709.0 {
        return Err(Error::Overflow("(z/2)^nu / gamma(nu + 1)"));
    }
    Ok(sign * l.exp())
}

/// `Σ_k (±z²/4)^k / (k! (ν+1)_k)` summed in double-double.
///
/// Returns the sum and the largest partial-sum magnitude seen.
pub(crate) fn hyper0f1_dd(nu: f64, z: f64, negative: bool) -> Result<(DD, f64)> {
    let zz = DD::from_f64(z) * DD::from_f64(z);
    let mut x = zz.mul_f64(0.25);
    if negative {
        x = -x;
    }
    let mut term = DD::ONE;
    let mut sum = DD::ONE;
    let mut max_partial = 1.0f64;
    let mut small = 0;
    let growth_end = 0.5 * z + nu.abs();
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let denom = DD::sum(nu, kf).mul_f64(kf);
        if denom.hi == 0.0 {
            return Err(Error::Pole {
                function: "bessel series denominator (nu+1)_k",
                at: nu,
            });
        }
        term = term * x / denom;
        sum += term;
        max_partial = max_partial.max(sum.hi.abs());
        if term.hi.abs() <= DD_TAIL * sum.hi.abs() {
            small += 1;
            if small >= 3 && kf > growth_end {
                return Ok((sum, max_partial));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

fn j_series(nu: f64, z: f64) -> Result<f64> {
    let pref = series_prefactor(nu, z)?;
    if pref == 0.0 {
        return Ok(0.0);
    }
    let (s, _) = hyper0f1_dd(nu, z, true)?;
    Ok(pref * s.to_f64())
}

fn i_series(nu: f64, z: f64) -> Result<f64> {
    let pref = series_prefactor(nu, z)?;
    if pref == 0.0 {
        return Ok(0.0);
    }
    let (s, _) = hyper0f1_dd(nu, z, false)?;
    Ok(pref * s.to_f64())
}

/// Hankel P and Q sums for large z.
fn hankel_pq(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * z);
        if next.abs() > last && k > 2 {
            break;
        }
        last = next.abs();
        term = next;
        // k = 1,2,3,4,... contributes +Q, -P, -Q, +P, ...
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// Large-argument J and Y together.
fn jy_hankel(nu: f64, z: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu, z);
    // χ = z - (ν/2 + 1/4)π
    let phase = 0.5 * nu + 0.25;
    let (cz, sz) = (z.cos(), z.sin());
    let (cp, sp) = (cos_pi(phase), sin_pi(phase));
    let cchi = cz * cp + sz * sp;
    let schi = sz * cp - cz * sp;
    let amp = (FRAC_2_PI / z).sqrt();
    (amp * (p * cchi - q * schi), amp * (p * schi + q * cchi))
}

/// `Σ_k (∓1)^k a_k(ν)/z^k` with `a_k = ∏_{j≤k}(4ν²-(2j-1)²)/(k! 8^k)`.
fn modified_asymptotic_sum(nu: f64, z: f64, alternating: bool) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let mut next = term * (mu - odd * odd) / (k as f64 * 8.0 * z);
        if alternating {
            next = -next;
        }
        if next.abs() > last && k > 2 {
            break;
        }
        last = next.abs();
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Bessel function of the first kind `J_ν(z)`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if nu < 0.0 && is_integer(nu) {
        return Ok(parity(nu) * bessel_j(-nu, z)?);
    }
    if z > SERIES_LIMIT {
        return Ok(jy_hankel(nu, z).0);
    }
    j_series(nu, z)
}

/// `J_ν(z)² + Y_ν(z)²`, free of phase error at large z.
pub fn bessel_modulus_sq(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if z > SERIES_LIMIT {
        let (p, q) = hankel_pq(nu, z);
        return Ok(FRAC_2_PI / z * (p * p + q * q));
    }
    let j = bessel_j(nu, z)?;
    let y = bessel_y(nu, z)?;
    Ok(j * j + y * y)
}

/// `Y_ν(z)` from the J series at non-integer order.
fn y_ratio(nu: f64, z: f64) -> Result<f64> {
    let jp = j_series(nu, z)?;
    let jm = j_series(-nu, z)?;
    Ok((jp * cos_pi(nu) - jm) / sin_pi(nu))
}

/// Euler's constant to double-double precision.
const EULER_DD: DD = DD {
    hi: 0.577_215_664_901_532_9,
    lo: -4.942_915_152_430_645e-18,
};

/// `Y_n` (`modified == false`) or `K_n` at integer `n >= 0` from the
/// logarithmic series
/// `Y_n = -(z/2)^{-n}/π·Σ_{k<n}(n-k-1)!/k!·(z²/4)^k + (2/π)ln(z/2)J_n
///        - (z/2)^n/π·Σ_k [ψ(k+1)+ψ(n+k+1)](-z²/4)^k/(k!(n+k)!)`
/// and its modified counterpart
/// `K_n = (z/2)^{-n}/2·Σ_{k<n}(n-k-1)!/k!·(-z²/4)^k + (-1)^{n+1}ln(z/2)I_n
///        + (-1)^n(z/2)^n/2·Σ_k [ψ(k+1)+ψ(n+k+1)](z²/4)^k/(k!(n+k)!)`.
fn integer_order_log_series(n: u32, z: f64, modified: bool) -> Result<f64> {
    let q = DD::from_f64(0.5 * z) * DD::from_f64(0.5 * z);
    let nf = n as f64;
    // finite part
    let mut finite = DD::ZERO;
    if n > 0 {
        let step = if modified { -q } else { q };
        // (n-1)!/0! then ratio (n-k-1)!/k! -> (n-k-2)!/(k+1)! is 1/((n-k-1)(k+1))
        let mut t = DD::ONE;
        for j in 1..n {
            t = t.mul_f64(j as f64);
        }
        for k in 0..n {
            finite += t;
            if k + 1 < n {
                t = t * step / DD::from_f64(((n - k - 1) * (k + 1)) as f64);
            }
        }
    }
    // log-weighted part: t_k = (±z²/4)^k/(k!(n+k)!), ψ(k+1)+ψ(n+k+1)
    let step = if modified { q } else { -q };
    let mut t = DD::ONE;
    for j in 1..=n {
        t = t / DD::from_f64(j as f64);
    }
    let mut psi_sum = -(EULER_DD + EULER_DD);
    for j in 1..=n {
        psi_sum += DD::ONE / DD::from_f64(j as f64);
    }
    let mut sum = t * psi_sum;
    let mut small = 0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t = t * step / DD::from_f64(kf * (nf + kf));
        psi_sum += DD::ONE / DD::from_f64(kf) + DD::ONE / DD::from_f64(nf + kf);
        let term = t * psi_sum;
        sum += term;
        if kf * kf > q.to_f64() && term.abs().to_f64() <= 1e-33 * sum.abs().to_f64().max(1e-300) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let half = 0.5 * z;
    let down = half.powi(-(n as i32));
    let up = half.powi(n as i32);
    let ln = half.ln();
    if modified {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let i_n = i_series(nf, z)?;
        Ok(0.5 * down * finite.to_f64() - sign * ln * i_n + sign * 0.5 * up * sum.to_f64())
    } else {
        let j_n = j_series(nf, z)?;
        Ok((-down * finite.to_f64() + 2.0 * ln * j_n - up * sum.to_f64()) / PI)
    }
}

/// Bessel function of the second kind `Y_ν(z)`.
pub fn bessel_y(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if z > SERIES_LIMIT {
        return Ok(jy_hankel(nu, z).1);
    }
    if is_integer(nu) {
        if nu < 0.0 {
            return Ok(parity(nu) * bessel_y(-nu, z)?);
        }
        return integer_order_log_series(nu as u32, z, false);
    }
    y_ratio(nu, z)
}

/// Modified Bessel function of the first kind `I_ν(z)`.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if nu < 0.0 && is_integer(nu) {
        return bessel_i(-nu, z);
    }
    if z > SERIES_LIMIT {
        let scaled = bessel_i_scaled(nu, z)?;
        let v = scaled * z.exp();
        if !v.is_finite() {
            return Err(Error::Overflow("bessel_i"));
        }
        return Ok(v);
    }
    i_series(nu, z)
}

/// `e^{-z} I_ν(z)`, finite for all z.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if nu < 0.0 && is_integer(nu) {
        return bessel_i_scaled(-nu, z);
    }
    if z <= SERIES_LIMIT {
        return Ok(i_series(nu, z)? * (-z).exp());
    }
    let a = nu.abs();
    let main = modified_asymptotic_sum(a, z, true) / (2.0 * PI * z).sqrt();
    if nu >= 0.0 {
        return Ok(main);
    }
    // I_{-a} = I_a + (2/π) sin(aπ) K_a
    let k = bessel_k_scaled(a, z)? * (-2.0 * z).exp();
    Ok(main + FRAC_2_PI * sin_pi(a) * k)
}

/// `K_ν(z)` from the I series at non-integer order.
fn k_ratio(nu: f64, z: f64) -> Result<f64> {
    let ip = i_series(nu, z)?;
    let im = i_series(-nu, z)?;
    Ok(0.5 * PI * (im - ip) / sin_pi(nu))
}

/// `e^{z} K_μ(z)` and `e^{z} K_{μ+1}(z)` for `|μ| <= 1/2`, `z >= 2`, by
/// Steed's evaluation of the second continued fraction.
fn k_cf2_scaled(mu: f64, z: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { terms: MAX_TERMS });
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * z)).sqrt() / s;
    let k1 = k0 * (mu + z + 0.5 - h) / z;
    Ok((k0, k1))
}

fn k_recurrence_scaled(nu: f64, z: f64) -> Result<f64> {
    let n = nu.round();
    let mu = nu - n;
    let (mut km, mut kp) = k_cf2_scaled(mu, z)?;
    let mut order = mu;
    for _ in 0..(n as u64) {
        let next = 2.0 * (order + 1.0) / z * kp + km;
        km = kp;
        kp = next;
        order += 1.0;
    }
    Ok(km)
}

/// Modified Bessel function of the second kind `K_ν(z)`.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    let nu = nu.abs();
    if z > K_CF_LIMIT {
        return Ok(k_recurrence_scaled(nu, z)? * (-z).exp());
    }
    if is_integer(nu) {
        return integer_order_log_series(nu as u32, z, true);
    }
    k_ratio(nu, z)
}

/// `e^{z} K_ν(z)`.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    let nu = nu.abs();
    if z > K_CF_LIMIT {
        return k_recurrence_scaled(nu, z);
    }
    Ok(bessel_k(nu, z)? * z.exp())
}

const ASYMPTOTIC_MIN_Z: f64 = 15.0;

fn check_asymptotic(formula: &'static str, nu: f64, z: f64) -> Result<()> {
    check_args(nu, z)?;
    if z < ASYMPTOTIC_MIN_Z {
        return Err(Error::Domain {
            formula,
            hypothesis: "z >= 15",
            nu,
            z,
        });
    }
    Ok(())
}

/// Two-term large-argument form `e^z/√(2πz)·[1-(4ν²-1)/(8z)]`.
pub fn asympt_i(nu: f64, z: f64) -> Result<f64> {
    check_asymptotic("large-z expansion of I_nu", nu, z)?;
    let mu = 4.0 * nu * nu - 1.0;
    Ok(z.exp() / (2.0 * PI * z).sqrt() * (1.0 - mu / (8.0 * z)))
}

/// Two-term large-argument form `√(π/(2z)) e^{-z}·[1+(4ν²-1)/(8z)]`.
pub fn asympt_k(nu: f64, z: f64) -> Result<f64> {
    check_asymptotic("large-z expansion of K_nu", nu, z)?;
    let mu = 4.0 * nu * nu - 1.0;
    Ok((PI / (2.0 * z)).sqrt() * (-z).exp() * (1.0 + mu / (8.0 * z)))
}
