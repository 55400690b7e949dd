//! Gamma-family scalar functions on the real line, plus a complex log-gamma
//! for the Mellin-Barnes integrands.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// A Bessel order. Any finite real; operations check their own ranges.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() {
            Ok(Self(nu))
        } else {
            Err(Error::Precondition(format!(
                "order must be finite, got {nu}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Distance to the nearest integer.
    pub fn integer_distance(self) -> f64 {
        (self.0 - self.0.round()).abs()
    }
}

/// A strictly positive, finite Bessel argument.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RealArgument(f64);

impl RealArgument {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_finite() && z > 0.0 {
            Ok(Self(z))
        } else {
            Err(Error::Precondition(format!(
                "argument must be positive and finite, got {z}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(pi x)` with exact argument reduction, so integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0;
    let r = if r > 1.0 {
        r - 2.0
    } else if r < -1.0 {
        r + 2.0
    } else {
        r
    };
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(pi x)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (k, c)| {
            acc + c / (z + (k + 1) as f64)
        })
}

/// Gamma function for real arguments away from its poles.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Precondition("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma",
            at: x,
        });
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let g = gamma(1.0 - x)?;
        return Ok(PI / (s * g));
    }
    if x > 171.7 {
        return Err(Error::Overflow("gamma"));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    Ok(SQRT_2PI * half * ((-t).exp() * half) * lanczos_sum(z))
}

/// `ln |Γ(x)|` together with the sign of `Γ(x)`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "ln_gamma",
            at: x,
        });
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, sg) = ln_gamma_signed(1.0 - x)?;
        return Ok((PI.ln() - s.abs().ln() - lg, s.signum() * sg));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((
        LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln(),
        1.0,
    ))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Precondition(format!(
            "ln_gamma needs a positive argument, got {x}"
        )));
    }
    ln_gamma_signed(x).map(|(v, _)| v)
}

/// `1/Γ(x)`, entire: zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => {
            let (lg, s) = ln_gamma_signed(x).unwrap_or((f64::INFINITY, 1.0));
            s * (-lg).exp()
        }
    }
}

/// Digamma function ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "digamma",
            at: x,
        });
    }
    if x < 0.0 {
        // ψ(1-x) - ψ(x) = π cot πx
        let cot = cos_pi(x) / sin_pi(x);
        return Ok(digamma(1.0 - x)? - PI * cot);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// Rising factorial `(α)_k = α(α+1)…(α+k-1)`, by running product.
pub fn pochhammer(alpha: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (alpha + j as f64))
}

const STIRLING_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn ln_sin_pi_complex(w: Complex64) -> Complex64 {
    if w.im < 0.0 {
        return ln_sin_pi_complex(w.conj()).conj();
    }
    // sin(πw) = e^{-iπw} (e^{2iπw} - 1) / (2i); |e^{2iπw}| <= 1 for Im w >= 0.
    let i = Complex64::i();
    let e2 = (i * 2.0 * PI * w).exp();
    -i * PI * w + (e2 - 1.0).ln() - (2.0 * i).ln()
}

/// A logarithm of `Γ(w)` for complex `w`.
///
/// Only `exp` of the result is meaningful: the imaginary part is correct
/// modulo 2π. Poles return a real part of `+inf`.
pub fn ln_gamma_complex(w: Complex64) -> Complex64 {
    if w.im == 0.0 && is_nonpositive_integer(w.re) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if w.re < 0.5 {
        let pi_ln = Complex64::new(PI.ln(), 0.0);
        return pi_ln - ln_sin_pi_complex(w) - ln_gamma_complex(1.0 - w);
    }
    let mut w = w;
    let mut shift = Complex64::new(1.0, 0.0);
    while w.norm_sqr() < 100.0 {
        shift *= w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING_COEF.iter().rev() {
        series = series * inv2 + *c;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series * inv - shift.ln()
}
