//! Meijer-G functions by numerical Mellin-Barnes integration.
//!
//! The integration path is a hyperbola `s(t) = c + κ(√(1+t²) - 1) + i t`
//! crossing the real axis inside the gap that separates the two pole
//! families and opening to the right. For `q > p` the Γ-ratio decays like
//! `exp(-(q-p)·Re s·ln|s|)` along it, whereas on a vertical line instances
//! with `m + n = (p+q)/2` decay only algebraically. Conjugate symmetry of the
//! integrand reduces the path to `t >= 0`, where the trapezoid rule converges
//! geometrically.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergeom::HypergeometricSpec;
use crate::result::EvalResult;
use crate::scalar::{gamma, ln_gamma_complex};

/// Opening angle of the hyperbolic path.
const PATH_ANGLE: f64 = 0.35;
/// Relative size of the integrand at which the path is truncated.
const TAIL_RATIO: f64 = 1e-18;
const MAX_NODES: usize = 4_000_000;
const REFINEMENTS: usize = 3;
const AGREEMENT: f64 = 1e-8;

/// Parameters of `G^{m,n}_{p,q}(x | a; b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeijerSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MeijerSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let spec = Self { m, n, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    fn validate(&self) -> Result<()> {
        if self.m > self.q() || self.n > self.p() {
            return Err(Error::Precondition(format!(
                "need m <= q and n <= p, got m = {}, n = {}, p = {}, q = {}",
                self.m,
                self.n,
                self.p(),
                self.q()
            )));
        }
        if self.q() <= self.p() {
            return Err(Error::Precondition(format!(
                "contour evaluation needs q > p, got p = {}, q = {}",
                self.p(),
                self.q()
            )));
        }
        if self.a.iter().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(Error::Precondition("parameters must be finite".into()));
        }
        for &ak in &self.a[..self.n] {
            for &bj in &self.b[..self.m] {
                let d = ak - bj;
                if d >= 1.0 && d == d.floor() {
                    return Err(Error::Precondition(format!(
                        "a_k - b_j = {d} is a positive integer"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Same function with parameters sorted inside each of the four groups.
    pub fn normalized(&self) -> Self {
        fn sorted(v: &[f64]) -> Vec<f64> {
            let mut v = v.to_vec();
            v.sort_by(f64::total_cmp);
            v
        }
        let mut a = sorted(&self.a[..self.n]);
        a.extend(sorted(&self.a[self.n..]));
        let mut b = sorted(&self.b[..self.m]);
        b.extend(sorted(&self.b[self.m..]));
        Self {
            m: self.m,
            n: self.n,
            a,
            b,
        }
    }

    /// `ln` of the Γ-ratio at `s`, without the `x^s` factor.
    fn ln_gamma_ratio(&self, s: Complex64) -> Complex64 {
        let mut l = Complex64::new(0.0, 0.0);
        for (j, &b) in self.b.iter().enumerate() {
            if j < self.m {
                l += ln_gamma_complex(b - s);
            } else {
                l -= ln_gamma_complex(1.0 - b + s);
            }
        }
        for (j, &a) in self.a.iter().enumerate() {
            if j < self.n {
                l += ln_gamma_complex(1.0 - a + s);
            } else {
                l -= ln_gamma_complex(a - s);
            }
        }
        l
    }
}

/// Where and how finely the path is sampled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPlan {
    /// Real-axis crossing of the path.
    pub c: f64,
    /// Slope of the hyperbola's asymptotes relative to the vertical.
    pub kappa: f64,
    /// Truncation of the path parameter, `0 <= t <= t_max`.
    pub t_max: f64,
    /// Trapezoid step in `t`.
    pub h: f64,
}

impl ContourPlan {
    fn point(&self, t: f64) -> (Complex64, Complex64) {
        let r = (1.0 + t * t).sqrt();
        let s = Complex64::new(self.c + self.kappa * (r - 1.0), t);
        let ds = Complex64::new(self.kappa * t / r, 1.0);
        (s, ds)
    }
}

fn integrand(spec: &MeijerSpec, plan: &ContourPlan, ln_x: f64, t: f64) -> Complex64 {
    let (s, ds) = plan.point(t);
    let l = spec.ln_gamma_ratio(s) + s * ln_x;
    if l.re == f64::NEG_INFINITY {
        return Complex64::new(0.0, 0.0);
    }
    l.exp() * ds
}

/// Bounds of the gap between the `Γ(1-a+s)` poles (left) and the
/// `Γ(b-s)` poles (right).
fn separating_gap(spec: &MeijerSpec) -> (f64, f64) {
    let lo = spec.a[..spec.n]
        .iter()
        .map(|a| a - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = spec.b[..spec.m]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// Chooses the crossing point, slope, step and truncation for `x`.
pub fn plan_contour(spec: &MeijerSpec, x: f64) -> Result<ContourPlan> {
    spec.validate()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Precondition(format!("x must be positive, got {x}")));
    }
    let (lo, hi) = separating_gap(spec);
    if lo >= hi {
        return Err(Error::NoSeparatingLine(format!(
            "left poles reach {lo}, right poles start at {hi}"
        )));
    }
    let (c, half) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (0.5 * (lo + hi), 0.5 * (hi - lo)),
        (false, true) => (hi - 0.5, 0.5),
        (true, false) => (lo + 0.5, 0.5),
        (false, false) => (0.0, 0.5),
    };
    // With no Γ(1-a+s) poles and every Γ(b-s) in the numerator, G is
    // exponentially small for large x; the integrand's saddle sits near
    // Re s = -√x and crossing there avoids the cancellation elsewhere.
    let c = if spec.n == 0 && spec.m == spec.q() && x > 4.0 {
        c.min(-x.sqrt())
    } else {
        c
    };
    let d = half.min(1.0);
    // A shallow path keeps x^{Re s} from outgrowing the Γ-ratio decay
    // before |t| ~ √x, which would otherwise cost digits to cancellation.
    let kappa = PATH_ANGLE.tan().min(3.0 / x.sqrt());
    let mut plan = ContourPlan {
        c,
        kappa,
        t_max: 0.0,
        h: d / 6.0,
    };
    plan.t_max = find_truncation(spec, &plan, x)?;
    Ok(plan)
}

fn find_truncation(spec: &MeijerSpec, plan: &ContourPlan, x: f64) -> Result<f64> {
    let ln_x = x.ln();
    let mut peak = 0.0f64;
    let mut t = 0.0;
    let step = 0.5;
    let floor = 10.0f64.max(2.0 * x.sqrt());
    loop {
        let v = integrand(spec, plan, ln_x, t).norm();
        if v.is_finite() {
            peak = peak.max(v);
        }
        if t >= floor && v <= TAIL_RATIO * peak {
            return Ok(t);
        }
        t += step;
        if t / plan.h > MAX_NODES as f64 {
            return Err(Error::ContourNonConvergence { relative: v / peak });
        }
    }
}

struct Trapezoid {
    /// `Σ w_i g(t_i)` at the current step.
    sum: Complex64,
    /// `Σ w_i |g(t_i)|`, the scale against which rounding is judged.
    abs_sum: f64,
    h: f64,
    nodes: usize,
}

fn trapezoid(spec: &MeijerSpec, plan: &ContourPlan, ln_x: f64) -> Trapezoid {
    let n = (plan.t_max / plan.h).ceil() as usize;
    let mut sum = 0.5 * integrand(spec, plan, ln_x, 0.0);
    let mut abs_sum = sum.norm();
    for k in 1..=n {
        let g = integrand(spec, plan, ln_x, k as f64 * plan.h);
        sum += g;
        abs_sum += g.norm();
    }
    Trapezoid {
        sum: sum * plan.h,
        abs_sum: abs_sum * plan.h,
        h: plan.h,
        nodes: n + 1,
    }
}

/// Halves the step by adding the midpoints of the current rule.
fn refine(spec: &MeijerSpec, plan: &ContourPlan, ln_x: f64, prev: &Trapezoid) -> Trapezoid {
    let n = (plan.t_max / prev.h).ceil() as usize;
    let mut mid = Complex64::new(0.0, 0.0);
    let mut mid_abs = 0.0;
    for k in 0..n {
        let g = integrand(spec, plan, ln_x, (k as f64 + 0.5) * prev.h);
        mid += g;
        mid_abs += g.norm();
    }
    let h = 0.5 * prev.h;
    Trapezoid {
        sum: 0.5 * prev.sum + mid * h,
        abs_sum: 0.5 * prev.abs_sum + mid_abs * h,
        h,
        nodes: prev.nodes + n,
    }
}

/// `G^{m,n}_{p,q}(x)` with a given path.
pub fn eval_meijer_with_plan(spec: &MeijerSpec, x: f64, plan: &ContourPlan) -> Result<EvalResult> {
    let ln_x = x.ln();
    let mut cur = trapezoid(spec, plan, ln_x);
    let mut last_rel = f64::INFINITY;
    for _ in 0..=REFINEMENTS {
        let next = refine(spec, plan, ln_x, &cur);
        let v_cur = cur.sum.im / PI;
        let v_next = next.sum.im / PI;
        let diff = (v_next - v_cur).abs();
        let rounding = 1e-15 * next.abs_sum / PI;
        if diff <= AGREEMENT * v_next.abs() + rounding {
            return Ok(EvalResult::new(v_next, diff + rounding, "meijer").with_terms(next.nodes));
        }
        last_rel = diff / v_next.abs();
        cur = next;
    }
    Err(Error::ContourNonConvergence { relative: last_rel })
}

/// `G^{m,n}_{p,q}(x | a; b)` by Mellin-Barnes quadrature, `x > 0`.
pub fn eval_meijer(spec: &MeijerSpec, x: f64) -> Result<EvalResult> {
    let spec = spec.normalized();
    let plan = plan_contour(&spec, x)?;
    eval_meijer_with_plan(&spec, x, &plan)
}

/// `G` from the full path `-t_max <= t <= t_max`, without folding by
/// conjugate symmetry. For real parameters the imaginary part is rounding.
pub fn eval_meijer_both_rays(spec: &MeijerSpec, x: f64) -> Result<Complex64> {
    let plan = plan_contour(spec, x)?;
    let ln_x = x.ln();
    let n = (plan.t_max / plan.h).ceil() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in -n..=n {
        let w = if k.abs() == n { 0.5 } else { 1.0 };
        sum += w * integrand(spec, &plan, ln_x, k as f64 * plan.h);
    }
    Ok(sum * plan.h / Complex64::new(0.0, 2.0 * PI))
}

/// `G(a_1,…,a_p; b_1,…,b_{q-1}, a_1) = G^{m,n-1}_{p-1,q-1}(a_2,…; b_1,…,b_{q-1})`.
pub fn reduce_a1(spec: &MeijerSpec) -> Result<MeijerSpec> {
    let (p, q) = (spec.p(), spec.q());
    if spec.n == 0 || spec.m >= q || p == 0 || spec.b[q - 1] != spec.a[0] {
        return Err(Error::Precondition(
            "reduce_a1 needs n >= 1, m < q and b_q = a_1".into(),
        ));
    }
    Ok(MeijerSpec {
        m: spec.m,
        n: spec.n - 1,
        a: spec.a[1..].to_vec(),
        b: spec.b[..q - 1].to_vec(),
    })
}

/// `G(a_1,…,a_{p-1}, b_1; b_1,…,b_q) = G^{m-1,n}_{p-1,q-1}(a_1,…,a_{p-1}; b_2,…)`.
pub fn reduce_ap(spec: &MeijerSpec) -> Result<MeijerSpec> {
    let p = spec.p();
    if spec.m == 0 || p == 0 || spec.n >= p || spec.a[p - 1] != spec.b[0] {
        return Err(Error::Precondition(
            "reduce_ap needs m >= 1, n < p and a_p = b_1".into(),
        ));
    }
    Ok(MeijerSpec {
        m: spec.m - 1,
        n: spec.n,
        a: spec.a[..p - 1].to_vec(),
        b: spec.b[1..].to_vec(),
    })
}

/// Shifts every parameter by `alpha`: `x^α G(spec) = G(translated)`.
pub fn translate(spec: &MeijerSpec, alpha: f64) -> MeijerSpec {
    MeijerSpec {
        m: spec.m,
        n: spec.n,
        a: spec.a.iter().map(|v| v + alpha).collect(),
        b: spec.b.iter().map(|v| v + alpha).collect(),
    }
}

/// `pFq(a; b; -x) = [ΠΓ(b)/ΠΓ(a)] · G^{1,p}_{p,q+1}(x | 1-a; 0, 1-b)`.
pub fn pfq_to_meijer(spec: &HypergeometricSpec) -> Result<(MeijerSpec, f64)> {
    if spec.p() == 0 && spec.q() == 0 {
        return Err(Error::Precondition(
            "0F0 has no Meijer-G form with q > p".into(),
        ));
    }
    let mut pref = 1.0;
    for &b in &spec.b {
        pref *= gamma(b)?;
    }
    for &a in &spec.a {
        pref /= gamma(a)?;
    }
    let a = spec.a.iter().map(|v| 1.0 - v).collect();
    let mut b = vec![0.0];
    b.extend(spec.b.iter().map(|v| 1.0 - v));
    Ok((MeijerSpec::new(1, spec.p(), a, b)?, pref))
}

/// Leading large-x behaviour `A·H(x e^{iπμ}) + conj(A)·H(x e^{-iπμ})` with
/// `M₀ = 1`, valid for `0 <= n <= p <= q-2` and `p+1 <= m+n <= (p+q)/2`.
pub fn meijer_asym_leading(spec: &MeijerSpec, x: f64) -> Result<f64> {
    let (m, n, p, q) = (spec.m, spec.n, spec.p(), spec.q());
    let ok = p + 2 <= q && p < m + n && 2 * (m + n) <= p + q;
    if !ok {
        return Err(Error::Precondition(format!(
            "leading asymptotics need n <= p <= q-2 and p+1 <= m+n <= (p+q)/2, \
             got m = {m}, n = {n}, p = {p}, q = {q}"
        )));
    }
    let mu = (q - m - n) as f64;
    let sigma = (q - p) as f64;
    let xi: f64 = spec.b.iter().sum();
    let lambda: f64 = spec.a.iter().sum();
    let theta = ((1.0 - sigma) / 2.0 + xi - lambda) / sigma;
    let phase_a: f64 = spec.a[..n].iter().sum::<f64>() - spec.b[m..].iter().sum::<f64>();
    // -1/(2πi) = i/(2π)
    let big_a =
        Complex64::new(0.0, 1.0 / (2.0 * PI)).powf(mu) * Complex64::from_polar(1.0, PI * phase_a);
    // H(x e^{iπμ}) with the powers taken along the ray.
    let root = Complex64::from_polar(x.powf(1.0 / sigma), PI * mu / sigma);
    let power = Complex64::from_polar(x.powf(theta), PI * mu * theta);
    let h = (2.0 * PI).powf((sigma - 1.0) / 2.0) / sigma.sqrt() * (-sigma * root).exp() * power;
    Ok(2.0 * (big_a * h).re)
}
