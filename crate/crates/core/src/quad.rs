//! Adaptive Gauss-Kronrod quadrature and the semi-infinite variants built on it.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 21-point Kronrod nodes (non-negative half) and weights; the odd-indexed
// nodes are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_029_406,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Value and error estimate of a quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

impl Quad {
    fn add(self, other: Quad) -> Quad {
        Quad {
            value: self.value + other.value,
            error: self.error + other.error,
            evals: self.evals + other.evals,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.error.is_finite()
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
pub fn gk21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Quad {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let fc = f(centr);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, fvj) in fv.iter_mut().enumerate() {
        let dx = hlgth * XGK[j];
        let f1 = f(centr - dx);
        let f2 = f(centr + dx);
        *fvj = (f1, f2);
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        resasc += WGK[j] * ((f1 - reskh).abs() + (f2 - reskh).abs());
    }
    let result = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let mut err = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Quad {
        value: result,
        error: err,
        evals: 21,
    }
}

struct Panel {
    a: f64,
    b: f64,
    q: Quad,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.q.error == o.q.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.q.error.total_cmp(&o.q.error)
    }
}

/// Tolerances and panel budget for adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tol {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_panels: 2000,
        }
    }
}

/// Globally adaptive integration over `[a, b]`: the panel with the largest
/// error is bisected until the total error meets the tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tol) -> Quad {
    integrate_panels(&f, &[a, b], tol)
}

/// As [`integrate`], starting from the given breakpoints.
pub fn integrate_panels(f: &impl Fn(f64) -> f64, points: &[f64], tol: Tol) -> Quad {
    let mut heap = BinaryHeap::new();
    let mut total = Quad {
        value: 0.0,
        error: 0.0,
        evals: 0,
    };
    for w in points.windows(2) {
        let q = gk21(f, w[0], w[1]);
        total = total.add(q);
        heap.push(Panel {
            a: w[0],
            b: w[1],
            q,
        });
    }
    while heap.len() < tol.max_panels {
        let target = tol.abs.max(tol.rel * total.value.abs());
        if total.error <= target || !total.is_finite() {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        total.value += left.value + right.value - worst.q.value;
        total.error += left.error + right.error - worst.q.error;
        total.evals += left.evals + right.evals;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            q: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            q: right,
        });
    }
    // Re-sum to shed the drift of incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.q.value, e + p.q.error));
    Quad {
        value,
        error,
        evals: total.evals,
    }
}

/// `∫_a^∞ f` through `t = a + u/(1-u)`, for integrands that decay at least
/// like `1/t²`.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, tol: Tol) -> Quad {
    let g = |u: f64| {
        let w = 1.0 - u;
        let t = a + u / w;
        let v = f(t) / (w * w);
        if v.is_finite() {
            v
        } else if t.is_finite() && u > 0.5 {
            0.0
        } else {
            v
        }
    };
    integrate_panels(&g, &[0.0, 0.5, 0.9, 0.99, 1.0], tol)
}

/// Limit of a slowly converging sequence by iterated Aitken Δ².
///
/// Returns the accelerated value and the difference between the last two
/// entries of the deepest column as an error estimate.
pub fn aitken_limit(seq: &[f64]) -> (f64, f64) {
    let mut col: Vec<f64> = seq.to_vec();
    let mut best = (
        *col.last().unwrap_or(&f64::NAN),
        if col.len() >= 2 {
            (col[col.len() - 1] - col[col.len() - 2]).abs()
        } else {
            f64::INFINITY
        },
    );
    while col.len() >= 3 {
        let mut next = Vec::with_capacity(col.len() - 2);
        for w in col.windows(3) {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let den = d2 - d1;
            if den == 0.0 || !den.is_finite() {
                next.push(w[2]);
            } else {
                next.push(w[2] - d2 * d2 / den);
            }
        }
        col = next;
        if col.len() >= 2 {
            let n = col.len();
            let err = (col[n - 1] - col[n - 2]).abs();
            if err.is_finite() && err <= best.1 {
                best = (col[n - 1], err);
            }
        }
    }
    best
}

/// Result of an accelerated oscillatory tail integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatoryQuad {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
    pub converged: bool,
}

/// `∫_a^∞ f` for a purely oscillatory `f` with slowly decaying amplitude.
///
/// The range is cut into cells of width `cell` (half the oscillation
/// period), cell integrals are accumulated into partial sums, and the
/// sequence is extrapolated by iterated Aitken Δ². Stops when successive
/// extrapolations agree to `stability` or after `max_cells` cells.
pub fn integrate_oscillatory(
    f: impl Fn(f64) -> f64,
    a: f64,
    cell: f64,
    stability: f64,
    max_cells: usize,
) -> OscillatoryQuad {
    let mut partial = Vec::with_capacity(max_cells);
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let mut hits = 0;
    let tol = Tol::new(1e-16, 1e-13);
    for n in 0..max_cells {
        let lo = a + n as f64 * cell;
        sum += integrate(&f, lo, lo + cell, tol).value;
        partial.push(sum);
        if partial.len() < 8 {
            continue;
        }
        let window = &partial[partial.len().saturating_sub(24)..];
        let (est, est_err) = aitken_limit(window);
        if let Some(p) = prev {
            let diff = (est - p).abs();
            if diff <= stability * est.abs().max(1.0) {
                hits += 1;
                if hits >= 2 {
                    return OscillatoryQuad {
                        value: est,
                        error: diff.max(est_err),
                        cells: n + 1,
                        converged: true,
                    };
                }
            } else {
                hits = 0;
            }
        }
        prev = Some(est);
    }
    let window = &partial[partial.len().saturating_sub(24)..];
    let (est, est_err) = aitken_limit(window);
    OscillatoryQuad {
        value: est,
        error: est_err,
        cells: max_cells,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        // Kronrod 21 is exact to degree 31, Gauss 10 to degree 19.
        for deg in [0, 5, 19, 31] {
            let q = gk21(&|x: f64| x.powi(deg), 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((q.value - exact).abs() < 1e-15, "deg {deg}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let q = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, Tol::new(1e-13, 1e-13));
        assert!((q.value - 2.0).abs() < 1e-10, "{q:?}");
        let q = integrate(|x: f64| x.ln(), 0.0, 1.0, Tol::new(1e-13, 1e-13));
        assert!((q.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn semi_infinite() {
        let q = integrate_to_infinity(|t: f64| (-t).exp(), 1.0, Tol::new(1e-15, 1e-14));
        assert!((q.value - (-1.0f64).exp()).abs() < 1e-14);
        let q = integrate_to_infinity(|t: f64| 1.0 / (t * t), 2.0, Tol::new(1e-15, 1e-14));
        assert!((q.value - 0.5).abs() < 1e-13);
    }

    #[test]
    fn aitken_on_alternating_harmonic() {
        let mut s = 0.0;
        let seq: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (v, _) = aitken_limit(&seq);
        assert!((v - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_sine_over_t() {
        // ∫_1^∞ sin t / t = π/2 - Si(1)
        let si1 = 0.946_083_070_367_183_1;
        let r = integrate_oscillatory(|t: f64| t.sin() / t, 1.0, PI, 1e-10, 200);
        assert!(r.converged);
        assert!((r.value - (PI / 2.0 - si1)).abs() < 1e-9, "{r:?}");
    }
}
