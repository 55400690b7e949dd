//! Cross-validation sweeps over `(ν, z)` grids and a small route benchmark.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::derivs::{deriv, DerivKind, Method};
use crate::error::{Error, Result};
use crate::integrals::{
    away_from_integer, integral_closed, integral_meijer, integral_quadrature, IntegralKind,
};
use crate::result::EvalResult;

/// Anything the library can evaluate at `(ν, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Deriv(DerivKind),
    Integral(IntegralKind),
}

impl Kind {
    pub fn name(self) -> String {
        match self {
            Kind::Deriv(k) => k.name().to_string(),
            Kind::Integral(k) => format!("int:{}", k.name()),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("int:") {
            Some(rest) => rest.parse().map(Kind::Integral),
            None => s.parse().map(Kind::Deriv),
        }
    }
}

impl Serialize for Kind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// Route `Method::Auto` resolves to for an integral.
pub fn integral_auto_route(kind: IntegralKind, nu: f64, z: f64) -> Method {
    if nu > 0.0 && away_from_integer(nu) && z <= crate::bessel::SERIES_LIMIT {
        Method::Closed
    } else if kind.has_meijer() && nu >= 0.0 {
        Method::Meijer
    } else {
        Method::Quadrature
    }
}

/// Evaluates `kind` at `(ν, z)` by `method`.
pub fn evaluate(kind: Kind, nu: f64, z: f64, method: Method) -> Result<EvalResult> {
    match kind {
        Kind::Deriv(k) => deriv(k, nu, z, method),
        Kind::Integral(k) => {
            let method = if method == Method::Auto {
                integral_auto_route(k, nu, z)
            } else {
                method
            };
            match method {
                Method::Closed => integral_closed(k, nu, z),
                Method::Meijer => integral_meijer(k, nu, z),
                Method::Quadrature => integral_quadrature(k, nu, z),
                m => Err(Error::Precondition(format!(
                    "route '{m}' is not defined for integrals"
                ))),
            }
        }
    }
}

/// Points, kinds and routes of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub nu_values: Vec<f64>,
    pub z_values: Vec<f64>,
    pub kinds: Vec<Kind>,
    pub methods: Vec<Method>,
}

impl GridSpec {
    pub fn new(
        nu_values: Vec<f64>,
        z_values: Vec<f64>,
        kinds: Vec<Kind>,
        methods: Vec<Method>,
    ) -> Result<Self> {
        let g = Self {
            nu_values,
            z_values,
            kinds,
            methods,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu_values.is_empty()
            || self.z_values.is_empty()
            || self.kinds.is_empty()
            || self.methods.is_empty()
        {
            return Err(Error::Precondition(
                "grid needs at least one order, argument, kind and method".into(),
            ));
        }
        if let Some(z) = self.z_values.iter().find(|z| !(**z > 0.0 && z.is_finite())) {
            return Err(Error::Precondition(format!(
                "grid argument {z} is not positive"
            )));
        }
        if let Some(nu) = self.nu_values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!(
                "grid order {nu} is not finite"
            )));
        }
        if self.methods.contains(&Method::Auto) {
            return Err(Error::Precondition(
                "grids compare explicit routes; 'auto' is not allowed".into(),
            ));
        }
        Ok(())
    }

    /// All five derivative kinds by every route on the reference grid.
    pub fn default_grid() -> Self {
        Self {
            nu_values: vec![0.25, 0.6, 1.5, 2.4, 3.7],
            z_values: vec![0.5, 1.0, 2.0, 5.0, 8.0],
            kinds: DerivKind::ALL.into_iter().map(Kind::Deriv).collect(),
            methods: Method::ROUTES.to_vec(),
        }
    }

    /// The default grid plus integer orders, where only the Meijer,
    /// quadrature and finite-difference routes apply.
    pub fn full_grid() -> Self {
        let mut g = Self::default_grid();
        g.nu_values.extend([1.0, 2.0]);
        g.nu_values.sort_by(f64::total_cmp);
        g
    }

    /// The six integrals by closed form, Meijer-G and quadrature.
    pub fn integral_grid() -> Self {
        Self {
            nu_values: vec![0.3, 0.75, 1.4, 2.6],
            z_values: vec![0.5, 1.0, 2.0, 5.0],
            kinds: IntegralKind::ALL.into_iter().map(Kind::Integral).collect(),
            methods: vec![Method::Closed, Method::Meijer, Method::Quadrature],
        }
    }
}

/// Agreement required between two routes, relative to `max(1, |value|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Series against closed form.
    pub series_closed: f64,
    /// Any pair involving the finite-difference oracle.
    pub finite_difference: f64,
    /// Every other pair.
    pub cross_route: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            series_closed: 1e-8,
            finite_difference: 1e-5,
            cross_route: 1e-6,
        }
    }
}

impl Tolerances {
    /// The same tolerance for every pair.
    pub fn uniform(tol: f64) -> Self {
        Self {
            series_closed: tol,
            finite_difference: tol,
            cross_route: tol,
        }
    }

    pub fn for_pair(&self, a: Method, b: Method) -> f64 {
        let pair = |x, y| (a == x && b == y) || (a == y && b == x);
        if pair(Method::Series, Method::Closed) {
            self.series_closed
        } else if a == Method::FiniteDifference || b == Method::FiniteDifference {
            self.finite_difference
        } else {
            self.cross_route
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A route's hypotheses exclude this point.
    Skipped,
    /// A route failed where it should have worked.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

/// One route pair at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub kind: Kind,
    pub nu: f64,
    pub z: f64,
    pub route_a: Method,
    pub route_b: Method,
    pub value_a: Option<f64>,
    pub value_b: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Worst case and counts for one kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KindSummary {
    pub kind: Kind,
    pub worst_rel_diff: f64,
    pub worst_at: Option<(f64, f64, Method, Method)>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub pass: bool,
    pub kinds: Vec<KindSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub crate_version: &'static str,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
}

/// Closed against Meijer timing for one kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: DerivKind,
    pub nu: f64,
    pub z: f64,
    pub closed_ns: f64,
    pub meijer_ns: f64,
    /// `meijer_ns / closed_ns`
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub meta: Meta,
    pub entries: Vec<Entry>,
    pub summary: Summary,
    pub benchmark: Vec<BenchRow>,
}

pub const CSV_HEADER: &str = "kind,nu,z,route_a,route_b,value_a,value_b,abs_diff,rel_diff,pass";

/// Shortest-round-trip-safe formatting with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl ConsistencyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                e.kind,
                fmt_f64(e.nu),
                fmt_f64(e.z),
                e.route_a,
                e.route_b,
                fmt_opt(e.value_a),
                fmt_opt(e.value_b),
                fmt_opt(e.abs_diff),
                fmt_opt(e.rel_diff),
                e.status.as_str(),
            ));
        }
        out
    }
}

type Outcome = std::result::Result<f64, (Status, String)>;

fn outcome(r: Result<EvalResult>) -> Outcome {
    match r {
        Ok(v) if v.value.is_finite() => Ok(v.value),
        Ok(v) => Err((Status::Error, format!("non-finite value {}", v.value))),
        // hypotheses excluding the point are dispatcher rules, not failures
        Err(e @ (Error::Domain { .. } | Error::Precondition(_) | Error::Pole { .. })) => {
            Err((Status::Skipped, e.to_string()))
        }
        Err(e) => Err((Status::Error, e.to_string())),
    }
}

fn compare(
    kind: Kind,
    nu: f64,
    z: f64,
    (ma, a): (Method, &Outcome),
    (mb, b): (Method, &Outcome),
    tol: f64,
) -> Entry {
    let mut e = Entry {
        kind,
        nu,
        z,
        route_a: ma,
        route_b: mb,
        value_a: a.as_ref().ok().copied(),
        value_b: b.as_ref().ok().copied(),
        abs_diff: None,
        rel_diff: None,
        tolerance: tol,
        status: Status::Skipped,
        reason: None,
    };
    match (a, b) {
        (Ok(va), Ok(vb)) => {
            let d = (va - vb).abs();
            let rel = d / va.abs().max(vb.abs()).max(1.0);
            e.abs_diff = Some(d);
            e.rel_diff = Some(rel);
            e.status = if rel <= tol {
                Status::Pass
            } else {
                Status::Fail
            };
        }
        (Err((sa, ra)), Err((sb, rb))) => {
            e.status = if *sa == Status::Error || *sb == Status::Error {
                Status::Error
            } else {
                Status::Skipped
            };
            e.reason = Some(format!("{ma}: {ra}; {mb}: {rb}"));
        }
        (Err((s, r)), _) => {
            e.status = *s;
            e.reason = Some(format!("{ma}: {r}"));
        }
        (_, Err((s, r))) => {
            e.status = *s;
            e.reason = Some(format!("{mb}: {r}"));
        }
    }
    e
}

fn summarize(kinds: &[Kind], entries: &[Entry]) -> Summary {
    let mut out = Vec::new();
    for &k in kinds {
        let mut s = KindSummary {
            kind: k,
            worst_rel_diff: 0.0,
            worst_at: None,
            passed: 0,
            failed: 0,
            skipped: 0,
            errors: 0,
        };
        for e in entries.iter().filter(|e| e.kind == k) {
            match e.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skipped => s.skipped += 1,
                Status::Error => s.errors += 1,
            }
            if let Some(r) = e.rel_diff {
                if r > s.worst_rel_diff {
                    s.worst_rel_diff = r;
                    s.worst_at = Some((e.nu, e.z, e.route_a, e.route_b));
                }
            }
        }
        out.push(s);
    }
    let pass = out.iter().all(|s| s.failed == 0 && s.errors == 0);
    Summary { pass, kinds: out }
}

/// Every route of the grid at every point, compared pairwise.
///
/// Entries are ordered by kind, then `ν`, `z` and the route pair in the
/// grid's method order, so repeated runs serialize identically.
pub fn run_consistency(grid: &GridSpec, tolerances: Tolerances) -> Result<ConsistencyReport> {
    grid.validate()?;
    let mut kinds = grid.kinds.clone();
    kinds.sort();
    kinds.dedup();
    let mut nus = grid.nu_values.clone();
    nus.sort_by(f64::total_cmp);
    nus.dedup();
    let mut zs = grid.z_values.clone();
    zs.sort_by(f64::total_cmp);
    zs.dedup();
    let mut points = Vec::new();
    for &k in &kinds {
        for &nu in &nus {
            for &z in &zs {
                points.push((k, nu, z));
            }
        }
    }
    let methods = grid.methods.clone();
    let mut entries: Vec<Entry> = points
        .par_iter()
        .flat_map_iter(|&(k, nu, z)| {
            let values: Vec<Outcome> = methods
                .iter()
                .map(|&m| outcome(evaluate(k, nu, z, m)))
                .collect();
            let mut out = Vec::new();
            for i in 0..methods.len() {
                for j in i + 1..methods.len() {
                    let tol = tolerances.for_pair(methods[i], methods[j]);
                    out.push(compare(
                        k,
                        nu,
                        z,
                        (methods[i], &values[i]),
                        (methods[j], &values[j]),
                        tol,
                    ));
                }
            }
            out
        })
        .collect();
    // already in order; the sort makes the guarantee independent of rayon
    let order = |m: Method| methods.iter().position(|x| *x == m).unwrap_or(usize::MAX);
    entries.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(a.nu.total_cmp(&b.nu))
            .then(a.z.total_cmp(&b.z))
            .then(order(a.route_a).cmp(&order(b.route_a)))
            .then(order(a.route_b).cmp(&order(b.route_b)))
    });
    let summary = summarize(&kinds, &entries);
    Ok(ConsistencyReport {
        meta: Meta {
            crate_version: env!("CARGO_PKG_VERSION"),
            grid: grid.clone(),
            tolerances,
        },
        entries,
        summary,
        benchmark: Vec::new(),
    })
}

pub const BENCH_WARMUP: usize = 10;
pub const BENCH_MIN_REPS: usize = 100;

fn median_ns(reps: usize, mut f: impl FnMut()) -> f64 {
    for _ in 0..BENCH_WARMUP {
        f();
    }
    let mut t: Vec<f64> = (0..reps.max(BENCH_MIN_REPS))
        .map(|_| {
            let s = Instant::now();
            f();
            s.elapsed().as_nanos() as f64
        })
        .collect();
    t.sort_by(f64::total_cmp);
    let n = t.len();
    if n % 2 == 1 {
        t[n / 2]
    } else {
        0.5 * (t[n / 2 - 1] + t[n / 2])
    }
}

/// Median wall time of the closed and Meijer routes for each kind at
/// `(ν, z)`, after warm-up, over at least 100 repetitions.
pub fn run_benchmark(kinds: &[DerivKind], nu: f64, z: f64, reps: usize) -> Result<Vec<BenchRow>> {
    if !away_from_integer(nu) || nu <= 0.0 {
        return Err(Error::Precondition(format!(
            "benchmark needs a positive non-integer order so both routes apply, got {nu}"
        )));
    }
    let mut rows = Vec::new();
    for &k in kinds {
        // surface route errors before timing
        deriv(k, nu, z, Method::Closed)?;
        deriv(k, nu, z, Method::Meijer)?;
        let closed_ns = median_ns(reps, || {
            black_box(deriv(black_box(k), black_box(nu), black_box(z), Method::Closed).ok());
        });
        let meijer_ns = median_ns(reps, || {
            black_box(deriv(black_box(k), black_box(nu), black_box(z), Method::Meijer).ok());
        });
        rows.push(BenchRow {
            kind: k,
            nu,
            z,
            closed_ns,
            meijer_ns,
            ratio: meijer_ns / closed_ns,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_parsing() {
        assert_eq!("dK".parse::<Kind>().unwrap(), Kind::Deriv(DerivKind::DK));
        assert_eq!(
            "int:K2".parse::<Kind>().unwrap(),
            Kind::Integral(IntegralKind::K2)
        );
        assert!("int:dK".parse::<Kind>().is_err());
        assert_eq!(Kind::Integral(IntegralKind::JY).to_string(), "int:JY");
    }

    #[test]
    fn grid_validation() {
        let mut g = GridSpec::default_grid();
        g.kinds.clear();
        assert!(g.validate().is_err());
        let mut g = GridSpec::default_grid();
        g.z_values.push(0.0);
        assert!(g.validate().is_err());
        let mut g = GridSpec::default_grid();
        g.methods.push(Method::Auto);
        assert!(g.validate().is_err());
        assert!(run_consistency(
            &GridSpec {
                kinds: vec![],
                ..GridSpec::default_grid()
            },
            Tolerances::default()
        )
        .is_err());
    }

    #[test]
    fn integer_order_closed_is_skipped() {
        let g = GridSpec::new(
            vec![2.0],
            vec![1.0],
            vec![Kind::Deriv(DerivKind::DK)],
            vec![Method::Closed, Method::Meijer],
        )
        .unwrap();
        let r = run_consistency(&g, Tolerances::default()).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].status, Status::Skipped);
        assert!(r.entries[0].reason.as_deref().unwrap().contains("integer"));
        assert!(r.summary.pass);
    }

    #[test]
    fn tolerance_pairs() {
        let t = Tolerances::default();
        assert_eq!(t.for_pair(Method::Closed, Method::Series), 1e-8);
        assert_eq!(t.for_pair(Method::Meijer, Method::FiniteDifference), 1e-5);
        assert_eq!(t.for_pair(Method::Meijer, Method::Quadrature), 1e-6);
    }

    #[test]
    fn small_report_is_deterministic_and_serializes() {
        let g = GridSpec::new(
            vec![0.6, 1.5],
            vec![2.0, 1.0],
            vec![Kind::Deriv(DerivKind::DI), Kind::Integral(IntegralKind::IK)],
            vec![Method::Closed, Method::Meijer, Method::FiniteDifference],
        )
        .unwrap();
        let a = run_consistency(&g, Tolerances::default()).unwrap();
        let b = run_consistency(&g, Tolerances::default()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.entries[0].z, 1.0);
        let csv = a.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + a.entries.len());
        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        for key in ["meta", "entries", "summary", "benchmark"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        // fd is not a route for integrals
        assert!(a
            .entries
            .iter()
            .filter(|e| e.kind == Kind::Integral(IntegralKind::IK))
            .any(|e| e.status == Status::Skipped));
        assert!(a.summary.pass);
    }

    #[test]
    fn unattainable_tolerance_fails() {
        let g = GridSpec::new(
            vec![0.6],
            vec![2.0],
            vec![Kind::Deriv(DerivKind::DJ)],
            vec![Method::Closed, Method::FiniteDifference],
        )
        .unwrap();
        let r = run_consistency(&g, Tolerances::uniform(1e-15)).unwrap();
        assert!(!r.summary.pass);
        assert_eq!(r.summary.kinds[0].failed, 1);
    }

    #[test]
    fn benchmark_rows() {
        let rows = run_benchmark(&[DerivKind::DJ, DerivKind::DK], 0.6, 2.0, 100).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.closed_ns > 0.0 && r.meijer_ns > 0.0));
        assert!(run_benchmark(&[DerivKind::DJ], 2.0, 2.0, 100).is_err());
    }
}
