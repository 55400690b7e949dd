use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nu_deriv::derivs::{DerivKind, Method};
use nu_deriv::harness::{
    evaluate, fmt_f64, run_benchmark, run_consistency, GridSpec, Kind, Tolerances,
};
use nu_deriv::Error;

/// Order derivatives of Bessel functions, by several cross-checked routes.
#[derive(Parser)]
#[command(name = "nu-deriv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at one point.
    Eval {
        /// dJ, dY, dI, dK, dJYprod, or int:J2, int:JY, int:Y2, int:I2, int:IK, int:K2
        #[arg(long)]
        kind: String,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        z: f64,
        /// series, closed, meijer, quadrature, fd or auto
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Tabulate a quantity over ranges of ν and z as CSV.
    Table {
        #[arg(long)]
        kind: String,
        /// start:stop:step, inclusive
        #[arg(long = "nu-range", allow_hyphen_values = true)]
        nu_range: String,
        /// start:stop:step, inclusive
        #[arg(long = "z-range")]
        z_range: String,
        #[arg(long, default_value = "auto")]
        method: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every route on a grid; prints the JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = GridChoice::Default)]
        grid: GridChoice,
        /// One tolerance for every route pair.
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the JSON report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the closed route against the Meijer-G route.
    Bench {
        /// Comma-separated derivative kinds.
        #[arg(long, default_value = "dJ,dY,dI,dK,dJYprod")]
        kinds: String,
        #[arg(long, default_value_t = 0.6)]
        nu: f64,
        #[arg(long, default_value_t = 2.0)]
        z: f64,
        #[arg(long, default_value_t = 200)]
        reps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GridChoice {
    Default,
    Full,
    Integrals,
}

/// Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
enum Failure {
    Verify,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("range '{s}' is not start:stop:step"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, step] = parts[..] else {
        return Err(bad());
    };
    if step.is_nan() || step <= 0.0 || b < a || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| a + i as f64 * step).collect())
}

fn parse_method(s: &str) -> Result<Method, Failure> {
    Ok(s.parse::<Method>()?)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval {
            kind,
            nu,
            z,
            method,
        } => {
            let kind: Kind = kind.parse()?;
            let r = evaluate(kind, nu, z, parse_method(&method)?)?;
            println!(
                "value={} error={} route={}",
                fmt_f64(r.value),
                fmt_f64(r.error_estimate),
                r.route
            );
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Table {
            kind,
            nu_range,
            z_range,
            method,
            out,
        } => {
            let kind: Kind = kind.parse()?;
            let method = parse_method(&method)?;
            let nus = parse_range(&nu_range)?;
            let zs = parse_range(&z_range)?;
            let mut points = Vec::new();
            for &nu in &nus {
                for &z in &zs {
                    points.push((nu, z));
                }
            }
            use rayon::prelude::*;
            let rows: Vec<String> = points
                .par_iter()
                .map(|&(nu, z)| match evaluate(kind, nu, z, method) {
                    Ok(r) => format!(
                        "{kind},{},{},{},{},{},",
                        fmt_f64(nu),
                        fmt_f64(z),
                        fmt_f64(r.value),
                        fmt_f64(r.error_estimate),
                        r.route
                    ),
                    Err(e) => format!(
                        "{kind},{},{},,,,\"{}\"",
                        fmt_f64(nu),
                        fmt_f64(z),
                        e.to_string().replace('"', "'")
                    ),
                })
                .collect();
            let mut text = String::from("kind,nu,z,value,err,route,reason\n");
            for r in rows {
                text.push_str(&r);
                text.push('\n');
            }
            write_out(&out, &text)
        }
        Command::Verify {
            grid,
            tol,
            csv,
            out,
        } => {
            let g = match grid {
                GridChoice::Default => GridSpec::default_grid(),
                GridChoice::Full => GridSpec::full_grid(),
                GridChoice::Integrals => GridSpec::integral_grid(),
            };
            let tolerances = tol.map(Tolerances::uniform).unwrap_or_default();
            let report = run_consistency(&g, tolerances)?;
            if let Some(p) = &csv {
                write_out(&Some(p.clone()), &report.to_csv())?;
            }
            let mut json = report.to_json();
            json.push('\n');
            write_out(&out, &json)?;
            for k in &report.summary.kinds {
                eprintln!(
                    "{:<8} pass {:>4}  fail {:>3}  skipped {:>3}  error {:>3}  worst {:.3e}",
                    k.kind.to_string(),
                    k.passed,
                    k.failed,
                    k.skipped,
                    k.errors,
                    k.worst_rel_diff
                );
            }
            if report.summary.pass {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Command::Bench { kinds, nu, z, reps } => {
            let kinds: Vec<DerivKind> = kinds
                .split(',')
                .map(|k| k.trim().parse::<DerivKind>())
                .collect::<Result<_, _>>()?;
            let rows = run_benchmark(&kinds, nu, z, reps)?;
            println!("kind,nu,z,closed_ns,meijer_ns,ratio");
            for r in rows {
                println!(
                    "{},{},{},{:.0},{:.0},{:.2}",
                    r.kind, r.nu, r.z, r.closed_ns, r.meijer_ns, r.ratio
                );
            }
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("NU_DERIV_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Usage(format!("NU_DERIV_THREADS must be a count, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
