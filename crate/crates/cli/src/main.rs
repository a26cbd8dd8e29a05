mod config;
mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

use totreal::algebra::{
    mahler_from_roots, parse_polynomial, roots, roots_are_real, DEFAULT_REAL_TOL,
};
use totreal::bounds::{lower_bound, optimize_exponent, sweep, BoundReport};
use totreal::equidist::{
    cyclotomic, empirical_c, family_polynomial, galois_average_of, smyth_height_sequence, Family,
};
use totreal::geometry::TestFunction;
use totreal::quadrature::{circle_integral, QuadratureConfig};
use totreal::{verify, Error};

use config::FileConfig;
use report::RunReport;

const DEFAULT_PRECISION: usize = 128;
const DEFAULT_TOL: f64 = 1e-9;
const CSV_HEADER: &str = "p,circle_integral,energy,main_term,bound,err";

#[derive(Parser, Debug)]
#[command(
    name = "totreal",
    version,
    about = "Height lower bounds for totally real algebraic numbers"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit a JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Working precision in bits for root finding [default: 128].
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Quadrature tolerance, absolute and relative [default: 1e-9].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Flat key = value file supplying defaults for the options above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weil height of the roots of an integer polynomial.
    Height {
        #[arg(long)]
        poly: String,
        /// Also list the roots with their inclusion radii.
        #[arg(long)]
        roots: bool,
    },
    /// Height lower bound obtained from the test function with exponent p.
    Bound {
        #[arg(long)]
        p: f64,
    },
    /// Search [lo, hi] for the exponent with the largest bound.
    Optimize {
        #[arg(long, default_value_t = 2.0)]
        lo: f64,
        #[arg(long, default_value_t = 5.0)]
        hi: f64,
        /// Width of the final bracket around the optimal exponent.
        #[arg(long, default_value_t = 1e-4)]
        p_tol: f64,
    },
    /// Evaluate the bound on an exponent grid.
    Sweep {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long)]
        step: f64,
        /// Write the grid as CSV to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equal-mass log+ averages over the H-preimages of 1.
    Az {
        #[arg(long, default_value_t = 14)]
        depth: usize,
    },
    /// Heights and circle averages across a polynomial family.
    Corpus {
        #[arg(long, value_enum)]
        family: FamilyKind,
        /// Largest n (cyclotomic), depth (smyth) or base (radical).
        #[arg(long)]
        max_n: u32,
        /// Smallest member index [default: 2 for radical, otherwise 1].
        #[arg(long)]
        min_n: Option<u32>,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        /// Root degree for the radical family.
        #[arg(long, default_value_t = 2)]
        exponent: u32,
        /// Rational seed for the smyth family, e.g. `1`, `-1` or `1/2`.
        #[arg(long, default_value = "1")]
        seed: String,
    },
    /// Run the acceptance suite; exits 0 iff every criterion passes.
    Verify {
        /// Run a single criterion by number.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyKind {
    Cyclotomic,
    Smyth,
    Radical,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::QuadratureNonConvergence { .. } => {
                Failure::Compute(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Settings {
    json: bool,
    precision: usize,
    cfg: QuadratureConfig,
}

fn settings(g: &Global) -> Result<Settings, Failure> {
    let file = match &g.config {
        Some(path) => FileConfig::load(path).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    let precision = g.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION);
    if !(2..=totreal::algebra::MAX_WORKING_PRECISION).contains(&precision) {
        return Err(Failure::Usage(format!(
            "precision must be between 2 and {} bits",
            totreal::algebra::MAX_WORKING_PRECISION
        )));
    }
    let tol = g.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
    let cfg = QuadratureConfig {
        working_precision: precision,
        ..QuadratureConfig::with_tol(tol)
    };
    cfg.validate()?;
    Ok(Settings {
        json: g.json || file.json.unwrap_or(false),
        precision,
        cfg,
    })
}

/// A finished command: its report, its table, and whether it succeeded.
struct Output {
    report: RunReport,
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = settings(&cli.global).and_then(|s| run(&cli.command, &s).map(|o| (o, s.json)));
    match outcome {
        Ok((mut out, json)) => {
            out.report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.report).expect("report serializes")
                );
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: &Command, s: &Settings) -> Result<Output, Failure> {
    match cmd {
        Command::Height { poly, roots } => cmd_height(poly, *roots, s),
        Command::Bound { p } => cmd_bound(*p, s),
        Command::Optimize { lo, hi, p_tol } => cmd_optimize(*lo, *hi, *p_tol, s),
        Command::Sweep { lo, hi, step, out } => cmd_sweep(*lo, *hi, *step, out.as_ref(), s),
        Command::Az { depth } => cmd_az(*depth),
        Command::Corpus {
            family,
            max_n,
            min_n,
            p,
            exponent,
            seed,
        } => cmd_corpus(*family, *min_n, *max_n, *p, *exponent, seed, s),
        Command::Verify { only } => cmd_verify(*only),
    }
}

fn ok(report: RunReport, text: String) -> Result<Output, Failure> {
    Ok(Output {
        report,
        text,
        ok: true,
    })
}

fn cmd_height(text: &str, with_roots: bool, s: &Settings) -> Result<Output, Failure> {
    let poly = parse_polynomial(text)?;
    let rs = roots(&poly, s.precision)?;
    let full = mahler_from_roots(&rs);
    let deg = poly.degree() as f64;
    let height = full.log_value / deg;
    let height_err = full.log_error / deg;
    let totally_real = roots_are_real(&rs, DEFAULT_REAL_TOL);

    let mut r = RunReport::new("height");
    r.input("poly", poly.to_string())
        .input("precision", s.precision);
    r.result("height", height)
        .result("mahler_measure", full.value)
        .result("degree", poly.degree())
        .result("totally_real", totally_real)
        .result("working_precision", rs.working_precision());
    r.error("height", height_err);

    let mut t = String::new();
    writeln!(t, "polynomial     {poly}").unwrap();
    writeln!(t, "degree         {}", poly.degree()).unwrap();
    writeln!(t, "height         {height:.10}").unwrap();
    writeln!(t, "error bound    {height_err:.1e}").unwrap();
    writeln!(t, "Mahler measure {:.10}", full.value).unwrap();
    writeln!(t, "totally real   {totally_real}").unwrap();
    if with_roots {
        let list: Vec<[f64; 3]> = rs.iter().map(|(z, rad)| [z.re, z.im, rad]).collect();
        r.result("roots", &list);
        writeln!(t, "roots").unwrap();
        for [re, im, rad] in list {
            writeln!(t, "  {re:>+22.16e} {im:>+22.16e}i  ± {rad:.1e}").unwrap();
        }
    }
    ok(r, t)
}

fn bound_rows(b: &BoundReport) -> String {
    let mut t = String::new();
    writeln!(t, "p               {}", b.p).unwrap();
    writeln!(t, "circle integral {:.10}", b.circle_integral).unwrap();
    writeln!(t, "energy          {:.10}", b.energy).unwrap();
    writeln!(t, "main term       {:.10}", b.main_term).unwrap();
    writeln!(t, "bound           {:.9}", b.bound).unwrap();
    writeln!(t, "error estimate  {:.1e}", b.bound_error).unwrap();
    writeln!(
        t,
        "Lipschitz       [{:.6}, {:.6}]",
        b.lipschitz.lower, b.lipschitz.upper
    )
    .unwrap();
    t
}

fn bound_results(r: &mut RunReport, b: &BoundReport) {
    r.result("bound", b.bound)
        .result("circle_integral", b.circle_integral)
        .result("energy", b.energy)
        .result("main_term", b.main_term)
        .result("lipschitz", b.lipschitz);
    r.error("bound", b.bound_error)
        .error("circle_integral", b.circle_error)
        .error("energy", b.energy_error);
}

fn cmd_bound(p: f64, s: &Settings) -> Result<Output, Failure> {
    let b = lower_bound(p, &s.cfg)?;
    let mut r = RunReport::new("bound");
    r.input("p", p).input("tol", s.cfg.abs_tol);
    bound_results(&mut r, &b);
    ok(r, bound_rows(&b))
}

fn cmd_optimize(lo: f64, hi: f64, p_tol: f64, s: &Settings) -> Result<Output, Failure> {
    let o = optimize_exponent(lo, hi, p_tol, &s.cfg)?;
    let mut r = RunReport::new("optimize");
    r.input("lo", lo)
        .input("hi", hi)
        .input("p_tol", p_tol)
        .input("tol", s.cfg.abs_tol);
    r.result("p_star", o.p_star)
        .result("evaluations", o.evaluations);
    bound_results(&mut r, &o.report);
    r.error("p_star", o.width);
    let mut t = format!(
        "best exponent   {:.6} (bracket width {:.1e}, {} evaluations)\n",
        o.p_star, o.width, o.evaluations
    );
    t.push_str(&bound_rows(&o.report));
    ok(r, t)
}

fn cmd_sweep(
    lo: f64,
    hi: f64,
    step: f64,
    out: Option<&PathBuf>,
    s: &Settings,
) -> Result<Output, Failure> {
    let points = sweep(lo, hi, step, &s.cfg)?;
    let mut csv = format!("{CSV_HEADER}\n");
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for pt in &points {
        match &pt.report {
            Some(b) => {
                writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    b.p, b.circle_integral, b.energy, b.main_term, b.bound, b.bound_error
                )
                .unwrap();
                rows.push(*b);
            }
            None => failures.push((pt.p, pt.failure.clone().unwrap_or_default())),
        }
    }
    if let Some(path) = out {
        std::fs::write(path, &csv)
            .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
    }
    let mut r = RunReport::new("sweep");
    r.input("lo", lo)
        .input("hi", hi)
        .input("step", step)
        .input("tol", s.cfg.abs_tol);
    if let Some(path) = out {
        r.input("out", path.display().to_string());
    }
    let best = rows.iter().max_by(|a, b| a.bound.total_cmp(&b.bound));
    r.result("points", &rows).result("failures", &failures);
    if let Some(b) = best {
        r.result("best_p", b.p).result("best_bound", b.bound);
    }
    r.error(
        "bound",
        rows.iter().map(|b| b.bound_error).fold(0.0, f64::max),
    );

    let mut t = format!(
        "{:>8} {:>14} {:>14} {:>14} {:>12} {:>9}\n",
        "p", "circle", "energy", "main term", "bound", "err"
    );
    for b in &rows {
        writeln!(
            t,
            "{:>8.4} {:>14.10} {:>14.10} {:>14.10} {:>12.9} {:>9.1e}",
            b.p, b.circle_integral, b.energy, b.main_term, b.bound, b.bound_error
        )
        .unwrap();
    }
    for (p, msg) in &failures {
        writeln!(t, "{p:>8.4} failed: {msg}").unwrap();
    }
    if let Some(path) = out {
        writeln!(t, "wrote {} rows to {}", rows.len(), path.display()).unwrap();
    }
    Ok(Output {
        report: r,
        text: t,
        ok: failures.is_empty(),
    })
}

fn cmd_az(depth: usize) -> Result<Output, Failure> {
    let seq = smyth_height_sequence(depth)?;
    let mut r = RunReport::new("az");
    r.input("depth", depth);
    let estimate = seq.last().map_or(0.0, |x| x.1);
    let gaps: Vec<f64> = seq.windows(2).map(|w| w[1].1 - w[0].1).collect();
    r.result("estimate", estimate).result("table", &seq);
    r.error("estimate", gaps.last().map_or(0.0, |g| g.abs()));
    let mut t = format!("{:>5} {:>14} {:>11}\n", "depth", "estimate", "gap");
    for (i, (d, v)) in seq.iter().enumerate() {
        match i.checked_sub(1).map(|j| gaps[j]) {
            Some(g) => writeln!(t, "{d:>5} {v:>14.10} {g:>11.3e}").unwrap(),
            None => writeln!(t, "{d:>5} {v:>14.10} {:>11}", "-").unwrap(),
        }
    }
    ok(r, t)
}

fn parse_seed(text: &str) -> Result<Rational64, Failure> {
    let bad = || Failure::Usage(format!("seed must be a rational number, got {text:?}"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        None => (text.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(n, d))
}

#[derive(serde::Serialize)]
struct CorpusRow {
    n: u32,
    degree: usize,
    height: f64,
    average: f64,
    discrepancy: f64,
    totally_real: bool,
}

fn cmd_corpus(
    kind: FamilyKind,
    min_n: Option<u32>,
    max_n: u32,
    p: f64,
    exponent: u32,
    seed: &str,
    s: &Settings,
) -> Result<Output, Failure> {
    let min_n = min_n.unwrap_or(if matches!(kind, FamilyKind::Radical) {
        2
    } else {
        1
    });
    if min_n > max_n {
        return Err(Failure::Usage(format!(
            "empty range: min-n {min_n} exceeds max-n {max_n}"
        )));
    }
    let tf = TestFunction::new(p)?;
    let integral = circle_integral(&tf, &s.cfg).require_converged()?.value;
    let seed = parse_seed(seed)?;
    let mut rows = Vec::new();
    let mut polys = Vec::new();
    for n in min_n..=max_n {
        let fam = match kind {
            FamilyKind::Cyclotomic => Family::RootsOfUnity { n },
            FamilyKind::Smyth => Family::SmythPreimages { depth: n, seed },
            FamilyKind::Radical => Family::Radical {
                base: n,
                n: exponent,
            },
        };
        fam.validate()?;
        let poly = match kind {
            FamilyKind::Cyclotomic => cyclotomic(n as usize),
            _ => family_polynomial(&fam)?,
        };
        let rs = roots(&poly, s.precision)?;
        let height = mahler_from_roots(&rs).log_value / poly.degree() as f64;
        let average = galois_average_of(&rs, &tf);
        rows.push(CorpusRow {
            n,
            degree: poly.degree(),
            height,
            average,
            discrepancy: (average - integral).abs(),
            totally_real: roots_are_real(&rs, DEFAULT_REAL_TOL),
        });
        polys.push(poly);
    }
    let eligible: Vec<_> = polys.into_iter().filter(|q| q.degree() >= 2).collect();
    let fitted = if eligible.is_empty() {
        None
    } else {
        Some(empirical_c(&eligible, &tf, &s.cfg)?)
    };

    let mut r = RunReport::new("corpus");
    let family_name = match kind {
        FamilyKind::Cyclotomic => "cyclotomic",
        FamilyKind::Smyth => "smyth",
        FamilyKind::Radical => "radical",
    };
    r.input("family", family_name)
        .input("min_n", min_n)
        .input("max_n", max_n)
        .input("p", p);
    match kind {
        FamilyKind::Smyth => r.input("seed", seed.to_string()),
        FamilyKind::Radical => r.input("exponent", exponent),
        FamilyKind::Cyclotomic => &mut r,
    };
    r.result("circle_integral", integral).result("rows", &rows);
    if let Some(c) = &fitted {
        r.result("empirical_c", c.c);
    }

    let label = match kind {
        FamilyKind::Cyclotomic => "n",
        FamilyKind::Smyth => "depth",
        FamilyKind::Radical => "base",
    };
    let mut t = format!(
        "{label:>6} {:>7} {:>14} {:>14} {:>12} {:>6}\n",
        "degree", "height", "average", "discrepancy", "real"
    );
    for row in &rows {
        writeln!(
            t,
            "{:>6} {:>7} {:>14.10} {:>14.10} {:>12.3e} {:>6}",
            row.n, row.degree, row.height, row.average, row.discrepancy, row.totally_real
        )
        .unwrap();
    }
    writeln!(t, "circle integral {integral:.10}").unwrap();
    if let Some(c) = fitted {
        writeln!(t, "empirical c     {:.6}", c.c).unwrap();
    }
    ok(r, t)
}

fn cmd_verify(only: Option<u8>) -> Result<Output, Failure> {
    let outcomes = match only {
        Some(id) if !(1..=verify::CRITERIA.len() as u8).contains(&id) => {
            return Err(Failure::Usage(format!("no criterion {id}")));
        }
        Some(id) => vec![verify::run(id)],
        None => verify::run_all(),
    };
    let all = outcomes.iter().all(|o| o.passed);
    let mut r = RunReport::new("verify");
    if let Some(id) = only {
        r.input("only", id);
    }
    r.result("all_passed", all).result("criteria", &outcomes);
    let mut t = String::new();
    for o in &outcomes {
        writeln!(t, "{o}").unwrap();
    }
    writeln!(
        t,
        "{} of {} criteria passed",
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len()
    )
    .unwrap();
    Ok(Output {
        report: r,
        text: t,
        ok: all,
    })
}
