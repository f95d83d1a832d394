//! Command-line front end. Every subcommand writes its table (CSV or JSON)
//! and a run manifest into `--out-dir` and prints a short summary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::counting::{compare_with, sigma_w, write_comparisons, SigmaWQuery};
use crate::densities::{sigma_infinity, singular_series, DensityFile, QuadratureSettings, W0_IDENTIFIER};
use crate::error::{Error, Result};
use crate::expsums::{
    gauss_bruteforce, gauss_closed, kloosterman, kloosterman_fast, sq_bruteforce_capped, sq_reduced, weil_bound,
    GaussParams, KloostermanParams, SqParams, DEFAULT_SQ_BRUTEFORCE_CAP,
};
use crate::linnik::{growth_exponent, linnik_trace, ResidueClassRange, TwistedLinnikQuery};
use crate::modarith::factorize;
use crate::oscillatory::{gaussian, verify_expansion, OscillatorySettings};
use crate::sphere::{
    cap_gap, covering_exponent_estimate, enumerate_sphere, normalize, sample_directions, write_cap_reports,
    CoveringQuery,
};

pub const THREADS_ENV: &str = "EXPSUM_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "expsum-lab", version, about = "Exponential sums and lattice points on the 3-sphere")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// Worker threads; falls back to EXPSUM_LAB_THREADS, then to all cores.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Kloosterman sum S(m, n; c).
    Kloosterman(KloostermanArgs),
    /// Quadratic Gauss sum, closed form against brute force.
    Gauss(GaussArgs),
    /// The complete sum S_q(c), reduced form against brute force.
    Sq(SqArgs),
    /// Partial sums of the twisted Linnik series.
    Linnik(LinnikArgs),
    /// Integer points on x1^2 + x2^2 + x3^2 + x4^2 = n.
    Sphere(SphereArgs),
    /// Largest empty cap around a direction.
    Cap(CapArgs),
    /// Sampling estimates of the covering exponent.
    Cover(CoverArgs),
    /// Local densities, singular series and sigma_inf.
    Densities(DensitiesArgs),
    /// The weighted count Sigma(w).
    SigmaW(SigmaWArgs),
    /// Sigma(w) against the main term.
    Compare(CompareArgs),
    /// Remainders of the stationary-phase expansion.
    Phase(PhaseArgs),
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct KloostermanArgs {
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub c: u64,
    /// Use the multiplicative splitting over the factorization of c.
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct GaussArgs {
    #[arg(long)]
    pub s: i64,
    #[arg(long)]
    pub t: i64,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SqArgs {
    #[arg(long)]
    pub q: u64,
    /// Four comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long = "N")]
    pub big_n: u64,
    /// Largest q for the brute-force comparison.
    #[arg(long, default_value_t = DEFAULT_SQ_BRUTEFORCE_CAP)]
    pub brute_cap: u64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct LinnikArgs {
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub n: i64,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    #[arg(long, default_value_t = 0)]
    pub a: u64,
    #[arg(long)]
    pub x: u64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 40)]
    pub checkpoints: usize,
    /// Fraction of checkpoints used for the growth fit.
    #[arg(long, default_value_t = 0.5)]
    pub tail: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SphereArgs {
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct DirectionArgs {
    /// Four comma-separated reals or rationals such as 3/5.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "from_point")]
    pub xi: Option<String>,
    /// Four comma-separated integers; the direction is x / |x|.
    #[arg(long, allow_hyphen_values = true)]
    pub from_point: Option<String>,
    /// Scale --xi to unit length instead of rejecting it.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CapArgs {
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub direction: DirectionArgs,
    /// Number of sampled directions when no direction is given.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    /// Comma-separated values of n.
    #[arg(long, conflicts_with_all = ["r_min", "r_max"])]
    pub n: Option<String>,
    /// Use n = r^2 for odd r in [r_min, r_max].
    #[arg(long, requires = "r_max")]
    pub r_min: Option<u64>,
    #[arg(long, requires = "r_min")]
    pub r_max: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Largest allowed 2-adic valuation of n; negative disables the filter.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub max_two_adic: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct DensitiesArgs {
    #[arg(long = "N")]
    pub big_n: u64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub prime_cutoff: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub quad_tol: f64,
    /// Finest trapezoid level, 2^level panels per axis.
    #[arg(long, default_value_t = 9)]
    pub max_level: u32,
    /// Flag the series when the tail bound exceeds tol times its value.
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct EpsArgs {
    #[arg(long, conflicts_with = "eps_exponent")]
    pub eps: Option<f64>,
    /// eps = N^(-e).
    #[arg(long)]
    pub eps_exponent: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SigmaWArgs {
    #[arg(long)]
    pub r: u64,
    #[command(flatten)]
    pub direction: DirectionArgs,
    #[command(flatten)]
    pub eps: EpsArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Comma-separated values of r, with N = 4 r^2.
    #[arg(long)]
    pub r: String,
    #[command(flatten)]
    pub direction: DirectionArgs,
    #[command(flatten)]
    pub eps: EpsArgs,
    /// Sampled directions per r when no direction is given.
    #[arg(long, default_value_t = 1)]
    pub directions: usize,
    #[arg(long, default_value_t = 1000)]
    pub prime_cutoff: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PhaseArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Highest expansion term N.
    #[arg(long, default_value_t = 0)]
    pub order: u32,
    #[arg(long, default_value = "25,50,100")]
    pub lambdas: String,
    /// Test function: gaussian, or quartic for |x|^4 e^{-|x|^2}.
    #[arg(long, default_value = "gaussian")]
    pub function: String,
}

/// Sidecar metadata written next to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub w0_identifier: String,
    pub tool_version: String,
    pub wall_time: f64,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::invalid(format!("cannot parse {what} entry {s:?}")))
        })
        .collect()
}

/// A real number written as a decimal or as `p/q`.
pub fn parse_rational(text: &str) -> Result<f64> {
    let bad = || Error::invalid(format!("cannot parse {text:?} as a number"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            Ok(p / q)
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

fn four<T: Copy>(values: Vec<T>, what: &str) -> Result<[T; 4]> {
    <[T; 4]>::try_from(values).map_err(|_| Error::invalid(format!("{what} needs exactly four entries")))
}

impl DirectionArgs {
    fn resolve(&self) -> Result<Option<[f64; 4]>> {
        if let Some(p) = &self.from_point {
            let x: [i64; 4] = four(parse_list(p, "--from-point")?, "--from-point")?;
            return normalize(x.map(|v| v as f64)).map(Some);
        }
        let Some(text) = &self.xi else {
            return Ok(None);
        };
        let values = text.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        let xi = four(values, "--xi")?;
        if self.normalize {
            return normalize(xi).map(Some);
        }
        let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "--xi has length {norm}; pass --normalize to rescale it"
            )));
        }
        Ok(Some(xi))
    }
}

impl EpsArgs {
    fn resolve(&self, big_n: u64) -> Result<f64> {
        match (self.eps, self.eps_exponent) {
            (Some(e), None) => Ok(e),
            (None, Some(x)) => Ok((big_n as f64).powf(-x)),
            _ => Err(Error::invalid("give exactly one of --eps and --eps-exponent")),
        }
    }
}

/// Compact decimal with trailing zeros removed and no negative zero.
pub fn format_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// `re +imi`, e.g. `-1 +0i`.
pub fn format_complex(z: Complex64) -> String {
    let im = format_real(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{} {sign}{im}i", format_real(z.re))
}

struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
    notes: Vec<String>,
}

impl Outputs {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }
}

fn csv_rows<W: Write>(writer: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Kloosterman(_) => "kloosterman",
        Command::Gauss(_) => "gauss",
        Command::Sq(_) => "sq",
        Command::Linnik(_) => "linnik",
        Command::Sphere(_) => "sphere",
        Command::Cap(_) => "cap",
        Command::Cover(_) => "cover",
        Command::Densities(_) => "densities",
        Command::SigmaW(_) => "sigma-w",
        Command::Compare(_) => "compare",
        Command::Phase(_) => "phase",
    }
}

fn execute(cli: &Cli, out: &mut Outputs, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Kloosterman(a) => {
            let params = KloostermanParams::new(a.m, a.n, a.c)?;
            let value = if a.fast {
                kloosterman_fast(params, &factorize(a.c))?
            } else {
                kloosterman(params)
            };
            let bound = weil_bound(a.m, a.n, a.c);
            writeln!(stdout, "{}", format_complex(value))?;
            let row = vec![
                a.m.to_string(),
                a.n.to_string(),
                a.c.to_string(),
                value.re.to_string(),
                value.im.to_string(),
                value.norm().to_string(),
                bound.to_string(),
            ];
            csv_rows(out.create("kloosterman.csv")?, &["m", "n", "c", "re", "im", "abs", "weil_bound"], &[row])
        }
        Command::Gauss(a) => {
            let params = GaussParams::new(a.s, a.t, a.q)?;
            let closed = gauss_closed(params)?;
            let brute = gauss_bruteforce(params);
            writeln!(stdout, "closed {}  brute {}", format_complex(closed), format_complex(brute))?;
            let row = vec![
                a.s.to_string(),
                a.t.to_string(),
                a.q.to_string(),
                closed.re.to_string(),
                closed.im.to_string(),
                brute.re.to_string(),
                brute.im.to_string(),
            ];
            csv_rows(
                out.create("gauss.csv")?,
                &["s", "t", "q", "closed_re", "closed_im", "brute_re", "brute_im"],
                &[row],
            )
        }
        Command::Sq(a) => {
            let c: [i64; 4] = four(parse_list(&a.c, "--c")?, "--c")?;
            let params = SqParams::new(a.q, c, a.big_n)?;
            let reduced = sq_reduced(params);
            let brute = if a.q <= a.brute_cap {
                Some(sq_bruteforce_capped(params, a.brute_cap)?)
            } else {
                out.notes.push(format!("brute force skipped: q > {}", a.brute_cap));
                None
            };
            match brute {
                Some(b) => writeln!(stdout, "reduced {}  brute {}", format_complex(reduced), format_complex(b))?,
                None => writeln!(stdout, "reduced {}", format_complex(reduced))?,
            }
            let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let row = vec![
                a.q.to_string(),
                c.map(|v| v.to_string()).join(" "),
                a.big_n.to_string(),
                reduced.re.to_string(),
                reduced.im.to_string(),
                fmt(brute.map(|b| b.re)),
                fmt(brute.map(|b| b.im)),
            ];
            csv_rows(
                out.create("sq.csv")?,
                &["q", "c", "N", "reduced_re", "reduced_im", "brute_re", "brute_im"],
                &[row],
            )
        }
        Command::Linnik(a) => {
            let range = ResidueClassRange::new(a.k, a.a, a.x)?;
            let query = TwistedLinnikQuery::new(a.m, a.n, range, a.alpha, a.b)?;
            let trace = linnik_trace(&query, a.checkpoints)?;
            trace.write_csv(out.create("linnik.csv")?)?;
            if trace.selberg_range {
                out.notes.push("query lies in the Selberg range sqrt(|mn|) > X".to_string());
            }
            let last = trace.last().expect("at least one checkpoint");
            write!(stdout, "L(X={}) = {}", last.x, format_complex(last.value))?;
            match growth_exponent(&trace, a.tail) {
                Ok(fit) => {
                    out.notes.push(format!("growth exponent {} over {} checkpoints", fit.slope, fit.used));
                    writeln!(stdout, "  growth exponent {:.4}", fit.slope)?;
                }
                Err(Error::InsufficientData { usable }) => {
                    out.notes.push(format!("no growth fit: {usable} usable checkpoints"));
                    writeln!(stdout)?;
                }
                Err(e) => return Err(e),
            }
            Ok(())
        }
        Command::Sphere(a) => {
            let set = enumerate_sphere(a.n)?;
            set.write_csv(out.create("sphere.csv")?)?;
            writeln!(stdout, "{} points on F(x) = {}", set.len(), a.n)?;
            Ok(())
        }
        Command::Cap(a) => {
            let dirs = match a.direction.resolve()? {
                Some(xi) => vec![xi],
                None => sample_directions(cli.seed, a.samples),
            };
            let reports = dirs.iter().map(|xi| cap_gap(*xi, a.n)).collect::<Result<Vec<_>>>()?;
            write_cap_reports(&reports, out.create("cap.csv")?)?;
            let worst = reports.iter().map(|r| r.eps_min).fold(0.0, f64::max);
            writeln!(stdout, "{} directions, largest eps_min {}", reports.len(), format_real(worst))?;
            Ok(())
        }
        Command::Cover(a) => {
            let n_values: Vec<u64> = match (&a.n, a.r_min, a.r_max) {
                (Some(list), _, _) => parse_list(list, "--n")?,
                (None, Some(lo), Some(hi)) if lo <= hi => (lo..=hi).filter(|r| r % 2 == 1).map(|r| r * r).collect(),
                _ => return Err(Error::invalid("give --n or a range --r-min <= --r-max")),
            };
            let query = CoveringQuery {
                n_values,
                num_samples: a.samples,
                seed: cli.seed,
                max_two_adic: u32::try_from(a.max_two_adic).ok(),
            };
            let est = covering_exponent_estimate(&query)?;
            est.write_csv(out.create("cover.csv")?)?;
            for (n, why) in &est.skipped {
                out.notes.push(format!("skipped n = {n}: {why}"));
            }
            writeln!(stdout, "{} rows, {} skipped", est.rows.len(), est.skipped.len())?;
            Ok(())
        }
        Command::Densities(a) => {
            let settings = QuadratureSettings {
                tol: a.quad_tol,
                max_level: a.max_level,
                ..QuadratureSettings::default()
            };
            let series = singular_series(a.big_n, a.prime_cutoff, a.tol)?;
            let s_inf = sigma_infinity(a.eps, &settings)?;
            if !series.within_tolerance {
                out.notes.push(format!("tail bound {} exceeds tol * value", series.tail_bound));
            }
            DensityFile::new(a.big_n, a.eps, s_inf, &series).write_json(out.create("densities.json")?)?;
            writeln!(
                stdout,
                "singular series {}  sigma_inf {}",
                format_real(series.value),
                format_real(s_inf)
            )?;
            Ok(())
        }
        Command::SigmaW(a) => {
            let xi = a
                .direction
                .resolve()?
                .unwrap_or_else(|| sample_directions(cli.seed, 1)[0]);
            let eps = a.eps.resolve(4 * a.r * a.r)?;
            let q = SigmaWQuery::new(a.r, xi, eps)?;
            let value = sigma_w(&q)?;
            writeln!(stdout, "Sigma(w) = {}", format_real(value))?;
            let mut row = vec![q.r.to_string(), q.big_n().to_string(), q.eps.to_string()];
            row.extend(q.xi.iter().map(f64::to_string));
            row.push(value.to_string());
            csv_rows(
                out.create("sigma_w.csv")?,
                &["r", "N", "eps", "xi1", "xi2", "xi3", "xi4", "sigma_w"],
                &[row],
            )
        }
        Command::Compare(a) => {
            let rs: Vec<u64> = parse_list(&a.r, "--r")?;
            let given = a.direction.resolve()?;
            let mut rows = Vec::new();
            for (i, &r) in rs.iter().enumerate() {
                if r == 0 {
                    return Err(Error::invalid("r must be positive"));
                }
                let big_n = 4 * r * r;
                let eps = a.eps.resolve(big_n)?;
                let dirs = match given {
                    Some(xi) => vec![xi],
                    None => sample_directions(cli.seed.wrapping_add(i as u64), a.directions.max(1)),
                };
                let first = SigmaWQuery::new(r, dirs[0], eps)?;
                let s_inf = sigma_infinity(eps, &QuadratureSettings::default())?;
                let series = singular_series(big_n, a.prime_cutoff, 1.0)?;
                for xi in dirs {
                    let q = SigmaWQuery { xi, ..first };
                    rows.push(compare_with(&q, &series, s_inf)?);
                }
            }
            write_comparisons(&rows, out.create("compare.csv")?)?;
            for c in &rows {
                writeln!(
                    stdout,
                    "r={} ratio {} budget_ratio {}",
                    c.r,
                    format_real(c.ratio),
                    format_real(c.budget_ratio)
                )?;
            }
            Ok(())
        }
        Command::Phase(a) => {
            let lambdas: Vec<f64> = parse_list(&a.lambdas, "--lambdas")?;
            let settings = OscillatorySettings::default();
            let check = match a.function.as_str() {
                "gaussian" => verify_expansion(&gaussian, a.n, a.order, &lambdas, &settings)?,
                "quartic" => {
                    let phi = |x: &[f64]| {
                        let r2: f64 = x.iter().map(|v| v * v).sum();
                        r2 * r2 * (-r2).exp()
                    };
                    verify_expansion(&phi, a.n, a.order, &lambdas, &settings)?
                }
                other => return Err(Error::invalid(format!("unknown test function {other:?}"))),
            };
            check.write_csv(out.create("phase.csv")?)?;
            match check.slope {
                Some(s) => writeln!(stdout, "decay slope {}", format_real(s))?,
                None => writeln!(stdout, "all remainders vanish")?,
            }
            Ok(())
        }
    }
}

fn write_manifest(cli: &Cli, out: &Outputs, wall_time: f64) -> Result<()> {
    let name = command_name(&cli.command);
    let manifest = RunManifest {
        command: name.to_string(),
        parameters: serde_json::to_value(&cli.command)?,
        seed: cli.seed,
        w0_identifier: W0_IDENTIFIER.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time,
        outputs: out.files.clone(),
        notes: out.notes.clone(),
    };
    let file = File::create(out.dir.join(format!("{name}.manifest.json")))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
    Ok(())
}

/// Exit code for an error: 2 for rejected arguments, 3 for failed
/// computations, 1 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_computational() {
        3
    } else if err.is_argument() {
        2
    } else {
        1
    }
}

fn run_parsed(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    std::fs::create_dir_all(&cli.out_dir)?;
    let mut out = Outputs {
        dir: cli.out_dir.clone(),
        files: Vec::new(),
        notes: Vec::new(),
    };
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?;
    let mut summary = Vec::new();
    let result = pool.install(|| execute(cli, &mut out, &mut summary));
    stdout.write_all(&summary)?;
    result?;
    write_manifest(cli, &out, start.elapsed().as_secs_f64())
}

/// Run with explicit output streams and return the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if cli.threads == Some(0) {
        let _ = writeln!(stderr, "error: --threads must be at least 1");
        return 2;
    }
    match run_parsed(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Run on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(format_complex(Complex64::new(-1.0000000000000002, 1e-17)), "-1 +0i");
        assert_eq!(format_complex(Complex64::new(0.5, -2.0)), "0.5 -2i");
        assert_eq!(format_real(-0.0), "0");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/5").unwrap(), 0.6);
        assert_eq!(parse_rational("-0.25").unwrap(), -0.25);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn direction_resolution() {
        let d = DirectionArgs {
            xi: Some("3/5,4/5,0,0".into()),
            from_point: None,
            normalize: false,
        };
        assert_eq!(d.resolve().unwrap(), Some([0.6, 0.8, 0.0, 0.0]));
        let d = DirectionArgs {
            xi: Some("3,4,0,0".into()),
            from_point: None,
            normalize: false,
        };
        assert!(d.resolve().is_err());
        let d = DirectionArgs { normalize: true, ..d };
        assert_eq!(d.resolve().unwrap(), Some([0.6, 0.8, 0.0, 0.0]));
        let d = DirectionArgs {
            xi: None,
            from_point: Some("1,1,1,1".into()),
            normalize: false,
        };
        assert_eq!(d.resolve().unwrap(), Some([0.5; 4]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::EmptySphere { n: 0 }), 3);
        assert_eq!(exit_code(&Error::invalid("x")), 2);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 1);
    }
}
