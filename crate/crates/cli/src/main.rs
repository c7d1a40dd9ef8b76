//! Command-line front end. Exit codes: 0 success / property holds,
//! 1 property violated (witness emitted), 2 usage error, 3 an unresolved
//! precision comparison was encountered with `--strict-precision`.

mod render;

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use cubelens_core::arith::{self, parse_ratio};
use cubelens_core::cubes::{self, CubeInterval};
use cubelens_core::divisors::{self, CubeRootWindow, ScanSummary, WindowCount};
use cubelens_core::l4::{self, CoeffPoly};
use cubelens_core::pell;

use render::{write_records, Field, Format, Record};

const EXIT_OK: i32 = 0;
const EXIT_VIOLATION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_STRICT_UNRESOLVED: i32 = 3;

const PRECISION_CAP_ENV: &str = "CUBELENS_PRECISION_CAP";
const MIN_PRECISION_CAP: u32 = 128;

#[derive(Parser)]
#[command(
    name = "cubelens",
    version,
    about = "Exact arithmetic for cubes in short intervals: representation \
             counts, Sidon checks, L4 norms, divisor windows, and the Pell \
             family of equal cube sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Worker threads for scans (default: all cores). Results do not depend
    /// on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Precision cap in bits for endpoint comparisons (>= 128; the
    /// CUBELENS_PRECISION_CAP environment variable overrides the default
    /// 4096).
    #[arg(long, global = true)]
    precision_cap: Option<u32>,

    /// Fail (exit 3) if any endpoint comparison stays unresolved at the cap
    /// instead of including-and-reporting.
    #[arg(long, global = true)]
    strict_precision: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

fn nat_arg(s: &str) -> Result<BigUint, String> {
    BigUint::from_str(s.trim()).map_err(|_| format!("'{s}' is not a non-negative integer"))
}

fn int_arg(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|_| format!("'{s}' is not an integer"))
}

fn ratio_arg(s: &str) -> Result<BigRational, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

/// Set selection shared by the representation-style commands: either a cube
/// interval or an explicit comma-separated set.
#[derive(Args)]
struct SetInput {
    /// Interval start N (the set is the cubes of [N, N+len]).
    #[arg(long, value_parser = nat_arg, requires = "len", conflicts_with = "set")]
    start: Option<BigUint>,

    /// Interval length k.
    #[arg(long, requires = "start", conflicts_with = "set")]
    len: Option<u64>,

    /// Explicit set, e.g. --set 1,8,27 (used as-is, not cubed).
    #[arg(long)]
    set: Option<String>,
}

impl SetInput {
    fn resolve(&self) -> Result<Vec<BigInt>, CliError> {
        match (&self.start, self.len, &self.set) {
            (Some(start), Some(len), None) => {
                if start.is_zero() {
                    return Err(CliError::usage("--start must be >= 1"));
                }
                Ok(CubeInterval::new(start.clone(), len).elements())
            }
            (None, None, Some(list)) => {
                let mut out = Vec::new();
                for piece in list.split(',') {
                    let piece = piece.trim();
                    if piece.is_empty() {
                        continue;
                    }
                    out.push(
                        BigInt::from_str(piece)
                            .map_err(|_| CliError::usage(format!("bad set element '{piece}'")))?,
                    );
                }
                if out.is_empty() {
                    return Err(CliError::usage("--set is empty"));
                }
                out.sort();
                out.dedup();
                Ok(out)
            }
            _ => Err(CliError::usage(
                "provide either --start with --len, or --set",
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the cubes of [start, start+len].
    Elements {
        #[arg(long, value_parser = nat_arg)]
        start: BigUint,
        #[arg(long)]
        len: u64,
    },
    /// Ordered and unordered representation counts of one sum.
    Rep {
        #[command(flatten)]
        input: SetInput,
        /// The sum to count representations of.
        #[arg(long, value_parser = int_arg)]
        m: BigInt,
    },
    /// The maximum ordered representation count and its smallest attaining sum.
    Maxrep {
        #[command(flatten)]
        input: SetInput,
    },
    /// Additive energy: the sum of squared ordered representation counts.
    Energy {
        #[command(flatten)]
        input: SetInput,
    },
    /// Decide the Sidon property; a failure witness sets exit code 1.
    SidonCheck {
        #[command(flatten)]
        input: SetInput,
    },
    /// Smallest k <= k-max whose cube interval is NOT Sidon.
    SidonThreshold {
        #[arg(long, value_parser = nat_arg)]
        start: BigUint,
        #[arg(long)]
        k_max: u64,
    },
    /// Exact L2^2 and L4^4 of a polynomial given as JSON
    /// {"terms":[{"n":"...","re":"p/q","im":"p/q"}]}.
    L4 {
        /// Path to the polynomial JSON, or '-' for stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Check ||f||_4^4 <= max_rep * ||f||_2^4 on the support; exit 1 if violated.
    L4bound {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Prime factorization.
    Factor {
        #[arg(long, value_parser = nat_arg)]
        m: BigUint,
    },
    /// Divisors in [lo, hi].
    Divisors {
        #[arg(long, value_parser = nat_arg)]
        m: BigUint,
        #[arg(long, value_parser = nat_arg)]
        lo: BigUint,
        #[arg(long, value_parser = nat_arg)]
        hi: BigUint,
    },
    /// Divisors in the cube-root window [m^(1/3) - delta, m^(1/3)].
    DivwindowCuberoot {
        #[arg(long, value_parser = nat_arg)]
        m: BigUint,
        /// Exact window width, e.g. 463761/100000.
        #[arg(long, value_parser = ratio_arg)]
        delta: BigRational,
        /// Widen to the symmetric window [m^(1/3) - delta, m^(1/3) + delta].
        #[arg(long)]
        symmetric: bool,
    },
    /// Divisors in [m^alpha, m^alpha + m^beta].
    DivwindowExp {
        #[arg(long, value_parser = nat_arg)]
        m: BigUint,
        #[arg(long, value_parser = ratio_arg)]
        alpha: BigRational,
        #[arg(long, value_parser = ratio_arg)]
        beta: BigRational,
    },
    /// Scan the exponent window count over a range of m; JSON output is a
    /// line stream of new maxima followed by a summary line.
    WindowScan {
        /// Scan 2..=m-max.
        #[arg(long, value_parser = nat_arg, conflicts_with_all = ["m_from", "m_to"])]
        m_max: Option<BigUint>,
        /// Shard start (with --m-to).
        #[arg(long, value_parser = nat_arg, requires = "m_to")]
        m_from: Option<BigUint>,
        /// Shard end, inclusive.
        #[arg(long, value_parser = nat_arg, requires = "m_from")]
        m_to: Option<BigUint>,
        #[arg(long, value_parser = ratio_arg)]
        alpha: BigRational,
        #[arg(long, value_parser = ratio_arg)]
        beta: BigRational,
    },
    /// Fold window-scan shard outputs (JSON line files) into one summary.
    Merge {
        /// Shard files produced by window-scan --format json.
        files: Vec<PathBuf>,
    },
    /// Verify the representation-vs-divisor-window bound over a cube interval;
    /// exit 1 on any violation.
    RepboundCheck {
        #[arg(long, value_parser = nat_arg)]
        start: BigUint,
        #[arg(long)]
        len: u64,
    },
    /// The first `count` solutions of 7X^2 + 114 = Y^2.
    Pell {
        #[arg(long)]
        count: u64,
    },
    /// The equal-cube-sums quadruple of family index k.
    Quadruple {
        #[arg(long)]
        k: u64,
    },
    /// Interval certificate for family index k >= 1.
    Sharpness {
        #[arg(long)]
        k: u64,
    },
    /// Generate and cross-verify the first `count` family rows.
    VerifyFamily {
        #[arg(long)]
        count: u64,
    },
}

struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn io(e: std::io::Error) -> Self {
        CliError {
            message: e.to_string(),
            code: EXIT_USAGE,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

fn resolve_precision_cap(flag: Option<u32>) -> Result<u32, CliError> {
    let cap = match flag {
        Some(v) => v,
        None => match std::env::var(PRECISION_CAP_ENV) {
            Ok(s) => s
                .trim()
                .parse::<u32>()
                .map_err(|_| CliError::usage(format!("bad {PRECISION_CAP_ENV} value '{s}'")))?,
            Err(_) => arith::DEFAULT_PRECISION_CAP,
        },
    };
    if cap < MIN_PRECISION_CAP {
        return Err(CliError::usage(format!(
            "precision cap must be at least {MIN_PRECISION_CAP} bits"
        )));
    }
    Ok(cap)
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError::usage("--workers must be >= 1"));
        }
        // ignore the error from double initialization in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let cap = resolve_precision_cap(cli.precision_cap)?;

    let mut sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(fs::File::create(path).map_err(CliError::io)?),
        None => Box::new(std::io::stdout().lock()),
    };

    let (records, code) = match &cli.command {
        Command::Elements { start, len } => cmd_elements(start, *len)?,
        Command::Rep { input, m } => cmd_rep(input, m)?,
        Command::Maxrep { input } => cmd_maxrep(input)?,
        Command::Energy { input } => cmd_energy(input)?,
        Command::SidonCheck { input } => cmd_sidon_check(input)?,
        Command::SidonThreshold { start, k_max } => cmd_sidon_threshold(start, *k_max)?,
        Command::L4 { input } => cmd_l4(input)?,
        Command::L4bound { input } => cmd_l4bound(input)?,
        Command::Factor { m } => cmd_factor(m)?,
        Command::Divisors { m, lo, hi } => cmd_divisors(m, lo, hi)?,
        Command::DivwindowCuberoot { m, delta, symmetric } => {
            cmd_divwindow_cuberoot(m, delta, *symmetric)?
        }
        Command::DivwindowExp { m, alpha, beta } => {
            cmd_divwindow_exp(m, alpha, beta, cap, cli.strict_precision)?
        }
        Command::WindowScan {
            m_max,
            m_from,
            m_to,
            alpha,
            beta,
        } => {
            return cmd_window_scan(
                &cli,
                &mut sink,
                m_max.as_ref(),
                m_from.as_ref(),
                m_to.as_ref(),
                alpha,
                beta,
                cap,
            );
        }
        Command::Merge { files } => cmd_merge(files, cli.strict_precision)?,
        Command::RepboundCheck { start, len } => cmd_repbound(start, *len)?,
        Command::Pell { count } => cmd_pell(*count)?,
        Command::Quadruple { k } => cmd_quadruple(*k)?,
        Command::Sharpness { k } => cmd_sharpness(*k)?,
        Command::VerifyFamily { count } => cmd_verify_family(*count)?,
    };
    write_records(&mut sink, cli.format, &records).map_err(CliError::io)?;
    Ok(code)
}

fn cmd_elements(start: &BigUint, len: u64) -> Result<(Vec<Record>, i32), CliError> {
    if start.is_zero() {
        return Err(CliError::usage("--start must be >= 1"));
    }
    let interval = CubeInterval::new(start.clone(), len);
    let records = interval
        .roots()
        .iter()
        .zip(interval.elements())
        .enumerate()
        .map(|(i, (root, cube))| {
            Record::new()
                .push("index", Field::UInt(i as u64))
                .push("root", Field::Str(root.to_string()))
                .push("cube", Field::Str(cube.to_string()))
        })
        .collect();
    Ok((records, EXIT_OK))
}

fn cmd_rep(input: &SetInput, m: &BigInt) -> Result<(Vec<Record>, i32), CliError> {
    let set = input.resolve()?;
    let record = Record::new()
        .push("m", Field::Str(m.to_string()))
        .push("ordered", Field::UInt(cubes::rep_ordered(&set, m)))
        .push("unordered", Field::UInt(cubes::rep_unordered(&set, m)));
    Ok((vec![record], EXIT_OK))
}

fn cmd_maxrep(input: &SetInput) -> Result<(Vec<Record>, i32), CliError> {
    let set = input.resolve()?;
    let profile = cubes::rep_profile(&set);
    let (m, r) = profile.max.expect("resolve() rejects empty sets");
    let record = Record::new()
        .push("m", Field::Str(m.to_string()))
        .push("r", Field::UInt(r));
    Ok((vec![record], EXIT_OK))
}

fn cmd_energy(input: &SetInput) -> Result<(Vec<Record>, i32), CliError> {
    let set = input.resolve()?;
    let profile = cubes::rep_profile(&set);
    let record = Record::new()
        .push("size", Field::UInt(set.len() as u64))
        .push("energy", Field::Str(profile.energy.to_string()));
    Ok((vec![record], EXIT_OK))
}

fn cmd_sidon_check(input: &SetInput) -> Result<(Vec<Record>, i32), CliError> {
    let set = input.resolve()?;
    let result = cubes::is_sidon(&set);
    let mut record = Record::new().push("is_sidon", Field::Bool(result.is_sidon));
    let code = match &result.witness {
        Some(w) => {
            record = record
                .push("witness_a", Field::Str(w.a.to_string()))
                .push("witness_b", Field::Str(w.b.to_string()))
                .push("witness_c", Field::Str(w.c.to_string()))
                .push("witness_d", Field::Str(w.d.to_string()));
            EXIT_VIOLATION
        }
        None => EXIT_OK,
    };
    Ok((vec![record], code))
}

fn cmd_sidon_threshold(start: &BigUint, k_max: u64) -> Result<(Vec<Record>, i32), CliError> {
    if start.is_zero() {
        return Err(CliError::usage("--start must be >= 1"));
    }
    let mut record = Record::new();
    match cubes::sidon_threshold(start, k_max) {
        Some(k) => {
            record = record.push("found", Field::Bool(true)).push("k", Field::UInt(k));
        }
        None => {
            record = record
                .push("found", Field::Bool(false))
                .push("k_max", Field::UInt(k_max));
        }
    }
    Ok((vec![record], EXIT_OK))
}

fn read_poly(input: &str) -> Result<CoeffPoly, CliError> {
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(CliError::io)?;
        buf
    } else {
        fs::read_to_string(input).map_err(CliError::io)?
    };
    CoeffPoly::from_json(&text).map_err(|e| CliError::usage(e.to_string()))
}

fn cmd_l4(input: &str) -> Result<(Vec<Record>, i32), CliError> {
    let poly = read_poly(input)?;
    if poly.is_zero() {
        return Err(CliError::usage("the zero polynomial has no L4/L2 ratio"));
    }
    let record = Record::new()
        .push("terms", Field::UInt(poly.num_terms() as u64))
        .push("l2_sq", Field::Str(l4::l2_sq(&poly).to_string()))
        .push("l4_4", Field::Str(l4::l4_fourth(&poly).to_string()))
        .push(
            "ratio_l4_l2",
            Field::Float(l4::ratio_l4_l2(&poly).expect("nonzero checked")),
        );
    Ok((vec![record], EXIT_OK))
}

fn cmd_l4bound(input: &str) -> Result<(Vec<Record>, i32), CliError> {
    let poly = read_poly(input)?;
    let report = l4::l4_bound_check(&poly);
    let record = Record::new()
        .push("terms", Field::UInt(poly.num_terms() as u64))
        .push("l2_sq", Field::Str(report.l2_sq.to_string()))
        .push("l4_4", Field::Str(report.l4_4.to_string()))
        .push("max_rep", Field::UInt(report.max_rep))
        .push("bound_rhs", Field::Str(report.bound_rhs.to_string()))
        .push("holds", Field::Bool(report.holds));
    let code = if report.holds { EXIT_OK } else { EXIT_VIOLATION };
    Ok((vec![record], code))
}

fn cmd_factor(m: &BigUint) -> Result<(Vec<Record>, i32), CliError> {
    if m.is_zero() {
        return Err(CliError::usage("--m must be >= 1"));
    }
    let f = divisors::factor(m);
    let records = f
        .factors
        .iter()
        .map(|(p, e)| {
            Record::new()
                .push("m", Field::Str(m.to_string()))
                .push("prime", Field::Str(p.to_string()))
                .push("exponent", Field::UInt(*e as u64))
        })
        .collect();
    Ok((records, EXIT_OK))
}

fn cmd_divisors(m: &BigUint, lo: &BigUint, hi: &BigUint) -> Result<(Vec<Record>, i32), CliError> {
    if m.is_zero() {
        return Err(CliError::usage("--m must be >= 1"));
    }
    if lo > hi {
        return Err(CliError::usage("--lo must not exceed --hi"));
    }
    let found = divisors::divisors_in(m, lo, hi);
    let record = Record::new()
        .push("m", Field::Str(m.to_string()))
        .push("lo", Field::Str(lo.to_string()))
        .push("hi", Field::Str(hi.to_string()))
        .push("count", Field::UInt(found.len() as u64))
        .push(
            "divisors",
            Field::List(found.iter().map(|d| d.to_string()).collect()),
        );
    Ok((vec![record], EXIT_OK))
}

fn window_record(wc: &WindowCount) -> Record {
    Record::new()
        .push("m", Field::Str(wc.m.to_string()))
        .push("lo", Field::Str(wc.lo_desc.clone()))
        .push("hi", Field::Str(wc.hi_desc.clone()))
        .push("count", Field::UInt(wc.count))
        .push("unresolved", Field::UInt(wc.unresolved))
        .push(
            "divisors",
            Field::List(wc.divisors.iter().map(|d| d.to_string()).collect()),
        )
}

fn cmd_divwindow_cuberoot(
    m: &BigUint,
    delta: &BigRational,
    symmetric: bool,
) -> Result<(Vec<Record>, i32), CliError> {
    if m.is_zero() {
        return Err(CliError::usage("--m must be >= 1"));
    }
    if delta.is_negative() {
        return Err(CliError::usage("--delta must be non-negative"));
    }
    let mode = if symmetric {
        CubeRootWindow::Symmetric
    } else {
        CubeRootWindow::Below
    };
    let wc = divisors::window_count_cuberoot(m, delta, mode);
    Ok((vec![window_record(&wc)], EXIT_OK))
}

fn check_exponent(name: &str, e: &BigRational) -> Result<(), CliError> {
    if !e.is_positive() || *e >= BigRational::one() {
        return Err(CliError::usage(format!("--{name} must lie in (0, 1)")));
    }
    Ok(())
}

fn cmd_divwindow_exp(
    m: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    cap: u32,
    strict: bool,
) -> Result<(Vec<Record>, i32), CliError> {
    if *m < BigUint::from(2u32) {
        return Err(CliError::usage("--m must be >= 2"));
    }
    check_exponent("alpha", alpha)?;
    check_exponent("beta", beta)?;
    let wc = divisors::window_count_exponent(m, alpha, beta, cap);
    let code = if strict && wc.unresolved > 0 {
        EXIT_STRICT_UNRESOLVED
    } else {
        EXIT_OK
    };
    Ok((vec![window_record(&wc)], code))
}

fn scan_summary_record(s: &ScanSummary) -> Record {
    Record::new()
        .push("type", Field::Str("summary".into()))
        .push("m_from", Field::Str(s.m_from.to_string()))
        .push("m_to", Field::Str(s.m_to.to_string()))
        .push("alpha", Field::Str(s.alpha.to_string()))
        .push("beta", Field::Str(s.beta.to_string()))
        .push("regime", Field::Str(s.regime.as_str().into()))
        .push("max_count", Field::UInt(s.max_count))
        .push("argmax", Field::Str(s.argmax.to_string()))
        .push("unresolved", Field::UInt(s.unresolved_total))
        .push(
            "histogram",
            Field::Counts(s.histogram.iter().map(|(k, v)| (*k, *v)).collect()),
        )
}

#[allow(clippy::too_many_arguments)]
fn cmd_window_scan(
    cli: &Cli,
    sink: &mut Box<dyn Write>,
    m_max: Option<&BigUint>,
    m_from: Option<&BigUint>,
    m_to: Option<&BigUint>,
    alpha: &BigRational,
    beta: &BigRational,
    cap: u32,
) -> Result<i32, CliError> {
    check_exponent("alpha", alpha)?;
    check_exponent("beta", beta)?;
    if divisors::window_regime(alpha, beta).is_none() {
        return Err(CliError::usage(
            "the scan needs beta < alpha (conjectural regime) or beta < alpha^2 (proven regime)",
        ));
    }
    let two = BigUint::from(2u32);
    let (from, to) = match (m_max, m_from, m_to) {
        (Some(max), None, None) => (two.clone(), max.clone()),
        (None, Some(from), Some(to)) => (from.clone(), to.clone()),
        _ => {
            return Err(CliError::usage(
                "provide --m-max, or both --m-from and --m-to",
            ))
        }
    };
    if from < two {
        return Err(CliError::usage("the scan starts at m >= 2"));
    }
    if from > to {
        return Err(CliError::usage("--m-from must not exceed --m-to"));
    }

    let stream_json = cli.format == Format::Json;
    let mut stream_error: Option<std::io::Error> = None;
    let summary = {
        let mut on_max = |m: &BigUint, count: u64| {
            if stream_json && stream_error.is_none() {
                let line = Record::new()
                    .push("type", Field::Str("max".into()))
                    .push("m", Field::Str(m.to_string()))
                    .push("count", Field::UInt(count));
                if let Err(e) = writeln!(sink, "{}", line.to_json()) {
                    stream_error = Some(e);
                }
            }
        };
        divisors::window_count_scan(&from, &to, alpha, beta, cap, Some(&mut on_max))
    };
    if let Some(e) = stream_error {
        return Err(CliError::io(e));
    }

    let record = scan_summary_record(&summary);
    if stream_json {
        writeln!(sink, "{}", record.to_json()).map_err(CliError::io)?;
    } else {
        write_records(sink, cli.format, &[record]).map_err(CliError::io)?;
    }
    if cli.strict_precision && summary.unresolved_total > 0 {
        return Ok(EXIT_STRICT_UNRESOLVED);
    }
    Ok(EXIT_OK)
}

fn cmd_merge(files: &[PathBuf], strict: bool) -> Result<(Vec<Record>, i32), CliError> {
    if files.is_empty() {
        return Err(CliError::usage("merge needs at least one shard file"));
    }
    let mut m_from: Option<BigUint> = None;
    let mut m_to: Option<BigUint> = None;
    let mut exponents: Option<(String, String, String)> = None;
    let mut max_count = 0u64;
    let mut argmax: Option<BigUint> = None;
    let mut unresolved = 0u64;
    let mut histogram: std::collections::BTreeMap<u64, u64> = Default::default();
    let mut summaries = 0usize;

    for path in files {
        let text = fs::read_to_string(path).map_err(CliError::io)?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(line)
                .map_err(|e| CliError::usage(format!("{}: bad JSON line: {e}", path.display())))?;
            if value.get("type").and_then(|t| t.as_str()) != Some("summary") {
                continue;
            }
            summaries += 1;
            let get_str = |key: &str| -> Result<String, CliError> {
                value
                    .get(key)
                    .and_then(|v| v.as_str())
                    .map(str::to_string)
                    .ok_or_else(|| {
                        CliError::usage(format!("{}: summary missing '{key}'", path.display()))
                    })
            };
            let get_u64 = |key: &str| -> Result<u64, CliError> {
                value.get(key).and_then(|v| v.as_u64()).ok_or_else(|| {
                    CliError::usage(format!("{}: summary missing '{key}'", path.display()))
                })
            };
            let this_exponents = (get_str("alpha")?, get_str("beta")?, get_str("regime")?);
            match &exponents {
                None => exponents = Some(this_exponents),
                Some(prev) => {
                    if *prev != this_exponents {
                        return Err(CliError::usage(
                            "shards disagree on alpha/beta; refusing to merge",
                        ));
                    }
                }
            }
            let from = nat_arg(&get_str("m_from")?).map_err(CliError::usage)?;
            let to = nat_arg(&get_str("m_to")?).map_err(CliError::usage)?;
            m_from = Some(m_from.map_or(from.clone(), |cur: BigUint| cur.min(from)));
            m_to = Some(m_to.map_or(to.clone(), |cur: BigUint| cur.max(to)));

            let shard_max = get_u64("max_count")?;
            let shard_argmax = nat_arg(&get_str("argmax")?).map_err(CliError::usage)?;
            // smallest-argmax rule on ties
            if shard_max > max_count
                || (shard_max == max_count
                    && shard_max > 0
                    && argmax.as_ref().is_none_or(|a| shard_argmax < *a))
            {
                max_count = shard_max;
                argmax = Some(shard_argmax);
            } else if argmax.is_none() {
                argmax = Some(shard_argmax);
            }
            unresolved += get_u64("unresolved")?;
            if let Some(hist) = value.get("histogram").and_then(|h| h.as_object()) {
                for (k, v) in hist {
                    let count: u64 = k
                        .parse()
                        .map_err(|_| CliError::usage("bad histogram key".to_string()))?;
                    let freq = v.as_u64().ok_or_else(|| {
                        CliError::usage("bad histogram value".to_string())
                    })?;
                    *histogram.entry(count).or_insert(0) += freq;
                }
            }
        }
    }
    if summaries == 0 {
        return Err(CliError::usage("no summary lines found in the given files"));
    }

    let record = Record::new()
        .push("type", Field::Str("summary".into()))
        .push("m_from", Field::Str(m_from.unwrap().to_string()))
        .push("m_to", Field::Str(m_to.unwrap().to_string()))
        .push("alpha", Field::Str(exponents.as_ref().unwrap().0.clone()))
        .push("beta", Field::Str(exponents.as_ref().unwrap().1.clone()))
        .push("regime", Field::Str(exponents.as_ref().unwrap().2.clone()))
        .push("max_count", Field::UInt(max_count))
        .push("argmax", Field::Str(argmax.unwrap().to_string()))
        .push("unresolved", Field::UInt(unresolved))
        .push(
            "histogram",
            Field::Counts(histogram.into_iter().collect()),
        )
        .push("shards", Field::UInt(summaries as u64));
    let code = if strict && unresolved > 0 {
        EXIT_STRICT_UNRESOLVED
    } else {
        EXIT_OK
    };
    Ok((vec![record], code))
}

fn cmd_repbound(start: &BigUint, len: u64) -> Result<(Vec<Record>, i32), CliError> {
    if start.is_zero() {
        return Err(CliError::usage("--start must be >= 1"));
    }
    if len == 0 {
        return Err(CliError::usage("--len must be >= 1"));
    }
    let report = divisors::rep_bound_check(start, len);
    let violations: Vec<String> = report
        .violations
        .iter()
        .map(|v| format!("{v:?}"))
        .collect();
    let record = Record::new()
        .push("start", Field::Str(report.start.to_string()))
        .push("len", Field::UInt(report.len))
        .push("delta", Field::Str(report.delta.to_string()))
        .push("sums_checked", Field::UInt(report.sums_checked))
        .push("representations", Field::UInt(report.representations))
        .push("reconstructions", Field::UInt(report.reconstructions))
        .push("max_ratio", Field::Float(report.max_ratio_f64()))
        .push("max_ratio_at", Field::Str(report.max_ratio_at.to_string()))
        .push("violations", Field::List(violations));
    let code = if report.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok((vec![record], code))
}

fn cmd_pell(count: u64) -> Result<(Vec<Record>, i32), CliError> {
    if count == 0 {
        return Err(CliError::usage("--count must be >= 1"));
    }
    let records = pell::pell_family(count)
        .iter()
        .map(|sol| {
            Record::new()
                .push("k", Field::UInt(sol.index))
                .push("x", Field::Str(sol.x.to_string()))
                .push("y", Field::Str(sol.y.to_string()))
        })
        .collect();
    Ok((records, EXIT_OK))
}

fn solution_at(k: u64) -> pell::PellSolution {
    pell::pell_family(k + 1).pop().expect("count >= 1")
}

fn cmd_quadruple(k: u64) -> Result<(Vec<Record>, i32), CliError> {
    let sol = solution_at(k);
    let q = pell::quadruple(&sol);
    let record = Record::new()
        .push("k", Field::UInt(k))
        .push("x", Field::Str(sol.x.to_string()))
        .push("y", Field::Str(sol.y.to_string()))
        .push("u1", Field::Str(q.u1.to_string()))
        .push("u2", Field::Str(q.u2.to_string()))
        .push("u3", Field::Str(q.u3.to_string()))
        .push("u4", Field::Str(q.u4.to_string()))
        .push("v", Field::Str(q.v.to_string()))
        .push("n", Field::Str(q.n_start.to_string()))
        .push("cube_sum", Field::Str(q.cube_sum.to_string()));
    Ok((vec![record], EXIT_OK))
}

fn cmd_sharpness(k: u64) -> Result<(Vec<Record>, i32), CliError> {
    let sol = solution_at(k);
    let report = pell::sharpness_report(&sol).map_err(|e| CliError::usage(e.to_string()))?;
    let record = Record::new()
        .push("k", Field::UInt(k))
        .push("n", Field::Str(report.n.to_string()))
        .push("spread", Field::Str(report.spread.to_string()))
        .push("ratio", Field::Float(report.ratio));
    Ok((vec![record], EXIT_OK))
}

fn cmd_verify_family(count: u64) -> Result<(Vec<Record>, i32), CliError> {
    if count == 0 {
        return Err(CliError::usage("--count must be >= 1"));
    }
    let records = pell::verify_family(count)
        .iter()
        .map(|row| {
            let mut record = Record::new()
                .push("k", Field::UInt(row.solution.index))
                .push("x", Field::Str(row.solution.x.to_string()))
                .push("y", Field::Str(row.solution.y.to_string()))
                .push("u1", Field::Str(row.quadruple.u1.to_string()))
                .push("u2", Field::Str(row.quadruple.u2.to_string()))
                .push("u3", Field::Str(row.quadruple.u3.to_string()))
                .push("u4", Field::Str(row.quadruple.u4.to_string()))
                .push("n", Field::Str(row.quadruple.n_start.to_string()))
                .push("cube_sum", Field::Str(row.quadruple.cube_sum.to_string()))
                .push("non_sidon", Field::Bool(true));
            if let Some(s) = &row.sharpness {
                record = record.push("ratio", Field::Float(s.ratio));
            }
            record
        })
        .collect();
    Ok((records, EXIT_OK))
}
