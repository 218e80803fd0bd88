//! Command-line surface.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad rule or configuration,
//! 3 the two H methods disagree, 4 a verification suite found a
//! counterexample.

use std::fmt::Write as _;
use std::hint::black_box;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::arith_fn::{check_global_properties, validate, FunctionRule};
use crate::classification::{PrimeClassification, Verdict};
use crate::dynamics::{h_direct, trajectory};
use crate::error::{Error, Result};
use crate::factorization::{configured_sieve_limit, sieve_primes};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

/// Counterexamples listed per suite before truncation.
const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Compute,
    Trajectory,
    Classify,
    Verify,
    Table,
    Bench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Iterated multiplicative arithmetic functions and the limit function H.
#[derive(Debug, Clone, Parser)]
#[command(name = "iterfix", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// `schemmel:<r>` or a path to a custom rule JSON file.
    #[arg(long = "rule")]
    pub rule_spec: String,

    #[arg(long)]
    pub n: Option<u64>,

    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub bound: u64,

    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,

    #[arg(long = "format", value_enum, default_value_t = Format::Text)]
    pub output_format: Format,

    #[arg(long = "out")]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve_rule(&self) -> Result<FunctionRule> {
        if self.rule_spec.starts_with("schemmel:") {
            self.rule_spec.parse()
        } else {
            FunctionRule::from_json_file(Path::new(&self.rule_spec))
        }
    }

    fn require_n(&self) -> Result<u64> {
        self.n
            .ok_or_else(|| Error::Config(format!("{:?} needs --n", self.command)))
    }
}

/// Rendered output plus the exit code it carries.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(body: String) -> Self {
        Self {
            body,
            exit_code: EXIT_OK,
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_BAD_CONFIG,
    }
}

/// Runs one command and writes its output; returns the process exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let result = configured_sieve_limit()
        .and_then(|_| run(cfg))
        .and_then(|report| {
            emit(cfg.output_path.as_deref(), &report.body)?;
            Ok(report.exit_code)
        });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    match path {
        Some(path) => std::fs::write(path, body).map_err(io_err(path)),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let rule = cfg.resolve_rule()?;
    match cfg.command {
        Command::Compute => cmd_compute(cfg, &rule, cfg.require_n()?),
        Command::Trajectory => cmd_trajectory(cfg, &rule, cfg.require_n()?),
        Command::Classify => cmd_classify(cfg, &rule),
        Command::Verify => cmd_verify(cfg, &rule),
        Command::Table => cmd_table(cfg, &rule),
        Command::Bench => cmd_bench(cfg, &rule),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("report types serialize");
    }
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

#[derive(Debug, Clone, Serialize)]
pub struct ComputeReport {
    pub rule: String,
    pub n: u64,
    pub h_direct: u64,
    /// Absent for `n = 0`, where only the convention applies.
    pub h_fast: Option<u64>,
    pub agree: bool,
    pub trajectory_length: usize,
    pub note: Option<String>,
}

pub fn cmd_compute(cfg: &RunConfig, rule: &FunctionRule, n: u64) -> Result<Report> {
    let report = if n == 0 {
        ComputeReport {
            rule: rule.name().to_owned(),
            n,
            h_direct: 0,
            h_fast: None,
            agree: true,
            trajectory_length: 0,
            note: Some("H(0) = 0 by convention; H is only defined on positive integers".into()),
        }
    } else {
        let t = trajectory(rule, n)?;
        let fast = PrimeClassification::new(rule).h_fast(n)?;
        ComputeReport {
            rule: rule.name().to_owned(),
            n,
            h_direct: t.last(),
            h_fast: Some(fast),
            agree: fast == t.last(),
            trajectory_length: t.length(),
            note: None,
        }
    };
    let body = match cfg.output_format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv([&report]),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "rule: {}", report.rule).unwrap();
            writeln!(s, "n: {}", report.n).unwrap();
            writeln!(s, "H (direct): {}", report.h_direct).unwrap();
            match report.h_fast {
                Some(h) => writeln!(s, "H (fast): {h}").unwrap(),
                None => writeln!(s, "H (fast): n/a").unwrap(),
            }
            writeln!(s, "agree: {}", report.agree).unwrap();
            writeln!(s, "trajectory length: {}", report.trajectory_length).unwrap();
            if let Some(note) = &report.note {
                writeln!(s, "note: {note}").unwrap();
            }
            s
        }
    };
    Ok(Report {
        body,
        exit_code: if report.agree {
            EXIT_OK
        } else {
            EXIT_DISAGREEMENT
        },
    })
}

#[derive(Debug, Clone, Serialize)]
struct StepRow {
    k: usize,
    value: u64,
}

pub fn cmd_trajectory(cfg: &RunConfig, rule: &FunctionRule, n: u64) -> Result<Report> {
    let t = trajectory(rule, n)?;
    let body = match cfg.output_format {
        Format::Json => to_json(&serde_json::json!({
            "rule": rule.name(),
            "start": t.start,
            "steps": t.steps,
            "length": t.length(),
        })),
        Format::Csv => to_csv(
            t.steps
                .iter()
                .enumerate()
                .map(|(k, &value)| StepRow { k, value }),
        ),
        Format::Text => {
            let steps: Vec<String> = t.steps.iter().map(u64::to_string).collect();
            format!("{}\nlength: {}\n", steps.join(" -> "), t.length())
        }
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyRow {
    pub p: u64,
    pub f_p: u64,
    pub verdict: Verdict,
}

pub fn cmd_classify(cfg: &RunConfig, rule: &FunctionRule) -> Result<Report> {
    let c = PrimeClassification::new(rule);
    let primes = match cfg.n {
        Some(p) => vec![p],
        None => sieve_primes(cfg.bound),
    };
    let mut rows = Vec::with_capacity(primes.len());
    for p in primes {
        let verdict = c.classify_prime(p)?;
        rows.push(ClassifyRow {
            p,
            f_p: rule.eval_prime_power(p, 1)?,
            verdict,
        });
    }
    let body = match cfg.output_format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(&rows),
        Format::Text => {
            let mut s = String::new();
            for row in &rows {
                let set = match row.verdict {
                    Verdict::InP => "P",
                    Verdict::InQ => "Q",
                };
                writeln!(s, "{} {} (f(p) = {})", row.p, set, row.f_p).unwrap();
            }
            s
        }
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub counterexample_count: usize,
    /// At most the first few counterexamples.
    pub counterexamples: Vec<Vec<u64>>,
    pub label: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub rule: String,
    pub bound: u64,
    pub depth: u64,
    pub hypotheses_hold: bool,
    pub validation: crate::arith_fn::ValidationReport,
    pub global_violations: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

/// Exponent range that covers every prime power up to `bound`.
fn exponent_bound_for(bound: u64) -> u32 {
    bound.max(2).ilog2()
}

pub fn verify_rule(rule: &FunctionRule, bound: u64, depth: u64) -> Result<VerifyReport> {
    let validation = validate(rule, bound.max(2), exponent_bound_for(bound));
    let global = check_global_properties(rule, bound.max(2));
    let hypotheses_hold = validation.passed() && global.violations.is_empty();
    let label = (!hypotheses_hold).then_some("expected: hypotheses violated");

    let c = PrimeClassification::new(rule);
    let suite = |suite, statement, found: Vec<Vec<u64>>| SuiteResult {
        suite,
        statement,
        passed: found.is_empty(),
        counterexample_count: found.len(),
        label: if found.is_empty() { None } else { label },
        counterexamples: found.into_iter().take(MAX_LISTED).collect(),
    };
    let pairs = |v: Vec<(u64, u64)>| v.into_iter().map(|(a, b)| vec![a, b]).collect::<Vec<_>>();
    let singles = |v: Vec<u64>| v.into_iter().map(|a| vec![a]).collect::<Vec<_>>();

    let suites = vec![
        suite(
            "complete_multiplicativity",
            "H(xy) = H(x)H(y) for all x*y <= bound",
            pairs(c.verify_theorem(bound)?),
        ),
        suite(
            "h_equals_indicator_of_s",
            "H(n) = 1 iff n in S, for n <= bound",
            singles(c.verify_h_agreement(bound)?),
        ),
        suite(
            "s_equals_t",
            "n in S iff n in T, for n <= bound",
            singles(c.verify_s_equals_t(bound)?),
        ),
        suite(
            "orbit_closure",
            "f^r(k) in S iff k in S, for k <= bound, r <= depth",
            pairs(c.verify_orbit_closure(bound, depth)?),
        ),
        suite(
            "divisor_closure",
            "T is closed under divisors and matches the factor-pair criterion, for k <= bound",
            pairs(c.verify_divisor_closure(bound)?),
        ),
    ];
    Ok(VerifyReport {
        rule: rule.name().to_owned(),
        bound,
        depth,
        hypotheses_hold,
        validation,
        global_violations: global.violations.len(),
        suites,
    })
}

#[derive(Debug, Clone, Serialize)]
struct SuiteRow<'a> {
    suite: &'a str,
    passed: bool,
    counterexamples: usize,
    label: &'a str,
}

pub fn cmd_verify(cfg: &RunConfig, rule: &FunctionRule) -> Result<Report> {
    let report = verify_rule(rule, cfg.bound, cfg.depth)?;
    let body = match cfg.output_format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(report.suites.iter().map(|s| SuiteRow {
            suite: s.suite,
            passed: s.passed,
            counterexamples: s.counterexample_count,
            label: s.label.unwrap_or(""),
        })),
        Format::Text => {
            let mut s = String::new();
            let v = &report.validation;
            writeln!(
                s,
                "rule {}: checked {} prime powers (p <= {}, alpha <= {}), {} violations, {} skipped",
                report.rule,
                v.checked,
                v.prime_bound,
                v.exponent_bound,
                v.violations.len(),
                v.skipped.len()
            )
            .unwrap();
            for viol in v.violations.iter().take(MAX_LISTED) {
                writeln!(
                    s,
                    "  property {:?} fails at p = {}, alpha = {} (f = {})",
                    viol.property, viol.p, viol.alpha, viol.witness
                )
                .unwrap();
            }
            writeln!(
                s,
                "global properties A/B: {} violations up to {}",
                report.global_violations, report.bound
            )
            .unwrap();
            for suite in &report.suites {
                let status = if suite.passed { "PASS" } else { "FAIL" };
                write!(s, "[{status}] {}: {}", suite.suite, suite.statement).unwrap();
                if !suite.passed {
                    write!(s, " ({} counterexamples)", suite.counterexample_count).unwrap();
                    if let Some(label) = suite.label {
                        write!(s, " [{label}]").unwrap();
                    }
                }
                s.push('\n');
                for ce in &suite.counterexamples {
                    let parts: Vec<String> = ce.iter().map(u64::to_string).collect();
                    writeln!(s, "    ({})", parts.join(", ")).unwrap();
                }
            }
            s
        }
    };
    Ok(Report {
        body,
        exit_code: if report.all_passed() {
            EXIT_OK
        } else {
            EXIT_COUNTEREXAMPLE
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: u64,
    pub h: u64,
    pub in_s: bool,
    pub in_t: bool,
    pub traj_len: usize,
}

pub fn table_rows(rule: &FunctionRule, bound: u64) -> Result<Vec<TableRow>> {
    let c = PrimeClassification::new(rule);
    (1..=bound)
        .map(|n| {
            let t = trajectory(rule, n)?;
            Ok(TableRow {
                n,
                h: t.last(),
                in_s: c.in_s(n)?,
                in_t: c.in_t(n)?,
                traj_len: t.length(),
            })
        })
        .collect()
}

pub fn cmd_table(cfg: &RunConfig, rule: &FunctionRule) -> Result<Report> {
    let rows = table_rows(rule, cfg.bound)?;
    let body = match cfg.output_format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(&rows),
        Format::Text => {
            let mut s = String::from("n\th\tin_s\tin_t\ttraj_len\n");
            for r in &rows {
                writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}",
                    r.n, r.h, r.in_s, r.in_t, r.traj_len
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub rule: String,
    pub bound: u64,
    pub direct_total_ms: f64,
    pub fast_cold_total_ms: f64,
    pub fast_warm_total_ms: f64,
    pub direct_per_call_ns: f64,
    pub fast_warm_per_call_ns: f64,
    /// `direct / fast (warm)`.
    pub speedup: f64,
}

fn time_pass(bound: u64, mut h: impl FnMut(u64) -> Result<u64>) -> Result<Duration> {
    let start = Instant::now();
    for n in 1..=bound {
        black_box(h(black_box(n))?);
    }
    Ok(start.elapsed())
}

/// Times `h_direct` against `h_fast` over `1..=bound`. Makes no
/// correctness claims.
pub fn bench(rule: &FunctionRule, bound: u64) -> Result<BenchReport> {
    let direct = time_pass(bound, |n| h_direct(rule, n))?;
    let c = PrimeClassification::new(rule);
    let cold = time_pass(bound, |n| c.h_fast(n))?;
    let warm = time_pass(bound, |n| c.h_fast(n))?;

    let ms = |d: Duration| d.as_secs_f64() * 1e3;
    let per_call = |d: Duration| d.as_secs_f64() * 1e9 / bound as f64;
    // clamp so a sub-resolution warm pass still yields a finite ratio
    let warm_secs = warm.as_secs_f64().max(1e-9);
    Ok(BenchReport {
        rule: rule.name().to_owned(),
        bound,
        direct_total_ms: ms(direct),
        fast_cold_total_ms: ms(cold),
        fast_warm_total_ms: ms(warm),
        direct_per_call_ns: per_call(direct),
        fast_warm_per_call_ns: per_call(warm),
        speedup: direct.as_secs_f64().max(1e-9) / warm_secs,
    })
}

pub fn cmd_bench(cfg: &RunConfig, rule: &FunctionRule) -> Result<Report> {
    let report = bench(rule, cfg.bound)?;
    let body = match cfg.output_format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv([&report]),
        Format::Text => format!(
            "rule {} over n <= {}\n\
             h_direct:      {:>10.3} ms total, {:>10.1} ns/call\n\
             h_fast (cold): {:>10.3} ms total\n\
             h_fast (warm): {:>10.3} ms total, {:>10.1} ns/call\n\
             speedup (direct / warm fast): {:.2}x\n",
            report.rule,
            report.bound,
            report.direct_total_ms,
            report.direct_per_call_ns,
            report.fast_cold_total_ms,
            report.fast_warm_total_ms,
            report.fast_warm_per_call_ns,
            report.speedup
        ),
    };
    Ok(Report::ok(body))
}
