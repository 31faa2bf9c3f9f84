use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::json;

use olo_core::engine::{betting_session, play_game, value_sweep, GameSpec};
use olo_core::io::{
    format_g17, write_session_csv, write_session_jsonl, write_transcript_csv, write_transcript_jsonl, write_values_csv,
    write_values_jsonl,
};
use olo_core::oracle::{self, OracleConfig, EXHAUSTIVE_MAX_T, GRID_MAX_T};
use olo_core::{Benchmark, BenchmarkKind, StrategyKind};

use crate::args::{kind_for, Flags, Format, KindArg};
use crate::CliError;

/// Where the main artifact goes, and where the human-readable summary goes.
/// With `--out` the summary uses stdout; otherwise it moves to stderr so
/// stdout stays machine-readable.
fn with_output<F>(flags: &Flags, write: F) -> Result<Box<dyn Write>, CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let io_err = |e: io::Error| CliError::Io(e.to_string());
    match &flags.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            write(&mut out).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            Ok(Box::new(io::stdout()))
        }
        None => {
            let mut out = io::stdout().lock();
            write(&mut out).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            Ok(Box::new(io::stderr()))
        }
    }
}

fn report(summary: &mut dyn Write, lines: &[(&str, String)]) -> Result<(), CliError> {
    for (label, value) in lines {
        writeln!(summary, "{label}: {value}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

pub fn value(flags: &Flags) -> Result<(), CliError> {
    let rows = value_sweep(flags.benchmark_kind()?, flags.horizons()?)?;
    with_output(flags, |out| match flags.format() {
        Format::Csv => write_values_csv(out, &rows),
        Format::Json => write_values_jsonl(out, &rows),
    })?;
    Ok(())
}

pub fn play(flags: &Flags) -> Result<(), CliError> {
    let benchmark = Benchmark::new(flags.benchmark_kind()?, flags.single_horizon()?)?;
    let spec = GameSpec {
        benchmark,
        dimension: flags.dim.unwrap_or(1),
        strategy: flags.strategy_for(&benchmark),
        adversaries: vec![flags.adversary_for(&benchmark)?],
        seed: flags.seed(),
    };
    let transcript = play_game(&spec)?;
    let mut summary = with_output(flags, |out| match flags.format() {
        Format::Csv => write_transcript_csv(out, &transcript),
        Format::Json => write_transcript_jsonl(out, &transcript),
    })?;
    let value = spec.dimension as f64 * benchmark.game_value().exact_value;
    report(
        &mut *summary,
        &[
            ("regret", format_g17(transcript.regret)),
            ("reward", format_g17(transcript.reward)),
            ("game value", format_g17(value)),
        ],
    )
}

pub fn bet(flags: &Flags) -> Result<(), CliError> {
    let horizon = flags.single_horizon()?;
    let alpha = flags.alpha();
    // the minimax adversary plays against the symmetric game being bet on
    let benchmark = Benchmark::exp_symmetric(alpha, horizon)?;
    let session = betting_session(
        horizon,
        alpha,
        flags.budget.unwrap_or(1.0),
        flags.adversary_for(&benchmark)?,
        flags.seed(),
    )?;
    let mut summary = with_output(flags, |out| match flags.format() {
        Format::Csv => write_session_csv(out, &session),
        Format::Json => write_session_jsonl(out, &session),
    })?;
    report(
        &mut *summary,
        &[
            ("final wealth", format_g17(session.final_wealth)),
            ("min wealth", format_g17(session.min_wealth)),
            ("|G|", format_g17(session.g_sum.abs())),
            ("guarantee floor", format_g17(session.guarantee_floor)),
        ],
    )
}

struct Check {
    name: String,
    expected: f64,
    got: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    /// `|got - expected| <= tolerance * max(1, |expected|)`.
    fn close(name: String, expected: f64, got: f64, tolerance: f64) -> Self {
        let passed = (got - expected).abs() <= tolerance * expected.abs().max(1.0);
        Check {
            name,
            expected,
            got,
            tolerance,
            passed,
        }
    }

    fn at_most(name: String, got: f64, tolerance: f64) -> Self {
        Check {
            name,
            expected: 0.0,
            got,
            tolerance,
            passed: got <= tolerance,
        }
    }
}

fn verify_families(flags: &Flags) -> Vec<BenchmarkKind> {
    let sigma = flags.sigma.unwrap_or(1.0);
    let kinds = match flags.kind {
        Some(kind) => vec![kind],
        None => vec![KindArg::Quad, KindArg::Abs, KindArg::Exp, KindArg::ExpSym],
    };
    kinds.into_iter().map(|k| kind_for(k, sigma, flags.alpha())).collect()
}

fn run_checks(flags: &Flags) -> Result<Vec<Check>, CliError> {
    let max_t = flags.max_t.unwrap_or(10);
    if max_t > EXHAUSTIVE_MAX_T {
        return Err(CliError::Usage(format!("--max-t is capped at {EXHAUSTIVE_MAX_T}")));
    }
    let mut checks = Vec::new();
    for kind in verify_families(flags) {
        let family = Benchmark::new(kind, 1)?.kind().short_name();
        for t in 1..=max_t {
            let b = Benchmark::new(kind, t)?;
            let value = b.game_value().exact_value;
            let enumerated = oracle::exhaustive_value(&b)?;
            checks.push(Check::close(
                format!("exhaustive {family} T={t}"),
                value,
                enumerated,
                1e-10,
            ));
            let worst = oracle::worst_case_regret(&StrategyKind::minimax_for(&b), &b)?;
            checks.push(Check::close(
                format!("worst-case regret {family} T={t}"),
                value,
                worst.regret,
                1e-9,
            ));
            if flags.grid && t <= GRID_MAX_T {
                let cfg = OracleConfig::for_benchmark(&b);
                let grid = oracle::grid_minimax_value(&b, &cfg)?;
                checks.push(Check::close(
                    format!("grid {family} T={t}"),
                    enumerated,
                    grid.value,
                    5e-3,
                ));
                checks.push(Check::at_most(
                    format!("grid extremes {family} T={t}"),
                    grid.interior_excess,
                    cfg.x_step,
                ));
            }
        }
    }
    Ok(checks)
}

fn write_checks(out: &mut dyn Write, checks: &[Check], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "check,expected,got,tolerance,status")?;
            for c in checks {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.name,
                    format_g17(c.expected),
                    format_g17(c.got),
                    format_g17(c.tolerance),
                    if c.passed { "pass" } else { "FAIL" }
                )?;
            }
        }
        Format::Json => {
            for c in checks {
                let row = json!({
                    "check": c.name,
                    "expected": c.expected,
                    "got": c.got,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                });
                writeln!(out, "{row}")?;
            }
        }
    }
    Ok(())
}

pub fn verify(flags: &Flags) -> Result<(), CliError> {
    let checks = run_checks(flags)?;
    let mut summary = with_output(flags, |out| write_checks(out, &checks, flags.format()))?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    report(
        &mut *summary,
        &[("checks", checks.len().to_string()), ("failed", failed.to_string())],
    )?;
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}
