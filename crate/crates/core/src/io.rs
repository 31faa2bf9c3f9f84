//! CSV and JSON-lines output for transcripts, betting sessions and value
//! tables.
//!
//! Numbers are written with 17 significant digits (`%.17g` style), enough to
//! round-trip any `f64`. JSON rows carry the same field names as the CSV
//! columns.

use std::io::{self, Write};

use serde_json::json;

use crate::benchmarks::GameValueReport;
use crate::engine::{BettingSession, Transcript};

/// Format like C's `%.17g`: shortest of fixed or exponent notation, trailing
/// zeros removed.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format_g17(*v)).collect::<Vec<_>>().join(";")
}

/// Columns `round,x,g,inst_loss,cum_loss`. For more than one coordinate the
/// `x` and `g` cells hold `;`-separated vectors.
pub fn write_transcript_csv<W: Write>(mut out: W, transcript: &Transcript) -> io::Result<()> {
    writeln!(out, "round,x,g,inst_loss,cum_loss")?;
    for (r, cum) in transcript.rounds.iter().zip(transcript.cumulative_losses()) {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.round,
            join(&r.x),
            join(&r.g),
            format_g17(r.inst_loss),
            format_g17(cum)
        )?;
    }
    Ok(())
}

/// One JSON object per round, then a summary line.
pub fn write_transcript_jsonl<W: Write>(mut out: W, transcript: &Transcript) -> io::Result<()> {
    for (r, cum) in transcript.rounds.iter().zip(transcript.cumulative_losses()) {
        let row = json!({
            "round": r.round,
            "x": r.x,
            "g": r.g,
            "inst_loss": r.inst_loss,
            "cum_loss": cum,
        });
        writeln!(out, "{row}")?;
    }
    let summary = json!({
        "summary": {
            "horizon": transcript.horizon,
            "dimension": transcript.dimension,
            "final_sums": transcript.final_sums,
            "benchmark_value": transcript.benchmark_value,
            "loss": transcript.loss,
            "reward": transcript.reward,
            "regret": transcript.regret,
        }
    });
    writeln!(out, "{summary}")
}

/// Columns `round,bet,outcome,wealth`; round 0 is the starting budget.
pub fn write_session_csv<W: Write>(mut out: W, session: &BettingSession) -> io::Result<()> {
    writeln!(out, "round,bet,outcome,wealth")?;
    writeln!(out, "0,0,0,{}", format_g17(session.budget))?;
    for r in &session.rounds {
        writeln!(
            out,
            "{},{},{},{}",
            r.round,
            format_g17(r.bet),
            format_g17(r.outcome),
            format_g17(r.wealth)
        )?;
    }
    Ok(())
}

pub fn write_session_jsonl<W: Write>(mut out: W, session: &BettingSession) -> io::Result<()> {
    writeln!(
        out,
        "{}",
        json!({"round": 0, "bet": 0.0, "outcome": 0.0, "wealth": session.budget})
    )?;
    for r in &session.rounds {
        writeln!(
            out,
            "{}",
            json!({"round": r.round, "bet": r.bet, "outcome": r.outcome, "wealth": r.wealth})
        )?;
    }
    let summary = json!({
        "summary": {
            "horizon": session.horizon,
            "alpha": session.alpha,
            "budget": session.budget,
            "worst_case_loss": session.worst_case_loss,
            "final_wealth": session.final_wealth,
            "min_wealth": session.min_wealth,
            "over_wager_rounds": session.over_wager_rounds,
            "g_sum": session.g_sum,
            "guarantee_floor": session.guarantee_floor,
        }
    });
    writeln!(out, "{summary}")
}

/// Columns `T,exact_value,asymptote,ratio`.
pub fn write_values_csv<W: Write>(mut out: W, rows: &[GameValueReport]) -> io::Result<()> {
    writeln!(out, "T,exact_value,asymptote,ratio")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.horizon,
            format_g17(r.exact_value),
            format_g17(r.asymptote),
            format_g17(r.ratio)
        )?;
    }
    Ok(())
}

pub fn write_values_jsonl<W: Write>(mut out: W, rows: &[GameValueReport]) -> io::Result<()> {
    for r in rows {
        writeln!(
            out,
            "{}",
            json!({"T": r.horizon, "exact_value": r.exact_value, "asymptote": r.asymptote, "ratio": r.ratio})
        )?;
    }
    Ok(())
}
