//! Result formatting: canonical value strings, constancy notes, dimension
//! bookkeeping, timing, and the per-graph audit table.

use gkmgw_core::localize::{EvalReport, GraphContribution, InvariantReport, PushforwardReport};
use std::fmt::Write as _;
use std::time::Duration;

fn push_time(out: &mut String, elapsed: Duration) {
    let _ = writeln!(out, "time {:.2}s", elapsed.as_secs_f64());
}

fn push_vdim(out: &mut String, vdim: &Option<gkmgw_core::qfield::Rat>) {
    match vdim {
        Some(d) => {
            let _ = writeln!(out, "vdim {}", d);
        }
        None => {
            let _ = writeln!(out, "vdim -");
        }
    }
}

pub fn format_invariant(report: &InvariantReport, elapsed: Duration) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graphs {}", report.graphs);
    push_vdim(&mut out, &report.vdim);
    match &report.constant {
        Some(c) => {
            let _ = writeln!(out, "value = {} (u-independent)", c);
        }
        None => {
            let _ = writeln!(out, "value = {}", report.value);
        }
    }
    push_time(&mut out, elapsed);
    out
}

pub fn format_eval(report: &EvalReport, elapsed: Duration) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graphs {}", report.graphs);
    let point: Vec<String> = report.point.iter().map(|u| u.to_string()).collect();
    let _ = writeln!(out, "point ({})", point.join(", "));
    let _ = writeln!(out, "attempts {}", report.attempts);
    let _ = writeln!(out, "value = {}", report.value);
    push_time(&mut out, elapsed);
    out
}

/// Per-graph audit table. Callers pass contributions already sorted by the
/// graphs' canonical certificates.
pub fn format_audit(contribs: &[GraphContribution]) -> String {
    let mut out = String::new();
    for (k, c) in contribs.iter().enumerate() {
        let _ = writeln!(out, "graph {} = {}", k + 1, c.value);
        for line in c.graph.to_string().lines() {
            let _ = writeln!(out, "  {}", line);
        }
        for (label, factor) in &c.trace {
            let _ = writeln!(out, "  {} = {}", label, factor);
        }
    }
    out
}

/// Canonical value string with the constancy note.
fn value_string(value: &gkmgw_core::qfield::RatFunc) -> String {
    match value.constant_value() {
        Some(c) => format!("{} (u-independent)", c),
        None => value.to_string(),
    }
}

pub fn format_pushforward(report: &PushforwardReport, elapsed: Duration) -> String {
    let mut out = String::new();
    for (beta, value) in &report.per_class {
        let parts: Vec<String> = beta.0.iter().map(|(e, d)| format!("{}:{}", e, d)).collect();
        let _ = writeln!(out, "class {} = {}", parts.join(","), value_string(value));
    }
    let _ = writeln!(out, "total = {}", value_string(&report.total));
    push_time(&mut out, elapsed);
    out
}
