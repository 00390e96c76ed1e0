//! The `devlab` command line.
//!
//! Exit codes: 0 success, 1 property failure, 2 parse or usage error,
//! 3 internal invariant violation, 4 resource limit exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::essential::essential_set;
use crate::metrics::{g, h, m, n, Count, Extent};
use crate::oracle::{dev_stats, GenParams, TermGenerator, Weights, DEFAULT_STATE_LIMIT};
use crate::properties::{run_check, CheckConfig};
use crate::strategy::trace_with;
use crate::syntax::{parse, print, to_json};
use crate::term::{is_ident, Term, VarName};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;
pub const EXIT_LIMIT: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "devlab",
    version,
    about = "Shortest and longest developments of marked lambda terms"
)]
struct Cli {
    /// Emit one JSON document on stdout instead of text.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Term text, e.g. "(\*x. x x) ((\*y. y) w)".
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    term: Option<String>,
    /// Read terms from a file, one per line.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Shortest,
    Longest,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print h and g, and optionally m_x and n_x.
    Metrics {
        #[command(flatten)]
        input: Input,
        /// Also print m and n for this variable.
        #[arg(long)]
        var: Option<String>,
    },
    /// Print the development computed by H (shortest) or G (longest).
    Trace {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "shortest")]
        mode: Mode,
    },
    /// List the essential redexes.
    Essential {
        #[command(flatten)]
        input: Input,
    },
    /// Exhaustively search all developments.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, env = "DEVLAB_STATE_LIMIT", default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
    },
    /// Run the invariant suite on generated terms.
    Check {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        max_size: usize,
        #[arg(long, default_value_t = 8)]
        max_redexes: usize,
        #[arg(long, env = "DEVLAB_STATE_LIMIT", default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
    },
}

/// The outcome of one command on one input.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    /// Printed form of the input term, if any.
    pub input: Option<String>,
    pub term: Option<Value>,
    pub result: Value,
    pub lines: Vec<String>,
    pub limit_exceeded: bool,
    pub elapsed_ms: u128,
    pub exit: u8,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            input: None,
            term: None,
            result: Value::Null,
            lines: Vec::new(),
            limit_exceeded: false,
            elapsed_ms: 0,
            exit: EXIT_OK,
        }
    }

    fn for_term(command: &'static str, t: &Term) -> Self {
        let mut r = Report::new(command);
        r.input = Some(print(t));
        r.term = Some(to_json(t));
        r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "term": self.term,
            "result": self.result,
            "exit": self.exit,
            "diagnostics": {
                "limit_exceeded": self.limit_exceeded,
                "elapsed_ms": self.elapsed_ms as u64,
            },
        })
    }
}

fn count_json(c: &Count) -> Value {
    match c.to_u64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn parse_failure(command: &'static str, src: &str, e: impl std::fmt::Display) -> Report {
    let mut r = Report::new(command);
    r.result = json!({ "error": e.to_string(), "source": src });
    r.lines.push(format!("error: {e}"));
    r.exit = EXIT_PARSE;
    r
}

fn metrics_report(t: &Term, var: Option<&VarName>) -> Report {
    let mut r = Report::for_term("metrics", t);
    let (ht, gt) = (h(t), g(t));
    r.lines.push(format!("term: {}", print(t)));
    r.lines.push(format!("h={ht} g={gt}"));
    let mut result = json!({ "h": count_json(&ht), "g": count_json(&gt) });
    if let Some(x) = var {
        let (mx, nx) = (m(x, t), n(x, t));
        r.lines.push(format!("m_{x}={mx} n_{x}={nx}"));
        result["var"] = json!(x.as_str());
        result["m"] = count_json(&mx);
        result["n"] = count_json(&nx);
    }
    r.result = result;
    r
}

fn trace_report(t: &Term, mode: Mode) -> Report {
    let (extent, name, expected) = match mode {
        Mode::Shortest => (Extent::Shortest, "h", h(t)),
        Mode::Longest => (Extent::Longest, "g", g(t)),
    };
    let trace = trace_with(t, extent);
    let mut r = Report::for_term("trace", t);
    r.lines.push(format!("term: {}", print(t)));
    let mut steps = Vec::new();
    for (i, (p, next)) in trace.steps.iter().enumerate() {
        r.lines
            .push(format!("step {}: {p} -> {}", i + 1, print(next)));
        steps.push(json!({
            "path": p.steps().iter().map(|s| s.name()).collect::<Vec<_>>(),
            "text": print(next),
            "term": to_json(next),
        }));
    }
    let ok = Count::from(trace.len()) == expected && trace.is_complete() && trace.validate();
    r.lines.push(format!(
        "length={} {name}={expected} check={}",
        trace.len(),
        if ok { "ok" } else { "FAILED" }
    ));
    r.result = json!({
        "mode": match mode { Mode::Shortest => "shortest", Mode::Longest => "longest" },
        "steps": steps,
        "length": trace.len(),
        name: count_json(&expected),
        "check": ok,
    });
    if !ok {
        r.exit = EXIT_INTERNAL;
    }
    r
}

fn essential_report(t: &Term) -> Report {
    let mut r = Report::for_term("essential", t);
    let set = essential_set(t);
    let ht = h(t);
    r.lines.push(format!("term: {}", print(t)));
    let mut entries = Vec::new();
    for p in &set {
        let sub = t.at(p).expect("essential paths address redexes");
        r.lines.push(format!("essential {p}: {}", print(sub)));
        entries.push(json!({
            "path": p.steps().iter().map(|s| s.name()).collect::<Vec<_>>(),
            "text": print(sub),
        }));
    }
    let ok = Count::from(set.len()) == ht;
    let listed: Vec<String> = set.iter().map(|p| p.to_string()).collect();
    r.lines.push(format!(
        "essential=[{}] count={} h={ht} check={}",
        listed.join(", "),
        set.len(),
        if ok { "ok" } else { "FAILED" }
    ));
    r.result = json!({
        "essential": entries,
        "count": set.len(),
        "h": count_json(&ht),
        "check": ok,
    });
    if !ok {
        r.exit = EXIT_INTERNAL;
    }
    r
}

fn oracle_report(t: &Term, state_limit: usize) -> Report {
    let mut r = Report::for_term("oracle", t);
    r.lines.push(format!("term: {}", print(t)));
    let stats = match dev_stats(t, state_limit.max(1)) {
        Ok(s) => s,
        Err(e) => {
            r.lines.push(format!("error: {e}"));
            r.result = json!({ "error": e.to_string() });
            r.exit = EXIT_INTERNAL;
            return r;
        }
    };
    let (ht, gt) = (h(t), g(t));
    if !stats.complete {
        r.limit_exceeded = true;
        r.exit = EXIT_LIMIT;
        r.lines.push(format!(
            "complete=false states={} ({})",
            stats.states,
            stats.detail.as_deref().unwrap_or("limit exceeded")
        ));
        r.result = json!({
            "complete": false,
            "states": stats.states,
            "detail": stats.detail,
            "h": count_json(&ht),
            "g": count_json(&gt),
        });
        return r;
    }
    let shortest = stats.shortest.expect("complete");
    let longest = stats.longest.expect("complete");
    let agree = shortest == ht && longest == gt;
    r.lines.push(format!(
        "shortest={shortest} longest={longest} states={} complete=true",
        stats.states
    ));
    r.lines.push(format!(
        "h={ht} g={gt} agree={}",
        if agree { "yes" } else { "no" }
    ));
    r.result = json!({
        "complete": true,
        "shortest": count_json(&shortest),
        "longest": count_json(&longest),
        "states": stats.states,
        "h": count_json(&ht),
        "g": count_json(&gt),
        "agree": agree,
    });
    if !agree {
        r.exit = EXIT_INTERNAL;
    }
    r
}

fn check_report(params: GenParams, count: usize, state_limit: usize) -> Report {
    let mut r = Report::new("check");
    if let Err(e) = params.validate() {
        r.lines.push(format!("error: {e}"));
        r.result = json!({ "error": e });
        r.exit = EXIT_PARSE;
        return r;
    }
    let cfg = CheckConfig {
        state_limit: state_limit.max(1),
        ..CheckConfig::default()
    };
    let summary = run_check(&mut TermGenerator::new(params.clone()), count, &cfg);
    r.lines.push(format!(
        "seed={} max_size={} max_redexes={} state_limit={}",
        params.seed, params.max_size, params.max_redexes, cfg.state_limit
    ));
    r.lines.push(format!(
        "terms={} passed={} failed={} skipped={}",
        summary.terms, summary.passed, summary.failed, summary.skipped
    ));
    let first = summary
        .first_failure
        .as_ref()
        .map(|(t, prop, detail)| json!({ "term": print(t), "property": prop, "detail": detail }));
    if let Some((t, prop, detail)) = &summary.first_failure {
        r.lines
            .push(format!("counterexample [{prop}]: {} ({detail})", print(t)));
    }
    r.limit_exceeded = summary.skipped > 0;
    r.result = json!({
        "seed": params.seed,
        "max_size": params.max_size,
        "max_redexes": params.max_redexes,
        "terms": summary.terms,
        "passed": summary.passed,
        "failed": summary.failed,
        "skipped": summary.skipped,
        "first_failure": first,
    });
    r.lines.push(
        if summary.failed == 0 {
            "result: pass"
        } else {
            "result: FAIL"
        }
        .to_string(),
    );
    if summary.failed > 0 {
        r.exit = EXIT_PROPERTY;
    }
    r
}

/// Term sources named on the command line or read from `-f`.
fn inputs(input: &Input) -> Result<Vec<String>, String> {
    match (&input.term, &input.file) {
        (Some(t), _) => Ok(vec![t.clone()]),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|text| {
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect()
            })
            .map_err(|e| format!("cannot read {}: {e}", path.display())),
        (None, None) => Err("no term given".into()),
    }
}

fn per_term(command: &'static str, input: &Input, f: impl Fn(&Term) -> Report) -> Vec<Report> {
    match inputs(input) {
        Err(e) => {
            let mut r = Report::new(command);
            r.lines.push(format!("error: {e}"));
            r.result = json!({ "error": e });
            r.exit = EXIT_PARSE;
            vec![r]
        }
        Ok(srcs) => srcs
            .iter()
            .map(|src| {
                let start = Instant::now();
                let mut r = match parse(src) {
                    Ok(t) => f(&t),
                    Err(e) => parse_failure(command, src, e),
                };
                r.elapsed_ms = start.elapsed().as_millis();
                r
            })
            .collect(),
    }
}

fn execute(cli: &Cli) -> (Vec<Report>, bool) {
    let reports = match &cli.command {
        Command::Metrics { input, var } => {
            let var = match var.as_deref() {
                Some(v) if !is_ident(v) => {
                    return (
                        vec![parse_failure(
                            "metrics",
                            v,
                            format!("invalid variable name `{v}`"),
                        )],
                        false,
                    )
                }
                v => v.map(VarName::new),
            };
            per_term("metrics", input, |t| metrics_report(t, var.as_ref()))
        }
        Command::Trace { input, mode } => per_term("trace", input, |t| trace_report(t, *mode)),
        Command::Essential { input } => per_term("essential", input, essential_report),
        Command::Oracle { input, state_limit } => {
            per_term("oracle", input, |t| oracle_report(t, *state_limit))
        }
        Command::Check {
            count,
            seed,
            max_size,
            max_redexes,
            state_limit,
        } => {
            let params = GenParams {
                max_size: *max_size,
                max_redexes: *max_redexes,
                seed: *seed,
                weights: Weights::default(),
            };
            let start = Instant::now();
            let mut r = check_report(params, *count, *state_limit);
            r.elapsed_ms = start.elapsed().as_millis();
            vec![r]
        }
    };
    let batch = match &cli.command {
        Command::Metrics { input, .. }
        | Command::Trace { input, .. }
        | Command::Essential { input }
        | Command::Oracle { input, .. } => input.file.is_some(),
        Command::Check { .. } => false,
    };
    (reports, batch)
}

/// Runs the command line and writes its output to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let (reports, batch) = execute(&cli);
    let exit = reports.iter().map(|r| r.exit).max().unwrap_or(EXIT_OK);
    let written = if cli.machine {
        let doc = if batch {
            Value::Array(reports.iter().map(Report::to_json).collect())
        } else {
            reports[0].to_json()
        };
        writeln!(out, "{doc}")
    } else {
        reports.iter().enumerate().try_for_each(|(i, r)| {
            if i > 0 {
                writeln!(out)?;
            }
            for line in &r.lines {
                writeln!(out, "{line}")?;
            }
            writeln!(out, "elapsed_ms={}", r.elapsed_ms)
        })
    };
    if written.is_err() {
        return EXIT_INTERNAL;
    }
    exit
}
