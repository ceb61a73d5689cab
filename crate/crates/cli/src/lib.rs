//! The `ordstate` command-line driver.
//!
//! Exit codes: 0 success, 1 parse or type error, 2 runtime violation, 3 fuel
//! exhausted, 64 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ordstate::checker::{check_program, Typed};
use ordstate::context::to_dot;
use ordstate::interp::{run as evaluate, RunOptions, RunOutcome, RunResult, DEFAULT_FUEL};
use ordstate::opm::OpmInstance;
use ordstate::surface::{parse, Span};
use ordstate::term::Name;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_FUEL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "ordstate", version, about = "Check and run programs over ordered resources")]
struct Cli {
    /// Print diagnostics and results as JSON lines.
    #[arg(long, global = true)]
    json: bool,

    /// Resource index algebra.
    #[arg(long, global = true, default_value = "regex", value_parser = OpmInstance::NAMES)]
    opm: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Typecheck a program.
    Check { file: PathBuf },
    /// Typecheck and evaluate a program.
    Run {
        file: PathBuf,
        /// Check the heap invariants after every step.
        #[arg(long)]
        paranoid: bool,
        /// Maximum number of steps.
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Print one line per step.
        #[arg(long)]
        trace: bool,
    },
    /// Print the elaborated core term and the mode chosen for every binding.
    DumpCore { file: PathBuf },
    /// Print the typing context at a binding as a Graphviz digraph.
    DumpGraph {
        file: PathBuf,
        /// Name bound by a let.
        #[arg(long)]
        at: String,
    },
    /// Evaluate a program, printing every step.
    Trace {
        file: PathBuf,
        /// Check the heap invariants after every step.
        #[arg(long)]
        paranoid: bool,
        /// Maximum number of steps.
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
}

/// One error report.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    fn at(src: &str, span: Span, kind: &str, message: String) -> Diagnostic {
        let (line, col) = span.line_col(src);
        Diagnostic {
            kind: kind.to_string(),
            line,
            col,
            message,
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn diagnostic(&mut self, file: &Path, d: &Diagnostic) {
        if self.json {
            let _ = writeln!(self.out, "{}", serde_json::to_string(d).expect("serializable"));
        } else {
            let _ = writeln!(
                self.err,
                "{}:{}:{}: error[{}]: {}",
                file.display(),
                d.line,
                d.col,
                d.kind,
                d.message
            );
        }
    }

    fn emit(&mut self, value: serde_json::Value) {
        let _ = writeln!(self.out, "{value}");
    }

    fn text(&mut self, s: &str) {
        let _ = self.out.write_all(s.as_bytes());
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let opm = OpmInstance::by_name(&cli.opm).expect("validated by clap");
    let mut io = Io {
        out,
        err,
        json: cli.json,
    };
    match &cli.command {
        Command::Check { file } => with_checked(&mut io, file, &opm, |io, typed| {
            if io.json {
                io.emit(json!({"status": "ok", "type": typed.ty.to_string(), "effect": typed.effect.bit()}));
            } else {
                io.text(&format!("ok: {} (effect {})\n", typed.ty, typed.effect));
            }
            EXIT_OK
        }),
        Command::Run {
            file,
            paranoid,
            fuel,
            trace,
        } => with_checked(&mut io, file, &opm, |io, typed| {
            execute(io, typed, &opm, *fuel, *paranoid, *trace)
        }),
        Command::Trace { file, paranoid, fuel } => {
            with_checked(&mut io, file, &opm, |io, typed| execute(io, typed, &opm, *fuel, *paranoid, true))
        }
        Command::DumpCore { file } => with_checked(&mut io, file, &opm, |io, typed| {
            if io.json {
                let src = std::fs::read_to_string(file).unwrap_or_default();
                let bindings: Vec<_> = typed
                    .lets
                    .iter()
                    .map(|l| {
                        let (line, col) = l.span.line_col(&src);
                        json!({
                            "line": line,
                            "col": col,
                            "names": l.names.iter().map(Name::as_str).collect::<Vec<_>>(),
                            "form": l.form.to_string(),
                            "kind": l.kind.as_str(),
                            "pattern": l.pattern.as_ref().map(|p| p.to_string()),
                        })
                    })
                    .collect();
                io.emit(json!({"bindings": bindings, "core": typed.core.pretty()}));
            } else {
                let src = std::fs::read_to_string(file).unwrap_or_default();
                io.text(&dump_core(&src, typed));
            }
            EXIT_OK
        }),
        Command::DumpGraph { file, at } => with_checked(&mut io, file, &opm, |io, typed| {
            let Some(ctx) = typed.snapshots.get(at.as_str()) else {
                let known: Vec<&str> = typed.snapshots.keys().map(Name::as_str).collect();
                let _ = writeln!(
                    io.err,
                    "error: no binding named `{at}` (known: {})",
                    known.join(", ")
                );
                return EXIT_USAGE;
            };
            let dot = to_dot(ctx, at);
            if io.json {
                io.emit(json!({"name": at, "context": ctx.simplify().to_string(), "dot": dot}));
            } else {
                io.text(&dot);
            }
            EXIT_OK
        }),
    }
}

/// The `dump-core` text: one line per binding form, then the core term.
pub fn dump_core(src: &str, typed: &Typed) -> String {
    let mut out = String::from("-- bindings\n");
    for l in &typed.lets {
        let (line, col) = l.span.line_col(src);
        let names: Vec<&str> = l.names.iter().map(Name::as_str).collect();
        let mut row = format!(
            "{:<7} {:<8} {:<9} {}",
            format!("{line}:{col}"),
            names.join(", "),
            l.form.to_string(),
            l.kind
        );
        if let Some(p) = &l.pattern {
            row.push_str(&format!("  G = {p}"));
        }
        out.push_str(row.trim_end());
        out.push('\n');
    }
    out.push_str("-- core\n");
    out.push_str(&typed.core.pretty());
    out.push('\n');
    out
}

fn with_checked(io: &mut Io, file: &Path, opm: &OpmInstance, then: impl FnOnce(&mut Io, &Typed) -> i32) -> i32 {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(io.err, "error: cannot read {}: {e}", file.display());
            return EXIT_USAGE;
        }
    };
    match check_source(&src, opm) {
        Ok(typed) => then(io, &typed),
        Err(diags) => {
            for d in &diags {
                io.diagnostic(file, d);
            }
            EXIT_REJECTED
        }
    }
}

/// Parses and checks `src`, reporting failures as diagnostics.
pub fn check_source(src: &str, opm: &OpmInstance) -> Result<Typed, Vec<Diagnostic>> {
    let expr = parse(src).map_err(|e| vec![Diagnostic::at(src, e.span, "parse", e.to_string())])?;
    check_program(&expr, opm).map_err(|errs| {
        errs.iter()
            .map(|e| Diagnostic::at(src, e.span, e.kind.as_str(), e.to_string()))
            .collect()
    })
}

fn outcome_code(r: &RunResult) -> i32 {
    match &r.outcome {
        RunOutcome::FuelExhausted => EXIT_FUEL,
        _ if !r.is_clean() => EXIT_RUNTIME,
        _ => EXIT_OK,
    }
}

fn execute(io: &mut Io, typed: &Typed, opm: &OpmInstance, fuel: usize, paranoid: bool, trace: bool) -> i32 {
    let r = evaluate(&typed.core, opm, RunOptions { fuel, paranoid });
    let code = outcome_code(&r);
    if io.json {
        if trace {
            for s in &r.steps {
                io.emit(json!({
                    "step": s.index,
                    "rule": s.rule.name(),
                    "redex": s.redex.to_string(),
                    "heap": s.delta.to_string(),
                }));
            }
        }
        let (outcome, detail) = match &r.outcome {
            RunOutcome::Value(v) => ("value", json!(v.to_string())),
            RunOutcome::Stuck(s) => ("stuck", json!({"reason": s.reason.as_str(), "redex": s.redex.to_string(), "message": s.message})),
            RunOutcome::FuelExhausted => ("fuel-exhausted", serde_json::Value::Null),
        };
        let violations: Vec<String> = r.violations.iter().map(|(n, v)| format!("after step {n}: {v}")).collect();
        io.emit(json!({
            "outcome": outcome,
            "result": detail,
            "steps": r.steps.len(),
            "heap": r.heap.to_string(),
            "violations": violations,
        }));
        return code;
    }
    if trace {
        for s in &r.steps {
            io.text(&format!("{s}\n"));
        }
    }
    match &r.outcome {
        RunOutcome::Value(v) => io.text(&format!("{v}\n")),
        RunOutcome::Stuck(s) => {
            let _ = writeln!(io.err, "error[runtime]: {s}");
        }
        RunOutcome::FuelExhausted => {
            let _ = writeln!(io.err, "error[runtime]: fuel exhausted after {} steps", r.steps.len());
        }
    }
    if !r.heap.is_empty() {
        let _ = writeln!(io.err, "error[runtime]: final heap is not empty: {}", r.heap);
    }
    for (n, v) in &r.violations {
        let _ = writeln!(io.err, "error[runtime]: oracle violation after step {n}: {v}");
    }
    code
}
