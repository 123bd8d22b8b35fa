//! The `dcc` command line.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a negative
//! verdict (ill-typed, distinguishable, unsafe, stuck), 2 for usage, parse
//! and configuration errors. With `--json` every invocation prints exactly
//! one JSON object tagged with [`SCHEMA`].

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{self, Outcome};
use crate::eval::{eval_deep, DEFAULT_FUEL};
use crate::lattice::{BlameMode, Lattice};
use crate::oracles::{indistinguishable, safe, OracleConfig};
use crate::par::Strategy;
use crate::syntax::{normalize_type, parse_index, parse_term, parse_type, show_term, show_type, ParseError, SourceSpan};
use crate::transform::{blame_of, leak_gen, volpano_translate, weaken_translate};
use crate::typecheck::{check_with, CheckOptions, System, TraceStep, TypingEnv};

pub const SCHEMA: &str = "dcc-cli/1";

#[derive(Parser, Debug)]
#[command(name = "dcc", version, about = "Typecheck, run and compare programs of the DCC family")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Built-in lattice name (two, diamond) or a lattice file.
    #[arg(long, global = true, default_value = "two")]
    lattice: String,
    /// Order of the blame copy relative to the levels (preserve, flip).
    #[arg(long = "blame-order", global = true, default_value = "preserve")]
    blame_order: BlameMode,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Input {
    /// Program file.
    file: Option<PathBuf>,
    /// Inline program.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the normalized type, or the failing rule.
    Check {
        #[arg(long)]
        system: System,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Evaluate to a value.
    Eval {
        #[arg(long)]
        taint: bool,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[command(flatten)]
        input: Input,
    },
    /// Decide indistinguishability at an observer level.
    Equiv {
        #[arg(long)]
        level: String,
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        e1: String,
        e2: String,
    },
    /// Decide safety at an observer level.
    Safe {
        #[arg(long)]
        level: String,
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        e: String,
    },
    /// Translate a term (or, with -t, a type) between calculi.
    Translate {
        #[arg(long)]
        dir: Direction,
        #[arg(short = 't', long = "type")]
        ty: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Print the blame carried by a type.
    Blame {
        #[arg(short = 't', long = "type")]
        ty: String,
    },
    /// Print the leak function for a type.
    Leak {
        #[arg(long)]
        level: String,
        #[arg(long = "type")]
        ty: String,
    },
    /// The bundled example programs.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CorpusAction {
    List,
    Run,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Direction {
    DccToDccd,
    DccdToDcc,
}

#[derive(Serialize, Debug, Default)]
struct Output {
    schema: &'static str,
    command: &'static str,
    verdict: &'static str,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    term: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blame: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<SourceSpan>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    trace: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    examples: Option<serde_json::Value>,
}

/// A failed invocation: exit code plus the JSON error payload.
struct Failure {
    code: i32,
    message: String,
    error: serde_json::Value,
    span: Option<SourceSpan>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        let message = message.into();
        Failure { code: 2, error: serde_json::json!({ "kind": "usage", "message": message }), message, span: None }
    }

    fn parse(e: ParseError) -> Failure {
        let message = e.to_string();
        Failure {
            code: 2,
            error: serde_json::json!({ "kind": "parse", "message": message }),
            message,
            span: Some(e.span()),
        }
    }

    fn negative(kind: &str, message: String) -> Failure {
        Failure { code: 1, error: serde_json::json!({ "kind": kind, "message": message }), message, span: None }
    }
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            if json_requested {
                let o = Output {
                    schema: SCHEMA,
                    command: "usage",
                    verdict: "error",
                    error: Some(serde_json::json!({ "kind": "usage", "message": e.to_string() })),
                    ..Output::default()
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&o).expect("serializable"));
            } else {
                let _ = write!(err, "{e}");
            }
            return 2;
        }
    };
    let command = command_name(&cli.cmd);
    let json = cli.json;
    match execute(cli) {
        Ok((code, o, text)) => {
            if json {
                let _ = writeln!(out, "{}", serde_json::to_string(&o).expect("serializable"));
            } else {
                let _ = write!(out, "{text}");
            }
            code
        }
        Err(f) => {
            if json {
                let o = Output {
                    schema: SCHEMA,
                    command,
                    verdict: if f.code == 1 { "rejected" } else { "error" },
                    error: Some(f.error),
                    span: f.span,
                    ..Output::default()
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&o).expect("serializable"));
            } else if f.code == 1 {
                let _ = writeln!(out, "{}", f.message);
            } else {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Check { .. } => "check",
        Cmd::Eval { .. } => "eval",
        Cmd::Equiv { .. } => "equiv",
        Cmd::Safe { .. } => "safe",
        Cmd::Translate { .. } => "translate",
        Cmd::Blame { .. } => "blame",
        Cmd::Leak { .. } => "leak",
        Cmd::Corpus { .. } => "corpus",
    }
}

fn load_lattice(arg: &str, mode: BlameMode) -> Result<Lattice, Failure> {
    let lat = match Lattice::builtin(arg) {
        Some(l) => l,
        None => {
            let src = std::fs::read_to_string(arg)
                .map_err(|e| Failure::usage(format!("lattice `{arg}` is neither built in nor a readable file: {e}")))?;
            Lattice::load(&src).map_err(|e| Failure::usage(format!("bad lattice `{arg}`: {e}")))?
        }
    };
    Ok(lat.with_blame_mode(mode))
}

fn read_input(input: &Input) -> Result<String, Failure> {
    match (&input.file, &input.expr) {
        (_, Some(e)) => Ok(e.clone()),
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(Failure::usage("expected a program file or -e EXPR")),
    }
}

type Done = (i32, Output, String);

fn done(command: &'static str, verdict: &'static str) -> Output {
    Output { schema: SCHEMA, command, verdict, ..Output::default() }
}

fn execute(cli: Cli) -> Result<Done, Failure> {
    let command = command_name(&cli.cmd);
    let lat = load_lattice(&cli.lattice, cli.blame_order)?;
    let term = |src: &str| parse_term(src, &lat).map_err(Failure::parse);
    let ty = |src: &str| parse_type(src, &lat).map(|t| normalize_type(&lat, &t)).map_err(Failure::parse);
    let index = |src: &str| parse_index(src, &lat).map_err(Failure::parse);
    match cli.cmd {
        Cmd::Check { system, trace, input } => {
            let e = term(&read_input(&input)?)?;
            let opts = CheckOptions { trace, ..CheckOptions::default() };
            let report = check_with(&lat, &TypingEnv::closed(&lat, system), &e, &opts);
            let mut text = String::new();
            for step in &report.trace {
                text.push_str(&format!("{}{}  {}\n", "  ".repeat(step.depth), step.rule, step.judgment));
            }
            for n in &report.notes {
                text.push_str(&format!("note: {n}\n"));
            }
            let mut o = done(command, "accepted");
            o.trace = report.trace.clone();
            o.notes = report.notes.clone();
            match report.result {
                Ok(t) => {
                    let shown = show_type(&lat, &t);
                    text.push_str(&format!("{shown}\n"));
                    o.ty = Some(shown);
                    Ok((0, o, text))
                }
                Err(e) => {
                    text.push_str(&format!("{e}\n"));
                    o.verdict = "rejected";
                    let mut v = serde_json::to_value(&e).expect("serializable");
                    v["message"] = serde_json::Value::String(e.to_string());
                    o.error = Some(v);
                    Ok((1, o, text))
                }
            }
        }
        Cmd::Eval { taint, fuel, input } => {
            let e = term(&read_input(&input)?)?;
            let v = eval_deep(&lat, &e, taint, fuel).map_err(|e| Failure::negative("eval", e.to_string()))?;
            let shown = show_term(&lat, &v);
            let mut o = done(command, "ok");
            o.term = Some(shown.clone());
            Ok((0, o, format!("{shown}\n")))
        }
        Cmd::Equiv { level, ty: t, depth, e1, e2 } => {
            let (l, t, a, b) = (index(&level)?, ty(&t)?, term(&e1)?, term(&e2)?);
            let cfg = OracleConfig { depth, ..OracleConfig::default() };
            let r = indistinguishable(&lat, &a, &b, &t, l, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(boolean(command, r))
        }
        Cmd::Safe { level, ty: t, depth, e } => {
            let (l, t, a) = (index(&level)?, ty(&t)?, term(&e)?);
            let cfg = OracleConfig { depth, ..OracleConfig::default() };
            let r = safe(&lat, &a, &t, l, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(boolean(command, r))
        }
        Cmd::Translate { dir, ty: t, input } => {
            let mut o = done(command, "ok");
            let shown = if let Some(src) = t {
                let t = parse_type(&src, &lat).map_err(Failure::parse)?;
                let r = match dir {
                    Direction::DccToDccd => weaken_translate(&t),
                    Direction::DccdToDcc => volpano_translate(&t),
                }
                .map_err(|e| Failure::usage(e.to_string()))?;
                let s = show_type(&lat, &r);
                o.ty = Some(s.clone());
                s
            } else {
                let e = term(&read_input(&input)?)?;
                let r = match dir {
                    Direction::DccToDccd => weaken_translate(&e),
                    Direction::DccdToDcc => volpano_translate(&e),
                }
                .map_err(|e| Failure::usage(e.to_string()))?;
                let s = show_term(&lat, &r);
                o.term = Some(s.clone());
                s
            };
            Ok((0, o, format!("{shown}\n")))
        }
        Cmd::Blame { ty: t } => {
            let t = ty(&t)?;
            let b = blame_of(&lat, &t);
            let level = lat.name(lat.beta_inv(b).expect("blames have no level component")).to_string();
            let mut o = done(command, "ok");
            o.blame = Some(format!("!{level}"));
            o.level = Some(level.clone());
            Ok((0, o, format!("!{level} (level {level})\n")))
        }
        Cmd::Leak { level, ty: t } => {
            let (l, t) = (index(&level)?, parse_type(&t, &lat).map_err(Failure::parse)?);
            let e = leak_gen(&lat, l, &t).map_err(|e| Failure::usage(e.to_string()))?;
            let shown = show_term(&lat, &e);
            let mut o = done(command, "ok");
            o.term = Some(shown.clone());
            Ok((0, o, format!("{shown}\n")))
        }
        Cmd::Corpus { action: CorpusAction::List } => {
            let examples = corpus::corpus();
            let mut text = String::new();
            for ex in &examples {
                let expected = match ex.expected {
                    corpus::Verdict::Accept(t) => format!("accept {t}"),
                    corpus::Verdict::Reject => "reject".to_string(),
                };
                text.push_str(&format!("{:<12} {:<8} {:<6} {expected}\n", ex.name, ex.lattice, ex.system.to_string()));
            }
            let mut o = done(command, "ok");
            o.examples = Some(serde_json::to_value(&examples).expect("serializable"));
            Ok((0, o, text))
        }
        Cmd::Corpus { action: CorpusAction::Run } => {
            let outcomes: Vec<Outcome> = corpus::run_corpus(Strategy::default());
            let all = outcomes.iter().all(|o| o.passed);
            let mut text = String::new();
            for o in &outcomes {
                let got = o.actual_type.clone().or_else(|| o.error.clone()).unwrap_or_default();
                text.push_str(&format!("{} {:<12} {got}\n", if o.passed { "ok  " } else { "FAIL" }, o.name));
            }
            let mut o = done(command, if all { "ok" } else { "failed" });
            o.examples = Some(serde_json::to_value(&outcomes).expect("serializable"));
            Ok((if all { 0 } else { 1 }, o, text))
        }
    }
}

fn boolean(command: &'static str, r: bool) -> Done {
    let o = done(command, if r { "true" } else { "false" });
    (if r { 0 } else { 1 }, o, format!("{r}\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("dcc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_verdicts() {
        let (code, out, _) = call(&["check", "--system", "dccd", "-e", "fun x:W[H](unit+unit). bind y = x in y"]);
        assert_eq!(code, 1);
        assert!(out.contains("T^D-bind side condition failed"), "{out}");
        let (code, out, _) = call(&["check", "--system", "dcc", "-e", "eta[H] ()"]);
        assert_eq!((code, out.as_str()), (0, "T[H](unit)\n"));
    }

    #[test]
    fn oracles_and_blame() {
        let (code, out, _) =
            call(&["equiv", "--level", "L", "--type", "T[H](unit+unit)", "eta[H] inj1 ()", "eta[H] inj2 ()"]);
        assert_eq!((code, out.as_str()), (0, "true\n"));
        let (code, _, _) = call(&["equiv", "--level", "L", "--type", "unit+unit", "inj1 ()", "inj2 ()"]);
        assert_eq!(code, 1);
        let (code, out, _) = call(&["blame", "-t", "T[!H](unit+unit)"]);
        assert_eq!((code, out.as_str()), (0, "!H (level H)\n"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["check", "-e", "()"]).0, 2);
        assert_eq!(call(&["check", "--system", "dcc", "-e", "fun x"]).0, 2);
        assert_eq!(call(&["check", "--system", "dcc", "--lattice", "/nonexistent", "-e", "()"]).0, 2);
    }

    #[test]
    fn json_is_tagged() {
        let (code, out, _) = call(&["--json", "check", "--system", "dcc", "-e", "fun x"]);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["verdict"], "error");
        assert!(v["span"]["start"].is_number());
        let (_, out, _) = call(&["check", "--json", "--system", "dcc", "-e", "fun x:T[H](unit+unit). bind y = x in y"]);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["verdict"], "rejected");
        assert_eq!(v["error"]["kind"], "side_condition_failed");
    }

    #[test]
    fn corpus_runs_clean() {
        let (code, out, _) = call(&["corpus", "run"]);
        assert_eq!(code, 0, "{out}");
        assert!(call(&["corpus", "list"]).1.contains("switch"));
    }
}
