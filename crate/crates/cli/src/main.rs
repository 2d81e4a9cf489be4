use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tcc_core::fd::{fd_eval, fd_typecheck_expr};
use tcc_core::fuel::{EvalError, Fuel};
use tcc_core::harness::{
    check_coherence, check_decomposition, check_metatheory, composed_elaborations, generate_fd_term, HarnessError,
    HarnessOptions, MetaReport, Strategy,
};
use tcc_core::parser::{parse_context, parse_program};
use tcc_core::source::{typecheck_program, Limits, ProgramTyping};
use tcc_core::syntax::{Decl, FdTypingEnv, SrcCtxExpr, SrcProgram, TgtExpr};
use tcc_core::target::tgt_eval;

#[derive(Parser)]
#[command(name = "tcc", version, about = "Type checker and elaborator for a small language with type classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a program and print the type of main
    Check(Opts),
    /// Print elaborations of main
    Elaborate(Opts),
    /// Evaluate the first elaboration (or all, with --all)
    Run(Opts),
    /// Evaluate every elaboration along both routes and compare the results
    Coherence(Opts),
    /// Compare direct target elaborations with composed ones
    Decompose(Opts),
    /// Re-typecheck every evaluation step of every intermediate elaboration
    Meta(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Source program
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Stage::Fd)]
    stage: Stage,
    /// Which target elaboration to use when --stage target
    #[arg(long, value_enum, default_value_t = Mode::Direct)]
    mode: Mode,
    /// Use every elaboration instead of the first
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = Limits::DEFAULT_DEPTH)]
    max_depth: usize,
    #[arg(long, default_value_t = Limits::DEFAULT_ELABORATIONS)]
    max_elaborations: usize,
    #[arg(long, default_value_t = Fuel::DEFAULT)]
    fuel: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory of `.ctx` files; coherence is also checked inside each context
    #[arg(long)]
    contexts_dir: Option<PathBuf>,
    /// Accepted for compatibility. Wrappers with no binders have no target
    /// representation, so output is unchanged.
    #[arg(long)]
    emit_degenerate_wrappers: bool,
    /// Seed for generated terms (meta --fuzz)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of generated terms to check in addition to the program (meta)
    #[arg(long, default_value_t = 0)]
    fuzz: u64,
    /// Process elaborations one at a time
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    Fd,
    Target,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Direct,
    Composed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonReport {
    program: String,
    #[serde(rename = "type")]
    ty: String,
    elaborations: Vec<String>,
    results: Vec<String>,
    coherent: bool,
    truncated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Exit {
    Ok = 0,
    TypeError = 1,
    Violation = 2,
    Limit = 3,
}

/// Why a command stopped early.
struct Failure {
    exit: Exit,
    message: String,
}

impl Failure {
    fn type_error(message: impl ToString) -> Self {
        Failure { exit: Exit::TypeError, message: message.to_string() }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let exit = match e {
            EvalError::FuelExhausted { .. } => Exit::Limit,
            EvalError::Stuck { .. } => Exit::Violation,
        };
        Failure { exit, message: e.to_string() }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Eval(e) => e.into(),
            other => Failure::type_error(other),
        }
    }
}

/// What a command produced: text for humans, the JSON report, and how the
/// run went.
struct Outcome {
    text: String,
    report: JsonReport,
    exit: Exit,
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        let off = std::env::var("TCC_COLOR").is_ok_and(|v| v == "0");
        Style { color: !off && std::io::stderr().is_terminal() }
    }

    fn label(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    let (cmd, opts) = match &cli.command {
        Command::Check(o) => ("check", o),
        Command::Elaborate(o) => ("elaborate", o),
        Command::Run(o) => ("run", o),
        Command::Coherence(o) => ("coherence", o),
        Command::Decompose(o) => ("decompose", o),
        Command::Meta(o) => ("meta", o),
    };
    match execute(cmd, opts) {
        Ok(out) => {
            match opts.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.report).unwrap()),
            }
            if out.report.truncated {
                eprintln!(
                    "{} elaboration enumeration truncated (--max-depth {}, --max-elaborations {}); result is inconclusive",
                    style.label("33", "notice:"),
                    opts.max_depth,
                    opts.max_elaborations
                );
            }
            ExitCode::from(out.exit as u8)
        }
        Err(f) => {
            eprintln!("{} {}", style.label("31;1", "error:"), f.message);
            ExitCode::from(f.exit as u8)
        }
    }
}

fn execute(cmd: &str, opts: &Opts) -> Result<Outcome, Failure> {
    let path = opts.file.display().to_string();
    let text = std::fs::read_to_string(&opts.file).map_err(|e| Failure::type_error(format!("{path}: {e}")))?;
    let prog = parse_program(&text).map_err(|e| Failure::type_error(format!("{path}:{e}")))?;
    let limits = Limits { max_resolution_depth: opts.max_depth, max_elaborations: opts.max_elaborations };
    let t = typecheck_program(&prog, limits).map_err(Failure::type_error)?;
    let truncated = t.fd_elabs.truncated || t.tgt_elabs.truncated;
    let mut out = Outcome {
        text: String::new(),
        report: JsonReport {
            program: path,
            ty: t.main_type.to_string(),
            elaborations: vec![],
            results: vec![],
            coherent: true,
            truncated,
        },
        exit: if truncated { Exit::Limit } else { Exit::Ok },
    };
    match cmd {
        "check" => check(&prog, &t, &mut out),
        "elaborate" => elaborate(opts, &t, &mut out)?,
        "run" => run(opts, &t, &mut out)?,
        "coherence" => coherence(opts, &prog, limits, &mut out)?,
        "decompose" => decompose(&prog, &t, limits, &mut out)?,
        "meta" => meta(opts, &t, &mut out),
        _ => unreachable!(),
    }
    Ok(out)
}

fn check(prog: &SrcProgram, t: &ProgramTyping, out: &mut Outcome) {
    for d in &prog.decls {
        let line = match d {
            Decl::Class(c) => {
                let supers: Vec<String> = c.superclasses.iter().map(|s| format!("{s} {}", c.class_var)).collect();
                match supers.len() {
                    0 => format!("class {} {}", c.class, c.class_var),
                    1 => format!("class {} => {} {}", supers[0], c.class, c.class_var),
                    _ => format!("class ({}) => {} {}", supers.join(", "), c.class, c.class_var),
                }
            }
            Decl::Instance(i) => {
                let ctx: Vec<String> = i.context.iter().map(|q| q.to_string()).collect();
                let head = tcc_core::syntax::SrcConstraint::new(&i.class, i.head.clone());
                match ctx.len() {
                    0 => format!("instance {head}"),
                    1 => format!("instance {} => {head}", ctx[0]),
                    _ => format!("instance ({}) => {head}", ctx.join(", ")),
                }
            }
        };
        out.text.push_str(&line);
        out.text.push('\n');
    }
    out.text.push_str(&format!("main : {}\n", t.main_type));
}

/// Elaborations at the requested stage and mode, in enumeration order.
fn elaborations(opts: &Opts, t: &ProgramTyping) -> Result<Vec<String>, Failure> {
    let mut terms: Vec<String> = match (opts.stage, opts.mode) {
        (Stage::Fd, _) => t.fd_elabs.alternatives.iter().map(|a| a.expr.to_string()).collect(),
        (Stage::Target, Mode::Direct) => t.tgt_elabs.alternatives.iter().map(|e| e.to_string()).collect(),
        (Stage::Target, Mode::Composed) => {
            composed_elaborations(t).map_err(Failure::type_error)?.iter().map(|e| e.to_string()).collect()
        }
    };
    if !opts.all {
        terms.truncate(1);
    }
    Ok(terms)
}

fn elaborate(opts: &Opts, t: &ProgramTyping, out: &mut Outcome) -> Result<(), Failure> {
    let terms = elaborations(opts, t)?;
    for e in &terms {
        out.text.push_str(&format!("{e}\n"));
    }
    out.report.elaborations = terms;
    Ok(())
}

fn run(opts: &Opts, t: &ProgramTyping, out: &mut Outcome) -> Result<(), Failure> {
    let limit = if opts.all { usize::MAX } else { 1 };
    let mut pairs: Vec<(String, String)> = Vec::new();
    match (opts.stage, opts.mode) {
        (Stage::Fd, _) => {
            for a in t.fd_elabs.alternatives.iter().take(limit) {
                pairs.push((a.expr.to_string(), fd_eval(&a.sigma, &a.expr, opts.fuel)?.to_string()));
            }
        }
        (Stage::Target, mode) => {
            let terms: Vec<TgtExpr> = match mode {
                Mode::Direct => t.tgt_elabs.alternatives.iter().take(limit).cloned().collect(),
                Mode::Composed => {
                    let empty = FdTypingEnv::new();
                    let mut v = Vec::new();
                    for a in t.fd_elabs.alternatives.iter().take(limit) {
                        v.push(fd_typecheck_expr(&a.sigma, &t.tc, &empty, &a.expr).map_err(Failure::type_error)?.1);
                    }
                    v
                }
            };
            for e in terms {
                let v = tgt_eval(&e, opts.fuel)?;
                pairs.push((e.to_string(), v.to_string()));
            }
        }
    }
    if pairs.is_empty() && !out.report.truncated {
        return Err(Failure::type_error("main has no elaboration"));
    }
    for (_, v) in &pairs {
        out.text.push_str(&format!("{v}\n"));
    }
    (out.report.elaborations, out.report.results) = pairs.into_iter().unzip();
    Ok(())
}

fn contexts(dir: &Path) -> Result<Vec<SrcCtxExpr>, Failure> {
    let read_err = |e: std::io::Error| Failure::type_error(format!("{}: {e}", dir.display()));
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(read_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ctx"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(read_err)?;
            parse_context(&text).map_err(|e| Failure::type_error(format!("{}:{e}", p.display())))
        })
        .collect()
}

fn strategy(opts: &Opts) -> Strategy {
    if opts.sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    }
}

fn coherence(opts: &Opts, prog: &SrcProgram, limits: Limits, out: &mut Outcome) -> Result<(), Failure> {
    let ctxs = match &opts.contexts_dir {
        Some(dir) => contexts(dir)?,
        None => vec![],
    };
    let hopts = HarnessOptions { limits, fuel: opts.fuel, strategy: strategy(opts) };
    let r = check_coherence(&out.report.program, prog, &hopts, Some(&ctxs))?;
    out.text = r.to_text();
    out.report.elaborations = r.elaborations;
    out.report.results = r.results;
    out.report.coherent = r.all_kleene_equal;
    out.report.truncated = r.truncated;
    out.exit = if !r.all_kleene_equal {
        Exit::Violation
    } else if r.truncated {
        Exit::Limit
    } else {
        Exit::Ok
    };
    Ok(())
}

fn decompose(prog: &SrcProgram, t: &ProgramTyping, limits: Limits, out: &mut Outcome) -> Result<(), Failure> {
    let r = check_decomposition(prog, limits)?;
    out.text = r.to_text();
    let composed = composed_elaborations(t).map_err(Failure::type_error)?;
    out.report.elaborations = t
        .tgt_elabs
        .alternatives
        .iter()
        .map(|e| format!("direct: {e}"))
        .chain(composed.iter().map(|e| format!("composed: {e}")))
        .collect();
    out.report.coherent = r.equal();
    if !r.equal() {
        out.exit = Exit::Violation;
    }
    Ok(())
}

fn meta(opts: &Opts, t: &ProgramTyping, out: &mut Outcome) {
    let mut reports: Vec<(String, MetaReport)> = t
        .fd_elabs
        .alternatives
        .iter()
        .map(|a| (a.expr.to_string(), check_metatheory(&a.sigma, &t.tc, &a.expr, opts.fuel)))
        .collect();
    for (i, (e, r)) in reports.iter().enumerate() {
        out.text.push_str(&format!("elaboration {}: {e}\n{}", i + 1, r.to_text()));
    }
    if opts.fuzz > 0 {
        let (sigma, tc) = match t.fd_elabs.alternatives.first() {
            Some(a) => (a.sigma.as_ref().clone(), &t.tc),
            None => (Default::default(), &t.tc),
        };
        let generated: Vec<(String, MetaReport)> = (0..opts.fuzz)
            .map(|i| {
                let e = generate_fd_term(opts.seed.wrapping_add(i), 14, &sigma, tc);
                (e.to_string(), check_metatheory(&sigma, tc, &e, opts.fuel))
            })
            .collect();
        let steps: u64 = generated.iter().map(|(_, r)| r.steps_checked).sum();
        let bad: Vec<&(String, MetaReport)> = generated.iter().filter(|(_, r)| !r.clean()).collect();
        out.text.push_str(&format!(
            "generated: {} terms from seed {}, {steps} steps, {} failing\n",
            opts.fuzz,
            opts.seed,
            bad.len()
        ));
        for (e, r) in bad {
            out.text.push_str(&format!("  {e}\n  {}", r.to_text()));
        }
        reports.extend(generated);
    }
    let safe = reports.iter().all(|(_, r)| r.preservation_ok && r.progress_ok);
    let fueled = reports.iter().all(|(_, r)| r.fuel_ok);
    out.report.coherent = safe;
    (out.report.elaborations, out.report.results) =
        reports.into_iter().map(|(e, r)| (e, r.to_text().trim_end().to_string())).unzip();
    out.exit = if !safe {
        Exit::Violation
    } else if !fueled || out.report.truncated {
        Exit::Limit
    } else {
        Exit::Ok
    };
}
