use serde::Serialize;

use super::{map_ordered, HarnessError, HarnessOptions};
use crate::fd::{fd_eval, fd_typecheck_expr, FdChecker};
use crate::source::{typecheck_program, FdProgramElab, ProgramTyping};
use crate::syntax::{Alpha, FdClassEnv, FdTypingEnv, SrcCtxExpr, SrcMono, SrcProgram, TgtExpr};
use crate::target::tgt_eval;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub program: String,
    pub elab_count_fd: usize,
    pub elab_count_tgt: usize,
    pub truncated: bool,
    pub all_kleene_equal: bool,
    /// The value every elaboration was compared against.
    pub witness: String,
    /// Present iff `all_kleene_equal` is false.
    pub counterexample: Option<(String, String)>,
    /// Every elaboration that was run, in comparison order.
    pub elaborations: Vec<String>,
    /// The value of each entry of `elaborations`.
    pub results: Vec<String>,
}

impl CoherenceReport {
    /// One line per field; stable across runs.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "program: {}\nelaborations: {} fd, {} target\ntruncated: {}\n",
            self.program, self.elab_count_fd, self.elab_count_tgt, self.truncated
        );
        out.push_str(&format!("{} elaborations, all Kleene-equal: {}\n", self.elab_count_fd, self.witness_line()));
        if let Some((a, b)) = &self.counterexample {
            out.push_str(&format!("counterexample:\n  {a}\n  {b}\n"));
        }
        out
    }

    fn witness_line(&self) -> String {
        if self.all_kleene_equal {
            self.witness.clone()
        } else {
            "no".into()
        }
    }
}

/// F_D evaluation result elaborated to the target, next to the result of
/// evaluating the composed target elaboration of the same term.
pub fn value_preservation(
    elab: &FdProgramElab,
    tc: &FdClassEnv,
    fuel: u64,
) -> Result<(TgtExpr, TgtExpr), HarnessError> {
    let empty = FdTypingEnv::new();
    let (_, composed) = fd_typecheck_expr(&elab.sigma, tc, &empty, &elab.expr)?;
    let v = fd_eval(&elab.sigma, &elab.expr, fuel)?;
    let (_, v_tgt) = FdChecker::new(&elab.sigma, tc).expr(&empty, &v)?;
    Ok((v_tgt, tgt_eval(&composed, fuel)?))
}

struct Run {
    label: String,
    value: TgtExpr,
}

fn runs_of(t: &ProgramTyping, opts: &HarnessOptions) -> Result<Vec<Run>, HarnessError> {
    let fd = map_ordered(opts.strategy, &t.fd_elabs.alternatives, |elab| {
        let empty = FdTypingEnv::new();
        let (_, composed) = fd_typecheck_expr(&elab.sigma, &t.tc, &empty, &elab.expr)?;
        let (fd_value, tgt_value) = value_preservation(elab, &t.tc, opts.fuel)?;
        Ok::<_, HarnessError>([
            Run { label: format!("fd: {}", elab.expr), value: fd_value },
            Run { label: format!("composed: {composed}"), value: tgt_value },
        ])
    });
    let direct = map_ordered(opts.strategy, &t.tgt_elabs.alternatives, |e| {
        Ok::<_, HarnessError>(Run { label: format!("direct: {e}"), value: tgt_eval(e, opts.fuel)? })
    });
    let mut runs = Vec::new();
    for pair in fd {
        runs.extend(pair?);
    }
    for r in direct {
        runs.push(r?);
    }
    Ok(runs)
}

fn check_one(name: &str, prog: &SrcProgram, opts: &HarnessOptions) -> Result<CoherenceReport, HarnessError> {
    let t = typecheck_program(prog, opts.limits)?;
    if t.main_type != SrcMono::Bool {
        return Err(HarnessError::NotBool(t.main_type));
    }
    let runs = runs_of(&t, opts)?;
    let first = runs.first();
    let odd = first.and_then(|f| runs.iter().find(|r| !r.value.alpha_eq(&f.value)).map(|r| (f, r)));
    Ok(CoherenceReport {
        program: name.to_string(),
        elab_count_fd: t.fd_elabs.alternatives.len(),
        elab_count_tgt: t.tgt_elabs.alternatives.len(),
        truncated: t.fd_elabs.truncated || t.tgt_elabs.truncated,
        all_kleene_equal: odd.is_none(),
        witness: first.map(|f| f.value.to_string()).unwrap_or_default(),
        counterexample: odd.map(|(a, b)| (a.label.clone(), b.label.clone())),
        elaborations: runs.iter().map(|r| r.label.clone()).collect(),
        results: runs.iter().map(|r| r.value.to_string()).collect(),
    })
}

/// Runs every elaboration of `prog` along both routes and compares all
/// results against the first. With contexts, the check is repeated for each
/// program obtained by plugging the main expression into a context, and the
/// reports are merged in context order.
pub fn check_coherence(
    name: &str,
    prog: &SrcProgram,
    opts: &HarnessOptions,
    contexts: Option<&[SrcCtxExpr]>,
) -> Result<CoherenceReport, HarnessError> {
    let contexts = match contexts {
        Some(cs) if !cs.is_empty() => cs,
        _ => return check_one(name, prog, opts),
    };
    let mut merged: Option<CoherenceReport> = None;
    for ctx in contexts {
        let plugged = SrcProgram { decls: prog.decls.clone(), main: ctx.plug(&prog.main) };
        let r = check_one(name, &plugged, opts)?;
        merged = Some(match merged {
            None => r,
            Some(mut m) => {
                m.elab_count_fd += r.elab_count_fd;
                m.elab_count_tgt += r.elab_count_tgt;
                m.truncated |= r.truncated;
                if m.counterexample.is_none() {
                    m.counterexample = r.counterexample;
                }
                m.all_kleene_equal &= r.all_kleene_equal;
                if !m.witness.split(", ").any(|w| w == r.witness) {
                    m.witness = format!("{}, {}", m.witness, r.witness);
                }
                m.elaborations.extend(r.elaborations);
                m.results.extend(r.results);
                m
            }
        });
    }
    Ok(merged.expect("at least one context"))
}
