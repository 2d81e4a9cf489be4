use tcc_core::fd::{elab_fd_type, fd_typecheck_dict, fd_typecheck_expr, FdErrorKind};
use tcc_core::source::{typecheck_program, Limits};
use tcc_core::syntax::{FdDict, FdExpr, FdTypingEnv, MethodEnv};
use tcc_core::target::tgt_typecheck;

mod common;

use common::program;

const CORPUS: [&str; 5] = ["P1.tc", "P2.tc", "P3.tc", "P4.tc", "Grammar.tc"];

#[test]
fn target_types_are_elaborated_intermediate_types() {
    let empty = FdTypingEnv::new();
    for name in CORPUS {
        let t = typecheck_program(&program(name), Limits::default()).unwrap();
        for alt in &t.fd_elabs.alternatives {
            let (ty, te) = fd_typecheck_expr(&alt.sigma, &t.tc, &empty, &alt.expr).unwrap();
            let want = elab_fd_type(&t.tc, &empty, &ty).unwrap();
            assert_eq!(tgt_typecheck(&Default::default(), &te).unwrap(), want, "{name}");
        }
    }
}

#[test]
fn elaboration_is_repeatable_and_order_independent() {
    let empty = FdTypingEnv::new();
    for name in CORPUS {
        let t = typecheck_program(&program(name), Limits::default()).unwrap();
        let once: Vec<String> = t
            .fd_elabs
            .alternatives
            .iter()
            .map(|a| fd_typecheck_expr(&a.sigma, &t.tc, &empty, &a.expr).unwrap().1.to_string())
            .collect();
        for _ in 0..5 {
            let mut rev: Vec<String> = t
                .fd_elabs
                .alternatives
                .iter()
                .rev()
                .map(|a| fd_typecheck_expr(&a.sigma, &t.tc, &empty, &a.expr).unwrap().1.to_string())
                .collect();
            rev.reverse();
            assert_eq!(rev, once, "{name}");
        }
    }
}

fn dicts_in(e: &FdExpr, out: &mut Vec<FdDict>) {
    match e {
        FdExpr::True | FdExpr::False | FdExpr::Var(_) => {}
        FdExpr::Lam(_, _, b) | FdExpr::DLam(_, _, b) | FdExpr::TyLam(_, b) | FdExpr::TyApp(b, _) => dicts_in(b, out),
        FdExpr::App(f, a) | FdExpr::Let(_, _, f, a) => {
            dicts_in(f, out);
            dicts_in(a, out);
        }
        FdExpr::DApp(f, d) => {
            dicts_in(f, out);
            out.push(d.clone());
        }
        FdExpr::Method(d, _) => out.push(d.clone()),
    }
}

fn ctors(d: &FdDict, out: &mut Vec<String>) {
    if let FdDict::Con { ctor, dicts, .. } = d {
        out.push(ctor.clone());
        for d in dicts {
            ctors(d, out);
        }
    }
}

#[test]
fn removing_a_used_constructor_breaks_dictionary_typing() {
    let empty = FdTypingEnv::new();
    for name in CORPUS {
        let t = typecheck_program(&program(name), Limits::default()).unwrap();
        for alt in &t.fd_elabs.alternatives {
            let mut ds = Vec::new();
            dicts_in(&alt.expr, &mut ds);
            for d in ds.iter().filter(|d| matches!(d, FdDict::Con { .. })) {
                fd_typecheck_dict(&alt.sigma, &t.tc, &empty, d).unwrap();
                let mut used = Vec::new();
                ctors(d, &mut used);
                for c in used {
                    let sigma =
                        MethodEnv { entries: alt.sigma.entries.iter().filter(|e| e.ctor != c).cloned().collect() };
                    let err = fd_typecheck_dict(&sigma, &t.tc, &empty, d).unwrap_err();
                    assert!(
                        matches!(err.kind, FdErrorKind::UnknownConstructor | FdErrorKind::PrefixViolation),
                        "{name}: {d} without {c}: {err}"
                    );
                }
            }
        }
    }
}

#[test]
fn moving_a_dependency_later_is_a_prefix_violation() {
    // In P2 the body of the Sub1 instance for Bool calls the Base instance.
    let t = typecheck_program(&program("P2.tc"), Limits::default()).unwrap();
    let mut sigma = (*t.fd_elabs.alternatives[0].sigma).clone();
    let base = sigma.entries.remove(0);
    sigma.entries.push(base);
    let d = tcc_core::parser::parse_fd_dict("D2_Sub1").unwrap();
    let err = fd_typecheck_dict(&sigma, &t.tc, &FdTypingEnv::new(), &d).unwrap_err();
    assert_eq!(err.kind, FdErrorKind::PrefixViolation, "{err}");
}
