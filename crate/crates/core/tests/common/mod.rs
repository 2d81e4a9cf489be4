#![allow(dead_code)]

use std::path::PathBuf;

use tcc_core::fd::fd_typecheck_dict;
use tcc_core::parser::{parse_program, parse_tgt_expr};
use tcc_core::source::{typecheck_program, Limits};
use tcc_core::syntax::{
    Decl, FdBinding, FdClassEnv, FdConstraintScheme, FdDict, FdExpr, FdQ, FdType, FdTypingEnv, MethodEntry, MethodEnv,
    SrcProgram, TgtExpr,
};

pub const POSITIVE: [&str; 4] = ["P1.tc", "P2.tc", "P3.tc", "P4.tc"];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn program(name: &str) -> SrcProgram {
    parse_program(&std::fs::read_to_string(corpus_dir().join(name)).unwrap()).unwrap()
}

pub fn d1(name: &str) -> TgtExpr {
    parse_tgt_expr(&std::fs::read_to_string(corpus_dir().join("D1").join(name)).unwrap()).unwrap()
}

fn sigma_without(prog: &SrcProgram, skip: usize) -> (MethodEnv, FdClassEnv) {
    let decls = prog.decls.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, d)| d.clone()).collect();
    let t = typecheck_program(&SrcProgram { decls, main: prog.main.clone() }, Limits::default()).unwrap();
    ((*t.fd_elabs.alternatives[0].sigma).clone(), t.tc)
}

/// N1's two instances side by side in one method environment, each
/// elaborated on its own since the source checker rejects the pair.
pub fn n1_sigma() -> (MethodEnv, FdClassEnv) {
    let prog = program("N1.tc");
    let insts: Vec<usize> =
        prog.decls.iter().enumerate().filter(|(_, d)| matches!(d, Decl::Instance(_))).map(|(i, _)| i).collect();
    let (mut sigma, tc) = sigma_without(&prog, insts[1]);
    let (other, _) = sigma_without(&prog, insts[0]);
    let mut second = other.entries.last().unwrap().clone();
    second.ctor = format!("D{}_{}", sigma.len() + 1, second.scheme.head.class);
    sigma.entries.push(second);
    (sigma, tc)
}

/// The intermediate counterpart of the two record environments in D1: two
/// `Base Bool` dictionaries whose methods disagree.
pub fn discern_sigma() -> (MethodEnv, FdClassEnv) {
    let t = typecheck_program(&program("P2.tc"), Limits::default()).unwrap();
    let base = |ctor: &str, result: FdExpr| MethodEntry {
        ctor: ctor.into(),
        scheme: FdConstraintScheme {
            binders: vec![],
            context: vec![],
            head: FdQ { class: "Base".into(), arg: FdType::Bool },
        },
        method: "base".into(),
        imp: FdExpr::lam("u", FdType::Bool, result),
    };
    (MethodEnv { entries: vec![base("D1_Base", FdExpr::True), base("D2_Base", FdExpr::False)] }, t.tc)
}

/// A class environment over classes `C0..Cn`; `supers[i]` lists the
/// superclasses of `Ci` by index, each smaller than `i`.
pub fn dag_env(supers: &[Vec<usize>]) -> tcc_core::source::ClassEnv {
    use tcc_core::source::{ClassEntry, ClassEnv};
    use tcc_core::syntax::{SrcMono, SrcScheme};
    ClassEnv {
        entries: supers
            .iter()
            .enumerate()
            .map(|(i, ss)| ClassEntry {
                method: format!("m{i}"),
                superclasses: ss.iter().map(|s| format!("C{s}")).collect(),
                class: format!("C{i}"),
                class_var: "a".into(),
                method_scheme: SrcScheme::mono(SrcMono::arrow(SrcMono::var("a"), SrcMono::Bool)),
            })
            .collect(),
    }
}

/// Superclass closure by rewriting: the leftmost unexpanded constraint is
/// replaced by its superclasses, unexpanded, followed by itself, expanded.
pub fn closure_oracle(
    gc: &tcc_core::source::ClassEnv,
    qs: &[tcc_core::syntax::SrcConstraint],
) -> Vec<tcc_core::syntax::SrcConstraint> {
    use tcc_core::syntax::SrcConstraint;
    let mut items: Vec<(SrcConstraint, bool)> = qs.iter().map(|q| (q.clone(), false)).collect();
    while let Some(i) = items.iter().position(|(_, done)| !done) {
        let q = items[i].0.clone();
        let supers = &gc.by_class(&q.class).unwrap().superclasses;
        let mut expanded: Vec<(SrcConstraint, bool)> =
            supers.iter().map(|s| (SrcConstraint::new(s, q.arg.clone()), false)).collect();
        expanded.push((q, true));
        items.splice(i..=i, expanded);
    }
    items.into_iter().map(|(q, _)| q).collect()
}

/// Counts elaborations by brute force over one elaboration: at every
/// dictionary position of the main term and of each implementation, every
/// dictionary term of the same constraint that can be assembled from the
/// dictionary variables in scope and the constructors visible there is
/// tried against the intermediate typechecker. Positions vary
/// independently, so the count is the product over positions.
pub fn derivation_count(sigma: &MethodEnv, tc: &FdClassEnv, main: &FdExpr) -> usize {
    let mut sites = Vec::new();
    collect_sites(main, &mut FdTypingEnv::new(), sigma.len(), &mut sites);
    for (i, entry) in sigma.entries.iter().enumerate() {
        collect_sites(&entry.imp, &mut FdTypingEnv::new(), i, &mut sites);
    }
    sites
        .iter()
        .map(|(env, visible, d)| {
            let prefix = MethodEnv { entries: sigma.entries[..*visible].to_vec() };
            let q = fd_typecheck_dict(&prefix, tc, env, d).unwrap().0;
            let mut types = Vec::new();
            subterms(&q.arg, &mut types);
            all_dicts(&prefix, env, &types, 3)
                .into_iter()
                .filter(|c| fd_typecheck_dict(&prefix, tc, env, c).is_ok_and(|(p, _)| p == q))
                .count()
        })
        .product()
}

type Site = (FdTypingEnv, usize, FdDict);

fn collect_sites(e: &FdExpr, env: &mut FdTypingEnv, visible: usize, out: &mut Vec<Site>) {
    match e {
        FdExpr::True | FdExpr::False | FdExpr::Var(_) => {}
        FdExpr::Lam(x, t, b) => {
            env.entries.push(FdBinding::Term(x.clone(), t.clone()));
            collect_sites(b, env, visible, out);
            env.entries.pop();
        }
        FdExpr::DLam(d, q, b) => {
            env.entries.push(FdBinding::Dict(d.clone(), q.clone()));
            collect_sites(b, env, visible, out);
            env.entries.pop();
        }
        FdExpr::TyLam(a, b) => {
            env.entries.push(FdBinding::TyVar(a.clone()));
            collect_sites(b, env, visible, out);
            env.entries.pop();
        }
        FdExpr::TyApp(b, _) => collect_sites(b, env, visible, out),
        FdExpr::App(f, a) => {
            collect_sites(f, env, visible, out);
            collect_sites(a, env, visible, out);
        }
        FdExpr::Let(x, t, e1, e2) => {
            collect_sites(e1, env, visible, out);
            env.entries.push(FdBinding::Term(x.clone(), t.clone()));
            collect_sites(e2, env, visible, out);
            env.entries.pop();
        }
        FdExpr::DApp(f, d) => {
            collect_sites(f, env, visible, out);
            out.push((env.clone(), visible, d.clone()));
        }
        FdExpr::Method(d, _) => out.push((env.clone(), visible, d.clone())),
    }
}

fn subterms(t: &FdType, out: &mut Vec<FdType>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    if let FdType::Arrow(a, b) = t {
        subterms(a, out);
        subterms(b, out);
    }
}

/// Every dictionary term of nesting depth at most `depth`, well-typed or not.
fn all_dicts(sigma: &MethodEnv, env: &FdTypingEnv, types: &[FdType], depth: usize) -> Vec<FdDict> {
    let mut out: Vec<FdDict> = Vec::new();
    for b in &env.entries {
        if let FdBinding::Dict(d, _) = b {
            if !out.contains(&FdDict::var(d)) {
                out.push(FdDict::var(d));
            }
        }
    }
    if depth == 0 {
        return out;
    }
    let smaller = all_dicts(sigma, env, types, depth - 1);
    for entry in &sigma.entries {
        let mut type_choices: Vec<Vec<FdType>> = vec![vec![]];
        for _ in &entry.scheme.binders {
            type_choices = type_choices
                .into_iter()
                .flat_map(|ts| types.iter().map(move |t| [ts.clone(), vec![t.clone()]].concat()))
                .collect();
        }
        let mut dict_choices: Vec<Vec<FdDict>> = vec![vec![]];
        for _ in &entry.scheme.context {
            dict_choices = dict_choices
                .into_iter()
                .flat_map(|ds| smaller.iter().map(move |d| [ds.clone(), vec![d.clone()]].concat()))
                .collect();
        }
        for ts in &type_choices {
            for ds in &dict_choices {
                out.push(FdDict::con(&entry.ctor, ts.clone(), ds.clone()));
            }
        }
    }
    out
}
