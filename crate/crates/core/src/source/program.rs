use std::collections::HashSet;
use std::sync::Arc;

use super::relations::{check_constraint, check_mono, check_scheme, closure, unambig_constraint, unify_mono};
use super::rules::binder_allowed;
use super::to_fd::{elab_env, ToFd};
use super::{
    Alts, ClassEntry, ClassEnv, ElabSet, Limits, ProgramCtx, ProgramEntry, SrcBinding, SrcErrorKind, SrcResult,
    SrcTypeError, TgtElaborator, TypingEnv,
};
use crate::syntax::{
    prime_away_set, ClassDecl, Decl, FdClassEnv, FdExpr, InstDecl, MethodEnv, Name, SrcConstraint, SrcConstraintScheme,
    SrcExpr, SrcMono, SrcProgram, TgtExpr,
};

/// Turns variables naming a declared method into method occurrences, and
/// rejects binders that would shadow a method.
pub fn resolve_names(gc: &ClassEnv, e: &SrcExpr) -> SrcResult<SrcExpr> {
    Ok(match e {
        SrcExpr::True | SrcExpr::False | SrcExpr::Method(_) => e.clone(),
        SrcExpr::Var(x) if gc.is_method(x) => SrcExpr::Method(x.clone()),
        SrcExpr::Var(_) => e.clone(),
        SrcExpr::Lam(x, b) => {
            binder_allowed(gc, x)?;
            SrcExpr::lam(x, resolve_names(gc, b)?)
        }
        SrcExpr::App(f, a) => SrcExpr::app(resolve_names(gc, f)?, resolve_names(gc, a)?),
        SrcExpr::Let(x, s, e1, e2) => {
            binder_allowed(gc, x)?;
            SrcExpr::let_(x, s.clone(), resolve_names(gc, e1)?, resolve_names(gc, e2)?)
        }
        SrcExpr::Ann(inner, t) => SrcExpr::ann(resolve_names(gc, inner)?, t.clone()),
    })
}

pub fn typecheck_class(gc: &ClassEnv, d: &ClassDecl) -> SrcResult<ClassEntry> {
    if gc.by_class(&d.class).is_some() {
        return Err(SrcTypeError::new(SrcErrorKind::DuplicateClass, format!("class `{}` is declared twice", d.class)));
    }
    if gc.is_method(&d.method) {
        return Err(SrcTypeError::new(
            SrcErrorKind::DuplicateMethod,
            format!("method `{}` is already declared", d.method),
        ));
    }
    for s in &d.superclasses {
        if gc.by_class(s).is_none() {
            return Err(super::relations::unknown_class(s));
        }
    }
    let scheme = &d.method_scheme;
    if scheme.binders.contains(&d.class_var) {
        return Err(SrcTypeError::new(
            SrcErrorKind::Rebinding,
            format!("method `{}` rebinds the class variable `{}`", d.method, d.class_var),
        ));
    }
    let env = TypingEnv { entries: vec![SrcBinding::TyVar(d.class_var.clone())] };
    check_scheme(gc, &env, scheme)?;
    let fv = scheme.head.free_vars();
    if let Some(missing) = std::iter::once(&d.class_var).chain(&scheme.binders).find(|a| !fv.contains(a)) {
        return Err(SrcTypeError::new(
            SrcErrorKind::Ambiguity,
            format!("method `{} : {}` is ambiguous: `{missing}` does not occur in `{}`", d.method, scheme, scheme.head),
        ));
    }
    Ok(ClassEntry {
        method: d.method.clone(),
        superclasses: d.superclasses.clone(),
        class: d.class.clone(),
        class_var: d.class_var.clone(),
        method_scheme: scheme.clone(),
    })
}

pub fn typecheck_instance(p: &ProgramCtx, gc: &ClassEnv, d: &InstDecl, limits: Limits) -> SrcResult<ProgramEntry> {
    let class = gc.by_class(&d.class).ok_or_else(|| super::relations::unknown_class(&d.class))?;
    if d.method != class.method {
        return Err(SrcTypeError::new(
            SrcErrorKind::WrongMethod,
            format!("instance of `{}` defines `{}`, expected `{}`", d.class, d.method, class.method),
        ));
    }
    let head = SrcConstraint::new(&d.class, d.head.clone());
    let mut binders = d.head.free_vars();
    for q in &d.context {
        for a in q.arg.free_vars() {
            if !binders.contains(&a) {
                binders.push(a);
            }
        }
    }
    let scheme = SrcConstraintScheme { binders: binders.clone(), context: d.context.clone(), head: head.clone() };
    if !unambig_constraint(&scheme) {
        return Err(SrcTypeError::new(
            SrcErrorKind::Ambiguity,
            format!("ambiguous instance context for `{head}`: every type variable must occur in the head"),
        ));
    }
    for q in &d.context {
        check_constraint(gc, &TypingEnv::new(), &binders, q)?;
    }
    check_overlap(p, &binders, &head)?;

    let ctor = format!("D{}_{}", p.entries.len() + 1, d.class);
    let closed = closure(gc, &d.context)?;
    let inst_dicts: Vec<Name> = (1..=closed.len()).map(|i| format!("δ{ctor}_{i}")).collect();
    let mut env = TypingEnv::new();
    env.entries.extend(binders.iter().map(|a| SrcBinding::TyVar(a.clone())));
    env.entries.extend(inst_dicts.iter().zip(&closed).map(|(n, q)| SrcBinding::Dict(n.clone(), q.clone())));

    let resolver = ToFd { gc, p, visible: p.entries.len(), limits };
    for s in &class.superclasses {
        let want = SrcConstraint::new(s, d.head.clone());
        let found = resolver.entail(&env, &want);
        if found.is_empty() {
            let why = if found.truncated { " within the resolution depth limit" } else { "" };
            return Err(SrcTypeError::new(
                SrcErrorKind::Unsatisfiable,
                format!("instance `{head}` needs superclass instance `{want}`, which cannot be resolved{why}"),
            ));
        }
    }

    let avoid: HashSet<Name> = binders.iter().cloned().collect();
    let method_scheme = class.method_scheme.rename_apart(&avoid);
    let inst: std::collections::HashMap<Name, SrcMono> =
        [(class.class_var.clone(), d.head.clone())].into_iter().collect();
    let method_scheme = method_scheme.subst(&inst);
    let method_dicts: Vec<(Name, SrcConstraint)> =
        method_scheme.context.iter().enumerate().map(|(i, q)| (format!("δ{ctor}_m{}", i + 1), q.clone())).collect();
    env.entries.extend(method_scheme.binders.iter().map(|a| SrcBinding::TyVar(a.clone())));
    env.entries.extend(method_dicts.iter().map(|(n, q)| SrcBinding::Dict(n.clone(), q.clone())));

    let body = resolve_names(gc, &d.body)?;
    check_mono(&env, &[], &method_scheme.head)?;
    resolver.check(&env, &body, &method_scheme.head)?;

    Ok(ProgramEntry {
        ctor,
        scheme: SrcConstraintScheme { binders: binders.clone(), context: closed, head },
        method: d.method.clone(),
        local_env: env,
        body,
        inst_dicts,
        method_binders: method_scheme.binders.clone(),
        method_dicts,
        method_type: method_scheme.head,
    })
}

fn check_overlap(p: &ProgramCtx, binders: &[Name], head: &SrcConstraint) -> SrcResult<()> {
    for other in p.entries.iter().filter(|e| e.scheme.head.class == head.class) {
        let mut taken: HashSet<Name> = binders.iter().cloned().collect();
        taken.extend(other.scheme.binders.iter().cloned());
        let mut ren = std::collections::HashMap::new();
        let mut flexible: HashSet<Name> = binders.iter().cloned().collect();
        for b in &other.scheme.binders {
            let fresh = if binders.contains(b) { prime_away_set(b, &taken) } else { b.clone() };
            taken.insert(fresh.clone());
            flexible.insert(fresh.clone());
            ren.insert(b.clone(), SrcMono::var(&fresh));
        }
        let theirs = other.scheme.head.arg.subst(&ren);
        if unify_mono(&head.arg, &theirs, &flexible).is_some() {
            return Err(SrcTypeError::new(
                SrcErrorKind::Overlap,
                format!("overlapping instances: `{head}` overlaps `{}` ({})", other.scheme.head, other.ctor),
            ));
        }
    }
    Ok(())
}

/// One whole-program elaboration into the intermediate language: a method
/// environment together with the main term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdProgramElab {
    pub sigma: Arc<MethodEnv>,
    pub expr: FdExpr,
}

#[derive(Clone, Debug)]
pub struct ProgramTyping {
    pub main_type: SrcMono,
    pub gc: ClassEnv,
    pub p: ProgramCtx,
    /// The main expression after name resolution.
    pub main: SrcExpr,
    pub tc: FdClassEnv,
    pub fd_elabs: ElabSet<FdProgramElab>,
    pub tgt_elabs: ElabSet<TgtExpr>,
}

/// Processes the declarations in order, then elaborates the main expression
/// along both routes.
pub fn typecheck_program(prog: &SrcProgram, limits: Limits) -> SrcResult<ProgramTyping> {
    let mut gc = ClassEnv::new();
    let mut p = ProgramCtx::new();
    for decl in &prog.decls {
        match decl {
            Decl::Class(c) => {
                let entry = typecheck_class(&gc, c)?;
                gc.entries.push(entry);
            }
            Decl::Instance(i) => {
                let entry = typecheck_instance(&p, &gc, i, limits)?;
                p.entries.push(entry);
            }
        }
    }
    let main = resolve_names(&gc, &prog.main)?;
    let env = TypingEnv::new();

    let (main_type, mains) = ToFd { gc: &gc, p: &p, visible: p.entries.len(), limits }.infer(&env, &main)?;
    let envs = elab_env(&p, &gc, &env, limits)?;
    let sigmas: Vec<Arc<MethodEnv>> = envs.sigmas.into_iter().map(Arc::new).collect();
    let mut fd = Vec::new();
    let mut truncated = envs.truncated || mains.truncated;
    'outer: for sigma in &sigmas {
        for e in &mains.items {
            if fd.len() == limits.max_elaborations {
                truncated = true;
                break 'outer;
            }
            fd.push(FdProgramElab { sigma: sigma.clone(), expr: e.clone() });
        }
    }

    let (tgt_type, tgts) = TgtElaborator::new(&p, &gc, limits).infer(&env, &main)?;
    assert_eq!(tgt_type, main_type, "the two elaborations disagree on the type of main");
    let tgts: Alts<TgtExpr> = tgts;

    Ok(ProgramTyping {
        main_type: main_type.clone(),
        tc: envs.tc,
        gc,
        p,
        main,
        fd_elabs: ElabSet { ty: main_type.clone(), alternatives: fd, truncated },
        tgt_elabs: ElabSet { ty: main_type, alternatives: tgts.items, truncated: tgts.truncated },
    })
}
