//! The type-level halves of the typing rules. Elaboration is left to the
//! two backends; everything here is about which types and constraints a
//! rule produces.

use std::collections::{HashMap, HashSet};

use super::relations::{check_mono, check_scheme, closure, match_mono, unambig_scheme};
use super::{ClassEnv, SrcBinding, SrcErrorKind, SrcResult, SrcTypeError, TypingEnv};
use crate::syntax::{prime_away, Name, SrcConstraint, SrcExpr, SrcMono, SrcScheme};

#[derive(Debug)]
pub(crate) struct LetRule {
    /// Binders of the annotation, renamed away from type variables in scope.
    pub binders: Vec<Name>,
    /// Closure of the annotated context, one dictionary variable each.
    pub dicts: Vec<(Name, SrcConstraint)>,
    pub head: SrcMono,
    /// The bound term, with annotations adjusted to any binder renaming.
    pub bound: SrcExpr,
    /// Environment for the bound term.
    pub bound_env: TypingEnv,
    /// The scheme the variable is stored at: annotated binders and head
    /// over the closed context.
    pub closed: SrcScheme,
    /// Environment for the body.
    pub body_env: TypingEnv,
}

pub(crate) fn let_rule(
    gc: &ClassEnv,
    env: &TypingEnv,
    x: &str,
    scheme: &SrcScheme,
    bound: &SrcExpr,
) -> SrcResult<LetRule> {
    binder_allowed(gc, x)?;
    if env.term(x).is_some() {
        return Err(SrcTypeError::new(
            SrcErrorKind::Rebinding,
            format!("`{x}` is already bound; let-bound names must be fresh"),
        ));
    }
    let (scheme, bound) = rename_scheme_apart(env, scheme, bound);
    check_scheme(gc, env, &scheme)?;
    if !unambig_scheme(&scheme) {
        let fv = scheme.head.free_vars();
        let missing = scheme.binders.iter().find(|b| !fv.contains(b)).cloned().unwrap_or_default();
        return Err(SrcTypeError::new(
            SrcErrorKind::Ambiguity,
            format!("ambiguous type scheme `{scheme}`: `{missing}` does not occur in `{}`", scheme.head),
        ));
    }
    let closed_ctx = closure(gc, &scheme.context)?;
    let mut taken: HashSet<Name> = env.dicts().map(|(d, _)| d.clone()).collect();
    let mut dicts = Vec::new();
    for (i, q) in closed_ctx.iter().enumerate() {
        let mut d = format!("δ{x}{}", i + 1);
        if taken.contains(&d) {
            d = prime_away(&d, |n| taken.contains(n));
        }
        taken.insert(d.clone());
        dicts.push((d, q.clone()));
    }
    let bound_env = env.extended(
        scheme
            .binders
            .iter()
            .map(|a| SrcBinding::TyVar(a.clone()))
            .chain(dicts.iter().map(|(d, q)| SrcBinding::Dict(d.clone(), q.clone()))),
    );
    let closed = SrcScheme { binders: scheme.binders.clone(), context: closed_ctx, head: scheme.head.clone() };
    let body_env = env.extended([SrcBinding::Term(x.to_string(), closed.clone())]);
    Ok(LetRule { binders: scheme.binders, dicts, head: scheme.head, bound, bound_env, closed, body_env })
}

/// Renames annotation binders that are already type variables in scope, so
/// that an outer variable is never shadowed inside the elaborated term.
fn rename_scheme_apart(env: &TypingEnv, scheme: &SrcScheme, bound: &SrcExpr) -> (SrcScheme, SrcExpr) {
    let clashes: Vec<Name> = scheme.binders.iter().filter(|b| env.has_tyvar(b)).cloned().collect();
    if clashes.is_empty() {
        return (scheme.clone(), bound.clone());
    }
    let mut taken: HashSet<Name> = env.tyvars().cloned().collect();
    taken.extend(scheme.binders.iter().cloned());
    type_names(bound, &mut taken);
    let mut scheme = scheme.clone();
    let mut bound = bound.clone();
    for b in clashes {
        let fresh = prime_away(&b, |n| taken.contains(n));
        taken.insert(fresh.clone());
        let m: HashMap<Name, SrcMono> = [(b.clone(), SrcMono::var(&fresh))].into_iter().collect();
        for binder in scheme.binders.iter_mut() {
            if *binder == b {
                *binder = fresh.clone();
            }
        }
        scheme.context = scheme.context.iter().map(|q| q.subst(&m)).collect();
        scheme.head = scheme.head.subst(&m);
        bound = rename_tyvar(&bound, &b, &fresh);
    }
    (scheme, bound)
}

fn type_names(e: &SrcExpr, out: &mut HashSet<Name>) {
    match e {
        SrcExpr::True | SrcExpr::False | SrcExpr::Var(_) | SrcExpr::Method(_) => {}
        SrcExpr::Lam(_, b) => type_names(b, out),
        SrcExpr::App(f, a) => {
            type_names(f, out);
            type_names(a, out);
        }
        SrcExpr::Let(_, s, e1, e2) => {
            out.extend(s.binders.iter().cloned());
            out.extend(s.free_vars());
            type_names(e1, out);
            type_names(e2, out);
        }
        SrcExpr::Ann(e, t) => {
            out.extend(t.free_vars());
            type_names(e, out);
        }
    }
}

/// Renames free occurrences of type variable `from` in annotations. `to`
/// must not occur anywhere in `e`.
fn rename_tyvar(e: &SrcExpr, from: &str, to: &str) -> SrcExpr {
    let m: HashMap<Name, SrcMono> = [(from.to_string(), SrcMono::var(to))].into_iter().collect();
    match e {
        SrcExpr::True | SrcExpr::False | SrcExpr::Var(_) | SrcExpr::Method(_) => e.clone(),
        SrcExpr::Lam(x, b) => SrcExpr::lam(x, rename_tyvar(b, from, to)),
        SrcExpr::App(f, a) => SrcExpr::app(rename_tyvar(f, from, to), rename_tyvar(a, from, to)),
        SrcExpr::Let(x, s, e1, e2) => {
            if s.binders.iter().any(|b| b == from) {
                SrcExpr::let_(x, s.clone(), (**e1).clone(), rename_tyvar(e2, from, to))
            } else {
                SrcExpr::let_(x, s.subst(&m), rename_tyvar(e1, from, to), rename_tyvar(e2, from, to))
            }
        }
        SrcExpr::Ann(inner, t) => SrcExpr::ann(rename_tyvar(inner, from, to), t.subst(&m)),
    }
}

pub(crate) fn binder_allowed(gc: &ClassEnv, x: &str) -> SrcResult<()> {
    if gc.is_method(x) {
        return Err(SrcTypeError::new(
            SrcErrorKind::MethodShadowing,
            format!("`{x}` is a class method and cannot be rebound"),
        ));
    }
    Ok(())
}

/// The instantiation of a variable at a checked type.
pub(crate) struct VarRule {
    pub types: Vec<SrcMono>,
    pub wanted: Vec<SrcConstraint>,
}

pub(crate) fn var_rule(env: &TypingEnv, x: &str, t: &SrcMono) -> SrcResult<VarRule> {
    let s =
        env.term(x).ok_or_else(|| SrcTypeError::new(SrcErrorKind::UnboundVar, format!("unbound variable `{x}`")))?;
    check_mono(env, &[], t)?;
    let sigma = match_mono(&s.head, &s.binders, t).ok_or_else(|| {
        SrcTypeError::new(SrcErrorKind::Mismatch, format!("`{x} : {s}` cannot be used at type `{t}`"))
    })?;
    Ok(VarRule {
        types: s.binders.iter().map(|b| sigma.get(b).cloned().unwrap_or_else(|| SrcMono::var(b))).collect(),
        wanted: s.context.iter().map(|q| q.subst(&sigma)).collect(),
    })
}

/// The instantiation of a method at a checked type: the class constraint
/// resolved for the dictionary, then the method's own binders and context.
pub(crate) struct MethodRule {
    pub class_wanted: SrcConstraint,
    pub types: Vec<SrcMono>,
    pub wanted: Vec<SrcConstraint>,
}

pub(crate) fn method_rule(gc: &ClassEnv, env: &TypingEnv, m: &str, t: &SrcMono) -> SrcResult<MethodRule> {
    let entry =
        gc.by_method(m).ok_or_else(|| SrcTypeError::new(SrcErrorKind::UnboundVar, format!("unknown method `{m}`")))?;
    check_mono(env, &[], t)?;
    let binders = entry.full_binders();
    let s = &entry.method_scheme;
    let sigma = match_mono(&s.head, &binders, t).ok_or_else(|| {
        SrcTypeError::new(SrcErrorKind::Mismatch, format!("method `{m} : {s}` cannot be used at type `{t}`"))
    })?;
    let at = |b: &Name| sigma.get(b).cloned().unwrap_or_else(|| SrcMono::var(b));
    Ok(MethodRule {
        class_wanted: SrcConstraint::new(&entry.class, at(&entry.class_var)),
        types: s.binders.iter().map(at).collect(),
        wanted: s.context.iter().map(|q| q.subst(&sigma)).collect(),
    })
}

pub(crate) fn not_inferable(e: &SrcExpr) -> SrcTypeError {
    SrcTypeError::new(SrcErrorKind::NotInferable, format!("head not inferable, annotate it: `{e}`"))
}

pub(crate) fn mismatch(expected: &SrcMono, found: &SrcMono, e: &SrcExpr) -> SrcTypeError {
    SrcTypeError::new(
        SrcErrorKind::Mismatch,
        format!("type mismatch: expected `{expected}`, found `{found}` for `{e}`"),
    )
}

pub(crate) fn lambda_split<'t>(t: &'t SrcMono, e: &SrcExpr) -> SrcResult<(&'t SrcMono, &'t SrcMono)> {
    match t {
        SrcMono::Arrow(a, b) => Ok((a, b)),
        _ => {
            Err(SrcTypeError::new(SrcErrorKind::Mismatch, format!("`{e}` is a function but is checked against `{t}`")))
        }
    }
}

pub(crate) fn unsatisfiable(q: &SrcConstraint) -> SrcTypeError {
    SrcTypeError::new(SrcErrorKind::Unsatisfiable, format!("no instance for `{q}`"))
}

pub(crate) fn not_a_function(t: &SrcMono, e: &SrcExpr) -> SrcTypeError {
    SrcTypeError::new(SrcErrorKind::Mismatch, format!("`{e}` has type `{t}` and cannot be applied"))
}
