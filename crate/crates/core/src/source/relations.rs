use std::collections::{HashMap, HashSet};

use super::{ClassEnv, SrcErrorKind, SrcResult, SrcTypeError, TypingEnv};
use crate::fd::dict_target_name;
use crate::syntax::{FdQ, FdType, Name, SrcConstraint, SrcConstraintScheme, SrcMono, SrcScheme, TgtType};

/// Superclass closure. Each constraint is preceded by the closure of its
/// superclasses at the same argument; duplicates are kept.
pub fn closure(gc: &ClassEnv, qs: &[SrcConstraint]) -> SrcResult<Vec<SrcConstraint>> {
    let mut out = Vec::new();
    for q in qs {
        close_one(gc, q, &mut out)?;
    }
    Ok(out)
}

fn close_one(gc: &ClassEnv, q: &SrcConstraint, out: &mut Vec<SrcConstraint>) -> SrcResult<()> {
    let entry = gc.by_class(&q.class).ok_or_else(|| unknown_class(&q.class))?;
    for s in &entry.superclasses {
        close_one(gc, &SrcConstraint::new(s, q.arg.clone()), out)?;
    }
    out.push(q.clone());
    Ok(())
}

pub(crate) fn unknown_class(c: &str) -> SrcTypeError {
    SrcTypeError::new(SrcErrorKind::UnknownClass, format!("unknown class `{c}`"))
}

pub fn unambig_scheme(s: &SrcScheme) -> bool {
    let fv = s.head.free_vars();
    s.binders.iter().all(|b| fv.contains(b))
}

pub fn unambig_constraint(c: &SrcConstraintScheme) -> bool {
    let fv = c.head.arg.free_vars();
    c.binders.iter().all(|b| fv.contains(b))
}

/// One-way matching: the substitution over `vars` taking `pattern` to
/// `target`. The target is never rewritten, so its variables may share names
/// with `vars`.
pub fn match_mono(pattern: &SrcMono, vars: &[Name], target: &SrcMono) -> Option<HashMap<Name, SrcMono>> {
    fn go(p: &SrcMono, vars: &[Name], t: &SrcMono, acc: &mut HashMap<Name, SrcMono>) -> bool {
        match (p, t) {
            (SrcMono::Var(a), _) if vars.contains(a) => match acc.get(a) {
                Some(bound) => bound == t,
                None => {
                    acc.insert(a.clone(), t.clone());
                    true
                }
            },
            (SrcMono::Bool, SrcMono::Bool) => true,
            (SrcMono::Var(a), SrcMono::Var(b)) => a == b,
            (SrcMono::Arrow(p1, p2), SrcMono::Arrow(t1, t2)) => go(p1, vars, t1, acc) && go(p2, vars, t2, acc),
            _ => false,
        }
    }
    let mut acc = HashMap::new();
    go(pattern, vars, target, &mut acc).then_some(acc)
}

/// Most general unifier over the `flexible` variables, with occurs check.
/// Variables outside `flexible` are rigid.
pub fn unify_mono(t1: &SrcMono, t2: &SrcMono, flexible: &HashSet<Name>) -> Option<HashMap<Name, SrcMono>> {
    fn resolve(t: &SrcMono, s: &HashMap<Name, SrcMono>) -> SrcMono {
        match t {
            SrcMono::Var(a) => match s.get(a) {
                Some(u) => resolve(u, s),
                None => t.clone(),
            },
            SrcMono::Arrow(l, r) => SrcMono::arrow(resolve(l, s), resolve(r, s)),
            SrcMono::Bool => SrcMono::Bool,
        }
    }
    fn go(t1: &SrcMono, t2: &SrcMono, flex: &HashSet<Name>, s: &mut HashMap<Name, SrcMono>) -> bool {
        let (t1, t2) = (resolve(t1, s), resolve(t2, s));
        match (&t1, &t2) {
            _ if t1 == t2 => true,
            (SrcMono::Var(a), other) | (other, SrcMono::Var(a)) if flex.contains(a) => {
                if other.mentions(a) {
                    return false;
                }
                s.insert(a.clone(), other.clone());
                true
            }
            (SrcMono::Arrow(a1, r1), SrcMono::Arrow(a2, r2)) => go(a1, a2, flex, s) && go(r1, r2, flex, s),
            _ => false,
        }
    }
    let mut s = HashMap::new();
    if !go(t1, t2, flexible, &mut s) {
        return None;
    }
    let keys: Vec<Name> = s.keys().cloned().collect();
    Some(keys.into_iter().map(|k| (k.clone(), resolve(&SrcMono::Var(k), &s))).collect())
}

pub(crate) fn check_mono(env: &TypingEnv, bound: &[Name], t: &SrcMono) -> SrcResult<()> {
    for a in t.free_vars() {
        if !bound.contains(&a) && !env.has_tyvar(&a) {
            return Err(SrcTypeError::new(SrcErrorKind::UnboundTyVar, format!("type variable `{a}` is not in scope")));
        }
    }
    Ok(())
}

pub(crate) fn check_constraint(gc: &ClassEnv, env: &TypingEnv, bound: &[Name], q: &SrcConstraint) -> SrcResult<()> {
    gc.by_class(&q.class).ok_or_else(|| unknown_class(&q.class))?;
    check_mono(env, bound, &q.arg)
}

pub(crate) fn check_scheme(gc: &ClassEnv, env: &TypingEnv, s: &SrcScheme) -> SrcResult<()> {
    for (i, b) in s.binders.iter().enumerate() {
        if s.binders[..i].contains(b) {
            return Err(SrcTypeError::new(SrcErrorKind::Rebinding, format!("type variable `{b}` bound twice")));
        }
    }
    for q in &s.context {
        check_constraint(gc, env, &s.binders, q)?;
    }
    check_mono(env, &s.binders, &s.head)
}

pub(crate) fn mono_fd(t: &SrcMono) -> FdType {
    match t {
        SrcMono::Bool => FdType::Bool,
        SrcMono::Var(a) => FdType::var(a),
        SrcMono::Arrow(l, r) => FdType::arrow(mono_fd(l), mono_fd(r)),
    }
}

pub(crate) fn constraint_fd(q: &SrcConstraint) -> FdQ {
    FdQ::new(&q.class, mono_fd(&q.arg))
}

pub(crate) fn scheme_fd(s: &SrcScheme) -> FdType {
    let body = s.context.iter().rev().fold(mono_fd(&s.head), |acc, q| FdType::qarrow(constraint_fd(q), acc));
    s.binders.iter().rev().fold(body, |acc, a| FdType::forall(a, acc))
}

pub fn elab_type_fd(gc: &ClassEnv, env: &TypingEnv, s: &SrcScheme) -> SrcResult<FdType> {
    check_scheme(gc, env, s)?;
    Ok(scheme_fd(s))
}

pub fn elab_constraint_fd(gc: &ClassEnv, env: &TypingEnv, q: &SrcConstraint) -> SrcResult<FdQ> {
    check_constraint(gc, env, &[], q)?;
    Ok(constraint_fd(q))
}

pub(crate) fn mono_tgt(t: &SrcMono) -> TgtType {
    match t {
        SrcMono::Bool => TgtType::Bool,
        SrcMono::Var(a) => TgtType::var(a),
        SrcMono::Arrow(l, r) => TgtType::arrow(mono_tgt(l), mono_tgt(r)),
    }
}

/// The record type of a dictionary for `q`: one field, named after the
/// method, at the method's scheme with the class variable instantiated.
pub(crate) fn constraint_tgt(gc: &ClassEnv, q: &SrcConstraint) -> SrcResult<TgtType> {
    let entry = gc.by_class(&q.class).ok_or_else(|| unknown_class(&q.class))?;
    let method = scheme_tgt(gc, &entry.method_scheme)?;
    let m: HashMap<Name, TgtType> = [(entry.class_var.clone(), mono_tgt(&q.arg))].into_iter().collect();
    Ok(TgtType::record(vec![(entry.method.clone(), method.subst(&m))]))
}

pub(crate) fn scheme_tgt(gc: &ClassEnv, s: &SrcScheme) -> SrcResult<TgtType> {
    let mut body = mono_tgt(&s.head);
    for q in s.context.iter().rev() {
        body = TgtType::arrow(constraint_tgt(gc, q)?, body);
    }
    Ok(s.binders.iter().rev().fold(body, |acc, a| TgtType::forall(a, acc)))
}

pub fn elab_type_tgt(gc: &ClassEnv, env: &TypingEnv, s: &SrcScheme) -> SrcResult<TgtType> {
    check_scheme(gc, env, s)?;
    scheme_tgt(gc, s)
}

pub fn elab_constraint_tgt(gc: &ClassEnv, env: &TypingEnv, q: &SrcConstraint) -> SrcResult<TgtType> {
    check_constraint(gc, env, &[], q)?;
    constraint_tgt(gc, q)
}

pub(crate) fn dict_var_tgt(d: &str) -> Name {
    dict_target_name(d)
}
