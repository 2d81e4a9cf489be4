use std::collections::{HashMap, HashSet};

use super::elab::{elab_fd_q, elab_fd_type};
use super::typeck::FdChecker;
use super::{FdErrorKind, FdTypeError};
use crate::syntax::fresh::prime_away;
use crate::syntax::{Alpha, FdBinding, FdClassEnv, FdQ, FdType, FdTypingEnv, MethodEnv, Name};

/// Most general unifier of two constraint heads whose flexible variables
/// (`v1` for `q1`, `v2` for `q2`) are disjoint. Quantified or qualified
/// subterms unify only when alpha-equal and free of flexible variables.
pub fn unify_heads(q1: &FdQ, v1: &[Name], q2: &FdQ, v2: &[Name]) -> Option<HashMap<Name, FdType>> {
    if q1.class != q2.class {
        return None;
    }
    let flex: HashSet<&Name> = v1.iter().chain(v2).collect();
    let mut sub = HashMap::new();
    unify(&q1.arg, &q2.arg, &flex, &mut sub)?;
    // Resolve the triangular substitution into an idempotent one.
    let keys: Vec<Name> = sub.keys().cloned().collect();
    let mut out = HashMap::new();
    for k in keys {
        out.insert(k.clone(), resolve(&FdType::Var(k), &sub));
    }
    Some(out)
}

fn resolve(t: &FdType, sub: &HashMap<Name, FdType>) -> FdType {
    match t {
        FdType::Var(a) => match sub.get(a) {
            Some(u) => resolve(u, sub),
            None => t.clone(),
        },
        FdType::Arrow(l, r) => FdType::arrow(resolve(l, sub), resolve(r, sub)),
        _ => t.clone(),
    }
}

fn walk(t: &FdType, sub: &HashMap<Name, FdType>) -> FdType {
    let mut cur = t.clone();
    while let FdType::Var(a) = &cur {
        match sub.get(a) {
            Some(u) => cur = u.clone(),
            None => break,
        }
    }
    cur
}

fn occurs(a: &Name, t: &FdType, sub: &HashMap<Name, FdType>) -> bool {
    match walk(t, sub) {
        FdType::Var(b) => *a == b,
        FdType::Arrow(l, r) => occurs(a, &l, sub) || occurs(a, &r, sub),
        FdType::QArrow(q, r) => occurs(a, &q.arg, sub) || occurs(a, &r, sub),
        FdType::Forall(_, b) => occurs(a, &b, sub),
        FdType::Bool => false,
    }
}

fn unify(t1: &FdType, t2: &FdType, flex: &HashSet<&Name>, sub: &mut HashMap<Name, FdType>) -> Option<()> {
    let (t1, t2) = (walk(t1, sub), walk(t2, sub));
    match (&t1, &t2) {
        (FdType::Var(a), FdType::Var(b)) if a == b => Some(()),
        (FdType::Var(a), _) if flex.contains(a) => {
            if occurs(a, &t2, sub) {
                return None;
            }
            sub.insert(a.clone(), t2.clone());
            Some(())
        }
        (_, FdType::Var(b)) if flex.contains(b) => {
            if occurs(b, &t1, sub) {
                return None;
            }
            sub.insert(b.clone(), t1.clone());
            Some(())
        }
        (FdType::Bool, FdType::Bool) => Some(()),
        (FdType::Arrow(l1, r1), FdType::Arrow(l2, r2)) => {
            unify(l1, l2, flex, sub)?;
            unify(r1, r2, flex, sub)
        }
        (FdType::Forall(..), _) | (FdType::QArrow(..), _) => {
            let mentions_flex = |t: &FdType| t.free_vars().iter().any(|v| flex.contains(v));
            if !mentions_flex(&t1) && !mentions_flex(&t2) && t1.alpha_eq(&t2) {
                Some(())
            } else {
                None
            }
        }
        _ => None,
    }
}

fn rename_apart(binders: &[Name], q: &FdQ, avoid: &HashSet<Name>) -> (Vec<Name>, FdQ) {
    let mut taken = avoid.clone();
    taken.extend(binders.iter().cloned());
    let mut ren = HashMap::new();
    let mut out = Vec::new();
    for b in binders {
        if avoid.contains(b) {
            let fresh = prime_away(b, |n| taken.contains(n));
            taken.insert(fresh.clone());
            ren.insert(b.clone(), FdType::Var(fresh.clone()));
            out.push(fresh);
        } else {
            out.push(b.clone());
        }
    }
    (out, q.subst(&ren))
}

/// Well-formedness of the three environments of the intermediate language,
/// including non-overlap of instance heads and the prefix discipline for
/// constructor implementations.
pub fn fd_env_wf(sigma: &MethodEnv, tc: &FdClassEnv, tt: &FdTypingEnv) -> Result<(), FdTypeError> {
    class_env_wf(tc)?;
    typing_env_wf(tc, tt)?;
    let mut checker = FdChecker::new(sigma, tc);
    let mut ctors = HashSet::new();
    for (i, entry) in sigma.entries.iter().enumerate() {
        if !ctors.insert(&entry.ctor) {
            return Err(FdTypeError::new(
                FdErrorKind::Overlap,
                format!("constructor `{}` is declared twice", entry.ctor),
            ));
        }
        let scheme = &entry.scheme;
        let head_fv = scheme.head.arg.free_vars();
        if let Some(b) = scheme.binders.iter().find(|b| !head_fv.contains(b)) {
            return Err(FdTypeError::new(
                FdErrorKind::Ambiguity,
                format!("`{}`: type variable `{b}` does not occur in the head `{}`", entry.ctor, scheme.head),
            ));
        }
        let mut local = FdTypingEnv::new();
        for b in &scheme.binders {
            local.push(FdBinding::TyVar(b.clone()));
        }
        for q in scheme.context.iter().chain(std::iter::once(&scheme.head)) {
            elab_fd_q(tc, &local, q)?;
        }
        for earlier in &sigma.entries[..i] {
            let avoid: HashSet<Name> = earlier.scheme.binders.iter().cloned().collect();
            let (binders, head) = rename_apart(&scheme.binders, &scheme.head, &avoid);
            if unify_heads(&earlier.scheme.head, &earlier.scheme.binders, &head, &binders).is_some() {
                return Err(FdTypeError::new(
                    FdErrorKind::Overlap,
                    format!(
                        "overlapping instances: `{}` ({}) and `{}` ({})",
                        earlier.ctor, earlier.scheme, entry.ctor, entry.scheme
                    ),
                ));
            }
        }
        for c in entry.imp.constructors() {
            match sigma.position(&c) {
                Some(j) if j < i => {}
                Some(_) => {
                    return Err(FdTypeError::new(
                        FdErrorKind::PrefixViolation,
                        format!("implementation of `{}` refers to `{c}`, declared at or after it", entry.ctor),
                    ))
                }
                None => {
                    return Err(FdTypeError::new(
                        FdErrorKind::UnknownConstructor,
                        format!("implementation of `{}` refers to unknown constructor `{c}`", entry.ctor),
                    ))
                }
            }
        }
        checker.constructor_target(i)?;
    }
    Ok(())
}

fn class_env_wf(tc: &FdClassEnv) -> Result<(), FdTypeError> {
    let mut classes = HashSet::new();
    let mut methods = HashSet::new();
    for (i, e) in tc.entries.iter().enumerate() {
        if !classes.insert(&e.class) || !methods.insert(&e.method) {
            return Err(FdTypeError::new(
                FdErrorKind::Overlap,
                format!("class `{}` or method `{}` declared twice", e.class, e.method),
            ));
        }
        let prefix = FdClassEnv { entries: tc.entries[..i].to_vec() };
        let mut local = FdTypingEnv::new();
        local.push(FdBinding::TyVar(e.class_var.clone()));
        elab_fd_type(&prefix, &local, &e.method_type)?;
    }
    Ok(())
}

fn typing_env_wf(tc: &FdClassEnv, tt: &FdTypingEnv) -> Result<(), FdTypeError> {
    let mut prefix = FdTypingEnv::new();
    for b in &tt.entries {
        let dup = match b {
            FdBinding::Term(x, t) => {
                elab_fd_type(tc, &prefix, t)?;
                prefix.term(x).is_some()
            }
            FdBinding::TyVar(a) => prefix.has_tyvar(a),
            FdBinding::Dict(d, q) => {
                elab_fd_q(tc, &prefix, q)?;
                prefix.dict(d).is_some()
            }
        };
        if dup {
            return Err(FdTypeError::new(FdErrorKind::Mismatch, format!("binding `{b:?}` is not unique")));
        }
        prefix.push(b.clone());
    }
    Ok(())
}
