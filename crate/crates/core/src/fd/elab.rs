use std::collections::HashMap;

use super::{FdErrorKind, FdTypeError};
use crate::syntax::{FdBinding, FdClassEnv, FdQ, FdType, FdTypingEnv, Name, TgtBinding, TgtEnv, TgtType};

/// Dictionary variables live in their own namespace; in the target they
/// become term variables carrying this prefix.
pub fn dict_target_name(d: &str) -> Name {
    format!("$d_{d}")
}

/// Elaborates a type, checking that every type variable is bound by `tt` or
/// by an enclosing quantifier.
pub fn elab_fd_type(tc: &FdClassEnv, tt: &FdTypingEnv, t: &FdType) -> Result<TgtType, FdTypeError> {
    Elab { tc, tt, bound: Vec::new(), visiting: Vec::new() }.ty(t)
}

/// A class constraint becomes the single-field record of its method, at the
/// constraint's argument type.
pub fn elab_fd_q(tc: &FdClassEnv, tt: &FdTypingEnv, q: &FdQ) -> Result<TgtType, FdTypeError> {
    Elab { tc, tt, bound: Vec::new(), visiting: Vec::new() }.q(q)
}

pub fn elab_fd_env(tc: &FdClassEnv, tt: &FdTypingEnv) -> Result<TgtEnv, FdTypeError> {
    let mut out = TgtEnv::new();
    let mut prefix = FdTypingEnv::new();
    for b in &tt.entries {
        match b {
            FdBinding::TyVar(a) => out.push(TgtBinding::TyVar(a.clone())),
            FdBinding::Term(x, t) => out.push(TgtBinding::Term(x.clone(), elab_fd_type(tc, &prefix, t)?)),
            FdBinding::Dict(d, q) => out.push(TgtBinding::Term(dict_target_name(d), elab_fd_q(tc, &prefix, q)?)),
        }
        prefix.push(b.clone());
    }
    Ok(out)
}

struct Elab<'a> {
    tc: &'a FdClassEnv,
    tt: &'a FdTypingEnv,
    bound: Vec<Name>,
    // Classes whose method type is being elaborated; guards against cyclic
    // class environments built by hand.
    visiting: Vec<Name>,
}

impl Elab<'_> {
    fn ty(&mut self, t: &FdType) -> Result<TgtType, FdTypeError> {
        match t {
            FdType::Bool => Ok(TgtType::Bool),
            FdType::Var(a) => {
                if self.bound.contains(a) || self.tt.has_tyvar(a) {
                    Ok(TgtType::Var(a.clone()))
                } else {
                    Err(FdTypeError::new(FdErrorKind::UnboundTyVar, format!("type variable `{a}` is not in scope")))
                }
            }
            FdType::Arrow(l, r) => Ok(TgtType::arrow(self.ty(l)?, self.ty(r)?)),
            FdType::QArrow(q, r) => Ok(TgtType::arrow(self.q(q)?, self.ty(r)?)),
            FdType::Forall(a, b) => {
                self.bound.push(a.clone());
                let r = self.ty(b);
                self.bound.pop();
                Ok(TgtType::Forall(a.clone(), Box::new(r?)))
            }
        }
    }

    fn q(&mut self, q: &FdQ) -> Result<TgtType, FdTypeError> {
        let arg = self.ty(&q.arg)?;
        let entry = self
            .tc
            .by_class(&q.class)
            .ok_or_else(|| FdTypeError::new(FdErrorKind::UnknownMethod, format!("unknown class `{}`", q.class)))?;
        if self.visiting.contains(&q.class) {
            return Err(FdTypeError::new(
                FdErrorKind::UnknownMethod,
                format!("class `{}` mentions itself in its method type", q.class),
            ));
        }
        let mut inner_tt = FdTypingEnv::new();
        inner_tt.push(FdBinding::TyVar(entry.class_var.clone()));
        let mut inner = Elab { tc: self.tc, tt: &inner_tt, bound: Vec::new(), visiting: self.visiting.clone() };
        inner.visiting.push(q.class.clone());
        let mt = inner.ty(&entry.method_type)?;
        let m: HashMap<Name, TgtType> = [(entry.class_var.clone(), arg)].into_iter().collect();
        Ok(TgtType::record(vec![(entry.method.clone(), mt.subst(&m))]))
    }
}
