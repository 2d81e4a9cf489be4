//! Elaboration into the explicit-dictionary calculus.

use std::collections::HashMap;

use super::relations::{constraint_fd, mono_fd, scheme_fd};
use super::rules::{
    binder_allowed, lambda_split, let_rule, method_rule, mismatch, not_a_function, not_inferable, unsatisfiable,
    var_rule,
};
use super::{Alts, ClassEnv, ElabSet, Limits, ProgramCtx, SrcBinding, SrcResult, TypingEnv};
use crate::syntax::{
    FdBinding, FdClassEntry, FdClassEnv, FdConstraintScheme, FdDict, FdExpr, FdTypingEnv, MethodEntry, MethodEnv,
    SrcConstraint, SrcExpr, SrcMono,
};

pub(crate) struct ToFd<'a> {
    pub gc: &'a ClassEnv,
    pub p: &'a ProgramCtx,
    /// Number of leading entries of `p` that resolution may use.
    pub visible: usize,
    pub limits: Limits,
}

type Memo = HashMap<(SrcConstraint, usize), Alts<FdDict>>;

impl ToFd<'_> {
    fn cap(&self) -> usize {
        self.limits.max_elaborations
    }

    pub fn entail(&self, env: &TypingEnv, q: &SrcConstraint) -> Alts<FdDict> {
        self.entail_at(env, q, 1, &mut Memo::new())
    }

    fn entail_at(&self, env: &TypingEnv, q: &SrcConstraint, depth: usize, memo: &mut Memo) -> Alts<FdDict> {
        if depth > self.limits.max_resolution_depth {
            return Alts::empty(true);
        }
        let key = (q.clone(), depth);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let mut found = Vec::new();
        let mut truncated = false;
        for (d, local) in env.dicts() {
            if local == q {
                found.push(FdDict::var(d));
            }
        }
        for entry in &self.p.entries[..self.visible] {
            if entry.scheme.head.class != q.class {
                continue;
            }
            let Some(sigma) = super::match_mono(&entry.scheme.head.arg, &entry.scheme.binders, &q.arg) else {
                continue;
            };
            let types: Vec<_> = entry.scheme.binders.iter().map(|b| mono_fd(&sigma[b])).collect();
            let subgoals: Vec<Alts<FdDict>> =
                entry.scheme.context.iter().map(|c| self.entail_at(env, &c.subst(&sigma), depth + 1, memo)).collect();
            let args = Alts::sequence(subgoals, self.cap());
            truncated |= args.truncated;
            found.extend(args.items.into_iter().map(|ds| FdDict::con(&entry.ctor, types.clone(), ds)));
        }
        let out = Alts::collect(found, truncated, self.cap());
        memo.insert(key, out.clone());
        out
    }

    fn resolve(&self, env: &TypingEnv, q: &SrcConstraint) -> SrcResult<Alts<FdDict>> {
        let r = self.entail(env, q);
        if r.is_empty() && !r.truncated {
            return Err(unsatisfiable(q));
        }
        Ok(r)
    }

    fn resolve_all(&self, env: &TypingEnv, qs: &[SrcConstraint]) -> SrcResult<Alts<Vec<FdDict>>> {
        let lists = qs.iter().map(|q| self.resolve(env, q)).collect::<SrcResult<Vec<_>>>()?;
        Ok(Alts::sequence(lists, self.cap()))
    }

    pub fn infer(&self, env: &TypingEnv, e: &SrcExpr) -> SrcResult<(SrcMono, Alts<FdExpr>)> {
        match e {
            SrcExpr::True => Ok((SrcMono::Bool, Alts::one(FdExpr::True))),
            SrcExpr::False => Ok((SrcMono::Bool, Alts::one(FdExpr::False))),
            SrcExpr::Let(x, scheme, e1, e2) => {
                let rule = let_rule(self.gc, env, x, scheme, e1)?;
                let bound = self.check(&rule.bound_env, &rule.bound, &rule.head)?;
                let (t, body) = self.infer(&rule.body_env, e2)?;
                let wrap = |e1: &FdExpr| {
                    let inner =
                        rule.dicts.iter().rev().fold(e1.clone(), |acc, (d, q)| FdExpr::dlam(d, constraint_fd(q), acc));
                    rule.binders.iter().rev().fold(inner, |acc, a| FdExpr::tylam(a, acc))
                };
                let ty = scheme_fd(&rule.closed);
                let alts = bound.product(&body, self.cap(), |b, e2| FdExpr::let_(x, ty.clone(), wrap(b), e2.clone()));
                Ok((t, alts))
            }
            SrcExpr::App(f, a) => {
                let (tf, fs) = self.infer(env, f)?;
                let SrcMono::Arrow(t1, t2) = tf else {
                    return Err(not_a_function(&tf, f));
                };
                let args = self.check(env, a, &t1)?;
                Ok(((*t2).clone(), fs.product(&args, self.cap(), |f, a| FdExpr::app(f.clone(), a.clone()))))
            }
            SrcExpr::Ann(inner, t) => {
                super::relations::check_mono(env, &[], t)?;
                Ok((t.clone(), self.check(env, inner, t)?))
            }
            SrcExpr::Var(_) | SrcExpr::Method(_) | SrcExpr::Lam(..) => Err(not_inferable(e)),
        }
    }

    pub fn check(&self, env: &TypingEnv, e: &SrcExpr, t: &SrcMono) -> SrcResult<Alts<FdExpr>> {
        match e {
            SrcExpr::Var(x) if env.term(x).is_none() && self.gc.is_method(x) => self.check_method(env, x, t),
            SrcExpr::Var(x) => {
                let rule = var_rule(env, x, t)?;
                let dicts = self.resolve_all(env, &rule.wanted)?;
                let head = rule.types.iter().fold(FdExpr::var(x), |acc, t| FdExpr::tyapp(acc, mono_fd(t)));
                Ok(dicts.map(self.cap(), |ds| ds.iter().fold(head.clone(), |acc, d| FdExpr::dapp(acc, d.clone()))))
            }
            SrcExpr::Method(m) => self.check_method(env, m, t),
            SrcExpr::Lam(x, body) => {
                binder_allowed(self.gc, x)?;
                let (t1, t2) = lambda_split(t, e)?;
                let inner = env.extended([SrcBinding::Term(x.clone(), crate::syntax::SrcScheme::mono(t1.clone()))]);
                let bodies = self.check(&inner, body, t2)?;
                let ty = mono_fd(t1);
                Ok(bodies.map(self.cap(), |b| FdExpr::lam(x, ty.clone(), b.clone())))
            }
            _ => {
                let (found, alts) = self.infer(env, e)?;
                if &found != t {
                    return Err(mismatch(t, &found, e));
                }
                Ok(alts)
            }
        }
    }

    fn check_method(&self, env: &TypingEnv, m: &str, t: &SrcMono) -> SrcResult<Alts<FdExpr>> {
        let rule = method_rule(self.gc, env, m, t)?;
        let class_dicts = self.resolve(env, &rule.class_wanted)?;
        let method_dicts = self.resolve_all(env, &rule.wanted)?;
        Ok(class_dicts.product(&method_dicts, self.cap(), |d, ds| {
            let proj = FdExpr::Method(d.clone(), m.to_string());
            let applied = rule.types.iter().fold(proj, |acc, t| FdExpr::tyapp(acc, mono_fd(t)));
            ds.iter().fold(applied, |acc, d| FdExpr::dapp(acc, d.clone()))
        }))
    }

    /// Every implementation of entry `i`, wrapped in its instance and method
    /// abstractions and elaborated against the entries before it.
    pub fn implementations(&self, i: usize) -> SrcResult<Alts<FdExpr>> {
        let entry = &self.p.entries[i];
        let inner = ToFd { visible: i, ..*self };
        let bodies = inner.check(&entry.local_env, &entry.body, &entry.method_type)?;
        Ok(bodies.map(self.cap(), |b| {
            let b =
                entry.method_dicts.iter().rev().fold(b.clone(), |acc, (d, q)| FdExpr::dlam(d, constraint_fd(q), acc));
            let b = entry.method_binders.iter().rev().fold(b, |acc, a| FdExpr::tylam(a, acc));
            let b = entry
                .inst_dicts
                .iter()
                .zip(&entry.scheme.context)
                .rev()
                .fold(b, |acc, (d, q)| FdExpr::dlam(d, constraint_fd(q), acc));
            entry.scheme.binders.iter().rev().fold(b, |acc, a| FdExpr::tylam(a, acc))
        }))
    }
}

pub fn entail_fd(
    p: &ProgramCtx,
    gc: &ClassEnv,
    env: &TypingEnv,
    q: &SrcConstraint,
    limits: Limits,
) -> SrcResult<Alts<FdDict>> {
    super::relations::check_constraint(gc, env, &[], q)?;
    Ok(ToFd { gc, p, visible: p.entries.len(), limits }.entail(env, q))
}

pub fn infer_fd(
    p: &ProgramCtx,
    gc: &ClassEnv,
    env: &TypingEnv,
    e: &SrcExpr,
    limits: Limits,
) -> SrcResult<ElabSet<FdExpr>> {
    let (ty, alts) = ToFd { gc, p, visible: p.entries.len(), limits }.infer(env, e)?;
    Ok(ElabSet { ty, alternatives: alts.items, truncated: alts.truncated })
}

pub fn check_fd(
    p: &ProgramCtx,
    gc: &ClassEnv,
    env: &TypingEnv,
    e: &SrcExpr,
    t: &SrcMono,
    limits: Limits,
) -> SrcResult<ElabSet<FdExpr>> {
    let alts = ToFd { gc, p, visible: p.entries.len(), limits }.check(env, e, t)?;
    Ok(ElabSet { ty: t.clone(), alternatives: alts.items, truncated: alts.truncated })
}

/// The environments of the intermediate language for a source environment.
/// Only the method environment varies: one variant per combination of
/// instance-body elaborations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdEnvElab {
    pub sigmas: Vec<MethodEnv>,
    pub truncated: bool,
    pub tc: FdClassEnv,
    pub tt: FdTypingEnv,
}

pub fn elab_env(p: &ProgramCtx, gc: &ClassEnv, env: &TypingEnv, limits: Limits) -> SrcResult<FdEnvElab> {
    let tc = FdClassEnv {
        entries: gc
            .entries
            .iter()
            .map(|c| FdClassEntry {
                method: c.method.clone(),
                class: c.class.clone(),
                class_var: c.class_var.clone(),
                method_type: scheme_fd(&c.method_scheme),
            })
            .collect(),
    };
    let tt = FdTypingEnv {
        entries: env
            .entries
            .iter()
            .map(|b| match b {
                SrcBinding::Term(x, s) => FdBinding::Term(x.clone(), scheme_fd(s)),
                SrcBinding::TyVar(a) => FdBinding::TyVar(a.clone()),
                SrcBinding::Dict(d, q) => FdBinding::Dict(d.clone(), constraint_fd(q)),
            })
            .collect(),
    };
    let elab = ToFd { gc, p, visible: p.entries.len(), limits };
    let per_entry = (0..p.entries.len()).map(|i| elab.implementations(i)).collect::<SrcResult<Vec<_>>>()?;
    let combos = Alts::sequence(per_entry, limits.max_elaborations);
    let sigmas = combos
        .items
        .into_iter()
        .map(|imps| MethodEnv {
            entries: p
                .entries
                .iter()
                .zip(imps)
                .map(|(entry, imp)| MethodEntry {
                    ctor: entry.ctor.clone(),
                    scheme: FdConstraintScheme {
                        binders: entry.scheme.binders.clone(),
                        context: entry.scheme.context.iter().map(constraint_fd).collect(),
                        head: constraint_fd(&entry.scheme.head),
                    },
                    method: entry.method.clone(),
                    imp,
                })
                .collect(),
        })
        .collect();
    Ok(FdEnvElab { sigmas, truncated: combos.truncated, tc, tt })
}
