//! Direct elaboration into System F with records. Dictionaries are built
//! in place as record literals; instance bodies are re-elaborated at every
//! resolution site.

use std::cell::RefCell;
use std::collections::HashMap;

use super::relations::{constraint_tgt, dict_var_tgt, mono_tgt, scheme_tgt};
use super::rules::{
    binder_allowed, lambda_split, let_rule, method_rule, mismatch, not_a_function, not_inferable, unsatisfiable,
    var_rule,
};
use super::{Alts, ClassEnv, ElabSet, Limits, ProgramCtx, SrcBinding, SrcResult, TypingEnv};
use crate::syntax::{SrcConstraint, SrcExpr, SrcMono, SrcScheme, TgtBinding, TgtEnv, TgtExpr, TgtType};

/// Direct elaborator over one program context. Instance bodies are
/// elaborated at most once each and reused at every resolution site.
pub struct TgtElaborator<'a> {
    gc: &'a ClassEnv,
    p: &'a ProgramCtx,
    limits: Limits,
    bodies: RefCell<HashMap<usize, SrcResult<Alts<TgtExpr>>>>,
}

type Memo = HashMap<(SrcConstraint, usize), SrcResult<Alts<TgtExpr>>>;

impl<'a> TgtElaborator<'a> {
    pub fn new(p: &'a ProgramCtx, gc: &'a ClassEnv, limits: Limits) -> Self {
        TgtElaborator { gc, p, limits, bodies: RefCell::new(HashMap::new()) }
    }

    fn cap(&self) -> usize {
        self.limits.max_elaborations
    }

    pub fn entail(&self, env: &TypingEnv, q: &SrcConstraint) -> SrcResult<Alts<TgtExpr>> {
        self.entail_in(self.p.entries.len(), env, q)
    }

    pub fn infer(&self, env: &TypingEnv, e: &SrcExpr) -> SrcResult<(SrcMono, Alts<TgtExpr>)> {
        self.infer_in(self.p.entries.len(), env, e)
    }

    pub fn check(&self, env: &TypingEnv, e: &SrcExpr, t: &SrcMono) -> SrcResult<Alts<TgtExpr>> {
        self.check_in(self.p.entries.len(), env, e, t)
    }

    fn entail_in(&self, visible: usize, env: &TypingEnv, q: &SrcConstraint) -> SrcResult<Alts<TgtExpr>> {
        self.entail_at(visible, env, q, 1, &mut Memo::new())
    }

    fn entail_at(
        &self,
        visible: usize,
        env: &TypingEnv,
        q: &SrcConstraint,
        depth: usize,
        memo: &mut Memo,
    ) -> SrcResult<Alts<TgtExpr>> {
        if depth > self.limits.max_resolution_depth {
            return Ok(Alts::empty(true));
        }
        let key = (q.clone(), depth);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let out = self.entail_uncached(visible, env, q, depth, memo);
        memo.insert(key, out.clone());
        out
    }

    fn entail_uncached(
        &self,
        visible: usize,
        env: &TypingEnv,
        q: &SrcConstraint,
        depth: usize,
        memo: &mut Memo,
    ) -> SrcResult<Alts<TgtExpr>> {
        let mut found: Vec<TgtExpr> =
            env.dicts().filter(|(_, local)| *local == q).map(|(d, _)| TgtExpr::var(&dict_var_tgt(d))).collect();
        let mut truncated = false;
        for (i, entry) in self.p.entries[..visible].iter().enumerate() {
            if entry.scheme.head.class != q.class {
                continue;
            }
            let Some(sigma) = super::match_mono(&entry.scheme.head.arg, &entry.scheme.binders, &q.arg) else {
                continue;
            };
            let mut args = Vec::new();
            for c in &entry.scheme.context {
                args.push(self.entail_at(visible, env, &c.subst(&sigma), depth + 1, memo)?);
            }
            let args = Alts::sequence(args, self.cap());
            let bodies = self.body(i)?;
            truncated |= args.truncated || bodies.truncated;
            let dict_types =
                entry.scheme.context.iter().map(|c| constraint_tgt(self.gc, c)).collect::<SrcResult<Vec<_>>>()?;
            let method_types =
                entry.method_dicts.iter().map(|(_, c)| constraint_tgt(self.gc, c)).collect::<SrcResult<Vec<_>>>()?;
            let types: Vec<TgtType> = entry.scheme.binders.iter().map(|b| mono_tgt(&sigma[b])).collect();
            for body in &bodies.items {
                let field = entry
                    .method_dicts
                    .iter()
                    .zip(&method_types)
                    .rev()
                    .fold(body.clone(), |acc, ((d, _), t)| TgtExpr::lam(&dict_var_tgt(d), t.clone(), acc));
                let field = entry.method_binders.iter().rev().fold(field, |acc, a| TgtExpr::tylam(a, acc));
                let record = TgtExpr::record(vec![(entry.method.clone(), field)]);
                let abs = entry
                    .inst_dicts
                    .iter()
                    .zip(&dict_types)
                    .rev()
                    .fold(record, |acc, (d, t)| TgtExpr::lam(&dict_var_tgt(d), t.clone(), acc));
                let abs = entry.scheme.binders.iter().rev().fold(abs, |acc, a| TgtExpr::tylam(a, acc));
                let applied = types.iter().fold(abs, |acc, t| TgtExpr::tyapp(acc, t.clone()));
                for ds in &args.items {
                    found.push(ds.iter().fold(applied.clone(), |acc, d| TgtExpr::app(acc, d.clone())));
                }
            }
        }
        Ok(Alts::collect(found, truncated, self.cap()))
    }

    /// Elaborations of the body of entry `i`, under the entries before it.
    fn body(&self, i: usize) -> SrcResult<Alts<TgtExpr>> {
        if let Some(hit) = self.bodies.borrow().get(&i) {
            return hit.clone();
        }
        let entry = &self.p.entries[i];
        let r = self.check_in(i, &entry.local_env, &entry.body, &entry.method_type);
        self.bodies.borrow_mut().insert(i, r.clone());
        r
    }

    fn resolve(&self, visible: usize, env: &TypingEnv, q: &SrcConstraint) -> SrcResult<Alts<TgtExpr>> {
        let r = self.entail_in(visible, env, q)?;
        if r.is_empty() && !r.truncated {
            return Err(unsatisfiable(q));
        }
        Ok(r)
    }

    fn resolve_all(&self, visible: usize, env: &TypingEnv, qs: &[SrcConstraint]) -> SrcResult<Alts<Vec<TgtExpr>>> {
        let lists = qs.iter().map(|q| self.resolve(visible, env, q)).collect::<SrcResult<Vec<_>>>()?;
        Ok(Alts::sequence(lists, self.cap()))
    }

    fn infer_in(&self, visible: usize, env: &TypingEnv, e: &SrcExpr) -> SrcResult<(SrcMono, Alts<TgtExpr>)> {
        match e {
            SrcExpr::True => Ok((SrcMono::Bool, Alts::one(TgtExpr::True))),
            SrcExpr::False => Ok((SrcMono::Bool, Alts::one(TgtExpr::False))),
            SrcExpr::Let(x, scheme, e1, e2) => {
                let rule = let_rule(self.gc, env, x, scheme, e1)?;
                let dict_types =
                    rule.dicts.iter().map(|(_, q)| constraint_tgt(self.gc, q)).collect::<SrcResult<Vec<_>>>()?;
                let ty = scheme_tgt(self.gc, &rule.closed)?;
                let bound = self.check_in(visible, &rule.bound_env, &rule.bound, &rule.head)?;
                let (t, body) = self.infer_in(visible, &rule.body_env, e2)?;
                let wrap = |e1: &TgtExpr| {
                    let inner = rule
                        .dicts
                        .iter()
                        .zip(&dict_types)
                        .rev()
                        .fold(e1.clone(), |acc, ((d, _), t)| TgtExpr::lam(&dict_var_tgt(d), t.clone(), acc));
                    rule.binders.iter().rev().fold(inner, |acc, a| TgtExpr::tylam(a, acc))
                };
                let alts = bound.product(&body, self.cap(), |b, e2| TgtExpr::let_(x, ty.clone(), wrap(b), e2.clone()));
                Ok((t, alts))
            }
            SrcExpr::App(f, a) => {
                let (tf, fs) = self.infer_in(visible, env, f)?;
                let SrcMono::Arrow(t1, t2) = tf else {
                    return Err(not_a_function(&tf, f));
                };
                let args = self.check_in(visible, env, a, &t1)?;
                Ok(((*t2).clone(), fs.product(&args, self.cap(), |f, a| TgtExpr::app(f.clone(), a.clone()))))
            }
            SrcExpr::Ann(inner, t) => {
                super::relations::check_mono(env, &[], t)?;
                Ok((t.clone(), self.check_in(visible, env, inner, t)?))
            }
            SrcExpr::Var(_) | SrcExpr::Method(_) | SrcExpr::Lam(..) => Err(not_inferable(e)),
        }
    }

    fn check_in(&self, visible: usize, env: &TypingEnv, e: &SrcExpr, t: &SrcMono) -> SrcResult<Alts<TgtExpr>> {
        match e {
            SrcExpr::Var(x) if env.term(x).is_none() && self.gc.is_method(x) => self.check_method(visible, env, x, t),
            SrcExpr::Var(x) => {
                let rule = var_rule(env, x, t)?;
                let dicts = self.resolve_all(visible, env, &rule.wanted)?;
                let head = rule.types.iter().fold(TgtExpr::var(x), |acc, t| TgtExpr::tyapp(acc, mono_tgt(t)));
                Ok(dicts.map(self.cap(), |ds| ds.iter().fold(head.clone(), |acc, d| TgtExpr::app(acc, d.clone()))))
            }
            SrcExpr::Method(m) => self.check_method(visible, env, m, t),
            SrcExpr::Lam(x, body) => {
                binder_allowed(self.gc, x)?;
                let (t1, t2) = lambda_split(t, e)?;
                let inner = env.extended([SrcBinding::Term(x.clone(), SrcScheme::mono(t1.clone()))]);
                let bodies = self.check_in(visible, &inner, body, t2)?;
                let ty = mono_tgt(t1);
                Ok(bodies.map(self.cap(), |b| TgtExpr::lam(x, ty.clone(), b.clone())))
            }
            _ => {
                let (found, alts) = self.infer_in(visible, env, e)?;
                if &found != t {
                    return Err(mismatch(t, &found, e));
                }
                Ok(alts)
            }
        }
    }

    fn check_method(&self, visible: usize, env: &TypingEnv, m: &str, t: &SrcMono) -> SrcResult<Alts<TgtExpr>> {
        let rule = method_rule(self.gc, env, m, t)?;
        let class_dicts = self.resolve(visible, env, &rule.class_wanted)?;
        let method_dicts = self.resolve_all(visible, env, &rule.wanted)?;
        Ok(class_dicts.product(&method_dicts, self.cap(), |d, ds| {
            let proj = TgtExpr::proj(d.clone(), m);
            let applied = rule.types.iter().fold(proj, |acc, t| TgtExpr::tyapp(acc, mono_tgt(t)));
            ds.iter().fold(applied, |acc, d| TgtExpr::app(acc, d.clone()))
        }))
    }

    /// Checks that every instance body has at least one elaboration.
    pub fn check_bodies(&self) -> SrcResult<bool> {
        let mut truncated = false;
        for i in 0..self.p.entries.len() {
            truncated |= self.body(i)?.truncated;
        }
        Ok(truncated)
    }
}

pub fn entail_tgt(
    p: &ProgramCtx,
    gc: &ClassEnv,
    env: &TypingEnv,
    q: &SrcConstraint,
    limits: Limits,
) -> SrcResult<Alts<TgtExpr>> {
    super::relations::check_constraint(gc, env, &[], q)?;
    TgtElaborator::new(p, gc, limits).entail(env, q)
}

pub fn infer_tgt(
    p: &ProgramCtx,
    gc: &ClassEnv,
    env: &TypingEnv,
    e: &SrcExpr,
    limits: Limits,
) -> SrcResult<ElabSet<TgtExpr>> {
    let (ty, alts) = TgtElaborator::new(p, gc, limits).infer(env, e)?;
    Ok(ElabSet { ty, alternatives: alts.items, truncated: alts.truncated })
}

pub fn check_tgt(
    p: &ProgramCtx,
    gc: &ClassEnv,
    env: &TypingEnv,
    e: &SrcExpr,
    t: &SrcMono,
    limits: Limits,
) -> SrcResult<ElabSet<TgtExpr>> {
    let alts = TgtElaborator::new(p, gc, limits).check(env, e, t)?;
    Ok(ElabSet { ty: t.clone(), alternatives: alts.items, truncated: alts.truncated })
}

/// The target environment for a source environment. Instances contribute
/// nothing here, since dictionaries are built inline, but their bodies must
/// still elaborate.
pub fn elab_env_tgt(p: &ProgramCtx, gc: &ClassEnv, env: &TypingEnv, limits: Limits) -> SrcResult<TgtEnv> {
    TgtElaborator::new(p, gc, limits).check_bodies()?;
    let mut out = TgtEnv::new();
    for b in &env.entries {
        out.push(match b {
            SrcBinding::Term(x, s) => TgtBinding::Term(x.clone(), scheme_tgt(gc, s)?),
            SrcBinding::TyVar(a) => TgtBinding::TyVar(a.clone()),
            SrcBinding::Dict(d, q) => TgtBinding::Term(dict_var_tgt(d), constraint_tgt(gc, q)?),
        });
    }
    Ok(out)
}
