//! The target language: System F with records.

use std::collections::{HashMap, HashSet};

use super::fresh::prime_away;
use super::Name;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TgtType {
    Bool,
    Var(Name),
    Arrow(Box<TgtType>, Box<TgtType>),
    Forall(Name, Box<TgtType>),
    /// Fields sorted by label.
    Record(Vec<(Name, TgtType)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TgtExpr {
    True,
    False,
    Var(Name),
    Lam(Name, TgtType, Box<TgtExpr>),
    App(Box<TgtExpr>, Box<TgtExpr>),
    TyLam(Name, Box<TgtExpr>),
    TyApp(Box<TgtExpr>, TgtType),
    /// Fields sorted by label; duplicates are kept so the typechecker can
    /// reject them.
    Record(Vec<(Name, TgtExpr)>),
    Proj(Box<TgtExpr>, Name),
    Let(Name, TgtType, Box<TgtExpr>, Box<TgtExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TgtBinding {
    TyVar(Name),
    Term(Name, TgtType),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TgtEnv {
    pub entries: Vec<TgtBinding>,
}

impl TgtEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(&self, x: &str) -> Option<&TgtType> {
        self.entries.iter().rev().find_map(|b| match b {
            TgtBinding::Term(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    pub fn has_tyvar(&self, a: &str) -> bool {
        self.entries.iter().any(|b| matches!(b, TgtBinding::TyVar(y) if y == a))
    }

    pub fn push(&mut self, b: TgtBinding) {
        self.entries.push(b);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }
}

fn sort_fields<T>(mut fields: Vec<(Name, T)>) -> Vec<(Name, T)> {
    fields.sort_by(|a, b| a.0.cmp(&b.0));
    fields
}

impl TgtType {
    pub fn var(a: &str) -> Self {
        TgtType::Var(a.to_string())
    }

    pub fn arrow(a: TgtType, b: TgtType) -> Self {
        TgtType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn forall(a: &str, t: TgtType) -> Self {
        TgtType::Forall(a.to_string(), Box::new(t))
    }

    pub fn record(fields: Vec<(Name, TgtType)>) -> Self {
        TgtType::Record(sort_fields(fields))
    }

    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            TgtType::Bool => {}
            TgtType::Var(a) => {
                if !bound.contains(a) && !out.contains(a) {
                    out.push(a.clone());
                }
            }
            TgtType::Arrow(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            TgtType::Forall(a, t) => {
                bound.push(a.clone());
                t.collect_free(bound, out);
                bound.pop();
            }
            TgtType::Record(fs) => {
                for (_, t) in fs {
                    t.collect_free(bound, out);
                }
            }
        }
    }

    fn collect_all(&self, out: &mut HashSet<Name>) {
        match self {
            TgtType::Bool => {}
            TgtType::Var(a) => {
                out.insert(a.clone());
            }
            TgtType::Arrow(l, r) => {
                l.collect_all(out);
                r.collect_all(out);
            }
            TgtType::Forall(a, t) => {
                out.insert(a.clone());
                t.collect_all(out);
            }
            TgtType::Record(fs) => {
                for (_, t) in fs {
                    t.collect_all(out);
                }
            }
        }
    }

    pub fn subst(&self, mapping: &HashMap<Name, TgtType>) -> TgtType {
        if mapping.is_empty() {
            return self.clone();
        }
        let avoid: HashSet<Name> = mapping.values().flat_map(|t| t.free_vars()).collect();
        self.subst_with(mapping, &avoid)
    }

    pub fn subst1(&self, a: &str, t: &TgtType) -> TgtType {
        let m: HashMap<Name, TgtType> = [(a.to_string(), t.clone())].into_iter().collect();
        self.subst(&m)
    }

    fn subst_with(&self, mapping: &HashMap<Name, TgtType>, avoid: &HashSet<Name>) -> TgtType {
        match self {
            TgtType::Bool => TgtType::Bool,
            TgtType::Var(a) => mapping.get(a).cloned().unwrap_or_else(|| self.clone()),
            TgtType::Arrow(l, r) => TgtType::arrow(l.subst_with(mapping, avoid), r.subst_with(mapping, avoid)),
            TgtType::Forall(a, body) => {
                let mut inner = mapping.clone();
                inner.remove(a);
                if inner.is_empty() {
                    return self.clone();
                }
                let mut a2 = a.clone();
                if avoid.contains(a) {
                    let free = body.free_vars();
                    if inner.keys().any(|k| free.contains(k)) {
                        let mut taken = HashSet::new();
                        body.collect_all(&mut taken);
                        a2 = prime_away(a, |n| taken.contains(n) || avoid.contains(n));
                        inner.insert(a.clone(), TgtType::Var(a2.clone()));
                    }
                }
                TgtType::Forall(a2, Box::new(body.subst_with(&inner, avoid)))
            }
            TgtType::Record(fs) => {
                TgtType::Record(fs.iter().map(|(l, t)| (l.clone(), t.subst_with(mapping, avoid))).collect())
            }
        }
    }
}

/// Simultaneous substitution over term and type variables.
#[derive(Clone, Debug, Default)]
pub struct TgtSubst {
    pub terms: HashMap<Name, TgtExpr>,
    pub types: HashMap<Name, TgtType>,
}

impl TgtSubst {
    pub fn term(x: &str, e: TgtExpr) -> Self {
        let mut s = Self::default();
        s.terms.insert(x.to_string(), e);
        s
    }

    pub fn ty(a: &str, t: TgtType) -> Self {
        let mut s = Self::default();
        s.types.insert(a.to_string(), t);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.types.is_empty()
    }

    fn range_free(&self) -> (HashSet<Name>, HashSet<Name>) {
        let mut terms = HashSet::new();
        let mut types = HashSet::new();
        for e in self.terms.values() {
            let (t, ty) = e.free_names();
            terms.extend(t);
            types.extend(ty);
        }
        for t in self.types.values() {
            types.extend(t.free_vars());
        }
        (terms, types)
    }
}

impl TgtExpr {
    pub fn var(x: &str) -> Self {
        TgtExpr::Var(x.to_string())
    }

    pub fn lam(x: &str, t: TgtType, b: TgtExpr) -> Self {
        TgtExpr::Lam(x.to_string(), t, Box::new(b))
    }

    pub fn app(f: TgtExpr, a: TgtExpr) -> Self {
        TgtExpr::App(Box::new(f), Box::new(a))
    }

    pub fn tylam(a: &str, b: TgtExpr) -> Self {
        TgtExpr::TyLam(a.to_string(), Box::new(b))
    }

    pub fn tyapp(e: TgtExpr, t: TgtType) -> Self {
        TgtExpr::TyApp(Box::new(e), t)
    }

    pub fn record(fields: Vec<(Name, TgtExpr)>) -> Self {
        TgtExpr::Record(sort_fields(fields))
    }

    pub fn proj(e: TgtExpr, l: &str) -> Self {
        TgtExpr::Proj(Box::new(e), l.to_string())
    }

    pub fn let_(x: &str, t: TgtType, e1: TgtExpr, e2: TgtExpr) -> Self {
        TgtExpr::Let(x.to_string(), t, Box::new(e1), Box::new(e2))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, TgtExpr::True | TgtExpr::False | TgtExpr::Lam(..) | TgtExpr::TyLam(..) | TgtExpr::Record(_))
    }

    /// Free term variables and free type variables.
    pub fn free_names(&self) -> (HashSet<Name>, HashSet<Name>) {
        let mut terms = HashSet::new();
        let mut types = HashSet::new();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut terms, &mut types);
        (terms, types)
    }

    fn collect_free(
        &self,
        bt: &mut Vec<Name>,
        bty: &mut Vec<Name>,
        terms: &mut HashSet<Name>,
        types: &mut HashSet<Name>,
    ) {
        let ty_free = |t: &TgtType, bty: &mut Vec<Name>, types: &mut HashSet<Name>| {
            let mut fv = Vec::new();
            t.collect_free(bty, &mut fv);
            types.extend(fv);
        };
        match self {
            TgtExpr::True | TgtExpr::False => {}
            TgtExpr::Var(x) => {
                if !bt.contains(x) {
                    terms.insert(x.clone());
                }
            }
            TgtExpr::Lam(x, t, b) => {
                ty_free(t, bty, types);
                bt.push(x.clone());
                b.collect_free(bt, bty, terms, types);
                bt.pop();
            }
            TgtExpr::App(f, a) => {
                f.collect_free(bt, bty, terms, types);
                a.collect_free(bt, bty, terms, types);
            }
            TgtExpr::TyLam(a, b) => {
                bty.push(a.clone());
                b.collect_free(bt, bty, terms, types);
                bty.pop();
            }
            TgtExpr::TyApp(e, t) => {
                e.collect_free(bt, bty, terms, types);
                ty_free(t, bty, types);
            }
            TgtExpr::Record(fs) => {
                for (_, e) in fs {
                    e.collect_free(bt, bty, terms, types);
                }
            }
            TgtExpr::Proj(e, _) => e.collect_free(bt, bty, terms, types),
            TgtExpr::Let(x, t, e1, e2) => {
                ty_free(t, bty, types);
                e1.collect_free(bt, bty, terms, types);
                bt.push(x.clone());
                e2.collect_free(bt, bty, terms, types);
                bt.pop();
            }
        }
    }

    fn collect_all(&self, terms: &mut HashSet<Name>, types: &mut HashSet<Name>) {
        match self {
            TgtExpr::True | TgtExpr::False => {}
            TgtExpr::Var(x) => {
                terms.insert(x.clone());
            }
            TgtExpr::Lam(x, t, b) => {
                terms.insert(x.clone());
                t.collect_all(types);
                b.collect_all(terms, types);
            }
            TgtExpr::App(f, a) => {
                f.collect_all(terms, types);
                a.collect_all(terms, types);
            }
            TgtExpr::TyLam(a, b) => {
                types.insert(a.clone());
                b.collect_all(terms, types);
            }
            TgtExpr::TyApp(e, t) => {
                e.collect_all(terms, types);
                t.collect_all(types);
            }
            TgtExpr::Record(fs) => {
                for (_, e) in fs {
                    e.collect_all(terms, types);
                }
            }
            TgtExpr::Proj(e, _) => e.collect_all(terms, types),
            TgtExpr::Let(x, t, e1, e2) => {
                terms.insert(x.clone());
                t.collect_all(types);
                e1.collect_all(terms, types);
                e2.collect_all(terms, types);
            }
        }
    }

    pub fn subst(&self, s: &TgtSubst) -> TgtExpr {
        if s.is_empty() {
            return self.clone();
        }
        let (at, aty) = s.range_free();
        self.subst_with(s, &at, &aty)
    }

    pub fn subst_term(&self, x: &str, e: &TgtExpr) -> TgtExpr {
        self.subst(&TgtSubst::term(x, e.clone()))
    }

    pub fn subst_type(&self, a: &str, t: &TgtType) -> TgtExpr {
        self.subst(&TgtSubst::ty(a, t.clone()))
    }

    fn subst_with(&self, s: &TgtSubst, at: &HashSet<Name>, aty: &HashSet<Name>) -> TgtExpr {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            TgtExpr::True | TgtExpr::False => self.clone(),
            TgtExpr::Var(x) => s.terms.get(x).cloned().unwrap_or_else(|| self.clone()),
            TgtExpr::Lam(x, t, b) => {
                let t2 = t.subst_with(&s.types, aty);
                let (x2, inner) = self.term_binder(x, b, s, at, aty);
                TgtExpr::Lam(x2, t2, Box::new(b.subst_with(&inner, at, aty)))
            }
            TgtExpr::App(f, a) => TgtExpr::app(f.subst_with(s, at, aty), a.subst_with(s, at, aty)),
            TgtExpr::TyLam(a, b) => {
                let mut inner = s.clone();
                inner.types.remove(a);
                let mut a2 = a.clone();
                if !inner.is_empty() && aty.contains(a) && touches(b, &inner) {
                    let (mut tt, mut ty) = (HashSet::new(), HashSet::new());
                    b.collect_all(&mut tt, &mut ty);
                    a2 = prime_away(a, |n| ty.contains(n) || aty.contains(n));
                    inner.types.insert(a.clone(), TgtType::Var(a2.clone()));
                }
                TgtExpr::TyLam(a2, Box::new(b.subst_with(&inner, at, aty)))
            }
            TgtExpr::TyApp(e, t) => TgtExpr::TyApp(Box::new(e.subst_with(s, at, aty)), t.subst_with(&s.types, aty)),
            TgtExpr::Record(fs) => {
                TgtExpr::Record(fs.iter().map(|(l, e)| (l.clone(), e.subst_with(s, at, aty))).collect())
            }
            TgtExpr::Proj(e, l) => TgtExpr::Proj(Box::new(e.subst_with(s, at, aty)), l.clone()),
            TgtExpr::Let(x, t, e1, e2) => {
                let t2 = t.subst_with(&s.types, aty);
                let e1b = e1.subst_with(s, at, aty);
                let (x2, inner) = self.term_binder(x, e2, s, at, aty);
                TgtExpr::Let(x2, t2, Box::new(e1b), Box::new(e2.subst_with(&inner, at, aty)))
            }
        }
    }

    fn term_binder(
        &self,
        x: &Name,
        body: &TgtExpr,
        s: &TgtSubst,
        at: &HashSet<Name>,
        _aty: &HashSet<Name>,
    ) -> (Name, TgtSubst) {
        let mut inner = s.clone();
        inner.terms.remove(x);
        if inner.is_empty() || !at.contains(x) || !touches(body, &inner) {
            return (x.clone(), inner);
        }
        let (mut tt, mut ty) = (HashSet::new(), HashSet::new());
        body.collect_all(&mut tt, &mut ty);
        let fresh = prime_away(x, |n| tt.contains(n) || at.contains(n));
        inner.terms.insert(x.clone(), TgtExpr::Var(fresh.clone()));
        (fresh, inner)
    }

    pub fn size(&self) -> usize {
        match self {
            TgtExpr::True | TgtExpr::False | TgtExpr::Var(_) => 1,
            TgtExpr::Lam(_, _, b) | TgtExpr::TyLam(_, b) => 1 + b.size(),
            TgtExpr::App(f, a) | TgtExpr::Let(_, _, f, a) => 1 + f.size() + a.size(),
            TgtExpr::TyApp(e, _) | TgtExpr::Proj(e, _) => 1 + e.size(),
            TgtExpr::Record(fs) => 1 + fs.iter().map(|(_, e)| e.size()).sum::<usize>(),
        }
    }
}

fn touches(body: &TgtExpr, s: &TgtSubst) -> bool {
    let (ft, fty) = body.free_names();
    s.terms.keys().any(|k| ft.contains(k)) || s.types.keys().any(|k| fty.contains(k))
}
