//! The intermediate language: System F with first-class dictionaries and
//! dictionary constructors.

use std::collections::{HashMap, HashSet};

use super::fresh::prime_away;
use super::Name;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FdType {
    Bool,
    Var(Name),
    Arrow(Box<FdType>, Box<FdType>),
    QArrow(Box<FdQ>, Box<FdType>),
    Forall(Name, Box<FdType>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdQ {
    pub class: Name,
    pub arg: FdType,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdConstraintScheme {
    pub binders: Vec<Name>,
    pub context: Vec<FdQ>,
    pub head: FdQ,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FdDict {
    Var(Name),
    Con { ctor: Name, types: Vec<FdType>, dicts: Vec<FdDict> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FdExpr {
    True,
    False,
    Var(Name),
    Lam(Name, FdType, Box<FdExpr>),
    App(Box<FdExpr>, Box<FdExpr>),
    DLam(Name, FdQ, Box<FdExpr>),
    DApp(Box<FdExpr>, FdDict),
    TyLam(Name, Box<FdExpr>),
    TyApp(Box<FdExpr>, FdType),
    Method(FdDict, Name),
    Let(Name, FdType, Box<FdExpr>, Box<FdExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MethodEntry {
    pub ctor: Name,
    pub scheme: FdConstraintScheme,
    pub method: Name,
    pub imp: FdExpr,
}

/// Σ: dictionary constructors in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MethodEnv {
    pub entries: Vec<MethodEntry>,
}

impl MethodEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn position(&self, ctor: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.ctor == ctor)
    }

    pub fn get(&self, ctor: &str) -> Option<&MethodEntry> {
        self.entries.iter().find(|e| e.ctor == ctor)
    }

    /// The entries strictly before index `i`.
    pub fn prefix(&self, i: usize) -> &[MethodEntry] {
        &self.entries[..i]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdClassEntry {
    pub method: Name,
    pub class: Name,
    pub class_var: Name,
    pub method_type: FdType,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FdClassEnv {
    pub entries: Vec<FdClassEntry>,
}

impl FdClassEnv {
    pub fn by_class(&self, class: &str) -> Option<&FdClassEntry> {
        self.entries.iter().find(|e| e.class == class)
    }

    pub fn by_method(&self, method: &str) -> Option<&FdClassEntry> {
        self.entries.iter().find(|e| e.method == method)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FdBinding {
    Term(Name, FdType),
    TyVar(Name),
    Dict(Name, FdQ),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FdTypingEnv {
    pub entries: Vec<FdBinding>,
}

impl FdTypingEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(&self, x: &str) -> Option<&FdType> {
        self.entries.iter().rev().find_map(|b| match b {
            FdBinding::Term(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    pub fn dict(&self, d: &str) -> Option<&FdQ> {
        self.entries.iter().rev().find_map(|b| match b {
            FdBinding::Dict(y, q) if y == d => Some(q),
            _ => None,
        })
    }

    pub fn has_tyvar(&self, a: &str) -> bool {
        self.entries.iter().any(|b| matches!(b, FdBinding::TyVar(y) if y == a))
    }

    pub fn push(&mut self, b: FdBinding) {
        self.entries.push(b);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }
}

/// Free (or all) names of a term, split by namespace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameSets {
    pub terms: HashSet<Name>,
    pub types: HashSet<Name>,
    pub dicts: HashSet<Name>,
}

impl NameSets {
    fn extend(&mut self, other: NameSets) {
        self.terms.extend(other.terms);
        self.types.extend(other.types);
        self.dicts.extend(other.dicts);
    }
}

impl FdType {
    pub fn var(a: &str) -> Self {
        FdType::Var(a.to_string())
    }

    pub fn arrow(a: FdType, b: FdType) -> Self {
        FdType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn qarrow(q: FdQ, t: FdType) -> Self {
        FdType::QArrow(Box::new(q), Box::new(t))
    }

    pub fn forall(a: &str, t: FdType) -> Self {
        FdType::Forall(a.to_string(), Box::new(t))
    }

    /// Free type variables, first-occurrence order.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        match self {
            FdType::Bool => {}
            FdType::Var(a) => {
                if !bound.contains(a) && !out.contains(a) {
                    out.push(a.clone());
                }
            }
            FdType::Arrow(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FdType::QArrow(q, r) => {
                q.arg.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FdType::Forall(a, t) => {
                bound.push(a.clone());
                t.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn collect_all(&self, out: &mut HashSet<Name>) {
        match self {
            FdType::Bool => {}
            FdType::Var(a) => {
                out.insert(a.clone());
            }
            FdType::Arrow(l, r) => {
                l.collect_all(out);
                r.collect_all(out);
            }
            FdType::QArrow(q, r) => {
                q.arg.collect_all(out);
                r.collect_all(out);
            }
            FdType::Forall(a, t) => {
                out.insert(a.clone());
                t.collect_all(out);
            }
        }
    }

    /// Simultaneous capture-avoiding substitution of type variables.
    pub fn subst(&self, mapping: &HashMap<Name, FdType>) -> FdType {
        if mapping.is_empty() {
            return self.clone();
        }
        let avoid: HashSet<Name> = mapping.values().flat_map(|t| t.free_vars()).collect();
        self.subst_with(mapping, &avoid)
    }

    pub fn subst1(&self, a: &str, t: &FdType) -> FdType {
        let m: HashMap<Name, FdType> = [(a.to_string(), t.clone())].into_iter().collect();
        self.subst(&m)
    }

    fn subst_with(&self, mapping: &HashMap<Name, FdType>, avoid: &HashSet<Name>) -> FdType {
        match self {
            FdType::Bool => FdType::Bool,
            FdType::Var(a) => mapping.get(a).cloned().unwrap_or_else(|| self.clone()),
            FdType::Arrow(l, r) => FdType::arrow(l.subst_with(mapping, avoid), r.subst_with(mapping, avoid)),
            FdType::QArrow(q, r) => FdType::qarrow(q.subst_with(mapping, avoid), r.subst_with(mapping, avoid)),
            FdType::Forall(a, body) => {
                let (a2, inner) = bind_type(
                    a,
                    mapping,
                    avoid,
                    || {
                        let mut s = HashSet::new();
                        body.collect_all(&mut s);
                        s
                    },
                    || body.free_vars().into_iter().collect(),
                );
                match inner {
                    None => self.clone(),
                    Some(inner) => FdType::Forall(a2, Box::new(body.subst_with(&inner, avoid))),
                }
            }
        }
    }
}

/// Shared binder handling for type binders. Returns the (possibly renamed)
/// binder and the mapping to use underneath, or `None` when the mapping is
/// empty below the binder.
fn bind_type(
    a: &Name,
    mapping: &HashMap<Name, FdType>,
    avoid: &HashSet<Name>,
    all_in_body: impl FnOnce() -> HashSet<Name>,
    free_in_body: impl FnOnce() -> HashSet<Name>,
) -> (Name, Option<HashMap<Name, FdType>>) {
    let mut inner = mapping.clone();
    inner.remove(a);
    if inner.is_empty() {
        return (a.clone(), None);
    }
    if avoid.contains(a) {
        let free = free_in_body();
        if inner.keys().any(|k| free.contains(k)) {
            let mut taken = all_in_body();
            taken.extend(avoid.iter().cloned());
            taken.extend(free);
            let fresh = prime_away(a, |n| taken.contains(n));
            inner.insert(a.clone(), FdType::Var(fresh.clone()));
            return (fresh, Some(inner));
        }
    }
    (a.clone(), Some(inner))
}

impl FdQ {
    pub fn new(class: &str, arg: FdType) -> Self {
        FdQ { class: class.to_string(), arg }
    }

    pub fn subst(&self, mapping: &HashMap<Name, FdType>) -> FdQ {
        FdQ { class: self.class.clone(), arg: self.arg.subst(mapping) }
    }

    fn subst_with(&self, mapping: &HashMap<Name, FdType>, avoid: &HashSet<Name>) -> FdQ {
        FdQ { class: self.class.clone(), arg: self.arg.subst_with(mapping, avoid) }
    }
}

impl FdDict {
    pub fn var(d: &str) -> Self {
        FdDict::Var(d.to_string())
    }

    pub fn con(ctor: &str, types: Vec<FdType>, dicts: Vec<FdDict>) -> Self {
        FdDict::Con { ctor: ctor.to_string(), types, dicts }
    }

    /// A dictionary value: a constructor whose arguments are all values.
    pub fn is_value(&self) -> bool {
        match self {
            FdDict::Var(_) => false,
            FdDict::Con { dicts, .. } => dicts.iter().all(FdDict::is_value),
        }
    }

    fn collect_free(&self, bound_types: &mut Vec<Name>, out: &mut NameSets) {
        match self {
            FdDict::Var(d) => {
                out.dicts.insert(d.clone());
            }
            FdDict::Con { types, dicts, .. } => {
                for t in types {
                    let mut fv = Vec::new();
                    t.collect_free(bound_types, &mut fv);
                    out.types.extend(fv);
                }
                for d in dicts {
                    d.collect_free(bound_types, out);
                }
            }
        }
    }

    fn collect_all(&self, out: &mut NameSets) {
        match self {
            FdDict::Var(d) => {
                out.dicts.insert(d.clone());
            }
            FdDict::Con { types, dicts, .. } => {
                for t in types {
                    t.collect_all(&mut out.types);
                }
                for d in dicts {
                    d.collect_all(out);
                }
            }
        }
    }

    pub fn free_names(&self) -> NameSets {
        let mut out = NameSets::default();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn subst(&self, s: &FdSubst) -> FdDict {
        if s.is_empty() {
            return self.clone();
        }
        self.subst_with(s, &s.range_free_names())
    }

    fn subst_with(&self, s: &FdSubst, avoid: &NameSets) -> FdDict {
        match self {
            FdDict::Var(d) => s.dicts.get(d).cloned().unwrap_or_else(|| self.clone()),
            FdDict::Con { ctor, types, dicts } => FdDict::Con {
                ctor: ctor.clone(),
                types: types.iter().map(|t| t.subst_with(&s.types, &avoid.types)).collect(),
                dicts: dicts.iter().map(|d| d.subst_with(s, avoid)).collect(),
            },
        }
    }

    /// Constructor names mentioned anywhere in the dictionary.
    pub fn constructors(&self, out: &mut Vec<Name>) {
        if let FdDict::Con { ctor, dicts, .. } = self {
            if !out.contains(ctor) {
                out.push(ctor.clone());
            }
            for d in dicts {
                d.constructors(out);
            }
        }
    }
}

/// Simultaneous substitution for all three namespaces of the intermediate
/// language.
#[derive(Clone, Debug, Default)]
pub struct FdSubst {
    pub terms: HashMap<Name, FdExpr>,
    pub types: HashMap<Name, FdType>,
    pub dicts: HashMap<Name, FdDict>,
}

impl FdSubst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(x: &str, e: FdExpr) -> Self {
        let mut s = Self::new();
        s.terms.insert(x.to_string(), e);
        s
    }

    pub fn ty(a: &str, t: FdType) -> Self {
        let mut s = Self::new();
        s.types.insert(a.to_string(), t);
        s
    }

    pub fn dict(d: &str, v: FdDict) -> Self {
        let mut s = Self::new();
        s.dicts.insert(d.to_string(), v);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.types.is_empty() && self.dicts.is_empty()
    }

    fn range_free_names(&self) -> NameSets {
        let mut out = NameSets::default();
        for e in self.terms.values() {
            out.extend(e.free_names());
        }
        for t in self.types.values() {
            out.types.extend(t.free_vars());
        }
        for d in self.dicts.values() {
            out.extend(d.free_names());
        }
        out
    }
}

#[derive(Clone, Copy)]
enum Ns {
    Term,
    Type,
    Dict,
}

impl FdExpr {
    pub fn var(x: &str) -> Self {
        FdExpr::Var(x.to_string())
    }

    pub fn lam(x: &str, t: FdType, b: FdExpr) -> Self {
        FdExpr::Lam(x.to_string(), t, Box::new(b))
    }

    pub fn app(f: FdExpr, a: FdExpr) -> Self {
        FdExpr::App(Box::new(f), Box::new(a))
    }

    pub fn dlam(d: &str, q: FdQ, b: FdExpr) -> Self {
        FdExpr::DLam(d.to_string(), q, Box::new(b))
    }

    pub fn dapp(e: FdExpr, d: FdDict) -> Self {
        FdExpr::DApp(Box::new(e), d)
    }

    pub fn tylam(a: &str, b: FdExpr) -> Self {
        FdExpr::TyLam(a.to_string(), Box::new(b))
    }

    pub fn tyapp(e: FdExpr, t: FdType) -> Self {
        FdExpr::TyApp(Box::new(e), t)
    }

    pub fn let_(x: &str, t: FdType, e1: FdExpr, e2: FdExpr) -> Self {
        FdExpr::Let(x.to_string(), t, Box::new(e1), Box::new(e2))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, FdExpr::True | FdExpr::False | FdExpr::Lam(..) | FdExpr::DLam(..) | FdExpr::TyLam(..))
    }

    pub fn free_names(&self) -> NameSets {
        let mut out = NameSets::default();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bt: &mut Vec<Name>, bty: &mut Vec<Name>, bd: &mut Vec<Name>, out: &mut NameSets) {
        let ty_free = |t: &FdType, bty: &mut Vec<Name>, out: &mut NameSets| {
            let mut fv = Vec::new();
            t.collect_free(bty, &mut fv);
            out.types.extend(fv);
        };
        let dict_free = |d: &FdDict, bty: &mut Vec<Name>, bd: &Vec<Name>, out: &mut NameSets| {
            let mut tmp = NameSets::default();
            d.collect_free(bty, &mut tmp);
            out.types.extend(tmp.types);
            out.dicts.extend(tmp.dicts.into_iter().filter(|x| !bd.contains(x)));
        };
        match self {
            FdExpr::True | FdExpr::False => {}
            FdExpr::Var(x) => {
                if !bt.contains(x) {
                    out.terms.insert(x.clone());
                }
            }
            FdExpr::Lam(x, t, b) => {
                ty_free(t, bty, out);
                bt.push(x.clone());
                b.collect_free(bt, bty, bd, out);
                bt.pop();
            }
            FdExpr::App(f, a) => {
                f.collect_free(bt, bty, bd, out);
                a.collect_free(bt, bty, bd, out);
            }
            FdExpr::DLam(d, q, b) => {
                ty_free(&q.arg, bty, out);
                bd.push(d.clone());
                b.collect_free(bt, bty, bd, out);
                bd.pop();
            }
            FdExpr::DApp(e, d) => {
                e.collect_free(bt, bty, bd, out);
                dict_free(d, bty, bd, out);
            }
            FdExpr::TyLam(a, b) => {
                bty.push(a.clone());
                b.collect_free(bt, bty, bd, out);
                bty.pop();
            }
            FdExpr::TyApp(e, t) => {
                e.collect_free(bt, bty, bd, out);
                ty_free(t, bty, out);
            }
            FdExpr::Method(d, _) => dict_free(d, bty, bd, out),
            FdExpr::Let(x, t, e1, e2) => {
                ty_free(t, bty, out);
                e1.collect_free(bt, bty, bd, out);
                bt.push(x.clone());
                e2.collect_free(bt, bty, bd, out);
                bt.pop();
            }
        }
    }

    /// Every name occurring in the term, bound or free.
    pub fn all_names(&self) -> NameSets {
        let mut out = NameSets::default();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut NameSets) {
        match self {
            FdExpr::True | FdExpr::False => {}
            FdExpr::Var(x) => {
                out.terms.insert(x.clone());
            }
            FdExpr::Lam(x, t, b) => {
                out.terms.insert(x.clone());
                t.collect_all(&mut out.types);
                b.collect_all(out);
            }
            FdExpr::App(f, a) => {
                f.collect_all(out);
                a.collect_all(out);
            }
            FdExpr::DLam(d, q, b) => {
                out.dicts.insert(d.clone());
                q.arg.collect_all(&mut out.types);
                b.collect_all(out);
            }
            FdExpr::DApp(e, d) => {
                e.collect_all(out);
                d.collect_all(out);
            }
            FdExpr::TyLam(a, b) => {
                out.types.insert(a.clone());
                b.collect_all(out);
            }
            FdExpr::TyApp(e, t) => {
                e.collect_all(out);
                t.collect_all(&mut out.types);
            }
            FdExpr::Method(d, _) => d.collect_all(out),
            FdExpr::Let(x, t, e1, e2) => {
                out.terms.insert(x.clone());
                t.collect_all(&mut out.types);
                e1.collect_all(out);
                e2.collect_all(out);
            }
        }
    }

    /// Simultaneous capture-avoiding substitution over terms, types and
    /// dictionaries.
    pub fn subst(&self, s: &FdSubst) -> FdExpr {
        if s.is_empty() {
            return self.clone();
        }
        let avoid = s.range_free_names();
        self.subst_with(s, &avoid)
    }

    pub fn subst_term(&self, x: &str, e: &FdExpr) -> FdExpr {
        self.subst(&FdSubst::term(x, e.clone()))
    }

    pub fn subst_type(&self, a: &str, t: &FdType) -> FdExpr {
        self.subst(&FdSubst::ty(a, t.clone()))
    }

    pub fn subst_dict(&self, d: &str, v: &FdDict) -> FdExpr {
        self.subst(&FdSubst::dict(d, v.clone()))
    }

    fn subst_with(&self, s: &FdSubst, avoid: &NameSets) -> FdExpr {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            FdExpr::True | FdExpr::False => self.clone(),
            FdExpr::Var(x) => s.terms.get(x).cloned().unwrap_or_else(|| self.clone()),
            FdExpr::Lam(x, t, b) => {
                let t2 = t.subst_with(&s.types, &avoid.types);
                let (x2, inner) = binder(Ns::Term, x, b, s, avoid);
                FdExpr::Lam(x2, t2, Box::new(b.subst_with(&inner, avoid)))
            }
            FdExpr::App(f, a) => FdExpr::app(f.subst_with(s, avoid), a.subst_with(s, avoid)),
            FdExpr::DLam(d, q, b) => {
                let q2 = q.subst_with(&s.types, &avoid.types);
                let (d2, inner) = binder(Ns::Dict, d, b, s, avoid);
                FdExpr::DLam(d2, q2, Box::new(b.subst_with(&inner, avoid)))
            }
            FdExpr::DApp(e, d) => FdExpr::DApp(Box::new(e.subst_with(s, avoid)), d.subst_with(s, avoid)),
            FdExpr::TyLam(a, b) => {
                let (a2, inner) = binder(Ns::Type, a, b, s, avoid);
                FdExpr::TyLam(a2, Box::new(b.subst_with(&inner, avoid)))
            }
            FdExpr::TyApp(e, t) => {
                FdExpr::TyApp(Box::new(e.subst_with(s, avoid)), t.subst_with(&s.types, &avoid.types))
            }
            FdExpr::Method(d, m) => FdExpr::Method(d.subst_with(s, avoid), m.clone()),
            FdExpr::Let(x, t, e1, e2) => {
                let t2 = t.subst_with(&s.types, &avoid.types);
                let e1b = e1.subst_with(s, avoid);
                let (x2, inner) = binder(Ns::Term, x, e2, s, avoid);
                FdExpr::Let(x2, t2, Box::new(e1b), Box::new(e2.subst_with(&inner, avoid)))
            }
        }
    }

    /// Constructor names mentioned anywhere in the term.
    pub fn constructors(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_ctors(&mut out);
        out
    }

    fn collect_ctors(&self, out: &mut Vec<Name>) {
        match self {
            FdExpr::True | FdExpr::False | FdExpr::Var(_) => {}
            FdExpr::Lam(_, _, b) | FdExpr::DLam(_, _, b) | FdExpr::TyLam(_, b) => b.collect_ctors(out),
            FdExpr::App(f, a) => {
                f.collect_ctors(out);
                a.collect_ctors(out);
            }
            FdExpr::DApp(e, d) => {
                e.collect_ctors(out);
                d.constructors(out);
            }
            FdExpr::TyApp(e, _) => e.collect_ctors(out),
            FdExpr::Method(d, _) => d.constructors(out),
            FdExpr::Let(_, _, e1, e2) => {
                e1.collect_ctors(out);
                e2.collect_ctors(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FdExpr::True | FdExpr::False | FdExpr::Var(_) | FdExpr::Method(..) => 1,
            FdExpr::Lam(_, _, b) | FdExpr::DLam(_, _, b) | FdExpr::TyLam(_, b) => 1 + b.size(),
            FdExpr::App(f, a) | FdExpr::Let(_, _, f, a) => 1 + f.size() + a.size(),
            FdExpr::DApp(e, _) | FdExpr::TyApp(e, _) => 1 + e.size(),
        }
    }
}

/// Prepares the substitution to apply beneath a binder, renaming the binder
/// when it would capture a free name of the substitution's range.
fn binder(ns: Ns, x: &Name, body: &FdExpr, s: &FdSubst, avoid: &NameSets) -> (Name, FdSubst) {
    let mut inner = s.clone();
    let avoid_set = match ns {
        Ns::Term => {
            inner.terms.remove(x);
            &avoid.terms
        }
        Ns::Type => {
            inner.types.remove(x);
            &avoid.types
        }
        Ns::Dict => {
            inner.dicts.remove(x);
            &avoid.dicts
        }
    };
    if inner.is_empty() || !avoid_set.contains(x) {
        return (x.clone(), inner);
    }
    let free = body.free_names();
    let touched = inner.terms.keys().any(|k| free.terms.contains(k))
        || inner.types.keys().any(|k| free.types.contains(k))
        || inner.dicts.keys().any(|k| free.dicts.contains(k));
    if !touched {
        return (x.clone(), inner);
    }
    let all = body.all_names();
    let fresh = match ns {
        Ns::Term => prime_away(x, |n| all.terms.contains(n) || avoid.terms.contains(n)),
        Ns::Type => prime_away(x, |n| all.types.contains(n) || avoid.types.contains(n)),
        Ns::Dict => prime_away(x, |n| all.dicts.contains(n) || avoid.dicts.contains(n)),
    };
    match ns {
        Ns::Term => {
            inner.terms.insert(x.clone(), FdExpr::Var(fresh.clone()));
        }
        Ns::Type => {
            inner.types.insert(x.clone(), FdType::Var(fresh.clone()));
        }
        Ns::Dict => {
            inner.dicts.insert(x.clone(), FdDict::Var(fresh.clone()));
        }
    }
    (fresh, inner)
}
