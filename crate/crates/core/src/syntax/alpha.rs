//! Alpha-equivalence by canonical renaming: every bound name is replaced by
//! `%k`, with `k` counting binders in traversal order. `%` cannot occur in a
//! lexed identifier, so canonical names never collide with free ones.

use super::fd::{FdDict, FdExpr, FdQ, FdType};
use super::fresh::Namespace;
use super::src::{SrcConstraint, SrcExpr, SrcMono, SrcScheme};
use super::tgt::{TgtExpr, TgtType};
use super::Name;

pub trait Alpha: Sized + PartialEq {
    /// The canonical representative of the alpha-equivalence class.
    fn canonical(&self) -> Self;

    fn alpha_eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

pub fn alpha_eq<T: Alpha>(a: &T, b: &T) -> bool {
    a.alpha_eq(b)
}

#[derive(Default)]
struct Canon {
    counter: usize,
    scope: Vec<(Namespace, Name, Name)>,
}

impl Canon {
    fn lookup(&self, ns: Namespace, x: &str) -> Name {
        self.scope
            .iter()
            .rev()
            .find(|(n, y, _)| *n == ns && y == x)
            .map(|(_, _, c)| c.clone())
            .unwrap_or_else(|| x.to_string())
    }

    fn bind(&mut self, ns: Namespace, x: &str) -> Name {
        self.counter += 1;
        let c = format!("%{}", self.counter);
        self.scope.push((ns, x.to_string(), c.clone()));
        c
    }

    fn unbind(&mut self, n: usize) {
        let len = self.scope.len();
        self.scope.truncate(len - n);
    }

    fn src_mono(&self, t: &SrcMono) -> SrcMono {
        match t {
            SrcMono::Bool => SrcMono::Bool,
            SrcMono::Var(a) => SrcMono::Var(self.lookup(Namespace::Type, a)),
            SrcMono::Arrow(l, r) => SrcMono::arrow(self.src_mono(l), self.src_mono(r)),
        }
    }

    fn src_constraint(&self, q: &SrcConstraint) -> SrcConstraint {
        SrcConstraint { class: q.class.clone(), arg: self.src_mono(&q.arg) }
    }

    /// Binds the scheme's binders and leaves them in scope; the caller
    /// unbinds `scheme.binders.len()` entries.
    fn src_scheme_open(&mut self, s: &SrcScheme) -> SrcScheme {
        let binders = s.binders.iter().map(|b| self.bind(Namespace::Type, b)).collect();
        SrcScheme {
            binders,
            context: s.context.iter().map(|q| self.src_constraint(q)).collect(),
            head: self.src_mono(&s.head),
        }
    }

    fn src_expr(&mut self, e: &SrcExpr) -> SrcExpr {
        match e {
            SrcExpr::True | SrcExpr::False | SrcExpr::Method(_) => e.clone(),
            SrcExpr::Var(x) => SrcExpr::Var(self.lookup(Namespace::Term, x)),
            SrcExpr::Lam(x, b) => {
                let c = self.bind(Namespace::Term, x);
                let b2 = self.src_expr(b);
                self.unbind(1);
                SrcExpr::Lam(c, Box::new(b2))
            }
            SrcExpr::App(f, a) => SrcExpr::app(self.src_expr(f), self.src_expr(a)),
            SrcExpr::Let(x, s, e1, e2) => {
                let s2 = self.src_scheme_open(s);
                let e1b = self.src_expr(e1);
                self.unbind(s.binders.len());
                let c = self.bind(Namespace::Term, x);
                let e2b = self.src_expr(e2);
                self.unbind(1);
                SrcExpr::Let(c, s2, Box::new(e1b), Box::new(e2b))
            }
            SrcExpr::Ann(e, t) => SrcExpr::ann(self.src_expr(e), self.src_mono(t)),
        }
    }

    fn fd_type(&mut self, t: &FdType) -> FdType {
        match t {
            FdType::Bool => FdType::Bool,
            FdType::Var(a) => FdType::Var(self.lookup(Namespace::Type, a)),
            FdType::Arrow(l, r) => FdType::arrow(self.fd_type(l), self.fd_type(r)),
            FdType::QArrow(q, r) => FdType::qarrow(self.fd_q(q), self.fd_type(r)),
            FdType::Forall(a, b) => {
                let c = self.bind(Namespace::Type, a);
                let b2 = self.fd_type(b);
                self.unbind(1);
                FdType::Forall(c, Box::new(b2))
            }
        }
    }

    fn fd_q(&mut self, q: &FdQ) -> FdQ {
        FdQ { class: q.class.clone(), arg: self.fd_type(&q.arg) }
    }

    fn fd_dict(&mut self, d: &FdDict) -> FdDict {
        match d {
            FdDict::Var(x) => FdDict::Var(self.lookup(Namespace::Dict, x)),
            FdDict::Con { ctor, types, dicts } => FdDict::Con {
                ctor: ctor.clone(),
                types: types.iter().map(|t| self.fd_type(t)).collect(),
                dicts: dicts.iter().map(|d| self.fd_dict(d)).collect(),
            },
        }
    }

    fn fd_expr(&mut self, e: &FdExpr) -> FdExpr {
        match e {
            FdExpr::True | FdExpr::False => e.clone(),
            FdExpr::Var(x) => FdExpr::Var(self.lookup(Namespace::Term, x)),
            FdExpr::Lam(x, t, b) => {
                let t2 = self.fd_type(t);
                let c = self.bind(Namespace::Term, x);
                let b2 = self.fd_expr(b);
                self.unbind(1);
                FdExpr::Lam(c, t2, Box::new(b2))
            }
            FdExpr::App(f, a) => FdExpr::app(self.fd_expr(f), self.fd_expr(a)),
            FdExpr::DLam(d, q, b) => {
                let q2 = self.fd_q(q);
                let c = self.bind(Namespace::Dict, d);
                let b2 = self.fd_expr(b);
                self.unbind(1);
                FdExpr::DLam(c, q2, Box::new(b2))
            }
            FdExpr::DApp(f, d) => {
                let f2 = self.fd_expr(f);
                FdExpr::DApp(Box::new(f2), self.fd_dict(d))
            }
            FdExpr::TyLam(a, b) => {
                let c = self.bind(Namespace::Type, a);
                let b2 = self.fd_expr(b);
                self.unbind(1);
                FdExpr::TyLam(c, Box::new(b2))
            }
            FdExpr::TyApp(f, t) => {
                let f2 = self.fd_expr(f);
                FdExpr::TyApp(Box::new(f2), self.fd_type(t))
            }
            FdExpr::Method(d, m) => FdExpr::Method(self.fd_dict(d), m.clone()),
            FdExpr::Let(x, t, e1, e2) => {
                let t2 = self.fd_type(t);
                let e1b = self.fd_expr(e1);
                let c = self.bind(Namespace::Term, x);
                let e2b = self.fd_expr(e2);
                self.unbind(1);
                FdExpr::Let(c, t2, Box::new(e1b), Box::new(e2b))
            }
        }
    }

    fn tgt_type(&mut self, t: &TgtType) -> TgtType {
        match t {
            TgtType::Bool => TgtType::Bool,
            TgtType::Var(a) => TgtType::Var(self.lookup(Namespace::Type, a)),
            TgtType::Arrow(l, r) => TgtType::arrow(self.tgt_type(l), self.tgt_type(r)),
            TgtType::Forall(a, b) => {
                let c = self.bind(Namespace::Type, a);
                let b2 = self.tgt_type(b);
                self.unbind(1);
                TgtType::Forall(c, Box::new(b2))
            }
            TgtType::Record(fs) => TgtType::Record(fs.iter().map(|(l, t)| (l.clone(), self.tgt_type(t))).collect()),
        }
    }

    fn tgt_expr(&mut self, e: &TgtExpr) -> TgtExpr {
        match e {
            TgtExpr::True | TgtExpr::False => e.clone(),
            TgtExpr::Var(x) => TgtExpr::Var(self.lookup(Namespace::Term, x)),
            TgtExpr::Lam(x, t, b) => {
                let t2 = self.tgt_type(t);
                let c = self.bind(Namespace::Term, x);
                let b2 = self.tgt_expr(b);
                self.unbind(1);
                TgtExpr::Lam(c, t2, Box::new(b2))
            }
            TgtExpr::App(f, a) => TgtExpr::app(self.tgt_expr(f), self.tgt_expr(a)),
            TgtExpr::TyLam(a, b) => {
                let c = self.bind(Namespace::Type, a);
                let b2 = self.tgt_expr(b);
                self.unbind(1);
                TgtExpr::TyLam(c, Box::new(b2))
            }
            TgtExpr::TyApp(f, t) => {
                let f2 = self.tgt_expr(f);
                TgtExpr::TyApp(Box::new(f2), self.tgt_type(t))
            }
            TgtExpr::Record(fs) => TgtExpr::Record(fs.iter().map(|(l, e)| (l.clone(), self.tgt_expr(e))).collect()),
            TgtExpr::Proj(e, l) => TgtExpr::Proj(Box::new(self.tgt_expr(e)), l.clone()),
            TgtExpr::Let(x, t, e1, e2) => {
                let t2 = self.tgt_type(t);
                let e1b = self.tgt_expr(e1);
                let c = self.bind(Namespace::Term, x);
                let e2b = self.tgt_expr(e2);
                self.unbind(1);
                TgtExpr::Let(c, t2, Box::new(e1b), Box::new(e2b))
            }
        }
    }
}

impl Alpha for SrcMono {
    fn canonical(&self) -> Self {
        self.clone()
    }
}

impl Alpha for SrcScheme {
    fn canonical(&self) -> Self {
        Canon::default().src_scheme_open(self)
    }
}

impl Alpha for SrcExpr {
    fn canonical(&self) -> Self {
        Canon::default().src_expr(self)
    }
}

impl Alpha for FdType {
    fn canonical(&self) -> Self {
        Canon::default().fd_type(self)
    }
}

impl Alpha for FdQ {
    fn canonical(&self) -> Self {
        Canon::default().fd_q(self)
    }
}

impl Alpha for FdDict {
    fn canonical(&self) -> Self {
        Canon::default().fd_dict(self)
    }
}

impl Alpha for FdExpr {
    fn canonical(&self) -> Self {
        Canon::default().fd_expr(self)
    }
}

impl Alpha for TgtType {
    fn canonical(&self) -> Self {
        Canon::default().tgt_type(self)
    }
}

impl Alpha for TgtExpr {
    fn canonical(&self) -> Self {
        Canon::default().tgt_expr(self)
    }
}

impl<T: Alpha> Alpha for Vec<T> {
    fn canonical(&self) -> Self {
        self.iter().map(Alpha::canonical).collect()
    }
}

/// Keeps the first member of each alpha-equivalence class, in order.
pub fn dedup_alpha<T: Alpha + Clone + std::hash::Hash + Eq>(items: Vec<T>) -> Vec<T> {
    let mut seen = std::collections::HashSet::new();
    items.into_iter().filter(|t| seen.insert(t.canonical())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambdas_up_to_renaming() {
        let a = TgtExpr::lam("x", TgtType::Bool, TgtExpr::var("x"));
        let b = TgtExpr::lam("y", TgtType::Bool, TgtExpr::var("y"));
        assert!(a.alpha_eq(&b));
        let c = TgtExpr::lam("x", TgtType::Bool, TgtExpr::True);
        let d = TgtExpr::lam("x", TgtType::Bool, TgtExpr::False);
        assert!(!c.alpha_eq(&d));
    }

    #[test]
    fn type_abstractions() {
        let a = FdExpr::tylam("a", FdExpr::lam("x", FdType::var("a"), FdExpr::var("x")));
        let b = FdExpr::tylam("b", FdExpr::lam("y", FdType::var("b"), FdExpr::var("y")));
        assert!(a.alpha_eq(&b));
    }

    #[test]
    fn free_names_are_significant() {
        let a = FdExpr::lam("x", FdType::Bool, FdExpr::var("y"));
        let b = FdExpr::lam("x", FdType::Bool, FdExpr::var("z"));
        assert!(!a.alpha_eq(&b));
    }

    #[test]
    fn namespaces_do_not_mix() {
        // /\a. \a : a. a: the term a and the type a are different binders
        let a = FdExpr::tylam("a", FdExpr::lam("a", FdType::var("a"), FdExpr::var("a")));
        let b = FdExpr::tylam("t", FdExpr::lam("x", FdType::var("t"), FdExpr::var("x")));
        assert!(a.alpha_eq(&b));
    }

    #[test]
    fn let_scheme_binders_scope_over_bound_term() {
        let s = |v: &str| SrcScheme {
            binders: vec![v.into()],
            context: vec![],
            head: SrcMono::arrow(SrcMono::var(v), SrcMono::var(v)),
        };
        let e = |v: &str| {
            SrcExpr::let_("f", s(v), SrcExpr::lam("x", SrcExpr::ann(SrcExpr::var("x"), SrcMono::var(v))), SrcExpr::True)
        };
        assert!(e("a").alpha_eq(&e("b")));
    }

    #[test]
    fn dedup_keeps_first() {
        let a = TgtExpr::lam("x", TgtType::Bool, TgtExpr::var("x"));
        let b = TgtExpr::lam("y", TgtType::Bool, TgtExpr::var("y"));
        let out = dedup_alpha(vec![a.clone(), b, TgtExpr::True]);
        assert_eq!(out, vec![a, TgtExpr::True]);
    }
}
