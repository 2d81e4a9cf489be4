//! Source language: Bool-only lambda calculus with single-parameter type
//! classes, superclasses and flexible contexts.

use std::collections::{HashMap, HashSet};

use super::fresh::prime_away_set;
use super::Name;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SrcMono {
    Bool,
    Var(Name),
    Arrow(Box<SrcMono>, Box<SrcMono>),
}

impl SrcMono {
    pub fn var(name: &str) -> Self {
        SrcMono::Var(name.to_string())
    }

    pub fn arrow(from: SrcMono, to: SrcMono) -> Self {
        SrcMono::Arrow(Box::new(from), Box::new(to))
    }

    /// Free type variables, in left-to-right order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            SrcMono::Bool => {}
            SrcMono::Var(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            SrcMono::Arrow(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, a: &str) -> bool {
        match self {
            SrcMono::Bool => false,
            SrcMono::Var(b) => a == b,
            SrcMono::Arrow(l, r) => l.mentions(a) || r.mentions(a),
        }
    }

    /// Simultaneous substitution. Monotypes have no binders, so there is
    /// nothing to capture.
    pub fn subst(&self, mapping: &HashMap<Name, SrcMono>) -> SrcMono {
        match self {
            SrcMono::Bool => SrcMono::Bool,
            SrcMono::Var(a) => mapping.get(a).cloned().unwrap_or_else(|| self.clone()),
            SrcMono::Arrow(l, r) => SrcMono::arrow(l.subst(mapping), r.subst(mapping)),
        }
    }

    /// Splits `t1 -> ... -> tn -> r` into its argument list and result.
    pub fn split_arrows(&self) -> (Vec<&SrcMono>, &SrcMono) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SrcMono::Arrow(l, r) = cur {
            args.push(l.as_ref());
            cur = r;
        }
        (args, cur)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SrcConstraint {
    pub class: Name,
    pub arg: SrcMono,
}

impl SrcConstraint {
    pub fn new(class: &str, arg: SrcMono) -> Self {
        SrcConstraint { class: class.to_string(), arg }
    }

    pub fn subst(&self, mapping: &HashMap<Name, SrcMono>) -> SrcConstraint {
        SrcConstraint { class: self.class.clone(), arg: self.arg.subst(mapping) }
    }
}

/// `forall binders. context => head`, with nested qualified types flattened.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SrcScheme {
    pub binders: Vec<Name>,
    pub context: Vec<SrcConstraint>,
    pub head: SrcMono,
}

impl SrcScheme {
    pub fn mono(head: SrcMono) -> Self {
        SrcScheme { binders: Vec::new(), context: Vec::new(), head }
    }

    pub fn is_mono(&self) -> bool {
        self.binders.is_empty() && self.context.is_empty()
    }

    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        for q in &self.context {
            q.arg.collect_vars(&mut out);
        }
        self.head.collect_vars(&mut out);
        out.retain(|a| !self.binders.contains(a));
        out
    }

    /// Capture-avoiding substitution; binders that would capture a free
    /// variable of the mapping's range are primed.
    pub fn subst(&self, mapping: &HashMap<Name, SrcMono>) -> SrcScheme {
        let mut inner: HashMap<Name, SrcMono> =
            mapping.iter().filter(|(k, _)| !self.binders.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut avoid: HashSet<Name> = inner.values().flat_map(|t| t.free_vars()).collect();
        avoid.extend(self.free_vars());
        avoid.extend(self.binders.iter().cloned());
        let mut binders = Vec::with_capacity(self.binders.len());
        for b in &self.binders {
            let range_mentions = inner.values().any(|t| t.mentions(b));
            if range_mentions {
                let fresh = prime_away_set(b, &avoid);
                avoid.insert(fresh.clone());
                inner.insert(b.clone(), SrcMono::Var(fresh.clone()));
                binders.push(fresh);
            } else {
                binders.push(b.clone());
            }
        }
        SrcScheme {
            binders,
            context: self.context.iter().map(|q| q.subst(&inner)).collect(),
            head: self.head.subst(&inner),
        }
    }

    /// Renames the binders so that none of them is in `avoid`.
    pub fn rename_apart(&self, avoid: &HashSet<Name>) -> SrcScheme {
        let mut taken: HashSet<Name> = avoid.clone();
        taken.extend(self.free_vars());
        taken.extend(self.binders.iter().cloned());
        let mut ren = HashMap::new();
        let mut binders = Vec::new();
        for b in &self.binders {
            if avoid.contains(b) {
                let fresh = prime_away_set(b, &taken);
                taken.insert(fresh.clone());
                ren.insert(b.clone(), SrcMono::Var(fresh.clone()));
                binders.push(fresh);
            } else {
                binders.push(b.clone());
            }
        }
        SrcScheme {
            binders,
            context: self.context.iter().map(|q| q.subst(&ren)).collect(),
            head: self.head.subst(&ren),
        }
    }
}

/// `forall binders. context => head` over a class constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SrcConstraintScheme {
    pub binders: Vec<Name>,
    pub context: Vec<SrcConstraint>,
    pub head: SrcConstraint,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SrcExpr {
    True,
    False,
    Var(Name),
    Method(Name),
    Lam(Name, Box<SrcExpr>),
    App(Box<SrcExpr>, Box<SrcExpr>),
    Let(Name, SrcScheme, Box<SrcExpr>, Box<SrcExpr>),
    Ann(Box<SrcExpr>, SrcMono),
}

impl SrcExpr {
    pub fn var(name: &str) -> Self {
        SrcExpr::Var(name.to_string())
    }

    pub fn lam(x: &str, body: SrcExpr) -> Self {
        SrcExpr::Lam(x.to_string(), Box::new(body))
    }

    pub fn app(f: SrcExpr, a: SrcExpr) -> Self {
        SrcExpr::App(Box::new(f), Box::new(a))
    }

    pub fn ann(e: SrcExpr, t: SrcMono) -> Self {
        SrcExpr::Ann(Box::new(e), t)
    }

    pub fn let_(x: &str, scheme: SrcScheme, bound: SrcExpr, body: SrcExpr) -> Self {
        SrcExpr::Let(x.to_string(), scheme, Box::new(bound), Box::new(body))
    }
}

/// An expression with exactly one hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SrcCtxExpr {
    Hole,
    Lam(Name, Box<SrcCtxExpr>),
    AppL(Box<SrcCtxExpr>, SrcExpr),
    AppR(SrcExpr, Box<SrcCtxExpr>),
    LetL(Name, SrcScheme, Box<SrcCtxExpr>, SrcExpr),
    LetR(Name, SrcScheme, SrcExpr, Box<SrcCtxExpr>),
    Ann(Box<SrcCtxExpr>, SrcMono),
}

impl SrcCtxExpr {
    /// Fills the hole with `e` verbatim. Binders of the context may capture
    /// free variables of `e`; plugging is not substitution.
    pub fn plug(&self, e: &SrcExpr) -> SrcExpr {
        match self {
            SrcCtxExpr::Hole => e.clone(),
            SrcCtxExpr::Lam(x, c) => SrcExpr::Lam(x.clone(), Box::new(c.plug(e))),
            SrcCtxExpr::AppL(c, a) => SrcExpr::App(Box::new(c.plug(e)), Box::new(a.clone())),
            SrcCtxExpr::AppR(f, c) => SrcExpr::App(Box::new(f.clone()), Box::new(c.plug(e))),
            SrcCtxExpr::LetL(x, s, c, b) => {
                SrcExpr::Let(x.clone(), s.clone(), Box::new(c.plug(e)), Box::new(b.clone()))
            }
            SrcCtxExpr::LetR(x, s, b, c) => {
                SrcExpr::Let(x.clone(), s.clone(), Box::new(b.clone()), Box::new(c.plug(e)))
            }
            SrcCtxExpr::Ann(c, t) => SrcExpr::Ann(Box::new(c.plug(e)), t.clone()),
        }
    }
}

/// Free-function form of [`SrcCtxExpr::plug`].
pub fn plug(ctx: &SrcCtxExpr, e: &SrcExpr) -> SrcExpr {
    ctx.plug(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassDecl {
    pub superclasses: Vec<Name>,
    pub class: Name,
    pub class_var: Name,
    pub method: Name,
    pub method_scheme: SrcScheme,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InstDecl {
    pub context: Vec<SrcConstraint>,
    pub class: Name,
    pub head: SrcMono,
    pub method: Name,
    pub body: SrcExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Decl {
    Class(ClassDecl),
    Instance(InstDecl),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SrcProgram {
    pub decls: Vec<Decl>,
    pub main: SrcExpr,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> SrcMono {
        SrcMono::var("a")
    }
    fn b() -> SrcMono {
        SrcMono::var("b")
    }

    #[test]
    fn subst_direct_and_absent() {
        let m: HashMap<_, _> = [("a".to_string(), SrcMono::Bool)].into_iter().collect();
        assert_eq!(SrcMono::arrow(a(), a()).subst(&m), SrcMono::arrow(SrcMono::Bool, SrcMono::Bool));
        assert_eq!(SrcMono::Bool.subst(&m), SrcMono::Bool);
    }

    #[test]
    fn free_vars_first_occurrence() {
        let t = SrcMono::arrow(a(), SrcMono::arrow(SrcMono::Bool, b()));
        assert_eq!(t.free_vars(), vec!["a", "b"]);
        assert!(SrcMono::Bool.free_vars().is_empty());
        let t = SrcMono::arrow(b(), SrcMono::arrow(a(), b()));
        assert_eq!(t.free_vars(), vec!["b", "a"]);
    }

    #[test]
    fn scheme_subst_avoids_capture() {
        // forall a. a -> b  with b := a
        let s = SrcScheme { binders: vec!["a".into()], context: vec![], head: SrcMono::arrow(a(), b()) };
        let m: HashMap<_, _> = [("b".to_string(), a())].into_iter().collect();
        let r = s.subst(&m);
        assert_eq!(r.binders, vec!["a'"]);
        assert_eq!(r.head, SrcMono::arrow(SrcMono::var("a'"), a()));
    }

    #[test]
    fn plug_captures() {
        let ctx = SrcCtxExpr::Lam("x".into(), Box::new(SrcCtxExpr::Hole));
        assert_eq!(ctx.plug(&SrcExpr::var("x")), SrcExpr::lam("x", SrcExpr::var("x")));
        assert_eq!(SrcCtxExpr::Hole.plug(&SrcExpr::True), SrcExpr::True);
        let s = SrcScheme::mono(SrcMono::Bool);
        let ctx = SrcCtxExpr::LetL("f".into(), s.clone(), Box::new(SrcCtxExpr::Hole), SrcExpr::var("f"));
        assert_eq!(ctx.plug(&SrcExpr::False), SrcExpr::let_("f", s, SrcExpr::False, SrcExpr::var("f")));
    }
}
