use crate::syntax::{Name, SrcConstraint, SrcConstraintScheme, SrcExpr, SrcMono, SrcScheme};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub method: Name,
    pub superclasses: Vec<Name>,
    pub class: Name,
    pub class_var: Name,
    /// The method's own scheme; the class variable is free in it.
    pub method_scheme: SrcScheme,
}

impl ClassEntry {
    /// `forall class_var binders. context => head`, the scheme a method
    /// occurrence is instantiated from. The class constraint itself is not
    /// part of the context.
    pub fn full_binders(&self) -> Vec<Name> {
        let mut v = vec![self.class_var.clone()];
        v.extend(self.method_scheme.binders.iter().cloned());
        v
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassEnv {
    pub entries: Vec<ClassEntry>,
}

impl ClassEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn by_class(&self, class: &str) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| e.class == class)
    }

    pub fn by_method(&self, method: &str) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| e.method == method)
    }

    pub fn is_method(&self, name: &str) -> bool {
        self.by_method(name).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SrcBinding {
    Term(Name, SrcScheme),
    TyVar(Name),
    Dict(Name, SrcConstraint),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypingEnv {
    pub entries: Vec<SrcBinding>,
}

impl TypingEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(&self, x: &str) -> Option<&SrcScheme> {
        self.entries.iter().rev().find_map(|b| match b {
            SrcBinding::Term(y, s) if y == x => Some(s),
            _ => None,
        })
    }

    pub fn has_tyvar(&self, a: &str) -> bool {
        self.entries.iter().any(|b| matches!(b, SrcBinding::TyVar(c) if c == a))
    }

    pub fn has_dict(&self, d: &str) -> bool {
        self.entries.iter().any(|b| matches!(b, SrcBinding::Dict(e, _) if e == d))
    }

    pub fn tyvars(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().filter_map(|b| match b {
            SrcBinding::TyVar(a) => Some(a),
            _ => None,
        })
    }

    /// Local dictionaries in environment order.
    pub fn dicts(&self) -> impl Iterator<Item = (&Name, &SrcConstraint)> {
        self.entries.iter().filter_map(|b| match b {
            SrcBinding::Dict(d, q) => Some((d, q)),
            _ => None,
        })
    }

    pub fn push(&mut self, b: SrcBinding) {
        self.entries.push(b);
    }

    pub fn extended(&self, bs: impl IntoIterator<Item = SrcBinding>) -> TypingEnv {
        let mut out = self.clone();
        out.entries.extend(bs);
        out
    }
}

/// One instance axiom. The body is kept as source; each pipeline elaborates
/// it on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramEntry {
    pub ctor: Name,
    /// Binders are the free variables of the head; the context is the
    /// superclass closure of the declared instance context.
    pub scheme: SrcConstraintScheme,
    pub method: Name,
    /// Instance binders, instance dictionaries, method binders and method
    /// dictionaries, in that order.
    pub local_env: TypingEnv,
    pub body: SrcExpr,
    pub inst_dicts: Vec<Name>,
    pub method_binders: Vec<Name>,
    /// Method dictionaries with the constraints they stand for, already
    /// instantiated at the instance head.
    pub method_dicts: Vec<(Name, SrcConstraint)>,
    /// The method type at the instance head; the body is checked against it.
    pub method_type: SrcMono,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramCtx {
    pub entries: Vec<ProgramEntry>,
}

impl ProgramCtx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn position(&self, ctor: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.ctor == ctor)
    }

    pub fn prefix(&self, i: usize) -> ProgramCtx {
        ProgramCtx { entries: self.entries[..i].to_vec() }
    }
}
