use std::collections::HashMap;

use super::elab::{dict_target_name, elab_fd_q, elab_fd_type};
use super::{FdErrorKind, FdTypeError};
use crate::syntax::fresh::prime_away;
use crate::syntax::{Alpha, FdBinding, FdClassEnv, FdDict, FdExpr, FdQ, FdType, FdTypingEnv, MethodEnv, Name, TgtExpr};

/// Typechecks intermediate terms against a method environment, producing
/// the target elaboration alongside each type.
///
/// A dictionary constructor's implementation is checked against the entries
/// declared before it, once per checker. A *trusting* checker tolerates
/// implementations that fail that check: constructors are then typed by
/// their schemes alone and elaborate to an opaque placeholder.
pub struct FdChecker<'a> {
    sigma: &'a MethodEnv,
    tc: &'a FdClassEnv,
    trusting: bool,
    memo: HashMap<usize, Result<TgtExpr, FdTypeError>>,
}

pub fn fd_typecheck_expr(
    sigma: &MethodEnv,
    tc: &FdClassEnv,
    tt: &FdTypingEnv,
    e: &FdExpr,
) -> Result<(FdType, TgtExpr), FdTypeError> {
    FdChecker::new(sigma, tc).expr(tt, e)
}

pub fn fd_typecheck_dict(
    sigma: &MethodEnv,
    tc: &FdClassEnv,
    tt: &FdTypingEnv,
    d: &FdDict,
) -> Result<(FdQ, TgtExpr), FdTypeError> {
    FdChecker::new(sigma, tc).dict(tt, d)
}

fn mismatch(expected: &impl std::fmt::Display, found: &impl std::fmt::Display) -> FdTypeError {
    FdTypeError::new(FdErrorKind::Mismatch, format!("expected `{expected}`, found `{found}`"))
}

impl<'a> FdChecker<'a> {
    pub fn new(sigma: &'a MethodEnv, tc: &'a FdClassEnv) -> Self {
        FdChecker { sigma, tc, trusting: false, memo: HashMap::new() }
    }

    pub fn trusting(sigma: &'a MethodEnv, tc: &'a FdClassEnv) -> Self {
        FdChecker { sigma, tc, trusting: true, memo: HashMap::new() }
    }

    pub fn expr(&mut self, tt: &FdTypingEnv, e: &FdExpr) -> Result<(FdType, TgtExpr), FdTypeError> {
        let mut env = tt.clone();
        self.expr_in(self.sigma.len(), &mut env, e)
    }

    pub fn dict(&mut self, tt: &FdTypingEnv, d: &FdDict) -> Result<(FdQ, TgtExpr), FdTypeError> {
        self.dict_in(self.sigma.len(), tt, d)
    }

    /// Typing of `e` with only the first `limit` constructors visible.
    fn expr_in(&mut self, limit: usize, env: &mut FdTypingEnv, e: &FdExpr) -> Result<(FdType, TgtExpr), FdTypeError> {
        match e {
            FdExpr::True => Ok((FdType::Bool, TgtExpr::True)),
            FdExpr::False => Ok((FdType::Bool, TgtExpr::False)),
            FdExpr::Var(x) => match env.term(x) {
                Some(t) => Ok((t.clone(), TgtExpr::Var(x.clone()))),
                None => Err(FdTypeError::new(FdErrorKind::UnboundVar, format!("variable `{x}` is not in scope"))),
            },
            FdExpr::Lam(x, t, b) => {
                let tt = elab_fd_type(self.tc, env, t).map_err(|er| er.at("annotation"))?;
                env.push(FdBinding::Term(x.clone(), t.clone()));
                let r = self.expr_in(limit, env, b);
                env.pop();
                let (tb, teb) = r.map_err(|er| er.at("body"))?;
                Ok((FdType::arrow(t.clone(), tb), TgtExpr::Lam(x.clone(), tt, Box::new(teb))))
            }
            FdExpr::App(f, a) => {
                let (tf, tef) = self.expr_in(limit, env, f).map_err(|er| er.at("fun"))?;
                let (ta, tea) = self.expr_in(limit, env, a).map_err(|er| er.at("arg"))?;
                match tf {
                    FdType::Arrow(dom, cod) => {
                        if !dom.alpha_eq(&ta) {
                            return Err(mismatch(&dom, &ta).at("arg"));
                        }
                        Ok((*cod, TgtExpr::app(tef, tea)))
                    }
                    other => {
                        Err(FdTypeError::new(FdErrorKind::Mismatch, format!("`{other}` is not a function type"))
                            .at("fun"))
                    }
                }
            }
            FdExpr::DLam(d, q, b) => {
                let tq = elab_fd_q(self.tc, env, q).map_err(|er| er.at("annotation"))?;
                env.push(FdBinding::Dict(d.clone(), q.clone()));
                let r = self.expr_in(limit, env, b);
                env.pop();
                let (tb, teb) = r.map_err(|er| er.at("body"))?;
                Ok((FdType::qarrow(q.clone(), tb), TgtExpr::Lam(dict_target_name(d), tq, Box::new(teb))))
            }
            FdExpr::DApp(f, d) => {
                let (tf, tef) = self.expr_in(limit, env, f).map_err(|er| er.at("fun"))?;
                let (qd, ted) = self.dict_in(limit, env, d).map_err(|er| er.at("dict"))?;
                match tf {
                    FdType::QArrow(q, rest) => {
                        if !q.alpha_eq(&qd) {
                            return Err(mismatch(&q, &qd).at("dict"));
                        }
                        Ok((*rest, TgtExpr::app(tef, ted)))
                    }
                    other => {
                        Err(FdTypeError::new(FdErrorKind::Mismatch, format!("`{other}` does not take a dictionary"))
                            .at("fun"))
                    }
                }
            }
            FdExpr::TyLam(a, b) => {
                if env.has_tyvar(a) {
                    let mut taken = b.all_names().types;
                    for bnd in &env.entries {
                        if let FdBinding::TyVar(y) = bnd {
                            taken.insert(y.clone());
                        }
                    }
                    let fresh = prime_away(a, |n| taken.contains(n));
                    let renamed = b.subst_type(a, &FdType::Var(fresh.clone()));
                    return self.expr_in(limit, env, &FdExpr::TyLam(fresh, Box::new(renamed)));
                }
                env.push(FdBinding::TyVar(a.clone()));
                let r = self.expr_in(limit, env, b);
                env.pop();
                let (tb, teb) = r.map_err(|er| er.at("body"))?;
                Ok((FdType::forall(a, tb), TgtExpr::tylam(a, teb)))
            }
            FdExpr::TyApp(f, t) => {
                let tt = elab_fd_type(self.tc, env, t).map_err(|er| er.at("type"))?;
                let (tf, tef) = self.expr_in(limit, env, f).map_err(|er| er.at("fun"))?;
                match tf {
                    FdType::Forall(a, body) => Ok((body.subst1(&a, t), TgtExpr::tyapp(tef, tt))),
                    other => {
                        Err(FdTypeError::new(FdErrorKind::Mismatch, format!("`{other}` is not polymorphic")).at("fun"))
                    }
                }
            }
            FdExpr::Method(d, m) => {
                let (q, ted) = self.dict_in(limit, env, d).map_err(|er| er.at("dict"))?;
                let entry = self
                    .tc
                    .by_method(m)
                    .ok_or_else(|| FdTypeError::new(FdErrorKind::UnknownMethod, format!("unknown method `{m}`")))?;
                if entry.class != q.class {
                    return Err(FdTypeError::new(
                        FdErrorKind::Mismatch,
                        format!("method `{m}` belongs to `{}`, not `{}`", entry.class, q.class),
                    ));
                }
                let t = entry.method_type.subst1(&entry.class_var, &q.arg);
                Ok((t, TgtExpr::proj(ted, m)))
            }
            FdExpr::Let(x, t, e1, e2) => {
                let tt = elab_fd_type(self.tc, env, t).map_err(|er| er.at("annotation"))?;
                let (t1, te1) = self.expr_in(limit, env, e1).map_err(|er| er.at("bound"))?;
                if !t.alpha_eq(&t1) {
                    return Err(mismatch(t, &t1).at("bound"));
                }
                env.push(FdBinding::Term(x.clone(), t.clone()));
                let r = self.expr_in(limit, env, e2);
                env.pop();
                let (t2, te2) = r.map_err(|er| er.at("body"))?;
                Ok((t2, TgtExpr::Let(x.clone(), tt, Box::new(te1), Box::new(te2))))
            }
        }
    }

    fn dict_in(&mut self, limit: usize, env: &FdTypingEnv, d: &FdDict) -> Result<(FdQ, TgtExpr), FdTypeError> {
        match d {
            FdDict::Var(x) => match env.dict(x) {
                Some(q) => Ok((q.clone(), TgtExpr::Var(dict_target_name(x)))),
                None => Err(FdTypeError::new(
                    FdErrorKind::UnboundDict,
                    format!("dictionary variable `{x}` is not in scope"),
                )),
            },
            FdDict::Con { ctor, types, dicts } => {
                let idx = match self.sigma.position(ctor) {
                    Some(i) if i < limit => i,
                    Some(_) => {
                        return Err(FdTypeError::new(
                            FdErrorKind::PrefixViolation,
                            format!("constructor `{ctor}` is declared later than its use"),
                        ))
                    }
                    None => {
                        return Err(FdTypeError::new(
                            FdErrorKind::UnknownConstructor,
                            format!("unknown dictionary constructor `{ctor}`"),
                        ))
                    }
                };
                let entry = &self.sigma.entries[idx];
                let scheme = &entry.scheme;
                if types.len() != scheme.binders.len() || dicts.len() != scheme.context.len() {
                    return Err(FdTypeError::new(
                        FdErrorKind::ArityMismatch,
                        format!(
                            "`{ctor}` takes {} types and {} dictionaries, given {} and {}",
                            scheme.binders.len(),
                            scheme.context.len(),
                            types.len(),
                            dicts.len()
                        ),
                    ));
                }
                let mut ttys = Vec::with_capacity(types.len());
                for t in types {
                    ttys.push(elab_fd_type(self.tc, env, t).map_err(|er| er.at("type"))?);
                }
                let sub: HashMap<Name, FdType> = scheme.binders.iter().cloned().zip(types.iter().cloned()).collect();
                let mut tdicts = Vec::with_capacity(dicts.len());
                for (want, di) in scheme.context.iter().zip(dicts) {
                    let want = want.subst(&sub);
                    let (got, tdi) = self.dict_in(limit, env, di).map_err(|er| er.at("dict"))?;
                    if !want.alpha_eq(&got) {
                        return Err(mismatch(&want, &got).at("dict"));
                    }
                    tdicts.push(tdi);
                }
                let head = scheme.head.subst(&sub);
                let wrapped = self.constructor_target(idx)?;
                let applied = ttys.into_iter().fold(wrapped, TgtExpr::tyapp);
                let applied = tdicts.into_iter().fold(applied, TgtExpr::app);
                Ok((head, applied))
            }
        }
    }

    /// `/\c̄. \$d_δ̄ : q̄. {m = inner}` for the constructor at `idx`, where the
    /// implementation `/\c̄. \{δ̄ : q̄}. inner` is checked against the entries
    /// strictly before it.
    pub(crate) fn constructor_target(&mut self, idx: usize) -> Result<TgtExpr, FdTypeError> {
        if let Some(r) = self.memo.get(&idx) {
            return r.clone();
        }
        let r = self.check_constructor(idx);
        let r = match r {
            Err(_) if self.trusting => Ok(TgtExpr::Var(format!("%unchecked_{}", self.sigma.entries[idx].ctor))),
            other => other,
        };
        self.memo.insert(idx, r.clone());
        r
    }

    fn check_constructor(&mut self, idx: usize) -> Result<TgtExpr, FdTypeError> {
        let entry = &self.sigma.entries[idx];
        let ctor = entry.ctor.clone();
        let scheme = entry.scheme.clone();
        let class = self.tc.by_class(&scheme.head.class).ok_or_else(|| {
            FdTypeError::new(FdErrorKind::UnknownMethod, format!("unknown class `{}`", scheme.head.class))
        })?;
        if class.method != entry.method {
            return Err(FdTypeError::new(
                FdErrorKind::UnknownMethod,
                format!(
                    "`{ctor}` implements `{}`, but class `{}` declares `{}`",
                    entry.method, class.class, class.method
                ),
            ));
        }
        let (class_var, method_type, method) =
            (class.class_var.clone(), class.method_type.clone(), class.method.clone());
        // Peel the constructor's own abstractions off the implementation.
        let mut cur = &entry.imp;
        let mut tyvars = Vec::new();
        for _ in &scheme.binders {
            match cur {
                FdExpr::TyLam(a, b) => {
                    tyvars.push(a.clone());
                    cur = b;
                }
                _ => {
                    return Err(FdTypeError::new(
                        FdErrorKind::Mismatch,
                        format!("implementation of `{ctor}` does not abstract over its type parameters"),
                    ))
                }
            }
        }
        let renaming: HashMap<Name, FdType> =
            scheme.binders.iter().cloned().zip(tyvars.iter().map(|a| FdType::Var(a.clone()))).collect();
        let mut dvars = Vec::new();
        for want in &scheme.context {
            let want = want.subst(&renaming);
            match cur {
                FdExpr::DLam(d, q, b) if q.alpha_eq(&want) => {
                    dvars.push((d.clone(), q.clone()));
                    cur = b;
                }
                _ => {
                    return Err(FdTypeError::new(
                        FdErrorKind::Mismatch,
                        format!("implementation of `{ctor}` does not abstract over its context `{want}`"),
                    ))
                }
            }
        }
        let inner = cur.clone();
        let mut env = FdTypingEnv::new();
        for a in &tyvars {
            env.push(FdBinding::TyVar(a.clone()));
        }
        for (d, q) in &dvars {
            env.push(FdBinding::Dict(d.clone(), q.clone()));
        }
        let expected = method_type.subst1(&class_var, &scheme.head.arg.subst(&renaming));
        let (got, te) = self.expr_in(idx, &mut env, &inner).map_err(|er| er.at("implementation"))?;
        if !expected.alpha_eq(&got) {
            return Err(FdTypeError::new(
                FdErrorKind::Mismatch,
                format!("implementation of `{ctor}` has type `{got}`, expected `{expected}`"),
            ));
        }
        let mut wrapped = TgtExpr::record(vec![(method, te)]);
        let mut prefix = FdTypingEnv::new();
        for a in &tyvars {
            prefix.push(FdBinding::TyVar(a.clone()));
        }
        for (d, q) in dvars.iter().rev() {
            wrapped = TgtExpr::Lam(dict_target_name(d), elab_fd_q(self.tc, &prefix, q)?, Box::new(wrapped));
        }
        for a in tyvars.iter().rev() {
            wrapped = TgtExpr::tylam(a, wrapped);
        }
        Ok(wrapped)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_fd_expr, parse_fd_type};
    use crate::syntax::{FdClassEntry, FdConstraintScheme, MethodEntry};

    fn eq_tc() -> FdClassEnv {
        FdClassEnv {
            entries: vec![FdClassEntry {
                method: "eq".into(),
                class: "Eq".into(),
                class_var: "a".into(),
                method_type: parse_fd_type("a -> a -> Bool").unwrap(),
            }],
        }
    }

    fn eq_sigma() -> MethodEnv {
        MethodEnv {
            entries: vec![
                MethodEntry {
                    ctor: "D1_Eq".into(),
                    scheme: FdConstraintScheme { binders: vec![], context: vec![], head: FdQ::new("Eq", FdType::Bool) },
                    method: "eq".into(),
                    imp: parse_fd_expr("\\x : Bool. \\y : Bool. True").unwrap(),
                },
                MethodEntry {
                    ctor: "D2_Eq".into(),
                    scheme: FdConstraintScheme {
                        binders: vec!["b".into()],
                        context: vec![FdQ::new("Eq", FdType::var("b"))],
                        head: FdQ::new("Eq", parse_fd_type("b -> b").unwrap()),
                    },
                    method: "eq".into(),
                    imp: parse_fd_expr("/\\b. \\{δ : Eq b}. \\f : b -> b. \\g : b -> b. True").unwrap(),
                },
            ],
        }
    }

    fn check(src: &str) -> Result<(FdType, TgtExpr), FdTypeError> {
        fd_typecheck_expr(&eq_sigma(), &eq_tc(), &FdTypingEnv::new(), &parse_fd_expr(src).unwrap())
    }

    #[test]
    fn application() {
        let (t, te) = check("(\\x : Bool. x) True").unwrap();
        assert_eq!(t, FdType::Bool);
        assert_eq!(te.to_string(), "(\\x : Bool. x) True");
    }

    #[test]
    fn method_projection_on_constructor() {
        let (t, te) = check("D1_Eq.eq").unwrap();
        assert_eq!(t.to_string(), "Bool -> Bool -> Bool");
        assert_eq!(te.to_string(), "{eq = \\x : Bool. \\y : Bool. True}.eq");
    }

    #[test]
    fn constructor_with_context() {
        let d = crate::parser::parse_fd_dict("D2_Eq [Bool] {D1_Eq}").unwrap();
        let (q, te) = fd_typecheck_dict(&eq_sigma(), &eq_tc(), &FdTypingEnv::new(), &d).unwrap();
        assert_eq!(q.to_string(), "Eq (Bool -> Bool)");
        assert_eq!(
            te.to_string(),
            "(/\\b. \\$d_δ : {eq : b -> b -> Bool}. {eq = \\f : b -> b. \\g : b -> b. True}) [Bool] {eq = \\x : Bool. \\y : Bool. True}"
        );
    }

    #[test]
    fn dictionary_application() {
        assert!(check("(\\{δ : Eq Bool}. δ.eq) {D1_Eq}").is_ok());
        let err = check("(\\{δ : Eq Bool}. δ.eq) {D2_Eq [Bool] {D1_Eq}}").unwrap_err();
        assert_eq!(err.kind, FdErrorKind::Mismatch);
    }

    #[test]
    fn error_kinds() {
        assert_eq!(check("y").unwrap_err().kind, FdErrorKind::UnboundVar);
        assert_eq!(check("δ.eq").unwrap_err().kind, FdErrorKind::UnboundDict);
        assert_eq!(check("D9.eq").unwrap_err().kind, FdErrorKind::UnknownConstructor);
        assert_eq!(check("(D2_Eq {D1_Eq}).eq").unwrap_err().kind, FdErrorKind::ArityMismatch);
        assert_eq!(check("D1_Eq.neq").unwrap_err().kind, FdErrorKind::UnknownMethod);
        assert_eq!(check("\\x : c. x").unwrap_err().kind, FdErrorKind::UnboundTyVar);
    }

    #[test]
    fn error_location() {
        let err = check("(\\x : Bool. x) (\\y : Bool. z)").unwrap_err();
        assert_eq!(err.location, vec!["arg", "body"]);
    }

    #[test]
    fn prefix_discipline() {
        let mut sigma = eq_sigma();
        sigma.entries[0].imp =
            parse_fd_expr("\\x : Bool. \\y : Bool. (D2_Eq [Bool] {D1_Eq}).eq (\\z : Bool. z) (\\z : Bool. z)").unwrap();
        let err =
            fd_typecheck_expr(&sigma, &eq_tc(), &FdTypingEnv::new(), &parse_fd_expr("D1_Eq.eq").unwrap()).unwrap_err();
        assert_eq!(err.kind, FdErrorKind::PrefixViolation);
    }

    #[test]
    fn elaboration_is_repeatable() {
        let a = check("(D2_Eq [Bool] {D1_Eq}).eq").unwrap();
        let b = check("(D2_Eq [Bool] {D1_Eq}).eq").unwrap();
        assert_eq!(a.1.to_string(), b.1.to_string());
    }
}
