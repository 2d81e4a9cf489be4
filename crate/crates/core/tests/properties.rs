use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use tcc_core::fd::{fd_step, fd_typecheck_expr};
use tcc_core::harness::generate_fd_term;
use tcc_core::parser::{parse_fd_expr, parse_src_expr, parse_tgt_expr};
use tcc_core::source::{closure, match_mono, typecheck_program, Limits, ProgramTyping};
use tcc_core::syntax::{
    alpha_eq, FdDict, FdExpr, FdQ, FdType, FdTypingEnv, SrcConstraint, SrcExpr, SrcMono, SrcScheme, TgtExpr, TgtType,
};
use tcc_core::target::{kleene_eq, tgt_step, tgt_typecheck};

mod common;

use common::{closure_oracle, dag_env, program, POSITIVE};

// Terms with binders are generated as nameless skeletons and then named
// with a prefix, so that different prefixes give alpha-equivalent terms.

#[derive(Clone, Debug)]
enum TySk {
    Bool,
    Bound(usize),
    Free(u8),
    Arrow(Box<TySk>, Box<TySk>),
    Forall(Box<TySk>),
    Record(Vec<TySk>),
}

#[derive(Clone, Debug)]
enum Sk {
    True,
    Bound(usize),
    Free(u8),
    Lam(TySk, Box<Sk>),
    App(Box<Sk>, Box<Sk>),
    TyLam(Box<Sk>),
    TyApp(Box<Sk>, TySk),
    Record(Vec<Sk>),
    Proj(Box<Sk>, u8),
    Let(TySk, Box<Sk>, Box<Sk>),
}

fn ty_sk() -> impl Strategy<Value = TySk> {
    let leaf = prop_oneof![Just(TySk::Bool), (0usize..3).prop_map(TySk::Bound), (0u8..2).prop_map(TySk::Free)];
    leaf.prop_recursive(4, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TySk::Arrow(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|t| TySk::Forall(Box::new(t))),
            prop::collection::vec(inner, 0..3).prop_map(TySk::Record),
        ]
    })
}

fn sk() -> impl Strategy<Value = Sk> {
    let leaf = prop_oneof![Just(Sk::True), (0usize..3).prop_map(Sk::Bound), (0u8..2).prop_map(Sk::Free)];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (ty_sk(), inner.clone()).prop_map(|(t, b)| Sk::Lam(t, Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Sk::App(Box::new(f), Box::new(a))),
            inner.clone().prop_map(|b| Sk::TyLam(Box::new(b))),
            (inner.clone(), ty_sk()).prop_map(|(e, t)| Sk::TyApp(Box::new(e), t)),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Sk::Record),
            (inner.clone(), 0u8..3).prop_map(|(e, l)| Sk::Proj(Box::new(e), l)),
            (ty_sk(), inner.clone(), inner).prop_map(|(t, a, b)| Sk::Let(t, Box::new(a), Box::new(b))),
        ]
    })
}

fn bound_name(prefix: &str, depth: usize, i: usize) -> Option<String> {
    (depth > 0).then(|| format!("{prefix}{}", depth - 1 - i % depth))
}

fn name_ty(t: &TySk, p: &str, depth: usize) -> TgtType {
    match t {
        TySk::Bool => TgtType::Bool,
        TySk::Bound(i) => TgtType::Var(bound_name(p, depth, *i).unwrap_or_else(|| "free0".into())),
        TySk::Free(n) => TgtType::Var(format!("free{n}")),
        TySk::Arrow(a, b) => TgtType::arrow(name_ty(a, p, depth), name_ty(b, p, depth)),
        TySk::Forall(b) => TgtType::forall(&format!("{p}{depth}"), name_ty(b, p, depth + 1)),
        TySk::Record(fs) => {
            TgtType::record(fs.iter().enumerate().map(|(i, f)| (format!("l{i}"), name_ty(f, p, depth))).collect())
        }
    }
}

fn name_ty_fd(t: &TySk, p: &str, depth: usize) -> FdType {
    match t {
        TySk::Bool => FdType::Bool,
        TySk::Bound(i) => FdType::Var(bound_name(p, depth, *i).unwrap_or_else(|| "free0".into())),
        TySk::Free(n) => FdType::Var(format!("free{n}")),
        TySk::Arrow(a, b) => FdType::arrow(name_ty_fd(a, p, depth), name_ty_fd(b, p, depth)),
        TySk::Forall(b) => FdType::forall(&format!("{p}{depth}"), name_ty_fd(b, p, depth + 1)),
        TySk::Record(fs) => match fs.first() {
            Some(f) => FdType::qarrow(FdQ { class: "C".into(), arg: name_ty_fd(f, p, depth) }, FdType::Bool),
            None => FdType::Bool,
        },
    }
}

/// Names term binders `{p}{n}` and type binders `{p}t{n}`.
fn name(e: &Sk, p: &str, terms: usize, types: usize) -> TgtExpr {
    let tp = format!("{p}t");
    match e {
        Sk::True => TgtExpr::True,
        Sk::Bound(i) => TgtExpr::Var(bound_name(p, terms, *i).unwrap_or_else(|| "free0".into())),
        Sk::Free(n) => TgtExpr::Var(format!("free{n}")),
        Sk::Lam(t, b) => TgtExpr::lam(&format!("{p}{terms}"), name_ty(t, &tp, types), name(b, p, terms + 1, types)),
        Sk::App(f, a) => TgtExpr::app(name(f, p, terms, types), name(a, p, terms, types)),
        Sk::TyLam(b) => TgtExpr::tylam(&format!("{tp}{types}"), name(b, p, terms, types + 1)),
        Sk::TyApp(e, t) => TgtExpr::tyapp(name(e, p, terms, types), name_ty(t, &tp, types)),
        Sk::Record(fs) => {
            TgtExpr::record(fs.iter().enumerate().map(|(i, f)| (format!("l{i}"), name(f, p, terms, types))).collect())
        }
        Sk::Proj(e, l) => TgtExpr::proj(name(e, p, terms, types), &format!("l{l}")),
        Sk::Let(t, a, b) => TgtExpr::let_(
            &format!("{p}{terms}"),
            name_ty(t, &tp, types),
            name(a, p, terms, types),
            name(b, p, terms + 1, types),
        ),
    }
}

const POOL: [&str; 3] = ["a", "b", "c"];

fn pool_name() -> impl Strategy<Value = String> {
    prop::sample::select(&POOL[..]).prop_map(str::to_string)
}

fn src_mono() -> impl Strategy<Value = SrcMono> {
    let leaf = prop_oneof![Just(SrcMono::Bool), pool_name().prop_map(SrcMono::Var)];
    leaf.prop_recursive(4, 16, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| SrcMono::arrow(a, b)))
}

/// Types whose binders and free variables share one small pool, so that
/// substitution meets capture often.
fn fd_type() -> impl Strategy<Value = FdType> {
    let leaf = prop_oneof![Just(FdType::Bool), pool_name().prop_map(FdType::Var)];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FdType::arrow(a, b)),
            (pool_name(), inner.clone()).prop_map(|(a, t)| FdType::forall(&a, t)),
            (inner.clone(), inner).prop_map(|(q, t)| FdType::qarrow(FdQ { class: "C".into(), arg: q }, t)),
        ]
    })
}

fn fd_mapping() -> impl Strategy<Value = HashMap<String, FdType>> {
    prop::collection::hash_map(pool_name(), fd_type(), 0..3)
}

fn fv_fd(m: &HashMap<String, FdType>) -> HashSet<String> {
    m.values().flat_map(|t| t.free_vars()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn alpha_is_reflexive_and_invariant_under_renaming(s in sk()) {
        let x = name(&s, "x", 0, 0);
        let y = name(&s, "y", 0, 0);
        let z = name(&s, "z", 0, 0);
        prop_assert!(alpha_eq(&x, &x));
        prop_assert!(alpha_eq(&x, &y) && alpha_eq(&y, &x));
        prop_assert!(alpha_eq(&y, &z) && alpha_eq(&x, &z));
    }

    #[test]
    fn alpha_is_symmetric_and_transitive(a in sk(), b in sk(), c in sk(), flip in any::<bool>()) {
        let pa = if flip { "p" } else { "q" };
        let (a, b, c) = (name(&a, pa, 0, 0), name(&b, "r", 0, 0), name(&c, "s", 0, 0));
        prop_assert_eq!(alpha_eq(&a, &b), alpha_eq(&b, &a));
        prop_assert_eq!(alpha_eq(&b, &c), alpha_eq(&c, &b));
        if alpha_eq(&a, &b) && alpha_eq(&b, &c) {
            prop_assert!(alpha_eq(&a, &c));
        }
    }

    #[test]
    fn type_alpha_under_renaming(t in ty_sk()) {
        prop_assert!(alpha_eq(&name_ty(&t, "u", 0), &name_ty(&t, "v", 0)));
        prop_assert!(alpha_eq(&name_ty_fd(&t, "u", 0), &name_ty_fd(&t, "v", 0)));
    }

    #[test]
    fn empty_substitution_is_identity(t in fd_type(), m in src_mono(), s in ty_sk()) {
        prop_assert!(alpha_eq(&t.subst(&HashMap::new()), &t));
        prop_assert_eq!(m.subst(&HashMap::new()), m);
        let tt = name_ty(&s, "k", 0);
        prop_assert!(alpha_eq(&tt.subst(&HashMap::new()), &tt));
    }

    #[test]
    fn substitutions_compose(t in fd_type(), m1 in fd_mapping(), m2 in fd_mapping()) {
        let blocked = fv_fd(&m1);
        let m2: HashMap<String, FdType> = m2.into_iter().filter(|(k, _)| !blocked.contains(k)).collect();
        let mut composed: HashMap<String, FdType> =
            m1.iter().map(|(k, v)| (k.clone(), v.subst(&m2))).collect();
        for (k, v) in &m2 {
            composed.entry(k.clone()).or_insert_with(|| v.clone());
        }
        let lhs = t.subst(&m1).subst(&m2);
        let rhs = t.subst(&composed);
        prop_assert!(alpha_eq(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn mono_substitutions_compose(t in src_mono(), m1 in prop::collection::hash_map(pool_name(), src_mono(), 0..3),
                                  m2 in prop::collection::hash_map(pool_name(), src_mono(), 0..3)) {
        let mut composed: HashMap<String, SrcMono> =
            m1.iter().map(|(k, v)| (k.clone(), v.subst(&m2))).collect();
        for (k, v) in &m2 {
            composed.entry(k.clone()).or_insert_with(|| v.clone());
        }
        prop_assert_eq!(t.subst(&m1).subst(&m2), t.subst(&composed));
    }

    #[test]
    fn substituted_variable_disappears(t in fd_type(), a in pool_name(), s in fd_type(), sk in ty_sk()) {
        let s = s.subst(&[(a.clone(), FdType::Bool)].into_iter().collect());
        let m: HashMap<String, FdType> = [(a.clone(), s.clone())].into_iter().collect();
        prop_assert!(!t.subst(&m).free_vars().contains(&a));
        let tt = name_ty(&sk, "a", 0);
        let ts = TgtType::Bool;
        prop_assert!(!tt.subst1("free0", &ts).free_vars().contains(&"free0".to_string()));
    }

    #[test]
    fn matching_recovers_the_instantiation(p in src_mono(), vars in prop::sample::subsequence(POOL.to_vec(), 0..=3),
                                           sigma in prop::collection::hash_map(pool_name(), src_mono(), 0..3)) {
        let vars: Vec<String> = vars.into_iter().map(str::to_string).collect();
        let sigma: HashMap<String, SrcMono> = sigma.into_iter().filter(|(k, _)| vars.contains(k)).collect();
        let target = p.subst(&sigma);
        let fv = p.free_vars();
        let expected: HashMap<String, SrcMono> = vars
            .iter()
            .filter(|v| fv.contains(v))
            .map(|v| (v.clone(), sigma.get(v).cloned().unwrap_or_else(|| SrcMono::Var(v.clone()))))
            .collect();
        prop_assert_eq!(match_mono(&p, &vars, &target), Some(expected));
    }

    #[test]
    fn closure_matches_rewriting_oracle(
        supers in prop::collection::vec(prop::collection::vec(any::<prop::sample::Index>(), 0..3), 1..=6),
        wanted in prop::collection::vec((any::<prop::sample::Index>(), src_mono()), 0..4),
    ) {
        let supers: Vec<Vec<usize>> = supers
            .iter()
            .enumerate()
            .map(|(i, ss)| if i == 0 { vec![] } else { ss.iter().map(|ix| ix.index(i)).collect() })
            .collect();
        let gc = dag_env(&supers);
        let qs: Vec<SrcConstraint> =
            wanted.iter().map(|(ix, t)| SrcConstraint::new(&format!("C{}", ix.index(supers.len())), t.clone())).collect();
        prop_assert_eq!(closure(&gc, &qs).unwrap(), closure_oracle(&gc, &qs));
    }
}

// Printing then reading gives back the same tree.

fn src_expr() -> impl Strategy<Value = SrcExpr> {
    let var = prop::sample::select(vec!["x", "y", "f"]).prop_map(|x| SrcExpr::Var(x.to_string()));
    let leaf = prop_oneof![Just(SrcExpr::True), Just(SrcExpr::False), var];
    let scheme =
        (prop::sample::subsequence(vec!["a", "b"], 0..=2), prop::collection::vec(src_mono(), 0..2), src_mono())
            .prop_map(|(bs, ctx, head)| SrcScheme {
                binders: bs.into_iter().map(str::to_string).collect(),
                context: ctx.into_iter().map(|t| SrcConstraint::new("Eq", t)).collect(),
                head,
            })
            .boxed();
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            (prop::sample::select(vec!["x", "y"]), inner.clone()).prop_map(|(x, b)| SrcExpr::lam(x, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| SrcExpr::app(f, a)),
            (inner.clone(), src_mono()).prop_map(|(e, t)| SrcExpr::ann(e, t)),
            (scheme.clone(), inner.clone(), inner).prop_map(|(s, a, b)| SrcExpr::let_("g", s, a, b)),
        ]
    })
}

fn fd_dict() -> impl Strategy<Value = FdDict> {
    let leaf = prop_oneof![Just(FdDict::var("δ1")), Just(FdDict::con("D1_Eq", vec![], vec![]))];
    leaf.prop_recursive(2, 6, 2, |inner| {
        (prop::collection::vec(fd_type(), 0..2), prop::collection::vec(inner, 0..2))
            .prop_map(|(ts, ds)| FdDict::con("D2_Eq", ts, ds))
    })
}

fn fd_expr() -> impl Strategy<Value = FdExpr> {
    let leaf = prop_oneof![
        Just(FdExpr::True),
        Just(FdExpr::False),
        Just(FdExpr::var("x")),
        fd_dict().prop_map(|d| FdExpr::Method(d, "eq".into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (fd_type(), inner.clone()).prop_map(|(t, b)| FdExpr::lam("x", t, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| FdExpr::app(f, a)),
            (fd_type(), inner.clone()).prop_map(|(t, b)| FdExpr::dlam("δ1", FdQ { class: "Eq".into(), arg: t }, b)),
            (inner.clone(), fd_dict()).prop_map(|(e, d)| FdExpr::dapp(e, d)),
            inner.clone().prop_map(|b| FdExpr::tylam("a", b)),
            (inner.clone(), fd_type()).prop_map(|(e, t)| FdExpr::tyapp(e, t)),
            (fd_type(), inner.clone(), inner).prop_map(|(t, a, b)| FdExpr::let_("y", t, a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn source_expressions_round_trip(e in src_expr()) {
        let back = parse_src_expr(&e.to_string()).map_err(|err| TestCaseError::fail(format!("{e}: {err}")))?;
        prop_assert_eq!(back, e);
    }

    #[test]
    fn intermediate_expressions_round_trip(e in fd_expr()) {
        let back = parse_fd_expr(&e.to_string()).map_err(|err| TestCaseError::fail(format!("{e}: {err}")))?;
        prop_assert_eq!(back, e);
    }

    #[test]
    fn target_expressions_round_trip(s in sk()) {
        let e = name(&s, "x", 0, 0);
        let back = parse_tgt_expr(&e.to_string()).map_err(|err| TestCaseError::fail(format!("{e}: {err}")))?;
        prop_assert_eq!(back, e);
    }
}

fn typings() -> Vec<ProgramTyping> {
    POSITIVE.iter().map(|n| typecheck_program(&program(n), Limits::default()).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stepping_is_a_function(seed in any::<u64>(), which in 0usize..4) {
        let t = &typings()[which];
        let sigma = &t.fd_elabs.alternatives[0].sigma;
        let mut e = generate_fd_term(seed, 12, sigma, &t.tc);
        for _ in 0..200 {
            let a = fd_step(sigma, &e);
            prop_assert_eq!(&a, &fd_step(sigma, &e));
            match a {
                Some(next) => e = next,
                None => break,
            }
        }
        prop_assert!(e.is_value());
    }

    #[test]
    fn target_traces_are_type_safe(seed in any::<u64>(), which in 0usize..4) {
        let t = &typings()[which];
        let sigma = &t.fd_elabs.alternatives[0].sigma;
        let e = generate_fd_term(seed, 12, sigma, &t.tc);
        let (_, mut te) = fd_typecheck_expr(sigma, &t.tc, &FdTypingEnv::new(), &e).unwrap();
        let ty = tgt_typecheck(&Default::default(), &te).unwrap();
        prop_assert_eq!(&ty, &TgtType::Bool);
        let mut steps = 0;
        while !te.is_value() {
            let next = tgt_step(&te);
            prop_assert!(next.is_some(), "stuck: {}", te);
            te = next.unwrap();
            prop_assert_eq!(tgt_typecheck(&Default::default(), &te).unwrap(), ty.clone());
            steps += 1;
            prop_assert!(steps < 100_000);
        }
    }

    #[test]
    fn kleene_is_reflexive_and_symmetric(s1 in any::<u64>(), s2 in any::<u64>(), which in 0usize..4) {
        let t = &typings()[which];
        let sigma = &t.fd_elabs.alternatives[0].sigma;
        let empty = FdTypingEnv::new();
        let a = fd_typecheck_expr(sigma, &t.tc, &empty, &generate_fd_term(s1, 10, sigma, &t.tc)).unwrap().1;
        let b = fd_typecheck_expr(sigma, &t.tc, &empty, &generate_fd_term(s2, 10, sigma, &t.tc)).unwrap().1;
        prop_assert!(kleene_eq(&a, &a, 100_000).unwrap());
        prop_assert_eq!(kleene_eq(&a, &b, 100_000).unwrap(), kleene_eq(&b, &a, 100_000).unwrap());
    }
}
