use std::path::PathBuf;

use tcc_core::fd::{fd_env_wf, fd_typecheck_expr};
use tcc_core::parser::{parse_program, parse_src_expr, parse_src_mono};
use tcc_core::source::{
    elab_env, elab_env_tgt, entail_fd, entail_tgt, infer_fd, typecheck_program, ClassEnv, Limits, ProgramTyping,
    SrcBinding, SrcErrorKind, TypingEnv,
};
use tcc_core::syntax::{SrcConstraint, SrcMono};
use tcc_core::target::tgt_typecheck;

fn corpus(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn typed(name: &str) -> ProgramTyping {
    typecheck_program(&parse_program(&corpus(name)).unwrap(), Limits::default()).unwrap()
}

fn rejected(name: &str) -> SrcErrorKind {
    typecheck_program(&parse_program(&corpus(name)).unwrap(), Limits::default()).unwrap_err().kind
}

#[test]
fn corpus_counts() {
    for (name, count) in [("P1.tc", 1), ("P2.tc", 2), ("P3.tc", 2), ("P4.tc", 1)] {
        let t = typed(name);
        assert_eq!(t.main_type, SrcMono::Bool, "{name}");
        assert_eq!(t.fd_elabs.alternatives.len(), count, "{name}");
        assert!(!t.fd_elabs.truncated && !t.tgt_elabs.truncated, "{name}");
        assert_eq!(t.tgt_elabs.alternatives.len(), count, "{name}");
    }
}

#[test]
fn negative_programs() {
    assert_eq!(rejected("N1.tc"), SrcErrorKind::Overlap);
    assert_eq!(rejected("N2.tc"), SrcErrorKind::Ambiguity);
}

#[test]
fn overlap_message() {
    let err = typecheck_program(&parse_program(&corpus("N1.tc")).unwrap(), Limits::default()).unwrap_err();
    assert!(err.to_string().starts_with("overlapping instances"), "{err}");
}

#[test]
fn p2_alternatives_differ_only_in_base_dictionary() {
    let t = typed("P2.tc");
    let shown: Vec<String> = t.fd_elabs.alternatives.iter().map(|a| a.expr.to_string()).collect();
    assert!(shown[0].contains("δtest1.base"), "{}", shown[0]);
    assert!(shown[1].contains("δtest3.base"), "{}", shown[1]);
    assert_eq!(shown[0].replace("δtest1.base", "δtest3.base"), shown[1]);
}

#[test]
fn p1_elaborations() {
    let t = typed("P1.tc");
    let fd = &t.fd_elabs.alternatives[0];
    assert_eq!(
        fd.expr.to_string(),
        "let refl : forall a. (Eq a) -> a -> Bool = /\\a. \\{δrefl1 : Eq a}. \\x : a. δrefl1.eq x x in refl [Bool] {D1_Eq} True"
    );
    assert_eq!(fd.sigma.entries.len(), 1);
    assert_eq!(fd.sigma.entries[0].imp.to_string(), "\\x : Bool. \\y : Bool. True");
    assert_eq!(
        t.tgt_elabs.alternatives[0].to_string(),
        "let refl : forall a. {eq : a -> a -> Bool} -> a -> Bool = /\\a. \\$d_δrefl1 : {eq : a -> a -> Bool}. \\x : a. $d_δrefl1.eq x x in refl [Bool] {eq = \\x : Bool. \\y : Bool. True} True"
    );
}

#[test]
fn fd_elaborations_typecheck_at_the_source_type() {
    for name in ["P1.tc", "P2.tc", "P3.tc", "P4.tc"] {
        let t = typed(name);
        for alt in &t.fd_elabs.alternatives {
            fd_env_wf(&alt.sigma, &t.tc, &Default::default()).unwrap();
            let (ty, _) = fd_typecheck_expr(&alt.sigma, &t.tc, &Default::default(), &alt.expr).unwrap();
            assert_eq!(ty, tcc_core::syntax::FdType::Bool, "{name}");
        }
        for te in &t.tgt_elabs.alternatives {
            assert_eq!(tgt_typecheck(&Default::default(), te).unwrap(), tcc_core::syntax::TgtType::Bool, "{name}");
        }
    }
}

#[test]
fn loop_is_truncated_not_rejected() {
    let t = typed("Loop.tc");
    assert!(t.fd_elabs.alternatives.is_empty());
    assert!(t.fd_elabs.truncated);
    assert!(t.tgt_elabs.alternatives.is_empty());
    assert!(t.tgt_elabs.truncated);
}

#[test]
fn entailment_examples() {
    let t = typed("P4.tc");
    let env = TypingEnv::new();
    let bb = parse_src_mono("Bool -> Bool").unwrap();
    let q = SrcConstraint::new("Eq", bb);
    let ds = entail_fd(&t.p, &t.gc, &env, &q, Limits::default()).unwrap();
    let shown: Vec<String> = ds.items.iter().map(|d| d.to_string()).collect();
    assert_eq!(shown, vec!["D4_Eq [Bool] {D1_Pick} {D3_Eq}"]);
    let ts = entail_tgt(&t.p, &t.gc, &env, &q, Limits::default()).unwrap();
    assert_eq!(ts.len(), 1);

    let t = typed("P1.tc");
    let mut env = TypingEnv::new();
    env.push(SrcBinding::Dict("δ".into(), SrcConstraint::new("Eq", SrcMono::Bool)));
    let q = SrcConstraint::new("Eq", SrcMono::Bool);
    let ds = entail_fd(&t.p, &t.gc, &env, &q, Limits::default()).unwrap();
    let shown: Vec<String> = ds.items.iter().map(|d| d.to_string()).collect();
    assert_eq!(shown, vec!["δ", "D1_Eq"]);
    let ts = entail_tgt(&t.p, &t.gc, &env, &q, Limits::default()).unwrap();
    let shown: Vec<String> = ts.items.iter().map(|d| d.to_string()).collect();
    assert_eq!(shown, vec!["$d_δ", "{eq = \\x : Bool. \\y : Bool. True}"]);

    let mut env = TypingEnv::new();
    env.push(SrcBinding::TyVar("b".into()));
    let none = entail_fd(&t.p, &t.gc, &env, &SrcConstraint::new("Eq", SrcMono::var("b")), Limits::default()).unwrap();
    assert!(none.is_empty() && !none.truncated);
}

#[test]
fn method_in_check_mode_under_a_local() {
    let t = typed("P1.tc");
    let mut env = TypingEnv::new();
    env.push(SrcBinding::TyVar("a".into()));
    env.push(SrcBinding::Dict("δ".into(), SrcConstraint::new("Eq", SrcMono::var("a"))));
    let e = parse_src_expr("(eq :: a -> a -> Bool)").unwrap();
    let e = tcc_core::source::resolve_names(&t.gc, &e).unwrap();
    let r = infer_fd(&t.p, &t.gc, &env, &e, Limits::default()).unwrap();
    let shown: Vec<String> = r.alternatives.iter().map(|x| x.to_string()).collect();
    assert_eq!(shown, vec!["δ.eq"]);

    let bare = tcc_core::source::resolve_names(&t.gc, &parse_src_expr("eq").unwrap()).unwrap();
    let err = infer_fd(&t.p, &t.gc, &env, &bare, Limits::default()).unwrap_err();
    assert_eq!(err.kind, SrcErrorKind::NotInferable);
    assert!(err.to_string().contains("head not inferable"));
}

#[test]
fn environment_elaboration() {
    let t = typed("P1.tc");
    let mut env = TypingEnv::new();
    env.push(SrcBinding::Dict("δ".into(), SrcConstraint::new("Eq", SrcMono::Bool)));
    let fd = elab_env(&t.p, &t.gc, &env, Limits::default()).unwrap();
    assert_eq!(fd.sigmas.len(), 1);
    assert_eq!(fd.tt.dict("δ").unwrap().to_string(), "Eq Bool");
    let g = elab_env_tgt(&t.p, &t.gc, &env, Limits::default()).unwrap();
    assert_eq!(g.term("$d_δ").unwrap().to_string(), "{eq : Bool -> Bool -> Bool}");

    let empty = elab_env(&Default::default(), &ClassEnv::new(), &TypingEnv::new(), Limits::default()).unwrap();
    assert_eq!(empty.sigmas.len(), 1);
    assert!(empty.sigmas[0].is_empty() && empty.tc.entries.is_empty() && empty.tt.entries.is_empty());
}

#[test]
fn static_errors() {
    let cases = [
        ("class Bad a where { m : Bool }; True", SrcErrorKind::Ambiguity),
        ("class Eq a where { eq : a -> a -> Bool }; \\eq. True", SrcErrorKind::MethodShadowing),
        ("class Eq a where { eq : a -> a -> Bool }; instance Eq Bool where { eq = \\x. \\y. True }; instance Eq b where { eq = \\x. \\y. True }; True", SrcErrorKind::Overlap),
        ("class Base a where { base : a -> Bool }; class Base a => Sub a where { sub : a -> Bool }; instance Sub Bool where { sub = \\x. x }; True", SrcErrorKind::Unsatisfiable),
        ("x", SrcErrorKind::NotInferable),
        ("(x :: Bool)", SrcErrorKind::UnboundVar),
        ("(True :: Bool -> Bool)", SrcErrorKind::Mismatch),
        ("class Eq a where { eq : a -> a -> Bool }; (eq :: Bool -> Bool -> Bool) True True", SrcErrorKind::Unsatisfiable),
        ("class Eq a where { eq : a -> a -> Bool }; instance Eq Bool where { eq = \\x. True }; True", SrcErrorKind::Mismatch),
        ("class C a where { m : a }; instance C Bool where { n = True }; True", SrcErrorKind::WrongMethod),
        ("let f : Bool = True in let f : Bool = False in (f :: Bool)", SrcErrorKind::Rebinding),
    ];
    for (src, kind) in cases {
        let p = parse_program(src).unwrap();
        let err = typecheck_program(&p, Limits::default()).unwrap_err();
        assert_eq!(err.kind, kind, "{src}: {err}");
    }
}

#[test]
fn instance_with_a_context_is_accepted_next_to_a_ground_one() {
    let ok = "class Eq a where { eq : a -> a -> Bool }; instance Eq Bool where { eq = \\x. \\y. True }; instance Eq b => Eq (b -> b) where { eq = \\f. \\g. True }; True";
    typecheck_program(&parse_program(ok).unwrap(), Limits::default()).unwrap();
}

#[test]
fn elaboration_cap_marks_truncation() {
    let t = typecheck_program(&parse_program(&corpus("P2.tc")).unwrap(), Limits::new(32, 1)).unwrap();
    assert_eq!(t.fd_elabs.alternatives.len(), 1);
    assert!(t.fd_elabs.truncated);
    assert!(t.tgt_elabs.truncated);
}

#[test]
fn both_entailments_find_the_same_number_of_dictionaries() {
    for name in ["P1.tc", "P2.tc", "P3.tc", "P4.tc", "Grammar.tc"] {
        let t = typed(name);
        let mut env = TypingEnv::new();
        env.push(SrcBinding::TyVar("a".into()));
        let args = [SrcMono::Bool, parse_src_mono("Bool -> Bool").unwrap(), parse_src_mono("a").unwrap()];
        for class in &t.gc.entries {
            env.push(SrcBinding::Dict(
                format!("δ{}", class.class),
                SrcConstraint::new(&class.class, SrcMono::var("a")),
            ));
        }
        for class in &t.gc.entries {
            for arg in &args {
                let q = SrcConstraint::new(&class.class, arg.clone());
                let fd = entail_fd(&t.p, &t.gc, &env, &q, Limits::default()).unwrap();
                let tgt = entail_tgt(&t.p, &t.gc, &env, &q, Limits::default()).unwrap();
                assert_eq!(fd.len(), tgt.len(), "{name}: {q}");
                assert_eq!(fd.truncated, tgt.truncated, "{name}: {q}");
            }
        }
    }
}

#[test]
fn alternatives_share_the_main_type() {
    for name in ["P1.tc", "P2.tc", "P3.tc", "P4.tc", "Grammar.tc"] {
        let t = typed(name);
        let main = tcc_core::syntax::SrcScheme::mono(t.main_type.clone());
        let want = tcc_core::source::elab_type_fd(&t.gc, &TypingEnv::new(), &main).unwrap();
        for alt in &t.fd_elabs.alternatives {
            let (ty, _) = fd_typecheck_expr(&alt.sigma, &t.tc, &Default::default(), &alt.expr).unwrap();
            assert_eq!(ty, want, "{name}");
        }
    }
}
