//! Concrete syntax printers. Source output re-parses with the program parser;
//! intermediate and target output re-parses with the readers in `parser`.

use std::fmt::{self, Display, Formatter, Write};

use super::fd::{FdConstraintScheme, FdDict, FdExpr, FdQ, FdType, MethodEnv};
use super::src::{
    ClassDecl, Decl, InstDecl, SrcConstraint, SrcConstraintScheme, SrcCtxExpr, SrcExpr, SrcMono, SrcProgram, SrcScheme,
};
use super::tgt::{TgtExpr, TgtType};

// Precedence levels shared by all expression printers.
const TOP: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

fn open(f: &mut Formatter<'_>, need: bool) -> fmt::Result {
    if need {
        f.write_char('(')?;
    }
    Ok(())
}

fn close(f: &mut Formatter<'_>, need: bool) -> fmt::Result {
    if need {
        f.write_char(')')?;
    }
    Ok(())
}

fn src_mono(t: &SrcMono, f: &mut Formatter<'_>, atomic: bool) -> fmt::Result {
    match t {
        SrcMono::Bool => f.write_str("Bool"),
        SrcMono::Var(a) => f.write_str(a),
        SrcMono::Arrow(l, r) => {
            open(f, atomic)?;
            src_mono(l, f, true)?;
            f.write_str(" -> ")?;
            src_mono(r, f, false)?;
            close(f, atomic)
        }
    }
}

impl Display for SrcMono {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        src_mono(self, f, false)
    }
}

impl Display for SrcConstraint {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.class)?;
        src_mono(&self.arg, f, true)
    }
}

fn context_list<Q: Display>(qs: &[Q], f: &mut Formatter<'_>) -> fmt::Result {
    match qs {
        [] => Ok(()),
        [q] => write!(f, "{q} => "),
        _ => {
            f.write_char('(')?;
            for (i, q) in qs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{q}")?;
            }
            f.write_str(") => ")
        }
    }
}

impl Display for SrcScheme {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.binders.is_empty() {
            write!(f, "forall {}. ", self.binders.join(" "))?;
        }
        context_list(&self.context, f)?;
        write!(f, "{}", self.head)
    }
}

impl Display for SrcConstraintScheme {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.binders.is_empty() {
            write!(f, "forall {}. ", self.binders.join(" "))?;
        }
        context_list(&self.context, f)?;
        write!(f, "{}", self.head)
    }
}

fn src_expr(e: &SrcExpr, f: &mut Formatter<'_>, prec: u8) -> fmt::Result {
    match e {
        SrcExpr::True => f.write_str("True"),
        SrcExpr::False => f.write_str("False"),
        SrcExpr::Var(x) | SrcExpr::Method(x) => f.write_str(x),
        SrcExpr::Lam(x, b) => {
            open(f, prec > TOP)?;
            write!(f, "\\{x}. ")?;
            src_expr(b, f, TOP)?;
            close(f, prec > TOP)
        }
        SrcExpr::Let(x, s, e1, e2) => {
            open(f, prec > TOP)?;
            write!(f, "let {x} : {s} = ")?;
            src_expr(e1, f, TOP)?;
            f.write_str(" in ")?;
            src_expr(e2, f, TOP)?;
            close(f, prec > TOP)
        }
        SrcExpr::App(g, a) => {
            open(f, prec > APP)?;
            src_expr(g, f, APP)?;
            f.write_char(' ')?;
            src_expr(a, f, ATOM)?;
            close(f, prec > APP)
        }
        SrcExpr::Ann(e, t) => {
            f.write_char('(')?;
            src_expr(e, f, TOP)?;
            write!(f, " :: {t})")
        }
    }
}

impl Display for SrcExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        src_expr(self, f, TOP)
    }
}

fn src_ctx(c: &SrcCtxExpr, f: &mut Formatter<'_>, prec: u8) -> fmt::Result {
    match c {
        SrcCtxExpr::Hole => f.write_str("[]"),
        SrcCtxExpr::Lam(x, b) => {
            open(f, prec > TOP)?;
            write!(f, "\\{x}. ")?;
            src_ctx(b, f, TOP)?;
            close(f, prec > TOP)
        }
        SrcCtxExpr::LetL(x, s, c1, e2) => {
            open(f, prec > TOP)?;
            write!(f, "let {x} : {s} = ")?;
            src_ctx(c1, f, TOP)?;
            f.write_str(" in ")?;
            src_expr(e2, f, TOP)?;
            close(f, prec > TOP)
        }
        SrcCtxExpr::LetR(x, s, e1, c2) => {
            open(f, prec > TOP)?;
            write!(f, "let {x} : {s} = ")?;
            src_expr(e1, f, TOP)?;
            f.write_str(" in ")?;
            src_ctx(c2, f, TOP)?;
            close(f, prec > TOP)
        }
        SrcCtxExpr::AppL(c1, a) => {
            open(f, prec > APP)?;
            src_ctx(c1, f, APP)?;
            f.write_char(' ')?;
            src_expr(a, f, ATOM)?;
            close(f, prec > APP)
        }
        SrcCtxExpr::AppR(g, c2) => {
            open(f, prec > APP)?;
            src_expr(g, f, APP)?;
            f.write_char(' ')?;
            src_ctx(c2, f, ATOM)?;
            close(f, prec > APP)
        }
        SrcCtxExpr::Ann(c1, t) => {
            f.write_char('(')?;
            src_ctx(c1, f, TOP)?;
            write!(f, " :: {t})")
        }
    }
}

impl Display for SrcCtxExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        src_ctx(self, f, TOP)
    }
}

impl Display for ClassDecl {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("class ")?;
        let supers: Vec<String> = self.superclasses.iter().map(|s| format!("{s} {}", self.class_var)).collect();
        context_list(&supers, f)?;
        write!(f, "{} {} where {{ {} : {} }}", self.class, self.class_var, self.method, self.method_scheme)
    }
}

impl Display for InstDecl {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("instance ")?;
        context_list(&self.context, f)?;
        write!(f, "{} ", self.class)?;
        src_mono(&self.head, f, true)?;
        write!(f, " where {{ {} = {} }}", self.method, self.body)
    }
}

impl Display for SrcProgram {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            match d {
                Decl::Class(c) => writeln!(f, "{c};")?,
                Decl::Instance(i) => writeln!(f, "{i};")?,
            }
        }
        write!(f, "{}", self.main)
    }
}

// Intermediate language.

fn fd_type(t: &FdType, f: &mut Formatter<'_>, prec: u8) -> fmt::Result {
    match t {
        FdType::Bool => f.write_str("Bool"),
        FdType::Var(a) => f.write_str(a),
        FdType::Arrow(l, r) => {
            open(f, prec > TOP)?;
            fd_type(l, f, ATOM)?;
            f.write_str(" -> ")?;
            fd_type(r, f, TOP)?;
            close(f, prec > TOP)
        }
        FdType::QArrow(q, r) => {
            open(f, prec > TOP)?;
            write!(f, "({q}) -> ")?;
            fd_type(r, f, TOP)?;
            close(f, prec > TOP)
        }
        FdType::Forall(..) => {
            open(f, prec > TOP)?;
            f.write_str("forall")?;
            let mut cur = t;
            while let FdType::Forall(a, b) = cur {
                write!(f, " {a}")?;
                cur = b;
            }
            f.write_str(". ")?;
            fd_type(cur, f, TOP)?;
            close(f, prec > TOP)
        }
    }
}

impl Display for FdType {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fd_type(self, f, TOP)
    }
}

impl Display for FdQ {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.class)?;
        fd_type(&self.arg, f, ATOM)
    }
}

impl Display for FdConstraintScheme {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.binders.is_empty() {
            write!(f, "forall {}. ", self.binders.join(" "))?;
        }
        context_list(&self.context, f)?;
        write!(f, "{}", self.head)
    }
}

fn fd_dict(d: &FdDict, f: &mut Formatter<'_>, atomic: bool) -> fmt::Result {
    match d {
        FdDict::Var(x) => f.write_str(x),
        FdDict::Con { ctor, types, dicts } => {
            let need = atomic && !(types.is_empty() && dicts.is_empty());
            open(f, need)?;
            f.write_str(ctor)?;
            for t in types {
                write!(f, " [{t}]")?;
            }
            for d in dicts {
                write!(f, " {{{d}}}")?;
            }
            close(f, need)
        }
    }
}

impl Display for FdDict {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fd_dict(self, f, false)
    }
}

fn fd_expr(e: &FdExpr, f: &mut Formatter<'_>, prec: u8) -> fmt::Result {
    match e {
        FdExpr::True => f.write_str("True"),
        FdExpr::False => f.write_str("False"),
        FdExpr::Var(x) => f.write_str(x),
        FdExpr::Method(d, m) => {
            fd_dict(d, f, true)?;
            write!(f, ".{m}")
        }
        FdExpr::Lam(x, t, b) => {
            open(f, prec > TOP)?;
            write!(f, "\\{x} : {t}. ")?;
            fd_expr(b, f, TOP)?;
            close(f, prec > TOP)
        }
        FdExpr::DLam(d, q, b) => {
            open(f, prec > TOP)?;
            write!(f, "\\{{{d} : {q}}}. ")?;
            fd_expr(b, f, TOP)?;
            close(f, prec > TOP)
        }
        FdExpr::TyLam(a, b) => {
            open(f, prec > TOP)?;
            write!(f, "/\\{a}. ")?;
            fd_expr(b, f, TOP)?;
            close(f, prec > TOP)
        }
        FdExpr::Let(x, t, e1, e2) => {
            open(f, prec > TOP)?;
            write!(f, "let {x} : {t} = ")?;
            fd_expr(e1, f, TOP)?;
            f.write_str(" in ")?;
            fd_expr(e2, f, TOP)?;
            close(f, prec > TOP)
        }
        FdExpr::App(g, a) => {
            open(f, prec > APP)?;
            fd_expr(g, f, APP)?;
            f.write_char(' ')?;
            fd_expr(a, f, ATOM)?;
            close(f, prec > APP)
        }
        FdExpr::DApp(g, d) => {
            open(f, prec > APP)?;
            fd_expr(g, f, APP)?;
            write!(f, " {{{d}}}")?;
            close(f, prec > APP)
        }
        FdExpr::TyApp(g, t) => {
            open(f, prec > APP)?;
            fd_expr(g, f, APP)?;
            write!(f, " [{t}]")?;
            close(f, prec > APP)
        }
    }
}

impl Display for FdExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fd_expr(self, f, TOP)
    }
}

impl Display for MethodEnv {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{} : {} ; {} = {}", e.ctor, e.scheme, e.method, e.imp)?;
        }
        Ok(())
    }
}

// Target language.

fn tgt_type(t: &TgtType, f: &mut Formatter<'_>, prec: u8) -> fmt::Result {
    match t {
        TgtType::Bool => f.write_str("Bool"),
        TgtType::Var(a) => f.write_str(a),
        TgtType::Arrow(l, r) => {
            open(f, prec > TOP)?;
            tgt_type(l, f, ATOM)?;
            f.write_str(" -> ")?;
            tgt_type(r, f, TOP)?;
            close(f, prec > TOP)
        }
        TgtType::Forall(..) => {
            open(f, prec > TOP)?;
            f.write_str("forall")?;
            let mut cur = t;
            while let TgtType::Forall(a, b) = cur {
                write!(f, " {a}")?;
                cur = b;
            }
            f.write_str(". ")?;
            tgt_type(cur, f, TOP)?;
            close(f, prec > TOP)
        }
        TgtType::Record(fs) => {
            f.write_char('{')?;
            for (i, (l, t)) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l} : {t}")?;
            }
            f.write_char('}')
        }
    }
}

impl Display for TgtType {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        tgt_type(self, f, TOP)
    }
}

fn tgt_expr(e: &TgtExpr, f: &mut Formatter<'_>, prec: u8) -> fmt::Result {
    match e {
        TgtExpr::True => f.write_str("True"),
        TgtExpr::False => f.write_str("False"),
        TgtExpr::Var(x) => f.write_str(x),
        TgtExpr::Record(fs) => {
            f.write_char('{')?;
            for (i, (l, e)) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l} = {e}")?;
            }
            f.write_char('}')
        }
        TgtExpr::Proj(e, l) => {
            tgt_expr(e, f, ATOM)?;
            write!(f, ".{l}")
        }
        TgtExpr::Lam(x, t, b) => {
            open(f, prec > TOP)?;
            write!(f, "\\{x} : {t}. ")?;
            tgt_expr(b, f, TOP)?;
            close(f, prec > TOP)
        }
        TgtExpr::TyLam(a, b) => {
            open(f, prec > TOP)?;
            write!(f, "/\\{a}. ")?;
            tgt_expr(b, f, TOP)?;
            close(f, prec > TOP)
        }
        TgtExpr::Let(x, t, e1, e2) => {
            open(f, prec > TOP)?;
            write!(f, "let {x} : {t} = ")?;
            tgt_expr(e1, f, TOP)?;
            f.write_str(" in ")?;
            tgt_expr(e2, f, TOP)?;
            close(f, prec > TOP)
        }
        TgtExpr::App(g, a) => {
            open(f, prec > APP)?;
            tgt_expr(g, f, APP)?;
            f.write_char(' ')?;
            tgt_expr(a, f, ATOM)?;
            close(f, prec > APP)
        }
        TgtExpr::TyApp(g, t) => {
            open(f, prec > APP)?;
            tgt_expr(g, f, APP)?;
            write!(f, " [{t}]")?;
            close(f, prec > APP)
        }
    }
}

impl Display for TgtExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        tgt_expr(self, f, TOP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_shapes() {
        assert_eq!(SrcMono::arrow(SrcMono::Bool, SrcMono::Bool).to_string(), "Bool -> Bool");
        assert_eq!(SrcExpr::lam("x", SrcExpr::True).to_string(), "\\x. True");
        let t = SrcMono::arrow(SrcMono::arrow(SrcMono::var("a"), SrcMono::var("a")), SrcMono::Bool);
        assert_eq!(t.to_string(), "(a -> a) -> Bool");
        let e = SrcExpr::app(SrcExpr::lam("x", SrcExpr::var("x")), SrcExpr::app(SrcExpr::var("f"), SrcExpr::True));
        assert_eq!(e.to_string(), "(\\x. x) (f True)");
    }

    #[test]
    fn fd_shapes() {
        let t = FdType::forall("a", FdType::arrow(FdType::var("a"), FdType::var("a")));
        assert_eq!(t.to_string(), "forall a. a -> a");
        let q = FdType::forall(
            "a",
            FdType::qarrow(FdQ::new("Eq", FdType::var("a")), FdType::arrow(FdType::var("a"), FdType::Bool)),
        );
        assert_eq!(q.to_string(), "forall a. (Eq a) -> a -> Bool");
        let d = FdDict::con("D2_Eq", vec![FdType::Bool], vec![FdDict::con("D1_Eq", vec![], vec![])]);
        assert_eq!(FdExpr::Method(d, "eq".into()).to_string(), "(D2_Eq [Bool] {D1_Eq}).eq");
    }

    #[test]
    fn target_shapes() {
        let r = TgtExpr::proj(TgtExpr::record(vec![("l".into(), TgtExpr::True)]), "l");
        assert_eq!(r.to_string(), "{l = True}.l");
        let t = TgtType::record(vec![("eq".into(), TgtType::arrow(TgtType::Bool, TgtType::Bool))]);
        assert_eq!(t.to_string(), "{eq : Bool -> Bool}");
    }
}
