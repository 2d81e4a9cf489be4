use super::lexer::Tok;
use super::{Cursor, ParseError};
use crate::syntax::{ClassDecl, Decl, InstDecl, SrcConstraint, SrcCtxExpr, SrcExpr, SrcMono, SrcProgram, SrcScheme};

// Holes are parsed as a variable with a name the lexer can never produce and
// turned into a context afterwards.
const HOLE: &str = "[]";

struct SrcParser {
    cur: Cursor,
    holes_allowed: bool,
}

pub fn parse_program(text: &str) -> Result<SrcProgram, ParseError> {
    let mut p = SrcParser { cur: Cursor::new(text)?, holes_allowed: false };
    let mut decls = Vec::new();
    loop {
        match p.cur.peek() {
            Tok::Class => decls.push(Decl::Class(p.class_decl()?)),
            Tok::Instance => decls.push(Decl::Instance(p.inst_decl()?)),
            _ => break,
        }
        p.cur.expect(Tok::Semi)?;
    }
    let main = p.expr()?;
    p.cur.finish()?;
    Ok(SrcProgram { decls, main })
}

pub fn parse_context(text: &str) -> Result<SrcCtxExpr, ParseError> {
    let mut p = SrcParser { cur: Cursor::new(text)?, holes_allowed: true };
    let e = p.expr()?;
    p.cur.finish()?;
    let holes = count_holes(&e);
    if holes != 1 {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: format!("a context needs exactly one hole, found {holes} (zero or multiple holes)"),
            expected: Vec::new(),
        });
    }
    Ok(to_context(&e))
}

pub fn parse_src_expr(text: &str) -> Result<SrcExpr, ParseError> {
    let mut p = SrcParser { cur: Cursor::new(text)?, holes_allowed: false };
    let e = p.expr()?;
    p.cur.finish()?;
    Ok(e)
}

pub fn parse_src_mono(text: &str) -> Result<SrcMono, ParseError> {
    let mut p = SrcParser { cur: Cursor::new(text)?, holes_allowed: false };
    let t = p.mono()?;
    p.cur.finish()?;
    Ok(t)
}

pub fn parse_src_scheme(text: &str) -> Result<SrcScheme, ParseError> {
    let mut p = SrcParser { cur: Cursor::new(text)?, holes_allowed: false };
    let s = p.scheme()?;
    p.cur.finish()?;
    Ok(s)
}

fn count_holes(e: &SrcExpr) -> usize {
    match e {
        SrcExpr::Var(x) => usize::from(x == HOLE),
        SrcExpr::True | SrcExpr::False | SrcExpr::Method(_) => 0,
        SrcExpr::Lam(_, b) | SrcExpr::Ann(b, _) => count_holes(b),
        SrcExpr::App(f, a) | SrcExpr::Let(_, _, f, a) => count_holes(f) + count_holes(a),
    }
}

fn to_context(e: &SrcExpr) -> SrcCtxExpr {
    match e {
        SrcExpr::Var(x) if x == HOLE => SrcCtxExpr::Hole,
        SrcExpr::Lam(x, b) => SrcCtxExpr::Lam(x.clone(), Box::new(to_context(b))),
        SrcExpr::Ann(b, t) => SrcCtxExpr::Ann(Box::new(to_context(b)), t.clone()),
        SrcExpr::App(f, a) if count_holes(f) == 1 => SrcCtxExpr::AppL(Box::new(to_context(f)), (**a).clone()),
        SrcExpr::App(f, a) => SrcCtxExpr::AppR((**f).clone(), Box::new(to_context(a))),
        SrcExpr::Let(x, s, e1, e2) if count_holes(e1) == 1 => {
            SrcCtxExpr::LetL(x.clone(), s.clone(), Box::new(to_context(e1)), (**e2).clone())
        }
        SrcExpr::Let(x, s, e1, e2) => SrcCtxExpr::LetR(x.clone(), s.clone(), (**e1).clone(), Box::new(to_context(e2))),
        _ => unreachable!("to_context called on a hole-free expression"),
    }
}

impl SrcParser {
    fn class_decl(&mut self) -> Result<ClassDecl, ParseError> {
        self.cur.expect(Tok::Class)?;
        let start = self.cur.mark();
        let supers = match self.super_ctx() {
            Ok(items) if self.cur.eat(&Tok::FatArrow) => items,
            _ => {
                self.cur.reset(start);
                Vec::new()
            }
        };
        let class = self.cur.con_id()?;
        let class_var = self.cur.var_id()?;
        let mut superclasses = Vec::new();
        for (s, v) in supers {
            if v != class_var {
                return Err(self.cur.error(
                    format!("superclass constraint `{s} {v}` must constrain the class variable `{class_var}`"),
                    &[],
                ));
            }
            superclasses.push(s);
        }
        self.cur.expect(Tok::Where)?;
        self.cur.expect(Tok::LBrace)?;
        let method = self.cur.var_id()?;
        self.cur.expect(Tok::Colon)?;
        let method_scheme = self.scheme()?;
        self.cur.expect(Tok::RBrace)?;
        Ok(ClassDecl { superclasses, class, class_var, method, method_scheme })
    }

    fn super_ctx(&mut self) -> Result<Vec<(String, String)>, ParseError> {
        let item = |p: &mut Self| -> Result<(String, String), ParseError> {
            let c = p.cur.con_id()?;
            let v = p.cur.var_id()?;
            Ok((c, v))
        };
        if self.cur.eat(&Tok::LParen) {
            let mut items = vec![item(self)?];
            while self.cur.eat(&Tok::Comma) {
                items.push(item(self)?);
            }
            self.cur.expect(Tok::RParen)?;
            Ok(items)
        } else {
            Ok(vec![item(self)?])
        }
    }

    fn inst_decl(&mut self) -> Result<InstDecl, ParseError> {
        self.cur.expect(Tok::Instance)?;
        let context = self.optional_context()?;
        let class = self.cur.con_id()?;
        let head = self.atype()?;
        self.cur.expect(Tok::Where)?;
        self.cur.expect(Tok::LBrace)?;
        let method = self.cur.var_id()?;
        self.cur.expect(Tok::Equals)?;
        let body = self.expr()?;
        self.cur.expect(Tok::RBrace)?;
        Ok(InstDecl { context, class, head, method, body })
    }

    /// `[ instCtx "=>" ]`, backtracking when no `=>` follows.
    fn optional_context(&mut self) -> Result<Vec<SrcConstraint>, ParseError> {
        let start = self.cur.mark();
        match self.inst_ctx() {
            Ok(qs) if self.cur.eat(&Tok::FatArrow) => Ok(qs),
            _ => {
                self.cur.reset(start);
                Ok(Vec::new())
            }
        }
    }

    fn inst_ctx(&mut self) -> Result<Vec<SrcConstraint>, ParseError> {
        if self.cur.eat(&Tok::LParen) {
            let mut qs = vec![self.constraint()?];
            while self.cur.eat(&Tok::Comma) {
                qs.push(self.constraint()?);
            }
            self.cur.expect(Tok::RParen)?;
            Ok(qs)
        } else {
            Ok(vec![self.constraint()?])
        }
    }

    fn constraint(&mut self) -> Result<SrcConstraint, ParseError> {
        let class = self.cur.con_id()?;
        let arg = self.mono()?;
        Ok(SrcConstraint { class, arg })
    }

    fn scheme(&mut self) -> Result<SrcScheme, ParseError> {
        let mut binders = Vec::new();
        if self.cur.eat(&Tok::Forall) {
            binders.push(self.cur.var_id()?);
            while let Tok::VarId(_) = self.cur.peek() {
                binders.push(self.cur.var_id()?);
            }
            self.cur.expect(Tok::Dot)?;
            for (i, b) in binders.iter().enumerate() {
                if binders[..i].contains(b) {
                    return Err(self.cur.error(format!("type variable `{b}` bound twice"), &[]));
                }
            }
        }
        let context = self.optional_context()?;
        let head = self.mono()?;
        Ok(SrcScheme { binders, context, head })
    }

    fn mono(&mut self) -> Result<SrcMono, ParseError> {
        let l = self.atype()?;
        if self.cur.eat(&Tok::Arrow) {
            Ok(SrcMono::arrow(l, self.mono()?))
        } else {
            Ok(l)
        }
    }

    fn atype(&mut self) -> Result<SrcMono, ParseError> {
        match self.cur.peek().clone() {
            Tok::Bool => {
                self.cur.bump();
                Ok(SrcMono::Bool)
            }
            Tok::VarId(a) => {
                self.cur.bump();
                Ok(SrcMono::Var(a))
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.mono()?;
                self.cur.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.cur.unexpected(&["Bool", "type variable", "("])),
        }
    }

    fn expr(&mut self) -> Result<SrcExpr, ParseError> {
        match self.cur.peek() {
            Tok::Backslash => {
                self.cur.bump();
                let x = self.cur.var_id()?;
                self.cur.expect(Tok::Dot)?;
                Ok(SrcExpr::Lam(x, Box::new(self.expr()?)))
            }
            Tok::Let => {
                self.cur.bump();
                let x = self.cur.var_id()?;
                self.cur.expect(Tok::Colon)?;
                let s = self.scheme()?;
                self.cur.expect(Tok::Equals)?;
                let e1 = self.expr()?;
                self.cur.expect(Tok::In)?;
                let e2 = self.expr()?;
                Ok(SrcExpr::Let(x, s, Box::new(e1), Box::new(e2)))
            }
            _ => self.app(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.cur.peek(), Tok::True | Tok::False | Tok::VarId(_) | Tok::LParen | Tok::LBracket)
    }

    fn app(&mut self) -> Result<SrcExpr, ParseError> {
        if !self.starts_atom() {
            return Err(self.cur.unexpected(&["expression"]));
        }
        let mut e = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            e = SrcExpr::app(e, a);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<SrcExpr, ParseError> {
        match self.cur.peek().clone() {
            Tok::True => {
                self.cur.bump();
                Ok(SrcExpr::True)
            }
            Tok::False => {
                self.cur.bump();
                Ok(SrcExpr::False)
            }
            Tok::VarId(x) => {
                self.cur.bump();
                Ok(SrcExpr::Var(x))
            }
            Tok::LBracket => {
                if !self.holes_allowed {
                    return Err(self.cur.error("context hole `[]` is only allowed in context files", &[]));
                }
                self.cur.bump();
                self.cur.expect(Tok::RBracket)?;
                Ok(SrcExpr::Var(HOLE.into()))
            }
            Tok::LParen => {
                self.cur.bump();
                let e = self.expr()?;
                if self.cur.eat(&Tok::DoubleColon) {
                    let t = self.mono()?;
                    self.cur.expect(Tok::RParen)?;
                    Ok(SrcExpr::ann(e, t))
                } else {
                    self.cur.expect(Tok::RParen)?;
                    Ok(e)
                }
            }
            _ => Err(self.cur.unexpected(&["expression"])),
        }
    }
}
