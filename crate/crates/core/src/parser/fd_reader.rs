//! Reader for the printed form of intermediate-language terms.

use super::lexer::Tok;
use super::{Cursor, ParseError};
use crate::syntax::{FdDict, FdExpr, FdQ, FdType};

pub fn parse_fd_type(text: &str) -> Result<FdType, ParseError> {
    let mut c = Cursor::new(text)?;
    let t = fd_type(&mut c)?;
    c.finish()?;
    Ok(t)
}

pub fn parse_fd_expr(text: &str) -> Result<FdExpr, ParseError> {
    let mut c = Cursor::new(text)?;
    let e = expr(&mut c)?;
    c.finish()?;
    Ok(e)
}

pub fn parse_fd_dict(text: &str) -> Result<FdDict, ParseError> {
    let mut c = Cursor::new(text)?;
    let d = dict(&mut c)?;
    c.finish()?;
    Ok(d)
}

pub(crate) fn fd_type(c: &mut Cursor) -> Result<FdType, ParseError> {
    if c.eat(&Tok::Forall) {
        let mut binders = vec![c.var_id()?];
        while let Tok::VarId(_) = c.peek() {
            binders.push(c.var_id()?);
        }
        c.expect(Tok::Dot)?;
        let body = fd_type(c)?;
        return Ok(binders.into_iter().rev().fold(body, |t, a| FdType::Forall(a, Box::new(t))));
    }
    if *c.peek() == Tok::LParen && matches!(c.peek_at(1), Tok::ConId(_)) {
        c.bump();
        let q = fd_q(c)?;
        c.expect(Tok::RParen)?;
        c.expect(Tok::Arrow)?;
        return Ok(FdType::qarrow(q, fd_type(c)?));
    }
    let l = fd_atype(c)?;
    if c.eat(&Tok::Arrow) {
        Ok(FdType::arrow(l, fd_type(c)?))
    } else {
        Ok(l)
    }
}

fn fd_atype(c: &mut Cursor) -> Result<FdType, ParseError> {
    match c.peek().clone() {
        Tok::Bool => {
            c.bump();
            Ok(FdType::Bool)
        }
        Tok::VarId(a) => {
            c.bump();
            Ok(FdType::Var(a))
        }
        Tok::LParen => {
            c.bump();
            let t = fd_type(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        _ => Err(c.unexpected(&["type"])),
    }
}

pub(crate) fn fd_q(c: &mut Cursor) -> Result<FdQ, ParseError> {
    let class = c.con_id()?;
    let arg = fd_atype(c)?;
    Ok(FdQ { class, arg })
}

fn dict(c: &mut Cursor) -> Result<FdDict, ParseError> {
    match c.peek().clone() {
        Tok::VarId(d) => {
            c.bump();
            Ok(FdDict::Var(d))
        }
        Tok::ConId(ctor) => {
            c.bump();
            let mut types = Vec::new();
            while c.eat(&Tok::LBracket) {
                types.push(fd_type(c)?);
                c.expect(Tok::RBracket)?;
            }
            let mut dicts = Vec::new();
            while c.eat(&Tok::LBrace) {
                dicts.push(dict(c)?);
                c.expect(Tok::RBrace)?;
            }
            Ok(FdDict::Con { ctor, types, dicts })
        }
        Tok::LParen => {
            c.bump();
            let d = dict(c)?;
            c.expect(Tok::RParen)?;
            Ok(d)
        }
        _ => Err(c.unexpected(&["dictionary"])),
    }
}

fn expr(c: &mut Cursor) -> Result<FdExpr, ParseError> {
    match c.peek() {
        Tok::Backslash => {
            c.bump();
            if c.eat(&Tok::LBrace) {
                let d = c.var_id()?;
                c.expect(Tok::Colon)?;
                let q = fd_q(c)?;
                c.expect(Tok::RBrace)?;
                c.expect(Tok::Dot)?;
                Ok(FdExpr::DLam(d, q, Box::new(expr(c)?)))
            } else {
                let x = c.var_id()?;
                c.expect(Tok::Colon)?;
                let t = fd_type(c)?;
                c.expect(Tok::Dot)?;
                Ok(FdExpr::Lam(x, t, Box::new(expr(c)?)))
            }
        }
        Tok::BigLambda => {
            c.bump();
            let a = c.var_id()?;
            c.expect(Tok::Dot)?;
            Ok(FdExpr::TyLam(a, Box::new(expr(c)?)))
        }
        Tok::Let => {
            c.bump();
            let x = c.var_id()?;
            c.expect(Tok::Colon)?;
            let t = fd_type(c)?;
            c.expect(Tok::Equals)?;
            let e1 = expr(c)?;
            c.expect(Tok::In)?;
            let e2 = expr(c)?;
            Ok(FdExpr::Let(x, t, Box::new(e1), Box::new(e2)))
        }
        _ => app(c),
    }
}

fn starts_atom(c: &Cursor) -> bool {
    matches!(c.peek(), Tok::True | Tok::False | Tok::VarId(_) | Tok::ConId(_) | Tok::LParen)
}

fn app(c: &mut Cursor) -> Result<FdExpr, ParseError> {
    let mut e = atom(c)?;
    loop {
        if c.eat(&Tok::LBracket) {
            let t = fd_type(c)?;
            c.expect(Tok::RBracket)?;
            e = FdExpr::tyapp(e, t);
        } else if c.eat(&Tok::LBrace) {
            let d = dict(c)?;
            c.expect(Tok::RBrace)?;
            e = FdExpr::dapp(e, d);
        } else if starts_atom(c) {
            let a = atom(c)?;
            e = FdExpr::app(e, a);
        } else {
            return Ok(e);
        }
    }
}

fn method_suffix(c: &mut Cursor, d: FdDict) -> Result<FdExpr, ParseError> {
    c.expect(Tok::Dot)?;
    let m = c.var_id()?;
    Ok(FdExpr::Method(d, m))
}

fn atom(c: &mut Cursor) -> Result<FdExpr, ParseError> {
    match c.peek().clone() {
        Tok::True => {
            c.bump();
            Ok(FdExpr::True)
        }
        Tok::False => {
            c.bump();
            Ok(FdExpr::False)
        }
        Tok::VarId(x) => {
            c.bump();
            if *c.peek() == Tok::Dot {
                method_suffix(c, FdDict::Var(x))
            } else {
                Ok(FdExpr::Var(x))
            }
        }
        Tok::ConId(ctor) => {
            c.bump();
            method_suffix(c, FdDict::Con { ctor, types: Vec::new(), dicts: Vec::new() })
        }
        Tok::LParen => {
            c.bump();
            // `(D [t] {d}).m` projects from an applied constructor, while
            // `(D.m ...)` is an ordinary parenthesised expression.
            if matches!(c.peek(), Tok::ConId(_)) && *c.peek_at(1) != Tok::Dot {
                let d = dict(c)?;
                c.expect(Tok::RParen)?;
                return method_suffix(c, d);
            }
            let e = expr(c)?;
            c.expect(Tok::RParen)?;
            Ok(e)
        }
        _ => Err(c.unexpected(&["expression"])),
    }
}
