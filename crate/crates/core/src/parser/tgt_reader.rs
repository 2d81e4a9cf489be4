//! Reader for the printed form of target terms.

use super::lexer::Tok;
use super::{Cursor, ParseError};
use crate::syntax::{TgtExpr, TgtType};

pub fn parse_tgt_type(text: &str) -> Result<TgtType, ParseError> {
    let mut c = Cursor::new(text)?;
    let t = ty(&mut c)?;
    c.finish()?;
    Ok(t)
}

pub fn parse_tgt_expr(text: &str) -> Result<TgtExpr, ParseError> {
    let mut c = Cursor::new(text)?;
    let e = expr(&mut c)?;
    c.finish()?;
    Ok(e)
}

fn ty(c: &mut Cursor) -> Result<TgtType, ParseError> {
    if c.eat(&Tok::Forall) {
        let mut binders = vec![c.var_id()?];
        while let Tok::VarId(_) = c.peek() {
            binders.push(c.var_id()?);
        }
        c.expect(Tok::Dot)?;
        let body = ty(c)?;
        return Ok(binders.into_iter().rev().fold(body, |t, a| TgtType::Forall(a, Box::new(t))));
    }
    let l = atype(c)?;
    if c.eat(&Tok::Arrow) {
        Ok(TgtType::arrow(l, ty(c)?))
    } else {
        Ok(l)
    }
}

fn atype(c: &mut Cursor) -> Result<TgtType, ParseError> {
    match c.peek().clone() {
        Tok::Bool => {
            c.bump();
            Ok(TgtType::Bool)
        }
        Tok::VarId(a) => {
            c.bump();
            Ok(TgtType::Var(a))
        }
        Tok::LParen => {
            c.bump();
            let t = ty(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        Tok::LBrace => {
            c.bump();
            let mut fields = Vec::new();
            if !c.eat(&Tok::RBrace) {
                loop {
                    let l = c.var_id()?;
                    c.expect(Tok::Colon)?;
                    fields.push((l, ty(c)?));
                    if !c.eat(&Tok::Comma) {
                        break;
                    }
                }
                c.expect(Tok::RBrace)?;
            }
            Ok(TgtType::record(fields))
        }
        _ => Err(c.unexpected(&["type"])),
    }
}

fn expr(c: &mut Cursor) -> Result<TgtExpr, ParseError> {
    match c.peek() {
        Tok::Backslash => {
            c.bump();
            let x = c.var_id()?;
            c.expect(Tok::Colon)?;
            let t = ty(c)?;
            c.expect(Tok::Dot)?;
            Ok(TgtExpr::Lam(x, t, Box::new(expr(c)?)))
        }
        Tok::BigLambda => {
            c.bump();
            let a = c.var_id()?;
            c.expect(Tok::Dot)?;
            Ok(TgtExpr::TyLam(a, Box::new(expr(c)?)))
        }
        Tok::Let => {
            c.bump();
            let x = c.var_id()?;
            c.expect(Tok::Colon)?;
            let t = ty(c)?;
            c.expect(Tok::Equals)?;
            let e1 = expr(c)?;
            c.expect(Tok::In)?;
            let e2 = expr(c)?;
            Ok(TgtExpr::Let(x, t, Box::new(e1), Box::new(e2)))
        }
        _ => app(c),
    }
}

fn starts_atom(c: &Cursor) -> bool {
    matches!(c.peek(), Tok::True | Tok::False | Tok::VarId(_) | Tok::LParen | Tok::LBrace)
}

fn app(c: &mut Cursor) -> Result<TgtExpr, ParseError> {
    let mut e = postfix(c)?;
    loop {
        if c.eat(&Tok::LBracket) {
            let t = ty(c)?;
            c.expect(Tok::RBracket)?;
            e = TgtExpr::tyapp(e, t);
        } else if starts_atom(c) {
            let a = postfix(c)?;
            e = TgtExpr::app(e, a);
        } else {
            return Ok(e);
        }
    }
}

fn postfix(c: &mut Cursor) -> Result<TgtExpr, ParseError> {
    let mut e = atom(c)?;
    while c.eat(&Tok::Dot) {
        let l = c.var_id()?;
        e = TgtExpr::Proj(Box::new(e), l);
    }
    Ok(e)
}

fn atom(c: &mut Cursor) -> Result<TgtExpr, ParseError> {
    match c.peek().clone() {
        Tok::True => {
            c.bump();
            Ok(TgtExpr::True)
        }
        Tok::False => {
            c.bump();
            Ok(TgtExpr::False)
        }
        Tok::VarId(x) => {
            c.bump();
            Ok(TgtExpr::Var(x))
        }
        Tok::LParen => {
            c.bump();
            let e = expr(c)?;
            c.expect(Tok::RParen)?;
            Ok(e)
        }
        Tok::LBrace => {
            c.bump();
            let mut fields = Vec::new();
            if !c.eat(&Tok::RBrace) {
                loop {
                    let l = c.var_id()?;
                    c.expect(Tok::Equals)?;
                    fields.push((l, expr(c)?));
                    if !c.eat(&Tok::Comma) {
                        break;
                    }
                }
                c.expect(Tok::RBrace)?;
            }
            Ok(TgtExpr::record(fields))
        }
        _ => Err(c.unexpected(&["expression"])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for src in [
            "{eq = \\x : Bool. \\y : Bool. True}.eq True False",
            "(/\\a. \\x : a. x) [Bool] True",
            "let d : {l : Bool} = {l = True} in d.l",
            "\\$d_δ1 : {eq : a -> a -> Bool}. $d_δ1.eq",
        ] {
            assert_eq!(parse_tgt_expr(src).unwrap().to_string(), src);
        }
    }

    #[test]
    fn record_types() {
        let t = parse_tgt_type("forall a. {eq : a -> a -> Bool} -> a -> Bool").unwrap();
        assert_eq!(t.to_string(), "forall a. {eq : a -> a -> Bool} -> a -> Bool");
    }
}
